//! Corpus-wide sweeps of the property checks.
//!
//! Members are visited in corpus order (by order, then canonical table), so two runs with the
//! same parameters produce identical reports.

use std::collections::{BTreeMap, HashMap};

use crate::enumeration::{CorpusLibrary, MAX_ENUMERATION_ORDER};
use crate::error::{Error, Result};
use crate::galois::{
    components_of, localization_with, oracle_semi_left_exact, oracle_stable_units,
    pullback_preserved_with, simple_with, sle_from_reflection, ConnectedComponent,
};
use crate::limits::product;
use crate::reflection::{check_condition_e, reflect_closed, ReflectionResult};
use crate::report::{Bounds, Property, PropertyReport, ReportBuilder, ReportDocument, Witness};
use crate::semigroup::{homomorphism_maps, FiniteSemigroup};
use crate::variety::VarietyConfig;

pub const DEFAULT_ORACLE_BOUND: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyOptions {
    /// Also run the definitional oracles and record agreement.
    pub oracle: bool,
    /// Bound on subvariety objects `M` for the semi-left-exactness oracle.
    pub max_m_order: usize,
    /// Bound on domain objects `D` for the stable-units oracle.
    pub max_d_order: usize,
    /// Bound on the objects of morphisms and cospans (simple, localization, left-exact).
    pub max_morphism_order: usize,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            oracle: false,
            max_m_order: DEFAULT_ORACLE_BOUND,
            max_d_order: DEFAULT_ORACLE_BOUND,
            max_morphism_order: DEFAULT_ORACLE_BOUND,
        }
    }
}

struct Member {
    reflection: ReflectionResult,
    components: Vec<ConnectedComponent>,
}

struct Survey<'a> {
    v: &'a VarietyConfig,
    library: &'a CorpusLibrary,
    max_order: usize,
    options: &'a SurveyOptions,
    members: Vec<Member>,
}

impl Survey<'_> {
    fn within(&self, bound: usize) -> impl Iterator<Item = &Member> {
        self.members
            .iter()
            .filter(move |m| m.reflection.source.order() <= bound)
    }

    fn morphism_bound(&self) -> usize {
        self.options.max_morphism_order.min(self.max_order)
    }

    fn semi_left_exact(&self) -> Result<PropertyReport> {
        let mut report = ReportBuilder::new(self.v, Property::SemiLeftExact).bounds(Bounds {
            max_order: Some(self.max_order),
            max_m_order: self.options.oracle.then_some(self.options.max_m_order),
            ..Bounds::default()
        });
        let mut agreement = true;
        for m in &self.members {
            let before = report.failures();
            sle_from_reflection(&m.reflection, self.v, &mut report);
            if self.options.oracle {
                let theorem = report.failures() == before;
                let oracle = oracle_semi_left_exact(
                    &m.reflection.source,
                    self.v,
                    self.library,
                    self.options.max_m_order,
                )?;
                agreement &= theorem == oracle.verdict;
            }
        }
        let mut out = report.finish(self.library.hash(self.max_order));
        out.oracle_agreement = self.options.oracle.then_some(agreement);
        Ok(out)
    }

    fn stable_units(&self) -> Result<PropertyReport> {
        let mut report = ReportBuilder::new(self.v, Property::StableUnits).bounds(Bounds {
            max_order: Some(self.max_order),
            max_d_order: self.options.oracle.then_some(self.options.max_d_order),
            ..Bounds::default()
        });
        // Connectivity of a product only depends on the isomorphism classes of the factors.
        let mut classes: BTreeMap<FiniteSemigroup, usize> = BTreeMap::new();
        let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(self.members.len());
        for m in &self.members {
            let ids = m
                .components
                .iter()
                .map(|c| {
                    let canon = c.carrier.canonical_form().expect("components are small");
                    let next = classes.len();
                    *classes.entry(canon).or_insert(next)
                })
                .collect();
            class_of.push(ids);
        }
        let mut reps: Vec<Option<&FiniteSemigroup>> = vec![None; classes.len()];
        for (s, &i) in &classes {
            reps[i] = Some(s);
        }
        let mut memo: HashMap<(usize, usize), usize> = HashMap::new();
        let mut reflected_order = |i: usize, j: usize| -> usize {
            *memo.entry((i, j)).or_insert_with(|| {
                let (a, b) = (reps[i].unwrap(), reps[j].unwrap());
                reflect_closed(&product(a, b).apex, self.v).image.order()
            })
        };
        for (ci, c) in self.members.iter().enumerate() {
            for (di, d) in self.members.iter().enumerate() {
                for (l, &lc) in c.components.iter().zip(&class_of[ci]) {
                    for (r, &rc) in d.components.iter().zip(&class_of[di]) {
                        let order = reflected_order(lc, rc);
                        report.record(order == 1, || Witness::DisconnectedProduct {
                            left: c.reflection.source.rows(),
                            right: d.reflection.source.rows(),
                            left_point: l.point,
                            right_point: r.point,
                            reflection_order: order,
                        });
                    }
                }
            }
        }
        let theorem = report.failures() == 0;
        let mut agreement = None;
        if self.options.oracle {
            let mut oracle = true;
            for m in &self.members {
                oracle &= oracle_stable_units(
                    &m.reflection.source,
                    self.v,
                    self.library,
                    self.options.max_d_order,
                )?
                .verdict;
            }
            agreement = Some(theorem == oracle);
        }
        let mut out = report.finish(self.library.hash(self.max_order));
        out.oracle_agreement = agreement;
        Ok(out)
    }

    fn simple(&self) -> Result<PropertyReport> {
        let bound = self.morphism_bound();
        let mut report = ReportBuilder::new(self.v, Property::Simple).bounds(Bounds {
            max_order: Some(bound),
            ..Bounds::default()
        });
        for a in self.within(bound) {
            for b in self.within(bound) {
                let (ra, rb) = (&a.reflection, &b.reflection);
                for f in homomorphism_maps(&ra.source, &rb.source) {
                    let ok = simple_with(ra, rb, &f, self.v);
                    report.record(ok, || Witness::NonSimpleMorphism {
                        source: ra.source.rows(),
                        target: rb.source.rows(),
                        map: f.clone(),
                    });
                }
            }
        }
        let mut agreement = None;
        if self.options.oracle {
            // With condition (e) on every member, all morphisms are simple exactly when every
            // member is semi-left-exact.
            let mut condition_e = true;
            let mut sle = true;
            for m in self.within(bound) {
                condition_e &= check_condition_e(&m.reflection.source, self.v)?;
                sle &= m
                    .components
                    .iter()
                    .all(|c| reflect_closed(&c.carrier, self.v).image.order() == 1);
            }
            if condition_e {
                agreement = Some((report.failures() == 0) == sle);
            }
        }
        let mut out = report.finish(self.library.hash(bound));
        out.oracle_agreement = agreement;
        Ok(out)
    }

    /// Calls `visit(a, f, b, g, c)` for every cospan `a →f c ←g b` of members within `bound`.
    fn for_each_cospan(
        &self,
        mut visit: impl FnMut(&Member, &[usize], &Member, &[usize], &Member),
    ) {
        let bound = self.morphism_bound();
        for c in self.within(bound) {
            let legs: Vec<(&Member, Vec<usize>)> = self
                .within(bound)
                .flat_map(|a| {
                    homomorphism_maps(&a.reflection.source, &c.reflection.source)
                        .into_iter()
                        .map(move |f| (a, f))
                })
                .collect();
            for (a, f) in &legs {
                for (b, g) in &legs {
                    visit(a, f, b, g, c);
                }
            }
        }
    }

    fn localization(&self) -> Result<PropertyReport> {
        let bound = self.morphism_bound();
        let mut report =
            ReportBuilder::new(self.v, Property::LocalizationSufficient).bounds(Bounds {
                max_order: Some(bound),
                ..Bounds::default()
            });
        let mut implication = true;
        self.for_each_cospan(|a, f, b, g, c| {
            let before = report.failures();
            localization_with(
                &a.reflection,
                f,
                &b.reflection,
                g,
                &c.reflection.source,
                self.v,
                &mut report,
            );
            if self.options.oracle && report.failures() == before {
                implication &= pullback_preserved_with(
                    &a.reflection,
                    f,
                    &b.reflection,
                    g,
                    &c.reflection,
                    self.v,
                );
            }
        });
        let mut out = report.finish(self.library.hash(bound));
        out.oracle_agreement = self.options.oracle.then_some(implication);
        Ok(out)
    }

    fn left_exact(&self) -> Result<PropertyReport> {
        let bound = self.morphism_bound();
        let mut report = ReportBuilder::new(self.v, Property::LeftExactOracle).bounds(Bounds {
            max_order: Some(bound),
            ..Bounds::default()
        });
        self.for_each_cospan(|a, f, b, g, c| {
            let ok =
                pullback_preserved_with(&a.reflection, f, &b.reflection, g, &c.reflection, self.v);
            report.record(ok, || Witness::UnpreservedPullback {
                left: a.reflection.source.rows(),
                right: b.reflection.source.rows(),
                base: c.reflection.source.rows(),
                left_map: f.to_vec(),
                right_map: g.to_vec(),
            });
        });
        Ok(report.finish(self.library.hash(bound)))
    }
}

/// Runs the requested checks over every domain member of the corpus up to `max_order`.
pub fn survey(
    v: &VarietyConfig,
    library: &CorpusLibrary,
    max_order: usize,
    properties: &[Property],
    options: &SurveyOptions,
) -> Result<ReportDocument> {
    if max_order > MAX_ENUMERATION_ORDER {
        return Err(Error::OrderTooLarge {
            order: max_order,
            bound: MAX_ENUMERATION_ORDER,
        });
    }
    let members = library
        .members_where(max_order, |s| v.in_domain(s))?
        .into_iter()
        .map(|s| {
            let reflection = reflect_closed(s, v);
            let components = components_of(&reflection);
            Member {
                reflection,
                components,
            }
        })
        .collect();
    if options.oracle {
        library.members(options.max_m_order.max(options.max_d_order))?;
    }
    let s = Survey {
        v,
        library,
        max_order,
        options,
        members,
    };
    let mut properties = properties.to_vec();
    properties.sort();
    properties.dedup();
    let reports = properties
        .iter()
        .map(|p| match p {
            Property::SemiLeftExact => s.semi_left_exact(),
            Property::StableUnits => s.stable_units(),
            Property::Simple => s.simple(),
            Property::LocalizationSufficient => s.localization(),
            Property::LeftExactOracle => s.left_exact(),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReportDocument::new(
        v,
        library.hash(max_order),
        library.summaries(max_order),
        reports,
    ))
}
