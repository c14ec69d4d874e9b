//! Connected components and the reflection-property deciders.
//!
//! Each property has a check based on connected components and, where the property is
//! defined by pullback preservation, a brute-force oracle that quantifies over the pullback
//! squares directly. Isomorphism with the terminal object is decided by order, and the
//! comparison maps are checked to be bijective homomorphisms.

use crate::enumeration::CorpusLibrary;
use crate::error::{Error, Result};
use crate::limits::{product, pullback_of_maps, terminal};
use crate::reflection::{induced_map, reflect, reflect_closed, ReflectionResult};
use crate::report::{hash_semigroups, Bounds, Property, PropertyReport, ReportBuilder, Witness};
use crate::semigroup::{
    homomorphism_maps, is_homomorphism, is_injective, is_surjective, FiniteSemigroup, Homomorphism,
};
use crate::variety::VarietyConfig;

/// The fiber of the unit `η_C` over a point `m` of `HI(C)`, as a sub-semigroup of `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectedComponent {
    pub parent: FiniteSemigroup,
    pub point: usize,
    pub carrier: FiniteSemigroup,
    /// Inclusion of the carrier into the parent; its map lists the fiber in ascending order.
    pub inclusion: Homomorphism,
}

impl ConnectedComponent {
    pub fn fiber(&self) -> &[usize] {
        self.inclusion.map()
    }
}

/// Points of `HI(C)`, i.e. images of maps from the terminal object.
pub fn points(r: &ReflectionResult) -> Vec<usize> {
    r.image.idempotents()
}

pub(crate) fn component_of(r: &ReflectionResult, m: usize) -> Result<ConnectedComponent> {
    if m >= r.image.order() || !r.image.is_idempotent(m) {
        return Err(Error::NotAPoint { element: m });
    }
    let cone = pullback_of_maps(&r.source, r.unit.map(), &terminal(), &[m]);
    let inclusion = cone.legs[0].clone();
    Ok(ConnectedComponent {
        parent: r.source.clone(),
        point: m,
        carrier: cone.apex,
        inclusion,
    })
}

pub(crate) fn components_of(r: &ReflectionResult) -> Vec<ConnectedComponent> {
    points(r)
        .into_iter()
        .map(|m| component_of(r, m).expect("idempotent points have components"))
        .collect()
}

/// The connected component `C ×_{HI(C)} T` over the point `m`.
pub fn connected_component(
    c: &FiniteSemigroup,
    v: &VarietyConfig,
    m: usize,
) -> Result<ConnectedComponent> {
    component_of(&reflect(c, v)?, m)
}

/// All connected components, one per point of `HI(C)`.
pub fn connected_components(
    c: &FiniteSemigroup,
    v: &VarietyConfig,
) -> Result<Vec<ConnectedComponent>> {
    Ok(components_of(&reflect(c, v)?))
}

/// `HI(A)` is terminal. The empty semigroup is never connected.
pub fn is_connected(a: &FiniteSemigroup, v: &VarietyConfig) -> Result<bool> {
    Ok(reflect(a, v)?.image.order() == 1)
}

/// Connectivity of a limit of domain objects, which lies in the domain.
pub(crate) fn connected_closed(a: &FiniteSemigroup, v: &VarietyConfig) -> bool {
    reflect_closed(a, v).image.order() == 1
}

fn is_bijection(map: &[usize], codomain: usize) -> bool {
    map.len() == codomain && is_injective(map, codomain) && is_surjective(map, codomain)
}

/// `I(f)` for a raw map `f` out of `r.source`, landing in a subvariety object of order
/// `codomain`, is a bijection.
fn reflected_map_bijective(r: &ReflectionResult, f: &[usize], codomain: usize) -> bool {
    r.factor_map(f)
        .is_some_and(|induced| is_bijection(&induced, codomain))
}

// ---------------------------------------------------------------------------------------------
// Semi-left-exactness

pub(crate) fn sle_from_reflection(
    r: &ReflectionResult,
    v: &VarietyConfig,
    report: &mut ReportBuilder,
) {
    for comp in components_of(r) {
        let ok = connected_closed(&comp.carrier, v);
        report.record(ok, || Witness::DisconnectedComponent {
            semigroup: r.source.rows(),
            point: comp.point,
            fiber: comp.fiber().to_vec(),
            reflection_order: reflect_closed(&comp.carrier, v).image.order(),
        });
    }
}

/// Semi-left-exactness at `C`: every connected component of `C` is connected.
pub fn check_semi_left_exact(c: &FiniteSemigroup, v: &VarietyConfig) -> Result<PropertyReport> {
    let r = reflect(c, v)?;
    let mut report = ReportBuilder::new(v, Property::SemiLeftExact);
    sle_from_reflection(&r, v, &mut report);
    Ok(report.finish(hash_semigroups([c])))
}

/// `I` preserves the pullback of `η_C` along `g: D → HI(C)`: the comparison
/// `I(C ×_{HI(C)} D) → I(D)` induced by the second projection is bijective.
fn unit_square_ok(
    rc: &ReflectionResult,
    rd: &ReflectionResult,
    g: &[usize],
    v: &VarietyConfig,
) -> bool {
    let cone = pullback_of_maps(&rc.source, rc.unit.map(), &rd.source, g);
    let rp = reflect_closed(&cone.apex, v);
    let to_reflection: Vec<usize> = cone
        .element_labels
        .iter()
        .map(|&(_, d)| rd.unit.apply(d))
        .collect();
    reflected_map_bijective(&rp, &to_reflection, rd.image.order())
}

/// Replays one unit square: `map: corner → HI(c)` must be a homomorphism.
pub fn unit_square_preserved(
    c: &FiniteSemigroup,
    corner: &FiniteSemigroup,
    map: &[usize],
    v: &VarietyConfig,
) -> Result<bool> {
    let rc = reflect(c, v)?;
    let rd = reflect(corner, v)?;
    if map.len() != corner.order()
        || map.iter().any(|&x| x >= rc.image.order())
        || !is_homomorphism(map, corner, &rc.image)
    {
        return Err(Error::NotAHomomorphism(format!("{map:?}")));
    }
    Ok(unit_square_ok(&rc, &rd, map, v))
}

fn unit_square_sweep(
    rc: &ReflectionResult,
    corners: &[&FiniteSemigroup],
    v: &VarietyConfig,
    report: &mut ReportBuilder,
) {
    for corner in corners {
        let rd = reflect_closed(corner, v);
        for g in homomorphism_maps(corner, &rc.image) {
            let ok = unit_square_ok(rc, &rd, &g, v);
            report.record(ok, || Witness::UnpreservedUnitSquare {
                semigroup: rc.source.rows(),
                corner: corner.rows(),
                map: g.clone(),
            });
        }
    }
}

/// Definitional check: `I` preserves every pullback of `η_C` along `g: M → HI(C)` with `M`
/// in the subvariety and `|M| <= max_m_order`.
pub fn oracle_semi_left_exact(
    c: &FiniteSemigroup,
    v: &VarietyConfig,
    library: &CorpusLibrary,
    max_m_order: usize,
) -> Result<PropertyReport> {
    let rc = reflect(c, v)?;
    let corners = library.members_where(max_m_order, |m| v.in_subvariety(m))?;
    let mut report = ReportBuilder::new(v, Property::SemiLeftExact).bounds(Bounds {
        max_m_order: Some(max_m_order),
        mode: Some("unit_squares".into()),
        ..Bounds::default()
    });
    unit_square_sweep(&rc, &corners, v, &mut report);
    Ok(report.finish(hash_semigroups([c])))
}

/// Definitional check in the right-edge form: `I` preserves every pullback of
/// `f: C → N` and `g: M → N` with `M, N` in the subvariety, both of order at most the bound.
pub fn oracle_semi_left_exact_right_edge(
    c: &FiniteSemigroup,
    v: &VarietyConfig,
    library: &CorpusLibrary,
    max_m_order: usize,
) -> Result<PropertyReport> {
    let rc = reflect(c, v)?;
    let subvariety = library.members_where(max_m_order, |m| v.in_subvariety(m))?;
    let mut report = ReportBuilder::new(v, Property::SemiLeftExact).bounds(Bounds {
        max_m_order: Some(max_m_order),
        mode: Some("right_edge".into()),
        ..Bounds::default()
    });
    for base in &subvariety {
        let rn = reflect_closed(base, v);
        for corner in &subvariety {
            let rm = reflect_closed(corner, v);
            cospan_sweep(&rc, &rm, &rn, v, &mut report);
        }
    }
    Ok(report.finish(hash_semigroups([c])))
}

// ---------------------------------------------------------------------------------------------
// Stable units

/// Stable units at the pair `(C, D)`: every product of a component of `C` with a component of
/// `D` is connected.
pub fn check_stable_units_pair(
    c: &FiniteSemigroup,
    d: &FiniteSemigroup,
    v: &VarietyConfig,
) -> Result<PropertyReport> {
    let rc = reflect(c, v)?;
    let rd = reflect(d, v)?;
    let mut report = ReportBuilder::new(v, Property::StableUnits);
    let (left, right) = (components_of(&rc), components_of(&rd));
    for l in &left {
        for r in &right {
            let prod = product(&l.carrier, &r.carrier);
            let reflected = reflect_closed(&prod.apex, v).image.order();
            report.record(reflected == 1, || Witness::DisconnectedProduct {
                left: c.rows(),
                right: d.rows(),
                left_point: l.point,
                right_point: r.point,
                reflection_order: reflected,
            });
        }
    }
    Ok(report.finish(hash_semigroups([c, d])))
}

/// Stable units at `C` relative to the corpus: every component of `C` is connected, and its
/// product with every connected component of every domain object `D`, `|D| <= max_d_order`,
/// is connected. This is the per-object counterpart of [`oracle_stable_units`].
pub fn check_stable_units_relative(
    c: &FiniteSemigroup,
    v: &VarietyConfig,
    library: &CorpusLibrary,
    max_d_order: usize,
) -> Result<PropertyReport> {
    let rc = reflect(c, v)?;
    let others = library.members_where(max_d_order, |d| v.in_domain(d))?;
    let mut report = ReportBuilder::new(v, Property::StableUnits).bounds(Bounds {
        max_d_order: Some(max_d_order),
        mode: Some("relative".into()),
        ..Bounds::default()
    });
    sle_from_reflection(&rc, v, &mut report);
    let left = components_of(&rc);
    for d in others {
        let rd = reflect_closed(d, v);
        for r in components_of(&rd) {
            if !connected_closed(&r.carrier, v) {
                continue;
            }
            for l in &left {
                let prod = product(&l.carrier, &r.carrier);
                let reflected = reflect_closed(&prod.apex, v).image.order();
                report.record(reflected == 1, || Witness::DisconnectedProduct {
                    left: c.rows(),
                    right: d.rows(),
                    left_point: l.point,
                    right_point: r.point,
                    reflection_order: reflected,
                });
            }
        }
    }
    Ok(report.finish(hash_semigroups([c])))
}

/// Definitional check: `I` preserves every pullback of `η_C` along `g: D → HI(C)` for `D` in
/// the domain with `|D| <= max_d_order`.
pub fn oracle_stable_units(
    c: &FiniteSemigroup,
    v: &VarietyConfig,
    library: &CorpusLibrary,
    max_d_order: usize,
) -> Result<PropertyReport> {
    let rc = reflect(c, v)?;
    let corners = library.members_where(max_d_order, |d| v.in_domain(d))?;
    let mut report = ReportBuilder::new(v, Property::StableUnits).bounds(Bounds {
        max_d_order: Some(max_d_order),
        mode: Some("unit_squares".into()),
        ..Bounds::default()
    });
    unit_square_sweep(&rc, &corners, v, &mut report);
    Ok(report.finish(hash_semigroups([c])))
}

/// Definitional check in the subvariety-corner form: `I` preserves every pullback of
/// `f: C → N` and `g: D → N` with `N` in the subvariety and `D` in the domain.
pub fn oracle_stable_units_subvariety_corner(
    c: &FiniteSemigroup,
    v: &VarietyConfig,
    library: &CorpusLibrary,
    max_d_order: usize,
) -> Result<PropertyReport> {
    let rc = reflect(c, v)?;
    let bases = library.members_where(max_d_order, |n| v.in_subvariety(n))?;
    let corners = library.members_where(max_d_order, |d| v.in_domain(d))?;
    let mut report = ReportBuilder::new(v, Property::StableUnits).bounds(Bounds {
        max_d_order: Some(max_d_order),
        mode: Some("subvariety_corner".into()),
        ..Bounds::default()
    });
    for base in &bases {
        let rn = reflect_closed(base, v);
        for corner in &corners {
            let rd = reflect_closed(corner, v);
            cospan_sweep(&rc, &rd, &rn, v, &mut report);
        }
    }
    Ok(report.finish(hash_semigroups([c])))
}

// ---------------------------------------------------------------------------------------------
// Pullback preservation and localization

/// The comparison `I(A ×_C B) → HI(A) ×_{HI(C)} HI(B)` is bijective.
pub(crate) fn pullback_preserved_with(
    ra: &ReflectionResult,
    f: &[usize],
    rb: &ReflectionResult,
    g: &[usize],
    rc: &ReflectionResult,
    v: &VarietyConfig,
) -> bool {
    let cone = pullback_of_maps(&ra.source, f, &rb.source, g);
    let hf = induced_map(ra, rc, f);
    let hg = induced_map(rb, rc, g);
    let reflected = pullback_of_maps(&ra.image, &hf, &rb.image, &hg);
    let rp = reflect_closed(&cone.apex, v);
    let comparison: Vec<usize> = cone
        .element_labels
        .iter()
        .map(|&(a, b)| {
            reflected
                .index_of(ra.unit.apply(a), rb.unit.apply(b))
                .expect("units commute with the reflected cospan")
        })
        .collect();
    reflected_map_bijective(&rp, &comparison, reflected.apex.order())
}

/// All cospans `ra.source → rc.source ← rb.source`.
fn cospan_sweep(
    ra: &ReflectionResult,
    rb: &ReflectionResult,
    rc: &ReflectionResult,
    v: &VarietyConfig,
    report: &mut ReportBuilder,
) {
    let gs = homomorphism_maps(&rb.source, &rc.source);
    for f in homomorphism_maps(&ra.source, &rc.source) {
        for g in &gs {
            let ok = pullback_preserved_with(ra, &f, rb, g, rc, v);
            report.record(ok, || Witness::UnpreservedPullback {
                left: ra.source.rows(),
                right: rb.source.rows(),
                base: rc.source.rows(),
                left_map: f.clone(),
                right_map: g.clone(),
            });
        }
    }
}

fn require_cospan(f: &Homomorphism, g: &Homomorphism) -> Result<()> {
    if f.target() != g.target() {
        return Err(Error::NotAHomomorphism(
            "cospan legs must share a codomain".into(),
        ));
    }
    Ok(())
}

/// Whether `I` preserves the pullback of `f: A → C` and `g: B → C`.
pub fn oracle_pullback_preserved(
    f: &Homomorphism,
    g: &Homomorphism,
    v: &VarietyConfig,
) -> Result<PropertyReport> {
    require_cospan(f, g)?;
    let ra = reflect(f.source(), v)?;
    let rb = reflect(g.source(), v)?;
    let rc = reflect(f.target(), v)?;
    let mut report = ReportBuilder::new(v, Property::LeftExactOracle);
    let ok = pullback_preserved_with(&ra, f.map(), &rb, g.map(), &rc, v);
    report.record(ok, || Witness::UnpreservedPullback {
        left: f.source().rows(),
        right: g.source().rows(),
        base: f.target().rows(),
        left_map: f.map().to_vec(),
        right_map: g.map().to_vec(),
    });
    Ok(report.finish(hash_semigroups([f.source(), g.source(), f.target()])))
}

/// Pullback of `f ∘ incl_μ` and `g ∘ incl_ν` for two components.
fn component_pullback_order(
    left: &ConnectedComponent,
    f: &[usize],
    right: &ConnectedComponent,
    g: &[usize],
    v: &VarietyConfig,
) -> (usize, bool) {
    let fl: Vec<usize> = left.fiber().iter().map(|&a| f[a]).collect();
    let gr: Vec<usize> = right.fiber().iter().map(|&b| g[b]).collect();
    let cone = pullback_of_maps(&left.carrier, &fl, &right.carrier, &gr);
    (cone.apex.order(), connected_closed(&cone.apex, v))
}

pub(crate) fn localization_with(
    ra: &ReflectionResult,
    f: &[usize],
    rb: &ReflectionResult,
    g: &[usize],
    base: &FiniteSemigroup,
    v: &VarietyConfig,
    report: &mut ReportBuilder,
) {
    let right = components_of(rb);
    for l in components_of(ra) {
        for r in &right {
            let (apex_order, ok) = component_pullback_order(&l, f, r, g, v);
            report.record(ok, || Witness::DisconnectedComponentPullback {
                left: ra.source.rows(),
                right: rb.source.rows(),
                base: base.rows(),
                left_map: f.to_vec(),
                right_map: g.to_vec(),
                left_point: l.point,
                right_point: r.point,
                apex_order,
            });
        }
    }
}

/// Sufficient condition for `I` to preserve this pullback: every pullback of a component of
/// `A` with a component of `B` over `C` is connected.
pub fn check_localization_condition(
    f: &Homomorphism,
    g: &Homomorphism,
    v: &VarietyConfig,
) -> Result<PropertyReport> {
    require_cospan(f, g)?;
    let ra = reflect(f.source(), v)?;
    let rb = reflect(g.source(), v)?;
    if !v.in_domain(f.target()) {
        return Err(Error::NotInDomain(v.name().to_string()));
    }
    let mut report = ReportBuilder::new(v, Property::LocalizationSufficient);
    localization_with(&ra, f.map(), &rb, g.map(), f.target(), v, &mut report);
    Ok(report.finish(hash_semigroups([f.source(), g.source(), f.target()])))
}

/// Replays a single component pair of [`check_localization_condition`].
pub fn component_pullback_connected(
    f: &Homomorphism,
    g: &Homomorphism,
    left_point: usize,
    right_point: usize,
    v: &VarietyConfig,
) -> Result<bool> {
    require_cospan(f, g)?;
    let l = connected_component(f.source(), v, left_point)?;
    let r = connected_component(g.source(), v, right_point)?;
    Ok(component_pullback_order(&l, f.map(), &r, g.map(), v).1)
}

// ---------------------------------------------------------------------------------------------
// Simple reflections and products

/// `I(w)` is bijective, where `w: A → B ×_{HI(B)} HI(A)` is `a ↦ (f(a), η_A(a))`.
pub(crate) fn simple_with(
    ra: &ReflectionResult,
    rb: &ReflectionResult,
    f: &[usize],
    v: &VarietyConfig,
) -> bool {
    let hf = induced_map(ra, rb, f);
    let cone = pullback_of_maps(&rb.source, rb.unit.map(), &ra.image, &hf);
    let rp = reflect_closed(&cone.apex, v);
    let w_then_unit: Vec<usize> = ra
        .source
        .elements()
        .map(|a| {
            let p = cone
                .index_of(f[a], ra.unit.apply(a))
                .expect("w lands in the pullback");
            rp.unit.apply(p)
        })
        .collect();
    reflected_map_bijective(ra, &w_then_unit, rp.image.order())
}

/// Simplicity at the morphism `f`.
pub fn check_simple(f: &Homomorphism, v: &VarietyConfig) -> Result<PropertyReport> {
    let ra = reflect(f.source(), v)?;
    let rb = reflect(f.target(), v)?;
    let mut report = ReportBuilder::new(v, Property::Simple);
    let ok = simple_with(&ra, &rb, f.map(), v);
    report.record(ok, || Witness::NonSimpleMorphism {
        source: f.source().rows(),
        target: f.target().rows(),
        map: f.map().to_vec(),
    });
    Ok(report.finish(hash_semigroups([f.source(), f.target()])))
}

/// Simplicity of every morphism `f: A → X` with `A` a domain object of order at most
/// `max_order`. With condition (e) this holds exactly when `X` is semi-left-exact: a point of a
/// disconnected component, seen as a map from `T`, is never simple.
pub fn check_simple_incoming(
    x: &FiniteSemigroup,
    v: &VarietyConfig,
    library: &CorpusLibrary,
    max_order: usize,
) -> Result<PropertyReport> {
    let rx = reflect(x, v)?;
    let sources = library.members_where(max_order, |a| v.in_domain(a))?;
    let mut report = ReportBuilder::new(v, Property::Simple).bounds(Bounds {
        max_order: Some(max_order),
        mode: Some("incoming".into()),
        ..Bounds::default()
    });
    for a in sources {
        let ra = reflect_closed(a, v);
        for f in homomorphism_maps(a, x) {
            let ok = simple_with(&ra, &rx, &f, v);
            report.record(ok, || Witness::NonSimpleMorphism {
                source: a.rows(),
                target: x.rows(),
                map: f.clone(),
            });
        }
    }
    Ok(report.finish(hash_semigroups([x])))
}

/// The comparison `I(C × D) → I(C) × I(D)` is bijective.
pub fn check_products_preserved(
    c: &FiniteSemigroup,
    d: &FiniteSemigroup,
    v: &VarietyConfig,
) -> Result<bool> {
    let rc = reflect(c, v)?;
    let rd = reflect(d, v)?;
    Ok(products_preserved_with(&rc, &rd, v))
}

pub(crate) fn products_preserved_with(
    rc: &ReflectionResult,
    rd: &ReflectionResult,
    v: &VarietyConfig,
) -> bool {
    let prod = product(&rc.source, &rd.source);
    let images = product(&rc.image, &rd.image);
    let rp = reflect_closed(&prod.apex, v);
    let comparison: Vec<usize> = prod
        .element_labels
        .iter()
        .map(|&(a, b)| {
            images
                .index_of(rc.unit.apply(a), rd.unit.apply(b))
                .expect("product of images contains every pair")
        })
        .collect();
    reflected_map_bijective(&rp, &comparison, images.apex.order())
}

// ---------------------------------------------------------------------------------------------
// The set-level lemma

/// For surjections `f: A → B` and `g: B → C` (`|B| = b`, `|C| = c`), compares
/// "`g` is injective" with "for every `z` in `C`, `f` is constant on `(g∘f)⁻¹(z)`".
///
/// Returns whether the two sides agree, which they always should.
pub fn fiber_injectivity_lemma(f: &[usize], b: usize, g: &[usize], c: usize) -> Result<bool> {
    if g.len() != b || f.iter().any(|&x| x >= b) || g.iter().any(|&y| y >= c) {
        return Err(Error::NotSurjective);
    }
    if !is_surjective(f, b) || !is_surjective(g, c) {
        return Err(Error::NotSurjective);
    }
    let injective = is_injective(g, c);
    let mut fiber_image: Vec<Option<usize>> = vec![None; c];
    let mut fibers_are_points = true;
    for &fa in f {
        let z = g[fa];
        match fiber_image[z] {
            None => fiber_image[z] = Some(fa),
            Some(prev) if prev != fa => fibers_are_points = false,
            Some(_) => {}
        }
    }
    Ok(injective == fibers_are_points)
}
