//! The reflector `I` of a variety onto a subvariety, realized as a literal quotient.
//!
//! `HI(C)` is the quotient of `C` by the least congruence whose quotient satisfies the
//! subvariety identities, and the unit `η_C` is the projection. Reflecting an object that
//! already lies in the subvariety returns the same table with the identity unit, so the
//! counit `IH = 1` holds on the nose.

use serde::Serialize;

use crate::congruence::{congruence_closure, quotient, Partition};
use crate::error::{Error, Result};
use crate::limits::{product, pullback_of_maps};
use crate::semigroup::{homomorphism_maps, is_homomorphism, FiniteSemigroup, Homomorphism};
use crate::variety::VarietyConfig;

/// `C`, `HI(C)` and the unit `η_C: C → HI(C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionResult {
    pub source: FiniteSemigroup,
    pub image: FiniteSemigroup,
    pub unit: Homomorphism,
}

impl ReflectionResult {
    /// Blocks of the unit, i.e. the fibers of `η_C`, indexed by point of `HI(C)`.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.image.order()];
        for (c, &m) in self.unit.map().iter().enumerate() {
            fibers[m].push(c);
        }
        fibers
    }

    /// The map `h̄: HI(C) → target` with `h̄ ∘ η_C = h`, if `h` is constant on the fibers.
    pub fn factor_map(&self, h: &[usize]) -> Option<Vec<usize>> {
        let mut out = vec![usize::MAX; self.image.order()];
        for (c, &m) in self.unit.map().iter().enumerate() {
            if out[m] == usize::MAX {
                out[m] = h[c];
            } else if out[m] != h[c] {
                return None;
            }
        }
        Some(out)
    }
}

/// Least congruence on `a` whose quotient satisfies the subvariety identities.
pub fn variety_congruence(a: &FiniteSemigroup, v: &VarietyConfig) -> Result<Partition> {
    if !v.in_domain(a) {
        return Err(Error::NotInDomain(v.name().to_string()));
    }
    Ok(variety_congruence_unchecked(a, v))
}

fn variety_congruence_unchecked(a: &FiniteSemigroup, v: &VarietyConfig) -> Partition {
    let pairs = v
        .subvariety_identities()
        .iter()
        .flat_map(|id| id.instances(a))
        .filter(|(l, r)| l != r);
    congruence_closure(a, pairs)
}

/// `HI(a)` with its unit.
pub fn reflect(a: &FiniteSemigroup, v: &VarietyConfig) -> Result<ReflectionResult> {
    let congruence = variety_congruence(a, v)?;
    let (image, unit) = quotient(a, &congruence)?;
    debug_assert!(v.in_subvariety(&image));
    Ok(ReflectionResult {
        source: a.clone(),
        image,
        unit,
    })
}

/// Reflection of an object that may lie outside the domain (e.g. a pullback of domain
/// objects). Varieties are closed under limits, so callers use this only on such objects.
pub(crate) fn reflect_closed(a: &FiniteSemigroup, v: &VarietyConfig) -> ReflectionResult {
    let congruence = variety_congruence_unchecked(a, v);
    let (image, unit) = quotient(a, &congruence).expect("closure output is a congruence");
    ReflectionResult {
        source: a.clone(),
        image,
        unit,
    }
}

/// `HI(f)` between two already computed reflections, for the raw map `f`.
pub(crate) fn induced_map(
    from: &ReflectionResult,
    to: &ReflectionResult,
    f: &[usize],
) -> Vec<usize> {
    let composite: Vec<usize> = f.iter().map(|&b| to.unit.apply(b)).collect();
    let induced = from
        .factor_map(&composite)
        .expect("the unit of a reflection is universal");
    debug_assert!(is_homomorphism(&induced, &from.image, &to.image));
    induced
}

/// The unique `HI(f): HI(A) → HI(B)` with `HI(f) ∘ η_A = η_B ∘ f`.
pub fn reflect_morphism(f: &Homomorphism, v: &VarietyConfig) -> Result<Homomorphism> {
    let from = reflect(f.source(), v)?;
    let to = reflect(f.target(), v)?;
    let map = induced_map(&from, &to, f.map());
    Ok(Homomorphism::new(from.image, to.image, map)
        .expect("induced map between reflections is a homomorphism"))
}

/// The unique `h̄: HI(C) → M` with `h̄ ∘ η_C = h`, for `M` in the subvariety.
pub fn factor_through_unit(h: &Homomorphism, v: &VarietyConfig) -> Result<Homomorphism> {
    if !v.in_subvariety(h.target()) {
        return Err(Error::NotInSubvariety(v.name().to_string()));
    }
    let r = reflect(h.source(), v)?;
    let map = r
        .factor_map(h.map())
        .expect("maps into the subvariety factor through the unit");
    Ok(Homomorphism::new(r.image, h.target().clone(), map)
        .expect("factorization of a homomorphism is a homomorphism"))
}

/// Every element of `HI(C)` is the image of an idempotent of `C`.
pub fn check_condition_e(c: &FiniteSemigroup, v: &VarietyConfig) -> Result<bool> {
    let r = reflect(c, v)?;
    let mut hit = vec![false; r.image.order()];
    for e in c.idempotents() {
        hit[r.unit.apply(e)] = true;
    }
    Ok(hit.into_iter().all(|h| h))
}

/// One of the ground conditions (a)–(d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundCondition {
    /// The element-set functor preserves products and pullbacks.
    LeftExact,
    /// Bijective homomorphisms between subvariety members are isomorphisms.
    ReflectsIsomorphisms,
    /// Units are surjective.
    SurjectiveUnits,
    /// Every element of a subvariety member is picked by a map from the terminal object.
    PointsSurject,
}

impl GroundCondition {
    pub fn letter(self) -> char {
        match self {
            GroundCondition::LeftExact => 'a',
            GroundCondition::ReflectsIsomorphisms => 'b',
            GroundCondition::SurjectiveUnits => 'c',
            GroundCondition::PointsSurject => 'd',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroundWitness {
    pub semigroups: Vec<Vec<Vec<usize>>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub condition: GroundCondition,
    pub holds: bool,
    pub checked: usize,
    pub witnesses: Vec<GroundWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroundReport {
    pub variety: String,
    pub corpus_size: usize,
    pub conditions: Vec<ConditionVerdict>,
}

impl GroundReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn verdict(&self, condition: GroundCondition) -> &ConditionVerdict {
        self.conditions
            .iter()
            .find(|c| c.condition == condition)
            .expect("all four conditions are reported")
    }
}

struct Tally {
    condition: GroundCondition,
    checked: usize,
    witnesses: Vec<GroundWitness>,
}

impl Tally {
    fn new(condition: GroundCondition) -> Self {
        Tally {
            condition,
            checked: 0,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> GroundWitness) {
        self.checked += 1;
        if !ok {
            self.witnesses.push(witness());
        }
    }

    fn finish(self) -> ConditionVerdict {
        ConditionVerdict {
            condition: self.condition,
            holds: self.witnesses.is_empty(),
            checked: self.checked,
            witnesses: self.witnesses,
        }
    }
}

/// Checks (a)–(d) over the members of `corpus` that lie in the domain of `v`.
pub fn check_ground_conditions(v: &VarietyConfig, corpus: &[FiniteSemigroup]) -> GroundReport {
    let members: Vec<&FiniteSemigroup> = corpus.iter().filter(|c| v.in_domain(c)).collect();
    let reflections: Vec<ReflectionResult> = members.iter().map(|c| reflect_closed(c, v)).collect();
    let subvariety: Vec<&FiniteSemigroup> = members
        .iter()
        .copied()
        .filter(|c| v.in_subvariety(c))
        .collect();

    let mut a = Tally::new(GroundCondition::LeftExact);
    for x in &members {
        for y in &members {
            let cone = product(x, y);
            let expected: Vec<(usize, usize)> = x
                .elements()
                .flat_map(|i| y.elements().map(move |j| (i, j)))
                .collect();
            a.record(cone.element_labels == expected, || GroundWitness {
                semigroups: vec![x.rows(), y.rows()],
                detail: "product is not the cartesian product".into(),
            });
        }
    }
    for r in &reflections {
        let unit = r.unit.map();
        let cone = pullback_of_maps(&r.source, unit, &r.source, unit);
        let expected: Vec<(usize, usize)> = r
            .source
            .elements()
            .flat_map(|i| r.source.elements().map(move |j| (i, j)))
            .filter(|&(i, j)| unit[i] == unit[j])
            .collect();
        a.record(cone.element_labels == expected, || GroundWitness {
            semigroups: vec![r.source.rows()],
            detail: "kernel pair of the unit is not the fiber product".into(),
        });
    }

    let mut b = Tally::new(GroundCondition::ReflectsIsomorphisms);
    for m in &subvariety {
        for n in subvariety.iter().filter(|n| n.order() == m.order()) {
            for map in homomorphism_maps(m, n) {
                let h = Homomorphism::from_trusted((*m).clone(), (*n).clone(), map);
                if let Some(inverse) = h.inverse_map() {
                    b.record(is_homomorphism(&inverse, n, m), || GroundWitness {
                        semigroups: vec![m.rows(), n.rows()],
                        detail: format!("bijection {:?} has no homomorphic inverse", h.map()),
                    });
                }
            }
        }
    }

    let mut c = Tally::new(GroundCondition::SurjectiveUnits);
    for r in &reflections {
        c.record(r.unit.is_surjective(), || GroundWitness {
            semigroups: vec![r.source.rows()],
            detail: format!("unit {:?} is not surjective", r.unit.map()),
        });
    }

    let mut d = Tally::new(GroundCondition::PointsSurject);
    for m in &subvariety {
        for e in m.elements() {
            d.record(m.is_idempotent(e), || GroundWitness {
                semigroups: vec![m.rows()],
                detail: format!("element {e} is not idempotent"),
            });
        }
    }

    GroundReport {
        variety: v.name().to_string(),
        corpus_size: members.len(),
        conditions: vec![a.finish(), b.finish(), c.finish(), d.finish()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::named::*;

    fn slat() -> VarietyConfig {
        VarietyConfig::sgr_to_slat()
    }

    #[test]
    fn variety_congruence_examples() {
        assert_eq!(
            variety_congruence(&chain_2(), &slat()).unwrap(),
            Partition::discrete(2)
        );
        assert_eq!(
            variety_congruence(&cyclic_2(), &slat())
                .unwrap()
                .class_count(),
            1
        );
        assert_eq!(
            variety_congruence(&left_zero_2(), &slat())
                .unwrap()
                .class_count(),
            1
        );
        assert!(matches!(
            variety_congruence(&cyclic_2(), &VarietyConfig::band_to_slat()),
            Err(Error::NotInDomain(_))
        ));
    }

    #[test]
    fn reflect_examples() {
        let r = reflect(&chain_2(), &slat()).unwrap();
        assert_eq!(r.image, chain_2());
        assert!(r.unit.is_bijective());

        let r = reflect(&cyclic_2(), &slat()).unwrap();
        assert_eq!(r.image, FiniteSemigroup::trivial());
        assert_eq!(r.unit.map(), &[0, 0]);

        let r = reflect(&left_zero_2(), &VarietyConfig::sgr_to_band()).unwrap();
        assert_eq!(r.image, left_zero_2());

        let r = reflect(&left_zero_2(), &VarietyConfig::band_to_slat()).unwrap();
        assert_eq!(r.image.order(), 1);

        let r = reflect(&FiniteSemigroup::empty(), &slat()).unwrap();
        assert!(r.image.is_empty());
    }

    #[test]
    fn reflect_morphism_examples() {
        let c = left_zero_2();
        let id =
            reflect_morphism(&Homomorphism::identity(&c), &VarietyConfig::sgr_to_band()).unwrap();
        assert_eq!(id, Homomorphism::identity(&c));

        let t = FiniteSemigroup::trivial();
        let bang = Homomorphism::constant(&cyclic_2(), &t, 0).unwrap();
        assert_eq!(
            reflect_morphism(&bang, &slat()).unwrap(),
            Homomorphism::identity(&t)
        );

        let f = Homomorphism::constant(&left_zero_2(), &chain_2(), 1).unwrap();
        let hf = reflect_morphism(&f, &slat()).unwrap();
        assert_eq!(hf.source(), &t);
        assert_eq!(hf.map(), &[1]);
    }

    #[test]
    fn factor_through_unit_examples() {
        let r = reflect(&chain_2(), &slat()).unwrap();
        let bar = factor_through_unit(&r.unit, &slat()).unwrap();
        assert_eq!(bar, Homomorphism::identity(&chain_2()));

        let h = Homomorphism::constant(&cyclic_2(), &chain_2(), 0).unwrap();
        assert_eq!(factor_through_unit(&h, &slat()).unwrap().map(), &[0]);

        let h = Homomorphism::constant(&left_zero_2(), &chain_2(), 1).unwrap();
        assert_eq!(factor_through_unit(&h, &slat()).unwrap().map(), &[1]);

        let into_l2 = Homomorphism::identity(&left_zero_2());
        assert!(matches!(
            factor_through_unit(&into_l2, &slat()),
            Err(Error::NotInSubvariety(_))
        ));
    }

    #[test]
    fn condition_e_examples() {
        assert!(check_condition_e(&chain_2(), &slat()).unwrap());
        assert!(check_condition_e(&cyclic_2(), &slat()).unwrap());
        assert!(check_condition_e(&FiniteSemigroup::empty(), &slat()).unwrap());
    }

    #[test]
    fn commutative_config_breaks_condition_d() {
        let corpus = vec![cyclic_2(), chain_2(), left_zero_2()];
        let report = check_ground_conditions(&VarietyConfig::sgr_to_commutative(), &corpus);
        let d = report.verdict(GroundCondition::PointsSurject);
        assert!(!d.holds);
        assert_eq!(d.witnesses[0].semigroups[0], cyclic_2().rows());
        assert!(report.verdict(GroundCondition::SurjectiveUnits).holds);
    }
}
