//! Terminal object, binary products and pullbacks of finite semigroups.

use crate::error::{Error, Result};
use crate::semigroup::{FiniteSemigroup, Homomorphism};

/// Apex of a limit cone with its projections.
///
/// `element_labels[i]` gives the coordinates of apex element `i` in the two factors; labels
/// are in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeResult {
    pub apex: FiniteSemigroup,
    pub legs: Vec<Homomorphism>,
    pub element_labels: Vec<(usize, usize)>,
}

impl ConeResult {
    pub fn first_leg(&self) -> &Homomorphism {
        &self.legs[0]
    }

    pub fn second_leg(&self) -> &Homomorphism {
        &self.legs[1]
    }

    /// Apex element with coordinates `(a, b)`.
    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.element_labels.binary_search(&(a, b)).ok()
    }

    /// The mediating map `X → apex` for a pair of maps out of a common `X`, if their images
    /// land in the apex.
    pub fn mediate(&self, x1: &Homomorphism, x2: &Homomorphism) -> Option<Homomorphism> {
        if x1.source() != x2.source() {
            return None;
        }
        let map = x1
            .map()
            .iter()
            .zip(x2.map())
            .map(|(&a, &b)| self.index_of(a, b))
            .collect::<Option<Vec<usize>>>()?;
        Homomorphism::new(x1.source().clone(), self.apex.clone(), map).ok()
    }
}

/// The one-element semigroup.
pub fn terminal() -> FiniteSemigroup {
    FiniteSemigroup::trivial()
}

/// True iff `a` has exactly one element; the empty semigroup is not terminal.
pub fn is_terminal(a: &FiniteSemigroup) -> bool {
    a.order() == 1
}

/// Componentwise product on pairs in lexicographic order.
pub fn product(a: &FiniteSemigroup, b: &FiniteSemigroup) -> ConeResult {
    let (n, m) = (a.order(), b.order());
    let labels: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let k = n * m;
    let mut table = Vec::with_capacity(k * k);
    for &(a1, b1) in &labels {
        for &(a2, b2) in &labels {
            table.push(a.mul(a1, a2) * m + b.mul(b1, b2));
        }
    }
    build_cone(a, b, labels, table)
}

/// Pullback of `f: A → C` and `g: B → C`.
pub fn pullback(f: &Homomorphism, g: &Homomorphism) -> Result<ConeResult> {
    if f.target() != g.target() {
        return Err(Error::NotAHomomorphism(
            "pullback legs must share a codomain".into(),
        ));
    }
    Ok(pullback_of_maps(f.source(), f.map(), g.source(), g.map()))
}

/// Pullback of raw homomorphism maps `f: a → C`, `g: b → C`; `C` only enters through
/// equality of images.
pub(crate) fn pullback_of_maps(
    a: &FiniteSemigroup,
    f: &[usize],
    b: &FiniteSemigroup,
    g: &[usize],
) -> ConeResult {
    let labels: Vec<(usize, usize)> = a
        .elements()
        .flat_map(|i| {
            b.elements()
                .filter(move |&j| f[i] == g[j])
                .map(move |j| (i, j))
        })
        .collect();
    let k = labels.len();
    let mut table = Vec::with_capacity(k * k);
    for &(a1, b1) in &labels {
        for &(a2, b2) in &labels {
            let p = (a.mul(a1, a2), b.mul(b1, b2));
            let idx = labels
                .binary_search(&p)
                .expect("pullback of homomorphisms is closed under products");
            table.push(idx);
        }
    }
    build_cone(a, b, labels, table)
}

fn build_cone(
    a: &FiniteSemigroup,
    b: &FiniteSemigroup,
    labels: Vec<(usize, usize)>,
    table: Vec<usize>,
) -> ConeResult {
    let apex = FiniteSemigroup::from_trusted(labels.len(), table);
    let p1 = labels.iter().map(|&(x, _)| x).collect();
    let p2 = labels.iter().map(|&(_, y)| y).collect();
    let legs = vec![
        Homomorphism::from_trusted(apex.clone(), a.clone(), p1),
        Homomorphism::from_trusted(apex.clone(), b.clone(), p2),
    ];
    ConeResult {
        apex,
        legs,
        element_labels: labels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::enumerate_homomorphisms;
    use crate::semigroup::named::*;

    #[test]
    fn terminal_examples() {
        let t = terminal();
        assert_eq!(t.order(), 1);
        for a in [left_zero_2(), cyclic_2(), FiniteSemigroup::empty()] {
            assert_eq!(enumerate_homomorphisms(&a, &t).len(), 1);
        }
        assert!(is_terminal(&t));
        assert!(!is_terminal(&FiniteSemigroup::empty()));
        assert!(!is_terminal(&chain_2()));
    }

    #[test]
    fn product_examples() {
        let a = left_zero_2();
        let with_t = product(&a, &terminal());
        assert!(with_t.apex.is_isomorphic(&a).unwrap());

        let z = cyclic_2();
        let zz = product(&z, &z);
        assert_eq!(zz.apex.order(), 4);
        for (x, &(a1, b1)) in zz.element_labels.iter().enumerate() {
            for (y, &(a2, b2)) in zz.element_labels.iter().enumerate() {
                assert_eq!(
                    zz.element_labels[zz.apex.mul(x, y)],
                    ((a1 + a2) % 2, (b1 + b2) % 2)
                );
            }
        }

        let ls = product(&left_zero_2(), &chain_2());
        assert_eq!(ls.apex.idempotents(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn pullback_examples() {
        let c = left_zero_2();
        let id = Homomorphism::identity(&c);
        let diag = pullback(&id, &id).unwrap();
        assert_eq!(diag.element_labels, vec![(0, 0), (1, 1)]);
        assert_eq!(diag.apex, c);

        let s2 = chain_2();
        let zero = Homomorphism::point(&s2, 0).unwrap();
        let one = Homomorphism::point(&s2, 1).unwrap();
        assert!(pullback(&zero, &one).unwrap().apex.is_empty());

        assert!(pullback(&zero, &id).is_err());
    }

    #[test]
    fn mediating_map_is_unique() {
        let s2 = chain_2();
        let z = cyclic_2();
        let f = Homomorphism::constant(&z, &s2, 1).unwrap();
        let g = Homomorphism::identity(&s2);
        let cone = pullback(&f, &g).unwrap();
        // X = Z2 with x1 = id, x2 = constant 1 commutes over S2.
        let x1 = Homomorphism::identity(&z);
        let x2 = Homomorphism::constant(&z, &s2, 1).unwrap();
        let m = cone.mediate(&x1, &x2).unwrap();
        let candidates: Vec<_> = enumerate_homomorphisms(&z, &cone.apex)
            .into_iter()
            .filter(|h| {
                h.then(cone.first_leg()).unwrap() == x1 && h.then(cone.second_leg()).unwrap() == x2
            })
            .collect();
        assert_eq!(candidates, vec![m]);
    }
}
