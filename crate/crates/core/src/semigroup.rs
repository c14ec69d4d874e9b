//! Finite semigroups as multiplication tables on `{0..n-1}`, and homomorphisms between them.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest order accepted by [`FiniteSemigroup::canonical_form`] unless a bound is given.
pub const DEFAULT_CANONICAL_BOUND: usize = 6;

/// A finite semigroup on the elements `0..order`, stored as a row-major Cayley table.
///
/// Values are immutable once validated. The empty semigroup (order 0) is allowed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<usize>,
}

impl FiniteSemigroup {
    /// Validates a square table: entries in range, then associativity.
    ///
    /// Range errors are reported for the first bad cell in row-major order and associativity
    /// errors for the first failing triple `(i, j, k)` in lexicographic order.
    pub fn from_rows(order: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if rows.len() != order {
            return Err(Error::Shape {
                order,
                rows: rows.len(),
            });
        }
        let mut table = Vec::with_capacity(order * order);
        for row in rows {
            if row.len() != order {
                return Err(Error::Shape {
                    order,
                    rows: rows.len(),
                });
            }
            table.extend_from_slice(row);
        }
        Self::from_flat(order, table)
    }

    /// Same as [`from_rows`](Self::from_rows) for a row-major flat table.
    pub fn from_flat(order: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != order * order {
            return Err(Error::Shape {
                order,
                rows: table.len() / order.max(1),
            });
        }
        if let Some(pos) = table.iter().position(|&v| v >= order) {
            return Err(Error::EntryOutOfRange {
                row: pos / order,
                col: pos % order,
                value: table[pos],
            });
        }
        let candidate = FiniteSemigroup { order, table };
        if let Some((i, j, k)) = candidate.first_non_associative_triple() {
            return Err(Error::NotAssociative(i, j, k));
        }
        Ok(candidate)
    }

    /// Builds a semigroup from a table the caller already knows to be associative and in range.
    pub(crate) fn from_trusted(order: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        debug_assert!(table.iter().all(|&v| v < order));
        FiniteSemigroup { order, table }
    }

    fn first_non_associative_triple(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        (0..n)
            .cartesian_product(0..n)
            .cartesian_product(0..n)
            .map(|((i, j), k)| (i, j, k))
            .find(|&(i, j, k)| self.mul(self.mul(i, j), k) != self.mul(i, self.mul(j, k)))
    }

    /// The empty semigroup.
    pub fn empty() -> Self {
        FiniteSemigroup {
            order: 0,
            table: Vec::new(),
        }
    }

    /// The one-element semigroup.
    pub fn trivial() -> Self {
        FiniteSemigroup {
            order: 1,
            table: vec![0],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_empty(&self) -> bool {
        self.order == 0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn flat_table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order.max(1))
            .take(self.order)
            .map(<[usize]>::to_vec)
            .collect()
    }

    /// Ascending list of elements `e` with `e·e = e`.
    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&e| self.mul(e, e) == e).collect()
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    /// Table obtained by renaming every element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> FiniteSemigroup {
        let n = self.order;
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[perm[i] * n + perm[j]] = perm[self.mul(i, j)];
            }
        }
        FiniteSemigroup { order: n, table }
    }

    /// Lexicographically least relabeling, with the default order bound.
    pub fn canonical_form(&self) -> Result<FiniteSemigroup> {
        self.canonical_form_bounded(DEFAULT_CANONICAL_BOUND)
    }

    /// Lexicographically least table over all `n!` relabelings.
    ///
    /// Two semigroups are isomorphic exactly when their canonical forms are equal.
    pub fn canonical_form_bounded(&self, bound: usize) -> Result<FiniteSemigroup> {
        if self.order > bound {
            return Err(Error::OrderTooLarge {
                order: self.order,
                bound,
            });
        }
        let n = self.order;
        let mut best = self.table.clone();
        let mut scratch = vec![0; n * n];
        for perm in (0..n).permutations(n) {
            for i in 0..n {
                for j in 0..n {
                    scratch[perm[i] * n + perm[j]] = perm[self.mul(i, j)];
                }
            }
            if scratch < best {
                best.copy_from_slice(&scratch);
            }
        }
        Ok(FiniteSemigroup {
            order: n,
            table: best,
        })
    }

    pub fn is_isomorphic(&self, other: &FiniteSemigroup) -> Result<bool> {
        if self.order != other.order {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// The opposite semigroup, `x ∘ y = y · x`.
    pub fn opposite(&self) -> FiniteSemigroup {
        let n = self.order;
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = self.mul(j, i);
            }
        }
        FiniteSemigroup { order: n, table }
    }

    /// Sub-semigroup on `subset` (ascending), renumbered `0..k` in that order.
    ///
    /// Returns `None` if `subset` is not closed under multiplication.
    pub fn subsemigroup(&self, subset: &[usize]) -> Option<FiniteSemigroup> {
        let mut index = vec![usize::MAX; self.order];
        for (new, &old) in subset.iter().enumerate() {
            index[old] = new;
        }
        let k = subset.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in subset {
            for &b in subset {
                let p = index[self.mul(a, b)];
                if p == usize::MAX {
                    return None;
                }
                table.push(p);
            }
        }
        Some(FiniteSemigroup { order: k, table })
    }
}

impl fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSemigroup{:?}", self.rows())
    }
}

impl fmt::Display for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for row in self.rows() {
            writeln!(f, "{}", row.iter().join(" "))?;
        }
        Ok(())
    }
}

/// True iff `map[i·j] == map[i]·map[j]` for all `i, j` in `source`.
///
/// `map` must have length `source.order()` with entries below `target.order()`.
pub fn is_homomorphism(map: &[usize], source: &FiniteSemigroup, target: &FiniteSemigroup) -> bool {
    debug_assert_eq!(map.len(), source.order());
    source.elements().all(|i| {
        source
            .elements()
            .all(|j| map[source.mul(i, j)] == target.mul(map[i], map[j]))
    })
}

/// All homomorphism maps `source → target`, in lexicographic order.
///
/// Images are assigned in element order; after each assignment every product among the
/// already-assigned elements is checked.
pub fn homomorphism_maps(source: &FiniteSemigroup, target: &FiniteSemigroup) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = vec![0; source.order()];
    if source.order() > 0 && target.order() == 0 {
        return out;
    }
    extend_homomorphism(source, target, &mut map, 0, &mut out);
    out
}

fn extend_homomorphism(
    source: &FiniteSemigroup,
    target: &FiniteSemigroup,
    map: &mut [usize],
    next: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if next == source.order() {
        out.push(map.to_vec());
        return;
    }
    for image in target.elements() {
        map[next] = image;
        if consistent_prefix(source, target, map, next) {
            extend_homomorphism(source, target, map, next + 1, out);
        }
    }
}

/// Checks every product `i·j = p` with `i, j, p <= last` that involves `last`.
fn consistent_prefix(
    source: &FiniteSemigroup,
    target: &FiniteSemigroup,
    map: &[usize],
    last: usize,
) -> bool {
    for i in 0..=last {
        for j in 0..=last {
            let p = source.mul(i, j);
            if p > last || (i != last && j != last && p != last) {
                continue;
            }
            if map[p] != target.mul(map[i], map[j]) {
                return false;
            }
        }
    }
    true
}

/// A validated homomorphism between two finite semigroups.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    source: FiniteSemigroup,
    target: FiniteSemigroup,
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(source: FiniteSemigroup, target: FiniteSemigroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::NotAHomomorphism(format!(
                "map has length {} but the source has order {}",
                map.len(),
                source.order()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.order()) {
            return Err(Error::NotAHomomorphism(format!(
                "image {bad} is outside the target of order {}",
                target.order()
            )));
        }
        if !is_homomorphism(&map, &source, &target) {
            return Err(Error::NotAHomomorphism(format!(
                "{map:?} does not preserve products"
            )));
        }
        Ok(Homomorphism {
            source,
            target,
            map,
        })
    }

    pub(crate) fn from_trusted(
        source: FiniteSemigroup,
        target: FiniteSemigroup,
        map: Vec<usize>,
    ) -> Self {
        debug_assert!(is_homomorphism(&map, &source, &target));
        Homomorphism {
            source,
            target,
            map,
        }
    }

    pub fn identity(a: &FiniteSemigroup) -> Self {
        Homomorphism {
            source: a.clone(),
            target: a.clone(),
            map: a.elements().collect(),
        }
    }

    /// The constant map onto an idempotent `e` of `target`.
    pub fn constant(source: &FiniteSemigroup, target: &FiniteSemigroup, e: usize) -> Result<Self> {
        Self::new(source.clone(), target.clone(), vec![e; source.order()])
    }

    /// The map from the one-element semigroup picking the idempotent `e`.
    pub fn point(target: &FiniteSemigroup, e: usize) -> Result<Self> {
        if e >= target.order() || !target.is_idempotent(e) {
            return Err(Error::NotAPoint { element: e });
        }
        Ok(Homomorphism {
            source: FiniteSemigroup::trivial(),
            target: target.clone(),
            map: vec![e],
        })
    }

    pub fn source(&self) -> &FiniteSemigroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteSemigroup {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.target != other.source {
            return Err(Error::NotAHomomorphism(
                "codomain and domain do not match".into(),
            ));
        }
        let map = self.map.iter().map(|&x| other.map[x]).collect();
        Ok(Homomorphism::from_trusted(
            self.source.clone(),
            other.target.clone(),
            map,
        ))
    }

    pub fn is_injective(&self) -> bool {
        is_injective(&self.map, self.target.order())
    }

    pub fn is_surjective(&self) -> bool {
        is_surjective(&self.map, self.target.order())
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    /// The inverse map of a bijection, unchecked as a homomorphism.
    pub fn inverse_map(&self) -> Option<Vec<usize>> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(inv)
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Homomorphism({} -> {}: {:?})",
            self.source.order(),
            self.target.order(),
            self.map
        )
    }
}

/// All homomorphisms `source → target`, lexicographic by map.
pub fn enumerate_homomorphisms(
    source: &FiniteSemigroup,
    target: &FiniteSemigroup,
) -> Vec<Homomorphism> {
    homomorphism_maps(source, target)
        .into_iter()
        .map(|map| Homomorphism::from_trusted(source.clone(), target.clone(), map))
        .collect()
}

pub(crate) fn is_injective(map: &[usize], codomain: usize) -> bool {
    let mut seen = vec![false; codomain];
    map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

pub(crate) fn is_surjective(map: &[usize], codomain: usize) -> bool {
    let mut seen = vec![false; codomain];
    for &y in map {
        seen[y] = true;
    }
    seen.into_iter().all(|s| s)
}

/// Frequently used small semigroups.
pub mod named {
    use super::FiniteSemigroup;

    /// Left-zero semigroup `x·y = x` on two elements.
    pub fn left_zero_2() -> FiniteSemigroup {
        FiniteSemigroup::from_trusted(2, vec![0, 0, 1, 1])
    }

    /// Right-zero semigroup `x·y = y` on two elements.
    pub fn right_zero_2() -> FiniteSemigroup {
        FiniteSemigroup::from_trusted(2, vec![0, 1, 0, 1])
    }

    /// Two-element chain semilattice under `min`.
    pub fn chain_2() -> FiniteSemigroup {
        FiniteSemigroup::from_trusted(2, vec![0, 0, 0, 1])
    }

    /// Cyclic group of order two, written additively.
    pub fn cyclic_2() -> FiniteSemigroup {
        FiniteSemigroup::from_trusted(2, vec![0, 1, 1, 0])
    }

    /// Two-element null semigroup, every product is `0`.
    pub fn null_2() -> FiniteSemigroup {
        FiniteSemigroup::from_trusted(2, vec![0, 0, 0, 0])
    }
}
