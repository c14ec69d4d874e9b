//! Equivalence relations on `{0..n-1}`, congruence closure and quotients.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::semigroup::{FiniteSemigroup, Homomorphism};

/// Union-find with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    classes: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            classes: n,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns whether they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.classes -= 1;
        true
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn freeze(mut self) -> Partition {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

/// A frozen partition of `{0..size-1}`.
///
/// Blocks are numbered by ascending least element, so equal relations compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    class_count: usize,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition {
            block_of: (0..n).collect(),
            class_count: n,
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        Partition {
            block_of: vec![0; n],
            class_count: n.min(1),
        }
    }

    /// Partition whose blocks are the level sets of `labels`.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut block_of = vec![usize::MAX; labels.len()];
        let mut next = 0;
        for x in 0..labels.len() {
            if block_of[x] != usize::MAX {
                continue;
            }
            for y in x..labels.len() {
                if labels[y] == labels[x] {
                    block_of[y] = next;
                }
            }
            next += 1;
        }
        Partition {
            block_of,
            class_count: next,
        }
    }

    pub fn size(&self) -> usize {
        self.block_of.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Block index of `x`.
    pub fn block(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// Least element of each block, indexed by block.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.class_count];
        for (x, &b) in self.block_of.iter().enumerate() {
            if reps[b] == usize::MAX {
                reps[b] = x;
            }
        }
        reps
    }

    /// Union-find style parent array: each element points at the least element of its block.
    pub fn parent(&self) -> Vec<usize> {
        let reps = self.representatives();
        self.block_of.iter().map(|&b| reps[b]).collect()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.class_count];
        for (x, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(x);
        }
        blocks
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| !self.same_block(a, b) || coarser.same_block(a, b)))
    }

    /// First pair `(a, b)` witnessing that the relation is not compatible with `a`'s product.
    pub fn compatibility_failure(&self, a: &FiniteSemigroup) -> Option<(usize, usize)> {
        let n = a.order();
        for x in 0..n {
            for y in (x + 1)..n {
                if !self.same_block(x, y) {
                    continue;
                }
                for k in 0..n {
                    if !self.same_block(a.mul(x, k), a.mul(y, k))
                        || !self.same_block(a.mul(k, x), a.mul(k, y))
                    {
                        return Some((x, y));
                    }
                }
            }
        }
        None
    }

    pub fn is_congruence_for(&self, a: &FiniteSemigroup) -> bool {
        self.size() == a.order() && self.compatibility_failure(a).is_none()
    }
}

/// Least congruence on `a` containing every pair in `pairs`.
///
/// Worklist closure: whenever a pair `(x, y)` merges two classes, the pairs `(x·k, y·k)` and
/// `(k·x, k·y)` are queued for every `k`, skipping pairs that are already equal.
pub fn congruence_closure(
    a: &FiniteSemigroup,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Partition {
    let n = a.order();
    let mut uf = UnionFind::new(n);
    let mut queue: VecDeque<(usize, usize)> = pairs.into_iter().collect();
    while let Some((x, y)) = queue.pop_front() {
        if !uf.union(x, y) {
            continue;
        }
        for k in 0..n {
            let (r1, r2) = (a.mul(x, k), a.mul(y, k));
            if uf.find(r1) != uf.find(r2) {
                queue.push_back((r1, r2));
            }
            let (l1, l2) = (a.mul(k, x), a.mul(k, y));
            if uf.find(l1) != uf.find(l2) {
                queue.push_back((l1, l2));
            }
        }
    }
    uf.freeze()
}

/// Quotient of `a` by the congruence `p`, with its projection.
pub fn quotient(a: &FiniteSemigroup, p: &Partition) -> Result<(FiniteSemigroup, Homomorphism)> {
    if p.size() != a.order() {
        return Err(Error::NotAHomomorphism(format!(
            "partition of {} elements for a semigroup of order {}",
            p.size(),
            a.order()
        )));
    }
    if let Some((x, y)) = p.compatibility_failure(a) {
        return Err(Error::NotACongruence(x, y));
    }
    let reps = p.representatives();
    let k = p.class_count();
    let mut table = Vec::with_capacity(k * k);
    for &ri in &reps {
        for &rj in &reps {
            table.push(p.block(a.mul(ri, rj)));
        }
    }
    let image = FiniteSemigroup::from_trusted(k, table);
    let projection =
        Homomorphism::from_trusted(a.clone(), image.clone(), p.block_labels().to_vec());
    Ok((image, projection))
}

/// Partition of the source of `f` by equal images.
pub fn kernel(f: &Homomorphism) -> Partition {
    Partition::from_labels(f.map())
}
