#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use reflect_core::enumeration::CorpusLibrary;
use reflect_core::FiniteSemigroup;

/// The full corpus up to order 4, generated once per test binary.
pub fn library() -> &'static CorpusLibrary {
    static LIB: OnceLock<CorpusLibrary> = OnceLock::new();
    LIB.get_or_init(|| CorpusLibrary::generate(4).expect("orders up to 4 enumerate"))
}

pub fn members(max_order: usize) -> Vec<&'static FiniteSemigroup> {
    library().members(max_order).unwrap()
}

/// A corpus member of order `1..=max_order`, relabeled by a random permutation.
pub fn semigroup(max_order: usize) -> impl Strategy<Value = FiniteSemigroup> {
    let pool: Vec<FiniteSemigroup> = members(max_order)
        .into_iter()
        .filter(|s| !s.is_empty())
        .cloned()
        .collect();
    (0..pool.len())
        .prop_flat_map(move |i| {
            let s = pool[i].clone();
            let n = s.order();
            (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
        .prop_map(|(s, perm)| s.relabel(&perm))
}
