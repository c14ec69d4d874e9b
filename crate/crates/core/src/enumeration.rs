//! Exhaustive generation of finite semigroups up to isomorphism, and the on-disk corpus cache.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::report::{hash_bytes, CorpusSummary, TOOL_VERSION};
use crate::semigroup::FiniteSemigroup;
use crate::sgt;
use crate::variety::{parse_identities, satisfies_identities, Identity};

/// Largest order the generator accepts.
pub const MAX_ENUMERATION_ORDER: usize = 4;

/// Environment variable naming the corpus cache directory.
pub const CACHE_DIR_ENV: &str = "REFLECT_CACHE_DIR";

const UNSET: usize = usize::MAX;

/// A named identity filter for corpora.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFilter {
    name: String,
    identities: Vec<Identity>,
}

impl CorpusFilter {
    pub fn none() -> Self {
        CorpusFilter {
            name: "none".into(),
            identities: Vec::new(),
        }
    }

    pub fn slat() -> Self {
        CorpusFilter {
            name: "slat".into(),
            identities: parse_identities(&["xx=x", "xy=yx"]).expect("valid"),
        }
    }

    pub fn band() -> Self {
        CorpusFilter {
            name: "band".into(),
            identities: parse_identities(&["xx=x"]).expect("valid"),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "none" => Ok(Self::none()),
            "slat" => Ok(Self::slat()),
            "band" => Ok(Self::band()),
            other => Err(Error::UnknownVariety(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn accepts(&self, a: &FiniteSemigroup) -> bool {
        satisfies_identities(a, &self.identities)
    }
}

/// All semigroups of one order up to isomorphism, in canonical form and ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub order: usize,
    pub filter: CorpusFilter,
    pub tables: Vec<FiniteSemigroup>,
}

impl Corpus {
    pub fn provenance(&self) -> String {
        format!(
            "{} count={}",
            provenance_prefix(self.order, &self.filter),
            self.tables.len()
        )
    }

    /// The `.sgt` file contents, including the provenance header.
    pub fn to_sgt(&self) -> String {
        let header = vec![format!("provenance: {}", self.provenance())];
        sgt::write_document(&header, self.tables.iter().map(|t| (None, t)))
    }

    pub fn hash(&self) -> String {
        hash_bytes(self.to_sgt().as_bytes())
    }

    pub fn summary(&self) -> CorpusSummary {
        CorpusSummary {
            order: self.order,
            count: self.tables.len(),
            hash: self.hash(),
        }
    }

    pub fn filtered(&self, filter: &CorpusFilter) -> Corpus {
        Corpus {
            order: self.order,
            filter: filter.clone(),
            tables: self
                .tables
                .iter()
                .filter(|t| filter.accepts(t))
                .cloned()
                .collect(),
        }
    }

    /// Canonical, strictly increasing and passing the filter.
    pub fn is_well_formed(&self) -> bool {
        self.tables.windows(2).all(|w| w[0] < w[1])
            && self.tables.iter().all(|t| {
                t.order() == self.order
                    && self.filter.accepts(t)
                    && t.canonical_form().as_ref() == Ok(t)
            })
    }
}

fn provenance_prefix(order: usize, filter: &CorpusFilter) -> String {
    let ids: Vec<String> = filter.identities.iter().map(|i| i.to_string()).collect();
    format!(
        "generator=reflect-core/{TOOL_VERSION} order={order} filter={} identities=[{}]",
        filter.name,
        ids.join(",")
    )
}

/// All semigroups of order `n` up to isomorphism that satisfy `filter`.
///
/// Cells are filled in row-major order; a partial table is rejected as soon as some fully
/// determined triple violates associativity. Completed tables are canonicalized and
/// deduplicated.
pub fn enumerate_semigroups(n: usize, filter: &CorpusFilter) -> Result<Corpus> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            bound: MAX_ENUMERATION_ORDER,
        });
    }
    let mut found = BTreeSet::new();
    let mut table = vec![UNSET; n * n];
    fill_cell(n, &mut table, 0, &mut found);
    Ok(Corpus {
        order: n,
        filter: filter.clone(),
        tables: found.into_iter().filter(|t| filter.accepts(t)).collect(),
    })
}

fn fill_cell(n: usize, table: &mut [usize], cell: usize, found: &mut BTreeSet<FiniteSemigroup>) {
    if cell == n * n {
        let s = FiniteSemigroup::from_trusted(n, table.to_vec());
        found.insert(s.canonical_form().expect("enumeration order is bounded"));
        return;
    }
    for v in 0..n {
        table[cell] = v;
        if partial_associative(n, table) {
            fill_cell(n, table, cell + 1, found);
        }
    }
    table[cell] = UNSET;
}

/// No fully determined triple `(x·y)·z`, `x·(y·z)` disagrees.
fn partial_associative(n: usize, t: &[usize]) -> bool {
    for x in 0..n {
        for y in 0..n {
            let xy = t[x * n + y];
            if xy == UNSET {
                continue;
            }
            for z in 0..n {
                let yz = t[y * n + z];
                if yz == UNSET {
                    continue;
                }
                let (l, r) = (t[xy * n + z], t[x * n + yz]);
                if l != UNSET && r != UNSET && l != r {
                    return false;
                }
            }
        }
    }
    true
}

/// Unfiltered corpora for every order `0..=max_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusLibrary {
    corpora: Vec<Corpus>,
}

impl CorpusLibrary {
    pub fn generate(max_order: usize) -> Result<Self> {
        let corpora = (0..=max_order)
            .map(|n| enumerate_semigroups(n, &CorpusFilter::none()))
            .collect::<Result<_>>()?;
        Ok(CorpusLibrary { corpora })
    }

    /// Loads each order from `cache`, generating and storing missing or stale files.
    pub fn load(cache: &CorpusCache, max_order: usize) -> Result<Self> {
        let corpora = (0..=max_order)
            .map(|n| cache.load_or_generate(n, &CorpusFilter::none()))
            .collect::<Result<_>>()?;
        Ok(CorpusLibrary { corpora })
    }

    pub fn max_order(&self) -> usize {
        self.corpora.len().saturating_sub(1)
    }

    pub fn corpus(&self, order: usize) -> Result<&Corpus> {
        self.corpora.get(order).ok_or(Error::CorpusMissing(order))
    }

    pub fn corpora(&self) -> &[Corpus] {
        &self.corpora
    }

    /// Members of order `<= max_order` accepted by `keep`, ordered by order then table.
    pub fn members_where(
        &self,
        max_order: usize,
        keep: impl Fn(&FiniteSemigroup) -> bool,
    ) -> Result<Vec<&FiniteSemigroup>> {
        if max_order > self.max_order() || self.corpora.is_empty() {
            return Err(Error::CorpusMissing(max_order));
        }
        Ok(self.corpora[..=max_order]
            .iter()
            .flat_map(|c| c.tables.iter())
            .filter(|t| keep(t))
            .collect())
    }

    pub fn members(&self, max_order: usize) -> Result<Vec<&FiniteSemigroup>> {
        self.members_where(max_order, |_| true)
    }

    pub fn summaries(&self, max_order: usize) -> Vec<CorpusSummary> {
        self.corpora
            .iter()
            .take(max_order + 1)
            .map(Corpus::summary)
            .collect()
    }

    /// Hash over the per-order hashes up to `max_order`.
    pub fn hash(&self, max_order: usize) -> String {
        let joined: Vec<String> = self
            .summaries(max_order)
            .into_iter()
            .map(|s| format!("{}:{}:{}", s.order, s.count, s.hash))
            .collect();
        hash_bytes(joined.join("\n").as_bytes())
    }
}

/// One `.sgt` file per (order, filter) under a directory.
#[derive(Debug, Clone)]
pub struct CorpusCache {
    dir: PathBuf,
}

impl CorpusCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CorpusCache { dir: dir.into() }
    }

    /// `$REFLECT_CACHE_DIR`, or `.reflect-cache` in the working directory.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".reflect-cache"));
        CorpusCache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, order: usize, filter: &CorpusFilter) -> PathBuf {
        corpus_file_name(&self.dir, order, filter)
    }

    /// Reads the cached corpus if its provenance matches this build, else regenerates it.
    pub fn load_or_generate(&self, order: usize, filter: &CorpusFilter) -> Result<Corpus> {
        let path = self.path_for(order, filter);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Some(corpus) = read_corpus(&text, order, filter) {
                return Ok(corpus);
            }
        }
        let corpus = enumerate_semigroups(order, filter)?;
        write_corpus(&self.dir, &corpus)?;
        Ok(corpus)
    }
}

pub fn corpus_file_name(dir: &Path, order: usize, filter: &CorpusFilter) -> PathBuf {
    dir.join(format!("order-{order}-{}.sgt", filter.name))
}

/// Writes `corpus` into `dir` and returns the file path.
pub fn write_corpus(dir: &Path, corpus: &Corpus) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = corpus_file_name(dir, corpus.order, &corpus.filter);
    fs::write(&path, corpus.to_sgt())?;
    Ok(path)
}

fn read_corpus(text: &str, order: usize, filter: &CorpusFilter) -> Option<Corpus> {
    let doc = sgt::parse(text).ok()?;
    let corpus = Corpus {
        order,
        filter: filter.clone(),
        tables: doc.semigroups().cloned().collect(),
    };
    (doc.provenance() == Some(corpus.provenance().as_str()) && corpus.is_well_formed())
        .then_some(corpus)
}
