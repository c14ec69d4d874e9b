//! Structured verdicts with counterexample witnesses, serialized as JSON reports.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::semigroup::FiniteSemigroup;
use crate::sgt;
use crate::variety::VarietyConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;

/// At most this many witnesses are stored per report; `counterexample_count` counts all.
pub const MAX_WITNESSES: usize = 16;

pub type Table = Vec<Vec<usize>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Simple,
    SemiLeftExact,
    StableUnits,
    LocalizationSufficient,
    LeftExactOracle,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::Simple => "simple",
            Property::SemiLeftExact => "semi_left_exact",
            Property::StableUnits => "stable_units",
            Property::LocalizationSufficient => "localization_sufficient",
            Property::LeftExactOracle => "left_exact_oracle",
        }
    }

    /// Accepts the report names and the short CLI spellings.
    pub fn parse(s: &str) -> Option<Property> {
        match s {
            "simple" => Some(Property::Simple),
            "sle" | "semi_left_exact" | "semi-left-exact" => Some(Property::SemiLeftExact),
            "stable-units" | "stable_units" => Some(Property::StableUnits),
            "localization" | "localization_sufficient" => Some(Property::LocalizationSufficient),
            "left-exact" | "left_exact_oracle" | "left-exact-oracle" => {
                Some(Property::LeftExactOracle)
            }
            _ => None,
        }
    }
}

/// A recorded failure, replayable against a variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The fiber of the unit over `point` does not reflect to the terminal object.
    DisconnectedComponent {
        semigroup: Table,
        point: usize,
        fiber: Vec<usize>,
        reflection_order: usize,
    },
    /// The product of two connected components does not reflect to the terminal object.
    DisconnectedProduct {
        left: Table,
        right: Table,
        left_point: usize,
        right_point: usize,
        reflection_order: usize,
    },
    /// `I` fails to preserve the pullback of the unit of `semigroup` along
    /// `map: corner → HI(semigroup)`.
    UnpreservedUnitSquare {
        semigroup: Table,
        corner: Table,
        map: Vec<usize>,
    },
    /// `I` fails to preserve the pullback of `left_map: left → base` and
    /// `right_map: right → base`.
    UnpreservedPullback {
        left: Table,
        right: Table,
        base: Table,
        left_map: Vec<usize>,
        right_map: Vec<usize>,
    },
    /// The comparison `I(w)` is not an isomorphism for `map: source → target`.
    NonSimpleMorphism {
        source: Table,
        target: Table,
        map: Vec<usize>,
    },
    /// The pullback of the components over `left_point` and `right_point` is not connected.
    DisconnectedComponentPullback {
        left: Table,
        right: Table,
        base: Table,
        left_map: Vec<usize>,
        right_map: Vec<usize>,
        left_point: usize,
        right_point: usize,
        apex_order: usize,
    },
}

fn semigroup(table: &Table) -> Result<FiniteSemigroup> {
    FiniteSemigroup::from_rows(table.len(), table)
}

impl Witness {
    /// Re-runs the failing check; true iff the failure reproduces.
    pub fn replay(&self, v: &VarietyConfig) -> Result<bool> {
        use crate::galois;
        use crate::semigroup::Homomorphism;
        Ok(match self {
            Witness::DisconnectedComponent {
                semigroup: c,
                point,
                ..
            } => {
                let comp = galois::connected_component(&semigroup(c)?, v, *point)?;
                !galois::is_connected(&comp.carrier, v)?
            }
            Witness::DisconnectedProduct {
                left,
                right,
                left_point,
                right_point,
                ..
            } => {
                let l = galois::connected_component(&semigroup(left)?, v, *left_point)?;
                let r = galois::connected_component(&semigroup(right)?, v, *right_point)?;
                let prod = crate::limits::product(&l.carrier, &r.carrier);
                !galois::is_connected(&prod.apex, v)?
            }
            Witness::UnpreservedUnitSquare {
                semigroup: c,
                corner,
                map,
            } => !galois::unit_square_preserved(&semigroup(c)?, &semigroup(corner)?, map, v)?,
            Witness::UnpreservedPullback {
                left,
                right,
                base,
                left_map,
                right_map,
            } => {
                let base = semigroup(base)?;
                let f = Homomorphism::new(semigroup(left)?, base.clone(), left_map.clone())?;
                let g = Homomorphism::new(semigroup(right)?, base, right_map.clone())?;
                !galois::oracle_pullback_preserved(&f, &g, v)?.verdict
            }
            Witness::NonSimpleMorphism {
                source,
                target,
                map,
            } => {
                let f = Homomorphism::new(semigroup(source)?, semigroup(target)?, map.clone())?;
                !galois::check_simple(&f, v)?.verdict
            }
            Witness::DisconnectedComponentPullback {
                left,
                right,
                base,
                left_map,
                right_map,
                left_point,
                right_point,
                ..
            } => {
                let base = semigroup(base)?;
                let f = Homomorphism::new(semigroup(left)?, base.clone(), left_map.clone())?;
                let g = Homomorphism::new(semigroup(right)?, base, right_map.clone())?;
                !galois::component_pullback_connected(&f, &g, *left_point, *right_point, v)?
            }
        })
    }
}

/// Oracle search bounds and modes used to produce a report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_m_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_d_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub tool_version: String,
    pub variety: String,
    pub property: Property,
    pub verdict: bool,
    pub checked: usize,
    pub counterexample_count: usize,
    pub witnesses: Vec<Witness>,
    pub bounds: Bounds,
    pub corpus_hash: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_agreement: Option<bool>,
}

/// Accumulates checks for one property.
#[derive(Debug)]
pub struct ReportBuilder {
    variety: String,
    property: Property,
    checked: usize,
    failures: usize,
    witnesses: Vec<Witness>,
    bounds: Bounds,
}

impl ReportBuilder {
    pub fn new(v: &VarietyConfig, property: Property) -> Self {
        ReportBuilder {
            variety: v.name().to_string(),
            property,
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
            bounds: Bounds::default(),
        }
    }

    pub fn bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    /// Counts one instance; on failure builds and stores a witness while below the cap.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn finish(self, corpus_hash: String) -> PropertyReport {
        PropertyReport {
            tool_version: TOOL_VERSION.to_string(),
            variety: self.variety,
            property: self.property,
            verdict: self.failures == 0,
            checked: self.checked,
            counterexample_count: self.failures,
            witnesses: self.witnesses,
            bounds: self.bounds,
            corpus_hash,
            oracle_agreement: None,
        }
    }
}

/// Hex SHA-256 of the `.sgt` rendering of `semigroups`.
pub fn hash_semigroups<'a>(semigroups: impl IntoIterator<Item = &'a FiniteSemigroup>) -> String {
    let text = sgt::write_blocks(semigroups.into_iter().map(|s| (None, s)));
    hash_bytes(text.as_bytes())
}

pub fn hash_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Per-order corpus summary embedded in survey documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub order: usize,
    pub count: usize,
    pub hash: String,
}

/// Top-level JSON document written by `check` and `survey`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub variety: VarietyConfig,
    pub corpus_hash: String,
    pub corpus: Vec<CorpusSummary>,
    pub reports: Vec<PropertyReport>,
}

impl ReportDocument {
    pub fn new(
        variety: &VarietyConfig,
        corpus_hash: String,
        corpus: Vec<CorpusSummary>,
        reports: Vec<PropertyReport>,
    ) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            variety: variety.clone(),
            corpus_hash,
            corpus,
            reports,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
