//! Semigroup identities and the variety configurations that define a reflection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;

const VARIABLE_NAMES: &[char] = &['x', 'y', 'z', 'u', 'v', 'w'];

/// A nonempty word over variable indices, read as a left-to-right product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(vars: Vec<usize>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidIdentity("empty word".into()));
        }
        Ok(Word(vars))
    }

    pub fn variables(&self) -> &[usize] {
        &self.0
    }

    pub fn evaluate(&self, a: &FiniteSemigroup, assignment: &[usize]) -> usize {
        let mut it = self.0.iter();
        let first = assignment[*it.next().expect("words are nonempty")];
        it.fold(first, |acc, &v| a.mul(acc, assignment[v]))
    }
}

/// An identity `lhs = rhs`, written like `xy=yx`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Identity {
    lhs: Word,
    rhs: Word,
    arity: usize,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        let arity = lhs.0.iter().chain(&rhs.0).max().map_or(0, |&m| m + 1);
        Identity { lhs, rhs, arity }
    }

    pub fn lhs(&self) -> &Word {
        &self.lhs
    }

    pub fn rhs(&self) -> &Word {
        &self.rhs
    }

    /// Number of variables, i.e. one more than the largest variable index.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Every assignment of elements of `a` to the variables, in lexicographic order.
    pub fn instances<'a>(
        &'a self,
        a: &'a FiniteSemigroup,
    ) -> impl Iterator<Item = (usize, usize)> + 'a {
        Assignments::new(a.order(), self.arity)
            .map(move |asg| (self.lhs.evaluate(a, &asg), self.rhs.evaluate(a, &asg)))
    }

    pub fn holds_in(&self, a: &FiniteSemigroup) -> bool {
        self.instances(a).all(|(l, r)| l == r)
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidIdentity(s.to_string());
        let (l, r) = s.split_once('=').ok_or_else(bad)?;
        let mut letters: Vec<char> = Vec::new();
        let mut word = |side: &str| -> Result<Word> {
            let mut vars = Vec::new();
            for c in side.chars().filter(|c| !c.is_whitespace()) {
                if !c.is_ascii_alphabetic() {
                    return Err(bad());
                }
                let idx = match letters.iter().position(|&l| l == c) {
                    Some(i) => i,
                    None => {
                        letters.push(c);
                        letters.len() - 1
                    }
                };
                vars.push(idx);
            }
            Word::new(vars).map_err(|_| bad())
        };
        let lhs = word(l)?;
        let rhs = word(r)?;
        Ok(Identity::new(lhs, rhs))
    }
}

impl TryFrom<String> for Identity {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Identity> for String {
    fn from(id: Identity) -> String {
        id.to_string()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_word = |f: &mut fmt::Formatter<'_>, w: &Word| -> fmt::Result {
            for &v in &w.0 {
                match VARIABLE_NAMES.get(v) {
                    Some(c) => write!(f, "{c}")?,
                    None => write!(f, "x{v}")?,
                }
            }
            Ok(())
        };
        write_word(f, &self.lhs)?;
        write!(f, "=")?;
        write_word(f, &self.rhs)
    }
}

/// All tuples in `{0..base}^len`, lexicographic.
struct Assignments {
    base: usize,
    current: Option<Vec<usize>>,
}

impl Assignments {
    fn new(base: usize, len: usize) -> Self {
        let current = if base == 0 && len > 0 {
            None
        } else {
            Some(vec![0; len])
        };
        Assignments { base, current }
    }
}

impl Iterator for Assignments {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.base {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

/// True iff every identity holds under every assignment; vacuous on the empty semigroup.
pub fn satisfies_identities(a: &FiniteSemigroup, ids: &[Identity]) -> bool {
    ids.iter().all(|id| id.holds_in(a))
}

pub fn parse_identities(specs: &[&str]) -> Result<Vec<Identity>> {
    specs.iter().map(|s| s.parse()).collect()
}

/// A reflection `I ⊣ H` from the variety cut out by `domain` onto the subvariety cut out by
/// `subvariety`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VarietyConfig {
    name: String,
    #[serde(rename = "domain_identities")]
    domain: Vec<Identity>,
    #[serde(rename = "subvariety_identities")]
    subvariety: Vec<Identity>,
}

impl VarietyConfig {
    /// Fails unless every domain identity is also listed among the subvariety identities.
    pub fn new(
        name: impl Into<String>,
        domain: Vec<Identity>,
        subvariety: Vec<Identity>,
    ) -> Result<Self> {
        if let Some(missing) = domain.iter().find(|id| !subvariety.contains(id)) {
            return Err(Error::InvalidIdentity(format!(
                "domain identity {missing} missing from the subvariety"
            )));
        }
        Ok(VarietyConfig {
            name: name.into(),
            domain,
            subvariety,
        })
    }

    fn builtin(name: &str, domain: &[&str], subvariety: &[&str]) -> Self {
        Self::new(
            name,
            parse_identities(domain).expect("builtin identities parse"),
            parse_identities(subvariety).expect("builtin identities parse"),
        )
        .expect("builtin configs are consistent")
    }

    /// Semigroups into semilattices.
    pub fn sgr_to_slat() -> Self {
        Self::builtin("slat", &[], &["xx=x", "xy=yx"])
    }

    /// Semigroups into bands.
    pub fn sgr_to_band() -> Self {
        Self::builtin("band", &[], &["xx=x"])
    }

    /// Bands into semilattices.
    pub fn band_to_slat() -> Self {
        Self::builtin("band-slat", &["xx=x"], &["xx=x", "xy=yx"])
    }

    /// Semigroups into commutative semigroups. Not idempotent, so condition (d) fails.
    pub fn sgr_to_commutative() -> Self {
        Self::builtin("commutative", &[], &["xy=yx"])
    }

    /// Looks up `slat`, `band`, `band-slat` or `commutative`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "slat" => Ok(Self::sgr_to_slat()),
            "band" => Ok(Self::sgr_to_band()),
            "band-slat" => Ok(Self::band_to_slat()),
            "commutative" => Ok(Self::sgr_to_commutative()),
            other => Err(Error::UnknownVariety(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_identities(&self) -> &[Identity] {
        &self.domain
    }

    pub fn subvariety_identities(&self) -> &[Identity] {
        &self.subvariety
    }

    pub fn in_domain(&self, a: &FiniteSemigroup) -> bool {
        satisfies_identities(a, &self.domain)
    }

    pub fn in_subvariety(&self, a: &FiniteSemigroup) -> bool {
        satisfies_identities(a, &self.subvariety)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::named::*;

    #[test]
    fn parse_and_display() {
        let id: Identity = "xy=yx".parse().unwrap();
        assert_eq!(id.arity(), 2);
        assert_eq!(id.to_string(), "xy=yx");
        let id: Identity = "aba = a".parse().unwrap();
        assert_eq!(id.to_string(), "xyx=x");
        assert!("xx".parse::<Identity>().is_err());
        assert!("=x".parse::<Identity>().is_err());
        assert!("x1=x".parse::<Identity>().is_err());
    }

    #[test]
    fn satisfaction_examples() {
        let slat = parse_identities(&["xx=x", "xy=yx"]).unwrap();
        let band = parse_identities(&["xx=x"]).unwrap();
        let comm = parse_identities(&["xy=yx"]).unwrap();
        assert!(satisfies_identities(&chain_2(), &slat));
        assert!(satisfies_identities(&left_zero_2(), &band));
        assert!(!satisfies_identities(&left_zero_2(), &comm));
        assert!(satisfies_identities(&FiniteSemigroup::empty(), &slat));
        assert!(satisfies_identities(&FiniteSemigroup::empty(), &comm));
    }

    #[test]
    fn assignments_cover_the_cube() {
        assert_eq!(Assignments::new(3, 2).count(), 9);
        assert_eq!(Assignments::new(0, 2).count(), 0);
        assert_eq!(Assignments::new(0, 0).count(), 1);
    }

    #[test]
    fn config_requires_superset() {
        let ids = parse_identities(&["xx=x"]).unwrap();
        assert!(VarietyConfig::new("bad", ids, vec![]).is_err());
        assert_eq!(
            VarietyConfig::by_name("band-slat").unwrap().name(),
            "band-slat"
        );
        assert!(VarietyConfig::by_name("groups").is_err());
    }

    #[test]
    fn serializes_as_strings() {
        let json = serde_json::to_string(&VarietyConfig::band_to_slat()).unwrap();
        assert_eq!(
            json,
            r#"{"name":"band-slat","domain_identities":["xx=x"],"subvariety_identities":["xx=x","xy=yx"]}"#
        );
    }
}
