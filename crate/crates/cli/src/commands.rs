use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use reflect_core::enumeration::{
    enumerate_semigroups, write_corpus, CorpusCache, CorpusFilter, CorpusLibrary,
};
use reflect_core::galois::{
    check_localization_condition, check_semi_left_exact, check_simple, check_simple_incoming,
    check_stable_units_pair, check_stable_units_relative, connected_components,
    oracle_pullback_preserved, oracle_semi_left_exact, oracle_stable_units,
};
use reflect_core::reflection::{check_condition_e, reflect};
use reflect_core::report::{
    hash_semigroups, Property, PropertyReport, ReportBuilder, ReportDocument,
};
use reflect_core::semigroup::homomorphism_maps;
use reflect_core::sgt;
use reflect_core::survey::SurveyOptions;
use reflect_core::{Error, FiniteSemigroup, Homomorphism, VarietyConfig};
use serde_json::json;

use crate::{CheckArgs, EXIT_DISAGREEMENT, EXIT_DOMAIN, EXIT_FAILS, EXIT_HOLDS, EXIT_INPUT};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotInDomain(_)
            | Error::NotInSubvariety(_)
            | Error::OrderTooLarge { .. }
            | Error::CorpusMissing(_) => EXIT_DOMAIN,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

struct Named {
    name: String,
    semigroup: FiniteSemigroup,
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Vec<Named>, Failure> {
    let doc = sgt::parse(&read_text(path)?).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })?;
    if doc.blocks.is_empty() {
        return Err(usage(format!("{}: no tables", path.display())));
    }
    Ok(doc
        .blocks
        .into_iter()
        .enumerate()
        .map(|(i, b)| Named {
            name: b
                .name
                .unwrap_or_else(|| format!("{}[{}]", path.display(), i + 1)),
            semigroup: b.semigroup,
        })
        .collect())
}

fn load_all(paths: &[impl AsRef<Path>]) -> Result<Vec<Named>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        out.extend(load(p.as_ref())?);
    }
    Ok(out)
}

fn load_library(max_order: usize) -> Result<CorpusLibrary, Failure> {
    Ok(CorpusLibrary::load(&CorpusCache::from_env(), max_order)?)
}

fn table_text(s: &FiniteSemigroup) -> String {
    s.rows().iter().map(|r| format!("{}\n", join(r))).collect()
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn set(xs: &[usize]) -> String {
    format!(
        "{{{}}}",
        xs.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn reflect_cmd_output(blocks: &[Named], v: &VarietyConfig, json: bool) -> Result<String, Failure> {
    let mut text = String::new();
    let mut results = Vec::new();
    for b in blocks {
        let r = reflect(&b.semigroup, v)?;
        if json {
            results.push(json!({
                "name": b.name,
                "order": b.semigroup.order(),
                "image": r.image.rows(),
                "unit": r.unit.map(),
            }));
        } else {
            let _ = writeln!(text, "== {} ==", b.name);
            let _ = writeln!(text, "image (order {}):", r.image.order());
            text.push_str(&table_text(&r.image));
            let _ = writeln!(text, "unit: {}", join(r.unit.map()));
        }
    }
    if json {
        let doc = json!({ "variety": v.name(), "results": results });
        text = serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n";
    }
    Ok(text)
}

pub fn reflect_cmd(file: &Path, variety: &str, json: bool) -> CmdResult {
    let v = VarietyConfig::by_name(variety)?;
    let blocks = load(file)?;
    print!("{}", reflect_cmd_output(&blocks, &v, json)?);
    Ok(EXIT_HOLDS)
}

pub fn components(file: &Path, variety: &str, json: bool) -> CmdResult {
    let v = VarietyConfig::by_name(variety)?;
    let blocks = load(file)?;
    let mut text = String::new();
    let mut results = Vec::new();
    for b in &blocks {
        let comps = connected_components(&b.semigroup, &v)?;
        let mut entries = Vec::new();
        if !json {
            let _ = writeln!(text, "== {} ==", b.name);
        }
        for c in &comps {
            let reflected = reflect(&c.carrier, &v)?.image.order();
            let connected = reflected == 1;
            if json {
                entries.push(json!({
                    "point": c.point,
                    "fiber": c.fiber(),
                    "carrier": c.carrier.rows(),
                    "connected": connected,
                    "reflection_order": reflected,
                }));
            } else if connected {
                let _ = writeln!(
                    text,
                    "point {}: fiber {} connected",
                    c.point,
                    set(c.fiber())
                );
            } else {
                let _ = writeln!(
                    text,
                    "point {}: fiber {} not connected (reflection order {reflected})",
                    c.point,
                    set(c.fiber())
                );
            }
        }
        results.push(json!({ "name": b.name, "components": entries }));
    }
    if json {
        let doc = json!({ "variety": v.name(), "results": results });
        text = serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n";
    }
    print!("{text}");
    Ok(EXIT_HOLDS)
}

/// Accumulated output of `check`.
struct Outcome {
    text: String,
    reports: Vec<PropertyReport>,
    holds: bool,
    disagreement: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            text: String::new(),
            reports: Vec::new(),
            holds: true,
            disagreement: false,
        }
    }

    fn header(&mut self, title: &str) {
        let _ = writeln!(self.text, "== {title} ==");
    }

    /// Adds a report that decides the verdict.
    fn verdict(&mut self, label: &str, report: PropertyReport) {
        self.holds &= report.verdict;
        self.line(label, &report);
        self.reports.push(report);
    }

    /// Adds an oracle report and records whether it agrees with `theorem`.
    fn oracle(&mut self, label: &str, report: PropertyReport, agree: Option<bool>) {
        self.line(label, &report);
        match agree {
            Some(true) => self.text.push_str("agreement: OK\n"),
            Some(false) => {
                self.text.push_str("agreement: DISAGREEMENT\n");
                self.disagreement = true;
            }
            None => self.text.push_str("agreement: not applicable\n"),
        }
        if let Some(last) = self.reports.last_mut() {
            if agree.is_some() {
                last.oracle_agreement = agree;
            }
        }
        self.reports.push(report);
    }

    fn line(&mut self, label: &str, r: &PropertyReport) {
        let verdict = if r.verdict { "holds" } else { "fails" };
        let _ = writeln!(
            self.text,
            "{label}: {verdict} ({} checked, {} counterexamples)",
            r.checked, r.counterexample_count
        );
        for w in &r.witnesses {
            let _ = writeln!(
                self.text,
                "  witness: {}",
                serde_json::to_string(w).expect("witnesses serialize")
            );
        }
    }
}

fn morphisms_report(
    v: &VarietyConfig,
    source: &FiniteSemigroup,
    target: &FiniteSemigroup,
) -> Result<PropertyReport, Failure> {
    let mut builder = ReportBuilder::new(v, Property::Simple);
    for map in homomorphism_maps(source, target) {
        let f = Homomorphism::new(source.clone(), target.clone(), map)?;
        let r = check_simple(&f, v)?;
        builder.record(r.verdict, || r.witnesses[0].clone());
    }
    Ok(builder.finish(hash_semigroups([source, target])))
}

fn cospan(
    blocks: &[Named],
    maps: &[impl AsRef<Path>],
) -> Result<(Homomorphism, Homomorphism), Failure> {
    let (a, b, c) = match blocks {
        [a, c] => (a, a, c),
        [a, b, c] => (a, b, c),
        _ => {
            return Err(usage(
                "a cospan needs two or three tables (A, C) or (A, B, C)",
            ))
        }
    };
    let f = sgt::parse_map(&read_text(maps[0].as_ref())?)?;
    let g = sgt::parse_map(&read_text(maps[1].as_ref())?)?;
    let f = Homomorphism::new(a.semigroup.clone(), c.semigroup.clone(), f)?;
    let g = Homomorphism::new(b.semigroup.clone(), c.semigroup.clone(), g)?;
    Ok((f, g))
}

pub fn check(args: &CheckArgs) -> CmdResult {
    let v = VarietyConfig::by_name(&args.variety.variety)?;
    let property = Property::parse(&args.property)
        .ok_or_else(|| usage(format!("unknown property `{}`", args.property)))?;
    let blocks = load_all(&args.files)?;
    for b in &blocks {
        if !v.in_domain(&b.semigroup) {
            let e = Failure::from(Error::NotInDomain(v.name().to_string()));
            return Err(Failure {
                message: format!("{}: {}", b.name, e.message),
                ..e
            });
        }
    }
    let needs_cospan = matches!(
        property,
        Property::LocalizationSufficient | Property::LeftExactOracle
    );
    if needs_cospan != args.cospan.is_some() {
        return Err(usage(if needs_cospan {
            "this property needs --cospan F G"
        } else {
            "--cospan only applies to localization and left-exact"
        }));
    }
    let k = args.max_order;
    let library = if args.oracle && !needs_cospan {
        Some(load_library(k)?)
    } else {
        None
    };
    let mut out = Outcome::new();

    match property {
        Property::SemiLeftExact => {
            for b in &blocks {
                out.header(&b.name);
                let r = check_semi_left_exact(&b.semigroup, &v)?;
                let theorem = r.verdict;
                out.verdict("semi_left_exact", r);
                if let Some(lib) = &library {
                    let o = oracle_semi_left_exact(&b.semigroup, &v, lib, k)?;
                    let agree = o.verdict == theorem;
                    out.oracle(&format!("oracle (M order <= {k})"), o, Some(agree));
                }
            }
        }
        Property::StableUnits => {
            for l in &blocks {
                for r in &blocks {
                    out.header(&format!("{} x {}", l.name, r.name));
                    out.verdict(
                        "stable_units",
                        check_stable_units_pair(&l.semigroup, &r.semigroup, &v)?,
                    );
                }
            }
            if let Some(lib) = &library {
                for b in &blocks {
                    out.header(&b.name);
                    let r = check_stable_units_relative(&b.semigroup, &v, lib, k)?;
                    let theorem = r.verdict;
                    out.verdict(&format!("stable_units against corpus (D order <= {k})"), r);
                    let o = oracle_stable_units(&b.semigroup, &v, lib, k)?;
                    let agree = o.verdict == theorem;
                    out.oracle(&format!("oracle (D order <= {k})"), o, Some(agree));
                }
            }
        }
        Property::Simple => {
            for s in &blocks {
                for t in &blocks {
                    out.header(&format!("{} -> {}", s.name, t.name));
                    out.verdict("simple", morphisms_report(&v, &s.semigroup, &t.semigroup)?);
                }
            }
            if let Some(lib) = &library {
                for b in &blocks {
                    out.header(&b.name);
                    let r = check_simple_incoming(&b.semigroup, &v, lib, k)?;
                    let theorem = r.verdict;
                    out.verdict(
                        &format!("simple for morphisms into it (source order <= {k})"),
                        r,
                    );
                    let sle = check_semi_left_exact(&b.semigroup, &v)?;
                    let agree =
                        check_condition_e(&b.semigroup, &v)?.then_some(sle.verdict == theorem);
                    out.oracle("semi_left_exact", sle, agree);
                }
            }
        }
        Property::LocalizationSufficient => {
            let (f, g) = cospan(&blocks, args.cospan.as_deref().unwrap_or_default())?;
            out.header("cospan");
            let r = check_localization_condition(&f, &g, &v)?;
            let condition = r.verdict;
            out.verdict("localization_sufficient", r);
            if args.oracle {
                let o = oracle_pullback_preserved(&f, &g, &v)?;
                // The condition is only sufficient: a preserved pullback may still fail it.
                let agree = !condition || o.verdict;
                out.oracle("pullback preserved", o, Some(agree));
            }
        }
        Property::LeftExactOracle => {
            let (f, g) = cospan(&blocks, args.cospan.as_deref().unwrap_or_default())?;
            out.header("cospan");
            out.verdict("left_exact_oracle", oracle_pullback_preserved(&f, &g, &v)?);
        }
    }

    if args.json {
        let (hash, corpus) = match &library {
            Some(lib) => (lib.hash(k), lib.summaries(k)),
            None => (
                hash_semigroups(blocks.iter().map(|b| &b.semigroup)),
                Vec::new(),
            ),
        };
        print!(
            "{}",
            ReportDocument::new(&v, hash, corpus, out.reports).to_json()
        );
    } else {
        print!("{}", out.text);
    }
    Ok(if out.disagreement {
        EXIT_DISAGREEMENT
    } else if out.holds {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    })
}

pub fn enumerate(order: usize, filter: &str, out: Option<&Path>) -> CmdResult {
    let filter = CorpusFilter::by_name(filter)?;
    let corpus = enumerate_semigroups(order, &filter)?;
    match out {
        Some(dir) => {
            let path = write_corpus(dir, &corpus)?;
            println!(
                "wrote {} semigroups of order {order} to {}",
                corpus.tables.len(),
                path.display()
            );
        }
        None => print!("{}", corpus.to_sgt()),
    }
    Ok(EXIT_HOLDS)
}

pub struct SurveyFlags {
    pub oracle: bool,
    pub oracle_order: usize,
    pub morphism_order: usize,
}

pub fn survey(
    variety: &str,
    max_order: usize,
    properties: &str,
    flags: SurveyFlags,
    out: Option<&Path>,
) -> CmdResult {
    let v = VarietyConfig::by_name(variety)?;
    let properties = properties
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| Property::parse(p).ok_or_else(|| usage(format!("unknown property `{p}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let needed = if flags.oracle {
        max_order.max(flags.oracle_order)
    } else {
        max_order
    };
    if needed > reflect_core::enumeration::MAX_ENUMERATION_ORDER {
        return Err(Error::OrderTooLarge {
            order: needed,
            bound: reflect_core::enumeration::MAX_ENUMERATION_ORDER,
        }
        .into());
    }
    let library = load_library(needed)?;
    let options = SurveyOptions {
        oracle: flags.oracle,
        max_m_order: flags.oracle_order,
        max_d_order: flags.oracle_order,
        max_morphism_order: flags.morphism_order,
    };
    let doc = reflect_core::survey::survey(&v, &library, max_order, &properties, &options)?;
    let text = doc.to_json();
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            for r in &doc.reports {
                let agreement = match r.oracle_agreement {
                    Some(true) => ", oracle agrees",
                    Some(false) => ", oracle DISAGREES",
                    None => "",
                };
                println!(
                    "{}: {} ({} checked, {} counterexamples{agreement})",
                    r.property.as_str(),
                    if r.verdict { "holds" } else { "fails" },
                    r.checked,
                    r.counterexample_count
                );
            }
        }
        None => print!("{text}"),
    }
    let disagreement = doc
        .reports
        .iter()
        .any(|r| r.oracle_agreement == Some(false));
    Ok(if disagreement {
        EXIT_DISAGREEMENT
    } else {
        EXIT_HOLDS
    })
}
