//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod support;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reflect_core::enumeration::{enumerate_semigroups, CorpusFilter, CorpusLibrary};
use reflect_core::galois::{
    check_localization_condition, check_semi_left_exact, check_simple, check_stable_units_pair,
    fiber_injectivity_lemma, is_connected, oracle_pullback_preserved, oracle_semi_left_exact,
    oracle_stable_units,
};
use reflect_core::limits::pullback;
use reflect_core::reflection::{check_condition_e, check_ground_conditions, GroundCondition};
use reflect_core::report::{hash_bytes, Property, Witness};
use reflect_core::semigroup::{homomorphism_maps, named};
use reflect_core::survey::{survey, SurveyOptions};
use reflect_core::{sgt, FiniteSemigroup, Homomorphism, VarietyConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!(
            "took {:.1}s, limit {}s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        )
    })
}

fn domain<'a>(lib: &'a CorpusLibrary, v: &VarietyConfig, max: usize) -> Vec<&'a FiniteSemigroup> {
    lib.members_where(max, |s| v.in_domain(s)).unwrap()
}

fn sgr_varieties() -> [VarietyConfig; 2] {
    [VarietyConfig::sgr_to_slat(), VarietyConfig::sgr_to_band()]
}

fn all_varieties() -> [VarietyConfig; 3] {
    [
        VarietyConfig::sgr_to_slat(),
        VarietyConfig::sgr_to_band(),
        VarietyConfig::band_to_slat(),
    ]
}

fn sle(c: &FiniteSemigroup, v: &VarietyConfig) -> bool {
    check_semi_left_exact(c, v).unwrap().verdict
}

fn components_theorem_vs_oracle() -> Outcome {
    let start = Instant::now();
    let lib = CorpusLibrary::generate(3).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for v in sgr_varieties() {
        for c in domain(&lib, &v, 3) {
            let oracle = oracle_semi_left_exact(c, &v, &lib, 3).unwrap().verdict;
            ensure(sle(c, &v) == oracle, || {
                format!("{}: disagreement at {:?}", v.name(), c.rows())
            })?;
            checked += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "0 disagreements over {checked} (semigroup, variety) pairs, M order <= 3, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn product_pairs_vs_oracle() -> Outcome {
    let start = Instant::now();
    let lib = CorpusLibrary::generate(3).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for v in sgr_varieties() {
        let cs = domain(&lib, &v, 3);
        for c in &cs {
            let pairs = cs
                .iter()
                .all(|d| check_stable_units_pair(c, d, &v).unwrap().verdict);
            let oracle = oracle_stable_units(c, &v, &lib, 3).unwrap().verdict;
            ensure(pairs == oracle, || {
                format!("{}: disagreement at {:?}", v.name(), c.rows())
            })?;
            checked += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "0 disagreements over {checked} (semigroup, variety) pairs, D order <= 3, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn semilattice_survey() -> Outcome {
    let start = Instant::now();
    let lib = CorpusLibrary::generate(4).map_err(|e| e.to_string())?;
    let v = VarietyConfig::sgr_to_slat();
    let doc = survey(
        &v,
        &lib,
        4,
        &[Property::SemiLeftExact, Property::StableUnits],
        &SurveyOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(900))?;
    let (components, products) = (&doc.reports[0], &doc.reports[1]);
    ensure(components.counterexample_count == 0, || {
        format!(
            "{} disconnected components",
            components.counterexample_count
        )
    })?;
    ensure(products.counterexample_count == 0, || {
        format!("{} disconnected products", products.counterexample_count)
    })?;
    Ok(format!(
        "{} components and {} component products over order <= 4, none disconnected, {:.2}s",
        components.checked,
        products.checked,
        start.elapsed().as_secs_f64()
    ))
}

fn band_survey_witness() -> Outcome {
    let lib = CorpusLibrary::generate(4).map_err(|e| e.to_string())?;
    let v = VarietyConfig::sgr_to_band();
    let doc = survey(
        &v,
        &lib,
        4,
        &[Property::SemiLeftExact],
        &SurveyOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let report = &doc.reports[0];
    ensure(report.counterexample_count >= 1, || {
        "no counterexample found".into()
    })?;
    let Witness::DisconnectedComponent {
        semigroup, point, ..
    } = &report.witnesses[0]
    else {
        return Err("unexpected witness kind".into());
    };
    let c = FiniteSemigroup::from_rows(semigroup.len(), semigroup).unwrap();

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = support::write(
        dir.path(),
        "witness.sgt",
        &sgt::write_blocks([(Some("witness"), &c)]),
    );
    let out = support::run(
        &dir.path().join("cache"),
        &[
            "check",
            &file.display().to_string(),
            "--property",
            "sle",
            "--variety",
            "band",
        ],
    );
    ensure(out.status.code() == Some(1), || {
        format!("check exited with {:?}", out.status.code())
    })?;
    let oracle = oracle_semi_left_exact(&c, &v, &lib, 3).unwrap();
    ensure(!oracle.verdict, || "oracle accepts the witness".into())?;
    Ok(format!(
        "{} failing semigroups; first {:?} (point {point}) fails in check and oracle",
        report.witnesses.len(),
        semigroup
    ))
}

fn not_a_localization() -> Outcome {
    let lib = CorpusLibrary::generate(3).map_err(|e| e.to_string())?;
    let v = VarietyConfig::sgr_to_slat();
    let doc = survey(
        &v,
        &lib,
        3,
        &[Property::LeftExactOracle],
        &SurveyOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let report = &doc.reports[0];
    ensure(report.counterexample_count >= 1, || {
        "all pullbacks preserved".into()
    })?;
    let Witness::UnpreservedPullback {
        left,
        right,
        base,
        left_map,
        right_map,
    } = &report.witnesses[0]
    else {
        return Err("unexpected witness kind".into());
    };
    let table = |t: &Vec<Vec<usize>>| FiniteSemigroup::from_rows(t.len(), t).unwrap();
    let f = Homomorphism::new(table(left), table(base), left_map.clone()).unwrap();
    let g = Homomorphism::new(table(right), table(base), right_map.clone()).unwrap();
    ensure(
        !oracle_pullback_preserved(&f, &g, &v).unwrap().verdict,
        || "witness does not replay".into(),
    )?;

    // Two points of the two-element chain: the component pullback is empty.
    let s2 = named::chain_2();
    let zero = Homomorphism::point(&s2, 0).unwrap();
    let one = Homomorphism::point(&s2, 1).unwrap();
    let empty = pullback(&zero, &one).unwrap().apex;
    ensure(
        empty.is_empty() && !is_connected(&empty, &v).unwrap(),
        || "empty pullback reported connected".into(),
    )?;
    ensure(
        !check_localization_condition(&zero, &one, &v)
            .unwrap()
            .verdict,
        || "sufficient condition holds on the empty pullback".into(),
    )?;
    Ok(format!(
        "{} of {} cospans not preserved; T -> S2 <- T condition fails on the empty pullback",
        report.counterexample_count, report.checked
    ))
}

fn simple_matches_sle() -> Outcome {
    let lib = CorpusLibrary::generate(4).map_err(|e| e.to_string())?;
    let mut details = Vec::new();
    for v in all_varieties() {
        let xs = domain(&lib, &v, 4);
        ensure(xs.iter().all(|x| check_condition_e(x, &v).unwrap()), || {
            format!("{}: condition (e) fails", v.name())
        })?;
        let small = domain(&lib, &v, 3);
        let simple_at = |f: Homomorphism| check_simple(&f, &v).unwrap().verdict;
        let mut simple_set = Vec::new();
        let mut sle_set = Vec::new();
        for x in &small {
            let incoming = small.iter().all(|a| {
                homomorphism_maps(a, x)
                    .into_iter()
                    .all(|m| simple_at(Homomorphism::new((*a).clone(), (*x).clone(), m).unwrap()))
            });
            let outgoing = small.iter().all(|b| {
                homomorphism_maps(x, b)
                    .into_iter()
                    .all(|m| simple_at(Homomorphism::new((*x).clone(), (*b).clone(), m).unwrap()))
            });
            if incoming && outgoing {
                simple_set.push(x.rows());
            }
            if sle(x, &v) {
                sle_set.push(x.rows());
            }
        }
        ensure(simple_set == sle_set, || {
            format!("{}: sets differ", v.name())
        })?;
        details.push(format!("{} {}/{}", v.name(), sle_set.len(), small.len()));
    }
    Ok(format!(
        "condition (e) on all of order <= 4; simple = semi-left-exact sets: {}",
        details.join(", ")
    ))
}

fn surjection(rng: &mut ChaCha8Rng, from: usize, onto: usize) -> Vec<usize> {
    let mut map: Vec<usize> = (0..from)
        .map(|i| if i < onto { i } else { rng.gen_range(0..onto) })
        .collect();
    for i in (1..from).rev() {
        map.swap(i, rng.gen_range(0..=i));
    }
    map
}

fn lemma_self_test() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut injective = 0;
    for _ in 0..1000 {
        let c = rng.gen_range(1..=6);
        let b = rng.gen_range(c..=6);
        let a = rng.gen_range(b..=6);
        let f = surjection(&mut rng, a, b);
        let g = surjection(&mut rng, b, c);
        if b == c {
            injective += 1;
        }
        ensure(fiber_injectivity_lemma(&f, b, &g, c) == Ok(true), || {
            format!("sides disagree for f = {f:?}, g = {g:?}")
        })?;
    }
    Ok(format!(
        "1000 surjection pairs ({injective} with injective g), all agree"
    ))
}

fn ground_structure() -> Outcome {
    let lib = CorpusLibrary::generate(3).map_err(|e| e.to_string())?;
    let corpus: Vec<FiniteSemigroup> = lib.members(3).unwrap().into_iter().cloned().collect();
    for v in all_varieties() {
        let report = check_ground_conditions(&v, &corpus);
        ensure(report.all_hold(), || {
            format!("{}: a condition fails", v.name())
        })?;
    }
    let broken = check_ground_conditions(&VarietyConfig::sgr_to_commutative(), &corpus);
    let d = broken.verdict(GroundCondition::PointsSurject);
    let z2 = named::cyclic_2().rows();
    ensure(!d.holds, || "commutative config passes (d)".into())?;
    ensure(d.witnesses.iter().any(|w| w.semigroups[0] == z2), || {
        "Z2 is not a witness".into()
    })?;
    Ok(format!(
        "(a)-(d) hold for slat, band, band-slat over {} semigroups; commutative fails (d), {} witnesses incl. Z2",
        corpus.len(),
        d.witnesses.len()
    ))
}

fn deterministic_runs() -> Outcome {
    let run = || -> Result<Vec<String>, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let cache = dir.path().join("cache");
        let corpus_dir = dir.path().join("corpus").display().to_string();
        let report = dir.path().join("report.json").display().to_string();
        let steps: [&[&str]; 2] = [
            &["enumerate", "--order", "4", "--out", &corpus_dir],
            &[
                "survey",
                "--variety",
                "band",
                "--max-order",
                "4",
                "--properties",
                "sle,stable-units,simple",
                "--oracle",
                "--out",
                &report,
            ],
        ];
        for args in steps {
            let out = support::run(&cache, args);
            ensure(out.status.success(), || {
                format!("{args:?} exited with {:?}", out.status.code())
            })?;
        }
        let corpus =
            std::fs::read(dir.path().join("corpus/order-4-none.sgt")).map_err(|e| e.to_string())?;
        let report = std::fs::read(&report).map_err(|e| e.to_string())?;
        Ok(vec![hash_bytes(&corpus), hash_bytes(&report)])
    };
    let (first, second) = (run()?, run()?);
    ensure(first == second, || format!("{first:?} != {second:?}"))?;
    Ok(format!(
        "corpus {} report {}",
        &first[0][..12],
        &first[1][..12]
    ))
}

fn enumeration_sanity() -> Outcome {
    let naive: std::collections::BTreeSet<FiniteSemigroup> = (0..16usize)
        .filter_map(|bits| {
            let flat = (0..4).map(|i| (bits >> i) & 1).collect();
            FiniteSemigroup::from_flat(2, flat).ok()
        })
        .map(|s| s.canonical_form().unwrap())
        .collect();
    let pruned = enumerate_semigroups(2, &CorpusFilter::none()).map_err(|e| e.to_string())?;
    ensure(
        pruned.tables == naive.into_iter().collect::<Vec<_>>(),
        || "order-2 corpora differ".into(),
    )?;
    let counts = || -> Result<Vec<usize>, String> {
        (2..=4)
            .map(|n| {
                enumerate_semigroups(n, &CorpusFilter::none())
                    .map(|c| c.tables.len())
                    .map_err(|e| e.to_string())
            })
            .collect()
    };
    let (first, second) = (counts()?, counts()?);
    ensure(first == second, || format!("{first:?} != {second:?}"))?;
    let lib = CorpusLibrary::generate(4).map_err(|e| e.to_string())?;
    let doc = survey(
        &VarietyConfig::sgr_to_slat(),
        &lib,
        4,
        &[],
        &SurveyOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let recorded: Vec<usize> = doc.corpus[2..].iter().map(|c| c.count).collect();
    ensure(recorded == first, || format!("report records {recorded:?}"))?;
    Ok(format!(
        "order 2 matches the 16-table scan; counts at orders 2-4: {first:?}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "semi-left-exact check agrees with oracle (order <= 3)",
            components_theorem_vs_oracle,
        ),
        (
            "stable-units pair check agrees with oracle (order <= 3)",
            product_pairs_vs_oracle,
        ),
        (
            "semilattice reflection has stable units (order <= 4)",
            semilattice_survey,
        ),
        (
            "band reflection is not semi-left-exact (order <= 4)",
            band_survey_witness,
        ),
        (
            "semilattice reflection is not a localization",
            not_a_localization,
        ),
        (
            "simple iff semi-left-exact under condition (e)",
            simple_matches_sle,
        ),
        ("fiber/injectivity lemma self-test", lemma_self_test),
        ("ground structure conditions (a)-(d)", ground_structure),
        ("deterministic enumerate + survey", deterministic_runs),
        ("enumeration sanity", enumeration_sanity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
