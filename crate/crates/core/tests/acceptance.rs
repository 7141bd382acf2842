//! One line per acceptance criterion, with pinned sizes and time budgets.
//! Run with `cargo test -p xi-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use serde_json::json;
use xi_core::pseudocover::BuildConfig;
use xi_core::report::{Check, Report};
use xi_core::riesz::CoefficientGroup;
use xi_core::suite;

const SEED: u64 = 2024;

struct Outcome {
    id: usize,
    title: &'static str,
    pass: bool,
    elapsed: Duration,
    budget: Duration,
    note: String,
}

fn summarize(checks: &[Check]) -> (bool, String) {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        (true, format!("{} checks", checks.len()))
    } else {
        (false, format!("failed: {}", failed.join("; ")))
    }
}

fn criterion(id: usize, title: &'static str, budget_ms: u64, f: impl FnOnce() -> Vec<Check>) -> Outcome {
    let start = Instant::now();
    let checks = f();
    let elapsed = start.elapsed();
    let (ok, note) = summarize(&checks);
    let budget = Duration::from_millis(budget_ms);
    Outcome {
        id,
        title,
        pass: ok && elapsed < budget,
        elapsed,
        budget,
        note,
    }
}

fn riesz() -> Vec<Check> {
    suite::riesz_battery(SEED, 1000, 200).expect("riesz battery")
}

fn transversal() -> Vec<Check> {
    suite::transversal_battery(SEED, 200)
}

fn pc() -> Vec<Check> {
    let cfg = BuildConfig {
        n: 0,
        depth: 2,
        seed: SEED,
        ..Default::default()
    };
    suite::pc_certify(&cfg, 10_000).expect("build").1
}

fn report(name: &str, checks: Vec<Check>) -> Report {
    Report::new(json!({"suite": name, "seed": SEED}), checks, 0)
}

#[test]
fn acceptance() {
    let mut out = Vec::new();

    out.push(criterion(1, "xi windows of sizes 1-10", 1_000, || {
        suite::xi_sizes(10).expect("windows")
    }));
    out.push(criterion(2, "500 open surjections, <= 6 points", 10_000, || {
        vec![suite::pseudo_maps(SEED, 500, 6)]
    }));
    out.push(criterion(3, "compact-group rigidity, <= 5 points, order <= 6", 120_000, || {
        vec![suite::rigidity(5)]
    }));
    out.push(criterion(4, "Riesz interpolation over Q, 1000 + 200 oracle", 30_000, riesz));
    out.push(criterion(5, "no Z-valued interpolant up to [-5, 5], 4/3 over Q", 5_000, || {
        let mut c = suite::riesz_counterexample(CoefficientGroup::Integers, 5).expect("Z");
        c.extend(suite::riesz_counterexample(CoefficientGroup::Rationals, 1).expect("Q"));
        c
    }));
    out.push(criterion(6, "ideal lattice of an 8-point window", 5_000, || {
        suite::ideal_lattice(0, 7).expect("lattice")
    }));
    out.push(criterion(7, "tree map f, n = 0, levels 1-4", 30_000, || {
        suite::f_claims(0, 4).expect("f")
    }));
    out.push(criterion(8, "200 transversality instances", 30_000, transversal));
    out.push(criterion(9, "build_h n = 0 depth 2, verifier round trip", 120_000, pc));
    out.push(criterion(10, "criteria 4, 8, 9 rerun identically", 300_000, || {
        let runs = [("riesz", riesz as fn() -> Vec<Check>), ("transversal", transversal), ("pc", pc)];
        runs.iter()
            .map(|(name, f)| {
                let a = report(name, f());
                let b = report(name, f());
                let same = serde_json::to_string(&a).ok() == serde_json::to_string(&b).ok();
                Check::new(format!("{name} reports identical"), same, json!(null))
            })
            .collect()
    }));

    for o in &out {
        println!(
            "criterion {:>2}: {}  {:<50} {:>8.1} ms / {:>7} ms  {}",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.title,
            o.elapsed.as_secs_f64() * 1e3,
            o.budget.as_millis(),
            o.note
        );
    }
    let failed: Vec<usize> = out.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
