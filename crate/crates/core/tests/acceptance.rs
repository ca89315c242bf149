//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fundom::cayley::cayley_demo;
use fundom::dirichlet::{descend, DirichletConfig};
use fundom::verify::{
    check_transversal, conjugate, count_canonical_forms, dixon_transversal, factorial,
    gallery_connected, harness_conjugation, harness_dirichlet, harness_invariance, reindex,
};
use fundom::{
    alternating, cyclic, dihedral, mu_average, parse_cycles, rank_hat, symmetric, ActionSpec,
    PermGroup, PerturbationConfig, ProjectionKind, Projector, StabilizerChain,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_917;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn worked_example() -> Projector {
    Projector::new(ActionSpec::Tensor(vec![
        cyclic(3).unwrap(),
        symmetric(3).unwrap(),
    ]))
}

fn golden() -> Outcome {
    let x = [5.0, 3.0, 3.0, 4.0, 0.0, 0.0, 3.0, 5.0, 1.0];
    let eps: Vec<f64> = (1..=9).map(|i| i as f64 / 18.0).collect();
    let projector = worked_example()
        .with_perturbation(PerturbationConfig::new(eps).unwrap())
        .unwrap();
    let mut failures = Vec::new();
    let hat = rank_hat(&x, projector.perturbation()).unwrap().into_inner();
    if hat != [8, 4, 5, 7, 1, 2, 6, 9, 3] {
        failures.push(format!("x̂ = {hat:?}"));
    }
    let expected: [(ProjectionKind, [f64; 9]); 4] = [
        (
            ProjectionKind::Ascending,
            [0.0, 0.0, 4.0, 5.0, 1.0, 3.0, 3.0, 3.0, 5.0],
        ),
        (
            ProjectionKind::Descending,
            [5.0, 3.0, 1.0, 3.0, 5.0, 3.0, 0.0, 4.0, 0.0],
        ),
        (
            ProjectionKind::AscendingAveraged,
            [0.0, 0.0, 4.0, 1.0, 5.0, 3.0, 3.0, 3.0, 5.0],
        ),
        (ProjectionKind::DescendingAveraged, x),
    ];
    for (kind, want) in expected {
        let got = projector.project(&x, kind).unwrap().canonical;
        if got != want {
            failures.push(format!("{kind}: {got:?}"));
        }
    }
    let mu = mu_average(&x, &[3, 3]).unwrap();
    let want = [23.0, 19.0, 15.0, 16.0, 12.0, 8.0, 21.0, 17.0, 13.0].map(|v: f64| v / 3.0);
    let mu_err = mu
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if mu_err > 1e-12 {
        failures.push(format!("μ error {mu_err:e}"));
    }
    if failures.is_empty() {
        outcome(
            true,
            format!("x̂, asc, desc, asc-avg, desc-avg exact; μ max error {mu_err:.1e}"),
        )
    } else {
        outcome(false, failures.join("; "))
    }
}

/// The groups used for counting, transversals and galleries.
fn small_actions() -> Vec<(&'static str, ActionSpec)> {
    vec![
        ("Z3", ActionSpec::Plain(cyclic(3).unwrap())),
        ("Z4", ActionSpec::Plain(cyclic(4).unwrap())),
        ("D4", ActionSpec::Plain(dihedral(4).unwrap())),
        ("A4", ActionSpec::Plain(alternating(4).unwrap())),
        (
            "S2xS2 on R^4",
            ActionSpec::Tensor(vec![symmetric(2).unwrap(), symmetric(2).unwrap()]),
        ),
        (
            "Z3xS2 on R^6",
            ActionSpec::Tensor(vec![cyclic(3).unwrap(), symmetric(2).unwrap()]),
        ),
    ]
}

fn counting() -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for (name, spec) in small_actions() {
        let projector = Projector::new(spec);
        let n = projector.spec().degree();
        let expected = factorial(n) / projector.chain().order();
        for kind in [ProjectionKind::Ascending, ProjectionKind::Descending] {
            let count = count_canonical_forms(&projector, kind).unwrap() as u128;
            passed &= count == expected;
            if kind == ProjectionKind::Ascending {
                parts.push(format!("{name}: {count}/{expected}"));
            } else if count != expected {
                parts.push(format!("{name} desc: {count}/{expected}"));
            }
        }
    }
    outcome(passed, format!("asc and desc, {}", parts.join(", ")))
}

/// Re-indexes when needed and returns the relabeled chain.
fn reindexed(chain: &StabilizerChain) -> (bool, StabilizerChain) {
    let s = reindex(chain);
    if s.is_identity() {
        (false, chain.clone())
    } else {
        (true, conjugate(chain, &s).unwrap().1)
    }
}

fn transversals() -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for (name, spec) in small_actions() {
        let (relabeled, chain) = reindexed(&spec.chain());
        let data = dixon_transversal(&chain, 100_000).unwrap();
        let report = check_transversal(&data, &chain).unwrap();
        passed &= report.passed();
        parts.push(format!(
            "{name}: |R|={}{}{}",
            report.size,
            if relabeled { " (re-indexed)" } else { "" },
            if report.passed() { "" } else { " FAILED" },
        ));
    }
    outcome(
        passed,
        format!(
            "|R|=n!/|G|, cosets disjoint and covering, ρ(R)=asc image; {}",
            parts.join(", ")
        ),
    )
}

fn galleries() -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for (name, spec) in small_actions() {
        let (_, chain) = reindexed(&spec.chain());
        let data = dixon_transversal(&chain, 100_000).unwrap();
        let (graph, connectivity) = gallery_connected(data.transversal.iter().map(|r| r.rho()));
        passed &= connectivity.connected;
        parts.push(format!(
            "{name}: {} chambers, {} edges{}",
            graph.vertices().len(),
            graph.edges().len(),
            if connectivity.connected {
                ""
            } else {
                " DISCONNECTED"
            },
        ));
    }
    outcome(passed, parts.join(", "))
}

fn invariance() -> Outcome {
    const TRIALS: usize = 1000;
    let direct_sum = ActionSpec::DirectSum(vec![
        ActionSpec::Plain(cyclic(3).unwrap()),
        ActionSpec::Plain(dihedral(4).unwrap()),
    ]);
    let cases: Vec<(&str, ActionSpec)> = vec![
        ("Z4", ActionSpec::Plain(cyclic(4).unwrap())),
        ("D4", ActionSpec::Plain(dihedral(4).unwrap())),
        ("A4", ActionSpec::Plain(alternating(4).unwrap())),
        ("S4", ActionSpec::Plain(symmetric(4).unwrap())),
        (
            "Z3xS3",
            ActionSpec::Tensor(vec![cyclic(3).unwrap(), symmetric(3).unwrap()]),
        ),
        ("Z3+D4", direct_sum),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, spec) in cases {
        let projector = Projector::new(spec);
        let kinds: &[ProjectionKind] = if projector.spec().is_tensor() {
            &ProjectionKind::ALL
        } else {
            &[ProjectionKind::Ascending, ProjectionKind::Descending]
        };
        let mut failures = 0;
        let mut tied = Vec::new();
        for &kind in kinds {
            let stats = harness_invariance(&projector, kind, TRIALS, SEED).unwrap();
            failures += stats.failures();
            passed &= stats.trials == TRIALS;
            tied.push(format!("{:.2}", stats.tied_rate()));
        }
        passed &= failures == 0;
        parts.push(format!(
            "{name}: {failures} failures (tied-input invariance {})",
            tied.join("/")
        ));
    }
    outcome(
        passed,
        format!("{TRIALS} trials per group and kind; {}", parts.join(", ")),
    )
}

fn conjugation() -> Outcome {
    const TRIALS: usize = 500;
    let pairs = [
        ("Z4", cyclic(4).unwrap(), "(1 2)"),
        (
            "<(1 2),(3 4)>",
            PermGroup::from_cycle_strings(4, &["(1 2)", "(3 4)"]).unwrap(),
            "(2 3)",
        ),
        ("D5", dihedral(5).unwrap(), "(1 2 3)"),
        ("A4", alternating(4).unwrap(), "(1 4 2 3)"),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, group, relabel) in pairs {
        let n = group.degree();
        let s = parse_cycles(relabel, n).unwrap();
        let projector = Projector::new(ActionSpec::Plain(group));
        let mut failures = 0;
        let mut mirrored = 0;
        for kind in [ProjectionKind::Ascending, ProjectionKind::Descending] {
            let stats = harness_conjugation(&projector, &s, kind, TRIALS, SEED).unwrap();
            failures += stats.failures();
            mirrored += stats.mirrored_matches;
        }
        passed &= failures == 0;
        parts.push(format!(
            "{name} by {relabel}: {failures} failures (s·π(s⁻¹x) agrees {mirrored}/{})",
            2 * TRIALS
        ));
    }
    outcome(
        passed,
        format!(
            "π'(x)=s⁻¹·π(s·x), {TRIALS} trials per kind; {}",
            parts.join(", ")
        ),
    )
}

fn cayley() -> Outcome {
    let report = cayley_demo(2000, SEED).unwrap();
    outcome(
        report.passed() && report.accuracy == 1.0,
        format!(
            "accuracy {:.3} on {} tables (SVM baseline {:.3} ± {:.3}); two-step sort agrees on {}/{}",
            report.accuracy,
            report.samples,
            report.reference_accuracy,
            report.reference_accuracy_std,
            report.two_step_matches,
            report.samples,
        ),
    )
}

fn dirichlet() -> Outcome {
    const TRIALS: usize = 250;
    let factors = [cyclic(3).unwrap(), cyclic(3).unwrap()];
    let stats = harness_dirichlet(&factors, 9, TRIALS, SEED).unwrap();
    // single descents on larger instances must also decrease at every step
    let spec = ActionSpec::Tensor(vec![symmetric(5).unwrap(), dihedral(6).unwrap()]);
    let cfg = DirichletConfig::for_spec(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut monotone = true;
    for _ in 0..50 {
        let x: Vec<f64> = (0..30).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let run = descend(&x, &cfg).unwrap();
        monotone &= run.trace.windows(2).all(|w| w[1] < w[0]);
    }
    outcome(
        monotone && stats.monotonicity_failures == 0 && stats.invariance_failures == 0,
        format!(
            "Z3xZ3, {} trials: multi-seed descent equals exact minimiser in {:.1}% (measured); \
             {} monotonicity failures; exact minimiser invariant in {}/{} unique trials",
            stats.trials,
            100.0 * stats.match_rate(),
            stats.monotonicity_failures,
            stats.unique_trials - stats.invariance_failures,
            stats.unique_trials,
        ),
    )
}

fn throughput() -> Outcome {
    let projector = Projector::new(ActionSpec::Plain(dihedral(64).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let batch: Vec<Vec<f64>> = (0..10_000)
        .map(|_| (0..64).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let start = Instant::now();
    let mut checksum = 0.0;
    for x in &batch {
        checksum += projector
            .project(x, ProjectionKind::Ascending)
            .unwrap()
            .canonical[0];
    }
    let elapsed = start.elapsed();
    outcome(
        elapsed < Duration::from_secs(2) && checksum.is_finite(),
        format!(
            "10^4 vectors of length 64 under D64 in {:.3}s single-threaded",
            elapsed.as_secs_f64()
        ),
    )
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("golden worked example", 1, golden),
        ("counting law |image| = n!/|G|", 10, counting),
        ("invariance, cocycle, idempotence", 30, invariance),
        ("Dixon right transversal", 10, transversals),
        ("gallery connectedness", 5, galleries),
        ("conjugation identity", 30, conjugation),
        ("Cayley table classification", 60, cayley),
        ("Dirichlet descent", 30, dirichlet),
        ("D64 batch throughput", 2, throughput),
    ];
    let mut all = true;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed < Duration::from_secs(*budget);
        let passed = result.passed && in_budget;
        all &= passed;
        println!(
            "[{}] {}. {} ({:.2}s, budget {}s): {}",
            if passed { "PASS" } else { "FAIL" },
            k + 1,
            name,
            elapsed.as_secs_f64(),
            budget,
            result.detail
        );
    }
    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
