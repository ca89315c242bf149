use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use fundom::cayley::cayley_demo;
use fundom::dirichlet::{brute_force_min, descend, descend_multi_seed, DirichletConfig};
use fundom::verify::{
    characterize_image, check_transversal, conjugate, count_canonical_forms, dixon_transversal,
    factorial, gallery_connected, harness_conjugation, harness_dirichlet, harness_invariance,
    reindex, SuiteReport, MAX_GROUP_ENUMERATION,
};
use fundom::{parse_cycles, ActionSpec, PermGroup, ProjectionKind, Projector, StabilizerChain};
use serde_json::json;

use crate::records::{format_number, process, raw, read_x, set_values, set_witness};

pub fn load_spec(path: &Path) -> Result<ActionSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read group spec {}", path.display()))?;
    ActionSpec::from_json_str(&text)
        .with_context(|| format!("invalid group spec {}", path.display()))
}

pub fn open_input(path: &str) -> Result<Box<dyn BufRead>> {
    if path == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(path).with_context(|| format!("cannot open {path}"))?;
    Ok(Box::new(BufReader::new(file)))
}

pub fn open_output(path: &str) -> Result<Box<dyn Write>> {
    if path == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout())));
    }
    let file = File::create(path).with_context(|| format!("cannot create {path}"))?;
    Ok(Box::new(BufWriter::new(file)))
}

pub fn project(
    spec: ActionSpec,
    kind: ProjectionKind,
    witness: bool,
    input: &mut dyn BufRead,
    output: &mut dyn Write,
) -> Result<()> {
    if kind.is_averaging() && !spec.is_tensor() {
        bail!("projection {kind} needs a tensor action");
    }
    let projector = Projector::new(spec);
    process(input, output, |record| {
        let (x, shape) = read_x(record, projector.spec())?;
        let result = projector.project(&x, kind)?;
        set_values(record, "canonical", &result.canonical, shape);
        if witness {
            set_witness(record, &result.witness);
        }
        Ok(())
    })?;
    Ok(())
}

pub struct DirichletOptions {
    pub max_steps: usize,
    pub multi_seed: bool,
    pub oracle: bool,
    pub witness: bool,
}

fn two_factors(spec: &ActionSpec) -> Result<[PermGroup; 2]> {
    match spec {
        ActionSpec::Tensor(factors) if factors.len() == 2 => {
            Ok([factors[0].clone(), factors[1].clone()])
        }
        _ => bail!("multi-seeding needs a two-factor tensor action"),
    }
}

/// Returns the oracle match rate when `--oracle` is set.
pub fn dirichlet(
    spec: ActionSpec,
    opts: &DirichletOptions,
    input: &mut dyn BufRead,
    output: &mut dyn Write,
) -> Result<Option<serde_json::Value>> {
    let cfg = DirichletConfig::for_spec(&spec).with_max_steps(opts.max_steps);
    let chain = spec.chain();
    let factors = if opts.multi_seed {
        Some(two_factors(&spec)?)
    } else {
        None
    };
    if opts.oracle && chain.order() > MAX_GROUP_ENUMERATION {
        bail!(
            "--oracle enumerates the group, which has {} elements (limit {MAX_GROUP_ENUMERATION})",
            chain.order()
        );
    }
    let matches = process(input, output, |record| {
        let (x, shape) = read_x(record, &spec)?;
        let run = match &factors {
            Some(f) => descend_multi_seed(&x, f, &cfg)?,
            None => descend(&x, &cfg)?,
        };
        set_values(record, "canonical", &run.result.canonical, shape);
        record.insert("objective".into(), raw(format_number(run.objective)));
        record.insert("steps".into(), raw(run.steps.to_string()));
        if opts.witness {
            set_witness(record, &run.result.witness);
        }
        if !opts.oracle {
            return Ok(None);
        }
        let exact = brute_force_min(&chain, &x, cfg.reference(), MAX_GROUP_ENUMERATION)?;
        let matched =
            exact.objective == run.objective && exact.result.canonical == run.result.canonical;
        record.insert("oracle_match".into(), raw(matched.to_string()));
        Ok(Some(matched))
    })?;
    if !opts.oracle {
        return Ok(None);
    }
    let total = matches.len();
    let hits = matches.iter().filter(|m| **m == Some(true)).count();
    let rate = if total == 0 {
        1.0
    } else {
        hits as f64 / total as f64
    };
    Ok(Some(json!({
        "records": total,
        "oracle_matches": hits,
        "match_rate": rate,
    })))
}

pub const SUITES: [&str; 8] = [
    "invariance",
    "counting",
    "gallery",
    "transversal",
    "image",
    "conjugation",
    "idempotence",
    "dirichlet-oracle",
];

pub struct VerifyOptions {
    pub suite: String,
    pub kind: ProjectionKind,
    pub trials: usize,
    pub seed: u64,
    pub relabel: Option<String>,
}

fn reindexed(chain: &StabilizerChain) -> Result<(bool, StabilizerChain)> {
    let s = reindex(chain);
    if s.is_identity() {
        return Ok((false, chain.clone()));
    }
    Ok((true, conjugate(chain, &s)?.1))
}

pub fn verify(spec: ActionSpec, opts: &VerifyOptions) -> Result<SuiteReport> {
    let group_spec = spec.to_json();
    if opts.kind.is_averaging() && !spec.is_tensor() {
        bail!("projection {} needs a tensor action", opts.kind);
    }
    let report = |trials: usize, failures: usize, details: serde_json::Value| SuiteReport {
        suite: opts.suite.clone(),
        group_spec: group_spec.clone(),
        trials,
        failures,
        details: vec![details],
    };
    let n = spec.degree();
    let report = match opts.suite.as_str() {
        "invariance" => {
            let projector = Projector::new(spec);
            let stats = harness_invariance(&projector, opts.kind, opts.trials, opts.seed)?;
            let mut r = stats.report("invariance", group_spec.clone());
            r.details[0]["projection"] = json!(opts.kind.to_string());
            r
        }
        "idempotence" => {
            let projector = Projector::new(spec);
            let stats = harness_invariance(&projector, opts.kind, opts.trials, opts.seed)?;
            report(
                stats.trials,
                stats.idempotence_failures,
                json!({
                    "projection": opts.kind.to_string(),
                    "idempotence_failures": stats.idempotence_failures,
                }),
            )
        }
        "counting" => {
            let projector = Projector::new(spec);
            let count = count_canonical_forms(&projector, opts.kind)? as u128;
            let expected = factorial(n) / projector.chain().order();
            // μ often ties on rank vectors, so averaged kinds are only
            // reported
            let failures = usize::from(!opts.kind.is_averaging() && count != expected);
            report(
                1,
                failures,
                json!({
                    "projection": opts.kind.to_string(),
                    "count": count,
                    "expected": expected,
                }),
            )
        }
        "transversal" => {
            let (relabeled, chain) = reindexed(&spec.chain())?;
            let data = dixon_transversal(&chain, MAX_GROUP_ENUMERATION)?;
            let check = check_transversal(&data, &chain)?;
            let mut details = serde_json::to_value(&check)?;
            details["reindexed"] = json!(relabeled);
            report(1, usize::from(!check.passed()), details)
        }
        "gallery" => {
            let (relabeled, chain) = reindexed(&spec.chain())?;
            let data = dixon_transversal(&chain, MAX_GROUP_ENUMERATION)?;
            let (graph, conn) = gallery_connected(data.transversal.iter().map(|r| r.rho()));
            report(
                1,
                usize::from(!conn.connected),
                json!({
                    "chambers": graph.vertices().len(),
                    "edges": graph.edges().len(),
                    "connected": conn.connected,
                    "reindexed": relabeled,
                }),
            )
        }
        "image" => {
            let (relabeled, chain) = reindexed(&spec.chain())?;
            let image = characterize_image(&chain, opts.kind.direction())?;
            let mut details = serde_json::to_value(&image)?;
            details["reindexed"] = json!(relabeled);
            report(1, usize::from(!image.passed()), details)
        }
        "conjugation" => {
            if n < 2 && opts.relabel.is_none() {
                bail!("conjugation needs a degree of at least 2 or an explicit --relabel");
            }
            let s = parse_cycles(opts.relabel.as_deref().unwrap_or("(1 2)"), n)?;
            let projector = Projector::new(spec);
            let stats = harness_conjugation(&projector, &s, opts.kind, opts.trials, opts.seed)?;
            stats.report(group_spec.clone(), &s)
        }
        "dirichlet-oracle" => {
            let factors = two_factors(&spec)?;
            let stats = harness_dirichlet(&factors, 9, opts.trials, opts.seed)?;
            stats.report(group_spec.clone())
        }
        other => bail!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ),
    };
    Ok(report)
}

pub fn cayley(per_class: usize, seed: u64) -> Result<fundom::cayley::CayleyReport> {
    Ok(cayley_demo(per_class, seed)?)
}
