//! Dirichlet projections: the orbit point minimising `⟨g·x, r⟩` for a fixed
//! reference vector `r` with distinct entries.
//!
//! The exact minimiser needs the whole orbit, so it is only available for
//! small groups ([`brute_force_min`]). For large groups [`descend`] walks the
//! orbit greedily along a generating set, and [`descend_multi_seed`] restarts
//! that walk from cyclic row/column shifts of a matrix.

use std::cmp::Ordering;

use crate::actions::{lift_tensor, shift, ActionSpec};
use crate::error::{Error, Result};
use crate::group::{Family, PermGroup, StabilizerChain};
use crate::perm::Permutation;
use crate::project::ProjectionResult;

#[derive(Clone, Debug)]
pub struct DirichletConfig {
    reference: Vec<f64>,
    generating_set: Vec<Permutation>,
    max_steps: usize,
}

pub const DEFAULT_MAX_STEPS: usize = 100_000;

impl DirichletConfig {
    pub fn new(
        reference: Vec<f64>,
        generating_set: Vec<Permutation>,
        max_steps: usize,
    ) -> Result<Self> {
        if reference.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut sorted = reference.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotDistinct);
        }
        if let Some(t) = generating_set
            .iter()
            .find(|t| t.degree() != reference.len())
        {
            return Err(Error::DegreeMismatch {
                left: reference.len(),
                right: t.degree(),
            });
        }
        Ok(DirichletConfig {
            reference,
            generating_set,
            max_steps,
        })
    }

    /// Reference `(1, 2, ..., n)` and [`default_generating_set`].
    pub fn for_spec(spec: &ActionSpec) -> Self {
        let n = spec.degree();
        DirichletConfig {
            reference: (1..=n).map(|i| i as f64).collect(),
            generating_set: default_generating_set(spec),
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn generating_set(&self) -> &[Permutation] {
        &self.generating_set
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    /// Checks that every generating-set element lies in the group.
    pub fn check_against(&self, chain: &StabilizerChain) -> Result<()> {
        for (k, t) in self.generating_set.iter().enumerate() {
            if !chain.contains(t)? {
                return Err(Error::GeneratorNotInGroup(k));
            }
        }
        Ok(())
    }
}

/// Adjacent transpositions for symmetric groups, generators and their
/// inverses otherwise; products are handled factor by factor.
pub fn default_generating_set(spec: &ActionSpec) -> Vec<Permutation> {
    fn plain(g: &PermGroup) -> Vec<Permutation> {
        let n = g.degree();
        let mut out: Vec<Permutation> = Vec::new();
        if g.family() == Family::Symmetric {
            for i in 1..n {
                out.push(Permutation::transposition(n, i, i + 1).expect("in range"));
            }
            return out;
        }
        for t in g.generators().iter().flat_map(|t| [t.clone(), t.inverse()]) {
            if !t.is_identity() && !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }
    match spec {
        ActionSpec::Plain(g) => plain(g),
        ActionSpec::DirectSum(factors) => {
            let total = spec.degree();
            let mut offset = 0;
            let mut out = Vec::new();
            for factor in factors {
                out.extend(
                    default_generating_set(factor)
                        .iter()
                        .map(|t| shift(t, offset, total)),
                );
                offset += factor.degree();
            }
            out
        }
        ActionSpec::Tensor(factors) => {
            let dims = spec.shape();
            factors
                .iter()
                .enumerate()
                .flat_map(|(j, h)| {
                    plain(h)
                        .into_iter()
                        .map(|t| lift_tensor(&dims, j, &t))
                        .collect::<Vec<_>>()
                })
                .collect()
        }
    }
}

/// `⟨x, r⟩`, summed in index order.
pub fn objective(x: &[f64], r: &[f64]) -> Result<f64> {
    if x.len() != r.len() {
        return Err(Error::LengthMismatch {
            expected: r.len(),
            actual: x.len(),
        });
    }
    Ok(x.iter().zip(r).map(|(a, b)| a * b).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentStatus {
    Converged,
    /// `max_steps` accepted steps were taken and another improving step
    /// was still available. The result is valid but not a local minimum.
    StepLimit,
}

#[derive(Clone, Debug)]
pub struct Descent {
    pub result: ProjectionResult,
    pub objective: f64,
    pub steps: usize,
    pub status: DescentStatus,
    /// Objective before the first step and after every accepted step.
    pub trace: Vec<f64>,
    /// Number of seeds tried (1 for a plain descent).
    pub seeds: usize,
}

fn best_step(y: &[f64], current: f64, cfg: &DirichletConfig) -> Option<(usize, Vec<f64>, f64)> {
    let mut best: Option<(usize, Vec<f64>, f64)> = None;
    for (k, t) in cfg.generating_set.iter().enumerate() {
        let candidate = t.apply_unchecked(y);
        let value = objective(&candidate, &cfg.reference).expect("lengths agree");
        let threshold = best.as_ref().map_or(current, |b| b.2);
        if value < threshold {
            best = Some((k, candidate, value));
        }
    }
    best
}

/// Greedy descent over `T ∪ {e}`: each step moves to the neighbour with the
/// smallest objective; staying put wins ties, then the earliest generator.
pub fn descend(x: &[f64], cfg: &DirichletConfig) -> Result<Descent> {
    let n = cfg.reference.len();
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut y = x.to_vec();
    let mut witness = Permutation::identity(n);
    let mut value = objective(&y, &cfg.reference)?;
    let mut trace = vec![value];
    let mut steps = 0;
    let mut status = DescentStatus::Converged;
    while let Some((k, next, next_value)) = best_step(&y, value, cfg) {
        if steps == cfg.max_steps {
            status = DescentStatus::StepLimit;
            break;
        }
        witness = cfg.generating_set[k].compose_unchecked(&witness);
        y = next;
        value = next_value;
        trace.push(value);
        steps += 1;
    }
    Ok(Descent {
        result: ProjectionResult {
            canonical: y,
            witness,
        },
        objective: value,
        steps,
        status,
        trace,
        seeds: 1,
    })
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Runs [`descend`] from every seed `C_{n1}^k · x · C_{n2}^m` of an
/// `n1 × n2` matrix and keeps the lowest objective, breaking ties by the
/// lexicographically smallest canonical vector. Both factor groups must
/// contain the full cycle `(1 2 ... n_j)`.
pub fn descend_multi_seed(
    x: &[f64],
    factors: &[PermGroup; 2],
    cfg: &DirichletConfig,
) -> Result<Descent> {
    let dims = [factors[0].degree(), factors[1].degree()];
    let total = dims[0] * dims[1];
    if x.len() != total {
        return Err(Error::LengthMismatch {
            expected: total,
            actual: x.len(),
        });
    }
    if cfg.reference.len() != total {
        return Err(Error::LengthMismatch {
            expected: total,
            actual: cfg.reference.len(),
        });
    }
    let mut shifts = Vec::with_capacity(2);
    for (j, h) in factors.iter().enumerate() {
        let n = h.degree();
        let points: Vec<usize> = (1..=n).collect();
        let cycle = Permutation::cycle(n, &points)?;
        if !h.chain().contains(&cycle)? {
            return Err(Error::MissingCycle(j));
        }
        let lifted = lift_tensor(&dims, j, &cycle);
        let mut powers = Vec::with_capacity(n);
        let mut acc = lifted.clone();
        for _ in 0..n {
            powers.push(acc.clone());
            acc = lifted.compose_unchecked(&acc);
        }
        shifts.push(powers);
    }
    let mut best: Option<Descent> = None;
    let mut seeds = 0;
    for row_shift in &shifts[0] {
        for col_shift in &shifts[1] {
            let seed_perm = row_shift.compose_unchecked(col_shift);
            let seed = seed_perm.apply_unchecked(x);
            let mut run = descend(&seed, cfg)?;
            run.result.witness = run.result.witness.compose_unchecked(&seed_perm);
            seeds += 1;
            let better = match &best {
                None => true,
                Some(b) => match run.objective.total_cmp(&b.objective) {
                    Ordering::Less => true,
                    Ordering::Equal => {
                        lexicographic(&run.result.canonical, &b.result.canonical).is_lt()
                    }
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some(run);
            }
        }
    }
    let mut best = best.expect("at least one seed");
    best.seeds = seeds;
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct BruteForceMin {
    pub result: ProjectionResult,
    pub objective: f64,
    /// Whether exactly one orbit point attains the minimum.
    pub unique: bool,
}

/// Exact minimiser of `⟨g·x, r⟩` over the whole group; ties go to the
/// lexicographically smallest `g·x`.
pub fn brute_force_min(
    chain: &StabilizerChain,
    x: &[f64],
    r: &[f64],
    bound: u128,
) -> Result<BruteForceMin> {
    if x.len() != chain.degree() || r.len() != chain.degree() {
        return Err(Error::LengthMismatch {
            expected: chain.degree(),
            actual: if x.len() != chain.degree() {
                x.len()
            } else {
                r.len()
            },
        });
    }
    let elements = chain.enumerate_elements(bound)?;
    let mut best: Option<(Permutation, Vec<f64>, f64)> = None;
    let mut minimisers: Vec<Vec<f64>> = Vec::new();
    for g in elements {
        let y = g.apply_unchecked(x);
        let value = objective(&y, r)?;
        let order = best
            .as_ref()
            .map_or(Ordering::Less, |(_, _, bv)| value.total_cmp(bv));
        match order {
            Ordering::Greater => continue,
            Ordering::Less => minimisers.clear(),
            Ordering::Equal => {}
        }
        if !minimisers.iter().any(|m| lexicographic(m, &y).is_eq()) {
            minimisers.push(y.clone());
        }
        let replace = order.is_lt() || lexicographic(&y, &best.as_ref().expect("set").1).is_lt();
        if replace {
            best = Some((g, y, value));
        }
    }
    let (witness, canonical, value) = best.expect("groups are nonempty");
    Ok(BruteForceMin {
        result: ProjectionResult { canonical, witness },
        objective: value,
        unique: minimisers.len() == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{cyclic, symmetric};
    use crate::perm::parse_cycles;

    fn s2_config() -> DirichletConfig {
        DirichletConfig::new(vec![1.0, 2.0], vec![parse_cycles("(1 2)", 2).unwrap()], 100).unwrap()
    }

    #[test]
    fn objective_examples() {
        assert_eq!(objective(&[1.0, 3.0], &[1.0, 2.0]).unwrap(), 7.0);
        assert_eq!(objective(&[0.0, 0.0], &[1.0, 2.0]).unwrap(), 0.0);
        let swap = parse_cycles("(1 2)", 2).unwrap();
        let swapped = swap.apply_to_vector(&[1.0, 3.0]).unwrap();
        assert_eq!(objective(&swapped, &[1.0, 2.0]).unwrap(), 5.0);
        assert!(objective(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn descend_on_s2() {
        let d = descend(&[1.0, 3.0], &s2_config()).unwrap();
        assert_eq!(d.result.canonical, vec![3.0, 1.0]);
        assert_eq!(d.objective, 5.0);
        assert_eq!(d.steps, 1);
        assert_eq!(d.trace, vec![7.0, 5.0]);
        let fixed = descend(&[3.0, 1.0], &s2_config()).unwrap();
        assert_eq!(fixed.steps, 0);
        assert!(fixed.result.witness.is_identity());
        assert_eq!(fixed.status, DescentStatus::Converged);
    }

    #[test]
    fn descend_on_s3_reverses() {
        let spec = ActionSpec::Plain(symmetric(3).unwrap());
        let cfg = DirichletConfig::for_spec(&spec);
        let d = descend(&[1.0, 2.0, 3.0], &cfg).unwrap();
        assert_eq!(d.result.canonical, vec![3.0, 2.0, 1.0]);
        assert_eq!(d.trace, vec![14.0, 13.0, 11.0, 10.0]);
        assert_eq!(
            d.result.witness.apply_to_vector(&[1.0, 2.0, 3.0]).unwrap(),
            d.result.canonical
        );
    }

    #[test]
    fn step_limit_is_reported() {
        let spec = ActionSpec::Plain(symmetric(4).unwrap());
        let cfg = DirichletConfig::for_spec(&spec).with_max_steps(1);
        let d = descend(&[1.0, 2.0, 3.0, 4.0], &cfg).unwrap();
        assert_eq!(d.status, DescentStatus::StepLimit);
        assert_eq!(d.steps, 1);
    }

    #[test]
    fn reference_must_be_distinct() {
        assert!(matches!(
            DirichletConfig::new(vec![1.0, 1.0], vec![], 10),
            Err(Error::NotDistinct)
        ));
    }

    #[test]
    fn brute_force_examples() {
        let s2 = symmetric(2).unwrap().chain();
        let b = brute_force_min(&s2, &[1.0, 3.0], &[1.0, 2.0], 10).unwrap();
        assert_eq!(b.result.canonical, vec![3.0, 1.0]);
        assert!(b.unique);
        let trivial = PermGroup::trivial(3).chain();
        let b = brute_force_min(&trivial, &[3.0, 1.0, 2.0], &[1.0, 2.0, 3.0], 10).unwrap();
        assert_eq!(b.result.canonical, vec![3.0, 1.0, 2.0]);
        let s3 = symmetric(3).unwrap().chain();
        let b = brute_force_min(&s3, &[2.0; 3], &[1.0, 2.0, 3.0], 10).unwrap();
        assert_eq!(b.result.canonical, vec![2.0; 3]);
        assert!(b.unique);
        assert!(brute_force_min(&s3, &[2.0; 3], &[1.0, 2.0, 3.0], 5).is_err());
    }

    #[test]
    fn multi_seed_counts_and_dominates() {
        let factors = [cyclic(2).unwrap(), cyclic(2).unwrap()];
        let spec = ActionSpec::Tensor(factors.to_vec());
        let cfg = DirichletConfig::for_spec(&spec);
        let x = [4.0, 1.0, 3.0, 2.0];
        let multi = descend_multi_seed(&x, &factors, &cfg).unwrap();
        let single = descend(&x, &cfg).unwrap();
        assert_eq!(multi.seeds, 4);
        assert!(multi.objective <= single.objective);
        assert_eq!(
            multi.result.witness.apply_to_vector(&x).unwrap(),
            multi.result.canonical
        );
    }

    #[test]
    fn multi_seed_requires_cycles() {
        let factors = [
            PermGroup::from_cycle_strings(3, &["(1 2)"]).unwrap(),
            cyclic(3).unwrap(),
        ];
        let spec = ActionSpec::Tensor(factors.to_vec());
        let cfg = DirichletConfig::for_spec(&spec);
        assert!(matches!(
            descend_multi_seed(&[0.0; 9], &factors, &cfg),
            Err(Error::MissingCycle(0))
        ));
    }

    #[test]
    fn default_sets() {
        let spec = ActionSpec::Plain(symmetric(4).unwrap());
        let names: Vec<String> = default_generating_set(&spec)
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(names, vec!["(1 2)", "(2 3)", "(3 4)"]);
        let spec = ActionSpec::Plain(cyclic(4).unwrap());
        let names: Vec<String> = default_generating_set(&spec)
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(names, vec!["(1 2 3 4)", "(1 4 3 2)"]);
        let spec = ActionSpec::Tensor(vec![symmetric(3).unwrap(), symmetric(4).unwrap()]);
        let cfg = DirichletConfig::for_spec(&spec);
        assert_eq!(cfg.generating_set().len(), 2 + 3);
        cfg.check_against(&spec.chain()).unwrap();
    }
}
