//! Combinatorial projections onto fundamental domains.
//!
//! A real input is first replaced by its rank vector: ties are broken by a
//! small perturbation `x' = x + d·ε`, and every comparison after that is an
//! exact integer comparison. The witness `φ` is assembled level by level
//! along a stabilizer chain, moving the extremal entry of each orbit `Δ_i`
//! onto the base point `b_i`. The canonical form is `φ·x`.

use std::fmt;
use std::str::FromStr;

use crate::actions::{lift_tensor, strides, ActionSpec};
use crate::error::{Error, Result};
use crate::group::{Family, PermGroup, StabilizerChain};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationConfig {
    epsilon: Vec<f64>,
}

impl PerturbationConfig {
    pub fn new(epsilon: Vec<f64>) -> Result<Self> {
        if epsilon.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut sorted = epsilon.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotDistinct);
        }
        Ok(PerturbationConfig { epsilon })
    }

    /// `ε = (1/2n)(1, 2, ..., n)`.
    pub fn standard(n: usize) -> Self {
        let denom = (2 * n) as f64;
        PerturbationConfig {
            epsilon: (1..=n).map(|i| i as f64 / denom).collect(),
        }
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn len(&self) -> usize {
        self.epsilon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilon.is_empty()
    }
}

/// A permutation of `{1, ..., n}` used as a tie-free stand-in for a vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankVector(Vec<u32>);

impl RankVector {
    pub fn new(ranks: Vec<u32>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = vec![false; n];
        for &r in &ranks {
            let r = r as usize;
            if r == 0 || r > n || std::mem::replace(&mut seen[r - 1], true) {
                return Err(Error::NotABijection(n));
            }
        }
        Ok(RankVector(ranks))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Smallest nonzero gap between entries of `x`, or 1 if all entries agree.
pub fn min_gap(x: &[f64]) -> f64 {
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&d| d > 0.0)
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.min(d)))
        })
        .unwrap_or(1.0)
}

/// Ranks of `x + d·ε`, with `d` the smallest nonzero gap in `x`.
pub fn rank_hat(x: &[f64], cfg: &PerturbationConfig) -> Result<RankVector> {
    if x.len() != cfg.len() {
        return Err(Error::LengthMismatch {
            expected: cfg.len(),
            actual: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let d = min_gap(x);
    let perturbed: Vec<f64> = x
        .iter()
        .zip(&cfg.epsilon)
        .map(|(&v, &e)| v + d * e)
        .collect();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| perturbed[a].total_cmp(&perturbed[b]).then(a.cmp(&b)));
    let mut ranks = vec![0u32; x.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos as u32 + 1;
    }
    Ok(RankVector(ranks))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Ascending,
    Descending,
}

impl Direction {
    #[inline]
    fn prefers<T: Ord>(self, candidate: &T, current: &T) -> bool {
        match self {
            Direction::Ascending => candidate < current,
            Direction::Descending => candidate > current,
        }
    }
}

/// `φ` along `chain` for any totally ordered values. With distinct values
/// the result is the unique group element moving `values` into the
/// fundamental domain; with ties the first extremal orbit point in discovery
/// order is used.
pub fn phi<T: Ord + Copy>(chain: &StabilizerChain, values: &[T], dir: Direction) -> Permutation {
    let n = chain.degree();
    debug_assert_eq!(values.len(), n);
    let mut y = values.to_vec();
    let mut scratch = y.clone();
    // Tracks φ⁻¹ = v_1 ∘ v_2 ∘ ... so the final inverse is u_k ∘ ... ∘ u_1.
    let mut inverse: Option<Permutation> = None;
    for level in chain.levels() {
        let orbit = level.orbit0();
        if orbit.len() < 2 {
            continue;
        }
        let mut best = orbit[0] as usize;
        for &j in &orbit[1..] {
            if dir.prefers(&y[j as usize], &y[best]) {
                best = j as usize;
            }
        }
        if best == level.base0() {
            continue;
        }
        let v = level.forward0(best).expect("orbit point");
        // (u_j·y)_i = y_{v_j(i)}
        for (i, out) in scratch.iter_mut().enumerate() {
            *out = y[v.image0(i)];
        }
        std::mem::swap(&mut y, &mut scratch);
        inverse = Some(match inverse {
            None => v.clone(),
            Some(acc) => acc.compose_unchecked(v),
        });
    }
    inverse.map_or_else(|| Permutation::identity(n), |p| p.inverse())
}

fn check_len(chain: &StabilizerChain, len: usize) -> Result<()> {
    if chain.degree() != len {
        return Err(Error::LengthMismatch {
            expected: chain.degree(),
            actual: len,
        });
    }
    Ok(())
}

pub fn phi_ascending(chain: &StabilizerChain, hat: &RankVector) -> Result<Permutation> {
    check_len(chain, hat.len())?;
    Ok(phi(chain, hat.as_slice(), Direction::Ascending))
}

pub fn phi_descending(chain: &StabilizerChain, hat: &RankVector) -> Result<Permutation> {
    check_len(chain, hat.len())?;
    Ok(phi(chain, hat.as_slice(), Direction::Descending))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjectionKind {
    Ascending,
    Descending,
    AscendingAveraged,
    DescendingAveraged,
}

impl ProjectionKind {
    pub const ALL: [ProjectionKind; 4] = [
        ProjectionKind::Ascending,
        ProjectionKind::Descending,
        ProjectionKind::AscendingAveraged,
        ProjectionKind::DescendingAveraged,
    ];

    pub fn direction(self) -> Direction {
        match self {
            ProjectionKind::Ascending | ProjectionKind::AscendingAveraged => Direction::Ascending,
            ProjectionKind::Descending | ProjectionKind::DescendingAveraged => {
                Direction::Descending
            }
        }
    }

    pub fn is_averaging(self) -> bool {
        matches!(
            self,
            ProjectionKind::AscendingAveraged | ProjectionKind::DescendingAveraged
        )
    }
}

impl FromStr for ProjectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asc" => Ok(ProjectionKind::Ascending),
            "desc" => Ok(ProjectionKind::Descending),
            "asc-avg" | "asc_avg" => Ok(ProjectionKind::AscendingAveraged),
            "desc-avg" | "desc_avg" => Ok(ProjectionKind::DescendingAveraged),
            other => Err(Error::Spec(format!("unknown projection kind {other:?}"))),
        }
    }
}

impl fmt::Display for ProjectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectionKind::Ascending => "asc",
            ProjectionKind::Descending => "desc",
            ProjectionKind::AscendingAveraged => "asc-avg",
            ProjectionKind::DescendingAveraged => "desc-avg",
        })
    }
}

/// Canonical vector plus the witness `φ(x)` with `φ(x)·x = canonical`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult {
    pub canonical: Vec<f64>,
    pub witness: Permutation,
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.compensation
    }
}

/// Replaces each entry by the sum over tensor axes of the mean of the fiber
/// through it along that axis. For a matrix: row mean plus column mean.
pub fn mu_average(x: &[f64], dims: &[usize]) -> Result<Vec<f64>> {
    let total: usize = dims.iter().product();
    if x.len() != total {
        return Err(Error::LengthMismatch {
            expected: total,
            actual: x.len(),
        });
    }
    let strides = strides(dims);
    let mut out = vec![CompensatedSum::default(); total];
    for (&n_j, &stride) in dims.iter().zip(&strides) {
        // Fiber sums along axis j, keyed by the flat index with coordinate j zeroed.
        let mut sums = vec![CompensatedSum::default(); total];
        for (flat, &v) in x.iter().enumerate() {
            let coord = (flat / stride) % n_j;
            sums[flat - coord * stride].add(v);
        }
        for (flat, acc) in out.iter_mut().enumerate() {
            let coord = (flat / stride) % n_j;
            acc.add(sums[flat - coord * stride].value() / n_j as f64);
        }
    }
    Ok(out.into_iter().map(CompensatedSum::value).collect())
}

/// Projection for a structured action with a fixed chain and perturbation.
#[derive(Clone, Debug)]
pub struct Projector {
    spec: ActionSpec,
    chain: StabilizerChain,
    cfg: PerturbationConfig,
}

impl Projector {
    /// Uses the natural base of `spec` and the standard perturbation.
    pub fn new(spec: ActionSpec) -> Self {
        let chain = spec.chain();
        let cfg = PerturbationConfig::standard(spec.degree());
        Projector { spec, chain, cfg }
    }

    pub fn with_chain(spec: ActionSpec, chain: StabilizerChain) -> Result<Self> {
        if chain.degree() != spec.degree() {
            return Err(Error::DegreeMismatch {
                left: spec.degree(),
                right: chain.degree(),
            });
        }
        let cfg = PerturbationConfig::standard(spec.degree());
        Ok(Projector { spec, chain, cfg })
    }

    pub fn with_perturbation(mut self, cfg: PerturbationConfig) -> Result<Self> {
        if cfg.len() != self.spec.degree() {
            return Err(Error::LengthMismatch {
                expected: self.spec.degree(),
                actual: cfg.len(),
            });
        }
        self.cfg = cfg;
        Ok(self)
    }

    pub fn spec(&self) -> &ActionSpec {
        &self.spec
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn perturbation(&self) -> &PerturbationConfig {
        &self.cfg
    }

    pub fn witness(&self, x: &[f64], kind: ProjectionKind) -> Result<Permutation> {
        let hat = if kind.is_averaging() {
            let ActionSpec::Tensor(_) = &self.spec else {
                return Err(Error::AveragingNeedsTensor);
            };
            rank_hat(&mu_average(x, &self.spec.shape())?, &self.cfg)?
        } else {
            rank_hat(x, &self.cfg)?
        };
        Ok(phi(&self.chain, hat.as_slice(), kind.direction()))
    }

    pub fn project(&self, x: &[f64], kind: ProjectionKind) -> Result<ProjectionResult> {
        let witness = self.witness(x, kind)?;
        let mut canonical = vec![0.0; x.len()];
        witness.apply_into(x, &mut canonical);
        Ok(ProjectionResult { canonical, witness })
    }
}

/// One-shot projection with an explicit chain and perturbation.
pub fn project(
    spec: &ActionSpec,
    chain: &StabilizerChain,
    x: &[f64],
    kind: ProjectionKind,
    cfg: &PerturbationConfig,
) -> Result<ProjectionResult> {
    Projector::with_chain(spec.clone(), chain.clone())?
        .with_perturbation(cfg.clone())?
        .project(x, kind)
}

/// Tensor-product `φ`: find the extremal entry over the product of the factor
/// orbits of `1`, then run each factor's `φ` on the fiber through that entry.
/// Every factor chain must have an empty base or a base starting at 1.
pub fn phi_tensor_fastpath(
    factors: &[StabilizerChain],
    values: &[u32],
    dir: Direction,
) -> Result<Permutation> {
    let dims: Vec<usize> = factors.iter().map(StabilizerChain::degree).collect();
    let total: usize = dims.iter().product();
    if values.len() != total {
        return Err(Error::LengthMismatch {
            expected: total,
            actual: values.len(),
        });
    }
    let mut corner_orbits = Vec::with_capacity(factors.len());
    for (j, chain) in factors.iter().enumerate() {
        match chain.levels().first() {
            None => corner_orbits.push(vec![0u32]),
            Some(level) if level.base0() == 0 => corner_orbits.push(level.orbit0().to_vec()),
            Some(level) => {
                return Err(Error::Precondition(format!(
                    "factor {j} base starts at {} instead of 1",
                    level.base_point()
                )))
            }
        }
    }
    let strides = strides(&dims);
    // Walk the product of orbits, last axis fastest.
    let mut cursor = vec![0usize; factors.len()];
    let mut best: Option<(u32, Vec<usize>)> = None;
    'odometer: loop {
        let multi: Vec<usize> = cursor
            .iter()
            .zip(&corner_orbits)
            .map(|(&c, orbit)| orbit[c] as usize)
            .collect();
        let flat: usize = multi.iter().zip(&strides).map(|(&m, &s)| m * s).sum();
        let v = values[flat];
        if best.as_ref().is_none_or(|(b, _)| dir.prefers(&v, b)) {
            best = Some((v, multi));
        }
        let mut axis = factors.len();
        loop {
            if axis == 0 {
                break 'odometer;
            }
            axis -= 1;
            cursor[axis] += 1;
            if cursor[axis] < corner_orbits[axis].len() {
                break;
            }
            cursor[axis] = 0;
        }
    }
    let (_, m) = best.expect("at least one orbit point");
    let base_flat: usize = m.iter().zip(&strides).map(|(&c, &s)| c * s).sum();
    let mut witness = Permutation::identity(total);
    for (j, chain) in factors.iter().enumerate() {
        let fiber: Vec<u32> = (0..dims[j])
            .map(|l| values[base_flat - m[j] * strides[j] + l * strides[j]])
            .collect();
        let h = phi(chain, &fiber, dir);
        if !h.is_identity() {
            witness = lift_tensor(&dims, j, &h).compose_unchecked(&witness);
        }
    }
    Ok(witness)
}

/// Witness from the closed-form description of a named family acting on its
/// standard base, or `None` for generic groups. Values must be distinct.
///
/// * symmetric: sort.
/// * alternating: sort the first `n - 2` entries; the last two hold the two
///   extremal values in the order fixed by parity.
/// * cyclic: rotate the extremal entry to the front.
/// * dihedral: rotate, then reflect if the last entry beats the second.
pub fn phi_closed_form<T: Ord + Copy>(
    group: &PermGroup,
    values: &[T],
    dir: Direction,
) -> Option<Permutation> {
    let n = group.degree();
    if values.len() != n {
        return None;
    }
    let sorting = || {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| match dir {
            Direction::Ascending => values[a].cmp(&values[b]),
            Direction::Descending => values[b].cmp(&values[a]),
        });
        // The entry at position order[k] must land at position k.
        let mut images = vec![0u32; n];
        for (k, &i) in order.iter().enumerate() {
            images[i] = k as u32;
        }
        Permutation::from_images0(images)
    };
    let rotation_to_front = || {
        let extremal = (0..n)
            .reduce(|a, b| {
                if dir.prefers(&values[b], &values[a]) {
                    b
                } else {
                    a
                }
            })
            .expect("n >= 1");
        let images: Vec<u32> = (0..n).map(|i| ((i + n - extremal) % n) as u32).collect();
        Permutation::from_images0(images)
    };
    match group.family() {
        Family::Generic => None,
        Family::Symmetric => Some(sorting()),
        Family::Alternating if n <= 2 => Some(Permutation::identity(n)),
        Family::Alternating => {
            let s = sorting();
            if s.sign() == 1 {
                Some(s)
            } else {
                let swap = Permutation::transposition(n, n - 1, n).expect("n >= 3");
                Some(swap.compose_unchecked(&s))
            }
        }
        Family::Cyclic => Some(rotation_to_front()),
        Family::Dihedral if n <= 2 => Some(sorting()),
        Family::Dihedral => {
            let rot = rotation_to_front();
            let rotated = rot.apply_unchecked(values);
            if dir.prefers(&rotated[n - 1], &rotated[1]) {
                let reflection = &group.generators()[1];
                Some(reflection.compose_unchecked(&rot))
            } else {
                Some(rot)
            }
        }
    }
}
