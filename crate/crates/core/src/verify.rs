//! Brute-force oracles for small degrees: Dixon's right transversal,
//! re-indexing, image counting and characterisation, gallery connectivity,
//! and randomized invariance and conjugation harnesses.
//!
//! Every exhaustive routine refuses to run past [`MAX_DEGREE`],
//! [`MAX_GROUP_ENUMERATION`] or [`MAX_TRANSVERSAL`].

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::ActionSpec;
use crate::dirichlet::{brute_force_min, descend_multi_seed, DirichletConfig};
use crate::error::{Error, Result};
use crate::group::{PermGroup, StabilizerChain};
use crate::perm::Permutation;
use crate::project::{mu_average, phi, rank_hat, Direction, ProjectionKind, Projector};

pub const MAX_DEGREE: usize = 8;
pub const MAX_GROUP_ENUMERATION: u128 = 1_000_000;
pub const MAX_TRANSVERSAL: u128 = 100_000;

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::BoundExceeded {
            what: "degree",
            size: n as u128,
            bound: MAX_DEGREE as u128,
        });
    }
    Ok(())
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Steps `v` to the next permutation in lexicographic order.
fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// All `n!` rank vectors (permutations of `1..=n`), lexicographically.
pub fn rank_vectors(n: usize) -> Result<Vec<Vec<u32>>> {
    check_degree(n)?;
    let mut c: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::with_capacity(factorial(n) as usize);
    loop {
        out.push(c.clone());
        if !next_permutation(&mut c) {
            return Ok(out);
        }
    }
}

fn ordered_arrangements(points: &[usize]) -> Vec<Vec<usize>> {
    let mut idx: Vec<u32> = (0..points.len() as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&k| points[k as usize]).collect());
        if !next_permutation(&mut idx) {
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Partitions and re-indexing

/// One refinement step: `Γ_i` split into `{b_i}`, `Δ_i − {b_i}`, `Γ_i − Δ_i`.
#[derive(Clone, Debug)]
struct Split {
    base: usize,
    gamma: Vec<usize>,
    delta: Vec<usize>,
    rest: Vec<usize>,
}

/// Runs the partition recursion. Points are 0-indexed and every part is
/// kept sorted. Returns `Π_0, ..., Π_k` and the splits.
fn refine(chain: &StabilizerChain) -> (Vec<Vec<Vec<usize>>>, Vec<Split>) {
    let n = chain.degree();
    let mut parts: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut history = vec![parts.clone()];
    let mut splits = Vec::new();
    for level in chain.levels() {
        let b = level.base0();
        let mut in_delta = vec![false; n];
        for &j in level.orbit0() {
            in_delta[j as usize] = true;
        }
        let at = parts
            .iter()
            .position(|p| p.contains(&b))
            .expect("partition covers every point");
        let gamma = parts[at].clone();
        let delta: Vec<usize> = gamma.iter().copied().filter(|&m| in_delta[m]).collect();
        assert_eq!(delta.len(), level.orbit_len(), "Δ must lie inside Γ");
        let rest: Vec<usize> = gamma.iter().copied().filter(|&m| !in_delta[m]).collect();
        let pieces: Vec<Vec<usize>> = [
            vec![b],
            delta.iter().copied().filter(|&m| m != b).collect(),
            rest.clone(),
        ]
        .into_iter()
        .filter(|p| !p.is_empty())
        .collect();
        parts.splice(at..=at, pieces);
        history.push(parts.clone());
        splits.push(Split {
            base: b,
            gamma,
            delta,
            rest,
        });
    }
    (history, splits)
}

/// Partitions `Π_0, ..., Π_k` of the chain, 1-indexed.
pub fn partitions(chain: &StabilizerChain) -> Vec<Vec<Vec<usize>>> {
    refine(chain)
        .0
        .into_iter()
        .map(|pi| {
            pi.into_iter()
                .map(|part| part.into_iter().map(|m| m + 1).collect())
                .collect()
        })
        .collect()
}

pub fn is_orbit_minimal(chain: &StabilizerChain) -> bool {
    chain
        .levels()
        .iter()
        .all(|l| l.orbit0().iter().all(|&j| j as usize >= l.base0()))
}

/// Relabeling `s` (point `m` gets label `m·s`) after which every base point
/// is the smallest label of its block `Γ_i`, followed by the rest of `Δ_i`
/// and then by `Γ_i − Δ_i`, each as a run of consecutive labels. Blocks
/// already laid out this way keep their labels.
pub fn reindex(chain: &StabilizerChain) -> Permutation {
    let n = chain.degree();
    let mut label: Vec<u32> = (0..n as u32).collect();
    let (_, splits) = refine(chain);
    for split in &splits {
        let mut labels: Vec<u32> = split.gamma.iter().map(|&m| label[m]).collect();
        labels.sort_unstable();
        let category = |m: usize| {
            if m == split.base {
                0
            } else if split.delta.contains(&m) {
                1
            } else {
                2
            }
        };
        let mut order = split.gamma.clone();
        order.sort_by_key(|&m| (category(m), label[m]));
        for (m, l) in order.into_iter().zip(labels) {
            label[m] = l;
        }
    }
    // label[m] = s⁻¹(m)
    Permutation::from_images0(label).inverse()
}

/// The conjugate group `s⁻¹Gs` and its chain along the base `B·s`.
pub fn conjugate(chain: &StabilizerChain, s: &Permutation) -> Result<(PermGroup, StabilizerChain)> {
    let n = chain.degree();
    if s.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: s.degree(),
        });
    }
    let group = match chain.levels().first() {
        None => PermGroup::trivial(n),
        Some(top) => PermGroup::new(
            n,
            top.generators()
                .iter()
                .map(|g| g.conjugate_by(s))
                .collect::<Result<_>>()?,
        )?,
    };
    let base: Vec<usize> = chain
        .base()
        .iter()
        .map(|&b| s.act_on_point(b))
        .collect::<Result<_>>()?;
    let conjugated = StabilizerChain::with_base(&group, &base)?;
    Ok((group, conjugated))
}

// ---------------------------------------------------------------------------
// Dixon transversal

#[derive(Clone, Debug)]
pub struct DixonData {
    /// Base points, 1-indexed.
    pub base: Vec<usize>,
    /// `Π_0, ..., Π_k`, 1-indexed, parts sorted.
    pub partitions: Vec<Vec<Vec<usize>>>,
    /// `Γ_i` for each level.
    pub blocks: Vec<Vec<usize>>,
    /// `Ũ_i`: products of transpositions pairing increasing selections.
    pub raw_transversals: Vec<Vec<Permutation>>,
    /// `U_i`: each element of `Ũ_i` reordered so both halves of its rank
    /// vector increase.
    pub transversals: Vec<Vec<Permutation>>,
    /// `R = H_k U_k ⋯ U_1`.
    pub transversal: Vec<Permutation>,
}

fn pairing_products(n: usize, delta: &[usize], rest: &[usize]) -> Vec<Permutation> {
    let (m, m2) = (delta.len(), rest.len());
    let mut out = Vec::new();
    for l in 0..=m.min(m2) {
        for left in 0u32..1 << m {
            if left.count_ones() as usize != l {
                continue;
            }
            for right in 0u32..1 << m2 {
                if right.count_ones() as usize != l {
                    continue;
                }
                let a = (0..m).filter(|k| left >> k & 1 == 1).map(|k| delta[k]);
                let b = (0..m2).filter(|k| right >> k & 1 == 1).map(|k| rest[k]);
                let mut images: Vec<u32> = (0..n as u32).collect();
                for (p, q) in a.zip(b) {
                    images.swap(p, q);
                }
                out.push(Permutation::from_images0(images));
            }
        }
    }
    out
}

/// Reorders `ũ` inside `Sym(Δ) × Sym(Γ − Δ)` so that the entries of `ρ`
/// indexed by `Δ`, and those indexed by `Γ − Δ`, are increasing.
fn sorted_halves(u: &Permutation, delta: &[usize], rest: &[usize]) -> Permutation {
    let mut c = u.rho();
    for positions in [delta, rest] {
        let mut values: Vec<u32> = positions.iter().map(|&p| c[p]).collect();
        values.sort_unstable();
        for (&p, v) in positions.iter().zip(values) {
            c[p] = v;
        }
    }
    Permutation::from_rho(&c).expect("still a rank vector")
}

/// Builds Dixon's right transversal of the group in `S_n`. The chain must
/// already be re-indexed (see [`reindex`]).
pub fn dixon_transversal(chain: &StabilizerChain, bound: u128) -> Result<DixonData> {
    let n = chain.degree();
    check_degree(n)?;
    if !reindex(chain).is_identity() {
        return Err(Error::Precondition(
            "chain must be re-indexed before building the transversal".into(),
        ));
    }
    let index = factorial(n) / chain.order();
    if index > bound.min(MAX_TRANSVERSAL) {
        return Err(Error::BoundExceeded {
            what: "transversal size",
            size: index,
            bound: bound.min(MAX_TRANSVERSAL),
        });
    }
    let (history, splits) = refine(chain);
    let mut raw_transversals = Vec::with_capacity(splits.len());
    let mut transversals = Vec::with_capacity(splits.len());
    for split in &splits {
        let raw = pairing_products(n, &split.delta, &split.rest);
        let reordered: Vec<Permutation> = raw
            .iter()
            .map(|u| sorted_halves(u, &split.delta, &split.rest))
            .collect();
        raw_transversals.push(raw);
        transversals.push(reordered);
    }
    let last = history.last().expect("Π_0 always exists");
    let size = last
        .iter()
        .map(|part| factorial(part.len()))
        .chain(transversals.iter().map(|u| u.len() as u128))
        .fold(1u128, u128::saturating_mul);
    if size > bound.min(MAX_TRANSVERSAL) {
        return Err(Error::BoundExceeded {
            what: "transversal size",
            size,
            bound: bound.min(MAX_TRANSVERSAL),
        });
    }
    // H_k: parts have disjoint supports, so factors commute.
    let mut r = vec![Permutation::identity(n)];
    for part in last.iter().filter(|p| p.len() > 1) {
        let mut next = Vec::new();
        for arrangement in ordered_arrangements(part) {
            let mut images: Vec<u32> = (0..n as u32).collect();
            for (&from, &to) in part.iter().zip(&arrangement) {
                images[from] = to as u32;
            }
            let sigma = Permutation::from_images0(images);
            next.extend(r.iter().map(|h| h.compose_unchecked(&sigma)));
        }
        r = next;
    }
    for u in transversals.iter().rev() {
        r = r
            .iter()
            .flat_map(|a| u.iter().map(move |b| a.compose_unchecked(b)))
            .collect();
    }
    let one_indexed = |p: &Vec<usize>| p.iter().map(|&m| m + 1).collect::<Vec<_>>();
    Ok(DixonData {
        base: chain.base(),
        partitions: history
            .iter()
            .map(|pi| pi.iter().map(one_indexed).collect())
            .collect(),
        blocks: splits.iter().map(|s| one_indexed(&s.gamma)).collect(),
        raw_transversals,
        transversals,
        transversal: r,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransversalReport {
    pub size: usize,
    pub expected: u128,
    /// No element of `R` appears twice.
    pub distinct: bool,
    /// Whether the quadratic `r'r⁻¹ ∉ G` check ran (it is skipped when
    /// `|R|² > 10⁶`).
    pub pairwise_checked: bool,
    pub pairwise_disjoint: bool,
    /// The cosets `G·r` are pairwise disjoint, checked by enumerating them.
    pub cosets_disjoint: bool,
    pub covers: bool,
    /// `ρ(R)` equals the brute-force ascending image of rank vectors.
    pub rho_equals_image: bool,
}

impl TransversalReport {
    pub fn passed(&self) -> bool {
        self.size as u128 == self.expected
            && self.distinct
            && self.pairwise_disjoint
            && self.cosets_disjoint
            && self.covers
            && self.rho_equals_image
    }
}

pub fn check_transversal(data: &DixonData, chain: &StabilizerChain) -> Result<TransversalReport> {
    let n = chain.degree();
    check_degree(n)?;
    let elements = chain.enumerate_elements(MAX_GROUP_ENUMERATION)?;
    let r = &data.transversal;
    let distinct = r.iter().collect::<HashSet<_>>().len() == r.len();
    let pairwise_checked = (r.len() as u128).pow(2) <= 1_000_000;
    let mut pairwise_disjoint = true;
    if pairwise_checked {
        let inverses: Vec<Permutation> = r.iter().map(Permutation::inverse).collect();
        'pairs: for (i, ri_inv) in inverses.iter().enumerate() {
            for rj in &r[i + 1..] {
                if chain.contains(&rj.compose_unchecked(ri_inv))? {
                    pairwise_disjoint = false;
                    break 'pairs;
                }
            }
        }
    }
    let mut seen = HashSet::with_capacity(elements.len() * r.len());
    let mut cosets_disjoint = true;
    for rep in r {
        for g in &elements {
            if !seen.insert(g.compose_unchecked(rep)) {
                cosets_disjoint = false;
            }
        }
    }
    let covers = seen.len() as u128 == factorial(n);
    let rho: BTreeSet<Vec<u32>> = r.iter().map(Permutation::rho).collect();
    let rho_equals_image = rho == projected_image(chain, Direction::Ascending)?;
    Ok(TransversalReport {
        size: r.len(),
        expected: factorial(n) / chain.order(),
        distinct,
        pairwise_checked,
        pairwise_disjoint,
        cosets_disjoint,
        covers,
        rho_equals_image,
    })
}

// ---------------------------------------------------------------------------
// Images of rank vectors

/// `{φ(c)·c}` over all rank vectors `c`.
pub fn projected_image(chain: &StabilizerChain, dir: Direction) -> Result<BTreeSet<Vec<u32>>> {
    Ok(rank_vectors(chain.degree())?
        .into_iter()
        .map(|c| phi(chain, &c, dir).apply_unchecked(&c))
        .collect())
}

/// Number of distinct canonical forms over all `n!` rank vectors.
pub fn count_canonical_forms(projector: &Projector, kind: ProjectionKind) -> Result<usize> {
    let mut forms = HashSet::new();
    for c in rank_vectors(projector.spec().degree())? {
        let x: Vec<f64> = c.iter().map(|&v| v as f64).collect();
        let canonical = projector.project(&x, kind)?.canonical;
        forms.insert(canonical.iter().map(|&v| v as u32).collect::<Vec<_>>());
    }
    Ok(forms.len())
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageReport {
    pub image_size: usize,
    pub inequality_size: usize,
    pub predicted_size: u128,
    pub equal: bool,
}

impl ImageReport {
    pub fn passed(&self) -> bool {
        self.equal && self.image_size as u128 == self.predicted_size
    }
}

/// Compares the projected image of rank vectors with the set cut out by
/// `c_{b_i} ≤ c_j` for `j ∈ Δ_i` (`≥` for descending).
pub fn characterize_image(chain: &StabilizerChain, dir: Direction) -> Result<ImageReport> {
    check_degree(chain.degree())?;
    if !reindex(chain).is_identity() {
        return Err(Error::Precondition(
            "chain must be re-indexed before characterising its image".into(),
        ));
    }
    let image = projected_image(chain, dir)?;
    let inequalities: BTreeSet<Vec<u32>> = rank_vectors(chain.degree())?
        .into_iter()
        .filter(|c| {
            chain.levels().iter().all(|l| {
                let b = c[l.base0()];
                l.orbit0().iter().all(|&j| match dir {
                    Direction::Ascending => b <= c[j as usize],
                    Direction::Descending => b >= c[j as usize],
                })
            })
        })
        .collect();
    Ok(ImageReport {
        image_size: image.len(),
        inequality_size: inequalities.len(),
        predicted_size: factorial(chain.degree()) / chain.order(),
        equal: image == inequalities,
    })
}

// ---------------------------------------------------------------------------
// Galleries

/// Two rank vectors are adjacent when they differ by swapping two entries
/// that are consecutive integers.
pub fn adjacent(a: &[u32], b: &[u32]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
    match diff[..] {
        [i, j] => a[i] == b[j] && a[j] == b[i] && a[i].abs_diff(a[j]) == 1,
        _ => false,
    }
}

#[derive(Clone, Debug)]
pub struct GalleryGraph {
    vertices: Vec<Vec<u32>>,
    edges: Vec<(usize, usize)>,
}

impl GalleryGraph {
    pub fn new<I: IntoIterator<Item = Vec<u32>>>(vertices: I) -> Self {
        let vertices: Vec<Vec<u32>> = vertices
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<&[u32], usize> = vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.as_slice(), k))
            .collect();
        let mut edges = Vec::new();
        for (k, v) in vertices.iter().enumerate() {
            let mut position = vec![0usize; v.len() + 1];
            for (i, &value) in v.iter().enumerate() {
                if let Some(slot) = position.get_mut(value as usize) {
                    *slot = i;
                }
            }
            for value in 1..v.len() {
                let mut w = v.clone();
                w.swap(position[value], position[value + 1]);
                if let Some(&other) = index.get(w.as_slice()) {
                    if k < other {
                        edges.push((k, other));
                    }
                }
            }
        }
        GalleryGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[Vec<u32>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    pub reached: usize,
    /// BFS tree edges `(parent, child)` over vertex indices, a certificate
    /// of connectivity when `connected`.
    pub tree: Vec<(usize, usize)>,
}

pub fn gallery_connected<I: IntoIterator<Item = Vec<u32>>>(
    vertices: I,
) -> (GalleryGraph, Connectivity) {
    let graph = GalleryGraph::new(vertices);
    let count = graph.vertices.len();
    let mut neighbours = vec![Vec::new(); count];
    for &(a, b) in &graph.edges {
        neighbours[a].push(b);
        neighbours[b].push(a);
    }
    let mut visited = vec![false; count];
    let mut tree = Vec::new();
    let mut queue = VecDeque::new();
    if count > 0 {
        visited[0] = true;
        queue.push_back(0);
    }
    while let Some(v) = queue.pop_front() {
        for &w in &neighbours[v] {
            if !visited[w] {
                visited[w] = true;
                tree.push((v, w));
                queue.push_back(w);
            }
        }
    }
    let reached = visited.iter().filter(|&&v| v).count();
    let connectivity = Connectivity {
        connected: reached == count,
        reached,
        tree,
    };
    (graph, connectivity)
}

// ---------------------------------------------------------------------------
// Harnesses

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub group_spec: Value,
    pub trials: usize,
    pub failures: usize,
    pub details: Vec<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Independent stream per trial, so trials can be replayed or split up.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn has_ties(x: &[f64]) -> bool {
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).any(|w| w[0] == w[1])
}

fn continuous_sample<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if !has_ties(&x) {
            return x;
        }
    }
}

fn bit_equal(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InvarianceStats {
    pub trials: usize,
    pub canonical_failures: usize,
    pub cocycle_failures: usize,
    pub idempotence_failures: usize,
    pub rank_failures: usize,
    /// Only counted for tensor actions.
    pub mu_failures: usize,
    /// Trials of the tied-input track (small integer entries).
    pub tied_trials: usize,
    /// Tied-input trials where `π(g·x) = π(x)` held anyway.
    pub tied_invariant: usize,
}

impl InvarianceStats {
    pub fn failures(&self) -> usize {
        self.canonical_failures
            + self.cocycle_failures
            + self.idempotence_failures
            + self.rank_failures
            + self.mu_failures
    }

    pub fn tied_rate(&self) -> f64 {
        if self.tied_trials == 0 {
            return 1.0;
        }
        self.tied_invariant as f64 / self.tied_trials as f64
    }

    pub fn report(&self, suite: &str, group_spec: Value) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            group_spec,
            trials: self.trials,
            failures: self.failures(),
            details: vec![json!({
                "canonical_failures": self.canonical_failures,
                "cocycle_failures": self.cocycle_failures,
                "idempotence_failures": self.idempotence_failures,
                "rank_failures": self.rank_failures,
                "mu_failures": self.mu_failures,
                "tied_trials": self.tied_trials,
                "tied_invariance_rate": self.tied_rate(),
            })],
        }
    }
}

/// For each trial draws a continuous `x` and a uniform `g ∈ G` and checks
/// `π(g·x) = π(x)`, `φ(g·x) = φ(x)∘g⁻¹`, `π(π(x)) = π(x)`,
/// `x̂(g·x) = g·x̂(x)` and, for tensors, `μ(g·x) = g·μ(x)` to 1e-12. A
/// second track with repeated integer entries only measures how often
/// `π(g·x) = π(x)` still holds.
pub fn harness_invariance(
    projector: &Projector,
    kind: ProjectionKind,
    samples: usize,
    seed: u64,
) -> Result<InvarianceStats> {
    let n = projector.spec().degree();
    let chain = projector.chain();
    let dims = projector.spec().shape();
    let tensor = projector.spec().is_tensor();
    let mut stats = InvarianceStats::default();
    for trial in 0..samples {
        let mut rng = trial_rng(seed, trial);
        let x = continuous_sample(&mut rng, n);
        let g = chain.random_element(&mut rng);
        let gx = g.apply_unchecked(&x);
        let base = projector.project(&x, kind)?;
        let moved = projector.project(&gx, kind)?;
        stats.trials += 1;
        if !bit_equal(&base.canonical, &moved.canonical) {
            stats.canonical_failures += 1;
        }
        if moved.witness != base.witness.compose_unchecked(&g.inverse()) {
            stats.cocycle_failures += 1;
        }
        let again = projector.project(&base.canonical, kind)?;
        if !bit_equal(&again.canonical, &base.canonical) {
            stats.idempotence_failures += 1;
        }
        let cfg = projector.perturbation();
        let ranks = rank_hat(&x, cfg)?.into_inner();
        if rank_hat(&gx, cfg)?.into_inner() != g.apply_unchecked(&ranks) {
            stats.rank_failures += 1;
        }
        if tensor {
            let mu = g.apply_unchecked(&mu_average(&x, &dims)?);
            let mu_moved = mu_average(&gx, &dims)?;
            if mu.iter().zip(&mu_moved).any(|(a, b)| (a - b).abs() > 1e-12) {
                stats.mu_failures += 1;
            }
        }

        let tied: Vec<f64> = (0..n).map(|_| rng.gen_range(0..3) as f64).collect();
        let h = chain.random_element(&mut rng);
        let left = projector.project(&tied, kind)?.canonical;
        let right = projector
            .project(&h.apply_unchecked(&tied), kind)?
            .canonical;
        stats.tied_trials += 1;
        if bit_equal(&left, &right) {
            stats.tied_invariant += 1;
        }
    }
    Ok(stats)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConjugationStats {
    pub trials: usize,
    /// Trials where `π'(x) ≠ s⁻¹·π(s·x)`.
    pub canonical_failures: usize,
    /// Trials where `φ'(x) ≠ s⁻¹∘φ(s·x)∘s`.
    pub witness_failures: usize,
    /// Trials where the mirrored form `s·π(s⁻¹·x)` also agrees with `π'(x)`
    /// (always, when `s` is an involution). Measured only.
    pub mirrored_matches: usize,
}

impl ConjugationStats {
    pub fn failures(&self) -> usize {
        self.canonical_failures + self.witness_failures
    }

    pub fn report(&self, group_spec: Value, s: &Permutation) -> SuiteReport {
        SuiteReport {
            suite: "conjugation".into(),
            group_spec,
            trials: self.trials,
            failures: self.failures(),
            details: vec![json!({
                "relabeling": s.to_string(),
                "canonical_failures": self.canonical_failures,
                "witness_failures": self.witness_failures,
                "mirrored_matches": self.mirrored_matches,
            })],
        }
    }
}

/// Projects under `G' = s⁻¹Gs` with base `B·s` and compares against the
/// original projection transported by `s`.
pub fn harness_conjugation(
    projector: &Projector,
    s: &Permutation,
    kind: ProjectionKind,
    samples: usize,
    seed: u64,
) -> Result<ConjugationStats> {
    if kind.is_averaging() {
        return Err(Error::Precondition(
            "conjugation is checked for asc and desc only".into(),
        ));
    }
    let (group, chain) = conjugate(projector.chain(), s)?;
    let conjugated = Projector::with_chain(ActionSpec::Plain(group), chain)?;
    let n = projector.spec().degree();
    let s_inv = s.inverse();
    let mut stats = ConjugationStats::default();
    for trial in 0..samples {
        let mut rng = trial_rng(seed, trial);
        let x = continuous_sample(&mut rng, n);
        let direct = conjugated.project(&x, kind)?;
        let transported = projector.project(&s.apply_unchecked(&x), kind)?;
        stats.trials += 1;
        if !bit_equal(
            &direct.canonical,
            &s_inv.apply_unchecked(&transported.canonical),
        ) {
            stats.canonical_failures += 1;
        }
        if direct.witness != transported.witness.conjugate_by(s)? {
            stats.witness_failures += 1;
        }
        let mirrored = projector.project(&s_inv.apply_unchecked(&x), kind)?;
        if bit_equal(&direct.canonical, &s.apply_unchecked(&mirrored.canonical)) {
            stats.mirrored_matches += 1;
        }
    }
    Ok(stats)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DirichletStats {
    pub trials: usize,
    /// Descents whose objective trace was not strictly decreasing.
    pub monotonicity_failures: usize,
    /// Trials where multi-seed descent reached the exact minimiser.
    pub oracle_matches: usize,
    pub unique_trials: usize,
    /// Unique-minimiser trials where the exact minimiser of `g·x` differed.
    pub invariance_failures: usize,
}

impl DirichletStats {
    pub fn match_rate(&self) -> f64 {
        if self.trials == 0 {
            return 1.0;
        }
        self.oracle_matches as f64 / self.trials as f64
    }

    pub fn report(&self, group_spec: Value) -> SuiteReport {
        SuiteReport {
            suite: "dirichlet-oracle".into(),
            group_spec,
            trials: self.trials,
            failures: self.monotonicity_failures + self.invariance_failures,
            details: vec![json!({
                "monotonicity_failures": self.monotonicity_failures,
                "oracle_matches": self.oracle_matches,
                "match_rate": self.match_rate(),
                "unique_trials": self.unique_trials,
                "invariance_failures": self.invariance_failures,
            })],
        }
    }
}

/// Multi-seed descent against the brute-force minimiser on integer
/// matrices with entries in `0..=max_entry`, under a two-factor tensor
/// action.
pub fn harness_dirichlet(
    factors: &[PermGroup; 2],
    max_entry: u32,
    samples: usize,
    seed: u64,
) -> Result<DirichletStats> {
    let spec = ActionSpec::Tensor(factors.to_vec());
    let chain = spec.chain();
    let cfg = DirichletConfig::for_spec(&spec);
    let n = spec.degree();
    let mut stats = DirichletStats::default();
    for trial in 0..samples {
        let mut rng = trial_rng(seed, trial);
        let x: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0..=max_entry) as f64)
            .collect();
        let run = descend_multi_seed(&x, factors, &cfg)?;
        stats.trials += 1;
        if run.trace.windows(2).any(|w| w[1] >= w[0]) {
            stats.monotonicity_failures += 1;
        }
        let exact = brute_force_min(&chain, &x, cfg.reference(), MAX_GROUP_ENUMERATION)?;
        if exact.objective == run.objective && exact.result.canonical == run.result.canonical {
            stats.oracle_matches += 1;
        }
        if exact.unique {
            stats.unique_trials += 1;
            let g = chain.random_element(&mut rng);
            let moved = brute_force_min(
                &chain,
                &g.apply_unchecked(&x),
                cfg.reference(),
                MAX_GROUP_ENUMERATION,
            )?;
            if moved.result.canonical != exact.result.canonical {
                stats.invariance_failures += 1;
            }
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{alternating, cyclic, dihedral, symmetric};
    use crate::perm::parse_cycles;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_cycle_strings(n, gens).unwrap()
    }

    #[test]
    fn rank_vectors_are_all_permutations() {
        let all = rank_vectors(4).unwrap();
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 24);
        assert_eq!(all[0], vec![1, 2, 3, 4]);
        assert_eq!(all[23], vec![4, 3, 2, 1]);
        assert!(rank_vectors(9).is_err());
    }

    #[test]
    fn reindex_examples() {
        let g = group(4, &["(1 2)", "(3 4)"]);
        assert!(reindex(&g.chain()).is_identity());
        assert!(reindex(&PermGroup::trivial(5).chain()).is_identity());
        let g = group(3, &["(1 3)"]);
        assert_eq!(reindex(&g.chain()), parse_cycles("(2 3)", 3).unwrap());
    }

    #[test]
    fn reindexed_parts_are_consecutive() {
        let g = group(6, &["(1 4)", "(2 6)(3 5)"]);
        let chain = g.chain();
        let s = reindex(&chain);
        let (_, relabeled) = conjugate(&chain, &s).unwrap();
        assert!(reindex(&relabeled).is_identity());
        assert!(is_orbit_minimal(&relabeled));
        for pi in partitions(&relabeled) {
            for part in pi {
                assert!(part.windows(2).all(|w| w[1] == w[0] + 1), "{part:?}");
            }
        }
    }

    #[test]
    fn partitions_cover_and_are_disjoint() {
        let chain = dihedral(6).unwrap().chain();
        for pi in partitions(&chain) {
            let mut all: Vec<usize> = pi.concat();
            all.sort_unstable();
            assert_eq!(all, (1..=6).collect::<Vec<_>>());
        }
    }

    #[test]
    fn dixon_sizes() {
        let full = symmetric(4).unwrap().chain();
        let data = dixon_transversal(&full, 1000).unwrap();
        assert_eq!(data.transversal, vec![Permutation::identity(4)]);

        let chain = group(4, &["(1 2)", "(3 4)"]).chain();
        let data = dixon_transversal(&chain, 1000).unwrap();
        assert_eq!(data.transversal.len(), 6);
        let report = check_transversal(&data, &chain).unwrap();
        assert!(report.passed(), "{report:?}");

        let chain = alternating(4).unwrap().chain();
        let data = dixon_transversal(&chain, 1000).unwrap();
        assert_eq!(data.transversal.len(), 2);
        assert!(check_transversal(&data, &chain).unwrap().passed());
    }

    #[test]
    fn raw_transversal_counts_are_binomial() {
        let chain = cyclic(5).unwrap().chain();
        let data = dixon_transversal(&chain, 1000).unwrap();
        for (block, raw) in data.blocks.iter().zip(&data.raw_transversals) {
            let level = chain
                .levels()
                .iter()
                .find(|l| block.contains(&l.base_point()))
                .unwrap();
            let (m, total) = (level.orbit_len(), block.len());
            let binomial = factorial(total) / (factorial(m) * factorial(total - m));
            assert_eq!(raw.len() as u128, binomial);
        }
    }

    #[test]
    fn dixon_refuses_unindexed_chain() {
        let chain = group(3, &["(1 3)"]).chain();
        assert!(matches!(
            dixon_transversal(&chain, 100),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn counting_examples() {
        for (g, expected) in [
            (cyclic(4).unwrap(), 6),
            (dihedral(4).unwrap(), 3),
            (symmetric(4).unwrap(), 1),
        ] {
            let projector = Projector::new(ActionSpec::Plain(g));
            for kind in [ProjectionKind::Ascending, ProjectionKind::Descending] {
                assert_eq!(count_canonical_forms(&projector, kind).unwrap(), expected);
            }
        }
    }

    #[test]
    fn image_examples() {
        let z3 = cyclic(3).unwrap().chain();
        let image = projected_image(&z3, Direction::Ascending).unwrap();
        assert_eq!(
            image.into_iter().collect::<Vec<_>>(),
            vec![vec![1, 2, 3], vec![1, 3, 2]]
        );
        assert!(characterize_image(&z3, Direction::Ascending)
            .unwrap()
            .passed());
        let s3 = symmetric(3).unwrap().chain();
        let image = projected_image(&s3, Direction::Ascending).unwrap();
        assert_eq!(image.into_iter().collect::<Vec<_>>(), vec![vec![1, 2, 3]]);
        let report =
            characterize_image(&group(4, &["(1 2)", "(3 4)"]).chain(), Direction::Ascending)
                .unwrap();
        assert_eq!(report.image_size, 6);
        assert!(report.passed());
    }

    #[test]
    fn gallery_examples() {
        let (_, single) = gallery_connected([vec![1, 2, 3]]);
        assert!(single.connected);
        let (graph, apart) = gallery_connected([vec![1, 2, 3], vec![3, 2, 1]]);
        assert!(!apart.connected);
        assert!(graph.edges().is_empty());
        let image = projected_image(&cyclic(4).unwrap().chain(), Direction::Ascending).unwrap();
        let (graph, c) = gallery_connected(image);
        assert_eq!(graph.vertices().len(), 6);
        assert!(c.connected);
        assert_eq!(c.tree.len(), 5);
        for &(a, b) in &c.tree {
            assert!(adjacent(&graph.vertices()[a], &graph.vertices()[b]));
        }
    }

    #[test]
    fn adjacency_rule() {
        assert!(adjacent(&[1, 2, 3], &[2, 1, 3]));
        assert!(adjacent(&[1, 3, 2], &[1, 2, 3]));
        assert!(!adjacent(&[1, 2, 3], &[3, 2, 1]));
        assert!(!adjacent(&[1, 2, 3], &[1, 2, 3]));
    }

    #[test]
    fn graph_edges_match_rule() {
        let vertices = rank_vectors(4).unwrap();
        let graph = GalleryGraph::new(vertices.clone());
        let mut brute = 0;
        for (i, a) in graph.vertices().iter().enumerate() {
            for b in &graph.vertices()[i + 1..] {
                if adjacent(a, b) {
                    brute += 1;
                }
            }
        }
        assert_eq!(graph.edges().len(), brute);
        // each of 24 vertices has 3 neighbours
        assert_eq!(brute, 24 * 3 / 2);
    }

    #[test]
    fn invariance_harness_passes() {
        let projector = Projector::new(ActionSpec::Plain(dihedral(5).unwrap()));
        let stats = harness_invariance(&projector, ProjectionKind::Ascending, 200, 7).unwrap();
        assert_eq!(stats.trials, 200);
        assert_eq!(stats.failures(), 0, "{stats:?}");
    }

    #[test]
    fn conjugation_harness() {
        let projector = Projector::new(ActionSpec::Plain(cyclic(4).unwrap()));
        let id = Permutation::identity(4);
        let stats = harness_conjugation(&projector, &id, ProjectionKind::Ascending, 50, 1).unwrap();
        assert_eq!(stats.failures(), 0);
        let s = parse_cycles("(1 2 3)", 4).unwrap();
        let stats = harness_conjugation(&projector, &s, ProjectionKind::Ascending, 200, 1).unwrap();
        assert_eq!(stats.failures(), 0, "{stats:?}");
    }

    #[test]
    fn dirichlet_harness_runs() {
        let factors = [cyclic(3).unwrap(), cyclic(3).unwrap()];
        let stats = harness_dirichlet(&factors, 9, 20, 3).unwrap();
        assert_eq!(stats.trials, 20);
        assert_eq!(stats.monotonicity_failures, 0);
        assert_eq!(stats.invariance_failures, 0);
    }
}
