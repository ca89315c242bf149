//! Permutation groups given by generators, and their stabilizer chains.
//!
//! Chains are built with a deterministic Schreier–Sims. Unless a base
//! prefix is prescribed, each base point is the smallest point moved by the
//! current stabilizer, which makes the base orbit-minimal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::{parse_cycles, Permutation};

/// Which named family a group was built from, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Symmetric,
    Alternating,
    Cyclic,
    Dihedral,
    Generic,
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    family: Family,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        Ok(PermGroup {
            degree,
            generators,
            family: Family::Generic,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: vec![Permutation::identity(degree)],
            family: Family::Generic,
        }
    }

    /// Generators in cycle notation, e.g. `["(1 2)", "(3 4)"]`.
    pub fn from_cycle_strings<S: AsRef<str>>(degree: usize, generators: &[S]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| parse_cycles(g.as_ref(), degree))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub(crate) fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    pub fn chain(&self) -> StabilizerChain {
        build_chain(self)
    }

    /// Product of `word_length` generators or inverse generators drawn
    /// uniformly with a seeded RNG.
    pub fn random_element(&self, word_length: usize, seed: u64) -> Permutation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.random_element_with(word_length, &mut rng)
    }

    pub fn random_element_with<R: Rng + ?Sized>(
        &self,
        word_length: usize,
        rng: &mut R,
    ) -> Permutation {
        let letters: Vec<Permutation> = self
            .generators
            .iter()
            .flat_map(|g| [g.clone(), g.inverse()])
            .collect();
        let mut acc = Permutation::identity(self.degree);
        for _ in 0..word_length.max(1) {
            let t = &letters[rng.gen_range(0..letters.len())];
            acc = t.compose_unchecked(&acc);
        }
        acc
    }
}

/// One level of a stabilizer chain: base point `b`, strong generators of
/// `G_{i-1}`, the orbit `Δ = b·G_{i-1}` in discovery order, and a
/// transversal.
#[derive(Clone, Debug)]
pub struct Level {
    base: usize,
    generators: Vec<Permutation>,
    orbit: Vec<u32>,
    // forward[j] = v_j with v_j(b) = j.
    forward: Vec<Option<Permutation>>,
    // backward[j] = u_j = v_j⁻¹, so b·u_j = j under the right action.
    backward: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base: usize, generators: Vec<Permutation>) -> Self {
        let mut level = Level {
            base,
            generators,
            orbit: Vec::new(),
            forward: Vec::new(),
            backward: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        let (orbit, forward) = orbit_transversal0(&self.generators, self.base, degree);
        self.backward = forward
            .iter()
            .map(|v| v.as_ref().map(Permutation::inverse))
            .collect();
        self.orbit = orbit;
        self.forward = forward;
    }

    fn add_generator(&mut self, g: Permutation, degree: usize) {
        self.generators.push(g);
        self.rebuild_orbit(degree);
    }

    /// Base point, 1-indexed.
    pub fn base_point(&self) -> usize {
        self.base + 1
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The orbit `Δ`, 1-indexed, in discovery order.
    pub fn orbit(&self) -> Vec<usize> {
        self.orbit.iter().map(|&p| p as usize + 1).collect()
    }

    pub fn orbit_len(&self) -> usize {
        self.orbit.len()
    }

    pub(crate) fn orbit0(&self) -> &[u32] {
        &self.orbit
    }

    pub(crate) fn base0(&self) -> usize {
        self.base
    }

    /// `u_j` with `b·u_j = j`, for a 1-indexed `j` in the orbit.
    pub fn transversal(&self, j: usize) -> Option<&Permutation> {
        j.checked_sub(1)
            .and_then(|j| self.backward.get(j))
            .and_then(Option::as_ref)
    }

    #[inline]
    pub(crate) fn forward0(&self, j: usize) -> Option<&Permutation> {
        self.forward[j].as_ref()
    }

    #[inline]
    pub(crate) fn backward0(&self, j: usize) -> Option<&Permutation> {
        self.backward[j].as_ref()
    }
}

/// Orbit of `b` (0-indexed) and `v_j` with `v_j(b) = j`, by BFS.
fn orbit_transversal0(
    gens: &[Permutation],
    b: usize,
    degree: usize,
) -> (Vec<u32>, Vec<Option<Permutation>>) {
    let mut forward: Vec<Option<Permutation>> = vec![None; degree];
    forward[b] = Some(Permutation::identity(degree));
    let mut orbit = vec![b as u32];
    let mut head = 0;
    while head < orbit.len() {
        let p = orbit[head] as usize;
        head += 1;
        for s in gens {
            let q = s.image0(p);
            if forward[q].is_none() {
                let vp = forward[p].as_ref().expect("visited");
                forward[q] = Some(s.compose_unchecked(vp));
                orbit.push(q as u32);
            }
        }
    }
    (orbit, forward)
}

/// An orbit in discovery order and its transversal pairs `(j, u_j)`.
pub type OrbitTransversal = (Vec<usize>, Vec<(usize, Permutation)>);

/// Orbit of a 1-indexed point under `gens`, with the transversal map
/// `j ↦ u_j` satisfying `b·u_j = j` (right action).
pub fn orbit_with_transversal(gens: &[Permutation], b: usize) -> Result<OrbitTransversal> {
    let degree = gens.first().ok_or(Error::NoGenerators)?.degree();
    if b == 0 || b > degree {
        return Err(Error::PointOutOfRange { point: b, degree });
    }
    let (orbit, forward) = orbit_transversal0(gens, b - 1, degree);
    let transversal = orbit
        .iter()
        .map(|&j| {
            let v = forward[j as usize].as_ref().expect("orbit point");
            (j as usize + 1, v.inverse())
        })
        .collect();
    Ok((orbit.iter().map(|&p| p as usize + 1).collect(), transversal))
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

/// Chain with a greedy, orbit-minimal base.
pub fn build_chain(group: &PermGroup) -> StabilizerChain {
    StabilizerChain::with_base(group, &[]).expect("empty prefix is always valid")
}

impl StabilizerChain {
    /// Builds a chain whose base starts with `prefix` (1-indexed) and is
    /// extended greedily. Prefix points fixed by the current stabilizer give
    /// levels with singleton orbits.
    pub fn with_base(group: &PermGroup, prefix: &[usize]) -> Result<Self> {
        let degree = group.degree();
        let mut prefix0 = Vec::with_capacity(prefix.len());
        for &b in prefix {
            if b == 0 || b > degree {
                return Err(Error::PointOutOfRange { point: b, degree });
            }
            if prefix0.contains(&(b - 1)) {
                return Err(Error::RepeatedPoint(b));
            }
            prefix0.push(b - 1);
        }
        let fixed = prefix0.len();
        loop {
            let levels = schreier_sims(degree, group.generators(), &prefix0);
            let violation = levels
                .iter()
                .enumerate()
                .skip(fixed)
                .find_map(|(i, level)| {
                    let smallest = level
                        .generators
                        .iter()
                        .filter_map(Permutation::smallest_moved_point0)
                        .min()?;
                    (smallest != level.base).then_some((i, smallest))
                });
            match violation {
                None => return Ok(StabilizerChain { degree, levels }),
                Some((i, smallest)) => {
                    prefix0 = levels[..i].iter().map(|l| l.base).collect();
                    prefix0.push(smallest);
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Base points, 1-indexed.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(Level::base_point).collect()
    }

    /// `∏ |Δ_i|`, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.orbit.len() as u128))
    }

    /// Strips `g` level by level. Returns the residue and the index of the
    /// level where stripping stopped (`levels.len()` if it passed them all).
    pub(crate) fn sift_from(&self, start: usize, mut g: Permutation) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let j = g.image0(level.base);
            match level.backward0(j) {
                Some(u) => g = u.compose_unchecked(&g),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        let (residue, _) = self.sift_from(0, p.clone());
        Ok(residue.is_identity())
    }

    /// All elements, each exactly once, as products `v_1 ∘ v_2 ∘ ... ∘ v_k`
    /// of transversal elements.
    pub fn enumerate_elements(&self, bound: u128) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > bound {
            return Err(Error::BoundExceeded {
                what: "group order",
                size: order,
                bound,
            });
        }
        let mut elements = vec![Permutation::identity(self.degree)];
        for level in &self.levels {
            let mut next = Vec::with_capacity(elements.len() * level.orbit.len());
            for e in &elements {
                for &j in &level.orbit {
                    let v = level.forward0(j as usize).expect("orbit point");
                    next.push(e.compose_unchecked(v));
                }
            }
            elements = next;
        }
        Ok(elements)
    }

    /// Uniformly distributed element: one random transversal element per
    /// level, multiplied together.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut acc = Permutation::identity(self.degree);
        for level in &self.levels {
            let j = level.orbit[rng.gen_range(0..level.orbit.len())] as usize;
            acc = acc.compose_unchecked(level.forward0(j).expect("orbit point"));
        }
        acc
    }
}

pub fn group_order(chain: &StabilizerChain) -> u128 {
    chain.order()
}

fn schreier_sims(degree: usize, generators: &[Permutation], prefix: &[usize]) -> Vec<Level> {
    let mut gens: Vec<Permutation> = Vec::new();
    for g in generators {
        if !g.is_identity() && !gens.contains(g) {
            gens.push(g.clone());
        }
    }
    let mut base = prefix.to_vec();
    for g in &gens {
        if base.iter().all(|&b| g.image0(b) == b) {
            base.push(g.smallest_moved_point0().expect("non-identity"));
        }
    }
    let levels: Vec<Level> = (0..base.len())
        .map(|i| {
            let strong = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&b| g.image0(b) == b))
                .cloned()
                .collect();
            Level::new(degree, base[i], strong)
        })
        .collect();

    let mut chain = StabilizerChain { degree, levels };
    let mut i = chain.levels.len();
    while i > 0 {
        let idx = i - 1;
        match first_failing_schreier_generator(&chain, idx) {
            None => i -= 1,
            Some((residue, drop)) => {
                if drop == chain.levels.len() {
                    let b = residue.smallest_moved_point0().expect("non-identity");
                    chain.levels.push(Level::new(degree, b, Vec::new()));
                }
                for level in &mut chain.levels[idx + 1..=drop] {
                    level.add_generator(residue.clone(), degree);
                }
                i = drop + 1;
            }
        }
    }
    chain.levels
}

fn first_failing_schreier_generator(
    chain: &StabilizerChain,
    idx: usize,
) -> Option<(Permutation, usize)> {
    let level = &chain.levels[idx];
    for &p in &level.orbit {
        let p = p as usize;
        let vp = level.forward0(p).expect("orbit point");
        for s in &level.generators {
            let q = s.image0(p);
            let uq = level.backward0(q).expect("orbit is closed");
            let h = uq.compose_unchecked(&s.compose_unchecked(vp));
            if h.is_identity() {
                continue;
            }
            let (residue, drop) = chain.sift_from(idx + 1, h);
            if drop < chain.levels.len() || !residue.is_identity() {
                return Some((residue, drop));
            }
        }
    }
    None
}
