//! Structured actions (plain vectors, direct sums, tensors) and the named
//! groups used to build them.
//!
//! Tensors are flattened row-major: the multi-index `(i_1, ..., i_r)` sits at
//! flat position `1 + Σ_j (i_j - 1) · ∏_{j' > j} n_{j'}`. A 3×3 matrix
//! `[[a, b, c], [d, e, f], [g, h, i]]` is the vector `(a, b, ..., i)`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{build_chain, Family, PermGroup, StabilizerChain};
use crate::perm::{format_cycles, Permutation};

fn full_cycle(n: usize, from: usize) -> Permutation {
    let points: Vec<usize> = (from..=n).collect();
    Permutation::cycle(n, &points).expect("valid cycle")
}

/// `S_n` generated by `(1 2)` and `(1 2 ... n)`.
pub fn symmetric(n: usize) -> Result<PermGroup> {
    let gens = match n {
        0 => {
            return Err(Error::InvalidDegree {
                degree: n,
                what: "symmetric group",
            })
        }
        1 => vec![Permutation::identity(1)],
        2 => vec![full_cycle(2, 1)],
        _ => vec![Permutation::transposition(n, 1, 2)?, full_cycle(n, 1)],
    };
    Ok(PermGroup::new(n, gens)?.with_family(Family::Symmetric))
}

/// `A_n` generated by `(1 2 3)` and `(1 2 ... n)` for odd `n`, or
/// `(2 3 ... n)` for even `n`.
pub fn alternating(n: usize) -> Result<PermGroup> {
    let gens = match n {
        0 => {
            return Err(Error::InvalidDegree {
                degree: n,
                what: "alternating group",
            })
        }
        1 | 2 => vec![Permutation::identity(n)],
        3 => vec![full_cycle(3, 1)],
        _ if n % 2 == 1 => vec![Permutation::cycle(n, &[1, 2, 3])?, full_cycle(n, 1)],
        _ => vec![Permutation::cycle(n, &[1, 2, 3])?, full_cycle(n, 2)],
    };
    Ok(PermGroup::new(n, gens)?.with_family(Family::Alternating))
}

/// `Z_n` generated by `(1 2 ... n)`.
pub fn cyclic(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::InvalidDegree {
            degree: n,
            what: "cyclic group",
        });
    }
    Ok(PermGroup::new(n, vec![full_cycle(n, 1)])?.with_family(Family::Cyclic))
}

/// `D_n` generated by `(1 2 ... n)` and `(2 n)(3 n-1)(4 n-2)...`.
pub fn dihedral(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::InvalidDegree {
            degree: n,
            what: "dihedral group",
        });
    }
    let reflection: Vec<Vec<usize>> = (2..)
        .map(|k| vec![k, n + 2 - k])
        .take_while(|pair| pair[0] < pair[1])
        .collect();
    let mut gens = vec![full_cycle(n, 1)];
    if !reflection.is_empty() {
        gens.push(Permutation::from_cycles(n, &reflection)?);
    }
    Ok(PermGroup::new(n, gens)?.with_family(Family::Dihedral))
}

#[derive(Clone, Debug)]
pub enum ActionSpec {
    /// A group acting on `R^n` by permuting coordinates.
    Plain(PermGroup),
    /// Each factor acts on its own block of coordinates.
    DirectSum(Vec<ActionSpec>),
    /// Factor `j` permutes the `j`-th tensor index.
    Tensor(Vec<PermGroup>),
}

impl ActionSpec {
    pub fn degree(&self) -> usize {
        match self {
            ActionSpec::Plain(g) => g.degree(),
            ActionSpec::DirectSum(factors) => factors.iter().map(ActionSpec::degree).sum(),
            ActionSpec::Tensor(factors) => factors.iter().map(PermGroup::degree).product(),
        }
    }

    /// Tensor dimensions, or `[degree]` for the other kinds.
    pub fn shape(&self) -> Vec<usize> {
        match self {
            ActionSpec::Tensor(factors) => factors.iter().map(PermGroup::degree).collect(),
            _ => vec![self.degree()],
        }
    }

    /// The permutation group on flat indices.
    pub fn flatten(&self) -> PermGroup {
        match self {
            ActionSpec::Plain(g) => g.clone(),
            ActionSpec::DirectSum(factors) => {
                let total = self.degree();
                let mut offset = 0;
                let mut gens = Vec::new();
                for factor in factors {
                    let flat = factor.flatten();
                    gens.extend(
                        flat.generators()
                            .iter()
                            .filter(|g| !g.is_identity())
                            .map(|g| shift(g, offset, total)),
                    );
                    offset += flat.degree();
                }
                group_or_trivial(total, gens)
            }
            ActionSpec::Tensor(factors) => {
                let dims = self.shape();
                let total = self.degree();
                let gens = factors
                    .iter()
                    .enumerate()
                    .flat_map(|(j, h)| {
                        let dims = &dims;
                        h.generators()
                            .iter()
                            .filter(|g| !g.is_identity())
                            .map(move |g| lift_tensor(dims, j, g))
                    })
                    .collect();
                group_or_trivial(total, gens)
            }
        }
    }

    /// The base used for projections: greedy for plain groups,
    /// concatenated for direct sums, and the corner-first tensor base for
    /// tensors. 1-indexed flat points.
    pub fn natural_base(&self) -> Vec<usize> {
        match self {
            ActionSpec::Plain(g) => build_chain(g).base(),
            ActionSpec::DirectSum(factors) => {
                let mut offset = 0;
                let mut base = Vec::new();
                for factor in factors {
                    base.extend(factor.natural_base().into_iter().map(|b| b + offset));
                    offset += factor.degree();
                }
                base
            }
            ActionSpec::Tensor(factors) => tensor_base(factors),
        }
    }

    /// Stabilizer chain of the flattened group with [`Self::natural_base`].
    pub fn chain(&self) -> StabilizerChain {
        StabilizerChain::with_base(&self.flatten(), &self.natural_base())
            .expect("natural base points are in range")
    }

    pub fn is_tensor(&self) -> bool {
        matches!(self, ActionSpec::Tensor(_))
    }

    /// Parses the JSON group-spec format:
    /// `{"kind": "symmetric"|"alternating"|"cyclic"|"dihedral"|"generators",
    /// "degree": n, "generators": [...]}`, `{"tensor": [...]}` and
    /// `{"direct_sum": [...]}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Spec("expected a JSON object".into()))?;
        if let Some(factors) = obj.get("tensor") {
            let factors = factors
                .as_array()
                .ok_or_else(|| Error::Spec("\"tensor\" must be an array".into()))?;
            if factors.is_empty() {
                return Err(Error::Spec("\"tensor\" needs at least one factor".into()));
            }
            let groups = factors
                .iter()
                .map(|f| match ActionSpec::from_json(f)? {
                    ActionSpec::Plain(g) => Ok(g),
                    _ => Err(Error::Spec("tensor factors must be plain groups".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(ActionSpec::Tensor(groups));
        }
        if let Some(factors) = obj.get("direct_sum") {
            let factors = factors
                .as_array()
                .ok_or_else(|| Error::Spec("\"direct_sum\" must be an array".into()))?;
            if factors.is_empty() {
                return Err(Error::Spec(
                    "\"direct_sum\" needs at least one factor".into(),
                ));
            }
            return Ok(ActionSpec::DirectSum(
                factors
                    .iter()
                    .map(ActionSpec::from_json)
                    .collect::<Result<_>>()?,
            ));
        }
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Spec("missing \"kind\"".into()))?;
        let degree = obj
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Spec("missing or invalid \"degree\"".into()))?
            as usize;
        let group = match kind {
            "symmetric" => symmetric(degree)?,
            "alternating" => alternating(degree)?,
            "cyclic" => cyclic(degree)?,
            "dihedral" => dihedral(degree)?,
            "generators" => {
                let gens = obj
                    .get("generators")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Spec("missing \"generators\"".into()))?;
                let gens = gens
                    .iter()
                    .map(|g| {
                        g.as_str()
                            .ok_or_else(|| Error::Spec("generators must be strings".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if degree == 0 {
                    return Err(Error::InvalidDegree {
                        degree,
                        what: "generated group",
                    });
                }
                if gens.is_empty() {
                    PermGroup::trivial(degree)
                } else {
                    PermGroup::from_cycle_strings(degree, &gens)?
                }
            }
            other => return Err(Error::Spec(format!("unknown kind {other:?}"))),
        };
        Ok(ActionSpec::Plain(group))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        Self::from_json(&value)
    }

    /// JSON description in the group-spec format (generators spelled out).
    pub fn to_json(&self) -> Value {
        match self {
            ActionSpec::Plain(g) => group_json(g),
            ActionSpec::DirectSum(factors) => {
                json!({ "direct_sum": factors.iter().map(ActionSpec::to_json).collect::<Vec<_>>() })
            }
            ActionSpec::Tensor(factors) => {
                json!({ "tensor": factors.iter().map(group_json).collect::<Vec<_>>() })
            }
        }
    }
}

fn group_json(g: &PermGroup) -> Value {
    let kind = match g.family() {
        Family::Symmetric => "symmetric",
        Family::Alternating => "alternating",
        Family::Cyclic => "cyclic",
        Family::Dihedral => "dihedral",
        Family::Generic => {
            return json!({
                "kind": "generators",
                "degree": g.degree(),
                "generators": g.generators().iter().map(format_cycles).collect::<Vec<_>>(),
            })
        }
    };
    json!({ "kind": kind, "degree": g.degree() })
}

fn group_or_trivial(degree: usize, gens: Vec<Permutation>) -> PermGroup {
    if gens.is_empty() {
        PermGroup::trivial(degree)
    } else {
        PermGroup::new(degree, gens).expect("lifted generators share the degree")
    }
}

/// Embeds `g` acting on positions `offset+1 ..= offset+g.degree()` of a
/// vector of length `total`.
pub(crate) fn shift(g: &Permutation, offset: usize, total: usize) -> Permutation {
    let mut images: Vec<u32> = (0..total as u32).collect();
    for i in 0..g.degree() {
        images[offset + i] = (offset + g.image0(i)) as u32;
    }
    Permutation::from_images0(images)
}

/// Row-major strides for `dims`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    strides
}

/// Lifts `h ∈ Sym(n_j)` to the flat index set, moving only coordinate `j`.
pub fn lift_tensor(dims: &[usize], j: usize, h: &Permutation) -> Permutation {
    let total: usize = dims.iter().product();
    let stride = strides(dims)[j];
    let images: Vec<u32> = (0..total)
        .map(|flat| {
            let coord = (flat / stride) % dims[j];
            (flat - coord * stride + h.image0(coord) * stride) as u32
        })
        .collect();
    Permutation::from_images0(images)
}

/// Flat 1-indexed position of a 1-indexed multi-index.
pub fn flat_index(dims: &[usize], multi: &[usize]) -> usize {
    let strides = strides(dims);
    1 + multi
        .iter()
        .zip(&strides)
        .map(|(&i, &s)| (i - 1) * s)
        .sum::<usize>()
}

/// Chain for a tensor factor whose base starts at point 1 whenever the
/// factor is nontrivial; a trivial factor gets an empty base.
pub fn factor_chain(h: &PermGroup) -> StabilizerChain {
    if h.is_trivial() {
        build_chain(h)
    } else {
        StabilizerChain::with_base(h, &[1]).expect("point 1 exists")
    }
}

/// Base `((1,...,1), (b_1^(2),1,...,1), ..., (1,...,1,b_r^(k_r)))` of a tensor
/// product action, as 1-indexed flat points.
pub fn tensor_base(factors: &[PermGroup]) -> Vec<usize> {
    let dims: Vec<usize> = factors.iter().map(PermGroup::degree).collect();
    let bases: Vec<Vec<usize>> = factors.iter().map(|h| factor_chain(h).base()).collect();
    if bases.iter().all(Vec::is_empty) {
        return Vec::new();
    }
    let corner = vec![1; dims.len()];
    let mut base = vec![flat_index(&dims, &corner)];
    for (j, factor_base) in bases.iter().enumerate() {
        for &b in factor_base.iter().skip(1) {
            let mut multi = corner.clone();
            multi[j] = b;
            base.push(flat_index(&dims, &multi));
        }
    }
    base
}
