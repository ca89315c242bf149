//! Permutations of `{1, ..., n}`.
//!
//! Every public interface is 1-indexed. Internally images are stored
//! 0-indexed as `u32`.
//!
//! Conventions used throughout the crate:
//!
//! * `p.compose(&q)` is "p after q": `r(i) = p(q(i))`.
//! * Permutations act on vectors on the left by `(s·x)_i = x_{s⁻¹(i)}`,
//!   i.e. the entry at position `i` moves to position `s(i)`.
//! * Permutations act on points on the right by `i·s = s⁻¹(i)`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from a 1-indexed image table.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::NotABijection(n));
            }
            out.push((v - 1) as u32);
        }
        Ok(Permutation {
            images: out.into_boxed_slice(),
        })
    }

    /// 0-indexed constructor; the caller guarantees a bijection.
    pub(crate) fn from_images0(images: Vec<u32>) -> Self {
        debug_assert!(is_bijection0(&images));
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// The cycle `(p_1 p_2 ... p_m)` on `degree` points (1-indexed).
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Self> {
        Self::from_cycles(degree, &[points.to_vec()])
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self> {
        Self::cycle(degree, &[a, b])
    }

    /// Builds a permutation from disjoint 1-indexed cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if std::mem::replace(&mut seen[p - 1], true) {
                    return Err(Error::RepeatedPoint(p));
                }
            }
            for (k, &p) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation::from_images0(images))
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `s(i)` for a 1-indexed point.
    pub fn image(&self, i: usize) -> Result<usize> {
        self.check_point(i)?;
        Ok(self.images[i - 1] as usize + 1)
    }

    /// 1-indexed image table.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    #[inline]
    pub(crate) fn image0(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| i == v as usize)
    }

    /// `r = p ∘ q`, so `r(i) = p(q(i))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        Ok(self.compose_unchecked(q))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, q: &Permutation) -> Permutation {
        Permutation {
            images: q.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `g⁻¹ ∘ self ∘ g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Result<Permutation> {
        g.inverse().compose(&self.compose(g)?)
    }

    /// Left action on vectors: `y_i = x_{s⁻¹(i)}`.
    pub fn apply_to_vector<T: Clone>(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.degree() {
            return Err(Error::LengthMismatch {
                expected: self.degree(),
                actual: x.len(),
            });
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let mut y: Vec<Option<T>> = vec![None; x.len()];
        for (i, v) in x.iter().enumerate() {
            y[self.images[i] as usize] = Some(v.clone());
        }
        y.into_iter().map(|v| v.expect("bijection")).collect()
    }

    /// Left action specialised to `Copy` data, writing into `out`.
    #[inline]
    pub(crate) fn apply_into<T: Copy>(&self, x: &[T], out: &mut [T]) {
        for (i, &v) in x.iter().enumerate() {
            out[self.images[i] as usize] = v;
        }
    }

    /// Right action on points: `i·s = s⁻¹(i)`, 1-indexed.
    pub fn act_on_point(&self, i: usize) -> Result<usize> {
        self.check_point(i)?;
        Ok(self.preimage0(i - 1) + 1)
    }

    pub(crate) fn preimage0(&self, i: usize) -> usize {
        self.images
            .iter()
            .position(|&v| v as usize == i)
            .expect("bijection")
    }

    /// The rank vector `(s⁻¹(1), ..., s⁻¹(n))`. Satisfies `ρ(st) = s·ρ(t)`.
    pub fn rho(&self) -> Vec<u32> {
        self.inverse().images.iter().map(|&v| v + 1).collect()
    }

    /// Inverse of [`Permutation::rho`].
    pub fn from_rho(ranks: &[u32]) -> Result<Permutation> {
        let images: Vec<usize> = ranks.iter().map(|&r| r as usize).collect();
        Ok(Permutation::from_images(&images)?.inverse())
    }

    /// Smallest moved point, 1-indexed.
    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.smallest_moved_point0().map(|p| p + 1)
    }

    pub(crate) fn smallest_moved_point0(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &v)| i != v as usize)
            .map(|(i, _)| i)
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i8 {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut transpositions = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Disjoint cycles of length ≥ 2, 1-indexed, each starting at its
    /// smallest element, sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    fn check_point(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.degree() {
            Err(Error::PointOutOfRange {
                point: i,
                degree: self.degree(),
            })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn is_bijection0(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    images
        .iter()
        .all(|&v| (v as usize) < images.len() && !std::mem::replace(&mut seen[v as usize], true))
}

/// Parses disjoint cycles such as `"(1 2)(3 4)"`. `""` and `"()"` give the
/// identity. Points may be separated by whitespace or commas.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    let bytes = text.as_bytes();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'(' => {
                if current.is_some() {
                    return Err(Error::MalformedCycles {
                        offset: i,
                        reason: "nested '('",
                    });
                }
                current = Some(Vec::new());
                i += 1;
            }
            b')' => match current.take() {
                Some(cycle) => {
                    cycles.push(cycle);
                    i += 1;
                }
                None => {
                    return Err(Error::MalformedCycles {
                        offset: i,
                        reason: "unmatched ')'",
                    })
                }
            },
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let Some(cycle) = current.as_mut() else {
                    return Err(Error::MalformedCycles {
                        offset: start,
                        reason: "point outside parentheses",
                    });
                };
                let point: usize = text[start..i].parse().map_err(|_| Error::PointOutOfRange {
                    point: usize::MAX,
                    degree,
                })?;
                cycle.push(point);
            }
            b',' if current.is_some() => i += 1,
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                return Err(Error::MalformedCycles {
                    offset: i,
                    reason: "unexpected character",
                })
            }
        }
    }
    if current.is_some() {
        return Err(Error::MalformedCycles {
            offset: bytes.len(),
            reason: "unclosed '('",
        });
    }
    Permutation::from_cycles(degree, &cycles)
}

/// Cycle notation with fixed points omitted; the identity prints as `()`.
pub fn format_cycles(p: &Permutation) -> String {
    p.to_string()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Panics on degree mismatch; use [`Permutation::compose`] to get an error.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
            .expect("degree mismatch in permutation product")
    }
}

#[derive(Serialize, Deserialize)]
struct PermutationRepr {
    degree: usize,
    images: Vec<usize>,
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermutationRepr {
            degree: self.degree(),
            images: self.images(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PermutationRepr::deserialize(d)?;
        if repr.images.len() != repr.degree {
            return Err(serde::de::Error::custom(
                "images length differs from degree",
            ));
        }
        Permutation::from_images(&repr.images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Permutation {
        parse_cycles(text, n).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("(1 2)(3 4)", 4).images(), vec![2, 1, 4, 3]);
        assert_eq!(p("", 3).images(), vec![1, 2, 3]);
        assert_eq!(p("()", 3).images(), vec![1, 2, 3]);
        assert_eq!(p("(1 2 3 4)", 4).images(), vec![2, 3, 4, 1]);
        assert_eq!(p("  ( 1,2 ) (3)  ", 3).images(), vec![2, 1, 3]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_cycles("(1 5)", 4),
            Err(Error::PointOutOfRange { point: 5, .. })
        ));
        assert!(matches!(
            parse_cycles("(0 1)", 4),
            Err(Error::PointOutOfRange { point: 0, .. })
        ));
        assert_eq!(parse_cycles("(1 2)(2 3)", 4), Err(Error::RepeatedPoint(2)));
        assert_eq!(parse_cycles("(1 2 1)", 4), Err(Error::RepeatedPoint(1)));
        assert!(matches!(
            parse_cycles("(1 2", 4),
            Err(Error::MalformedCycles { .. })
        ));
        assert!(matches!(
            parse_cycles("1 2)", 4),
            Err(Error::MalformedCycles { .. })
        ));
        assert!(matches!(
            parse_cycles("((1 2))", 4),
            Err(Error::MalformedCycles { .. })
        ));
        assert!(matches!(
            parse_cycles("(1 x)", 4),
            Err(Error::MalformedCycles { .. })
        ));
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(p("(3 4)(2 1)", 4).to_string(), "(1 2)(3 4)");
        assert_eq!(p("(4 1 3)", 5).to_string(), "(1 3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn compose_examples() {
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        assert_eq!(a.compose(&b).unwrap().images(), vec![2, 3, 1]);
        assert_eq!(a.compose(&Permutation::identity(3)).unwrap(), a);
        let c = p("(1 2 3)", 3);
        assert!(c.compose(&c.inverse()).unwrap().is_identity());
        assert_eq!(
            a.compose(&Permutation::identity(4)),
            Err(Error::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn inverse_examples() {
        let s = Permutation::from_images(&[2, 3, 1]).unwrap();
        assert_eq!(s.inverse().images(), vec![3, 1, 2]);
        assert!(Permutation::identity(5).inverse().is_identity());
        let t = p("(2 5)", 6);
        assert_eq!(t.inverse(), t);
    }

    #[test]
    fn vector_action() {
        let s = p("(1 2 3)", 3);
        assert_eq!(
            s.apply_to_vector(&['a', 'b', 'c']).unwrap(),
            vec!['c', 'a', 'b']
        );
        assert_eq!(
            Permutation::identity(3)
                .apply_to_vector(&[1, 2, 3])
                .unwrap(),
            vec![1, 2, 3]
        );
        assert_eq!(p("(1 2)", 2).apply_to_vector(&[7, 9]).unwrap(), vec![9, 7]);
        assert!(s.apply_to_vector(&[1, 2]).is_err());
    }

    #[test]
    fn point_action() {
        assert_eq!(p("(1 2)", 2).act_on_point(1).unwrap(), 2);
        assert_eq!(Permutation::identity(3).act_on_point(3).unwrap(), 3);
        assert_eq!(p("(1 2 3)", 3).act_on_point(1).unwrap(), 3);
        assert!(p("(1 2 3)", 3).act_on_point(4).is_err());
        assert!(p("(1 2 3)", 3).act_on_point(0).is_err());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(Permutation::identity(4).rho(), vec![1, 2, 3, 4]);
        assert_eq!(p("(1 2)", 2).rho(), vec![2, 1]);
        assert_eq!(p("(1 2 3)", 3).rho(), vec![3, 1, 2]);
        let s = p("(1 4 2)", 4);
        assert_eq!(Permutation::from_rho(&s.rho()).unwrap(), s);
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 1, 2]).is_err());
        assert!(Permutation::from_images(&[1, 4, 2]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
    }

    #[test]
    fn sign_parity() {
        assert_eq!(p("(1 2)", 3).sign(), -1);
        assert_eq!(p("(1 2 3)", 3).sign(), 1);
        assert_eq!(p("(1 2)(3 4)", 4).sign(), 1);
    }

    #[test]
    fn json_round_trip() {
        let s = p("(1 3 2)", 4);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"degree":4,"images":[3,1,2,4]}"#);
        let back: Permutation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Permutation>(r#"{"degree":3,"images":[1,2]}"#).is_err());
    }
}
