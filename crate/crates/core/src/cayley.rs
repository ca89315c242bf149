//! Cayley tables of the five groups of order 8, and classification of
//! row/column-permuted tables by their canonical form under `S_8 × S_8`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::actions::{lift_tensor, symmetric, ActionSpec};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::project::{ProjectionKind, Projector};
use crate::verify::trial_rng;

pub const ORDER: usize = 8;

/// Accuracy of the SVM baseline on the same task, for comparison.
pub const REFERENCE_ACCURACY: f64 = 0.994;
pub const REFERENCE_ACCURACY_STD: f64 = 0.008;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OrderEight {
    C8,
    C4xC2,
    D4,
    Q8,
    C2Cubed,
}

impl OrderEight {
    pub const ALL: [OrderEight; 5] = [
        OrderEight::C8,
        OrderEight::C4xC2,
        OrderEight::D4,
        OrderEight::Q8,
        OrderEight::C2Cubed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderEight::C8 => "C8",
            OrderEight::C4xC2 => "C4xC2",
            OrderEight::D4 => "D4",
            OrderEight::Q8 => "Q8",
            OrderEight::C2Cubed => "C2^3",
        }
    }

    pub fn table(self) -> CayleyTable {
        match self {
            OrderEight::C8 => {
                CayleyTable::from_elements(&(0..8).collect::<Vec<u8>>(), |a, b| (a + b) % 8)
            }
            OrderEight::C4xC2 => {
                let elements: Vec<(u8, u8)> = (0..8).map(|k| (k % 4, k / 4)).collect();
                CayleyTable::from_elements(&elements, |a, b| ((a.0 + b.0) % 4, (a.1 + b.1) % 2))
            }
            OrderEight::D4 => {
                let r = Permutation::cycle(4, &[1, 2, 3, 4]).expect("valid");
                let s = Permutation::transposition(4, 2, 4).expect("valid");
                let mut elements = Vec::new();
                let mut rotation = Permutation::identity(4);
                for _ in 0..4 {
                    elements.push(rotation.clone());
                    elements.push(rotation.compose_unchecked(&s));
                    rotation = r.compose_unchecked(&rotation);
                }
                CayleyTable::from_elements(&elements, |a, b| a.compose_unchecked(b))
            }
            OrderEight::Q8 => {
                let units = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
                let elements: Vec<[i8; 4]> =
                    units.iter().flat_map(|u| [*u, u.map(|c: i8| -c)]).collect();
                CayleyTable::from_elements(&elements, |a, b| hamilton(*a, *b))
            }
            OrderEight::C2Cubed => {
                CayleyTable::from_elements(&(0..8).collect::<Vec<u8>>(), |a, b| a ^ b)
            }
        }
    }
}

fn hamilton(p: [i8; 4], q: [i8; 4]) -> [i8; 4] {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// An 8×8 table with entries in `1..=8`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    entries: Vec<u32>,
}

impl CayleyTable {
    /// `table[i][j]` is the 1-based index of `op(e_i, e_j)` in `elements`.
    pub fn from_elements<T: PartialEq, F: Fn(&T, &T) -> T>(elements: &[T], op: F) -> Self {
        let n = elements.len();
        let mut entries = Vec::with_capacity(n * n);
        for a in elements {
            for b in elements {
                let c = op(a, b);
                let k = elements
                    .iter()
                    .position(|e| *e == c)
                    .expect("operation is closed");
                entries.push(k as u32 + 1);
            }
        }
        CayleyTable { entries }
    }

    pub fn from_entries(entries: Vec<u32>) -> Result<Self> {
        if entries.len() != ORDER * ORDER {
            return Err(Error::LengthMismatch {
                expected: ORDER * ORDER,
                actual: entries.len(),
            });
        }
        Ok(CayleyTable { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * ORDER + col]
    }

    pub fn is_latin_square(&self) -> bool {
        let full = (1u32 << ORDER) - 1;
        (0..ORDER).all(|i| {
            let row = (0..ORDER).fold(0u32, |m, j| m | 1 << (self.get(i, j) - 1));
            let col = (0..ORDER).fold(0u32, |m, j| m | 1 << (self.get(j, i) - 1));
            row == full && col == full
        })
    }

    /// Associativity and a two-sided identity, reading entries as indices.
    pub fn is_group(&self) -> bool {
        let op = |a: usize, b: usize| self.get(a, b) as usize - 1;
        let associative = (0..ORDER)
            .all(|a| (0..ORDER).all(|b| (0..ORDER).all(|c| op(op(a, b), c) == op(a, op(b, c)))));
        let identity = (0..ORDER).any(|e| (0..ORDER).all(|a| op(e, a) == a && op(a, e) == a));
        associative && identity
    }

    pub fn as_values(&self) -> Vec<f64> {
        self.entries.iter().map(|&v| v as f64).collect()
    }

    /// Sorts the columns by the first row, then the rows by the first
    /// column.
    pub fn two_step_sort(&self) -> CayleyTable {
        let mut cols: Vec<usize> = (0..ORDER).collect();
        cols.sort_by_key(|&j| self.get(0, j));
        let mut rows: Vec<usize> = (0..ORDER).collect();
        rows.sort_by_key(|&i| self.get(i, cols[0]));
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j)))
            .collect();
        CayleyTable { entries }
    }

    /// Applies a row permutation and a column permutation.
    pub fn permuted(&self, rows: &Permutation, cols: &Permutation) -> Result<CayleyTable> {
        let dims = [ORDER, ORDER];
        let g = lift_tensor(&dims, 0, rows).compose(&lift_tensor(&dims, 1, cols))?;
        Ok(CayleyTable {
            entries: g.apply_to_vector(&self.entries)?,
        })
    }
}

/// Canonicalises tables under independent row and column permutations.
pub struct Canonicalizer {
    projector: Projector,
}

impl Default for Canonicalizer {
    fn default() -> Self {
        Self::new()
    }
}

impl Canonicalizer {
    pub fn new() -> Self {
        let s8 = symmetric(ORDER).expect("degree is positive");
        Canonicalizer {
            projector: Projector::new(ActionSpec::Tensor(vec![s8.clone(), s8])),
        }
    }

    pub fn canonicalize(&self, table: &CayleyTable) -> CayleyTable {
        let result = self
            .projector
            .project(&table.as_values(), ProjectionKind::Ascending)
            .expect("shape is fixed");
        CayleyTable {
            entries: result.canonical.iter().map(|&v| v as u32).collect(),
        }
    }
}

/// Looks up the canonical form of a table among the five reference classes.
pub struct Classifier {
    canonicalizer: Canonicalizer,
    lookup: HashMap<CayleyTable, OrderEight>,
}

impl Default for Classifier {
    fn default() -> Self {
        Self::new()
    }
}

impl Classifier {
    pub fn new() -> Self {
        let canonicalizer = Canonicalizer::new();
        let lookup = OrderEight::ALL
            .iter()
            .map(|&g| (canonicalizer.canonicalize(&g.table()), g))
            .collect();
        Classifier {
            canonicalizer,
            lookup,
        }
    }

    /// Number of distinct canonical references; 5 when the classes separate.
    pub fn distinct_classes(&self) -> usize {
        self.lookup.len()
    }

    pub fn classify(&self, table: &CayleyTable) -> Option<OrderEight> {
        self.lookup
            .get(&self.canonicalizer.canonicalize(table))
            .copied()
    }

    pub fn canonicalizer(&self) -> &Canonicalizer {
        &self.canonicalizer
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassResult {
    pub class: &'static str,
    pub samples: usize,
    pub correct: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CayleyReport {
    pub per_class: usize,
    pub seed: u64,
    pub samples: usize,
    pub correct: usize,
    pub accuracy: f64,
    /// Samples where the generic projection equals the two-step sort.
    pub two_step_matches: usize,
    pub distinct_classes: usize,
    pub tables_valid: bool,
    pub reference_accuracy: f64,
    pub reference_accuracy_std: f64,
    pub classes: Vec<ClassResult>,
}

impl CayleyReport {
    pub fn passed(&self) -> bool {
        self.tables_valid
            && self.distinct_classes == OrderEight::ALL.len()
            && self.correct == self.samples
            && self.two_step_matches == self.samples
    }
}

fn random_permutation<R: rand::Rng>(rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (1..=ORDER).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).expect("shuffled identity")
}

/// Draws `per_class` tables per group, each with an independent random row
/// permutation and column permutation, and classifies them by exact lookup.
pub fn cayley_demo(per_class: usize, seed: u64) -> Result<CayleyReport> {
    if per_class == 0 {
        return Err(Error::Precondition(
            "per-class count must be at least 1".into(),
        ));
    }
    let classifier = Classifier::new();
    let tables_valid = OrderEight::ALL.iter().all(|g| {
        let t = g.table();
        t.is_latin_square() && t.is_group()
    });
    let mut classes = Vec::new();
    let mut two_step_matches = 0;
    for (c, &group) in OrderEight::ALL.iter().enumerate() {
        let table = group.table();
        let mut correct = 0;
        for k in 0..per_class {
            let mut rng = trial_rng(seed, c * per_class + k);
            let rows = random_permutation(&mut rng);
            let cols = random_permutation(&mut rng);
            let sample = table.permuted(&rows, &cols)?;
            let canonical = classifier.canonicalizer().canonicalize(&sample);
            if canonical == sample.two_step_sort() {
                two_step_matches += 1;
            }
            if classifier.lookup.get(&canonical) == Some(&group) {
                correct += 1;
            }
        }
        classes.push(ClassResult {
            class: group.name(),
            samples: per_class,
            correct,
        });
    }
    let samples = per_class * OrderEight::ALL.len();
    let correct = classes.iter().map(|c| c.correct).sum();
    Ok(CayleyReport {
        per_class,
        seed,
        samples,
        correct,
        accuracy: correct as f64 / samples as f64,
        two_step_matches,
        distinct_classes: classifier.distinct_classes(),
        tables_valid,
        reference_accuracy: REFERENCE_ACCURACY,
        reference_accuracy_std: REFERENCE_ACCURACY_STD,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_groups() {
        for g in OrderEight::ALL {
            let t = g.table();
            assert!(t.is_latin_square(), "{}", g.name());
            assert!(t.is_group(), "{}", g.name());
            // the first element is the identity in every construction
            assert_eq!(&t.entries()[..8], &[1, 2, 3, 4, 5, 6, 7, 8]);
        }
    }

    #[test]
    fn element_orders_distinguish_classes() {
        let order_profile = |t: &CayleyTable| {
            let mut counts = [0usize; 9];
            for a in 0..ORDER {
                let (mut x, mut k) = (a, 1);
                while x != 0 {
                    x = t.get(x, a) as usize - 1;
                    k += 1;
                }
                counts[k] += 1;
            }
            counts
        };
        // elements of order 1, 2, 4, 8
        let expect = [
            (OrderEight::C8, [1, 1, 2, 4]),
            (OrderEight::C4xC2, [1, 3, 4, 0]),
            (OrderEight::D4, [1, 5, 2, 0]),
            (OrderEight::Q8, [1, 1, 6, 0]),
            (OrderEight::C2Cubed, [1, 7, 0, 0]),
        ];
        for (g, counts) in expect {
            let p = order_profile(&g.table());
            assert_eq!([p[1], p[2], p[4], p[8]], counts, "{}", g.name());
        }
    }

    #[test]
    fn unpermuted_tables_classify() {
        let classifier = Classifier::new();
        assert_eq!(classifier.distinct_classes(), 5);
        for g in OrderEight::ALL {
            assert_eq!(classifier.classify(&g.table()), Some(g));
        }
    }

    #[test]
    fn two_step_sort_fixes_sorted_table() {
        let t = OrderEight::D4.table();
        assert_eq!(t.two_step_sort(), t);
    }

    #[test]
    fn small_demo_is_exact() {
        let report = cayley_demo(20, 5).unwrap();
        assert_eq!(report.samples, 100);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.accuracy, 1.0);
    }

    #[test]
    fn zero_per_class_is_rejected() {
        assert!(cayley_demo(0, 1).is_err());
    }
}
