//! Synthetic data generation, one-hot encode/decode, and detection of
//! one-hot column groups in bit matrices.
//!
//! Detection uses the exact combinatorial criterion: a column set forms a
//! one-hot group when every row has exactly one of its bits set. That is
//! what one-hot encoding produces, so no regression machinery is needed on
//! clean data.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::models::{BitPattern, ModelError, NBParams, Observation};
use crate::simplex::RngSeed;

/// Errors from encoding, decoding, and bit-matrix handling.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AuditError {
    #[error("pattern has {ones} bits set, expected exactly one")]
    NotOneHot { ones: usize },
    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRows {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("bit matrix needs at least one row")]
    EmptyMatrix,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A rectangular 0/1 matrix with at least one row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, AuditError> {
        let Some(first) = rows.first() else {
            return Err(AuditError::EmptyMatrix);
        };
        let n_cols = first.len();
        let mut bits = Vec::with_capacity(rows.len() * n_cols);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n_cols {
                return Err(AuditError::RaggedRows {
                    row,
                    got: r.len(),
                    expected: n_cols,
                });
            }
            bits.extend_from_slice(r);
        }
        Ok(Self {
            n_rows: rows.len(),
            n_cols,
            bits,
        })
    }

    /// Builds a matrix by concatenating each row's feature patterns.
    pub fn from_encoded_rows(rows: &[Vec<BitPattern>]) -> Result<Self, AuditError> {
        let flat: Vec<Vec<bool>> = rows
            .iter()
            .map(|patterns| {
                patterns
                    .iter()
                    .flat_map(|p| p.bits().iter().copied())
                    .collect()
            })
            .collect();
        Self::from_rows(&flat)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn bit(&self, row: usize, col: usize) -> bool {
        assert!(row < self.n_rows && col < self.n_cols);
        self.bits[row * self.n_cols + col]
    }

    fn columns_equal(&self, a: usize, b: usize) -> bool {
        (0..self.n_rows).all(|r| self.bit(r, a) == self.bit(r, b))
    }

    fn column_all_zero(&self, c: usize) -> bool {
        (0..self.n_rows).all(|r| !self.bit(r, c))
    }
}

/// A detected one-hot column group; K is the number of columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneHotGroup {
    pub columns: Vec<usize>,
}

impl OneHotGroup {
    pub fn k(&self) -> usize {
        self.columns.len()
    }
}

/// Detected groups plus a flag marking non-unique partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionReport {
    pub groups: Vec<OneHotGroup>,
    /// True when another partition of the grouped columns also satisfies
    /// the exactly-one-bit criterion: some grouped column has an identical
    /// twin elsewhere in the matrix, or an all-zero column was attached to
    /// one of several groups it could join.
    pub ambiguous: bool,
}

/// Draws `n_rows` labelled observations from `params`: label ~ prior, then
/// each feature value ~ the label's theta row. Deterministic per seed.
pub fn generate_dataset(params: &NBParams, n_rows: usize, seed: RngSeed) -> Vec<(Observation, usize)> {
    let mut rng = seed.rng();
    (0..n_rows)
        .map(|_| {
            let label = params.prior().sample_index(&mut rng);
            let values = (0..params.num_features())
                .map(|f| params.theta(f, label).sample_index(&mut rng))
                .collect();
            (Observation::new(values), label)
        })
        .collect()
}

/// One-hot encodes an observation, one pattern per feature.
pub fn one_hot_encode(
    obs: &Observation,
    values_per_feature: &[usize],
) -> Result<Vec<BitPattern>, AuditError> {
    if obs.len() != values_per_feature.len() {
        return Err(ModelError::FeatureCountMismatch {
            got: obs.len(),
            expected: values_per_feature.len(),
        }
        .into());
    }
    obs.values()
        .iter()
        .zip(values_per_feature)
        .map(|(&j, &k)| BitPattern::one_hot(j, k).map_err(AuditError::from))
        .collect()
}

/// Decodes a one-hot pattern back to its value index.
pub fn one_hot_decode(pattern: &BitPattern) -> Result<usize, AuditError> {
    pattern.hot_index().ok_or(AuditError::NotOneHot {
        ones: pattern.count_ones(),
    })
}

/// Decodes one pattern per feature back into an observation.
pub fn decode_observation(patterns: &[BitPattern]) -> Result<Observation, AuditError> {
    let values = patterns
        .iter()
        .map(one_hot_decode)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Observation::new(values))
}

/// Finds maximal column groups whose row sums are exactly 1 in every row.
///
/// Greedy, left to right: starting from the lowest unused column, add every
/// later unused column that never overlaps the bits collected so far, then
/// keep the set if it has at least two columns and covers every row. Each
/// column lands in at most one group.
pub fn detect_one_hot_groups(matrix: &BitMatrix) -> DetectionReport {
    let n_cols = matrix.n_cols();
    let n_rows = matrix.n_rows();
    let mut used = vec![false; n_cols];
    let mut groups = Vec::new();

    for start in 0..n_cols {
        if used[start] {
            continue;
        }
        let mut members = vec![start];
        let mut coverage: Vec<bool> = (0..n_rows).map(|r| matrix.bit(r, start)).collect();
        for candidate in start + 1..n_cols {
            if used[candidate] {
                continue;
            }
            let clash = (0..n_rows).any(|r| coverage[r] && matrix.bit(r, candidate));
            if !clash {
                for (r, cov) in coverage.iter_mut().enumerate() {
                    *cov = *cov || matrix.bit(r, candidate);
                }
                members.push(candidate);
            }
        }
        if members.len() >= 2 && coverage.iter().all(|&c| c) {
            for &c in &members {
                used[c] = true;
            }
            groups.push(OneHotGroup { columns: members });
        }
    }

    let ambiguous = partition_is_ambiguous(matrix, &groups);
    DetectionReport { groups, ambiguous }
}

/// A grouped column with an identical twin column can swap places with it;
/// an all-zero grouped column fits any group. Either way more than one
/// valid partition exists.
fn partition_is_ambiguous(matrix: &BitMatrix, groups: &[OneHotGroup]) -> bool {
    for group in groups {
        for &c in &group.columns {
            if groups.len() > 1 && matrix.column_all_zero(c) {
                return true;
            }
            for other in 0..matrix.n_cols() {
                if other != c && matrix.columns_equal(c, other) {
                    return true;
                }
            }
        }
    }
    false
}
