//! Probability-vector primitives, validation, and Dirichlet sampling.
//!
//! Everything downstream works in terms of [`ProbVector`]: a nonnegative
//! vector renormalized at construction so its entries sum to 1.0 in f64.
//! Randomness is addressed by [`RngSeed`], which names a reproducible
//! ChaCha stream as `(master_seed, stream_index)`; independent work units
//! get independent stream indices, so parallel and serial execution see
//! identical draws.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma};
use thiserror::Error;

/// Absolute tolerance on `|sum - 1|` accepted by [`ProbVector::new`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Errors from probability-vector construction and Dirichlet sampling.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SimplexError {
    /// An input entry was negative.
    #[error("entry {index} is negative: {value}")]
    NegativeEntry { index: usize, value: f64 },
    /// Input entries do not sum to 1 within [`SUM_TOLERANCE`].
    #[error("entries sum to {sum}, want 1 within {SUM_TOLERANCE:e}")]
    BadSum { sum: f64 },
    /// Fewer than two entries.
    #[error("probability vector needs at least 2 entries, got {len}")]
    TooShort { len: usize },
    /// Dirichlet concentration must be positive and finite.
    #[error("dirichlet alpha must be positive and finite, got {alpha}")]
    BadAlpha { alpha: f64 },
}

/// A point on the probability simplex: entries nonnegative, length at
/// least 2. Construction renormalizes so the f64 sum lands exactly on 1
/// (never off by more than one ulp in adversarial corners; see
/// [`fix_sum`]). Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    values: Vec<f64>,
}

impl ProbVector {
    /// Validates `raw` and renormalizes it by its exact sum.
    ///
    /// Inputs may be off the simplex by up to [`SUM_TOLERANCE`]; stored
    /// entries always sum to 1.
    pub fn new(raw: &[f64]) -> Result<Self, SimplexError> {
        if raw.len() < 2 {
            return Err(SimplexError::TooShort { len: raw.len() });
        }
        for (index, &value) in raw.iter().enumerate() {
            if value < 0.0 {
                return Err(SimplexError::NegativeEntry { index, value });
            }
        }
        let sum: f64 = raw.iter().sum();
        // negated comparison so a NaN sum also fails
        if !((sum - 1.0).abs() <= SUM_TOLERANCE) {
            return Err(SimplexError::BadSum { sum });
        }
        Ok(Self::renormalized(raw.to_vec()))
    }

    /// Renormalizes nonnegative `values` with a positive finite sum.
    ///
    /// Internal constructor for vectors that satisfy the simplex
    /// constraint by construction (samples, counts, posterior scores).
    pub(crate) fn renormalized(mut values: Vec<f64>) -> Self {
        debug_assert!(values.len() >= 2);
        let sum: f64 = values.iter().sum();
        debug_assert!(sum > 0.0 && sum.is_finite(), "sum {sum} not normalizable");
        for v in &mut values {
            // `+ 0.0` turns a -0.0 quotient into +0.0
            *v = *v / sum + 0.0;
        }
        fix_sum(&mut values);
        Self { values }
    }

    #[allow(clippy::len_without_is_empty)] // never empty: len >= 2 by construction
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.values.iter()
    }

    /// Draws an index distributed according to this vector.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &p) in self.values.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.values.len() - 1
    }
}

impl core::ops::Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.values[index]
    }
}

impl<'a> IntoIterator for &'a ProbVector {
    type Item = &'a f64;
    type IntoIter = core::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.values.iter()
    }
}

/// Nudges `values` so their f64 sum lands exactly on 1.0.
///
/// For two entries the smaller is pinned to `1 - larger`, which is exact
/// (Sterbenz) and makes the pair sum to 1 as real numbers too. Longer
/// vectors fold the residual into the largest entry and then rewrite the
/// last nonzero entry as the exact complement of its prefix sum. In the
/// rare corner where the prefix alone already rounds past 1, or where the
/// complement would zero a positive entry, the sum stays within one ulp
/// of 1 instead; no entry is ever zeroed or made negative.
fn fix_sum(values: &mut [f64]) {
    if values.len() == 2 {
        let (lo, hi) = if values[0] <= values[1] { (0, 1) } else { (1, 0) };
        values[lo] = 1.0 - values[hi];
        return;
    }
    for _ in 0..2 {
        let sum: f64 = values.iter().sum();
        let residual = 1.0 - sum;
        if residual == 0.0 {
            return;
        }
        let mut argmax = 0;
        for (i, &v) in values.iter().enumerate() {
            if v > values[argmax] {
                argmax = i;
            }
        }
        values[argmax] += residual;
    }
    if values.iter().sum::<f64>() == 1.0 {
        return;
    }
    // trailing zeros leave the rounded prefix sum untouched, so fixing the
    // last nonzero entry fixes the whole sum
    let Some(last) = values.iter().rposition(|&v| v > 0.0) else {
        return;
    };
    let prefix: f64 = values[..last].iter().sum();
    if (0.5..=1.0).contains(&prefix) {
        let target = 1.0 - prefix; // exact by Sterbenz
        if target > 0.0 {
            values[last] = target;
        }
    } else if prefix < 0.5 {
        // the complement exceeds 0.5, so one-ulp steps of it move the
        // rounded sum through every representable value near 1
        values[last] = 1.0 - prefix;
        for _ in 0..8 {
            let sum: f64 = values.iter().sum();
            if sum == 1.0 {
                return;
            }
            values[last] = if sum > 1.0 {
                values[last].next_down()
            } else {
                values[last].next_up()
            };
        }
    }
}

/// Names a reproducible random stream.
///
/// The same `(master_seed, stream_index)` always yields the same stream,
/// independent of any other stream, so experiments can assign one stream
/// per work unit and stay deterministic under any execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngSeed {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// The seed `offset` streams past this one (wrapping).
    pub fn offset(self, offset: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            stream_index: self.stream_index.wrapping_add(offset),
        }
    }

    /// Instantiates the stream this seed names.
    pub fn rng(self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Draws one symmetric Dirichlet(alpha) vector of dimension `dim` from the
/// stream named by `seed`.
pub fn sample_dirichlet(alpha: f64, dim: usize, seed: RngSeed) -> Result<ProbVector, SimplexError> {
    let mut rng = seed.rng();
    sample_dirichlet_with(alpha, dim, &mut rng)
}

/// As [`sample_dirichlet`], drawing from a caller-supplied stream.
///
/// Standard construction: `dim` independent Gamma(alpha, 1) draws
/// normalized by their sum.
pub fn sample_dirichlet_with<R: Rng + ?Sized>(
    alpha: f64,
    dim: usize,
    rng: &mut R,
) -> Result<ProbVector, SimplexError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(SimplexError::BadAlpha { alpha });
    }
    if dim < 2 {
        return Err(SimplexError::TooShort { len: dim });
    }
    let gamma = Gamma::new(alpha, 1.0).map_err(|_| SimplexError::BadAlpha { alpha })?;
    // For tiny alpha every draw can underflow to zero; redraw from the same
    // stream (deterministic). The cap only trips for absurd alpha where the
    // draws are non-finite instead.
    for _ in 0..64 {
        let values: Vec<f64> = (0..dim).map(|_| gamma.sample(rng)).collect();
        let sum: f64 = values.iter().sum();
        if sum > 0.0 && sum.is_finite() {
            return Ok(ProbVector::renormalized(values));
        }
    }
    Err(SimplexError::BadAlpha { alpha })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_symmetric_pair() {
        let p = ProbVector::new(&[0.5, 0.5]).unwrap();
        assert_eq!(p.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn accepts_one_hot_corner() {
        let p = ProbVector::new(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_sum() {
        assert_eq!(
            ProbVector::new(&[0.3, 0.3, 0.5]),
            Err(SimplexError::BadSum { sum: 1.1 })
        );
    }

    #[test]
    fn rejects_negative_entry() {
        assert!(matches!(
            ProbVector::new(&[-0.1, 0.6, 0.5]),
            Err(SimplexError::NegativeEntry { index: 0, .. })
        ));
    }

    #[test]
    fn rejects_short_and_nan() {
        assert_eq!(
            ProbVector::new(&[1.0]),
            Err(SimplexError::TooShort { len: 1 })
        );
        assert!(matches!(
            ProbVector::new(&[f64::NAN, 0.5]),
            Err(SimplexError::BadSum { .. })
        ));
    }

    #[test]
    fn renormalizes_to_exact_unit_sum() {
        let p = ProbVector::new(&[0.1 + 1e-10, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(p.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn two_entry_vectors_are_exact_complements() {
        for i in 1..100u32 {
            let x = f64::from(i) / 100.0;
            let p = ProbVector::new(&[x, 1.0 - x]).unwrap();
            assert_eq!(p[0], 1.0 - p[1]);
            assert_eq!(p[0] + p[1], 1.0);
        }
    }

    #[test]
    fn dirichlet_draw_is_valid() {
        let p = sample_dirichlet(1.0, 3, RngSeed::new(7, 0)).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|&v| v > 0.0));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_is_deterministic_per_seed() {
        let a = sample_dirichlet(0.5, 4, RngSeed::new(42, 3)).unwrap();
        let b = sample_dirichlet(0.5, 4, RngSeed::new(42, 3)).unwrap();
        assert_eq!(a, b);
        let c = sample_dirichlet(0.5, 4, RngSeed::new(42, 4)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn dirichlet_rejects_bad_inputs() {
        let seed = RngSeed::new(0, 0);
        assert!(matches!(
            sample_dirichlet(0.0, 3, seed),
            Err(SimplexError::BadAlpha { .. })
        ));
        assert!(matches!(
            sample_dirichlet(-1.0, 3, seed),
            Err(SimplexError::BadAlpha { .. })
        ));
        assert!(matches!(
            sample_dirichlet(1.0, 1, seed),
            Err(SimplexError::TooShort { len: 1 })
        ));
    }

    #[test]
    fn seed_streams_are_independent_of_call_order() {
        let seed = RngSeed::new(9, 0);
        let first = sample_dirichlet_with(1.0, 3, &mut seed.rng()).unwrap();
        let mut rng = seed.rng();
        let again = sample_dirichlet_with(1.0, 3, &mut rng).unwrap();
        let second = sample_dirichlet_with(1.0, 3, &mut rng).unwrap();
        assert_eq!(first, again);
        assert_ne!(first, second);
        // a later stream does not depend on earlier streams having run
        assert_eq!(
            sample_dirichlet(1.0, 3, seed.offset(5)).unwrap(),
            sample_dirichlet(1.0, 3, RngSeed::new(9, 5)).unwrap()
        );
    }

    #[test]
    fn sample_index_tracks_weights() {
        let p = ProbVector::new(&[0.0, 1.0]).unwrap();
        let mut rng = RngSeed::new(1, 0).rng();
        for _ in 0..100 {
            assert_eq!(p.sample_index(&mut rng), 1);
        }
    }
}
