//! Closed-form analysis of the PoB distortion factor.
//!
//! For `theta` on the (K-1)-simplex with `theta[j]` held fixed, the factor
//! `Q^{-j} = prod_{k != j} (1 - theta[k])` attains its minimum `theta[j]`
//! at the corners of the constrained simplex (all remaining mass on a
//! single coordinate) and its maximum at the centre, where the remaining
//! mass is spread evenly. The effective PoB evidence
//! `f_j = theta[j] * Q^{-j}` is therefore sandwiched between
//! `lower_bound(t) = t^2` and
//! `upper_bound(t, K) = t * ((K - 2 + t) / (K - 1))^(K-1)`,
//! and ratios of `f_j` across classes are provably more extreme than the
//! corresponding ratios of `theta[j]` whenever [`extremeness_guaranteed`]
//! holds.

#[cfg(not(feature = "std"))]
use num_traits::float::FloatCore as _;
use thiserror::Error;

use crate::models::{self, ModelError};
use crate::simplex::ProbVector;

/// Errors from the bound and ratio operations.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AnalysisError {
    #[error("theta must lie in [0,1], got {value}")]
    OutOfUnitInterval { value: f64 },
    #[error("K must be at least 2, got {k}")]
    BadK { k: usize },
    #[error("theta must be strictly positive for ratio operations")]
    ZeroTheta,
    #[error("value index {index} out of range for {len} values")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Lower and upper bounds on a quantity, `lower <= upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

/// The effective PoB evidence `theta[j] * Q^{-j}(theta)`.
pub fn f_j(theta: &ProbVector, j: usize) -> Result<f64, AnalysisError> {
    let q = models::q_factor(theta, j).map_err(|e| match e {
        ModelError::IndexOutOfRange { index, len } => AnalysisError::IndexOutOfRange { index, len },
        _ => unreachable!("q_factor only fails on index"),
    })?;
    Ok(theta[j] * q)
}

/// `l(t) = t^2`: the value of `f_j` at the corners of the constrained
/// simplex, and its lower bound everywhere.
pub fn lower_bound(theta_j: f64) -> Result<f64, AnalysisError> {
    check_unit(theta_j)?;
    Ok(theta_j * theta_j)
}

/// `u(t) = t * ((K - 2 + t) / (K - 1))^(K-1)`: the value of `f_j` at the
/// centre of the constrained simplex, and its upper bound everywhere.
/// For K = 2 this collapses to `l(t)`.
pub fn upper_bound(theta_j: f64, k: usize) -> Result<f64, AnalysisError> {
    check_unit(theta_j)?;
    check_k(k)?;
    Ok(theta_j * q_optimum_unchecked(theta_j, k))
}

/// Maximum of `Q^{-j}` over the simplex with `theta[j]` fixed:
/// `((K - 2 + t) / (K - 1))^(K-1)`, attained where every other coordinate
/// equals `(1 - t) / (K - 1)`. Strictly exceeds `t` for `t < 1`.
pub fn q_optimum(theta_j: f64, k: usize) -> Result<f64, AnalysisError> {
    check_unit(theta_j)?;
    check_k(k)?;
    Ok(q_optimum_unchecked(theta_j, k))
}

fn q_optimum_unchecked(theta_j: f64, k: usize) -> f64 {
    let base = (k as f64 - 2.0 + theta_j) / (k as f64 - 1.0);
    base.powi((k - 1) as i32)
}

/// Sound bounds on the ratio `f_j(theta_c) / f_j(theta_d)` given only the
/// two observed-value parameters: `lower = l(theta_jc) / u(theta_jd)` and
/// `upper = u(theta_jc) / l(theta_jd)`. Every completion of the off-`j`
/// coordinates realizes a ratio inside the pair.
pub fn ratio_bounds(theta_jc: f64, theta_jd: f64, k: usize) -> Result<BoundPair, AnalysisError> {
    check_unit(theta_jc)?;
    check_unit(theta_jd)?;
    check_k(k)?;
    if theta_jc == 0.0 || theta_jd == 0.0 {
        return Err(AnalysisError::ZeroTheta);
    }
    let lower = lower_bound(theta_jc)? / upper_bound(theta_jd, k)?;
    let upper = upper_bound(theta_jc, k)? / lower_bound(theta_jd)?;
    // l and u coincide as theta -> 1; reorder the ulp-level inversion that
    // rounding can produce there
    Ok(BoundPair {
        lower: lower.min(upper),
        upper: lower.max(upper),
    })
}

/// True iff `theta_jc > ((K - 2 + theta_jd) / (K - 1))^(K-1)`, in which
/// case every realizable ratio `f_j(theta_c) / f_j(theta_d)` exceeds
/// `theta_jc / theta_jd`.
pub fn extremeness_guaranteed(
    theta_jc: f64,
    theta_jd: f64,
    k: usize,
) -> Result<bool, AnalysisError> {
    check_unit(theta_jc)?;
    check_unit(theta_jd)?;
    check_k(k)?;
    if theta_jc == 0.0 || theta_jd == 0.0 {
        return Err(AnalysisError::ZeroTheta);
    }
    Ok(theta_jc > q_optimum_unchecked(theta_jd, k))
}

fn check_unit(value: f64) -> Result<(), AnalysisError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(AnalysisError::OutOfUnitInterval { value })
    }
}

fn check_k(k: usize) -> Result<(), AnalysisError> {
    // the exponent must also fit in i32 for powi
    if k < 2 || k - 1 > i32::MAX as usize {
        return Err(AnalysisError::BadK { k });
    }
    Ok(())
}
