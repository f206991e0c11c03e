//! Naive Bayes with a categorical feature, done right and done wrong.
//!
//! Recoding a K-valued categorical feature as K one-hot bits and treating
//! those bits as independent Bernoullis turns a categorical Naive Bayes
//! classifier into a product-of-Bernoullis (PoB) classifier. The two agree
//! on the likelihood of the observed value but the PoB model multiplies in
//! an extra per-class factor `Q^{-j} = prod_{k != j} (1 - theta_k)` for the
//! bits that are off, which distorts the posterior.
//!
//! This crate implements both classifiers ([`models`]), the closed-form
//! analysis of the distorting factor and of the effective PoB evidence
//! `f_j = theta_j * Q^{-j}` ([`qfactor`]), seeded Dirichlet Monte-Carlo
//! experiments that quantify how often the distortion changes the MAP class
//! ([`experiments`]), and utilities for encoding datasets and detecting
//! one-hot column groups in bit matrices ([`encoding`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); IO, CSV formats, and the
//! command-line interface live in the companion `onehot-nb-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod encoding;
pub mod experiments;
pub mod models;
pub mod qfactor;
pub mod simplex;

pub use encoding::{
    decode_observation, detect_one_hot_groups, generate_dataset, one_hot_decode, one_hot_encode,
    AuditError, BitMatrix, DetectionReport, OneHotGroup,
};
pub use experiments::{
    bound_curves, comparison_records, restricted_slope, run_posterior_comparison, run_scatter,
    sample_classifier, scatter_records, surface_grid, winning_class_analysis, BoundPoint,
    ComparisonRecord, ExperimentConfig, ExperimentError, ScatterRecord, ScatterRun, SummaryStats,
    SurfacePoint, WinningClassRecord,
};
pub use models::{
    fit_mle, map_class, pob_likelihood, q_factor, BitPattern, Layout, ModelError, ModelKind,
    NBParams, Observation,
};
pub use qfactor::{
    extremeness_guaranteed, f_j, lower_bound, q_optimum, ratio_bounds, upper_bound,
    AnalysisError, BoundPair,
};
pub use simplex::{sample_dirichlet, sample_dirichlet_with, ProbVector, RngSeed, SimplexError};
