//! Dirichlet Monte-Carlo experiments comparing the two classifiers.
//!
//! The protocol: sample `n` single-feature classifiers with `C` classes
//! and `K` values, prior ~ Dir(alpha_pi * 1_C) and each per-class theta
//! row ~ Dir(alpha_theta * 1_K). For every sampled classifier and every
//! observable value, record how the PoB posterior compares to the
//! categorical one ([`run_posterior_comparison`]) and how the log evidence
//! ratio `log(f_j(theta_c) / f_j(theta_d))` compares to
//! `log(theta_jc / theta_jd)` across class pairs ([`run_scatter`]).
//!
//! Classifier `i` always draws from stream `master_seed.offset(i)`, so
//! per-classifier work is independent and a harness may evaluate
//! classifiers in any order, or in parallel, with identical results.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

use crate::models::{self, ModelError, NBParams};
use crate::qfactor::{self, AnalysisError};
use crate::simplex::{sample_dirichlet_with, ProbVector, RngSeed, SimplexError};

/// Observed-value parameters below this threshold are skipped (and
/// counted) by [`run_scatter`] so stored log ratios stay finite.
pub const SCATTER_THETA_MIN: f64 = 1e-300;

/// Errors from experiment configuration and execution.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ExperimentError {
    #[error("classes must be at least 2, got {0}")]
    BadClassCount(usize),
    #[error("values must be at least 2, got {0}")]
    BadValueCount(usize),
    #[error("samples must be at least 1, got {0}")]
    BadSampleCount(usize),
    #[error("concentration must be positive and finite, got {0}")]
    BadConcentration(f64),
    #[error("step must lie in (0, 0.5], got {0}")]
    BadStep(f64),
    #[error("winning-class analysis needs exactly 2 classes, got {0}")]
    NotTwoClasses(usize),
    #[error("prior ratio undefined: the winning class has zero prior")]
    UndefinedRho,
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Configuration of one experiment cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    /// Number of classes C.
    pub classes: usize,
    /// Number of feature values K.
    pub values: usize,
    /// Concentration for each per-class theta row.
    pub alpha_theta: f64,
    /// Concentration for the class prior.
    pub alpha_pi: f64,
    /// Number of classifiers to sample.
    pub samples: usize,
    /// Base stream; classifier `i` uses `master_seed.offset(i)`.
    pub master_seed: RngSeed,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.classes < 2 {
            return Err(ExperimentError::BadClassCount(self.classes));
        }
        if self.values < 2 {
            return Err(ExperimentError::BadValueCount(self.values));
        }
        if self.samples < 1 {
            return Err(ExperimentError::BadSampleCount(self.samples));
        }
        for alpha in [self.alpha_theta, self.alpha_pi] {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(ExperimentError::BadConcentration(alpha));
            }
        }
        Ok(())
    }
}

/// One scatter point: the log evidence ratio of a class pair at one
/// observed value, under both parameterizations. Mirrored points (c and d
/// swapped) negate both coordinates exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRecord {
    pub classifier_index: usize,
    pub value_index: usize,
    pub class_c: usize,
    pub class_d: usize,
    pub log_theta_ratio: f64,
    pub log_f_ratio: f64,
}

/// All scatter records of a run plus the number of (ordered) pairs skipped
/// under [`SCATTER_THETA_MIN`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterRun {
    pub records: Vec<ScatterRecord>,
    pub skipped: usize,
}

/// Posterior comparison for one (classifier, observed value) case.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRecord {
    pub classifier_index: usize,
    pub value_index: usize,
    pub categorical: ProbVector,
    pub pob: ProbVector,
    pub map_categorical: usize,
    pub map_pob: usize,
    pub max_categorical: f64,
    pub max_pob: f64,
}

/// Aggregate percentages over a comparison run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub n_cases: usize,
    /// Percent of cases where the PoB maximum posterior strictly exceeds
    /// the categorical one.
    pub pct_pob_max_higher: f64,
    /// Percent of cases where the two MAP classes differ.
    pub pct_map_disagree: f64,
}

impl SummaryStats {
    pub fn from_records(records: &[ComparisonRecord]) -> Self {
        let n_cases = records.len();
        if n_cases == 0 {
            return Self {
                n_cases,
                pct_pob_max_higher: 0.0,
                pct_map_disagree: 0.0,
            };
        }
        let higher = records
            .iter()
            .filter(|r| r.max_pob > r.max_categorical)
            .count();
        let disagree = records
            .iter()
            .filter(|r| r.map_categorical != r.map_pob)
            .count();
        Self {
            n_cases,
            pct_pob_max_higher: 100.0 * higher as f64 / n_cases as f64,
            pct_map_disagree: 100.0 * disagree as f64 / n_cases as f64,
        }
    }
}

/// Winner bookkeeping for a two-class classifier at one observed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinningClassRecord {
    /// `pi_d / pi_c` where `c` is the categorical winner.
    pub rho: f64,
    pub log_rho: f64,
    pub categorical_winner: usize,
    pub pob_winner: usize,
    /// True iff the PoB model flips the MAP class.
    pub flipped: bool,
}

/// Samples classifier `stream_index` of the configured cell: prior
/// ~ Dir(alpha_pi), each of the C theta rows ~ Dir(alpha_theta), all from
/// the stream `master_seed.offset(stream_index)`.
pub fn sample_classifier(
    config: &ExperimentConfig,
    stream_index: u64,
) -> Result<NBParams, ExperimentError> {
    config.validate()?;
    let mut rng = config.master_seed.offset(stream_index).rng();
    let prior = sample_dirichlet_with(config.alpha_pi, config.classes, &mut rng)?;
    let rows = (0..config.classes)
        .map(|_| sample_dirichlet_with(config.alpha_theta, config.values, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NBParams::new(prior, alloc::vec![rows])?)
}

/// Scatter records of a single sampled classifier: for every value index
/// and every ordered class pair, both log ratios, in
/// (value, class_c, class_d) order. Returns the records and the skip
/// count.
pub fn scatter_records(
    params: &NBParams,
    classifier_index: usize,
) -> Result<(Vec<ScatterRecord>, usize), ExperimentError> {
    let table = params.table(0);
    let classes = params.num_classes();
    let values = params.num_values(0);
    let mut records = Vec::with_capacity(values * classes * (classes - 1));
    let mut skipped = 0;
    for j in 0..values {
        // log theta and log f per class, computed once so mirrored points
        // negate exactly
        let mut log_theta = Vec::with_capacity(classes);
        let mut log_f = Vec::with_capacity(classes);
        for row in table {
            log_theta.push(row[j].ln());
            log_f.push(qfactor::f_j(row, j)?.ln());
        }
        for c in 0..classes {
            for d in 0..classes {
                if c == d {
                    continue;
                }
                if table[c][j] < SCATTER_THETA_MIN || table[d][j] < SCATTER_THETA_MIN {
                    skipped += 1;
                    continue;
                }
                records.push(ScatterRecord {
                    classifier_index,
                    value_index: j,
                    class_c: c,
                    class_d: d,
                    log_theta_ratio: log_theta[c] - log_theta[d],
                    log_f_ratio: log_f[c] - log_f[d],
                });
            }
        }
    }
    Ok((records, skipped))
}

/// Runs the scatter experiment over all configured classifiers, serially.
pub fn run_scatter(config: &ExperimentConfig) -> Result<ScatterRun, ExperimentError> {
    config.validate()?;
    let mut records = Vec::new();
    let mut skipped = 0;
    for i in 0..config.samples {
        let params = sample_classifier(config, i as u64)?;
        let (mut recs, skip) = scatter_records(&params, i)?;
        records.append(&mut recs);
        skipped += skip;
    }
    Ok(ScatterRun { records, skipped })
}

/// Comparison records of a single sampled classifier, one per value index.
pub fn comparison_records(
    params: &NBParams,
    classifier_index: usize,
) -> Result<Vec<ComparisonRecord>, ExperimentError> {
    let values = params.num_values(0);
    let mut records = Vec::with_capacity(values);
    for j in 0..values {
        let categorical = params.categorical_posterior(j)?;
        let pob = params.pob_posterior(j)?;
        let map_categorical = models::map_class(&categorical);
        let map_pob = models::map_class(&pob);
        records.push(ComparisonRecord {
            classifier_index,
            value_index: j,
            max_categorical: categorical[map_categorical],
            max_pob: pob[map_pob],
            categorical,
            pob,
            map_categorical,
            map_pob,
        });
    }
    Ok(records)
}

/// Runs the posterior-comparison experiment over all configured
/// classifiers, serially: `samples * values` records plus their summary.
pub fn run_posterior_comparison(
    config: &ExperimentConfig,
) -> Result<(Vec<ComparisonRecord>, SummaryStats), ExperimentError> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.samples * config.values);
    for i in 0..config.samples {
        let params = sample_classifier(config, i as u64)?;
        records.append(&mut comparison_records(&params, i)?);
    }
    let stats = SummaryStats::from_records(&records);
    Ok((records, stats))
}

/// For a two-class classifier at observed value `j`: the categorical
/// winner `c`, the PoB winner, and the prior ratio `rho = pi_d / pi_c`.
pub fn winning_class_analysis(
    params: &NBParams,
    j: usize,
) -> Result<WinningClassRecord, ExperimentError> {
    if params.num_classes() != 2 {
        return Err(ExperimentError::NotTwoClasses(params.num_classes()));
    }
    let categorical = params.categorical_posterior(j)?;
    let pob = params.pob_posterior(j)?;
    let categorical_winner = models::map_class(&categorical);
    let pob_winner = models::map_class(&pob);
    let other = 1 - categorical_winner;
    let pi_c = params.prior()[categorical_winner];
    if pi_c == 0.0 {
        return Err(ExperimentError::UndefinedRho);
    }
    let rho = params.prior()[other] / pi_c;
    Ok(WinningClassRecord {
        rho,
        log_rho: rho.ln(),
        categorical_winner,
        pob_winner,
        flipped: categorical_winner != pob_winner,
    })
}

/// One point of the `Q^{-4}` surface over the 3-coordinate simplex slice
/// `theta_4 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub q: f64,
}

/// Barycentric grid of `Q^{-4}(theta_1, theta_2, theta_3)` on the simplex
/// slice `theta_4 = 0`, at resolution `step` (interpreted as `1/step`
/// subdivisions). The exact centre point is always included even when the
/// subdivision count is not a multiple of 3; rows are sorted by
/// (theta1, theta2).
pub fn surface_grid(step: f64) -> Result<Vec<SurfacePoint>, ExperimentError> {
    check_step(step)?;
    let divisions = (1.0 / step).round() as usize;
    let mut points = Vec::with_capacity((divisions + 1) * (divisions + 2) / 2 + 1);
    for a in 0..=divisions {
        for b in 0..=(divisions - a) {
            let theta1 = a as f64 / divisions as f64;
            let theta2 = b as f64 / divisions as f64;
            let theta3 = (divisions - a - b) as f64 / divisions as f64;
            points.push(surface_point(theta1, theta2, theta3));
        }
    }
    if divisions % 3 != 0 {
        points.push(surface_point(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
    }
    points.sort_by(|p, q| {
        p.theta1
            .total_cmp(&q.theta1)
            .then(p.theta2.total_cmp(&q.theta2))
    });
    Ok(points)
}

fn surface_point(theta1: f64, theta2: f64, theta3: f64) -> SurfacePoint {
    SurfacePoint {
        theta1,
        theta2,
        theta3,
        q: (1.0 - theta1) * (1.0 - theta2) * (1.0 - theta3),
    }
}

/// One point of the bound curves `l` and `u` against `theta_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub theta_j: f64,
    pub lower: f64,
    pub upper: f64,
}

/// The bound curves sampled on `theta_j = 0, step, ..., 1` (inclusive).
pub fn bound_curves(k: usize, step: f64) -> Result<Vec<BoundPoint>, ExperimentError> {
    check_step(step)?;
    let divisions = (1.0 / step).round() as usize;
    let mut points = Vec::with_capacity(divisions + 1);
    for i in 0..=divisions {
        let theta_j = i as f64 / divisions as f64;
        points.push(BoundPoint {
            theta_j,
            lower: qfactor::lower_bound(theta_j)?,
            upper: qfactor::upper_bound(theta_j, k)?,
        });
    }
    Ok(points)
}

fn check_step(step: f64) -> Result<(), ExperimentError> {
    if step > 0.0 && step <= 0.5 {
        Ok(())
    } else {
        Err(ExperimentError::BadStep(step))
    }
}

/// Least-squares slope of `log_f_ratio` against `log_theta_ratio over the
/// records with `|log_theta_ratio| < max_abs`. The mirrored point pairs
/// centre both coordinates at zero, so the fit goes through the origin.
/// `None` if no record qualifies.
pub fn restricted_slope(records: &[ScatterRecord], max_abs: f64) -> Option<f64> {
    let mut sum_xy = 0.0;
    let mut sum_xx = 0.0;
    for r in records {
        if r.log_theta_ratio.abs() < max_abs {
            sum_xy += r.log_theta_ratio * r.log_f_ratio;
            sum_xx += r.log_theta_ratio * r.log_theta_ratio;
        }
    }
    (sum_xx > 0.0).then(|| sum_xy / sum_xx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::map_class;
    use alloc::vec;

    fn config(
        classes: usize,
        values: usize,
        alpha: f64,
        samples: usize,
        seed: u64,
    ) -> ExperimentConfig {
        ExperimentConfig {
            classes,
            values,
            alpha_theta: alpha,
            alpha_pi: alpha,
            samples,
            master_seed: RngSeed::new(seed, 0),
        }
    }

    #[test]
    fn config_validation() {
        assert!(config(4, 3, 1.0, 100, 0).validate().is_ok());
        assert_eq!(
            config(1, 3, 1.0, 100, 0).validate(),
            Err(ExperimentError::BadClassCount(1))
        );
        assert_eq!(
            config(4, 1, 1.0, 100, 0).validate(),
            Err(ExperimentError::BadValueCount(1))
        );
        assert_eq!(
            config(4, 3, 1.0, 0, 0).validate(),
            Err(ExperimentError::BadSampleCount(0))
        );
        assert_eq!(
            config(4, 3, 0.0, 100, 0).validate(),
            Err(ExperimentError::BadConcentration(0.0))
        );
    }

    #[test]
    fn sampled_classifier_is_valid_and_deterministic() {
        let cfg = config(4, 3, 1.0, 10, 123);
        let a = sample_classifier(&cfg, 2).unwrap();
        let b = sample_classifier(&cfg, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_classes(), 4);
        assert_eq!(a.num_values(0), 3);
        assert_ne!(a, sample_classifier(&cfg, 3).unwrap());
    }

    #[test]
    fn scatter_count_for_two_classes() {
        let cfg = config(2, 3, 1.0, 1, 0);
        let run = run_scatter(&cfg).unwrap();
        assert_eq!(run.records.len(), 6);
        assert_eq!(run.skipped, 0);
    }

    #[test]
    fn scatter_points_come_in_mirrored_pairs() {
        let cfg = config(4, 3, 1.0, 5, 7);
        let run = run_scatter(&cfg).unwrap();
        assert_eq!(run.records.len(), 5 * 3 * 4 * 3);
        for r in &run.records {
            let mirror = run
                .records
                .iter()
                .find(|m| {
                    m.classifier_index == r.classifier_index
                        && m.value_index == r.value_index
                        && m.class_c == r.class_d
                        && m.class_d == r.class_c
                })
                .expect("mirror record");
            assert_eq!(mirror.log_theta_ratio, -r.log_theta_ratio);
            assert_eq!(mirror.log_f_ratio, -r.log_f_ratio);
            assert!(r.log_theta_ratio.is_finite());
            assert!(r.log_f_ratio.is_finite());
        }
    }

    #[test]
    fn comparison_run_shape_and_consistency() {
        let cfg = config(4, 3, 1.0, 20, 1);
        let (records, stats) = run_posterior_comparison(&cfg).unwrap();
        assert_eq!(records.len(), 60);
        assert_eq!(stats.n_cases, 60);
        assert!((0.0..=100.0).contains(&stats.pct_pob_max_higher));
        assert!((0.0..=100.0).contains(&stats.pct_map_disagree));
        for r in &records {
            assert_eq!(r.map_categorical, map_class(&r.categorical));
            assert_eq!(r.map_pob, map_class(&r.pob));
            assert_eq!(r.max_categorical, r.categorical[r.map_categorical]);
            assert_eq!(r.max_pob, r.pob[r.map_pob]);
        }
    }

    #[test]
    fn comparison_records_reproduce_from_seed() {
        let cfg = config(4, 3, 1.0, 10, 99);
        let (records, _) = run_posterior_comparison(&cfg).unwrap();
        for r in &records {
            let params = sample_classifier(&cfg, r.classifier_index as u64).unwrap();
            let cat = params.categorical_posterior(r.value_index).unwrap();
            let pob = params.pob_posterior(r.value_index).unwrap();
            assert_eq!(cat, r.categorical);
            assert_eq!(pob, r.pob);
        }
    }

    #[test]
    fn identical_tables_give_equal_maxima() {
        let row = ProbVector::new(&[0.2, 0.3, 0.5]).unwrap();
        let params = NBParams::new(
            ProbVector::new(&[0.4, 0.6]).unwrap(),
            vec![vec![row.clone(), row]],
        )
        .unwrap();
        let records = comparison_records(&params, 0).unwrap();
        for r in records {
            assert_eq!(r.max_categorical, r.max_pob);
            assert_eq!(r.map_categorical, r.map_pob);
        }
    }

    #[test]
    fn winning_class_uniform_prior() {
        let params = NBParams::new(
            ProbVector::new(&[0.5, 0.5]).unwrap(),
            vec![vec![
                ProbVector::new(&[0.6, 0.4]).unwrap(),
                ProbVector::new(&[0.3, 0.7]).unwrap(),
            ]],
        )
        .unwrap();
        let rec = winning_class_analysis(&params, 0).unwrap();
        assert_eq!(rec.categorical_winner, 0);
        assert_eq!(rec.rho, 1.0);
        assert_eq!(rec.log_rho, 0.0);
    }

    #[test]
    fn winning_class_prior_can_override_likelihood() {
        // pi = (0.9, 0.1), theta_j = (0.2, 0.3): 0.9*0.2 > 0.1*0.3
        let params = NBParams::new(
            ProbVector::new(&[0.9, 0.1]).unwrap(),
            vec![vec![
                ProbVector::new(&[0.2, 0.5, 0.3]).unwrap(),
                ProbVector::new(&[0.3, 0.3, 0.4]).unwrap(),
            ]],
        )
        .unwrap();
        let rec = winning_class_analysis(&params, 0).unwrap();
        assert_eq!(rec.categorical_winner, 0);
        assert!((rec.rho - 0.1 / 0.9).abs() < 1e-15);
        assert!(rec.log_rho < 0.0);
    }

    #[test]
    fn winning_class_requires_two_classes() {
        let cfg = config(3, 3, 1.0, 1, 0);
        let params = sample_classifier(&cfg, 0).unwrap();
        assert_eq!(
            winning_class_analysis(&params, 0),
            Err(ExperimentError::NotTwoClasses(3))
        );
    }

    #[test]
    fn surface_grid_endpoints_and_centre() {
        let grid = surface_grid(0.01).unwrap();
        let corner = grid
            .iter()
            .find(|p| p.theta1 == 1.0 && p.theta2 == 0.0)
            .unwrap();
        assert_eq!(corner.q, 0.0);
        let best = grid
            .iter()
            .max_by(|a, b| a.q.total_cmp(&b.q))
            .unwrap();
        assert!((best.theta1 - 1.0 / 3.0).abs() < 1e-15);
        assert!((best.theta2 - 1.0 / 3.0).abs() < 1e-15);
        assert!((best.q - 8.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn surface_grid_rejects_bad_step() {
        assert_eq!(
            surface_grid(0.0),
            Err(ExperimentError::BadStep(0.0))
        );
        assert_eq!(
            surface_grid(0.6),
            Err(ExperimentError::BadStep(0.6))
        );
        assert!(surface_grid(f64::NAN).is_err());
    }

    #[test]
    fn bound_curves_shape() {
        let curves = bound_curves(6, 0.001).unwrap();
        assert_eq!(curves.len(), 1001);
        assert_eq!(curves[0].theta_j, 0.0);
        assert_eq!(curves[0].lower, 0.0);
        assert_eq!(curves[0].upper, 0.0);
        assert_eq!(curves[1000].theta_j, 1.0);
        assert_eq!(curves[1000].lower, 1.0);
        assert_eq!(curves[1000].upper, 1.0);
        for p in &curves {
            assert!(p.lower <= p.upper);
        }
    }

    #[test]
    fn bound_gap_grows_with_k() {
        let k3 = bound_curves(3, 0.5).unwrap();
        let k6 = bound_curves(6, 0.5).unwrap();
        let gap3 = k3[1].upper - k3[1].lower;
        let gap6 = k6[1].upper - k6[1].lower;
        assert!(gap6 > gap3, "gap at 0.5: K=6 {gap6} vs K=3 {gap3}");
    }

    #[test]
    fn bound_curves_collapse_for_two_values() {
        for p in bound_curves(2, 0.05).unwrap() {
            assert_eq!(p.lower, p.upper);
        }
    }
}
