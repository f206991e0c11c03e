//! Structural and qualitative properties of the Monte-Carlo experiments:
//! record counts, mirrored-pair antisymmetry, where MAP disagreements
//! concentrate, the winning-class flip region, and the slope-2 alignment
//! in the sparse scatter.

use onehot_nb::experiments::{
    restricted_slope, run_posterior_comparison, run_scatter, sample_classifier,
    winning_class_analysis, ExperimentConfig,
};
use onehot_nb::simplex::RngSeed;

fn config(classes: usize, values: usize, alpha: f64, samples: usize, seed: u64) -> ExperimentConfig {
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
fn record_counts_match_protocol() {
    let cfg = config(4, 3, 1.0, 100, 0);
    let (records, stats) = run_posterior_comparison(&cfg).unwrap();
    assert_eq!(records.len(), 300);
    assert_eq!(stats.n_cases, 300);
    let run = run_scatter(&cfg).unwrap();
    assert_eq!(run.records.len() + run.skipped, 100 * 3 * 4 * 3);
}

#[test]
fn map_disagreements_concentrate_at_low_categorical_confidence() {
    // K=3, alpha=1, C=4, n=1000: disagreement rate among cases the
    // categorical model is sure about (max > 0.9) is strictly below the
    // rate among unsure cases (max < 0.5)
    let cfg = config(4, 3, 1.0, 1000, 5);
    let (records, _) = run_posterior_comparison(&cfg).unwrap();
    let rate = |lo: bool| {
        let bucket: Vec<_> = records
            .iter()
            .filter(|r| {
                if lo {
                    r.max_categorical < 0.5
                } else {
                    r.max_categorical > 0.9
                }
            })
            .collect();
        assert!(!bucket.is_empty());
        bucket.iter().filter(|r| r.map_categorical != r.map_pob).count() as f64
            / bucket.len() as f64
    };
    let low_confidence = rate(true);
    let high_confidence = rate(false);
    assert!(
        high_confidence < low_confidence,
        "high {high_confidence} vs low {low_confidence}"
    );
}

#[test]
fn pob_flips_occur_in_the_predicted_region() {
    // two-class case: flips concentrate where the prior carries class c
    // (log rho < 0) against the theta evidence, i.e.
    // log rho < log(theta_jc / theta_jd) < 0
    let cfg = config(2, 3, 1.0, 500, 11);
    let mut flips = 0usize;
    let mut region_flips = 0usize;
    for i in 0..cfg.samples {
        let params = sample_classifier(&cfg, i as u64).unwrap();
        for j in 0..cfg.values {
            let rec = winning_class_analysis(&params, j).unwrap();
            if !rec.flipped {
                continue;
            }
            flips += 1;
            let c = rec.categorical_winner;
            let d = 1 - c;
            let log_theta_ratio =
                params.theta(0, c)[j].ln() - params.theta(0, d)[j].ln();
            if rec.log_rho < log_theta_ratio && log_theta_ratio < 0.0 {
                region_flips += 1;
            }
        }
    }
    assert!(flips > 0, "no flips in {} cases", cfg.samples * cfg.values);
    assert!(
        region_flips > 0,
        "{flips} flips but none in the predicted region"
    );
}

#[test]
fn sparse_scatter_shows_slope_two_alignment() {
    // K=3, alpha=1/3: at least 1% of the records far to the right
    // (log theta ratio > 2) hug the slope-2 line within 0.1
    let cfg = config(4, 3, 1.0 / 3.0, 100, 3);
    let run = run_scatter(&cfg).unwrap();
    let far: Vec<_> = run
        .records
        .iter()
        .filter(|r| r.log_theta_ratio > 2.0)
        .collect();
    assert!(!far.is_empty());
    let aligned = far
        .iter()
        .filter(|r| (r.log_f_ratio - 2.0 * r.log_theta_ratio).abs() < 0.1)
        .count();
    let fraction = aligned as f64 / far.len() as f64;
    assert!(
        fraction >= 0.01,
        "only {aligned} of {} far records aligned",
        far.len()
    );
}

#[test]
fn uniform_scatter_slope_near_zero_exceeds_one() {
    let cfg = config(4, 3, 1.0, 100, 0);
    let run = run_scatter(&cfg).unwrap();
    let slope = restricted_slope(&run.records, 1.0).unwrap();
    assert!(slope > 1.0, "slope {slope}");
}

#[test]
fn scatter_output_is_sorted_and_deterministic() {
    let cfg = config(3, 4, 1.0, 10, 21);
    let a = run_scatter(&cfg).unwrap();
    let b = run_scatter(&cfg).unwrap();
    assert_eq!(a, b);
    let keys: Vec<_> = a
        .records
        .iter()
        .map(|r| (r.classifier_index, r.value_index, r.class_c, r.class_d))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
