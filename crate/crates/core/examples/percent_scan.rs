//! Scans experiment cells across seeds to inspect the summary percentages.

use onehot_nb::experiments::{run_posterior_comparison, ExperimentConfig};
use onehot_nb::simplex::RngSeed;

fn main() {
    let paper_higher = [(3, 82.0, 78.0), (6, 72.3, 78.1), (10, 74.7, 76.4)];
    let paper_disagree = [(3, 12.33, 14.33), (6, 5.67, 7.00), (10, 2.50, 6.30)];

    for pi_follows_alpha in [true, false] {
        println!("=== alpha_pi = {} ===", if pi_follows_alpha { "alpha (same as theta)" } else { "1.0 fixed" });
        for (idx, &(k, higher_1, higher_invk)) in paper_higher.iter().enumerate() {
            let (_, disagree_1, disagree_invk) = paper_disagree[idx];
            for (alpha, paper_h, paper_d) in [(1.0, higher_1, disagree_1), (1.0 / k as f64, higher_invk, disagree_invk)] {
                print!("K={k:2} alpha={alpha:.3}  paper higher={paper_h:5.1} disagree={paper_d:5.2} | ");
                for seed in 0..8u64 {
                    let cfg = ExperimentConfig {
                        classes: 4,
                        values: k,
                        alpha_theta: alpha,
                        alpha_pi: if pi_follows_alpha { alpha } else { 1.0 },
                        samples: 100,
                        master_seed: RngSeed::new(seed, 0),
                    };
                    let (_, stats) = run_posterior_comparison(&cfg).unwrap();
                    print!("{:5.1}/{:5.2} ", stats.pct_pob_max_higher, stats.pct_map_disagree);
                }
                println!();
            }
        }
    }
}
