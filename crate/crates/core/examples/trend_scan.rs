//! Checks the n=2000 trend orderings and the restricted scatter slope.

use onehot_nb::experiments::{restricted_slope, run_posterior_comparison, run_scatter, ExperimentConfig};
use onehot_nb::simplex::RngSeed;
use std::time::Instant;

fn cell(k: usize, alpha: f64, seed: u64, n: usize) -> f64 {
    let cfg = ExperimentConfig {
        classes: 4,
        values: k,
        alpha_theta: alpha,
        alpha_pi: 1.0,
        samples: n,
        master_seed: RngSeed::new(seed, 0),
    };
    run_posterior_comparison(&cfg).unwrap().1.pct_map_disagree
}

fn main() {
    let t0 = Instant::now();
    for seed in 0..4u64 {
        print!("seed {seed}: alpha=1   ->");
        for k in [3, 6, 10] {
            print!(" K={k}:{:5.2}", cell(k, 1.0, seed, 2000));
        }
        print!("   alpha=1/K ->");
        for k in [3, 6, 10] {
            print!(" K={k}:{:5.2}", cell(k, 1.0 / k as f64, seed, 2000));
        }
        println!();
    }
    let cfg = ExperimentConfig {
        classes: 4,
        values: 3,
        alpha_theta: 1.0,
        alpha_pi: 1.0,
        samples: 2000,
        master_seed: RngSeed::new(0, 0),
    };
    let run = run_scatter(&cfg).unwrap();
    println!("scatter K=3 alpha=1 n=2000: records {}, skipped {}, restricted slope {:.4}",
        run.records.len(), run.skipped, restricted_slope(&run.records, 1.0).unwrap());
    println!("elapsed {:?}", t0.elapsed());
}
