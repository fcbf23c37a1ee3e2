//! Distribution of `M_upper / ‖Φ‖` over a seeded random corpus.
//!
//! Run with `cargo run --release --example ratio_experiment`.

use framescale::verify::{ratio_experiment, RatioConfig};

pub fn run() -> anyhow::Result<()> {
    let report = ratio_experiment(&RatioConfig {
        instances: 24,
        n_max: 4,
        d_max: 3,
        ..RatioConfig::default()
    })?;
    for (q, r) in &report.quantiles {
        println!("q{:<4} {r:.6}", q * 100.0);
    }
    println!(
        "max {:.6}, mean {:.6}, bound {:.2}, failures {}",
        report.max_ratio,
        report.mean_ratio,
        report.bound,
        report.failures.len()
    );
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
