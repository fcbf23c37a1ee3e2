//! Estimating `‖Φ‖ = sup_{|a(k)| ≤ 1} ‖Σ a(k) x_k y_k*‖` from both sides.
//!
//! Run with `cargo run --release --example multiplier_norm`.

use framescale::generate::{generate, GenerateConfig, InstanceKind};
use framescale::multiplier::{self, AlternatingConfig};

pub fn run() -> anyhow::Result<()> {
    let pair = generate(&GenerateConfig {
        kind: InstanceKind::Gaussian,
        n: 4,
        d: 2,
        scaling_range: None,
        seed: 7,
    })?;

    let alt = multiplier::norm_lower_alternating_with(&pair, &AlternatingConfig::default())?;
    println!("alternating ascent : {:.10}", alt.value);
    println!("  certificate      : {:.10}", alt.certificate_value(&pair));

    for steps in [8, 16, 48] {
        let grid = multiplier::norm_oracle_grid(&pair, steps)?;
        let upper = grid.value * multiplier::grid_upper_factor(steps);
        println!(
            "grid {steps:>2} phases     : [{:.10}, {:.10}]",
            grid.value, upper
        );
    }

    println!("Σ‖x_k‖‖y_k‖        : {:.10}", pair.norm_product_sum());
    let cb = multiplier::cb_lower_ascent(&pair, pair.dim(), 4, 200, 0)?;
    println!("cb lower (m = d)   : {:.10}", cb);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
