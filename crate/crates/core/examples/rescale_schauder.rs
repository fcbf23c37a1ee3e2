//! Rescaling a badly scaled Schauder pair so both families become frames.
//!
//! Run with `cargo run --release --example rescale_schauder`.

use framescale::frames;
use framescale::generate::{generate, GenerateConfig, InstanceKind};
use framescale::rescale::{self, OptimizeConfig};

pub fn run() -> anyhow::Result<()> {
    // canonical dual pair, then x_k ↦ β_k x_k, y_k ↦ y_k / conj(β_k), |β_k| ∈ [1e-3, 1e3]
    let pair = generate(&GenerateConfig {
        kind: InstanceKind::SchauderMangled,
        n: 6,
        d: 3,
        scaling_range: None,
        seed: 11,
    })?;
    println!(
        "‖Σ x_k y_k* − I‖ = {:.2e}",
        frames::schauder_deviation(&pair)
    );
    let bx = frames::bessel_and_frame_bounds(pair.xs())?;
    let by = frames::bessel_and_frame_bounds(pair.ys())?;
    println!(
        "before: x bounds [{:.3e}, {:.3e}], y bounds [{:.3e}, {:.3e}]",
        bx.lower, bx.upper, by.lower, by.upper
    );

    let bracket = rescale::optimize(&pair, &OptimizeConfig::default())?;
    println!(
        "cb norm bracket [{:.8}, {:.8}] after {} iterations",
        bracket.m_lower, bracket.m_upper, bracket.iterations
    );

    let s = rescale::extract_scaling(&pair, &bracket.weights)?;
    println!(
        "after : x bounds [{:.4}, {:.4}], y bounds [{:.4}, {:.4}]",
        s.x_bounds.lower, s.x_bounds.upper, s.y_bounds.lower, s.y_bounds.upper
    );
    for (k, a) in s.alpha.iter().enumerate() {
        println!("  α_{k} = {a:.6e}");
    }
    let scaled = rescale::scaled_pair(&pair, &bracket.weights)?;
    println!(
        "rescaled ‖T − I‖ = {:.2e}",
        frames::schauder_deviation(&scaled)
    );
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
