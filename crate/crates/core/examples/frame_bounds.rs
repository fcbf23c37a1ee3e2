//! Frame operators, optimal frame bounds and the Schauder identity.
//!
//! Run with `cargo run --example frame_bounds`.

use framescale::frames::{self, FramePair};
use framescale::generate::{generate, GenerateConfig, InstanceKind};

pub fn run() -> anyhow::Result<()> {
    // three copies of a random orthonormal basis of C^2, with y_k = x_k / 3
    let union = generate(&GenerateConfig {
        kind: InstanceKind::OnbUnion,
        n: 6,
        d: 2,
        scaling_range: None,
        seed: 1,
    })?;
    let b = frames::bessel_and_frame_bounds(union.xs())?;
    println!(
        "union of 3 bases: bounds [{:.6}, {:.6}], frame = {}",
        b.lower, b.upper, b.is_frame
    );

    // a Gaussian frame with its canonical dual
    let gauss = generate(&GenerateConfig {
        kind: InstanceKind::Gaussian,
        n: 5,
        d: 3,
        scaling_range: None,
        seed: 2,
    })?;
    let dual = frames::canonical_dual(gauss.xs())?;
    let pair = FramePair::new(gauss.xs().to_vec(), dual)?;
    println!(
        "canonical dual pair: ‖T − I‖ = {:.2e}",
        frames::schauder_deviation(&pair)
    );

    let bx = frames::bessel_and_frame_bounds(pair.xs())?;
    let by = frames::bessel_and_frame_bounds(pair.ys())?;
    println!(
        "x bounds [{:.4}, {:.4}]  dual bounds [{:.4}, {:.4}]",
        bx.lower, bx.upper, by.lower, by.upper
    );
    // the dual's bounds are the reciprocals of the frame's
    println!(
        "1/upper_x = {:.4}, 1/lower_x = {:.4}",
        1.0 / bx.upper,
        1.0 / bx.lower
    );
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
