//! The dilation `Φ(a) = M · V₁* π(a) V₂` built from optimal weights.
//!
//! Run with `cargo run --release --example dilation`.

use framescale::generate::{generate, GenerateConfig, InstanceKind};
use framescale::multiplier::{mask_matrix, ScalarMask};
use framescale::random;
use framescale::rescale::{self, build_dilation, dilation_reconstruct, OptimizeConfig};

pub fn run() -> anyhow::Result<()> {
    let pair = generate(&GenerateConfig {
        kind: InstanceKind::Gaussian,
        n: 5,
        d: 3,
        scaling_range: Some((0.1, 10.0)),
        seed: 3,
    })?;
    let bracket = rescale::optimize(&pair, &OptimizeConfig::default())?;
    let dil = build_dilation(&pair, &bracket.weights, bracket.m_upper)?;
    let (e1, e2) = dil.isometry_defects();
    println!("K = C^{}, M = {:.8}", dil.big_dim(), dil.scale());
    println!("‖V₁*V₁ − I‖ = {e1:.2e}, ‖V₂*V₂ − I‖ = {e2:.2e}");
    println!(
        "rank-one residual {:.2e}",
        rescale::rank_one_residual(&pair, &dil)?
    );

    let mut rng = random::seeded(4);
    for _ in 0..3 {
        let mask = ScalarMask::new(random::phases(&mut rng, pair.len()))?;
        let diff = &dilation_reconstruct(&dil, &mask)? - &mask_matrix(&pair, &mask)?;
        println!(
            "random mask: max |M V₁*π(a)V₂ − Φ(a)| = {:.2e}",
            diff.max_abs()
        );
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
