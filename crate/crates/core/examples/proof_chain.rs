//! The chain of inequalities from `‖Φ‖` to the key estimate with constant 2.
//!
//! Run with `cargo run --release --example proof_chain`.

use framescale::generate::{generate, GenerateConfig, InstanceKind};
use framescale::random;
use framescale::verify::{key_simple_check, phi_norm_oracle, super_key_check};

pub fn run() -> anyhow::Result<()> {
    let pair = generate(&GenerateConfig {
        kind: InstanceKind::Gaussian,
        n: 4,
        d: 3,
        scaling_range: None,
        seed: 21,
    })?;
    let phi = phi_norm_oracle(&pair, 48)?;
    println!("‖Φ‖ ∈ [{:.8}, {:.8}]", phi.value, phi.upper);

    let mut rng = random::seeded(22);
    let u = random::gaussian_vector(&mut rng, 3);
    let v = random::gaussian_vector(&mut rng, 3);
    let simple = key_simple_check(&pair, &u, &v, phi.value)?;
    println!(
        "Σ|⟨u,y_k⟩||⟨v,x_k⟩| = {:.6} ≤ ‖Φ‖‖u‖‖v‖ = {:.6}",
        simple.lhs, simple.rhs
    );

    for m in [1, 3, 6, 10] {
        let us: Vec<_> = (0..m)
            .map(|_| random::gaussian_vector(&mut rng, 3))
            .collect();
        let vs: Vec<_> = (0..m)
            .map(|_| random::gaussian_vector(&mut rng, 3))
            .collect();
        let r = super_key_check(&pair, &us, &vs, phi.value)?;
        let c = r.chain.expect("m ≤ 10 is enumerated");
        println!(
            "m = {m:>2}: ½·key {:.5} ≤ E_sE_t {:.5} ≤ ‖Φ‖E‖U‖E‖V‖ {:.5} ≤ ‖Φ‖·l2 {:.5}",
            c.khintchine_lower, c.bilinear_average, c.norm_product, c.l2_bound
        );
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
