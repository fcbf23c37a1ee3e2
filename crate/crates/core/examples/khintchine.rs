//! Khintchine's inequality `E|Σ a_k r_k| ≥ (1/√2)‖a‖` by exhaustive signs.
//!
//! Run with `cargo run --release --example khintchine`.

use framescale::random;
use framescale::verify::{khintchine_check, RademacherEnsemble};
use num_complex::Complex64;

pub fn run() -> anyhow::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    for m in 1..=6 {
        let r = khintchine_check(&vec![one; m])?;
        println!("a = 1^{m}: E|Σ r_k| = {:.6}, ratio {:.6}", r.lhs, r.ratio);
    }

    let mut rng = random::seeded(5);
    let mut worst = f64::INFINITY;
    for m in 1..=12 {
        for _ in 0..20 {
            let a = random::gaussian_vector(&mut rng, m);
            worst = worst.min(khintchine_check(&a)?.ratio);
        }
    }
    println!("smallest ratio over 240 random complex vectors: {worst:.6}");

    // sign patterns are the Rademacher functions on dyadic intervals
    let ens = RademacherEnsemble::new(3)?;
    let f = |s: &[f64]| (s[0] + 2.0 * s[1] - s[2]).abs();
    println!(
        "enumeration {} = dyadic integral {}",
        ens.average(f),
        ens.dyadic_integral(f)
    );
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
