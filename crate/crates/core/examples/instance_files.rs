//! Writing and reading instance files, then rescaling from disk.
//!
//! Run with `cargo run --example instance_files`.

use framescale::cli::io::{InstanceFile, Metadata};
use framescale::generate::{generate, GenerateConfig, InstanceKind};
use framescale::rescale::{self, OptimizeConfig};

pub fn run() -> anyhow::Result<()> {
    let pair = generate(&GenerateConfig {
        kind: InstanceKind::D1Scalars,
        n: 4,
        d: 1,
        scaling_range: None,
        seed: 8,
    })?;
    let file = InstanceFile::from_pair(
        &pair,
        Some(Metadata {
            seed: Some(8),
            generator: Some("instance_files example".into()),
            description: None,
        }),
    );
    let dir = std::env::temp_dir().join("framescale-example");
    let path = dir.join("scalars.json");
    file.write(&path)?;

    let back = InstanceFile::read(&path)?.to_pair()?;
    assert_eq!(back, pair);
    let bracket = rescale::optimize(&back, &OptimizeConfig::default())?;
    let closed: f64 = back
        .xs()
        .iter()
        .zip(back.ys())
        .map(|(x, y)| (x[0] * y[0]).norm())
        .sum();
    println!(
        "{}: M_upper = {:.10}, Σ|x_k y_k| = {:.10}",
        path.display(),
        bracket.m_upper,
        closed
    );
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
