//! The orchestration layer as a library: take a config (here a built-in
//! fixture, but any JSON document with the shipped schema works), run the
//! full pipeline, and read the report back — the same path the CLI drives.
//!
//! Run with: cargo run --example experiment_pipeline

use rtmc::config::fixture;
use rtmc::runner::{run, RunOptions, Subcommand};

fn main() -> rtmc::error::Result<()> {
    let config = fixture("P2")?;
    let out = std::env::temp_dir().join("rtmc-pipeline-demo");
    let opts = RunOptions { out_dir: out.clone(), threads: None, seed: None };

    let report = run(&config, Subcommand::All, &opts)?;

    println!("fixture {} (config digest {}…)", report.name, &report.config_digest[..12]);
    let p = report.pressure.as_ref().unwrap();
    println!("pressure {:+.12}, gap {:.2e}", p.value, p.gap);
    println!("  closed form log(1+√2)/2 = {:+.12}", 0.5 * (1.0 + 2.0f64.sqrt()).ln());
    for row in &report.lambda.as_ref().unwrap().rows {
        println!("  λ(ω{}) = {:.12}", row.state, row.lambda);
    }
    println!(
        "conformality residual {:.2e}; eigenvalue pair gap {:.2e}",
        report.conformal.as_ref().unwrap().residual_max,
        report.eigenfunction.as_ref().unwrap().lambda_pair_gap
    );
    println!("\nhard checks:");
    for a in &report.assertions {
        println!("  [{}] {}", if a.passed { "pass" } else { "FAIL" }, a.name);
    }
    println!("\nCSV tables and report.json in {}", out.display());
    Ok(())
}
