//! Divergence type: the power series Σ sⁿ 𝒵ₙ blows up exactly at its radius
//! of convergence s = e^{-P}, while any radius strictly inside keeps a
//! geometric tail.
//!
//! Run with: cargo run --example divergence_type

use rtmc::base::State;
use rtmc::config::fixture;
use rtmc::transfer::{divergence_diagnostic, pressure, PartitionTables, PressureParams};

fn main() -> rtmc::error::Result<()> {
    for name in ["FS2", "GM"] {
        let config = fixture(name)?;
        let shift = config.build_shift()?;
        let pot = config.build_potential(&shift)?;
        let tables = PartitionTables::build(&shift, &pot, 0, 60)?;
        let est = pressure(&shift, &tables, State(0), &PressureParams::default())?;

        println!("{name}  (P̂ = {:+.9})", est.value);
        for (tag, log_s) in [("s = e^-P", -est.value), ("s = 0.9 e^-P", -est.value + (0.9f64).ln())] {
            let d = divergence_diagnostic(&shift, &tables, State(0), log_s)?;
            let last = d.log_partial_sums.last().unwrap();
            println!(
                "  {tag:13} divergent = {:5}   term ratio e^{:+.4}   log partial sum → {:+.6}",
                d.divergent,
                d.log_term_ratio,
                last
            );
            if !d.divergent {
                println!("  {:13} geometric tail bound e^{:+.4}", "", d.log_tail_bound);
            }
        }
    }
    Ok(())
}
