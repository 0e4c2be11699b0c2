//! Two-sided Gibbs bounds: every cylinder mass, normalized by the eigenvalue
//! cocycle and the Birkhoff weight, lands inside a certified interval
//! [B⁻¹D, B] built from the distortion constant and the image-sum floor.
//!
//! Run with: cargo run --example gibbs_bounds

use rtmc::base::State;
use rtmc::config::fixture;
use rtmc::spectral::{
    conformal_measure_dual, gibbs_report, lambda_quotient, power_series, DualParams, SeriesParams,
};
use rtmc::transfer::{pressure, PartitionTables, PressureParams};

fn main() -> rtmc::error::Result<()> {
    for name in ["GM", "P2"] {
        let config = fixture(name)?;
        let shift = config.build_shift()?;
        let pot = config.build_potential(&shift)?;
        let tables = PartitionTables::build(&shift, &pot, 0, 60)?;
        let est = pressure(&shift, &tables, State(0), &PressureParams::default())?;
        let data = power_series(&shift, &pot, &SeriesParams::new(est.value))?;
        let lambda = lambda_quotient(&shift, &data)?;
        let measure = conformal_measure_dual(&shift, &pot, &lambda, &DualParams::default())?;

        println!("{name}:");
        for s in shift.base().states() {
            for len in [2, 5, 10] {
                let rep = gibbs_report(&shift, &pot, &lambda, &measure, s, len, 100_000, 0)?;
                println!(
                    "  state {} len {len:2}: {:4} words, ratios [{:.6}, {:.6}] ⊂ [{:.6}, {:.6}]  ok={}",
                    s.0,
                    rep.words_checked,
                    rep.min_ratio,
                    rep.max_ratio,
                    rep.bound_lo,
                    rep.bound_hi,
                    rep.ok
                );
                assert!(rep.ok);
            }
        }
    }
    Ok(())
}
