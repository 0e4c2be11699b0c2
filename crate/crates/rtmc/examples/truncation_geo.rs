//! Truncating a countable alphabet: the geometric full shift at level L has
//! eigenvalue λ_L = 1 − 2^{-L}, cylinder masses 2^{-(b+1)}/λ_L, and pressure
//! log λ_L → 0 as the truncation is raised.
//!
//! Run with: cargo run --example truncation_geo

use rtmc::base::{BaseSystem, State};
use rtmc::potential::Potential;
use rtmc::shift::{AdjacencyRule, Alphabet, RandomShift};
use rtmc::spectral::{
    conformal_measure_dual, lambda_quotient, power_series, DualParams, SeriesParams,
};
use rtmc::transfer::{pressure, PartitionTables, PressureParams};

fn main() -> rtmc::error::Result<()> {
    println!("  L    P̂ (= log λ_L)     λ estimate        1 − 2^-L");
    for l in [4usize, 8, 12, 20] {
        let shift = RandomShift::new(
            BaseSystem::cyclic(1),
            Alphabet::Countable,
            AdjacencyRule::Full,
            l,
        )?;
        let pot = Potential::geometric(&shift);

        let tables = PartitionTables::build(&shift, &pot, 0, 60)?;
        let est = pressure(&shift, &tables, State(0), &PressureParams::default())?;
        let data = power_series(&shift, &pot, &SeriesParams::new(est.value))?;
        let lambda = lambda_quotient(&shift, &data)?;
        let closed = 1.0 - (2.0f64).powi(-(l as i32));
        println!(
            "  {l:2}   {:+.12}   {:.12}    {closed:.12}",
            est.value,
            lambda.lambda(State(0))
        );
    }

    // Masses at the deepest level against the closed form.
    let l = 20;
    let shift =
        RandomShift::new(BaseSystem::cyclic(1), Alphabet::Countable, AdjacencyRule::Full, l)?;
    let pot = Potential::geometric(&shift);
    let data = power_series(&shift, &pot, &SeriesParams::new((1.0 - (2.0f64).powi(-20)).ln()))?;
    let lambda = lambda_quotient(&shift, &data)?;
    let measure = conformal_measure_dual(&shift, &pot, &lambda, &DualParams::default())?;
    let lam = lambda.lambda(State(0));
    println!("\n  b    μ([b]) at L=20        2^-(b+1)/λ_L");
    for b in [0usize, 1, 5, 19] {
        let closed = (2.0f64).powi(-(b as i32 + 1)) / lam;
        println!("  {b:2}   {:.12e}   {closed:.12e}", measure.one_cylinder(State(0), b));
    }
    Ok(())
}
