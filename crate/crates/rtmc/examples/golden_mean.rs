//! The golden-mean shift end to end: pressure, eigenvalue, conformal
//! measure, and eigenfunction, each against its golden-ratio closed form.
//!
//! Run with: cargo run --example golden_mean

use rtmc::base::State;
use rtmc::config::fixture;
use rtmc::spectral::{
    conformal_measure_dual, eigenfunction, lambda_quotient, power_series, DualParams,
    SeriesParams,
};
use rtmc::transfer::{pressure, PartitionTables, PressureParams};

fn main() -> rtmc::error::Result<()> {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let config = fixture("GM")?;
    let shift = config.build_shift()?;
    let pot = config.build_potential(&shift)?;

    let tables = PartitionTables::build(&shift, &pot, 0, 60)?;
    let est = pressure(&shift, &tables, State(0), &PressureParams::default())?;
    println!("pressure        {:+.12}   log φ = {:+.12}", est.value, phi.ln());

    let data = power_series(&shift, &pot, &SeriesParams::new(est.value))?;
    let lambda = lambda_quotient(&shift, &data)?;
    println!("eigenvalue      {:+.12}   φ     = {:+.12}", lambda.lambda(State(0)), phi);

    // The conformal measure puts mass φ^{-1} on [0] and φ^{-2} on [1]
    // (they sum to 1 because φ + 1 = φ²).
    let measure = conformal_measure_dual(&shift, &pot, &lambda, &DualParams::default())?;
    let s = State(0);
    println!("one-cylinders   μ[0] = {:.12}  μ[1] = {:.12}", measure.one_cylinder(s, 0), measure.one_cylinder(s, 1));
    println!("closed forms    1/φ  = {:.12}  1/φ² = {:.12}", 1.0 / phi, 1.0 / (phi * phi));

    let eigen = eigenfunction(&shift, &pot, &lambda, &measure, 1e-12, 100_000)?;
    let h: Vec<(Vec<usize>, f64)> = eigen.h.entries(s);
    let ratio = h[0].1 / h[1].1;
    println!("eigenfunction   h(0)/h(1) = {ratio:.12}   φ = {phi:.12}");
    println!("duality λ check {:+.12}", eigen.log_lambda_re[0].exp());
    Ok(())
}
