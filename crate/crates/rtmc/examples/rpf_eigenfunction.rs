//! The random Ruelle-Perron-Frobenius picture on the golden-mean shift:
//! normalized operator iterates collapse onto the rank-one projector
//! f ↦ h·∫f dμ at the spectral-gap rate φ^{-2}.
//!
//! Run with: cargo run --example rpf_eigenfunction

use rtmc::base::State;
use rtmc::config::fixture;
use rtmc::spectral::{
    conformal_measure_dual, eigenfunction, exactness, lambda_quotient, power_series, DualParams,
    SeriesParams,
};
use rtmc::transfer::CylinderFunction;

fn main() -> rtmc::error::Result<()> {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let config = fixture("GM")?;
    let shift = config.build_shift()?;
    let pot = config.build_potential(&shift)?;

    let data = power_series(&shift, &pot, &SeriesParams::new(phi.ln()))?;
    let lambda = lambda_quotient(&shift, &data)?;
    let measure = conformal_measure_dual(&shift, &pot, &lambda, &DualParams::default())?;
    let eigen = eigenfunction(&shift, &pot, &lambda, &measure, 1e-12, 100_000)?;

    println!(
        "eigenfunction fixed in {} sweeps, relation residual {:.2e}",
        eigen.sweeps, eigen.residual
    );
    println!(
        "independent eigenvalue from the duality pairing: {:.12} (φ = {:.12})",
        eigen.log_lambda_re[0].exp(),
        phi
    );

    // Push the indicator of [0] through the normalized operator and watch
    // the L¹ distance to its rank-one limit.
    let f = CylinderFunction::indicator(&shift, &[0]);
    let report = exactness(&shift, &pot, &lambda, &measure, &eigen, &f, State(0), 60)?;
    println!("\n   n    L¹ deviation");
    for (n, dev) in report.deviations.iter().filter(|(n, _)| n % 10 == 0 || *n == 1) {
        println!("  {n:3}    {dev:.6e}");
    }
    if let Some(rate) = report.log_rate {
        println!(
            "\nfitted decay rate e^{rate:.6} per step; spectral gap φ^-2 = {:.6}",
            phi.powi(-2)
        );
    }
    Ok(())
}
