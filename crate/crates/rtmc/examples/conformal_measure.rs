//! Random conformal measures two ways — a truncated power series rooted at
//! the anchor, and the dual fixed point of the transfer operator — checked
//! against each other and against the Bernoulli product closed form.
//!
//! Run with: cargo run --example conformal_measure

use rtmc::base::State;
use rtmc::config::fixture;
use rtmc::spectral::{
    conformal_measure_dual, conformal_measure_series, conformality_residual, lambda_quotient,
    power_series, DualParams, SeriesParams,
};

fn main() -> rtmc::error::Result<()> {
    let config = fixture("FS2-BERNOULLI")?;
    let shift = config.build_shift()?;
    let pot = config.build_potential(&shift)?;
    let probs = [0.3, 0.7];

    // The normalized Bernoulli weights make the pressure exactly zero.
    let data = power_series(&shift, &pot, &SeriesParams::new(0.0))?;
    let lambda = lambda_quotient(&shift, &data)?;

    let series = conformal_measure_series(&shift, &pot, &data)?;
    let dual = conformal_measure_dual(&shift, &pot, &lambda, &DualParams::default())?;

    let s = State(0);
    println!("2-cylinder masses (product closed form p_i p_j):");
    println!("  word    series           dual             p_i p_j");
    for (word, mass) in series.entries(s) {
        let product = probs[word[0]] * probs[word[1]];
        println!(
            "  [{}{}]    {:.12}   {:.12}   {:.12}",
            word[0],
            word[1],
            mass,
            dual.mass(s, word),
            product
        );
    }
    println!("total variation between methods: {:.3e}", series.tv_distance(&dual, s));

    let res = conformality_residual(&shift, &pot, &lambda, &dual);
    println!(
        "conformality residual: {:.3e} (witness state {}, pair {:?})",
        res.max_residual, res.witness_state, res.witness_pair
    );
    Ok(())
}
