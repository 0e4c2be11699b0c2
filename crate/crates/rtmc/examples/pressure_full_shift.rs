//! Gurevič pressure on the full 2-shift, where everything has a closed form:
//! P = log 2 for φ ≡ 0, and P = 0 once the weights are normalized Bernoulli
//! probabilities.
//!
//! Run with: cargo run --example pressure_full_shift

use rtmc::base::{BaseSystem, State};
use rtmc::potential::Potential;
use rtmc::shift::{AdjacencyRule, Alphabet, RandomShift};
use rtmc::transfer::{pressure, PartitionTables, PressureParams};

fn main() -> rtmc::error::Result<()> {
    // One environment, two symbols, every transition allowed.
    let base = BaseSystem::cyclic(1);
    let shift = RandomShift::new(base, Alphabet::Finite(vec![2]), AdjacencyRule::Full, 0)?;

    let flat = Potential::zero(&shift);
    let bernoulli = Potential::bernoulli(&shift, &[0.3, 0.7])?;

    for (name, pot, closed) in [
        ("zero potential", &flat, std::f64::consts::LN_2),
        ("bernoulli(0.3, 0.7)", &bernoulli, 0.0),
    ] {
        let tables = PartitionTables::build(&shift, pot, 0, 40)?;
        let params = PressureParams { n_max: 40, ..PressureParams::default() };
        let est = pressure(&shift, &tables, State(0), &params)?;
        println!("{name}:");
        for row in est.rows.iter().rev().take(3).rev() {
            println!("  n = {:2}   log Z_n / n = {:+.12}", row.n, row.log_z_over_n);
        }
        println!("  estimate   {:+.12}  (quotient gap {:.2e})", est.value, est.gap);
        println!("  closed form {closed:+.12}  (error {:.2e})", (est.value - closed).abs());
    }
    Ok(())
}
