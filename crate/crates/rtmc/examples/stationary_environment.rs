//! Stationary distributions of a Markov chain in a random environment:
//! stochastic vectors π^ω with π^ω P^ω = π^{θω}, here over a period-2
//! environment with rational closed forms.
//!
//! Run with: cargo run --example stationary_environment

use rtmc::base::State;
use rtmc::config::fixture;
use rtmc::matrix::{random_pf, stationary_distribution};

fn main() -> rtmc::error::Result<()> {
    let config = fixture("P2-STOCHASTIC")?;
    let coc = config.build_cocycle()?.expect("fixture ships matrices");

    let pi = stationary_distribution(&coc, 1e-14, 100_000, None)?;
    println!("stationary family (closed forms 17/43, 26/43 and 41/86, 45/86):");
    for s in coc.base().states() {
        println!("  π^ω{} = {:?}", s.0, pi[s.0].iter().map(|x| (x * 1e12).round() / 1e12).collect::<Vec<_>>());
    }
    println!("  17/43 = {:.12}   41/86 = {:.12}", 17.0 / 43.0, 41.0 / 86.0);

    // Stationarity defect, pushed through one environment step.
    let mut defect = 0.0f64;
    for s in coc.base().states() {
        let next = coc.base().advance(s, 1);
        let mat = coc.mat(s);
        for j in 0..pi[next.0].len() {
            let pushed: f64 = (0..pi[s.0].len()).map(|i| pi[s.0][i] * mat[i][j]).sum();
            defect = defect.max((pushed - pi[next.0][j]).abs());
        }
    }
    println!("max |π^ω P^ω − π^θω| = {defect:.3e}");

    // On a row-stochastic cocycle the top exponent vanishes: λ ≡ 1.
    let pf = random_pf(&coc, 1e-14, 100_000, None)?;
    println!(
        "top eigenvalues λ(ω0) = {:.12}, λ(ω1) = {:.12}",
        pf.lambda(State(0)),
        pf.lambda(State(1))
    );

    // The doubly stochastic pair goes one further: uniform π exactly.
    let ds3 = fixture("DS3")?.build_cocycle()?.expect("fixture ships matrices");
    let uniform = stationary_distribution(&ds3, 1e-14, 100_000, None)?;
    println!("\nDS3 stationary family (uniform 1/3):");
    for s in ds3.base().states() {
        println!("  π^ω{} = {:?}", s.0, uniform[s.0].iter().map(|x| (x * 1e12).round() / 1e12).collect::<Vec<_>>());
    }
    Ok(())
}
