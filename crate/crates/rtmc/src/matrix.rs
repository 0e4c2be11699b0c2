//! Random Perron–Frobenius theory for nonnegative matrix cocycles, and
//! stationary distributions of Markov chains in random environments.
//!
//! A cocycle assigns to every base state `ω` a nonnegative matrix `A^ω` of
//! shape `ℓ_ω × ℓ_θω`; products `A^ω A^{θω} ⋯` follow the base orbit. The
//! spectral data is gauged the same way the transfer-operator pipeline
//! gauges its conformal measures: `μ^ω` stochastic with
//! `A^ω μ^{θω} = λ(ω) μ^ω`, and `h^ω A^ω = λ(ω) h^{θω}` scaled so that
//! `⟨h^ω, μ^ω⟩ = 1` — with that pairing the left relation holds with the
//! *same* `λ(ω)` automatically. Under this gauge `λ(ω)` matches the random
//! Ruelle eigenvalue of the signum shift with the entrywise-log potential,
//! and the base average of `log λ` is the relative Gurevič pressure.

use crate::base::{BaseSystem, State};
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::shift::{verify_bip, Alphabet, BipCertificate, BipReport, RandomShift};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random family of nonnegative matrices over a finite base.
#[derive(Clone, Debug)]
pub struct MatrixCocycle {
    base: BaseSystem,
    mats: Vec<Vec<Vec<f64>>>,
}

impl MatrixCocycle {
    /// Validate shapes (`A^ω` is `ℓ_ω × ℓ_θω`), nonnegativity, and the
    /// no-zero-row invariant shared with the shift layer.
    pub fn new(base: BaseSystem, mats: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if mats.len() != base.len() {
            return Err(Error::Config(format!(
                "expected one matrix per base state ({}), got {}",
                base.len(),
                mats.len()
            )));
        }
        let rows: Vec<usize> = mats.iter().map(|m| m.len()).collect();
        if rows.iter().any(|&r| r == 0) {
            return Err(Error::Config("matrices must have at least one row".into()));
        }
        for s in base.states() {
            let next = base.advance(s, 1);
            let m = &mats[s.0];
            for (i, row) in m.iter().enumerate() {
                if row.len() != rows[next.0] {
                    return Err(Error::Config(format!(
                        "matrix at state {} must have {} columns (fiber at θω), row {i} has {}",
                        s.0,
                        rows[next.0],
                        row.len()
                    )));
                }
                if row.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(Error::Config(format!(
                        "matrix at state {} row {i} has a negative or non-finite entry",
                        s.0
                    )));
                }
                if row.iter().all(|x| *x == 0.0) {
                    return Err(Error::ZeroRow { state: s.0, row: i });
                }
            }
        }
        Ok(MatrixCocycle { base, mats })
    }

    pub fn base(&self) -> &BaseSystem {
        &self.base
    }

    pub fn mat(&self, s: State) -> &[Vec<f64>] {
        &self.mats[s.0]
    }

    pub fn rows(&self, s: State) -> usize {
        self.mats[s.0].len()
    }

    pub fn is_row_stochastic(&self, tol: f64) -> bool {
        self.base.states().all(|s| {
            self.mats[s.0]
                .iter()
                .all(|row| (row.iter().sum::<f64>() - 1.0).abs() <= tol)
        })
    }

    /// The underlying topological structure: `α_{ij}(ω) = 1` iff `A^ω_{ij} > 0`.
    pub fn signum_shift(&self) -> Result<RandomShift> {
        let sizes: Vec<usize> = self.base.states().map(|s| self.rows(s)).collect();
        let adj: Vec<Vec<Vec<bool>>> = self
            .mats
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(|x| *x > 0.0).collect()).collect())
            .collect();
        RandomShift::new(
            self.base.clone(),
            Alphabet::Finite(sizes),
            crate::shift::AdjacencyRule::Explicit(adj),
            0,
        )
    }

    /// Entrywise-log potential on the signum shift.
    pub fn log_potential(&self, shift: &RandomShift) -> Result<Potential> {
        Potential::matrix_log(shift, &self.mats)
    }

    /// The transposed cocycle on the reversed base, `B_σ = (A^{θ^{-1}σ})^T`.
    /// For a row-stochastic cocycle this is the time reversal: its conformal
    /// one-cylinder masses are the stationary distributions.
    pub fn transpose_reversed(&self) -> Result<MatrixCocycle> {
        let rev = self.base.reversed();
        let mats = rev
            .states()
            .map(|s| {
                let src = &self.mats[self.base.advance(s, -1).0];
                let r = src.len();
                let c = src[0].len();
                (0..c).map(|j| (0..r).map(|i| src[i][j]).collect()).collect()
            })
            .collect();
        MatrixCocycle::new(rev, mats)
    }

    /// Rescale each matrix by a per-state factor (spectral data is
    /// covariant: `λ(ω)` scales by `c_ω`, the eigenvector families do not).
    pub fn scaled(&self, factors: &[f64]) -> Result<MatrixCocycle> {
        if factors.len() != self.base.len() || factors.iter().any(|c| !(*c > 0.0)) {
            return Err(Error::Config("need one positive factor per state".into()));
        }
        let mats = self
            .mats
            .iter()
            .zip(factors)
            .map(|(m, c)| m.iter().map(|row| row.iter().map(|x| x * c).collect()).collect())
            .collect();
        MatrixCocycle::new(self.base.clone(), mats)
    }

    /// Product around one full base period starting at `s`.
    pub fn cycle_product(&self, s: State) -> Vec<Vec<f64>> {
        let mut prod: Vec<Vec<f64>> = (0..self.rows(s))
            .map(|i| (0..self.rows(s)).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        for k in 0..self.base.len() {
            let at = self.base.advance(s, k as i64);
            prod = mat_mul(&prod, &self.mats[at.0]);
        }
        prod
    }
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

/// Summability/BIP screening for a finite matrix cocycle: summability is
/// witnessed by the finite row sums, and the certificate routes through
/// entrywise-positive columns (big images) and rows (big preimages) when
/// they exist, falling back to whole fibers, which are finite.
pub fn check_summable_bip(coc: &MatrixCocycle) -> Result<(BipCertificate, BipReport)> {
    let shift = coc.signum_shift()?;
    let base = coc.base();
    let mut i_bi = Vec::with_capacity(base.len());
    let mut i_bp = Vec::with_capacity(base.len());
    for s in base.states() {
        let prev = base.advance(s, -1);
        let m_prev = coc.mat(prev);
        // columns of A^{θ⁻¹σ} that every symbol feeds into
        let cols = coc.rows(s);
        let full_cols: Vec<usize> =
            (0..cols).filter(|&b| m_prev.iter().all(|row| row[b] > 0.0)).collect();
        i_bi.push(if full_cols.is_empty() { (0..cols).collect() } else { full_cols });
        // rows of A^{θ⁻¹σ} that feed into every symbol
        let full_rows: Vec<usize> = (0..m_prev.len())
            .filter(|&b| m_prev[b].iter().all(|x| *x > 0.0))
            .collect();
        i_bp.push(if full_rows.is_empty() { (0..m_prev.len()).collect() } else { full_rows });
    }
    let cert = BipCertificate {
        omega_bi: crate::base::StateSet::full(base.len()),
        omega_bp: crate::base::StateSet::full(base.len()),
        i_bi,
        i_bp,
    };
    let report = verify_bip(&shift, &cert)?;
    Ok((cert, report))
}

/// Random Perron–Frobenius data for a cocycle.
#[derive(Clone, Debug)]
pub struct PFTriple {
    /// `log λ(ω)` in the conformal gauge.
    pub log_lambda: Vec<f64>,
    /// Right family, stochastic per state: `A^ω μ^{θω} = λ(ω) μ^ω`.
    pub mu: Vec<Vec<f64>>,
    /// Left family, paired to one: `h^ω A^ω = λ(ω) h^{θω}`, `⟨h^ω, μ^ω⟩ = 1`.
    pub h: Vec<Vec<f64>>,
    pub sweeps: usize,
    /// Worst relative defect of the two eigen-relations.
    pub residual: f64,
}

impl PFTriple {
    pub fn lambda(&self, s: State) -> f64 {
        self.log_lambda[s.0].exp()
    }

    /// Base average of `log λ` — the relative Gurevič pressure of the
    /// entrywise-log potential.
    pub fn average_log_lambda(&self, base: &BaseSystem) -> f64 {
        base.average(|s| self.log_lambda[s.0]).expect("finite by construction")
    }
}

fn simplex_init(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| -rng.gen_range(1e-6..1.0f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Power iteration along the base orbit. `seed` randomizes the starting
/// families (uniform start when absent); the fixed point is unique either
/// way, which restart tests confirm.
pub fn random_pf(
    coc: &MatrixCocycle,
    tol: f64,
    max_sweeps: usize,
    seed: Option<u64>,
) -> Result<PFTriple> {
    let base = coc.base();
    let p = base.len();
    let mut mu: Vec<Vec<f64>> = match seed {
        None => base.states().map(|s| vec![1.0 / coc.rows(s) as f64; coc.rows(s)]).collect(),
        Some(sd) => {
            let mut rng = ChaCha8Rng::seed_from_u64(sd);
            base.states().map(|s| simplex_init(&mut rng, coc.rows(s))).collect()
        }
    };
    let mut h: Vec<Vec<f64>> = match seed {
        None => base.states().map(|s| vec![1.0; coc.rows(s)]).collect(),
        Some(sd) => {
            let mut rng = ChaCha8Rng::seed_from_u64(sd ^ 0x9e37_79b9_7f4a_7c15);
            base.states()
                .map(|s| simplex_init(&mut rng, coc.rows(s)).iter().map(|x| x * coc.rows(s) as f64).collect())
                .collect()
        }
    };
    let mut log_lambda = vec![0.0; p];
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(Error::NoConvergence(max_sweeps));
        }
        let mut step = 0.0f64;
        // right vectors: μ^ω ← A^ω μ^{θω} / ‖·‖₁
        let mut new_mu = Vec::with_capacity(p);
        for s in base.states() {
            let next = base.advance(s, 1);
            let v = mat_vec(&coc.mats[s.0], &mu[next.0]);
            let total: f64 = v.iter().sum();
            if !(total > 0.0 && total.is_finite()) {
                return Err(Error::NonFinite);
            }
            log_lambda[s.0] = total.ln();
            let v: Vec<f64> = v.into_iter().map(|x| x / total).collect();
            for (a, b) in v.iter().zip(&mu[s.0]) {
                step = step.max((a - b).abs());
            }
            new_mu.push(v);
        }
        // left vectors: h^{θω} ← h^ω A^ω / ‖·‖₁, written Jacobi-style
        let mut new_h = h.clone();
        for s in base.states() {
            let next = base.advance(s, 1);
            let v = vec_mat(&h[s.0], &coc.mats[s.0]);
            let total: f64 = v.iter().sum();
            if !(total > 0.0 && total.is_finite()) {
                return Err(Error::NonFinite);
            }
            let scale = coc.rows(next) as f64 / total;
            let v: Vec<f64> = v.into_iter().map(|x| x * scale).collect();
            for (a, b) in v.iter().zip(&h[next.0]) {
                step = step.max((a - b).abs());
            }
            new_h[next.0] = v;
        }
        mu = new_mu;
        h = new_h;
        if step < tol {
            break;
        }
    }
    // gauge the left family: ⟨h^ω, μ^ω⟩ = 1
    for s in base.states() {
        let pair: f64 = h[s.0].iter().zip(&mu[s.0]).map(|(a, b)| a * b).sum();
        if !(pair > 0.0) {
            return Err(Error::NonFinite);
        }
        h[s.0].iter_mut().for_each(|x| *x /= pair);
    }
    // relative defects of both eigen-relations under the final gauge
    let mut residual = 0.0f64;
    for s in base.states() {
        let next = base.advance(s, 1);
        let lam = log_lambda[s.0].exp();
        let right = mat_vec(&coc.mats[s.0], &mu[next.0]);
        for (i, r) in right.iter().enumerate() {
            residual = residual.max((r - lam * mu[s.0][i]).abs() / lam);
        }
        let left = vec_mat(&h[s.0], &coc.mats[s.0]);
        let hsup = h[next.0].iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        for (j, l) in left.iter().enumerate() {
            residual = residual.max((l - lam * h[next.0][j]).abs() / (lam * hsup));
        }
    }
    Ok(PFTriple { log_lambda, mu, h, sweeps, residual })
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn vec_mat(v: &[f64], m: &[Vec<f64>]) -> Vec<f64> {
    let cols = m[0].len();
    (0..cols).map(|j| m.iter().zip(v).map(|(row, x)| row[j] * x).sum()).collect()
}

/// Sup-norm defects of the normalized backward products against the
/// rank-one limit `μ^ω ⊗ h^{θ^n ω}`.
pub fn backward_product_defects(
    coc: &MatrixCocycle,
    pf: &PFTriple,
    n_max: usize,
) -> Vec<(usize, f64)> {
    let base = coc.base();
    // running B_n(ω)/Λ_n(ω) per starting state
    let mut prods: Vec<Vec<Vec<f64>>> = base
        .states()
        .map(|s| {
            (0..coc.rows(s))
                .map(|i| (0..coc.rows(s)).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut worst = 0.0f64;
        for s in base.states() {
            let at = base.advance(s, n as i64 - 1);
            let next = base.advance(s, n as i64);
            prods[s.0] = mat_mul(&prods[s.0], &coc.mats[at.0]);
            let scale = (-pf.log_lambda[at.0]).exp();
            prods[s.0].iter_mut().for_each(|row| row.iter_mut().for_each(|x| *x *= scale));
            for (i, row) in prods[s.0].iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    worst = worst.max((x - pf.mu[s.0][i] * pf.h[next.0][j]).abs());
                }
            }
        }
        out.push((n, worst));
    }
    out
}

/// Stationary distributions `π^{θω} = π^ω P^ω` of a Markov chain in a
/// random environment (row-stochastic cocycle required).
pub fn stationary_distribution(
    coc: &MatrixCocycle,
    tol: f64,
    max_sweeps: usize,
    seed: Option<u64>,
) -> Result<Vec<Vec<f64>>> {
    let base = coc.base();
    for s in base.states() {
        for (i, row) in coc.mat(s).iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::NotStochastic { state: s.0, row: i, sum });
            }
        }
    }
    let mut pi: Vec<Vec<f64>> = match seed {
        None => base.states().map(|s| vec![1.0 / coc.rows(s) as f64; coc.rows(s)]).collect(),
        Some(sd) => {
            let mut rng = ChaCha8Rng::seed_from_u64(sd);
            base.states().map(|s| simplex_init(&mut rng, coc.rows(s))).collect()
        }
    };
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(Error::NoConvergence(max_sweeps));
        }
        let mut step = 0.0f64;
        let mut new_pi = pi.clone();
        for s in base.states() {
            let next = base.advance(s, 1);
            let v = vec_mat(&pi[s.0], &coc.mats[s.0]);
            let total: f64 = v.iter().sum();
            let v: Vec<f64> = v.into_iter().map(|x| x / total).collect();
            for (a, b) in v.iter().zip(&pi[next.0]) {
                step = step.max((a - b).abs());
            }
            new_pi[next.0] = v;
        }
        pi = new_pi;
        if step < tol {
            return Ok(pi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{
        conformal_measure_dual, eigenfunction, lambda_quotient, power_series, DualParams,
        SeriesParams,
    };
    use nalgebra::DMatrix;

    const GOLDEN: f64 = 1.618033988749894848;

    fn gm_cocycle() -> MatrixCocycle {
        MatrixCocycle::new(
            BaseSystem::cyclic(1),
            vec![vec![vec![1.0, 1.0], vec![1.0, 0.0]]],
        )
        .unwrap()
    }

    fn p2_cocycle() -> MatrixCocycle {
        MatrixCocycle::new(
            BaseSystem::cyclic(2),
            vec![
                vec![vec![1.0, 1.0], vec![1.0, 0.0]],
                vec![vec![1.0, 1.0], vec![0.0, 1.0]],
            ],
        )
        .unwrap()
    }

    fn ds3_cocycle() -> MatrixCocycle {
        MatrixCocycle::new(
            BaseSystem::cyclic(2),
            vec![
                vec![
                    vec![0.5, 0.3, 0.2],
                    vec![0.2, 0.5, 0.3],
                    vec![0.3, 0.2, 0.5],
                ],
                vec![
                    vec![0.6, 0.2, 0.2],
                    vec![0.2, 0.6, 0.2],
                    vec![0.2, 0.2, 0.6],
                ],
            ],
        )
        .unwrap()
    }

    fn p2_stochastic() -> MatrixCocycle {
        MatrixCocycle::new(
            BaseSystem::cyclic(2),
            vec![
                vec![vec![0.9, 0.1], vec![0.2, 0.8]],
                vec![vec![0.5, 0.5], vec![0.3, 0.7]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn golden_mean_matrix_has_golden_spectra() {
        let coc = gm_cocycle();
        let pf = random_pf(&coc, 1e-15, 100_000, None).unwrap();
        assert!((pf.lambda(State(0)) - GOLDEN).abs() < 1e-12);
        // μ stochastic: (1/φ, 1/φ²)
        assert!((pf.mu[0][0] - 1.0 / GOLDEN).abs() < 1e-12);
        assert!((pf.mu[0][1] - 1.0 / GOLDEN.powi(2)).abs() < 1e-12);
        // h direction (φ, 1), paired to one
        assert!((pf.h[0][0] / pf.h[0][1] - GOLDEN).abs() < 1e-11);
        let pair: f64 = pf.h[0].iter().zip(&pf.mu[0]).map(|(a, b)| a * b).sum();
        assert!((pair - 1.0).abs() < 1e-12);
        assert!(pf.residual < 1e-12);
        assert!((pf.average_log_lambda(coc.base()) - GOLDEN.ln()).abs() < 1e-12);
    }

    #[test]
    fn doubly_stochastic_families_are_flat() {
        let coc = ds3_cocycle();
        let pf = random_pf(&coc, 1e-15, 100_000, None).unwrap();
        for s in coc.base().states() {
            assert!(pf.log_lambda[s.0].abs() < 1e-13);
            for i in 0..3 {
                assert!((pf.mu[s.0][i] - 1.0 / 3.0).abs() < 1e-13);
                assert!((pf.h[s.0][i] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn period_two_cycle_product_matches_the_spectral_radius() {
        let coc = p2_cocycle();
        let pf = random_pf(&coc, 1e-15, 100_000, None).unwrap();
        let rho = 1.0 + 2.0f64.sqrt();
        let prod = pf.lambda(State(0)) * pf.lambda(State(1));
        assert!((prod - rho).abs() < 1e-12, "cycle product {prod}");
        assert!((pf.average_log_lambda(coc.base()) - 0.5 * rho.ln()).abs() < 1e-13);
        // brute cycle product has the same spectral radius
        let m = coc.cycle_product(State(0));
        assert_eq!(m, vec![vec![1.0, 2.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn single_matrix_perron_root_is_the_classical_one() {
        let coc = MatrixCocycle::new(
            BaseSystem::cyclic(1),
            vec![vec![vec![1.0, 2.0], vec![3.0, 4.0]]],
        )
        .unwrap();
        let pf = random_pf(&coc, 1e-15, 100_000, None).unwrap();
        let expect = (5.0 + 33.0f64.sqrt()) / 2.0;
        assert!((pf.lambda(State(0)) - expect).abs() < 1e-12);
    }

    #[test]
    fn spectra_are_covariant_under_per_state_scaling() {
        let coc = p2_cocycle();
        let pf = random_pf(&coc, 1e-15, 100_000, None).unwrap();
        let scaled = coc.scaled(&[2.0, 0.5]).unwrap();
        let pf2 = random_pf(&scaled, 1e-15, 100_000, None).unwrap();
        assert!((pf2.lambda(State(0)) - 2.0 * pf.lambda(State(0))).abs() < 1e-11);
        assert!((pf2.lambda(State(1)) - 0.5 * pf.lambda(State(1))).abs() < 1e-11);
        for s in coc.base().states() {
            for i in 0..2 {
                assert!((pf2.mu[s.0][i] - pf.mu[s.0][i]).abs() < 1e-12);
                assert!((pf2.h[s.0][i] - pf.h[s.0][i]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn seeded_restarts_land_on_the_same_fixed_point() {
        let coc = p2_cocycle();
        let a = random_pf(&coc, 1e-15, 100_000, Some(17)).unwrap();
        let b = random_pf(&coc, 1e-15, 100_000, Some(9001)).unwrap();
        for s in coc.base().states() {
            assert!((a.log_lambda[s.0] - b.log_lambda[s.0]).abs() < 1e-12);
            for i in 0..2 {
                assert!((a.mu[s.0][i] - b.mu[s.0][i]).abs() < 1e-12);
                assert!((a.h[s.0][i] - b.h[s.0][i]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn backward_products_collapse_to_rank_one() {
        let coc = p2_cocycle();
        let pf = random_pf(&coc, 1e-15, 100_000, None).unwrap();
        let defects = backward_product_defects(&coc, &pf, 60);
        // defect decays geometrically at the second-eigenvalue ratio
        assert!(defects[0].1 > 1e-3);
        assert!(defects.last().unwrap().1 < 1e-12);
        for w in defects.windows(2) {
            // monotone up to the float floor
            assert!(w[1].1 <= w[0].1 * 1.01 + 1e-14);
        }
    }

    #[test]
    fn stationary_distribution_has_the_frozen_closed_form() {
        let coc = p2_stochastic();
        assert!(coc.is_row_stochastic(1e-12));
        let pi = stationary_distribution(&coc, 1e-15, 100_000, None).unwrap();
        // π^{ω0}(I − P^{ω0}P^{ω1}) = 0 with P products [[.48,.52],[.34,.66]]
        // gives π^{ω0} = (17/43, 26/43) and π^{ω1} = π^{ω0} P^{ω0}
        assert!((pi[0][0] - 17.0 / 43.0).abs() < 1e-12);
        assert!((pi[0][1] - 26.0 / 43.0).abs() < 1e-12);
        assert!((pi[1][0] - 41.0 / 86.0).abs() < 1e-12);
        assert!((pi[1][1] - 45.0 / 86.0).abs() < 1e-12);
        // seeded restarts agree
        let pa = stationary_distribution(&coc, 1e-15, 100_000, Some(3)).unwrap();
        let pb = stationary_distribution(&coc, 1e-15, 100_000, Some(77)).unwrap();
        for s in 0..2 {
            for i in 0..2 {
                assert!((pa[s][i] - pb[s][i]).abs() < 1e-8);
                assert!((pa[s][i] - pi[s][i]).abs() < 1e-8);
            }
        }
        // the left-eigenvalue relation: stationarity means λ ≡ 1 in the
        // matrix gauge sense Σ π^ω P^ω = 1
        let uniform = ds3_cocycle();
        let pu = stationary_distribution(&uniform, 1e-15, 100_000, None).unwrap();
        for s in 0..2 {
            for i in 0..3 {
                assert!((pu[s][i] - 1.0 / 3.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn non_stochastic_input_is_rejected() {
        let coc = gm_cocycle();
        match stationary_distribution(&coc, 1e-15, 10, None) {
            Err(Error::NotStochastic { state: 0, row: 0, sum }) => {
                assert!((sum - 2.0).abs() < 1e-15)
            }
            other => panic!("expected NotStochastic, got {other:?}"),
        }
    }

    #[test]
    fn zero_rows_are_rejected_at_construction() {
        let err = MatrixCocycle::new(
            BaseSystem::cyclic(1),
            vec![vec![vec![1.0, 1.0], vec![0.0, 0.0]]],
        )
        .unwrap_err();
        match err {
            Error::ZeroRow { state: 0, row: 1 } => {}
            other => panic!("expected ZeroRow, got {other:?}"),
        }
    }

    #[test]
    fn bip_certificates_route_through_positive_lines() {
        let coc = gm_cocycle();
        let (cert, rep) = check_summable_bip(&coc).unwrap();
        assert!(rep.holds());
        // column 0 of the golden-mean matrix is positive, row 0 is positive
        assert_eq!(cert.i_bi[0], vec![0]);
        assert_eq!(cert.i_bp[0], vec![0]);

        let coc = ds3_cocycle();
        let (cert, rep) = check_summable_bip(&coc).unwrap();
        assert!(rep.holds());
        assert_eq!(cert.i_bi[0], vec![0, 1, 2]);
        assert_eq!(cert.i_bp[0], vec![0, 1, 2]);
    }

    #[test]
    fn matrix_gauge_agrees_with_the_transfer_operator_gauge() {
        // same object two ways: matrix PF data vs the conformal pipeline on
        // the signum shift with the entrywise-log potential
        let coc = p2_cocycle();
        let pf = random_pf(&coc, 1e-15, 100_000, None).unwrap();
        let shift = coc.signum_shift().unwrap();
        let pot = coc.log_potential(&shift).unwrap();
        let log_p = pf.average_log_lambda(coc.base());
        let params = SeriesParams { n_max: 200_000, j_max: 14, log_pressure: log_p, target: 0 };
        let data = power_series(&shift, &pot, &params).unwrap();
        let lam = lambda_quotient(&shift, &data).unwrap();
        for s in coc.base().states() {
            assert!(
                (lam.log_lambda[s.0] - pf.log_lambda[s.0]).abs() < 1e-7,
                "state {}: {} vs {}",
                s.0,
                lam.log_lambda[s.0],
                pf.log_lambda[s.0]
            );
        }
        let mu = conformal_measure_dual(&shift, &pot, &lam, &DualParams::default()).unwrap();
        for s in coc.base().states() {
            for i in 0..2 {
                assert!((mu.one_cylinder(s, i) - pf.mu[s.0][i]).abs() < 1e-8);
            }
        }
        let eig = eigenfunction(&shift, &pot, &lam, &mu, 1e-13, 100_000).unwrap();
        for s in coc.base().states() {
            for i in 0..2 {
                assert!((eig.h.value(s, &[i]) - pf.h[s.0][i]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn time_reversal_carries_stationarity_to_conformality() {
        let coc = p2_stochastic();
        let pi = stationary_distribution(&coc, 1e-15, 100_000, None).unwrap();
        let rev = coc.transpose_reversed().unwrap();
        let shift = rev.signum_shift().unwrap();
        let pot = rev.log_potential(&shift).unwrap();
        // row-stochastic forward chain: reversed cocycle has pressure zero
        let params = SeriesParams { n_max: 200_000, j_max: 14, log_pressure: 0.0, target: 0 };
        let data = power_series(&shift, &pot, &params).unwrap();
        let lam = lambda_quotient(&shift, &data).unwrap();
        for s in rev.base().states() {
            assert!(lam.log_lambda[s.0].abs() < 1e-7, "λ'({}) = {}", s.0, lam.lambda(s));
        }
        let mu = conformal_measure_dual(&shift, &pot, &lam, &DualParams::default()).unwrap();
        // conformal one-cylinder masses are the stationary masses
        for s in rev.base().states() {
            for i in 0..2 {
                assert!(
                    (mu.one_cylinder(s, i) - pi[s.0][i]).abs() < 1e-8,
                    "state {} symbol {i}",
                    s.0
                );
            }
        }
        // depth-2 masses are reversed transition products:
        // μ_σ([i j]) = π^{θ⁻¹σ}_j P^{θ⁻¹σ}_{j i}
        for s in rev.base().states() {
            let fwd_state = coc.base().advance(s, -1);
            let pmat = coc.mat(fwd_state);
            for i in 0..2 {
                for j in 0..2 {
                    let expect = pi[fwd_state.0][j] * pmat[j][i];
                    assert!(
                        (mu.mass(s, &[i, j]) - expect).abs() < 1e-8,
                        "state {} word [{i}{j}]",
                        s.0
                    );
                }
            }
        }
        // the eigenfunction is flat: row sums of the reversed cocycle pair
        // with stationarity
        let eig = eigenfunction(&shift, &pot, &lam, &mu, 1e-13, 100_000).unwrap();
        for s in rev.base().states() {
            for i in 0..2 {
                assert!((eig.h.value(s, &[i]) - 1.0).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn random_cocycles_match_the_dense_eigensolver() {
        // oracle: spectral radius of the cycle product from a dense Schur
        // decomposition, and the dominant eigenvector from a pinned solve
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0CA);
        for trial in 0..100 {
            let p = 1 + (trial % 3);
            let sizes: Vec<usize> = (0..p).map(|_| rng.gen_range(2..=6usize)).collect();
            let base = BaseSystem::cyclic(p);
            let mats: Vec<Vec<Vec<f64>>> = (0..p)
                .map(|k| {
                    let rows = sizes[k];
                    let cols = sizes[(k + 1) % p];
                    (0..rows)
                        .map(|_| (0..cols).map(|_| rng.gen_range(0.1..2.0f64)).collect())
                        .collect()
                })
                .collect();
            let coc = MatrixCocycle::new(base, mats).unwrap();
            let pf = random_pf(&coc, 1e-15, 200_000, None).unwrap();

            let m = coc.cycle_product(State(0));
            let n = m.len();
            let flat: Vec<f64> = m.iter().flat_map(|r| r.iter().copied()).collect();
            let dm = DMatrix::from_row_slice(n, n, &flat);
            let rho = dm
                .complex_eigenvalues()
                .iter()
                .map(|c| c.norm())
                .fold(0.0f64, f64::max);
            let ours: f64 = coc
                .base()
                .states()
                .map(|s| pf.log_lambda[s.0])
                .sum::<f64>()
                .exp();
            assert!(
                (ours - rho).abs() <= 1e-8 * rho,
                "trial {trial}: cycle eigenvalue {ours} vs Schur {rho}"
            );

            // pinned linear solve for the dominant eigenvector of M
            let pin = pf.mu[0]
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            let mut shifted = dm.clone();
            for i in 0..n {
                shifted[(i, i)] -= rho;
            }
            for j in 0..n {
                shifted[(pin, j)] = if j == pin { 1.0 } else { 0.0 };
            }
            let mut rhs = nalgebra::DVector::zeros(n);
            rhs[pin] = pf.mu[0][pin];
            if let Some(v) = shifted.lu().solve(&rhs) {
                for i in 0..n {
                    assert!(
                        (v[i] - pf.mu[0][i]).abs() < 1e-6,
                        "trial {trial}: eigenvector coordinate {i}: {} vs {}",
                        v[i],
                        pf.mu[0][i]
                    );
                }
            }
        }
    }
}
