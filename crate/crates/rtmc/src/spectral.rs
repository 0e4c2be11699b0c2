//! Random Ruelle spectral theory at one radius schedule: induced power
//! series, eigenvalue quotients, conformal measures, eigenfunctions, and
//! the Gibbs / recurrence / exactness diagnostics built from them.
//!
//! The central objects are the truncated series
//! `P_ω(s) = Σ_{n=1}^N s^n 𝒵_n^ω` and their anchored refinements
//! `Q_ω(s)[j] = Σ_{n=1}^N s^n (L_ω^n 1_{[j]})(ξ_{θ^n ω})`, evaluated on the
//! schedule `s_j = (1 − 2^{-j}) e^{-P̂}`. Two facts make them reliable at
//! desk scale: the term-wise comparison
//! `s·m_ω (1 + P_θω^{≤N-1}) ≤ P_ω^{≤N} ≤ s·M_ω (1 + P_θω^{≤N-1})`
//! holds *exactly* for the truncated sums (the index sets correspond one to
//! one), so it is asserted hard at every schedule point; and the quotient
//! `P_ω/P_θω → s λ(ω)` has error linear in `2^{-j}`, which one Richardson
//! step across the last two schedule points removes while preserving the
//! exact telescoping of the quotients around the base cycle.

use crate::base::{BaseSystem, State};
use crate::error::{Error, Result};
use crate::numerics::{log_add, ls_slope};
use crate::potential::{PhiMode, Potential};
use crate::shift::{BipCertificate, RandomShift};
use crate::transfer::{ruelle_apply, AnchorFamily, CylinderFunction, PartitionTables};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Controls for the streaming series engine.
#[derive(Clone, Debug)]
pub struct SeriesParams {
    /// Series truncation horizon N.
    pub n_max: usize,
    /// Number of schedule points; the last is `s = (1 − 2^{-j_max}) e^{-P̂}`.
    pub j_max: usize,
    /// Pressure estimate fixing the critical radius.
    pub log_pressure: f64,
    /// Anchor root symbol.
    pub target: usize,
}

impl SeriesParams {
    pub fn new(log_pressure: f64) -> Self {
        SeriesParams { n_max: 600_000, j_max: 16, log_pressure, target: 0 }
    }
}

/// Truncated power-series data on the radius schedule.
#[derive(Clone, Debug)]
pub struct SeriesData {
    pub schedule_log_s: Vec<f64>,
    /// `log_p[j][s]` = log P_s^{≤N}(s_j).
    pub log_p: Vec<Vec<f64>>,
    /// `log_q[j][s][sym]` = log Q, the series of anchored preimage functions.
    pub log_q: Vec<Vec<Vec<f64>>>,
    /// `log_last[j][s]` = log of the final term `s_j^N 𝒵_N^s`.
    pub log_last: Vec<Vec<f64>>,
    pub log_pressure: f64,
    pub n_max: usize,
    pub target: usize,
}

/// Stream the truncated series for every state and schedule point.
///
/// One pass over `n = 1..N` keeps the current preimage layer in linear
/// scale with a per-state log offset (the layer is sup-renormalized every
/// step), so the inner loop is a plain matrix-vector product and each
/// schedule point costs one `exp` per state and step.
pub fn power_series(shift: &RandomShift, pot: &Potential, params: &SeriesParams) -> Result<SeriesData> {
    if pot.depth() > 2 {
        return Err(Error::DepthUnsupported(pot.depth()));
    }
    let base = shift.base();
    let p = base.len();
    let anchors = AnchorFamily::rooted(shift, params.target);
    let schedule_log_s: Vec<f64> = (1..=params.j_max)
        .map(|j| (-params.log_pressure) + (1.0 - 0.5f64.powi(j as i32)).ln())
        .collect();

    // linear transition weights with inadmissible entries zeroed
    let weights: Vec<Vec<Vec<f64>>> = base
        .states()
        .map(|s| {
            let next = base.advance(s, 1);
            (0..shift.alphabet_len(s))
                .map(|j| {
                    (0..shift.alphabet_len(next))
                        .map(|k| {
                            if shift.is_adjacent(s, j, k) {
                                if pot.depth() == 1 {
                                    pot.value(s, &[j]).exp()
                                } else {
                                    pot.value(s, &[j, k]).exp()
                                }
                            } else {
                                0.0
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    // layer at n = 0: indicator of the anchor's first symbol, offset 0
    let mut layer: Vec<Vec<f64>> = base
        .states()
        .map(|s| {
            (0..shift.alphabet_len(s))
                .map(|j| if j == anchors.first(s) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let mut offset: Vec<f64> = vec![0.0; p];

    let js = schedule_log_s.len();
    let mut acc: Vec<Vec<Vec<f64>>> = (0..js)
        .map(|_| base.states().map(|s| vec![0.0; shift.alphabet_len(s)]).collect())
        .collect();
    let mut log_last: Vec<Vec<f64>> = vec![vec![f64::NEG_INFINITY; p]; js];

    let mut new_layer = layer.clone();
    let mut new_offset = offset.clone();
    for n in 1..=params.n_max {
        for s in base.states() {
            let next = base.advance(s, 1);
            let w = &weights[s.0];
            let src = &layer[next.0];
            let dst = &mut new_layer[s.0];
            let mut sup = 0.0f64;
            for (j, row) in w.iter().enumerate() {
                let mut t = 0.0;
                for (k, wk) in row.iter().enumerate() {
                    t += wk * src[k];
                }
                dst[j] = t;
                sup = sup.max(t);
            }
            if sup <= 0.0 {
                return Err(Error::EmptyFiber { state: s.0, symbol: anchors.first(s) });
            }
            let inv = 1.0 / sup;
            dst.iter_mut().for_each(|x| *x *= inv);
            new_offset[s.0] = offset[next.0] + sup.ln();
        }
        std::mem::swap(&mut layer, &mut new_layer);
        std::mem::swap(&mut offset, &mut new_offset);

        let nf = n as f64;
        for (jj, ls) in schedule_log_s.iter().enumerate() {
            for s in base.states() {
                let logf = nf * ls + offset[s.0];
                let f = logf.exp();
                if f > 0.0 {
                    let a = &mut acc[jj][s.0];
                    for (sym, v) in layer[s.0].iter().enumerate() {
                        a[sym] += f * v;
                    }
                    if n == params.n_max {
                        let total: f64 = layer[s.0].iter().sum();
                        log_last[jj][s.0] = logf + total.ln();
                    }
                }
            }
        }
    }

    let mut log_p = vec![vec![f64::NEG_INFINITY; p]; js];
    let mut log_q = Vec::with_capacity(js);
    for (jj, acc_j) in acc.iter().enumerate() {
        let mut per_state = Vec::with_capacity(p);
        for s in base.states() {
            let total: f64 = acc_j[s.0].iter().sum();
            if !(total > 0.0) {
                return Err(Error::NonFinite);
            }
            log_p[jj][s.0] = total.ln();
            per_state.push(acc_j[s.0].iter().map(|x| x.ln()).collect::<Vec<f64>>());
        }
        log_q.push(per_state);
    }
    let data = SeriesData {
        schedule_log_s,
        log_p,
        log_q,
        log_last,
        log_pressure: params.log_pressure,
        n_max: params.n_max,
        target: params.target,
    };
    check_quotient_sandwich(shift, pot, &data)?;
    Ok(data)
}

/// Result of the hard term-wise comparison at every schedule point.
#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub checks: usize,
    /// Smallest margin (in log scale) by which the lower bound held.
    pub min_lower_margin: f64,
    /// Smallest margin by which the upper bound held.
    pub min_upper_margin: f64,
}

/// Assert `s·m_ω (1 + P_θω^{≤N-1}) ≤ P_ω^{≤N} ≤ s·M_ω (1 + P_θω^{≤N-1})`
/// at every state and schedule point. These hold exactly for the truncated
/// sums, so any violation beyond float slack is an error.
pub fn check_quotient_sandwich(
    shift: &RandomShift,
    pot: &Potential,
    data: &SeriesData,
) -> Result<SandwichReport> {
    let base = shift.base();
    let slack = 1e-9;
    let mut checks = 0;
    let mut min_lower = f64::INFINITY;
    let mut min_upper = f64::INFINITY;
    for (jj, ls) in data.schedule_log_s.iter().enumerate() {
        for s in base.states() {
            let next = base.advance(s, 1);
            let (m, big_m) = pot.summability_bounds(shift, s)?;
            // P_θω^{≤N-1} = P_θω^{≤N} − (last term at θω)
            let lp_next = data.log_p[jj][next.0];
            let lt_next = data.log_last[jj][next.0];
            let log_p_minus = if lt_next == f64::NEG_INFINITY {
                lp_next
            } else {
                lp_next + (-((lt_next - lp_next).exp())).ln_1p()
            };
            let log_one_plus = log_add(0.0, log_p_minus);
            let lhs = ls + m.ln() + log_one_plus;
            let rhs = ls + big_m.ln() + log_one_plus;
            let mid = data.log_p[jj][s.0];
            let lower_margin = mid - lhs;
            let upper_margin = rhs - mid;
            if lower_margin < -slack || upper_margin < -slack {
                return Err(Error::SandwichViolation(format!(
                    "state {} schedule point {} (log s = {:.6}): log P = {:.12}, bounds [{:.12}, {:.12}]",
                    s.0, jj, ls, mid, lhs, rhs
                )));
            }
            min_lower = min_lower.min(lower_margin);
            min_upper = min_upper.min(upper_margin);
            checks += 1;
        }
    }
    Ok(SandwichReport { checks, min_lower_margin: min_lower, min_upper_margin: min_upper })
}

/// Random eigenvalue estimates from the series quotients.
#[derive(Clone, Debug)]
pub struct LambdaEstimate {
    pub log_pressure: f64,
    /// Normalized logs `log λ'(ω)`; they telescope to exactly zero around
    /// the base cycle by construction.
    pub log_lambda_norm: Vec<f64>,
    /// `log λ(ω) = P̂ + log λ'(ω)`.
    pub log_lambda: Vec<f64>,
    /// Largest change between the last two schedule points (per state).
    pub quotient_gap: f64,
    /// Raw quotients per schedule point and state.
    pub quotients: Vec<Vec<f64>>,
}

impl LambdaEstimate {
    pub fn lambda(&self, s: State) -> f64 {
        self.log_lambda[s.0].exp()
    }

    /// `log Λ'_n(ω) = Σ_{k<n} log λ'(θ^k ω)` — normalized cocycle.
    pub fn log_norm_cocycle(&self, base: &BaseSystem, s: State, n: usize) -> f64 {
        (0..n).map(|k| self.log_lambda_norm[base.advance(s, k as i64).0]).sum()
    }
}

/// Matched-truncation quotients `log P_ω − log P_θω`, Richardson-
/// extrapolated across the last two schedule points.
pub fn lambda_quotient(shift: &RandomShift, data: &SeriesData) -> Result<LambdaEstimate> {
    let base = shift.base();
    let js = data.schedule_log_s.len();
    if js < 2 {
        return Err(Error::Config("schedule needs at least two points".into()));
    }
    let mut quotients = Vec::with_capacity(js);
    for jj in 0..js {
        let q: Vec<f64> = base
            .states()
            .map(|s| data.log_p[jj][s.0] - data.log_p[jj][base.advance(s, 1).0])
            .collect();
        quotients.push(q);
    }
    let top = &quotients[js - 1];
    let prev = &quotients[js - 2];
    let mut log_lambda_norm = Vec::with_capacity(base.len());
    let mut gap = 0.0f64;
    for s in base.states() {
        // one Richardson step in 2^{-j}: kills the linear truncation bias
        // and keeps the cycle telescoping exact
        let extr = 2.0 * top[s.0] - prev[s.0];
        log_lambda_norm.push(extr);
        gap = gap.max((top[s.0] - prev[s.0]).abs());
    }
    let log_lambda: Vec<f64> =
        log_lambda_norm.iter().map(|l| l + data.log_pressure).collect();
    if log_lambda.iter().any(|l| !l.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(LambdaEstimate {
        log_pressure: data.log_pressure,
        log_lambda_norm,
        log_lambda,
        quotient_gap: gap,
        quotients,
    })
}

/// A random family of measures given by masses on depth-`d` cylinders.
#[derive(Clone, Debug)]
pub struct CylinderMeasure {
    depth: usize,
    /// Per state, masses keyed by admissible words (lexicographic order).
    masses: Vec<BTreeMap<Vec<usize>, f64>>,
}

impl CylinderMeasure {
    pub fn from_masses(depth: usize, masses: Vec<BTreeMap<Vec<usize>, f64>>) -> Self {
        CylinderMeasure { depth, masses }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn mass(&self, s: State, word: &[usize]) -> f64 {
        assert_eq!(word.len(), self.depth, "mass is stored at the table depth");
        self.masses[s.0].get(word).copied().unwrap_or(0.0)
    }

    pub fn entries(&self, s: State) -> impl Iterator<Item = (&Vec<usize>, f64)> {
        self.masses[s.0].iter().map(|(k, v)| (k, *v))
    }

    /// Marginal mass of the 1-cylinder `[i]`.
    pub fn one_cylinder(&self, s: State, i: usize) -> f64 {
        self.masses[s.0]
            .range(vec![i]..)
            .take_while(|(k, _)| k[0] == i)
            .map(|(_, v)| v)
            .sum()
    }

    pub fn total(&self, s: State) -> f64 {
        self.masses[s.0].values().sum()
    }

    /// Coarser measure summing masses over the first `depth` symbols.
    pub fn marginal(&self, depth: usize) -> CylinderMeasure {
        assert!(depth >= 1 && depth <= self.depth);
        let masses = self
            .masses
            .iter()
            .map(|table| {
                let mut out: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
                for (w, v) in table {
                    *out.entry(w[..depth].to_vec()).or_insert(0.0) += v;
                }
                out
            })
            .collect();
        CylinderMeasure { depth, masses }
    }

    /// Total-variation distance at one state (tables of equal depth).
    pub fn tv_distance(&self, other: &CylinderMeasure, s: State) -> f64 {
        assert_eq!(self.depth, other.depth);
        let mut keys: Vec<&Vec<usize>> = self.masses[s.0].keys().collect();
        keys.extend(other.masses[s.0].keys());
        keys.sort();
        keys.dedup();
        0.5 * keys
            .iter()
            .map(|k| {
                (self.masses[s.0].get(*k).copied().unwrap_or(0.0)
                    - other.masses[s.0].get(*k).copied().unwrap_or(0.0))
                .abs()
            })
            .sum::<f64>()
    }

    /// Mass of a word of any length ≥ 1: shorter words marginalize, longer
    /// words extend through the conformality recursion
    /// `μ_ω([a_0 a_1 …]) = λ(ω)^{-1} e^{φ^ω(a_0 a_1)} μ_θω([a_1 …])`.
    pub fn mass_of_word(
        &self,
        shift: &RandomShift,
        pot: &Potential,
        lambda: &LambdaEstimate,
        s: State,
        word: &[usize],
    ) -> f64 {
        assert!(!word.is_empty());
        if !shift.is_admissible(s, word) {
            return 0.0;
        }
        if word.len() < self.depth {
            let mut total = 0.0;
            for (w, v) in &self.masses[s.0] {
                if w[..word.len()] == *word {
                    total += v;
                }
            }
            return total;
        }
        if word.len() == self.depth {
            return self.mass(s, word);
        }
        let next = shift.base().advance(s, 1);
        let head = pot.value(s, word);
        (head - lambda.log_lambda[s.0]).exp()
            * self.mass_of_word(shift, pot, lambda, next, &word[1..])
    }
}

/// How to compute a conformal measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConformalMethod {
    /// Normalized truncated series, Richardson-extrapolated across the last
    /// two schedule points.
    Series,
    /// Fixed point of the normalized dual operator.
    DualFixedPoint,
}

/// Controls for the dual fixed-point iteration.
#[derive(Clone, Debug)]
pub struct DualParams {
    pub depth: usize,
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for DualParams {
    fn default() -> Self {
        DualParams { depth: 2, tol: 1e-10, max_sweeps: 100_000 }
    }
}

/// Depth-2 conformal masses from the series data:
/// `μ_ω([ij]) ∝ s e^{φ^ω(ij)} (1_{[j]}(ξ_θω) + Q_θω[j])`, extrapolated and
/// normalized per state.
pub fn conformal_measure_series(
    shift: &RandomShift,
    pot: &Potential,
    data: &SeriesData,
) -> Result<CylinderMeasure> {
    if pot.depth() > 2 {
        return Err(Error::DepthUnsupported(pot.depth()));
    }
    let base = shift.base();
    let anchors = AnchorFamily::rooted(shift, data.target);
    let js = data.schedule_log_s.len();
    if js < 2 {
        return Err(Error::Config("schedule needs at least two points".into()));
    }
    let at = |jj: usize, s: State| -> Result<BTreeMap<Vec<usize>, f64>> {
        let next = base.advance(s, 1);
        let ls = data.schedule_log_s[jj];
        let mut out = BTreeMap::new();
        let mut total = 0.0;
        for i in 0..shift.alphabet_len(s) {
            for j in 0..shift.alphabet_len(next) {
                if !shift.is_adjacent(s, i, j) {
                    continue;
                }
                let phi = if pot.depth() == 1 {
                    pot.value(s, &[i])
                } else {
                    pot.value(s, &[i, j])
                };
                let tail = if anchors.first(next) == j {
                    log_add(0.0, data.log_q[jj][next.0][j])
                } else {
                    data.log_q[jj][next.0][j]
                };
                let v = (ls + phi + tail - data.log_p[jj][s.0]).exp();
                total += v;
                out.insert(vec![i, j], v);
            }
        }
        if !(total > 0.0) {
            return Err(Error::NonFinite);
        }
        out.values_mut().for_each(|v| *v /= total);
        Ok(out)
    };
    let mut masses = Vec::with_capacity(base.len());
    for s in base.states() {
        let top = at(js - 1, s)?;
        let prev = at(js - 2, s)?;
        let mut table = BTreeMap::new();
        let mut total = 0.0;
        for (w, v_top) in &top {
            let v_prev = prev.get(w).copied().unwrap_or(*v_top);
            let v = (2.0 * v_top - v_prev).max(0.0);
            total += v;
            table.insert(w.clone(), v);
        }
        if !(total > 0.0) {
            return Err(Error::NonFinite);
        }
        table.values_mut().for_each(|v| *v /= total);
        masses.push(table);
    }
    Ok(CylinderMeasure { depth: 2, masses })
}

/// Conformal masses as the fixed point of the normalized dual operator
/// `ν_ω ← λ(ω)^{-1} (L_ω)^* ν_θω` on depth-`d` tables, Jacobi sweeps with
/// per-state normalization until the step is below tolerance.
pub fn conformal_measure_dual(
    shift: &RandomShift,
    pot: &Potential,
    lambda: &LambdaEstimate,
    params: &DualParams,
) -> Result<CylinderMeasure> {
    if pot.depth() > 2 {
        return Err(Error::DepthUnsupported(pot.depth()));
    }
    // the φ window must sit inside the table word
    let d = params.depth.max(pot.depth()).max(1);
    let base = shift.base();
    // initialize uniform on admissible depth-d words
    let mut cur: Vec<BTreeMap<Vec<usize>, f64>> = Vec::with_capacity(base.len());
    for s in base.states() {
        let words = shift.admissible_words(s, d)?;
        let u = 1.0 / words.len() as f64;
        cur.push(words.into_iter().map(|w| (w.symbols, u)).collect());
    }
    let phi = |s: State, w: &[usize]| -> f64 {
        if pot.depth() == 1 {
            pot.value(s, &w[..1])
        } else {
            pot.value(s, w)
        }
    };
    for _ in 0..params.max_sweeps {
        let mut step = 0.0f64;
        let mut next_tables = Vec::with_capacity(base.len());
        for s in base.states() {
            let next = base.advance(s, 1);
            let mut table = BTreeMap::new();
            let mut total = 0.0;
            for w in cur[s.0].keys() {
                // (L_ω^* ν_θω)([w]) = e^{φ^ω(w_0 w_1 …)} ν_θω([w_1 … z] summed)
                let weight = phi(s, w).exp();
                let tail_mass: f64 = if d == 1 {
                    // depth-1 table: sum ν_θω over all successors of w_0
                    shift
                        .successors(s, w[0])
                        .map(|z| cur[next.0].get(&vec![z]).copied().unwrap_or(0.0))
                        .sum()
                } else {
                    let last = w[d - 1];
                    let last_state = base.advance(s, d as i64 - 1);
                    shift
                        .successors(last_state, last)
                        .map(|z| {
                            let mut key = w[1..].to_vec();
                            key.push(z);
                            cur[next.0].get(&key).copied().unwrap_or(0.0)
                        })
                        .sum()
                };
                let v = weight * tail_mass / lambda.lambda(s);
                total += v;
                table.insert(w.clone(), v);
            }
            if !(total > 0.0) {
                return Err(Error::NonFinite);
            }
            table.values_mut().for_each(|v| *v /= total);
            for (w, v) in &table {
                step = step.max((v - cur[s.0].get(w).copied().unwrap_or(0.0)).abs());
            }
            next_tables.push(table);
        }
        cur = next_tables;
        if step < params.tol {
            return Ok(CylinderMeasure { depth: d, masses: cur });
        }
    }
    Err(Error::NoConvergence(params.max_sweeps))
}

pub fn conformal_measure(
    shift: &RandomShift,
    pot: &Potential,
    lambda: &LambdaEstimate,
    data: Option<&SeriesData>,
    method: ConformalMethod,
    params: &DualParams,
) -> Result<CylinderMeasure> {
    match method {
        ConformalMethod::Series => {
            let data = data.ok_or_else(|| {
                Error::Config("series method needs power-series data".into())
            })?;
            conformal_measure_series(shift, pot, data)
        }
        ConformalMethod::DualFixedPoint => conformal_measure_dual(shift, pot, lambda, params),
    }
}

/// Worst conformality defect over admissible pairs:
/// `|μ_θω([j]) − λ(ω) e^{-φ^ω(ij)} μ_ω([ij])|`.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub witness_state: usize,
    pub witness_pair: (usize, usize),
}

pub fn conformality_residual(
    shift: &RandomShift,
    pot: &Potential,
    lambda: &LambdaEstimate,
    measure: &CylinderMeasure,
) -> ResidualReport {
    let base = shift.base();
    assert!(measure.depth() >= 2, "residuals need depth ≥ 2 masses");
    let two = measure.marginal(2);
    let mut best = (0.0f64, 0usize, (0usize, 0usize));
    for s in base.states() {
        let next = base.advance(s, 1);
        for i in 0..shift.alphabet_len(s) {
            for j in 0..shift.alphabet_len(next) {
                if !shift.is_adjacent(s, i, j) {
                    continue;
                }
                let phi = if pot.depth() == 1 {
                    pot.value(s, &[i])
                } else {
                    pot.value(s, &[i, j])
                };
                let lhs = two.one_cylinder(next, j);
                let rhs = (lambda.log_lambda[s.0] - phi).exp() * two.mass(s, &[i, j]);
                let r = (lhs - rhs).abs();
                if r > best.0 {
                    best = (r, s.0, (i, j));
                }
            }
        }
    }
    ResidualReport { max_residual: best.0, witness_state: best.1, witness_pair: best.2 }
}

/// `∫ f dμ_s` for a cylinder function of depth ≤ the measure depth.
pub fn integrate(measure: &CylinderMeasure, f: &CylinderFunction, s: State) -> f64 {
    assert!(f.depth() <= measure.depth());
    measure.entries(s).map(|(w, v)| f.value(s, w) * v).sum()
}

/// Random eigenfunction data.
#[derive(Clone, Debug)]
pub struct EigenData {
    /// `h` normalized by `∫ h_ω dμ_ω = 1` at every state.
    pub h: CylinderFunction,
    /// Independent eigenvalue re-estimate `∫ L_ω h_ω dμ_θω / ∫ h_ω dμ_ω`.
    pub log_lambda_re: Vec<f64>,
    pub sweeps: usize,
    /// Worst relative fixed-point defect of the final family.
    pub residual: f64,
}

/// Power-iterate the normalized family `h_σ ← L_{θ^{-1}σ} h_{θ^{-1}σ} / λ(θ^{-1}σ)`
/// with per-state sup renormalization, then gauge by `∫ h dμ = 1`.
pub fn eigenfunction(
    shift: &RandomShift,
    pot: &Potential,
    lambda: &LambdaEstimate,
    measure: &CylinderMeasure,
    tol: f64,
    max_sweeps: usize,
) -> Result<EigenData> {
    let base = shift.base();
    let mut h = CylinderFunction::constant(shift, 1.0);
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(Error::NoConvergence(max_sweeps));
        }
        // new h at θσ comes from the current h at σ
        let images: Vec<CylinderFunction> = base
            .states()
            .map(|s| ruelle_apply(shift, pot, s, &h))
            .collect::<Result<_>>()?;
        let mut step = 0.0f64;
        let mut new_h = h.clone();
        for s in base.states() {
            let next = base.advance(s, 1);
            let mut g = images[s.0].clone();
            g.scale(next, (-lambda.log_lambda[s.0]).exp());
            let norm = g.sup_norm(next);
            if !(norm > 0.0) {
                return Err(Error::NonFinite);
            }
            g.scale(next, 1.0 / norm);
            for (w, v) in g.entries(next) {
                let old = h.value(next, &w) / h.sup_norm(next).max(f64::MIN_POSITIVE);
                step = step.max((v - old).abs());
            }
            new_h = replace_state(&new_h, next, &g);
        }
        h = new_h;
        if step < tol {
            break;
        }
    }
    // gauge: ∫ h dμ = 1 per state
    for s in base.states() {
        let z = integrate_depth_capped(measure, &h, s);
        if !(z > 0.0) {
            return Err(Error::NonFinite);
        }
        h.scale(s, 1.0 / z);
    }
    // independent eigenvalue re-estimate through the duality pairing
    let mut log_lambda_re = Vec::with_capacity(base.len());
    let mut residual = 0.0f64;
    for s in base.states() {
        let next = base.advance(s, 1);
        let lh = ruelle_apply(shift, pot, s, &h)?;
        let num = integrate_depth_capped(measure, &lh, next);
        let den = integrate_depth_capped(measure, &h, s);
        log_lambda_re.push((num / den).ln());
        // fixed-point defect relative to λ h
        let lam = lambda.lambda(s);
        for (w, v) in lh.entries(next) {
            let expect = lam * h.value(next, &w);
            if expect.abs() > 1e-300 {
                residual = residual.max((v - expect).abs() / expect.abs());
            }
        }
    }
    Ok(EigenData { h, log_lambda_re, sweeps, residual })
}

fn replace_state(h: &CylinderFunction, s: State, g: &CylinderFunction) -> CylinderFunction {
    // rebuild h with the table at one state replaced
    let mut out = h.clone();
    out.replace_table(s, g);
    out
}

fn integrate_depth_capped(measure: &CylinderMeasure, f: &CylinderFunction, s: State) -> f64 {
    assert!(f.depth() <= measure.depth());
    integrate(measure, f, s)
}

/// Gibbs-comparison battery over words of a fixed length.
#[derive(Clone, Debug)]
pub struct GibbsReport {
    pub word_len: usize,
    pub words_checked: usize,
    pub sampled: bool,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Certified interval `[B^{-1} D, B]` at `θ^n ω`.
    pub bound_lo: f64,
    pub bound_hi: f64,
    pub ok: bool,
}

/// Check `μ_ω([w]) Λ'_n(ω) e^{n P̂ − φ_n(w)} ∈ [B^{-1} D, B]` at `θ^n ω`
/// for every admissible word of length `n` (sampling when enumeration
/// would exceed the cap) and both the sup and inf closures of `φ_n`.
pub fn gibbs_report(
    shift: &RandomShift,
    pot: &Potential,
    lambda: &LambdaEstimate,
    measure: &CylinderMeasure,
    s: State,
    word_len: usize,
    sample_cap: u64,
    seed: u64,
) -> Result<GibbsReport> {
    let base = shift.base();
    let n = word_len;
    let end = base.advance(s, n as i64);
    let log_b = pot.log_distortion(shift, end);
    let prev_end = base.advance(end, -1);
    // D = inf_b Σ_{j : α_{bj}(θ^{-1}σ')} μ_{σ'}([j])
    let one = measure.marginal(1);
    let mut d = f64::INFINITY;
    for b in 0..shift.alphabet_len(prev_end) {
        let mass: f64 = shift.successors(prev_end, b).map(|j| one.mass(end, &[j])).sum();
        d = d.min(mass);
    }
    let bound_lo = (-log_b).exp() * d;
    let bound_hi = log_b.exp();

    let count = shift.word_count(s, n);
    let sampled = count > u128::from(sample_cap);
    let words: Vec<Vec<usize>> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..sample_cap)
            .map(|_| {
                let mut w = Vec::with_capacity(n);
                let first_len = shift.alphabet_len(s);
                w.push(rng.gen_range(0..first_len));
                for t in 1..n {
                    let at = base.advance(s, t as i64 - 1);
                    let succ: Vec<usize> = shift.successors(at, w[t - 1]).collect();
                    w.push(succ[rng.gen_range(0..succ.len())]);
                }
                w
            })
            .collect()
    } else {
        shift.admissible_words(s, n)?.into_iter().map(|w| w.symbols).collect()
    };

    let log_cocycle = lambda.log_norm_cocycle(base, s, n);
    let np = n as f64 * lambda.log_pressure;
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    for w in &words {
        let mu = measure.mass_of_word(shift, pot, lambda, s, w);
        if !(mu > 0.0) {
            continue;
        }
        for mode in [PhiMode::Sup, PhiMode::Inf] {
            let phi_n = pot.phi_sum(shift, s, w, n, mode)?;
            let ratio = (mu.ln() + log_cocycle + np - phi_n).exp();
            min_ratio = min_ratio.min(ratio);
            max_ratio = max_ratio.max(ratio);
        }
    }
    let slack = 1.0 + 1e-6;
    let ok = min_ratio >= bound_lo / slack && max_ratio <= bound_hi * slack;
    Ok(GibbsReport {
        word_len: n,
        words_checked: words.len(),
        sampled,
        min_ratio,
        max_ratio,
        bound_lo,
        bound_hi,
        ok,
    })
}

/// Positive-recurrence diagnostics along backward orbits.
#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    /// First backward time from which the trail is certified.
    pub script_n: usize,
    /// `log [Z_n^{θ^{-n}ω}(a) / (Λ'_n e^{nP̂})]` for `n = 𝒩 … n_max`.
    pub log_ratios: Vec<(usize, f64)>,
    pub min: f64,
    pub max: f64,
    /// Least-squares slope of the tail — zero for positive recurrence.
    pub trend: f64,
}

/// Ratios of Gurevič partition functions along the backward orbit against
/// the eigenvalue cocycle; bounded ratios with vanishing trend witness
/// positive recurrence of the target symbol.
pub fn recurrence_report(
    shift: &RandomShift,
    tables: &PartitionTables,
    lambda: &LambdaEstimate,
    cert: &BipCertificate,
    s: State,
    horizon: usize,
) -> Result<RecurrenceReport> {
    let base = shift.base();
    let a = tables.target();
    // 𝒩: first backward step landing in Ω_bi whose image family mixes into
    // the target within the elapsed time
    let mut script_n = None;
    'l: for l in 1..=horizon {
        let back = base.advance(s, -(l as i64));
        if !cert.omega_bi.contains(back) {
            continue;
        }
        for &b in &cert.i_bi[back.0] {
            match shift.mixing_time(back, b, a, horizon) {
                Ok(nb) if nb < l => {}
                _ => continue 'l,
            }
        }
        script_n = Some(l);
        break;
    }
    let script_n = script_n.ok_or(Error::NoReturn(horizon))?;

    let n_hi = horizon.min(tables.n_max());
    let mut log_ratios = Vec::new();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for n in script_n..=n_hi {
        let back = base.advance(s, -(n as i64));
        if !tables.in_target_set(shift, back, n) || a >= shift.alphabet_len(back) {
            continue;
        }
        let r = tables.log_gurevic_z(back, n)
            - lambda.log_norm_cocycle(base, back, n)
            - n as f64 * lambda.log_pressure;
        log_ratios.push((n, r));
        min = min.min(r);
        max = max.max(r);
    }
    if log_ratios.len() < 2 {
        return Err(Error::NoReturn(horizon));
    }
    let xs: Vec<f64> = log_ratios.iter().map(|(n, _)| *n as f64).collect();
    let ys: Vec<f64> = log_ratios.iter().map(|(_, r)| *r).collect();
    let trend = ls_slope(&xs, &ys);
    Ok(RecurrenceReport { script_n, log_ratios, min, max, trend })
}

/// Rank-one convergence (exactness) diagnostics.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    /// `(n, Σ_j |(Λ'_n e^{nP̂})^{-1} L^n f (j) − h(j) ∫f dμ_ω| μ^{(1)}_{θ^n ω}([j]))`.
    pub deviations: Vec<(usize, f64)>,
    /// Fitted `log` rate over the clean decay window, if one exists.
    pub log_rate: Option<f64>,
}

/// Iterate the normalized operator on `f` and record the weighted distance
/// to the rank-one limit `h ∫ f dμ_ω`.
pub fn exactness(
    shift: &RandomShift,
    pot: &Potential,
    lambda: &LambdaEstimate,
    measure: &CylinderMeasure,
    eigen: &EigenData,
    f: &CylinderFunction,
    s: State,
    n_max: usize,
) -> Result<ExactnessReport> {
    let base = shift.base();
    let target = integrate(measure, f, s);
    let one = measure.marginal(1);
    let mut g = f.clone();
    let mut deviations = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let at = base.advance(s, n as i64 - 1);
        let mut img = ruelle_apply(shift, pot, at, &g)?;
        let here = base.advance(s, n as i64);
        img.scale(here, (-lambda.log_lambda[at.0]).exp());
        g = img;
        let mut dev = 0.0;
        for j in 0..shift.alphabet_len(here) {
            let diff = (g.value(here, &[j]) - eigen.h.value(here, &[j]) * target).abs();
            dev += diff * one.mass(here, &[j]);
        }
        deviations.push((n, dev));
    }
    // fit the geometric rate on the clean window
    let window: Vec<(f64, f64)> = deviations
        .iter()
        .filter(|(_, d)| *d > 1e-10 && *d < 1e-2)
        .map(|(n, d)| (*n as f64, d.ln()))
        .collect();
    let log_rate = if window.len() >= 3 {
        let xs: Vec<f64> = window.iter().map(|(x, _)| *x).collect();
        let ys: Vec<f64> = window.iter().map(|(_, y)| *y).collect();
        Some(ls_slope(&xs, &ys))
    } else {
        None
    };
    Ok(ExactnessReport { deviations, log_rate })
}
