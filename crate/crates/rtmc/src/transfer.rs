//! Transfer-operator machinery: anchor points, cylinder functions, the
//! Ruelle operator, partition-function tables and the pressure estimator.
//!
//! Partition functions are kept in log scale throughout. For a potential of
//! locality depth ≤ 2 the anchored preimage function
//! `u_m(σ, j) = log (L_σ^m 1_{[j]})(ξ_{θ^m σ})` satisfies
//! `u_m(σ, j) = LSE_{k : α_{jk}(σ)} [φ^σ(jk) + u_{m-1}(θσ, k)]`,
//! and with anchors rooted at the target symbol `a` the value `u_n(ω, a)`
//! *is* the Gurevič partition function `Z_n^ω(a)` whenever `θ^n ω` carries
//! `a` — the defining sums run over the same words with the same weights.
//! A parallel table with sup-closed final terms yields the upper partition
//! function `A_n^ω` used by the bound constants.

use crate::base::{State, StateSet};
use crate::error::{Error, Result};
use crate::numerics::{log_sum_exp, LogSumAcc};
use crate::potential::{PhiMode, Potential};
use crate::shift::{BipCertificate, RandomShift};
use std::collections::BTreeMap;

/// An eventually periodic point ξ_σ ∈ X_σ per base state, built greedily:
/// start at the root symbol (when admissible, else symbol 0) and always
/// follow the smallest admissible successor.
#[derive(Clone, Debug)]
pub struct AnchorFamily {
    prefix: Vec<Vec<usize>>,
    cycle_start: Vec<usize>,
    cycle_len: Vec<usize>,
}

impl AnchorFamily {
    pub fn rooted(shift: &RandomShift, root: usize) -> Self {
        let base = shift.base();
        let mut prefix = Vec::with_capacity(base.len());
        let mut cycle_start = Vec::with_capacity(base.len());
        let mut cycle_len = Vec::with_capacity(base.len());
        for s in base.states() {
            let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            let mut symbols = Vec::new();
            let mut cur = if root < shift.alphabet_len(s) { root } else { 0 };
            let mut st = s;
            let (cs, cl) = loop {
                if let Some(&t0) = seen.get(&(st.0, cur)) {
                    break (t0, symbols.len() - t0);
                }
                seen.insert((st.0, cur), symbols.len());
                symbols.push(cur);
                cur = shift
                    .successors(st, cur)
                    .next()
                    .expect("row-sum invariant guarantees a successor");
                st = base.advance(st, 1);
            };
            prefix.push(symbols);
            cycle_start.push(cs);
            cycle_len.push(cl);
        }
        AnchorFamily { prefix, cycle_start, cycle_len }
    }

    pub fn greedy(shift: &RandomShift) -> Self {
        Self::rooted(shift, 0)
    }

    /// First symbol of ξ_σ.
    pub fn first(&self, s: State) -> usize {
        self.prefix[s.0][0]
    }

    /// Symbol of ξ_σ at position `t`.
    pub fn symbol_at(&self, s: State, t: usize) -> usize {
        let p = &self.prefix[s.0];
        if t < p.len() {
            p[t]
        } else {
            let cs = self.cycle_start[s.0];
            p[cs + (t - cs) % self.cycle_len[s.0]]
        }
    }

    /// First `n` symbols of ξ_σ.
    pub fn point(&self, s: State, n: usize) -> Vec<usize> {
        (0..n).map(|t| self.symbol_at(s, t)).collect()
    }
}

/// A function on fibers depending on the first `depth` symbols, stored in
/// linear scale (one table per base state). Unstored tuples read as 0, the
/// right convention for indicators and measures on empty cylinders.
#[derive(Clone, Debug)]
pub struct CylinderFunction {
    depth: usize,
    tables: Vec<CfTable>,
}

#[derive(Clone, Debug)]
enum CfTable {
    Dense(Vec<f64>),
    Sparse(BTreeMap<Vec<usize>, f64>),
}

impl CylinderFunction {
    pub fn constant(shift: &RandomShift, c: f64) -> Self {
        let tables = shift
            .base()
            .states()
            .map(|s| CfTable::Dense(vec![c; shift.alphabet_len(s)]))
            .collect();
        CylinderFunction { depth: 1, tables }
    }

    /// Indicator of the cylinder `[word]` (at every state where admissible).
    pub fn indicator(shift: &RandomShift, word: &[usize]) -> Self {
        assert!(!word.is_empty());
        let tables = shift
            .base()
            .states()
            .map(|s| {
                let mut map = BTreeMap::new();
                if shift.is_admissible(s, word) {
                    map.insert(word.to_vec(), 1.0);
                }
                CfTable::Sparse(map)
            })
            .collect();
        CylinderFunction { depth: word.len(), tables }
    }

    /// Materialize over admissible words of the given depth.
    pub fn from_fn<F>(shift: &RandomShift, depth: usize, f: F) -> Result<Self>
    where
        F: Fn(State, &[usize]) -> f64,
    {
        assert!(depth >= 1);
        let tables = shift
            .base()
            .states()
            .map(|s| {
                if depth == 1 {
                    Ok(CfTable::Dense(
                        (0..shift.alphabet_len(s)).map(|i| f(s, &[i])).collect(),
                    ))
                } else {
                    let mut map = BTreeMap::new();
                    for w in shift.admissible_words(s, depth)? {
                        map.insert(w.symbols.clone(), f(s, &w.symbols));
                    }
                    Ok(CfTable::Sparse(map))
                }
            })
            .collect::<Result<_>>()?;
        Ok(CylinderFunction { depth, tables })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn value(&self, s: State, word: &[usize]) -> f64 {
        assert!(word.len() >= self.depth);
        match &self.tables[s.0] {
            CfTable::Dense(v) => v.get(word[0]).copied().unwrap_or(0.0),
            CfTable::Sparse(map) => map.get(&word[..self.depth]).copied().unwrap_or(0.0),
        }
    }

    pub fn entries(&self, s: State) -> Vec<(Vec<usize>, f64)> {
        match &self.tables[s.0] {
            CfTable::Dense(v) => v.iter().enumerate().map(|(i, x)| (vec![i], *x)).collect(),
            CfTable::Sparse(map) => map.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }

    pub fn sup_norm(&self, s: State) -> f64 {
        self.entries(s).iter().map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&mut self, s: State, c: f64) {
        match &mut self.tables[s.0] {
            CfTable::Dense(v) => v.iter_mut().for_each(|x| *x *= c),
            CfTable::Sparse(map) => map.values_mut().for_each(|x| *x *= c),
        }
    }

    /// Swap in the table of `from` at one state (same depth required).
    pub fn replace_table(&mut self, s: State, from: &CylinderFunction) {
        assert_eq!(self.depth, from.depth, "tables must share the depth");
        self.tables[s.0] = from.tables[s.0].clone();
    }
}

/// One application of the Ruelle operator: maps a function on the fiber at
/// `s` to a function on the fiber at `θs`,
/// `(L_s f)(x) = Σ_{i : α_{i x_0}(s)} e^{φ^s(i x_0 …)} f(i x_0 …)`.
pub fn ruelle_apply(
    shift: &RandomShift,
    pot: &Potential,
    s: State,
    f: &CylinderFunction,
) -> Result<CylinderFunction> {
    let out_depth = f.depth().max(pot.depth()).saturating_sub(1).max(1);
    let next = shift.base().advance(s, 1);
    let window = f.depth().max(pot.depth());
    CylinderFunction::from_fn(shift, out_depth, |st, w| {
        if st != next {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 0..shift.alphabet_len(s) {
            if !shift.is_adjacent(s, i, w[0]) {
                continue;
            }
            let mut y = Vec::with_capacity(window);
            y.push(i);
            y.extend_from_slice(&w[..window.saturating_sub(1)]);
            acc += pot.value(s, &y).exp() * f.value(s, &y);
        }
        acc
    })
}

/// Dense log-scale tables of anchored partition functions up to `n_max`.
#[derive(Clone, Debug)]
pub struct PartitionTables {
    target: usize,
    n_max: usize,
    anchors: AnchorFamily,
    /// `u[m][s][j] = log (L_s^m 1_{[j]})(ξ_{θ^m s})`.
    u: Vec<Vec<Vec<f64>>>,
    /// Same recursion with a sup-closed final term: `LSE_j v[n][s][j]` is
    /// the upper partition function `log A_n^s`.
    v: Vec<Vec<Vec<f64>>>,
}

impl PartitionTables {
    pub fn build(
        shift: &RandomShift,
        pot: &Potential,
        target: usize,
        n_max: usize,
    ) -> Result<Self> {
        if pot.depth() > 2 {
            return Err(Error::DepthUnsupported(pot.depth()));
        }
        let base = shift.base();
        let anchors = AnchorFamily::rooted(shift, target);
        let p = base.len();
        let sizes: Vec<usize> = base.states().map(|s| shift.alphabet_len(s)).collect();

        let mut u = Vec::with_capacity(n_max + 1);
        let mut v = Vec::with_capacity(n_max + 1);
        let u0: Vec<Vec<f64>> = base
            .states()
            .map(|s| {
                (0..sizes[s.0])
                    .map(|j| if j == anchors.first(s) { 0.0 } else { f64::NEG_INFINITY })
                    .collect()
            })
            .collect();
        // v has no m = 0 layer; store a placeholder to align indices
        let v0: Vec<Vec<f64>> = base.states().map(|s| vec![f64::NEG_INFINITY; sizes[s.0]]).collect();
        u.push(u0);
        v.push(v0);

        let phi = |s: State, j: usize, k: usize| -> f64 {
            if pot.depth() == 1 {
                pot.value(s, &[j])
            } else {
                pot.value(s, &[j, k])
            }
        };

        for m in 1..=n_max {
            let mut um = Vec::with_capacity(p);
            let mut vm = Vec::with_capacity(p);
            for s in base.states() {
                let next = base.advance(s, 1);
                let urow: Vec<f64> = (0..sizes[s.0])
                    .map(|j| {
                        let mut acc = LogSumAcc::new();
                        for k in shift.successors(s, j) {
                            acc.add(phi(s, j, k) + u[m - 1][next.0][k]);
                        }
                        acc.log_value()
                    })
                    .collect();
                let vrow: Vec<f64> = (0..sizes[s.0])
                    .map(|j| {
                        if m == 1 {
                            shift
                                .successors(s, j)
                                .map(|k| phi(s, j, k))
                                .fold(f64::NEG_INFINITY, f64::max)
                        } else {
                            let mut acc = LogSumAcc::new();
                            for k in shift.successors(s, j) {
                                acc.add(phi(s, j, k) + v[m - 1][next.0][k]);
                            }
                            acc.log_value()
                        }
                    })
                    .collect();
                um.push(urow);
                vm.push(vrow);
            }
            u.push(um);
            v.push(vm);
        }
        Ok(PartitionTables { target, n_max, anchors, u, v })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn anchors(&self) -> &AnchorFamily {
        &self.anchors
    }

    /// `log (L_s^n 1_{[j]})(ξ_{θ^n s})` — anchored preimage function.
    pub fn log_anchored_z(&self, s: State, n: usize, j: usize) -> Result<f64> {
        if j >= self.u[0][s.0].len() {
            return Err(Error::AnchorMissing { state: s.0, symbol: j });
        }
        Ok(self.u[n][s.0][j])
    }

    /// `log Z_n^s(target)` — the Gurevič partition function. Identical to
    /// the anchored value at the target symbol; meaningful on return times.
    pub fn log_gurevic_z(&self, s: State, n: usize) -> f64 {
        self.u[n][s.0][self.target]
    }

    /// `log 𝒵_n^s = log (L_s^n 1)(ξ_{θ^n s})` — full preimage function.
    pub fn log_full_z(&self, s: State, n: usize) -> f64 {
        log_sum_exp(&self.u[n][s.0])
    }

    /// `log A_n^s` — partition function with supremum weights.
    pub fn log_sup_partition(&self, s: State, n: usize) -> f64 {
        assert!(n >= 1);
        log_sum_exp(&self.v[n][s.0])
    }

    /// Does `θ^n s` carry the target symbol (so that the Gurevič reading of
    /// the anchored value applies)?
    pub fn in_target_set(&self, shift: &RandomShift, s: State, n: usize) -> bool {
        let end = shift.base().advance(s, n as i64);
        self.target < shift.alphabet_len(end) && self.anchors.first(end) == self.target
    }
}

/// Controls for the pressure estimator.
#[derive(Clone, Debug)]
pub struct PressureParams {
    pub n_max: usize,
    /// Number of phase-matched difference quotients averaged and spread.
    pub q: usize,
    /// Mixing-time cap defining the inducing set Ω*.
    pub omega_star_cap: usize,
    /// Hard bound on the reported gap; `None` records without enforcing.
    pub gap_tol: Option<f64>,
}

impl Default for PressureParams {
    fn default() -> Self {
        PressureParams { n_max: 80, q: 5, omega_star_cap: 8, gap_tol: Some(1e-6) }
    }
}

#[derive(Clone, Debug)]
pub struct PressureRow {
    pub n: usize,
    pub in_return_set: bool,
    pub log_z_over_n: f64,
    pub log_cz_over_n: f64,
    /// Spread of the difference quotients available so far.
    pub gap: f64,
}

#[derive(Clone, Debug)]
pub struct PressureEstimate {
    pub value: f64,
    pub gap: f64,
    pub rows: Vec<PressureRow>,
    /// Phase-matched difference quotients of `log Z_n` in return-time order.
    pub diffs: Vec<f64>,
    pub omega_star: StateSet,
    pub return_times: Vec<usize>,
}

/// Relative Gurevič pressure along the return times of `s` to the inducing
/// set Ω* (states carrying the target whose self-mixing time is small).
///
/// The estimator averages difference quotients of `log Z_n` between return
/// times in the same orbit phase, which telescopes out both the `O(1/n)`
/// offset of the raw terms and any periodic modulation of the prefactor.
pub fn pressure(
    shift: &RandomShift,
    tables: &PartitionTables,
    s: State,
    params: &PressureParams,
) -> Result<PressureEstimate> {
    let base = shift.base();
    let a = tables.target();
    if a >= shift.alphabet_len(s) {
        return Err(Error::AnchorMissing { state: s.0, symbol: a });
    }
    let n_max = params.n_max.min(tables.n_max());

    let mut omega_star = StateSet::empty(base.len());
    for sigma in base.states() {
        if a >= shift.alphabet_len(sigma) {
            continue;
        }
        match shift.mixing_time(sigma, a, a, n_max) {
            Ok(nn) if nn <= params.omega_star_cap => omega_star.insert(sigma),
            _ => {}
        }
    }

    let period = base.orbit_period(s);
    let mut rows = Vec::with_capacity(n_max);
    let mut returns: Vec<usize> = Vec::new();
    let mut diffs: Vec<f64> = Vec::new();
    // last seen return time per orbit phase
    let mut last_at_phase: Vec<Option<usize>> = vec![None; period];

    for n in 1..=n_max {
        let in_rs = omega_star.contains(base.advance(s, n as i64));
        if in_rs {
            returns.push(n);
            let phase = n % period;
            if let Some(m) = last_at_phase[phase] {
                let d = (tables.log_gurevic_z(s, n) - tables.log_gurevic_z(s, m))
                    / ((n - m) as f64);
                diffs.push(d);
            }
            last_at_phase[phase] = Some(n);
        }
        let tail = &diffs[diffs.len().saturating_sub(params.q)..];
        let gap = if tail.len() < 2 {
            0.0
        } else {
            tail.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b))
                - tail.iter().fold(f64::INFINITY, |a, b| a.min(*b))
        };
        rows.push(PressureRow {
            n,
            in_return_set: in_rs,
            log_z_over_n: tables.log_gurevic_z(s, n) / n as f64,
            log_cz_over_n: tables.log_full_z(s, n) / n as f64,
            gap,
        });
    }

    if diffs.is_empty() {
        return Err(Error::NoReturn(n_max));
    }
    let tail = &diffs[diffs.len().saturating_sub(params.q)..];
    let value = tail.iter().sum::<f64>() / tail.len() as f64;
    if !value.is_finite() {
        return Err(Error::NonFinite);
    }
    let gap = if tail.len() < 2 {
        0.0
    } else {
        tail.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b))
            - tail.iter().fold(f64::INFINITY, |a, b| a.min(*b))
    };
    if let Some(tol) = params.gap_tol {
        if gap > tol {
            return Err(Error::NoConvergence(n_max));
        }
    }
    Ok(PressureEstimate { value, gap, rows, diffs, omega_star, return_times: returns })
}

/// Classification of the weighted series `Σ_n s^n Z_n^ω(a)` at one radius.
#[derive(Clone, Debug)]
pub struct DivergenceReport {
    pub log_s: f64,
    /// Log partial sums along return times.
    pub log_partial_sums: Vec<f64>,
    /// Estimated one-step log ratio of the terms.
    pub log_term_ratio: f64,
    pub divergent: bool,
    /// Log of a geometric tail bound; only meaningful in the convergent case.
    pub log_tail_bound: f64,
}

/// Diagnose recurrence-type behaviour of `Σ s^n Z_n` from the partition
/// tables: terms with a nonnegative trend diverge, decaying terms get a
/// certified geometric tail bound.
pub fn divergence_diagnostic(
    shift: &RandomShift,
    tables: &PartitionTables,
    s: State,
    log_s: f64,
) -> Result<DivergenceReport> {
    let a = tables.target();
    if a >= shift.alphabet_len(s) {
        return Err(Error::AnchorMissing { state: s.0, symbol: a });
    }
    let n_max = tables.n_max();
    let mut terms: Vec<(usize, f64)> = Vec::new();
    for n in 1..=n_max {
        if tables.in_target_set(shift, s, n) {
            let t = n as f64 * log_s + tables.log_gurevic_z(s, n);
            if t > f64::NEG_INFINITY {
                terms.push((n, t));
            }
        }
    }
    if terms.len() < 4 {
        return Err(Error::NoReturn(n_max));
    }
    let mut acc = LogSumAcc::new();
    let mut partial = Vec::with_capacity(terms.len());
    for (_, t) in &terms {
        acc.add(*t);
        partial.push(acc.log_value());
    }
    // per-step trend over the last half of the recorded terms
    let mut ratios = Vec::new();
    for w in terms.windows(2) {
        let (n0, t0) = w[0];
        let (n1, t1) = w[1];
        ratios.push((t1 - t0) / (n1 - n0) as f64);
    }
    let tail = &ratios[ratios.len() / 2..];
    let log_term_ratio = tail.iter().sum::<f64>() / tail.len() as f64;
    let divergent = log_term_ratio >= -1e-9;
    let log_tail_bound = if divergent {
        f64::INFINITY
    } else {
        // geometric bound: last term × ρ / (1 − ρ), padded for safety
        let rho = (log_term_ratio * 0.5).exp().min(0.999_999);
        terms.last().unwrap().1 + (rho / (1.0 - rho)).ln()
    };
    Ok(DivergenceReport {
        log_s,
        log_partial_sums: partial,
        log_term_ratio,
        divergent,
        log_tail_bound,
    })
}

/// Routing constants linking full, anchored and upper partition functions.
#[derive(Clone, Debug)]
pub struct BoundConstants {
    /// `log C_ω(a, k)`: `𝒵_n^{θ^k ω} ≤ C · 𝒵_{n+k}^ω(a)`.
    pub log_c: f64,
    pub k_c: usize,
    /// `log D_ω(a, k)`: `A_n^σ ≤ D^{-1} · 𝒵_{n+k}^σ` for `θ^n σ = ω`.
    pub log_d: f64,
    pub k_d: usize,
}

/// Build the comparison constants from a verified certificate by routing
/// explicit connector words, then spot-check the inequalities they certify.
///
/// `C` prepends a lex-minimal connector from the target into each big-
/// preimage symbol; `D` closes the final supremum with one variation of
/// the last coordinate and routes onward into the target through a big-
/// image symbol. Both are certified by construction; `HypothesisFail` is
/// raised when the certificate cannot cover some symbol with a connector.
pub fn bound_constants(
    shift: &RandomShift,
    pot: &Potential,
    tables: &PartitionTables,
    cert: &BipCertificate,
    omega: State,
    horizon: usize,
) -> Result<BoundConstants> {
    let base = shift.base();
    let a = tables.target();
    if a >= shift.alphabet_len(omega) {
        return Err(Error::AnchorMissing { state: omega.0, symbol: a });
    }

    // ---- C: route a → c_j (c_j in the preimage family at θ^k ω) ----
    let mut c_found = None;
    'kc: for k in 1..=horizon {
        let at = base.advance(omega, k as i64);
        if !cert.omega_bp.contains(at) {
            continue;
        }
        let prev = base.advance(at, -1);
        // connectors a → c_j of length k (ending exactly at c_j)
        let mut infs: Vec<(usize, f64)> = Vec::new();
        for &c in &cert.i_bp[at.0] {
            let v = if k == 1 {
                if c == a {
                    Some(vec![a])
                } else {
                    None
                }
            } else {
                shift
                    .words_between(omega, k - 1, a, c)?
                    .first()
                    .map(|w| {
                        let mut v = w.symbols.clone();
                        v.push(c);
                        v
                    })
            };
            if let Some(v) = v {
                let inf = pot.phi_sum(shift, omega, &v, k, PhiMode::Inf)?;
                infs.push((c, inf));
            }
        }
        // coverage: every symbol b at θ^k ω must follow some routed c_j
        let covered = (0..shift.alphabet_len(at)).all(|b| {
            infs.iter().any(|(c, _)| shift.is_adjacent(prev, *c, b))
        });
        if covered && !infs.is_empty() {
            let min_inf = infs.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
            c_found = Some((k, (-min_inf).max(0.0)));
            break 'kc;
        }
    }
    let (k_c, log_c) = c_found.ok_or_else(|| {
        Error::HypothesisFail(format!(
            "no preimage routing from symbol {a} within horizon {horizon}"
        ))
    })?;

    // ---- D: close the sup and route b_j → a (b_j in the image family at ω) ----
    if !cert.omega_bi.contains(omega) {
        return Err(Error::HypothesisFail(format!(
            "state {} is not in the big-image set",
            omega.0
        )));
    }
    let prev = base.advance(omega, -1);
    let mut d_found = None;
    'kd: for k in 1..=horizon {
        let mut infs: Vec<(usize, f64)> = Vec::new();
        for &b in &cert.i_bi[omega.0] {
            if let Some(w) = shift.words_between(omega, k, b, a)?.first() {
                let inf = pot.phi_sum(shift, omega, &w.symbols, k, PhiMode::Inf)?;
                infs.push((b, inf));
            }
        }
        // coverage: every symbol x at θ⁻¹ω must reach some routed b_j
        let covered = (0..shift.alphabet_len(prev)).all(|x| {
            infs.iter().any(|(b, _)| shift.is_adjacent(prev, x, *b))
        });
        if covered && !infs.is_empty() {
            let min_inf = infs.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
            let v1 = pot.variation(prev, 1);
            d_found = Some((k, min_inf - v1));
            break 'kd;
        }
    }
    let (k_d, log_d) = d_found.ok_or_else(|| {
        Error::HypothesisFail(format!(
            "no image routing into symbol {a} within horizon {horizon}"
        ))
    })?;

    Ok(BoundConstants { log_c, k_c, log_d, k_d })
}
