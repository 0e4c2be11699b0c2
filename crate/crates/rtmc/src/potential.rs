//! Locally constant random potentials with declared variation envelopes.
//!
//! A potential assigns to each base state ω a function `φ^ω` on the fiber
//! that depends on the first `depth` symbols only. Regularity is declared
//! through a per-state constant `κ_ω` and a common ratio `r ∈ (0,1)` with
//! the contract `V_n(φ^ω) ≤ κ_ω rⁿ` for `n ≥ 1`; `check_conditions`
//! verifies the contract against the stored tables. The distortion bound
//! `log B_ω = Σ_{j≥1} κ_{θ^{-j}ω} r^j` has the closed form
//! `[Σ_{j=1}^p κ_{θ^{-j}ω} r^j] / (1 − r^p)` on a period-`p` orbit.

use std::collections::BTreeMap;

use crate::base::State;
use crate::error::{Error, Result};
use crate::numerics::LogSumAcc;
use crate::shift::RandomShift;

/// Value table for one state. Depth 1 and 2 are dense; deeper tables are
/// keyed by the full symbol tuple.
#[derive(Clone, Debug)]
pub enum PotTable {
    D1(Vec<f64>),
    D2(Vec<Vec<f64>>),
    Dk(BTreeMap<Vec<usize>, f64>),
}

impl PotTable {
    fn get(&self, word: &[usize]) -> f64 {
        match self {
            PotTable::D1(v) => v[word[0]],
            PotTable::D2(m) => m[word[0]][word[1]],
            PotTable::Dk(map) => *map
                .get(word)
                .unwrap_or_else(|| panic!("potential table has no entry for {word:?}")),
        }
    }

    fn entries(&self) -> Vec<(Vec<usize>, f64)> {
        match self {
            PotTable::D1(v) => v.iter().enumerate().map(|(i, x)| (vec![i], *x)).collect(),
            PotTable::D2(m) => m
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter().enumerate().map(move |(j, x)| (vec![i, j], *x))
                })
                .collect(),
            PotTable::Dk(map) => map.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}

/// Evaluation mode for Birkhoff sums on finite words.
#[derive(Clone, Copy, Debug)]
pub enum PhiMode<'a> {
    /// Every term must be determined by the word; errors otherwise.
    Exact,
    /// Supremum over admissible continuations for the trailing terms.
    Sup,
    /// Infimum over admissible continuations for the trailing terms.
    Inf,
    /// Evaluate with the word extended by the given symbols.
    Extend(&'a [usize]),
}

#[derive(Clone, Debug)]
pub struct Potential {
    depth: usize,
    /// One table per base state.
    tables: Vec<PotTable>,
    kappa: Vec<f64>,
    r: f64,
}

/// Summary of the standing assumptions checked against the stored tables.
#[derive(Clone, Debug)]
pub struct ConditionsReport {
    /// Every state has finite column sums (summability at the current level).
    pub h1_summable: bool,
    /// Declared envelope dominates the actual variations.
    pub h2_variation: bool,
    /// φ bounded above.
    pub h_star_bounded_above: bool,
    /// All column sums strictly positive.
    pub s1_positive: bool,
    /// sup_ω M_ω / m_ω finite.
    pub s2_ratio_finite: bool,
    pub sup_phi: f64,
    pub inf_phi: f64,
    pub log_m: Vec<f64>,
    pub log_big_m: Vec<f64>,
    /// True when the alphabet is countable and the checks only cover the
    /// materialized truncation level.
    pub truncation_caveat: bool,
}

impl ConditionsReport {
    pub fn all_hold(&self) -> bool {
        self.h1_summable
            && self.h2_variation
            && self.h_star_bounded_above
            && self.s1_positive
            && self.s2_ratio_finite
    }
}

impl Potential {
    pub fn from_tables(tables: Vec<PotTable>, kappa: Vec<f64>, r: f64) -> Result<Self> {
        if tables.is_empty() || tables.len() != kappa.len() {
            return Err(Error::Config("one potential table and κ per base state".into()));
        }
        if !(0.0..1.0).contains(&r) || r <= 0.0 {
            return Err(Error::Config(format!("variation ratio r must lie in (0,1), got {r}")));
        }
        if kappa.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
            return Err(Error::Config("variation constants κ must be positive".into()));
        }
        let depth = match &tables[0] {
            PotTable::D1(_) => 1,
            PotTable::D2(_) => 2,
            PotTable::Dk(map) => map.keys().next().map(|k| k.len()).unwrap_or(0),
        };
        if depth == 0 {
            return Err(Error::DepthUnsupported(0));
        }
        for t in &tables {
            let d = match t {
                PotTable::D1(_) => 1,
                PotTable::D2(_) => 2,
                PotTable::Dk(map) => map.keys().next().map(|k| k.len()).unwrap_or(0),
            };
            if d != depth {
                return Err(Error::Config("all states must share one locality depth".into()));
            }
            if let PotTable::Dk(map) = t {
                if map.keys().any(|k| k.len() != depth) {
                    return Err(Error::Config("ragged keys in potential table".into()));
                }
            }
        }
        Ok(Potential { depth, tables, kappa, r })
    }

    pub fn with_envelope(mut self, kappa: Vec<f64>, r: f64) -> Result<Self> {
        if kappa.len() != self.tables.len() {
            return Err(Error::Config("one κ per base state".into()));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Config(format!("variation ratio r must lie in (0,1), got {r}")));
        }
        self.kappa = kappa;
        self.r = r;
        Ok(self)
    }

    /// φ ≡ 0 (counting potential).
    pub fn zero(shift: &RandomShift) -> Self {
        let tables = shift
            .base()
            .states()
            .map(|s| PotTable::D1(vec![0.0; shift.alphabet_len(s)]))
            .collect();
        Potential { depth: 1, tables, kappa: vec![1.0; shift.base().len()], r: 0.5 }
    }

    /// Depth-1 potential `φ([b]) = log p_b` from one probability row.
    pub fn bernoulli(shift: &RandomShift, probs: &[f64]) -> Result<Self> {
        let tables = shift
            .base()
            .states()
            .map(|s| {
                if probs.len() != shift.alphabet_len(s) {
                    return Err(Error::Config(format!(
                        "bernoulli weights have length {}, fiber at state {} has {}",
                        probs.len(),
                        s.0,
                        shift.alphabet_len(s)
                    )));
                }
                Ok(PotTable::D1(probs.iter().map(|p| p.ln()).collect()))
            })
            .collect::<Result<_>>()?;
        Ok(Potential { depth: 1, tables, kappa: vec![1.0; shift.base().len()], r: 0.5 })
    }

    /// Depth-1 geometric potential `φ([b]) = −(b+1) log 2` on each fiber.
    pub fn geometric(shift: &RandomShift) -> Self {
        let ln2 = std::f64::consts::LN_2;
        let tables = shift
            .base()
            .states()
            .map(|s| {
                PotTable::D1((0..shift.alphabet_len(s)).map(|b| -((b + 1) as f64) * ln2).collect())
            })
            .collect();
        Potential { depth: 1, tables, kappa: vec![1.0; shift.base().len()], r: 0.5 }
    }

    /// Depth-2 potential `φ^ω(ij) = log A^ω_{ij}` from nonnegative matrices
    /// (zero entries map to −∞ and should be inadmissible in the shift).
    pub fn matrix_log(shift: &RandomShift, mats: &[Vec<Vec<f64>>]) -> Result<Self> {
        if mats.len() != shift.base().len() {
            return Err(Error::Config("one matrix per base state".into()));
        }
        let tables = shift
            .base()
            .states()
            .map(|s| {
                let next = shift.base().advance(s, 1);
                let m = &mats[s.0];
                if m.len() != shift.alphabet_len(s)
                    || m.iter().any(|row| row.len() != shift.alphabet_len(next))
                {
                    return Err(Error::Config(format!(
                        "matrix at state {} must be {}x{}",
                        s.0,
                        shift.alphabet_len(s),
                        shift.alphabet_len(next)
                    )));
                }
                if m.iter().flatten().any(|x| *x < 0.0 || !x.is_finite()) {
                    return Err(Error::Config("matrix entries must be finite and ≥ 0".into()));
                }
                Ok(PotTable::D2(
                    m.iter().map(|row| row.iter().map(|x| x.ln()).collect()).collect(),
                ))
            })
            .collect::<Result<_>>()?;
        Ok(Potential { depth: 2, tables, kappa: vec![1.0; shift.base().len()], r: 0.5 })
    }

    /// Materialize a depth-`k` potential from a function on symbol tuples.
    pub fn from_fn<F>(shift: &RandomShift, depth: usize, f: F) -> Result<Self>
    where
        F: Fn(State, &[usize]) -> f64,
    {
        if depth == 0 {
            return Err(Error::DepthUnsupported(0));
        }
        let base = shift.base();
        let tables = base
            .states()
            .map(|s| match depth {
                1 => PotTable::D1((0..shift.alphabet_len(s)).map(|i| f(s, &[i])).collect()),
                2 => {
                    let next = base.advance(s, 1);
                    PotTable::D2(
                        (0..shift.alphabet_len(s))
                            .map(|i| {
                                (0..shift.alphabet_len(next)).map(|j| f(s, &[i, j])).collect()
                            })
                            .collect(),
                    )
                }
                _ => {
                    let mut map = BTreeMap::new();
                    let mut tuple = vec![0usize; depth];
                    fill_tuples(shift, s, depth, 0, &mut tuple, &mut |w| {
                        map.insert(w.to_vec(), f(s, w));
                    });
                    PotTable::Dk(map)
                }
            })
            .collect();
        Ok(Potential { depth, tables, kappa: vec![1.0; base.len()], r: 0.5 })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn kappa(&self, s: State) -> f64 {
        self.kappa[s.0]
    }

    /// `φ^ω(x)` for any word carrying at least `depth` symbols.
    pub fn value(&self, s: State, word: &[usize]) -> f64 {
        assert!(
            word.len() >= self.depth,
            "word of length {} cannot determine a depth-{} potential",
            word.len(),
            self.depth
        );
        self.tables[s.0].get(&word[..self.depth])
    }

    /// `V_n(φ^ω)`: spread of table values over tuples sharing their first
    /// `n` symbols. Zero for `n ≥ depth`. Computed over the materialized
    /// table, which is exact whenever all stored tuples are admissible.
    pub fn variation(&self, s: State, n: usize) -> f64 {
        if n >= self.depth {
            return 0.0;
        }
        let mut groups: BTreeMap<Vec<usize>, (f64, f64)> = BTreeMap::new();
        for (tuple, v) in self.tables[s.0].entries() {
            if !v.is_finite() {
                continue; // −∞ marks inadmissible tuples
            }
            let key = tuple[..n].to_vec();
            let e = groups.entry(key).or_insert((f64::INFINITY, f64::NEG_INFINITY));
            e.0 = e.0.min(v);
            e.1 = e.1.max(v);
        }
        groups.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max)
    }

    /// `log B_ω = Σ_{j≥1} κ_{θ^{-j}ω} r^j`, summed in closed form over the
    /// periodic orbit.
    pub fn log_distortion(&self, shift: &RandomShift, s: State) -> f64 {
        let base = shift.base();
        let p = base.orbit_period(s);
        let mut partial = 0.0;
        let mut rj = 1.0;
        for j in 1..=p {
            rj *= self.r;
            partial += self.kappa[base.advance(s, -(j as i64)).0] * rj;
        }
        partial / (1.0 - self.r.powi(p as i32))
    }

    /// Birkhoff sum `φ_n = Σ_{k<n} φ^{θ^k ω}(σ^k ·)` along a word.
    pub fn phi_sum(
        &self,
        shift: &RandomShift,
        s: State,
        word: &[usize],
        n: usize,
        mode: PhiMode,
    ) -> Result<f64> {
        let need = n + self.depth - 1;
        let base = shift.base();
        let extended: Vec<usize>;
        let w: &[usize] = match mode {
            PhiMode::Extend(tail) => {
                extended = word.iter().chain(tail.iter()).copied().collect();
                &extended
            }
            _ => word,
        };
        if w.len() < need {
            match mode {
                PhiMode::Exact | PhiMode::Extend(_) => {
                    return Err(Error::InsufficientWordLength { len: w.len(), depth: self.depth, n })
                }
                PhiMode::Sup | PhiMode::Inf if w.len() < n => {
                    // sup/inf only close the trailing window, never whole terms
                    return Err(Error::InsufficientWordLength { len: w.len(), depth: self.depth, n });
                }
                PhiMode::Sup | PhiMode::Inf => {}
            }
        }
        let mut total = 0.0;
        for k in 0..n {
            let state_k = base.advance(s, k as i64);
            let have = w.len().saturating_sub(k).min(self.depth);
            if have >= self.depth {
                total += self.tables[state_k.0].get(&w[k..k + self.depth]);
            } else {
                // optimize over admissible continuations of the visible prefix
                let prefix = &w[k..];
                let want_sup = matches!(mode, PhiMode::Sup);
                let mut best = if want_sup { f64::NEG_INFINITY } else { f64::INFINITY };
                extend_and_eval(shift, self, state_k, prefix, &mut |v| {
                    best = if want_sup { best.max(v) } else { best.min(v) };
                });
                if !best.is_finite() {
                    return Err(Error::NonFinite);
                }
                total += best;
            }
        }
        if total.is_nan() {
            return Err(Error::NonFinite);
        }
        Ok(total)
    }

    /// Per-column bounds `(m_ω, M_ω)` of `Σ_{i : α_{ij}} e^{φ^ω(ij)}` over
    /// landing symbols `j`. Requires depth ≤ 2; a landing symbol with no
    /// admissible predecessor is reported as an empty fiber.
    pub fn summability_bounds(&self, shift: &RandomShift, s: State) -> Result<(f64, f64)> {
        if self.depth > 2 {
            return Err(Error::DepthUnsupported(self.depth));
        }
        let next = shift.base().advance(s, 1);
        let mut m = f64::INFINITY;
        let mut big_m = f64::NEG_INFINITY;
        for j in 0..shift.alphabet_len(next) {
            let mut acc = LogSumAcc::new();
            let mut nonempty = false;
            for i in 0..shift.alphabet_len(s) {
                if shift.is_adjacent(s, i, j) {
                    nonempty = true;
                    let v = if self.depth == 1 {
                        self.tables[s.0].get(&[i])
                    } else {
                        self.tables[s.0].get(&[i, j])
                    };
                    acc.add(v);
                }
            }
            if !nonempty {
                return Err(Error::EmptyFiber { state: s.0, symbol: j });
            }
            let col = acc.log_value();
            m = m.min(col.exp());
            big_m = big_m.max(col.exp());
        }
        Ok((m, big_m))
    }

    /// Verify the standing assumptions against the stored tables.
    pub fn check_conditions(&self, shift: &RandomShift) -> Result<ConditionsReport> {
        let base = shift.base();
        let mut sup_phi = f64::NEG_INFINITY;
        let mut inf_phi = f64::INFINITY;
        let mut h2 = true;
        for s in base.states() {
            for (_, v) in self.tables[s.0].entries() {
                if v.is_finite() {
                    sup_phi = sup_phi.max(v);
                    inf_phi = inf_phi.min(v);
                }
            }
            let mut envelope = self.kappa[s.0];
            for n in 1..self.depth.max(1) {
                envelope *= self.r;
                if self.variation(s, n) > envelope * (1.0 + 1e-12) {
                    h2 = false;
                }
            }
        }
        let mut log_m = Vec::with_capacity(base.len());
        let mut log_big_m = Vec::with_capacity(base.len());
        let mut s1 = true;
        let mut h1 = true;
        for s in base.states() {
            let (m, big) = self.summability_bounds(shift, s)?;
            if !(m > 0.0) {
                s1 = false;
            }
            if !big.is_finite() {
                h1 = false;
            }
            log_m.push(m.ln());
            log_big_m.push(big.ln());
        }
        let s2 = log_big_m
            .iter()
            .zip(&log_m)
            .all(|(big, m)| (big - m).is_finite());
        Ok(ConditionsReport {
            h1_summable: h1,
            h2_variation: h2,
            h_star_bounded_above: sup_phi.is_finite(),
            s1_positive: s1,
            s2_ratio_finite: s2,
            sup_phi,
            inf_phi,
            log_m,
            log_big_m,
            truncation_caveat: shift.is_countable(),
        })
    }
}

fn fill_tuples(
    shift: &RandomShift,
    s: State,
    depth: usize,
    pos: usize,
    tuple: &mut Vec<usize>,
    sink: &mut dyn FnMut(&[usize]),
) {
    if pos == depth {
        sink(tuple);
        return;
    }
    let state = shift.base().advance(s, pos as i64);
    for j in 0..shift.alphabet_len(state) {
        if pos > 0 {
            let prev = shift.base().advance(s, pos as i64 - 1);
            if !shift.is_adjacent(prev, tuple[pos - 1], j) {
                continue;
            }
        }
        tuple[pos] = j;
        fill_tuples(shift, s, depth, pos + 1, tuple, sink);
    }
}

fn extend_and_eval(
    shift: &RandomShift,
    pot: &Potential,
    s: State,
    prefix: &[usize],
    sink: &mut dyn FnMut(f64),
) {
    // grow the prefix to the potential's depth along admissible edges
    fn rec(
        shift: &RandomShift,
        pot: &Potential,
        s: State,
        buf: &mut Vec<usize>,
        depth: usize,
        sink: &mut dyn FnMut(f64),
    ) {
        if buf.len() >= depth {
            sink(pot.value(s, buf));
            return;
        }
        let at = shift.base().advance(s, buf.len() as i64 - 1);
        let last = *buf.last().unwrap();
        let succ: Vec<usize> = shift.successors(at, last).collect();
        for j in succ {
            buf.push(j);
            rec(shift, pot, s, buf, depth, sink);
            buf.pop();
        }
    }
    let mut buf = prefix.to_vec();
    assert!(!buf.is_empty(), "phi_sum windows always keep at least one symbol");
    rec(shift, pot, s, &mut buf, pot.depth(), sink);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseSystem;
    use crate::shift::{AdjacencyRule, Alphabet};

    fn fs2() -> RandomShift {
        RandomShift::new(BaseSystem::cyclic(1), Alphabet::Finite(vec![2]), AdjacencyRule::Full, 0)
            .unwrap()
    }

    fn gm() -> RandomShift {
        RandomShift::from_matrices(BaseSystem::cyclic(1), vec![vec![vec![1, 1], vec![1, 0]]])
            .unwrap()
    }

    fn geo(l: usize) -> RandomShift {
        RandomShift::new(BaseSystem::cyclic(1), Alphabet::Countable, AdjacencyRule::Full, l)
            .unwrap()
    }

    #[test]
    fn distortion_closed_forms() {
        let fs = fs2();
        let pot = Potential::zero(&fs);
        // κ = 1, r = 1/2 on a fixed point: log B = (1/2)/(1/2) = 1
        assert!((pot.log_distortion(&fs, State(0)) - 1.0).abs() < 1e-15);

        let p2 = RandomShift::new(
            BaseSystem::cyclic(2),
            Alphabet::Finite(vec![2, 2]),
            AdjacencyRule::Full,
            0,
        )
        .unwrap();
        let pot = Potential::zero(&p2).with_envelope(vec![1.0, 2.0], 0.5).unwrap();
        // from ω0: κ(θ⁻¹) = 2, κ(θ⁻²) = 1 → (2·1/2 + 1·1/4)/(1 − 1/4) = 5/3
        assert!((pot.log_distortion(&p2, State(0)) - 5.0 / 3.0).abs() < 1e-15);
        // from ω1 the roles swap: (1·1/2 + 2·1/4)/(3/4) = 4/3
        assert!((pot.log_distortion(&p2, State(1)) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_birkhoff_sums() {
        let fs = fs2();
        let pot = Potential::bernoulli(&fs, &[0.3, 0.7]).unwrap();
        let v = pot.phi_sum(&fs, State(0), &[0, 1], 2, PhiMode::Exact).unwrap();
        assert!((v - (0.3f64 * 0.7).ln()).abs() < 1e-14);
        // depth 1: no trailing dependence, all modes agree
        let sup = pot.phi_sum(&fs, State(0), &[0, 1], 2, PhiMode::Sup).unwrap();
        assert_eq!(v, sup);
    }

    #[test]
    fn exact_mode_wants_enough_symbols() {
        let gm = gm();
        let mats = vec![vec![vec![1.0, 1.0], vec![1.0, 0.0]]];
        let pot = Potential::matrix_log(&gm, &mats).unwrap();
        // depth 2, n = 3 needs 4 symbols
        match pot.phi_sum(&gm, State(0), &[0, 0, 0], 3, PhiMode::Exact) {
            Err(Error::InsufficientWordLength { len, depth, n }) => {
                assert_eq!((len, depth, n), (3, 2, 3));
            }
            other => panic!("expected length error, got {other:?}"),
        }
        // sup/inf close the gap over admissible continuations
        let sup = pot.phi_sum(&gm, State(0), &[0, 0, 0], 3, PhiMode::Sup).unwrap();
        let inf = pot.phi_sum(&gm, State(0), &[0, 0, 0], 3, PhiMode::Inf).unwrap();
        assert!(sup >= inf);
        let ext = pot.phi_sum(&gm, State(0), &[0, 0, 0], 3, PhiMode::Extend(&[1])).unwrap();
        assert!(inf <= ext && ext <= sup);
    }

    #[test]
    fn summability_bounds_on_fixtures() {
        let gm = gm();
        let pot = Potential::zero(&gm);
        let (m, big) = pot.summability_bounds(&gm, State(0)).unwrap();
        // column 0 sees both symbols, column 1 only symbol 0
        assert_eq!((m, big), (1.0, 2.0));

        let geo = geo(20);
        let pot = Potential::geometric(&geo);
        let (m, big) = pot.summability_bounds(&geo, State(0)).unwrap();
        let expect = 1.0 - 0.5f64.powi(20);
        assert!((m - expect).abs() < 1e-15);
        assert!((big - expect).abs() < 1e-15);
    }

    #[test]
    fn empty_fiber_detected() {
        let shift = RandomShift::from_matrices(
            BaseSystem::cyclic(1),
            vec![vec![vec![1, 0], vec![1, 0]]],
        )
        .unwrap();
        let pot = Potential::zero(&shift);
        match pot.summability_bounds(&shift, State(0)) {
            Err(Error::EmptyFiber { state, symbol }) => assert_eq!((state, symbol), (0, 1)),
            other => panic!("expected empty fiber, got {other:?}"),
        }
    }

    #[test]
    fn variations_vanish_beyond_depth() {
        let fs = fs2();
        let pot = Potential::bernoulli(&fs, &[0.3, 0.7]).unwrap();
        assert!(pot.variation(State(0), 0) > 0.0);
        assert_eq!(pot.variation(State(0), 1), 0.0);
        assert_eq!(pot.variation(State(0), 5), 0.0);

        let gm = gm();
        let mats = vec![vec![vec![0.5, 2.0], vec![1.0, 0.0]]];
        let pot = Potential::matrix_log(&gm, &mats).unwrap();
        // rows group depth-2 tuples: row 0 spreads log 2 − log 0.5, row 1 is a point
        assert!((pot.variation(State(0), 1) - (2.0f64.ln() - 0.5f64.ln())).abs() < 1e-14);
        assert_eq!(pot.variation(State(0), 2), 0.0);
    }

    #[test]
    fn conditions_hold_on_geo_with_caveat() {
        let geo = geo(20);
        let pot = Potential::geometric(&geo);
        let rep = pot.check_conditions(&geo).unwrap();
        assert!(rep.all_hold());
        assert!(rep.truncation_caveat);
        assert!((rep.sup_phi + std::f64::consts::LN_2).abs() < 1e-15);

        let gm = gm();
        let rep = Potential::zero(&gm).check_conditions(&gm).unwrap();
        assert!(rep.all_hold());
        assert!(!rep.truncation_caveat);
        assert_eq!(rep.log_m[0], 0.0);
        assert!((rep.log_big_m[0] - 2.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn deep_tables_from_fn() {
        let gm = gm();
        let pot = Potential::from_fn(&gm, 3, |_, w| -((w[0] + w[1] + w[2]) as f64)).unwrap();
        assert_eq!(pot.depth(), 3);
        assert_eq!(pot.value(State(0), &[0, 1, 0]), -1.0);
        // only admissible tuples are materialized
        assert_eq!(pot.variation(State(0), 3), 0.0);
        assert!(pot.variation(State(0), 1) > 0.0);
        let sum = pot.phi_sum(&gm, State(0), &[0, 1, 0, 0, 1], 3, PhiMode::Exact).unwrap();
        assert_eq!(sum, -(1.0 + 1.0 + 1.0));
    }
}
