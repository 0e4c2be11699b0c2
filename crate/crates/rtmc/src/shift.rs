//! Random topological Markov chains over a finite base.
//!
//! Each base state ω carries an alphabet of `ℓ_ω` symbols and a 0/1
//! transition matrix `α(ω)` of shape `ℓ_ω × ℓ_{θω}`; a word `w_0 … w_{n-1}`
//! is ω-admissible when every step `w_i → w_{i+1}` is allowed by `α(θ^i ω)`.
//! Countable alphabets are handled through a truncation level `L`
//! (restriction to symbols `< L`); adjacency generators declare whether a
//! certificate verified at level `L` can be trusted for the tail, and the
//! verifier refuses to certify when it cannot.
//!
//! The type invariant "every row has at least one admissible successor"
//! (no point has an empty forward fiber) is checked at construction.

use crate::base::{BaseSystem, State, StateSet};
use crate::error::{Error, Result};

/// A finite word together with the base state it is read at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub anchor: State,
    pub symbols: Vec<usize>,
}

/// Alphabet declaration per environment label.
#[derive(Clone, Debug)]
pub enum Alphabet {
    /// Finite alphabet sizes, indexed by environment label.
    Finite(Vec<usize>),
    /// Countably infinite alphabet, materialized up to the truncation level.
    Countable,
}

/// How transition matrices are produced.
#[derive(Clone, Debug)]
pub enum AdjacencyRule {
    /// One explicit 0/1 matrix per environment label.
    Explicit(Vec<Vec<Vec<bool>>>),
    /// Full shift: every transition allowed.
    Full,
    /// Band: `i → j` allowed iff `i ≤ j ≤ i + width` (monotone drift up).
    Band { width: usize },
    /// Renewal: row 0 is full, row `i ≥ 1` steps down to `i − 1`.
    Renewal,
}

impl AdjacencyRule {
    fn allows(&self, label: usize, i: usize, j: usize) -> bool {
        match self {
            AdjacencyRule::Explicit(mats) => mats[label][i][j],
            AdjacencyRule::Full => true,
            AdjacencyRule::Band { width } => j >= i && j <= i + width,
            AdjacencyRule::Renewal => i == 0 || j + 1 == i,
        }
    }

    /// Can an image certificate checked below the truncation level be
    /// trusted for tail symbols?
    fn images_tail_safe(&self) -> bool {
        matches!(self, AdjacencyRule::Explicit(_) | AdjacencyRule::Full)
    }

    /// Same question for preimages; renewal shifts stay safe when the
    /// certificate routes through symbol 0.
    fn preimages_tail_safe(&self, i_bp_all_contain_zero: bool) -> bool {
        match self {
            AdjacencyRule::Explicit(_) | AdjacencyRule::Full => true,
            AdjacencyRule::Renewal => i_bp_all_contain_zero,
            AdjacencyRule::Band { .. } => false,
        }
    }
}

/// A random shift space: base dynamics plus per-state truncated fibers.
#[derive(Clone, Debug)]
pub struct RandomShift {
    base: BaseSystem,
    sizes: Vec<usize>,
    countable: bool,
    rule: AdjacencyRule,
    /// Materialized adjacency per state: `adj[s][i][j]`.
    adj: Vec<Vec<Vec<bool>>>,
    truncation: usize,
    word_cap: u64,
}

pub const DEFAULT_WORD_CAP: u64 = 10_000_000;

impl RandomShift {
    pub fn new(
        base: BaseSystem,
        alphabet: Alphabet,
        rule: AdjacencyRule,
        truncation: usize,
    ) -> Result<Self> {
        let sizes: Vec<usize> = match &alphabet {
            Alphabet::Finite(per_label) => base
                .states()
                .map(|s| {
                    per_label.get(base.label(s)).copied().ok_or_else(|| {
                        Error::Config(format!("no alphabet size for label {}", base.label(s)))
                    })
                })
                .collect::<Result<_>>()?,
            Alphabet::Countable => {
                if truncation == 0 {
                    return Err(Error::Config(
                        "countable alphabet needs a positive truncation level".into(),
                    ));
                }
                vec![truncation; base.len()]
            }
        };
        let countable = matches!(alphabet, Alphabet::Countable);
        if sizes.iter().any(|&l| l == 0) {
            return Err(Error::Config("alphabet sizes must be positive".into()));
        }
        if let AdjacencyRule::Explicit(mats) = &rule {
            for s in base.states() {
                let next = base.advance(s, 1);
                let m = mats.get(base.label(s)).ok_or_else(|| {
                    Error::Config(format!("no adjacency matrix for label {}", base.label(s)))
                })?;
                if m.len() != sizes[s.0] || m.iter().any(|row| row.len() != sizes[next.0]) {
                    return Err(Error::Config(format!(
                        "adjacency at state {} must be {}x{}",
                        s.0, sizes[s.0], sizes[next.0]
                    )));
                }
            }
        }
        let mut adj = Vec::with_capacity(base.len());
        for s in base.states() {
            let next = base.advance(s, 1);
            let rows: Vec<Vec<bool>> = (0..sizes[s.0])
                .map(|i| (0..sizes[next.0]).map(|j| rule.allows(base.label(s), i, j)).collect())
                .collect();
            for (i, row) in rows.iter().enumerate() {
                if !row.iter().any(|b| *b) {
                    return Err(Error::Config(format!(
                        "row-sum invariant violated: symbol {i} at state {} has no successor",
                        s.0
                    )));
                }
            }
            adj.push(rows);
        }
        Ok(RandomShift { base, sizes, countable, rule, adj, truncation, word_cap: DEFAULT_WORD_CAP })
    }

    /// Finite shift from one explicit 0/1 matrix per label.
    pub fn from_matrices(base: BaseSystem, mats: Vec<Vec<Vec<u8>>>) -> Result<Self> {
        let sizes: Vec<usize> = mats.iter().map(|m| m.len()).collect();
        let bools = mats
            .into_iter()
            .map(|m| m.into_iter().map(|row| row.into_iter().map(|x| x != 0).collect()).collect())
            .collect();
        Self::new(base, Alphabet::Finite(sizes), AdjacencyRule::Explicit(bools), 0)
    }

    pub fn with_word_cap(mut self, cap: u64) -> Self {
        self.word_cap = cap;
        self
    }

    pub fn base(&self) -> &BaseSystem {
        &self.base
    }

    pub fn is_countable(&self) -> bool {
        self.countable
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn word_cap(&self) -> u64 {
        self.word_cap
    }

    pub fn rule(&self) -> &AdjacencyRule {
        &self.rule
    }

    /// ℓ_ω — alphabet size at a state (after truncation).
    pub fn alphabet_len(&self, s: State) -> usize {
        self.sizes[s.0]
    }

    /// α_{ij}(ω): may symbol `i` at ω be followed by symbol `j` at θω?
    pub fn is_adjacent(&self, s: State, i: usize, j: usize) -> bool {
        i < self.sizes[s.0] && j < self.sizes[self.base.advance(s, 1).0] && self.adj[s.0][i][j]
    }

    /// Successors of symbol `i` at state `s`, in increasing order.
    pub fn successors(&self, s: State, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[s.0][i];
        row.iter().enumerate().filter(|(_, b)| **b).map(|(j, _)| j)
    }

    /// Is `symbols` an ω-admissible word at state `s`?
    pub fn is_admissible(&self, s: State, symbols: &[usize]) -> bool {
        if symbols.is_empty() {
            return false;
        }
        if symbols[0] >= self.sizes[s.0] {
            return false;
        }
        let mut cur = s;
        for k in 0..symbols.len() - 1 {
            if !self.is_adjacent(cur, symbols[k], symbols[k + 1]) {
                return false;
            }
            cur = self.base.advance(cur, 1);
        }
        true
    }

    /// Number of ω-admissible words of length `n` (saturating DP count).
    pub fn word_count(&self, s: State, n: usize) -> u128 {
        assert!(n >= 1);
        let last = self.base.advance(s, n as i64 - 1);
        let mut dp: Vec<u128> = vec![1; self.sizes[last.0]];
        for t in (0..n - 1).rev() {
            let cur = self.base.advance(s, t as i64);
            let next_dp: Vec<u128> = (0..self.sizes[cur.0])
                .map(|i| {
                    self.successors(cur, i)
                        .fold(0u128, |acc, j| acc.saturating_add(dp[j]))
                })
                .collect();
            dp = next_dp;
        }
        dp.iter().fold(0u128, |acc, c| acc.saturating_add(*c))
    }

    /// Count of words in `W_n^ω(a, b)`: starting at `a`, last symbol
    /// connectable to `b` at θ^n ω.
    pub fn count_words_between(&self, s: State, n: usize, a: usize, b: usize) -> u128 {
        assert!(n >= 1);
        if a >= self.sizes[s.0] || b >= self.sizes[self.base.advance(s, n as i64).0] {
            return 0;
        }
        let last = self.base.advance(s, n as i64 - 1);
        let mut dp: Vec<u128> =
            (0..self.sizes[last.0]).map(|i| u128::from(self.adj[last.0][i][b])).collect();
        for t in (0..n - 1).rev() {
            let cur = self.base.advance(s, t as i64);
            let next_dp: Vec<u128> = (0..self.sizes[cur.0])
                .map(|i| {
                    self.successors(cur, i)
                        .fold(0u128, |acc, j| acc.saturating_add(dp[j]))
                })
                .collect();
            dp = next_dp;
        }
        dp[a]
    }

    fn enumerate(
        &self,
        s: State,
        n: usize,
        first: Option<usize>,
        terminal: Option<usize>,
    ) -> Result<Vec<Word>> {
        let count = match first {
            None => self.word_count(s, n),
            Some(a) => match terminal {
                None => self.count_from(s, n, a),
                Some(b) => self.count_words_between(s, n, a, b),
            },
        };
        if count > u128::from(self.word_cap) {
            return Err(Error::Overflow { count, cap: self.word_cap });
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(n);
        self.dfs(s, n, first, terminal, &mut prefix, &mut out);
        Ok(out)
    }

    fn count_from(&self, s: State, n: usize, a: usize) -> u128 {
        if a >= self.sizes[s.0] {
            return 0;
        }
        let last = self.base.advance(s, n as i64 - 1);
        let mut dp: Vec<u128> = vec![1; self.sizes[last.0]];
        for t in (0..n - 1).rev() {
            let cur = self.base.advance(s, t as i64);
            let next_dp: Vec<u128> = (0..self.sizes[cur.0])
                .map(|i| {
                    self.successors(cur, i)
                        .fold(0u128, |acc, j| acc.saturating_add(dp[j]))
                })
                .collect();
            dp = next_dp;
        }
        dp[a]
    }

    fn dfs(
        &self,
        s: State,
        n: usize,
        first: Option<usize>,
        terminal: Option<usize>,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Word>,
    ) {
        if prefix.len() == n {
            if let Some(b) = terminal {
                let last_state = self.base.advance(s, n as i64 - 1);
                let end_state = self.base.advance(s, n as i64);
                if b >= self.sizes[end_state.0] || !self.adj[last_state.0][*prefix.last().unwrap()][b]
                {
                    return;
                }
            }
            out.push(Word { anchor: s, symbols: prefix.clone() });
            return;
        }
        let pos_state = self.base.advance(s, prefix.len() as i64);
        if prefix.is_empty() {
            let range: Vec<usize> = match first {
                Some(a) if a < self.sizes[pos_state.0] => vec![a],
                Some(_) => vec![],
                None => (0..self.sizes[pos_state.0]).collect(),
            };
            for a in range {
                prefix.push(a);
                self.dfs(s, n, first, terminal, prefix, out);
                prefix.pop();
            }
        } else {
            let prev_state = self.base.advance(s, prefix.len() as i64 - 1);
            let prev = *prefix.last().unwrap();
            for j in 0..self.sizes[pos_state.0] {
                if self.adj[prev_state.0][prev][j] {
                    prefix.push(j);
                    self.dfs(s, n, first, terminal, prefix, out);
                    prefix.pop();
                }
            }
        }
    }

    /// All ω-admissible words of length `n`, lexicographically sorted.
    /// Errors with `Overflow` when the count exceeds the word cap.
    pub fn admissible_words(&self, s: State, n: usize) -> Result<Vec<Word>> {
        assert!(n >= 1);
        self.enumerate(s, n, None, None)
    }

    /// `W_n^ω(a, b)`: admissible words starting at `a` whose last symbol may
    /// be followed by `b` at θ^n ω. Lexicographically sorted.
    pub fn words_between(&self, s: State, n: usize, a: usize, b: usize) -> Result<Vec<Word>> {
        assert!(n >= 1);
        self.enumerate(s, n, Some(a), Some(b))
    }

    /// States at which the word is admissible (its Ω-set). Extendability to
    /// an infinite sequence is automatic from the row-sum invariant.
    pub fn omega_set(&self, symbols: &[usize]) -> StateSet {
        let mut set = StateSet::empty(self.base.len());
        for s in self.base.states() {
            if self.is_admissible(s, symbols) {
                set.insert(s);
            }
        }
        set
    }

    /// Horizon-certified mixing bound `N_ab(ω)`: the smallest `N` such that
    /// for every `N ≤ n ≤ horizon` with `b` admissible at θ^n ω there is a
    /// word in `W_n^ω(a, b)`. The true mixing variable may exceed the
    /// horizon, in which case this is a certified lower bound.
    pub fn mixing_time(&self, s: State, a: usize, b: usize, horizon: usize) -> Result<usize> {
        if a >= self.sizes[s.0] {
            return Err(Error::AnchorMissing { state: s.0, symbol: a });
        }
        let mut last_failure = None;
        for n in 1..=horizon {
            let end = self.base.advance(s, n as i64);
            if b >= self.sizes[end.0] {
                continue; // θ^n ω outside Ω_b: the requirement is vacuous
            }
            if self.count_words_between(s, n, a, b) == 0 {
                last_failure = Some(n);
            }
        }
        match last_failure {
            None => Ok(1),
            Some(n) if n == horizon => Err(Error::NotMixedWithinHorizon { a, b, horizon }),
            Some(n) => Ok(n + 1),
        }
    }
}

/// Certificate data for the big images/preimages property: the positive-
/// measure state sets and the finite symbol families attached to them.
#[derive(Clone, Debug)]
pub struct BipCertificate {
    pub omega_bi: StateSet,
    pub omega_bp: StateSet,
    /// `i_bi[s]` is the finite image family at state `s` (only read on Ω_bi).
    pub i_bi: Vec<Vec<usize>>,
    /// `i_bp[s]` is the finite preimage family at state `s` (only read on Ω_bp).
    pub i_bp: Vec<Vec<usize>>,
}

impl BipCertificate {
    /// Certificate with the same families at every state.
    pub fn uniform(n_states: usize, i_bi: Vec<usize>, i_bp: Vec<usize>) -> Self {
        BipCertificate {
            omega_bi: StateSet::full(n_states),
            omega_bp: StateSet::full(n_states),
            i_bi: vec![i_bi; n_states],
            i_bp: vec![i_bp; n_states],
        }
    }

    /// Union of the per-state image families.
    pub fn global_bi(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.omega_bi.iter().flat_map(|s| self.i_bi[s.0].clone()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Union of the per-state preimage families.
    pub fn global_bp(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.omega_bp.iter().flat_map(|s| self.i_bp[s.0].clone()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Outcome of checking a certificate at the current truncation level.
#[derive(Clone, Debug)]
pub struct BipReport {
    pub images_ok: bool,
    pub preimages_ok: bool,
    /// (state, symbol) pairs where the image family misses a successor.
    pub image_witnesses: Vec<(State, usize)>,
    /// (state, symbol) pairs where the preimage family misses a predecessor.
    pub preimage_witnesses: Vec<(State, usize)>,
    pub omega_bi_weight: f64,
    pub omega_bp_weight: f64,
    pub truncation: usize,
}

impl BipReport {
    pub fn holds(&self) -> bool {
        self.images_ok && self.preimages_ok
    }
}

/// Check a big-images/preimages certificate against the (truncated) shift.
///
/// A failing check is reported with witnesses; `TruncationUnsound` is an
/// error raised when the truncated check *passes* but the adjacency
/// generator cannot guarantee tail symbols behave the same way.
pub fn verify_bip(shift: &RandomShift, cert: &BipCertificate) -> Result<BipReport> {
    let base = shift.base();
    let mut image_witnesses = Vec::new();
    let mut preimage_witnesses = Vec::new();
    let mut images_ok = !cert.omega_bi.is_empty();
    let mut preimages_ok = !cert.omega_bp.is_empty();

    for s in cert.omega_bi.iter() {
        let prev = base.advance(s, -1);
        for b in &cert.i_bi[s.0] {
            if *b >= shift.alphabet_len(s) {
                return Err(Error::Config(format!(
                    "image family at state {} contains symbol {b} outside the fiber",
                    s.0
                )));
            }
        }
        for a in 0..shift.alphabet_len(prev) {
            if !cert.i_bi[s.0].iter().any(|&b| shift.is_adjacent(prev, a, b)) {
                images_ok = false;
                image_witnesses.push((s, a));
            }
        }
    }
    for s in cert.omega_bp.iter() {
        let prev = base.advance(s, -1);
        for b in &cert.i_bp[s.0] {
            if *b >= shift.alphabet_len(prev) {
                return Err(Error::Config(format!(
                    "preimage family at state {} contains symbol {b} outside the fiber at θ⁻¹",
                    s.0
                )));
            }
        }
        for a in 0..shift.alphabet_len(s) {
            if !cert.i_bp[s.0].iter().any(|&b| shift.is_adjacent(prev, b, a)) {
                preimages_ok = false;
                preimage_witnesses.push((s, a));
            }
        }
    }

    if shift.is_countable() {
        let zero_routed = cert.omega_bp.iter().all(|s| cert.i_bp[s.0].contains(&0));
        if images_ok && !shift.rule().images_tail_safe() {
            return Err(Error::TruncationUnsound(format!(
                "image certificate passes at truncation {} but the adjacency rule gives no tail guarantee",
                shift.truncation()
            )));
        }
        if preimages_ok && !shift.rule().preimages_tail_safe(zero_routed) {
            return Err(Error::TruncationUnsound(format!(
                "preimage certificate passes at truncation {} but the adjacency rule gives no tail guarantee",
                shift.truncation()
            )));
        }
    }

    let omega_bi_weight = cert.omega_bi.iter().map(|s| base.weight(s)).sum();
    let omega_bp_weight = cert.omega_bp.iter().map(|s| base.weight(s)).sum();
    Ok(BipReport {
        images_ok,
        preimages_ok,
        image_witnesses,
        preimage_witnesses,
        omega_bi_weight,
        omega_bp_weight,
        truncation: shift.truncation(),
    })
}

/// Connectivity thresholds derived from a verified certificate.
///
/// `α_ω` bounds the word lengths after which `a` connects forward to every
/// admissible symbol: it is the first time `≥ max_c N_{ac}(ω)` (over the
/// global preimage family) at which the orbit sits in Ω_bp.  `β_ω` is the
/// preimage analogue, built by routing an arbitrary symbol one step into a
/// big-image family and then mixing into `a`:
/// `β_ω = min{n ≥ 1 : θ^{-(n-1)}ω ∈ Ω_bi and n-1 ≥ max_c N_{ca}(θ^{-(n-1)}ω)}`.
/// Both are certified only up to the horizon.
pub fn alpha_beta(
    shift: &RandomShift,
    cert: &BipCertificate,
    s: State,
    a: usize,
    horizon: usize,
) -> Result<(usize, usize)> {
    let base = shift.base();
    // alpha
    let mut n_omega = 1usize;
    for &c in &cert.global_bp() {
        n_omega = n_omega.max(shift.mixing_time(s, a, c, horizon)?);
    }
    let mut alpha = None;
    for n in n_omega..=horizon {
        if cert.omega_bp.contains(base.advance(s, n as i64)) {
            alpha = Some(n);
            break;
        }
    }
    let alpha = alpha.ok_or(Error::NoReturn(horizon))?;
    // beta
    let mut beta = None;
    'outer: for n in 1..=horizon {
        let mid = base.advance(s, -((n as i64) - 1));
        if !cert.omega_bi.contains(mid) {
            continue;
        }
        for &c in &cert.i_bi[mid.0] {
            if n < 2 {
                // n-1 = 0 mixing steps can only work when c = a; skip to be safe
                if c != a {
                    continue 'outer;
                }
                continue;
            }
            match shift.mixing_time(mid, c, a, horizon) {
                Ok(nc) if n - 1 >= nc => {}
                _ => continue 'outer,
            }
        }
        beta = Some(n);
        break;
    }
    let beta = beta.ok_or(Error::NoReturn(horizon))?;
    Ok((alpha, beta))
}
