//! Finite base systems: the environment dynamics `θ` on finitely many
//! states, with invariant weights.
//!
//! Two realizations are supported.  `cyclic` is a single θ-cycle through
//! `p` states with uniform weights (deterministic periodic environment).
//! `sampled-path` takes one realized trajectory of environment labels and
//! wraps it into a cycle: states are path positions, `θ` is the index
//! shift, weights are the empirical (uniform) weights.  Both are honest
//! measure-preserving invertible systems; the wrap introduces an O(1/T)
//! periodization bias relative to the sampled process, which callers
//! surface in reports.

use crate::error::{Error, Result};

/// Index of a base state (a point of the environment space).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(pub usize);

/// A subset of base states, with O(1) membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet {
    members: Vec<bool>,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet { members: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        StateSet { members: vec![true; n] }
    }

    pub fn from_indices(n: usize, idx: &[usize]) -> Self {
        let mut s = Self::empty(n);
        for &i in idx {
            s.members[i] = true;
        }
        s
    }

    pub fn insert(&mut self, s: State) {
        self.members[s.0] = true;
    }

    pub fn contains(&self, s: State) -> bool {
        self.members[s.0]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|b| *b)
    }

    /// Members in increasing state order.
    pub fn iter(&self) -> impl Iterator<Item = State> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| State(i))
    }

    pub fn intersect(&self, other: &StateSet) -> StateSet {
        StateSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| *a && *b)
                .collect(),
        }
    }
}

/// How the base system was realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseMode {
    Cyclic,
    SampledPath,
}

/// An invertible measure-preserving transformation of finitely many states.
#[derive(Clone, Debug)]
pub struct BaseSystem {
    mode: BaseMode,
    step: Vec<usize>,
    inv_step: Vec<usize>,
    weights: Vec<f64>,
    /// Environment label per state (identity for cyclic bases).
    labels: Vec<usize>,
}

impl BaseSystem {
    /// Single cycle 0 → 1 → … → p−1 → 0 with uniform weights.
    pub fn cyclic(period: usize) -> Self {
        assert!(period > 0, "base period must be positive");
        let step: Vec<usize> = (0..period).map(|i| (i + 1) % period).collect();
        let inv_step: Vec<usize> = (0..period).map(|i| (i + period - 1) % period).collect();
        BaseSystem {
            mode: BaseMode::Cyclic,
            step,
            inv_step,
            weights: vec![1.0 / period as f64; period],
            labels: (0..period).collect(),
        }
    }

    /// Wrap a realized label path into a cycle; states are path positions.
    pub fn sampled_path(labels: Vec<usize>) -> Self {
        assert!(!labels.is_empty(), "sampled path must be nonempty");
        let t = labels.len();
        let mut b = Self::cyclic(t);
        b.mode = BaseMode::SampledPath;
        b.labels = labels;
        b
    }

    /// The same states traversed in the opposite direction (θ replaced by
    /// θ⁻¹), used for time-reversed systems.
    pub fn reversed(&self) -> Self {
        BaseSystem {
            mode: self.mode,
            step: self.inv_step.clone(),
            inv_step: self.step.clone(),
            weights: self.weights.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn mode(&self) -> BaseMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.step.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn states(&self) -> impl Iterator<Item = State> {
        (0..self.len()).map(State)
    }

    pub fn weight(&self, s: State) -> f64 {
        self.weights[s.0]
    }

    pub fn label(&self, s: State) -> usize {
        self.labels[s.0]
    }

    /// θ^k ω for any integer k (the full group action).
    pub fn advance(&self, s: State, k: i64) -> State {
        let mut cur = s.0;
        if k >= 0 {
            for _ in 0..(k as usize) {
                cur = self.step[cur];
            }
        } else {
            for _ in 0..((-k) as usize) {
                cur = self.inv_step[cur];
            }
        }
        State(cur)
    }

    /// All n ∈ [1, n_max] with θ^n ω in the target set.
    pub fn return_times(&self, target: &StateSet, s: State, n_max: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = s;
        for n in 1..=n_max {
            cur = self.advance(cur, 1);
            if target.contains(cur) {
                out.push(n);
            }
        }
        out
    }

    /// First return time and landing state: (η(ω), θ̂ω).
    ///
    /// On a finite permutation a return happens within one orbit period or
    /// never, so `NoReturn` carries the number of states as its bound.
    pub fn induced_map(&self, target: &StateSet, s: State) -> Result<(usize, State)> {
        let bound = self.len();
        let mut cur = s;
        for n in 1..=bound {
            cur = self.advance(cur, 1);
            if target.contains(cur) {
                return Ok((n, cur));
            }
        }
        Err(Error::NoReturn(bound))
    }

    /// Jump transformation: (η*(ω), θ*ω) with η*(ω) = min{n ≥ N : θ^n ω ∈ target}.
    pub fn jump_map(&self, target: &StateSet, n_min: usize, s: State) -> Result<(usize, State)> {
        let bound = n_min + self.len();
        let mut cur = self.advance(s, n_min as i64 - 1);
        for n in n_min..=bound {
            cur = self.advance(cur, 1);
            if target.contains(cur) {
                return Ok((n, cur));
            }
        }
        Err(Error::NoReturn(bound))
    }

    /// Weighted average of `g` over the states; errors on non-finite values.
    pub fn average(&self, mut g: impl FnMut(State) -> f64) -> Result<f64> {
        let mut acc = 0.0;
        for s in self.states() {
            let v = g(s);
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            acc += self.weight(s) * v;
        }
        Ok(acc)
    }

    /// Length of the θ-orbit through `s` (the wrap period).
    pub fn orbit_period(&self, s: State) -> usize {
        let mut cur = self.advance(s, 1);
        let mut n = 1;
        while cur != s {
            cur = self.advance(cur, 1);
            n += 1;
        }
        n
    }
}

/// Return-time bookkeeping for a target set: first returns η and the
/// induced transformation θ̂ restricted to the target.
#[derive(Clone, Debug)]
pub struct ReturnStructure {
    pub target: StateSet,
    /// (η(ω), θ̂ω) for each ω in the target.
    pub first_return: Vec<(State, usize, State)>,
}

impl ReturnStructure {
    pub fn build(base: &BaseSystem, target: &StateSet) -> Result<Self> {
        let mut first_return = Vec::new();
        for s in target.iter() {
            let (eta, landing) = base.induced_map(target, s)?;
            first_return.push((s, eta, landing));
        }
        Ok(ReturnStructure { target: target.clone(), first_return })
    }

    /// k-th return time η_k(ω) = Σ of η along the induced orbit.
    pub fn eta_k(&self, base: &BaseSystem, target: &StateSet, s: State, k: usize) -> Result<usize> {
        let mut total = 0;
        let mut cur = s;
        for _ in 0..k {
            let (eta, landing) = base.induced_map(target, cur)?;
            total += eta;
            cur = landing;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advance_is_a_group_action() {
        let b = BaseSystem::cyclic(6);
        for s in b.states() {
            for j in -13i64..=13 {
                for k in -13i64..=13 {
                    assert_eq!(b.advance(b.advance(s, j), k), b.advance(s, j + k));
                }
            }
        }
        // identity
        assert_eq!(b.advance(State(4), 0), State(4));
    }

    #[test]
    fn induced_map_period_6() {
        // period-6 base, target {0,1}: from state 1 the next hit is 0 after 5 steps
        let b = BaseSystem::cyclic(6);
        let target = StateSet::from_indices(6, &[0, 1]);
        assert_eq!(b.induced_map(&target, State(1)).unwrap(), (5, State(0)));
        assert_eq!(b.induced_map(&target, State(0)).unwrap(), (1, State(1)));
    }

    #[test]
    fn jump_map_examples() {
        // period-5, target {0,2}, N=3, from 2: 2→3→4→0 lands after 3 steps
        let b = BaseSystem::cyclic(5);
        let target = StateSet::from_indices(5, &[0, 2]);
        assert_eq!(b.jump_map(&target, 3, State(2)).unwrap(), (3, State(0)));
        // period-3, target {0}, N=4, from 0: returns at 3,6,…, first ≥ 4 is 6
        let b = BaseSystem::cyclic(3);
        let target = StateSet::from_indices(3, &[0]);
        assert_eq!(b.jump_map(&target, 4, State(0)).unwrap(), (6, State(0)));
    }

    #[test]
    fn no_return_is_an_error() {
        let b = BaseSystem::cyclic(4);
        let target = StateSet::empty(4);
        assert!(matches!(b.induced_map(&target, State(0)), Err(Error::NoReturn(_))));
    }

    #[test]
    fn return_times_match_brute_scan() {
        let b = BaseSystem::cyclic(7);
        let target = StateSet::from_indices(7, &[2, 3]);
        let times = b.return_times(&target, State(6), 20);
        let brute: Vec<usize> = (1..=20)
            .filter(|&n| target.contains(b.advance(State(6), n as i64)))
            .collect();
        assert_eq!(times, brute);
    }

    #[test]
    fn eta_sums_to_period_over_a_full_induced_cycle() {
        // one full cycle of the induced map covers the base cycle exactly once
        let b = BaseSystem::cyclic(12);
        let target = StateSet::from_indices(12, &[0, 4, 5]);
        let rs = ReturnStructure::build(&b, &target).unwrap();
        let total: usize = rs.first_return.iter().map(|(_, eta, _)| *eta).sum();
        assert_eq!(total, 12);
        // η_k accumulates the same returns one at a time
        assert_eq!(rs.eta_k(&b, &target, State(0), 3).unwrap(), 12);
    }

    #[test]
    fn average_of_coboundary_vanishes() {
        let b = BaseSystem::cyclic(5);
        let g = |s: State| (s.0 as f64).sin();
        // g(θω) − g(ω) averages to zero on an invariant measure
        let avg = b
            .average(|s| g(b.advance(s, 1)) - g(s))
            .unwrap();
        assert!(avg.abs() < 1e-15);
        assert!(matches!(
            b.average(|s| if s.0 == 3 { f64::INFINITY } else { 0.0 }),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn sampled_path_wraps_with_labels() {
        let b = BaseSystem::sampled_path(vec![0, 1, 1, 0]);
        assert_eq!(b.mode(), BaseMode::SampledPath);
        assert_eq!(b.advance(State(3), 1), State(0));
        assert_eq!(b.label(State(2)), 1);
        assert_eq!(b.orbit_period(State(1)), 4);
    }
}
