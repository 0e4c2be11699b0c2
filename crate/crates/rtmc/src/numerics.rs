//! Log-space accumulation helpers.
//!
//! All partition functions in this crate grow or decay geometrically, so
//! sums of the form `Σ exp(t_i)` are evaluated with a max shift:
//! `log Σ exp(t_i) = m + log Σ exp(t_i - m)` with `m = max t_i`.  Empty
//! sums are `-inf`, which exponentiates to an exact zero weight.

/// `log(exp(a) + exp(b))` without overflow; `-inf` acts as the zero element.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log Σ exp(t)` over a slice, max-shifted. Returns `-inf` on empty input.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.iter().map(|t| (t - m).exp()).sum();
    m + s.ln()
}

/// Streaming log-sum-exp accumulator: keeps a running max and the sum of
/// shifted exponentials, so series with millions of terms never materialize.
#[derive(Clone, Copy, Debug)]
pub struct LogSumAcc {
    max: f64,
    sum: f64,
}

impl LogSumAcc {
    pub fn new() -> Self {
        LogSumAcc { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    /// Add one term `exp(t)` to the accumulated sum.
    pub fn add(&mut self, t: f64) {
        if t == f64::NEG_INFINITY {
            return;
        }
        if t <= self.max {
            self.sum += (t - self.max).exp();
        } else {
            // re-shift the accumulated mass to the new max
            self.sum = self.sum * (self.max - t).exp() + 1.0;
            self.max = t;
        }
    }

    /// `log` of the accumulated sum; `-inf` if nothing was added.
    pub fn log_value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

impl Default for LogSumAcc {
    fn default() -> Self {
        Self::new()
    }
}

/// Least-squares slope of `y` against `x` (used for empirical decay rates).
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}
