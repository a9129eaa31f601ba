//! Closed-form tail bounds and exact martingale diagnostics.
//!
//! The bounds are evaluated in `f64`. The martingale quantities are exact
//! rationals so the identities they satisfy can be asserted with `==`.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::partial_sums;
use crate::seq::{ChildSequence, SequenceInvariants};
use crate::Rational;

pub const WIDTH_EXPONENT: f64 = 1472.0;
pub const HEIGHT_EXPONENT: f64 = 23552.0;
pub const PATHMAX_EXPONENT: f64 = 368.0;

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `P(w >= m + 2) <= 3 exp(-m^2 / (1472 |c|^2))`.
pub fn width_tail_bound(m: u64, inv: &SequenceInvariants) -> Result<f64> {
    if inv.norm_sq == 0 {
        return Err(Error::ZeroNormSq);
    }
    let m = m as f64;
    Ok(3.0 * (-m * m / (WIDTH_EXPONENT * inv.norm_sq as f64)).exp())
}

/// `P(h >= m) <= 7 exp(-m^2 / (23552 |c|^2 1_c^2))`.
pub fn height_tail_bound(m: u64, inv: &SequenceInvariants) -> Result<f64> {
    let one = inv.one_factor.as_ref().ok_or(Error::DegenerateSequence)?;
    let one = to_f64(one);
    let m = m as f64;
    Ok(7.0 * (-m * m / (HEIGHT_EXPONENT * inv.norm_sq as f64 * one * one)).exp())
}

/// `P(max_i S_i(rotated) >= m + 2) <= 3 exp(-m^2 / (368 |c|^2))`.
pub fn pathmax_bound(m: u64, inv: &SequenceInvariants) -> Result<f64> {
    if inv.norm_sq == 0 {
        return Err(Error::ZeroNormSq);
    }
    let m = m as f64;
    Ok(3.0 * (-m * m / (PATHMAX_EXPONENT * inv.norm_sq as f64)).exp())
}

/// `P(min_{i <= n/2} S_i <= -(t+1)) <= exp(-t^2 / (8(3+2a)n + 8t/3))`
/// for a uniformly shuffled sequence, with `a = |c|^2 / n`.
pub fn prefixmin_bound(t: f64, inv: &SequenceInvariants) -> f64 {
    let a = to_f64(&inv.mean_sq);
    let n = inv.n as f64;
    (-t * t / (8.0 * (3.0 + 2.0 * a) * n + 8.0 * t / 3.0)).exp()
}

/// `P(max_i X_i >= t) <= exp(-t^2 / (2v(1 + bt/(3v))))` for a martingale
/// with predictable variation at most `v` and increments at most `b`.
pub fn mcdiarmid_bound(t: f64, v: f64, b: f64) -> Result<f64> {
    if v.is_nan() || v <= 0.0 {
        return Err(Error::NonPositiveVariance(v));
    }
    Ok((-t * t / (2.0 * v * (1.0 + b * t / (3.0 * v)))).exp())
}

/// Exact diagnostics for `M_i = (S_i + 1)/(n - i)` along one realized
/// ordering of a child sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MartingaleDiag {
    pub n: usize,
    /// `M_0, ..., M_{n-1}`.
    pub m_values: Vec<Rational>,
    /// `E[M_{i+1} | F_i]` for `i = 0..n-2`.
    pub cond_means: Vec<Rational>,
    /// `E[(M_{i+1} - M_i)^2 | F_i]` for `i = 0..n-2`.
    pub cond_vars: Vec<Rational>,
    /// `4(3 + 2a)/n^2`.
    pub variance_cap: Rational,
    /// `-4/n`.
    pub increment_floor: Rational,
    pub violations: DiagViolations,
}

/// Step indices `i` at which an invariant failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiagViolations {
    pub mean: Vec<usize>,
    pub increment: Vec<usize>,
    pub variance: Vec<usize>,
}

impl DiagViolations {
    pub fn is_empty(&self) -> bool {
        self.mean.is_empty() && self.increment.is_empty() && self.variance.is_empty()
    }

    pub fn total(&self) -> usize {
        self.mean.len() + self.increment.len() + self.variance.len()
    }
}

/// Treat `permuted` as the realized shuffle and compute, for every step,
/// the conditional law of the next entry given the prefix: each remaining
/// value `k` (multiplicity `n_k^i`) is next with probability `n_k^i/(n-i)`,
/// which moves `M` to `(S_i + k)/(n - i - 1)`.
///
/// The increment and variance checks cover `i < floor(n/2)`; the mean
/// identity is checked at every step.
pub fn martingale_diag(permuted: &ChildSequence) -> MartingaleDiag {
    let n = permuted.len();
    let ni = n as i128;
    let path = partial_sums(permuted);
    let s = path.values();
    let inv = permuted.invariants();

    let hist = permuted.histogram();
    let keys: Vec<i128> = hist.counts.keys().map(|&k| k as i128).collect();
    let index_of = |v: usize| keys.binary_search(&(v as i128)).expect("value in histogram");
    let mut remain: Vec<i128> = hist.counts.values().map(|&m| m as i128).collect();

    let m_values: Vec<Rational> = (0..n).map(|i| Rational::new(s[i] as i128 + 1, ni - i as i128)).collect();
    let variance_cap = Rational::from_integer(4) * (Rational::from_integer(3) + inv.mean_sq * 2)
        / Rational::from_integer(ni * ni);
    let increment_floor = Rational::new(-4, ni);
    let half = n / 2;

    let mut cond_means = Vec::with_capacity(n.saturating_sub(1));
    let mut cond_vars = Vec::with_capacity(n.saturating_sub(1));
    let mut violations = DiagViolations::default();
    for i in 0..n.saturating_sub(1) {
        let left = ni - i as i128;
        let si = s[i] as i128;
        let (mut first, mut second) = (0i128, 0i128);
        for (&k, &count) in keys.iter().zip(&remain) {
            if count > 0 {
                first += count * (si + k);
                second += count * (si + k) * (si + k);
            }
        }
        let mean = Rational::new(first, left * (left - 1));
        let second_moment = Rational::new(second, left * (left - 1) * (left - 1));
        let m_i = m_values[i];
        let var = second_moment - m_i * m_i;

        if mean != m_i {
            violations.mean.push(i);
        }
        if i < half {
            if m_values[i + 1] - m_i < increment_floor {
                violations.increment.push(i);
            }
            if var > variance_cap {
                violations.variance.push(i);
            }
        }
        cond_means.push(mean);
        cond_vars.push(var);
        remain[index_of(permuted.entries()[i])] -= 1;
    }
    debug_assert!(cond_vars.iter().all(|v| *v >= Rational::zero()));

    MartingaleDiag { n, m_values, cond_means, cond_vars, variance_cap, increment_floor, violations }
}
