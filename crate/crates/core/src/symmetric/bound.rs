//! Exact classical bound of a permutationally invariant expression.
//!
//! With `p = a + b` parties answering `+` to `M₀` and `q = a + c` answering
//! `+` to `M₁`, `Σ₀ = 2p − n`, `Σ₁ = 2q − n` and `D = 4a + n − 2p − 2q`. Only
//! the `δ` term depends on `a` beyond `(p, q)`, and linearly, so the minimum
//! over `a ∈ [max(0, p+q−n), min(p, q)]` sits at an endpoint. The search is
//! `O(n²)`.
//!
//! Coefficients that are dyadic rationals of moderate size are scaled to a
//! common power of two and the search runs in `i128`; otherwise it runs in
//! `f64`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetric::expression::{PIBellExpression, StrategyCounts};

/// Largest `n` accepted by [`classical_bound_symmetric`].
pub const MAX_SYMMETRIC_PARTIES: usize = 3000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricBound {
    /// `β_C = −min I` over deterministic strategies.
    pub beta_c: f64,
    pub witness: StrategyCounts,
    /// True when the search ran in exact integer arithmetic.
    pub exact: bool,
}

/// `v = m / 2^k` with `k` minimal, for `|v| < 2^64` and `k ≤ 64`.
fn dyadic(v: f64) -> Option<(i128, u32)> {
    if v == 0.0 {
        return Some((0, 0));
    }
    if !v.is_finite() || v.abs() >= 2f64.powi(64) {
        return None;
    }
    let bits = v.to_bits();
    let sign: i128 = if bits >> 63 == 1 { -1 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let tz = mant.trailing_zeros() as i32;
    let (mant, exp) = (mant >> tz, exp + tz);
    if exp >= 0 {
        Some((sign * ((mant as i128) << exp), 0))
    } else if -exp <= 64 {
        Some((sign * mant as i128, (-exp) as u32))
    } else {
        None
    }
}

/// Endpoints of the admissible `a` range for `(p, q)`.
fn a_range(n: usize, p: usize, q: usize) -> [usize; 2] {
    [(p + q).saturating_sub(n), p.min(q)]
}

fn counts(n: usize, p: usize, q: usize, a: usize) -> StrategyCounts {
    StrategyCounts::new(a, p - a, q - a, n + a - p - q)
}

/// `2^{K+1} · I` in exact integers, or `None` on overflow.
struct ExactForm {
    n: i128,
    coef: [i128; 5],
}

impl ExactForm {
    fn new(e: &PIBellExpression) -> Option<Self> {
        let parts: Vec<(i128, u32)> = e
            .coefficients()
            .iter()
            .map(|&c| dyadic(c))
            .collect::<Option<_>>()?;
        let k = parts.iter().map(|p| p.1).max().unwrap_or(0);
        let mut coef = [0i128; 5];
        for (slot, (m, kk)) in coef.iter_mut().zip(parts) {
            let scaled = m.checked_mul(1i128.checked_shl(k - kk)?)?;
            if scaled.unsigned_abs() >= 1u128 << 96 {
                return None;
            }
            *slot = scaled;
        }
        Some(Self {
            n: e.n as i128,
            coef,
        })
    }

    fn value(&self, p: usize, q: usize, a: usize) -> Option<i128> {
        let n = self.n;
        let s0 = 2 * p as i128 - n;
        let s1 = 2 * q as i128 - n;
        let d = 4 * a as i128 + n - 2 * p as i128 - 2 * q as i128;
        let [al, be, ga, de, ep] = self.coef;
        let terms = [
            al.checked_mul(2 * s0)?,
            be.checked_mul(2 * s1)?,
            ga.checked_mul(s0 * s0 - n)?,
            de.checked_mul(2 * (s0 * s1 - d))?,
            ep.checked_mul(s1 * s1 - n)?,
        ];
        terms.iter().try_fold(0i128, |acc, &t| acc.checked_add(t))
    }
}

fn scale_of(e: &PIBellExpression) -> u32 {
    e.coefficients()
        .iter()
        .filter_map(|&c| dyadic(c))
        .map(|p| p.1)
        .max()
        .unwrap_or(0)
}

fn search_exact(e: &PIBellExpression) -> Option<SymmetricBound> {
    let form = ExactForm::new(e)?;
    let n = e.n;
    let mut best: Option<(i128, StrategyCounts)> = None;
    for p in 0..=n {
        for q in 0..=n {
            for a in a_range(n, p, q) {
                let v = form.value(p, q, a)?;
                if best.map_or(true, |(b, _)| v < b) {
                    best = Some((v, counts(n, p, q, a)));
                }
            }
        }
    }
    let (v, witness) = best?;
    let denom = 2f64.powi(scale_of(e) as i32 + 1);
    Some(SymmetricBound {
        beta_c: -(v as f64) / denom,
        witness,
        exact: true,
    })
}

fn search_float(e: &PIBellExpression) -> SymmetricBound {
    let n = e.n;
    let mut best = (f64::INFINITY, StrategyCounts::new(0, 0, 0, n));
    for p in 0..=n {
        for q in 0..=n {
            for a in a_range(n, p, q) {
                let c = counts(n, p, q, a);
                let v = e.evaluate_counts(c);
                if v < best.0 {
                    best = (v, c);
                }
            }
        }
    }
    SymmetricBound {
        beta_c: -best.0,
        witness: best.1,
        exact: false,
    }
}

/// `β_C` and a minimizing strategy. Ties go to the first `(p, q, a)` in
/// lexicographic order with `a` at its lower endpoint first.
pub fn classical_bound_symmetric(e: &PIBellExpression) -> Result<SymmetricBound> {
    e.validate()?;
    if e.n > MAX_SYMMETRIC_PARTIES {
        return Err(Error::TooLarge {
            what: "symmetric enumeration parties",
            size: e.n as u128,
            limit: MAX_SYMMETRIC_PARTIES as u128,
        });
    }
    Ok(search_exact(e).unwrap_or_else(|| search_float(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_decomposition() {
        assert_eq!(dyadic(0.5), Some((1, 1)));
        assert_eq!(dyadic(-3.0), Some((-3, 0)));
        assert_eq!(dyadic(6.0), Some((6, 0)));
        assert_eq!(dyadic(0.375), Some((3, 3)));
        assert_eq!(dyadic(1e-300), None);
        assert_eq!(dyadic(f64::NAN), None);
    }

    #[test]
    fn murcia_seven() {
        let e = PIBellExpression::new(7, [-2.0, 0.0, 1.0, -1.0, 1.0]).unwrap();
        let b = classical_bound_symmetric(&e).unwrap();
        assert!(b.exact);
        assert_eq!(b.beta_c, 14.0);
        assert_eq!(e.evaluate_counts(b.witness), -14.0);
    }

    #[test]
    fn float_fallback_agrees() {
        let e = PIBellExpression::new(9, [0.1, -0.3, 0.7, 0.2, -0.9]).unwrap();
        let exact = search_exact(&e).unwrap();
        let float = search_float(&e);
        assert!((exact.beta_c - float.beta_c).abs() < 1e-9);
        let tiny = PIBellExpression::new(5, [1e-300, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let b = classical_bound_symmetric(&tiny).unwrap();
        assert!(!b.exact);
        assert!((b.beta_c - 5.0).abs() < 1e-12);
    }

    #[test]
    fn guard() {
        let e = PIBellExpression::new(3001, [1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            classical_bound_symmetric(&e),
            Err(Error::TooLarge { .. })
        ));
    }
}
