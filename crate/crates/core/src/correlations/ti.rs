//! Two-body Bell expressions invariant under translations of a ring of `n`
//! parties:
//!
//! `α S₀ + β S₁ + Σ_{k=1}^{⌊n/2⌋} (γ_k T₀₀^{(k)} + ε_k T₁₁^{(k)}) + Σ_{k=1}^{n−1} ω_k T₀₁^{(k)} ≥ −β_C`
//!
//! with `T_ij^{(k)} = Σ_m ⟨M_i^{(m)} M_j^{(m+k mod n)}⟩`. All `k` are summed
//! as listed, so for even `n` the `k = n/2` equal-setting terms count each
//! pair twice and `ω_k`, `ω_{n−k}` stay independent.

use serde::{Deserialize, Serialize};

use crate::correlations::behavior::Scenario;
use crate::correlations::functional::BellFunctional;
use crate::error::{Error, Result};

/// Largest `n` for the `4^n` enumeration.
pub const MAX_TI_PARTIES: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TIExpression {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `γ_1 … γ_{⌊n/2⌋}`.
    pub gamma: Vec<f64>,
    /// `ε_1 … ε_{⌊n/2⌋}`.
    pub epsilon: Vec<f64>,
    /// `ω_1 … ω_{n−1}`.
    pub omega: Vec<f64>,
}

impl TIExpression {
    /// All coefficients zero.
    pub fn zero(n: usize) -> Result<Self> {
        let e = Self {
            n,
            alpha: 0.0,
            beta: 0.0,
            gamma: vec![0.0; n / 2],
            epsilon: vec![0.0; n / 2],
            omega: vec![0.0; n.saturating_sub(1)],
        };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid("a ring needs at least two parties"));
        }
        let half = self.n / 2;
        for (name, v, len) in [
            ("gamma", &self.gamma, half),
            ("epsilon", &self.epsilon, half),
            ("omega", &self.omega, self.n - 1),
        ] {
            if v.len() != len {
                return Err(Error::invalid(format!(
                    "{name} needs {len} entries, got {}",
                    v.len()
                )));
            }
        }
        let all = [self.alpha, self.beta]
            .into_iter()
            .chain(self.gamma.iter().copied())
            .chain(self.epsilon.iter().copied())
            .chain(self.omega.iter().copied());
        for v in all {
            if !v.is_finite() {
                return Err(Error::invalid("non-finite coefficient"));
            }
        }
        Ok(())
    }

    /// Value on a deterministic assignment of `±1` outcomes `m0[i]`, `m1[i]`.
    pub fn evaluate(&self, m0: &[i8], m1: &[i8]) -> f64 {
        let n = self.n;
        let at = |v: &[i8], i: usize| v[i % n] as f64;
        let s0: f64 = m0.iter().map(|&v| v as f64).sum();
        let s1: f64 = m1.iter().map(|&v| v as f64).sum();
        let mut value = self.alpha * s0 + self.beta * s1;
        for k in 1..=n / 2 {
            let t00: f64 = (0..n).map(|i| at(m0, i) * at(m0, i + k)).sum();
            let t11: f64 = (0..n).map(|i| at(m1, i) * at(m1, i + k)).sum();
            value += self.gamma[k - 1] * t00 + self.epsilon[k - 1] * t11;
        }
        for k in 1..n {
            let t01: f64 = (0..n).map(|i| at(m0, i) * at(m1, i + k)).sum();
            value += self.omega[k - 1] * t01;
        }
        value
    }

    /// The same expression as a functional on `(n, 2, 2)` behaviors.
    pub fn to_functional(&self) -> Result<BellFunctional> {
        self.validate()?;
        let n = self.n;
        let mut f = BellFunctional::zero(Scenario::new(n, 2, 2)?)?;
        let single = |p: usize, x: usize| {
            let mut s = vec![None; n];
            s[p] = Some(x);
            s
        };
        let pair = |p: usize, x: usize, q: usize, y: usize| {
            let mut s = vec![None; n];
            s[p] = Some(x);
            s[q] = Some(y);
            s
        };
        for p in 0..n {
            f.add_correlator(&single(p, 0), self.alpha)?;
            f.add_correlator(&single(p, 1), self.beta)?;
        }
        for k in 1..=n / 2 {
            for p in 0..n {
                let q = (p + k) % n;
                f.add_correlator(&pair(p, 0, q, 0), self.gamma[k - 1])?;
                f.add_correlator(&pair(p, 1, q, 1), self.epsilon[k - 1])?;
            }
        }
        for k in 1..n {
            for p in 0..n {
                f.add_correlator(&pair(p, 0, (p + k) % n, 1), self.omega[k - 1])?;
            }
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TIBound {
    /// `−min` of the expression over deterministic strategies.
    pub beta_c: f64,
    pub m0: Vec<i8>,
    pub m1: Vec<i8>,
}

/// Exhaustive `4^n` search; the first minimizing assignment in the order
/// where bit `2i` of the counter sets `M₀^{(i)} = −1` and bit `2i+1` sets
/// `M₁^{(i)} = −1` is reported.
pub fn ti_classical_bound(expr: &TIExpression) -> Result<TIBound> {
    expr.validate()?;
    let n = expr.n;
    if n > MAX_TI_PARTIES {
        return Err(Error::TooLarge {
            what: "translation-invariant enumeration parties",
            size: n as u128,
            limit: MAX_TI_PARTIES as u128,
        });
    }
    let mut best = (f64::INFINITY, 0u64);
    let mut m0 = vec![1i8; n];
    let mut m1 = vec![1i8; n];
    for code in 0..(1u64 << (2 * n)) {
        for i in 0..n {
            m0[i] = if code >> (2 * i) & 1 == 1 { -1 } else { 1 };
            m1[i] = if code >> (2 * i + 1) & 1 == 1 { -1 } else { 1 };
        }
        let v = expr.evaluate(&m0, &m1);
        if v < best.0 {
            best = (v, code);
        }
    }
    let code = best.1;
    Ok(TIBound {
        beta_c: -best.0,
        m0: (0..n)
            .map(|i| if code >> (2 * i) & 1 == 1 { -1 } else { 1 })
            .collect(),
        m1: (0..n)
            .map(|i| if code >> (2 * i + 1) & 1 == 1 { -1 } else { 1 })
            .collect(),
    })
}

pub fn parse_ti_expression(text: &str) -> Result<TIExpression> {
    let e: TIExpression = serde_json::from_str(text)?;
    e.validate()?;
    Ok(e)
}
