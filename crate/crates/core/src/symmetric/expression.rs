use serde::{Deserialize, Serialize};

use crate::correlations::{BellFunctional, Direction, Scenario};
use crate::error::{Error, Result};

/// Deterministic permutationally invariant strategy: how many parties answer
/// `(+,+)`, `(+,−)`, `(−,+)`, `(−,−)` to settings `(M₀, M₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrategyCounts {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl StrategyCounts {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        Self { a, b, c, d }
    }

    pub fn n(&self) -> usize {
        self.a + self.b + self.c + self.d
    }

    /// Per-party `±1` outcomes `(M₀, M₁)` in the order a, b, c, d.
    pub fn assignment(&self) -> Vec<(i8, i8)> {
        let mut out = Vec::with_capacity(self.n());
        out.extend(std::iter::repeat((1, 1)).take(self.a));
        out.extend(std::iter::repeat((1, -1)).take(self.b));
        out.extend(std::iter::repeat((-1, 1)).take(self.c));
        out.extend(std::iter::repeat((-1, -1)).take(self.d));
        out
    }
}

/// `S₀, S₁` and the ordered-pair sums `S_kl = Σ_{i≠j} ⟨M_k^{(i)} M_l^{(j)}⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizedCorrelators {
    pub s0: f64,
    pub s1: f64,
    pub s00: f64,
    pub s01: f64,
    pub s11: f64,
}

impl SymmetrizedCorrelators {
    /// `|S_k| ≤ n`, `|S_kl| ≤ n(n−1)`, up to `tol`.
    pub fn is_admissible(&self, n: usize, tol: f64) -> bool {
        let one = n as f64 + tol;
        let two = (n * (n.saturating_sub(1))) as f64 + tol;
        self.s0.abs() <= one
            && self.s1.abs() <= one
            && self.s00.abs() <= two
            && self.s01.abs() <= two
            && self.s11.abs() <= two
    }
}

pub fn correlators_of_counts(c: StrategyCounts) -> SymmetrizedCorrelators {
    let (a, b, cc, d) = (c.a as i64, c.b as i64, c.c as i64, c.d as i64);
    let n = a + b + cc + d;
    let sigma0 = a + b - cc - d;
    let sigma1 = a - b + cc - d;
    let dd = a - b - cc + d;
    SymmetrizedCorrelators {
        s0: sigma0 as f64,
        s1: sigma1 as f64,
        s00: (sigma0 * sigma0 - n) as f64,
        s01: (sigma0 * sigma1 - dd) as f64,
        s11: (sigma1 * sigma1 - n) as f64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundProvenance {
    /// From a family's closed-form expression.
    ClosedForm,
    /// From exact enumeration.
    Enumeration,
    /// Supplied with the input.
    User,
}

/// `I = α S₀ + β S₁ + (γ/2) S₀₀ + δ S₀₁ + (ε/2) S₁₁ ≥ −β_C`.
///
/// `bound` holds `β_C` when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PIBellExpression {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub bound: Option<f64>,
    #[serde(default)]
    pub bound_provenance: Option<BoundProvenance>,
}

impl PIBellExpression {
    pub fn new(n: usize, coefficients: [f64; 5]) -> Result<Self> {
        let [alpha, beta, gamma, delta, epsilon] = coefficients;
        let e = Self {
            n,
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
            bound: None,
            bound_provenance: None,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn with_bound(mut self, bound: f64, provenance: BoundProvenance) -> Self {
        self.bound = Some(bound);
        self.bound_provenance = Some(provenance);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!(
                "expression needs n >= 2, got {}",
                self.n
            )));
        }
        if self.coefficients().iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("non-finite coefficient"));
        }
        if let Some(b) = self.bound {
            if !b.is_finite() {
                return Err(Error::invalid("non-finite bound"));
            }
        }
        Ok(())
    }

    pub fn coefficients(&self) -> [f64; 5] {
        [self.alpha, self.beta, self.gamma, self.delta, self.epsilon]
    }

    pub fn evaluate(&self, s: &SymmetrizedCorrelators) -> f64 {
        self.alpha * s.s0
            + self.beta * s.s1
            + 0.5 * self.gamma * s.s00
            + self.delta * s.s01
            + 0.5 * self.epsilon * s.s11
    }

    pub fn evaluate_counts(&self, c: StrategyCounts) -> f64 {
        self.evaluate(&correlators_of_counts(c))
    }

    /// `Some(true)` when `value < −β_C`.
    pub fn is_violated_by(&self, value: f64) -> Option<bool> {
        self.bound.map(|b| value < -b)
    }

    /// The same inequality over `(n, 2, 2)` behaviors.
    pub fn to_functional(&self) -> Result<BellFunctional> {
        self.validate()?;
        let n = self.n;
        let mut f = BellFunctional::zero(Scenario::new(n, 2, 2)?)?;
        let mut key = vec![None; n];
        for i in 0..n {
            key[i] = Some(0);
            f.add_correlator(&key, self.alpha)?;
            key[i] = Some(1);
            f.add_correlator(&key, self.beta)?;
            for j in 0..n {
                if j == i {
                    continue;
                }
                key[i] = Some(0);
                key[j] = Some(1);
                f.add_correlator(&key, self.delta)?;
                if j > i {
                    key[j] = Some(0);
                    f.add_correlator(&key, self.gamma)?;
                    key[i] = Some(1);
                    key[j] = Some(1);
                    f.add_correlator(&key, self.epsilon)?;
                }
                key[j] = None;
            }
            key[i] = None;
        }
        Ok(match self.bound {
            Some(b) => f.with_bound(Direction::GreaterEq, -b),
            None => f,
        })
    }
}

pub fn parse_pi_expression(text: &str) -> Result<PIBellExpression> {
    let e: PIBellExpression = serde_json::from_str(text)?;
    e.validate()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_plus_three_parties() {
        let s = correlators_of_counts(StrategyCounts::new(3, 0, 0, 0));
        assert_eq!([s.s0, s.s1, s.s00, s.s01, s.s11], [3.0, 3.0, 6.0, 6.0, 6.0]);
    }

    #[test]
    fn anti_aligned_pair() {
        let s = correlators_of_counts(StrategyCounts::new(1, 0, 0, 1));
        assert_eq!(
            [s.s0, s.s1, s.s00, s.s01, s.s11],
            [0.0, 0.0, -2.0, -2.0, -2.0]
        );
        assert!(s.is_admissible(2, 0.0));
    }

    #[test]
    fn assignment_order() {
        assert_eq!(
            StrategyCounts::new(1, 1, 0, 1).assignment(),
            vec![(1, 1), (1, -1), (-1, -1)]
        );
    }

    #[test]
    fn json_schema() {
        let text = r#"{"n":4,"alpha":0,"beta":0,"gamma":6,"delta":2,"epsilon":-1,"bound":18,"bound_provenance":"closed_form"}"#;
        let e = parse_pi_expression(text).unwrap();
        assert_eq!(e.bound_provenance, Some(BoundProvenance::ClosedForm));
        let back = parse_pi_expression(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
        assert!(parse_pi_expression(
            r#"{"n":1,"alpha":0,"beta":0,"gamma":0,"delta":0,"epsilon":0}"#
        )
        .is_err());
        assert!(parse_pi_expression(r#"{"n":3,"alpha":0,"beta":0,"gamma":0,"delta":0}"#).is_err());
    }
}
