//! Linear functionals on behaviors and their local (LHV) extrema.
//!
//! JSON schema:
//!
//! ```json
//! {
//!   "scenario": {"n": 2, "m": 2, "d": 2},
//!   "terms": [{"x": [0, 0], "a": [0, 0], "coef": 1.0}],
//!   "correlator_terms": [{"settings": [0, null], "coef": -1.0}],
//!   "offset": 0.0,
//!   "direction": "leq",
//!   "bound": 3.0
//! }
//! ```
//!
//! `terms` are sparse probability coefficients. `correlator_terms` need
//! `d = 2` and name one setting per party or `null` for an absent party; they
//! expand into probability coefficients with outcome 0 read as `+1` and 1 as
//! `−1`, evaluating the marginal at setting 0 of every absent party. Repeated
//! cells add up.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::behavior::{Behavior, DeterministicStrategy, Scenario};
use crate::error::{Error, Result};

/// Largest strategy space `(d^m)^n` that [`local_bound_bruteforce`] visits.
pub const MAX_STRATEGIES: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "geq")]
    GreaterEq,
    #[default]
    #[serde(rename = "leq")]
    LessEq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellFunctional {
    scenario: Scenario,
    coefficients: Vec<f64>,
    pub offset: f64,
    pub direction: Direction,
    pub bound: Option<f64>,
}

impl BellFunctional {
    pub fn new(scenario: Scenario, coefficients: Vec<f64>, offset: f64) -> Result<Self> {
        scenario.validate()?;
        if coefficients.len() != scenario.table_len() {
            return Err(Error::DimensionMismatch {
                expected: scenario.table_len(),
                found: coefficients.len(),
            });
        }
        if coefficients.iter().any(|c| !c.is_finite()) || !offset.is_finite() {
            return Err(Error::invalid("functional has non-finite coefficients"));
        }
        Ok(Self {
            scenario,
            coefficients,
            offset,
            direction: Direction::LessEq,
            bound: None,
        })
    }

    pub fn zero(scenario: Scenario) -> Result<Self> {
        // Validate before sizing the table.
        scenario.validate()?;
        Self::new(scenario, vec![0.0; scenario.table_len()], 0.0)
    }

    pub fn with_bound(mut self, direction: Direction, bound: f64) -> Self {
        self.direction = direction;
        self.bound = Some(bound);
        self
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn add_term(&mut self, x: &[usize], a: &[usize], coef: f64) -> Result<()> {
        let s = self.scenario;
        if x.len() != s.n || a.len() != s.n {
            return Err(Error::DimensionMismatch {
                expected: s.n,
                found: if x.len() != s.n { x.len() } else { a.len() },
            });
        }
        if x.iter().any(|&v| v >= s.m) || a.iter().any(|&v| v >= s.d) {
            return Err(Error::invalid(format!(
                "term x={x:?} a={a:?} is out of range"
            )));
        }
        if !coef.is_finite() {
            return Err(Error::invalid("non-finite coefficient"));
        }
        self.coefficients[s.index(x, a)] += coef;
        Ok(())
    }

    /// Adds `coef · ⟨Π_{i: settings[i] ≠ None} M^{(i)}_{settings[i]}⟩`.
    pub fn add_correlator(&mut self, settings: &[Option<usize>], coef: f64) -> Result<()> {
        let s = self.scenario;
        if s.d != 2 {
            return Err(Error::invalid(
                "correlator terms need two outcomes per setting",
            ));
        }
        if settings.len() != s.n {
            return Err(Error::DimensionMismatch {
                expected: s.n,
                found: settings.len(),
            });
        }
        if settings.iter().flatten().any(|&x| x >= s.m) {
            return Err(Error::invalid(format!(
                "correlator settings {settings:?} out of range"
            )));
        }
        if !coef.is_finite() {
            return Err(Error::invalid("non-finite coefficient"));
        }
        if settings.iter().all(Option::is_none) {
            self.offset += coef;
            return Ok(());
        }
        let x: Vec<usize> = settings.iter().map(|v| v.unwrap_or(0)).collect();
        for ai in 0..s.outcomes() {
            let a = s.outcomes_of(ai);
            let sign: i32 = settings
                .iter()
                .zip(&a)
                .filter(|(v, _)| v.is_some())
                .map(|(_, &o)| if o == 0 { 1 } else { -1 })
                .product();
            self.coefficients[s.index(&x, &a)] += coef * sign as f64;
        }
        Ok(())
    }

    pub fn evaluate(&self, b: &Behavior) -> Result<f64> {
        if b.scenario() != self.scenario {
            return Err(Error::invalid(
                "behavior and functional use different scenarios",
            ));
        }
        Ok(self
            .coefficients
            .iter()
            .zip(b.table())
            .map(|(c, p)| c * p)
            .sum::<f64>()
            + self.offset)
    }

    pub fn evaluate_strategy(&self, st: &DeterministicStrategy) -> f64 {
        let s = self.scenario;
        let mut value = self.offset;
        let mut x = vec![0; s.n];
        let mut a = vec![0; s.n];
        for xi in 0..s.contexts() {
            let mut rest = xi;
            for p in (0..s.n).rev() {
                x[p] = rest % s.m;
                rest /= s.m;
                a[p] = st.answer(p, x[p]);
            }
            value += self.coefficients[s.index(&x, &a)];
        }
        value
    }

    /// `Some(true)` when `value` lies on the wrong side of the bound.
    pub fn is_violated_by(&self, value: f64) -> Option<bool> {
        self.bound.map(|b| match self.direction {
            Direction::LessEq => value > b,
            Direction::GreaterEq => value < b,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbabilityTerm {
    pub x: Vec<usize>,
    pub a: Vec<usize>,
    pub coef: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelatorTerm {
    pub settings: Vec<Option<usize>>,
    pub coef: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellFunctionalWire {
    pub scenario: Scenario,
    #[serde(default)]
    pub terms: Vec<ProbabilityTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correlator_terms: Vec<CorrelatorTerm>,
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub direction: Direction,
    #[serde(default)]
    pub bound: Option<f64>,
}

impl TryFrom<BellFunctionalWire> for BellFunctional {
    type Error = Error;

    fn try_from(w: BellFunctionalWire) -> Result<Self> {
        let mut f = BellFunctional::zero(w.scenario)?;
        if !w.offset.is_finite() {
            return Err(Error::invalid("non-finite offset"));
        }
        f.offset = w.offset;
        for t in &w.terms {
            f.add_term(&t.x, &t.a, t.coef)?;
        }
        for t in &w.correlator_terms {
            f.add_correlator(&t.settings, t.coef)?;
        }
        if let Some(b) = w.bound {
            if !b.is_finite() {
                return Err(Error::invalid("non-finite bound"));
            }
        }
        f.direction = w.direction;
        f.bound = w.bound;
        Ok(f)
    }
}

impl From<&BellFunctional> for BellFunctionalWire {
    fn from(f: &BellFunctional) -> Self {
        let s = f.scenario;
        let terms = f
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &coef)| ProbabilityTerm {
                x: s.settings_of(i / s.outcomes()),
                a: s.outcomes_of(i % s.outcomes()),
                coef,
            })
            .collect();
        Self {
            scenario: s,
            terms,
            correlator_terms: Vec::new(),
            offset: f.offset,
            direction: f.direction,
            bound: f.bound,
        }
    }
}

impl Serialize for BellFunctional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BellFunctionalWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BellFunctional {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        BellFunctional::try_from(BellFunctionalWire::deserialize(d)?)
            .map_err(serde::de::Error::custom)
    }
}

pub fn parse_functional(text: &str) -> Result<BellFunctional> {
    let wire: BellFunctionalWire = serde_json::from_str(text)?;
    BellFunctional::try_from(wire)
}

/// Both extrema of a functional over deterministic strategies, with the
/// lowest-numbered strategy attaining each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalBound {
    pub min: f64,
    pub argmin: DeterministicStrategy,
    pub max: f64,
    pub argmax: DeterministicStrategy,
    pub strategies: u64,
}

pub fn strategy_count(s: Scenario) -> u128 {
    (s.d as u128)
        .checked_pow(s.m as u32)
        .and_then(|p| p.checked_pow(s.n as u32))
        .unwrap_or(u128::MAX)
}

pub fn local_bound_bruteforce(f: &BellFunctional) -> Result<LocalBound> {
    let s = f.scenario;
    let count = strategy_count(s);
    if count > MAX_STRATEGIES {
        return Err(Error::TooLarge {
            what: "deterministic strategy space (d^m)^n",
            size: count,
            limit: MAX_STRATEGIES,
        });
    }
    let count = count as u64;
    type Ext = ((f64, u64), (f64, u64));
    let pick = |a: Ext, b: Ext| -> Ext {
        let lo = if b.0 .0 < a.0 .0 || (b.0 .0 == a.0 .0 && b.0 .1 < a.0 .1) {
            b.0
        } else {
            a.0
        };
        let hi = if b.1 .0 > a.1 .0 || (b.1 .0 == a.1 .0 && b.1 .1 < a.1 .1) {
            b.1
        } else {
            a.1
        };
        (lo, hi)
    };
    let identity = ((f64::INFINITY, u64::MAX), (f64::NEG_INFINITY, u64::MAX));
    let ((min, imin), (max, imax)) = (0..count)
        .into_par_iter()
        .map(|i| {
            let v = f.evaluate_strategy(&DeterministicStrategy::from_index(s, i as u128));
            ((v, i), (v, i))
        })
        .reduce(|| identity, pick);
    Ok(LocalBound {
        min,
        argmin: DeterministicStrategy::from_index(s, imin as u128),
        max,
        argmax: DeterministicStrategy::from_index(s, imax as u128),
        strategies: count,
    })
}

/// `Σ_{x₁,x₂} P(a₁ ⊕ a₂ = x₁x₂ | x₁, x₂) ≤ 3`, settings 0-based.
pub fn chsh_probability_form() -> BellFunctional {
    let s = Scenario { n: 2, m: 2, d: 2 };
    let mut f = BellFunctional::zero(s).expect("valid scenario");
    for x1 in 0..2 {
        for x2 in 0..2 {
            for a1 in 0..2 {
                for a2 in 0..2 {
                    if a1 ^ a2 == x1 * x2 {
                        f.add_term(&[x1, x2], &[a1, a2], 1.0).expect("in range");
                    }
                }
            }
        }
    }
    f.with_bound(Direction::LessEq, 3.0)
}

/// `⟨M₀M₀⟩ + ⟨M₀M₁⟩ + ⟨M₁M₀⟩ − ⟨M₁M₁⟩ ≤ 2`.
pub fn chsh_correlator_form() -> BellFunctional {
    let s = Scenario { n: 2, m: 2, d: 2 };
    let mut f = BellFunctional::zero(s).expect("valid scenario");
    for x1 in 0..2 {
        for x2 in 0..2 {
            let sign = if x1 * x2 == 1 { -1.0 } else { 1.0 };
            f.add_correlator(&[Some(x1), Some(x2)], sign)
                .expect("in range");
        }
    }
    f.with_bound(Direction::LessEq, 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chsh_local_bounds() {
        let p = local_bound_bruteforce(&chsh_probability_form()).unwrap();
        assert_eq!(p.max, 3.0);
        assert_eq!(p.min, 1.0);
        assert_eq!(p.strategies, 16);
        let c = local_bound_bruteforce(&chsh_correlator_form()).unwrap();
        assert_eq!((c.min, c.max), (-2.0, 2.0));
        assert_eq!(chsh_correlator_form().evaluate_strategy(&c.argmax), 2.0);
    }

    #[test]
    fn zero_functional() {
        let s = Scenario::new(3, 2, 2).unwrap();
        let b = local_bound_bruteforce(&BellFunctional::zero(s).unwrap()).unwrap();
        assert_eq!((b.min, b.max), (0.0, 0.0));
        assert_eq!(b.argmin, DeterministicStrategy::from_index(s, 0));
    }

    #[test]
    fn guard_refuses_large_spaces() {
        let s = Scenario::new(8, 3, 2).unwrap();
        assert!(matches!(
            local_bound_bruteforce(&BellFunctional::zero(s).unwrap()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_correlator_terms() {
        let text = r#"{
            "scenario": {"n": 2, "m": 2, "d": 2},
            "correlator_terms": [
                {"settings": [0, 0], "coef": 1}, {"settings": [0, 1], "coef": 1},
                {"settings": [1, 0], "coef": 1}, {"settings": [1, 1], "coef": -1}
            ],
            "bound": 2
        }"#;
        let f = parse_functional(text).unwrap();
        assert_eq!(f, chsh_correlator_form());
        let back: BellFunctional =
            serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_rejects_bad_input() {
        for bad in [
            r#"{"scenario": {"n": 2, "m": 2, "d": 2}, "terms": [{"x": [0, 2], "a": [0, 0], "coef": 1}]}"#,
            r#"{"scenario": {"n": 2, "m": 2, "d": 3}, "correlator_terms": [{"settings": [0, 0], "coef": 1}]}"#,
            r#"{"scenario": {"n": 0, "m": 2, "d": 2}}"#,
            r#"{"scenario": {"n": 2, "m": 2, "d": 2}, "extra": 1}"#,
            r#"{"scenario": {"n": 2, "m": 2, "d": 2}, "terms": [{"x": [0], "a": [0, 0], "coef": 1}]}"#,
        ] {
            assert!(parse_functional(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn empty_correlator_is_offset() {
        let mut f = BellFunctional::zero(Scenario::new(1, 1, 2).unwrap()).unwrap();
        f.add_correlator(&[None], 2.5).unwrap();
        assert_eq!(f.offset, 2.5);
    }

    #[test]
    fn violation_direction() {
        let f = chsh_correlator_form();
        assert_eq!(f.is_violated_by(2.5), Some(true));
        assert_eq!(f.is_violated_by(2.0), Some(false));
        let g = f.clone().with_bound(Direction::GreaterEq, -2.0);
        assert_eq!(g.is_violated_by(-2.1), Some(true));
    }

    #[test]
    fn oversized_wire_scenario_is_rejected_before_allocation() {
        let text = r#"{"scenario":{"n":9,"m":28,"d":1},"bound":1}"#;
        assert!(matches!(
            parse_functional(text),
            Err(Error::TooLarge { .. })
        ));
    }
}
