use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest behavior table, `(md)^n`, held in memory.
pub const MAX_BEHAVIOR_ENTRIES: u128 = 10_000_000;

/// Entries down to `−PROB_TOL` are accepted as roundoff.
pub const PROB_TOL: f64 = 1e-10;

/// Per-context normalization tolerance.
pub const NORM_TOL: f64 = 1e-9;

/// `n` parties, each choosing one of `m` settings with `d` outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: usize,
    pub m: usize,
    pub d: usize,
}

fn checked_pow(base: usize, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(u32::try_from(exp).ok()?)
}

impl Scenario {
    pub fn new(n: usize, m: usize, d: usize) -> Result<Self> {
        let s = Self { n, m, d };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.d == 0 {
            return Err(Error::invalid(format!(
                "scenario ({}, {}, {}) needs n, m, d >= 1",
                self.n, self.m, self.d
            )));
        }
        let size = checked_pow(self.m * self.d, self.n).unwrap_or(u128::MAX);
        if size > MAX_BEHAVIOR_ENTRIES {
            return Err(Error::TooLarge {
                what: "behavior table (md)^n",
                size,
                limit: MAX_BEHAVIOR_ENTRIES,
            });
        }
        Ok(())
    }

    /// `m^n`.
    pub fn contexts(&self) -> usize {
        self.m.pow(self.n as u32)
    }

    /// `d^n`.
    pub fn outcomes(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    /// `(md)^n`.
    pub fn table_len(&self) -> usize {
        self.contexts() * self.outcomes()
    }

    /// Flat index of `(x, a)`; party 1 is the most significant digit.
    pub fn index(&self, x: &[usize], a: &[usize]) -> usize {
        encode(x, self.m) * self.outcomes() + encode(a, self.d)
    }

    pub fn settings_of(&self, x_index: usize) -> Vec<usize> {
        decode(x_index, self.m, self.n)
    }

    pub fn outcomes_of(&self, a_index: usize) -> Vec<usize> {
        decode(a_index, self.d, self.n)
    }
}

pub(crate) fn encode(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &v| acc * base + v)
}

pub(crate) fn decode(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

/// A table `P(a|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<f64>,
}

impl Behavior {
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        scenario.validate()?;
        if table.len() != scenario.table_len() {
            return Err(Error::DimensionMismatch {
                expected: scenario.table_len(),
                found: table.len(),
            });
        }
        for (index, &value) in table.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::invalid(format!(
                    "non-finite probability at entry {index}"
                )));
            }
            if value < -PROB_TOL {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let k = scenario.outcomes();
        for (x, block) in table.chunks(k).enumerate() {
            let total: f64 = block.iter().sum();
            if (total - 1.0).abs() > NORM_TOL {
                return Err(Error::invalid(format!(
                    "context {:?} sums to {total}, expected 1",
                    scenario.settings_of(x)
                )));
            }
        }
        Ok(Self { scenario, table })
    }

    /// Every context uniformly random.
    pub fn uniform(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let p = 1.0 / scenario.outcomes() as f64;
        Ok(Self {
            scenario,
            table: vec![p; scenario.table_len()],
        })
    }

    /// Convex combination of behaviors over the same scenario.
    pub fn mixture(parts: &[(f64, Behavior)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::invalid("empty mixture"))?;
        let scenario = first.1.scenario;
        let mut table = vec![0.0; scenario.table_len()];
        for (w, b) in parts {
            if b.scenario != scenario {
                return Err(Error::invalid(
                    "mixture of behaviors from different scenarios",
                ));
            }
            if *w < 0.0 || !w.is_finite() {
                return Err(Error::invalid(format!("mixture weight {w} is negative")));
            }
            for (t, p) in table.iter_mut().zip(&b.table) {
                *t += w * p;
            }
        }
        Self::new(scenario, table)
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn prob(&self, x: &[usize], a: &[usize]) -> f64 {
        self.table[self.scenario.index(x, a)]
    }

    pub(crate) fn from_parts_unchecked(scenario: Scenario, table: Vec<f64>) -> Self {
        Self { scenario, table }
    }
}

/// Each party answers setting `x` with the fixed outcome `outcomes[party][x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub outcomes: Vec<Vec<usize>>,
}

impl DeterministicStrategy {
    pub fn new(scenario: Scenario, outcomes: Vec<Vec<usize>>) -> Result<Self> {
        if outcomes.len() != scenario.n {
            return Err(Error::DimensionMismatch {
                expected: scenario.n,
                found: outcomes.len(),
            });
        }
        for row in &outcomes {
            if row.len() != scenario.m {
                return Err(Error::DimensionMismatch {
                    expected: scenario.m,
                    found: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&a| a >= scenario.d) {
                return Err(Error::invalid(format!(
                    "outcome {bad} out of range 0..{}",
                    scenario.d
                )));
            }
        }
        Ok(Self { outcomes })
    }

    /// Strategy number `index` in `0..(d^m)^n`; party 1 most significant, and
    /// within a party setting 0 most significant.
    pub fn from_index(scenario: Scenario, index: u128) -> Self {
        let per_party = (scenario.d as u128).pow(scenario.m as u32);
        let mut rest = index;
        let mut outcomes = vec![Vec::new(); scenario.n];
        for row in outcomes.iter_mut().rev() {
            let local = (rest % per_party) as usize;
            rest /= per_party;
            *row = decode(local, scenario.d, scenario.m);
        }
        Self { outcomes }
    }

    pub fn answer(&self, party: usize, setting: usize) -> usize {
        self.outcomes[party][setting]
    }

    pub fn to_behavior(&self, scenario: Scenario) -> Result<Behavior> {
        scenario.validate()?;
        Self::new(scenario, self.outcomes.clone())?;
        let mut table = vec![0.0; scenario.table_len()];
        for xi in 0..scenario.contexts() {
            let x = scenario.settings_of(xi);
            let a: Vec<usize> = x
                .iter()
                .enumerate()
                .map(|(p, &s)| self.answer(p, s))
                .collect();
            table[scenario.index(&x, &a)] = 1.0;
        }
        Ok(Behavior::from_parts_unchecked(scenario, table))
    }
}

/// Where a nonsignalling check failed: the marginal of all parties but
/// `party` changes when `party` switches from setting 0 to `setting`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignallingWitness {
    pub party: usize,
    pub setting: usize,
    /// Full context with `party`'s entry set to 0.
    pub context: Vec<usize>,
    /// Outcomes of the remaining parties, in party order.
    pub marginal_outcomes: Vec<usize>,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonsignallingReport {
    pub nonsignalling: bool,
    pub worst_violation: f64,
    pub witness: Option<SignallingWitness>,
}

/// Checks that for every party the marginal of the other `n − 1` parties is
/// independent of that party's setting. Consistency of all smaller marginals
/// follows by summation.
pub fn is_nonsignalling(b: &Behavior, tol: f64) -> NonsignallingReport {
    let s = b.scenario;
    let mut worst = 0.0_f64;
    let mut witness = None;
    if s.n >= 2 {
        let rest = Scenario { n: s.n - 1, ..s };
        for party in 0..s.n {
            for x_rest in 0..rest.contexts() {
                let xr = rest.settings_of(x_rest);
                let marginal = |setting: usize| -> Vec<f64> {
                    let mut x = xr.clone();
                    x.insert(party, setting);
                    let mut out = vec![0.0; rest.outcomes()];
                    for ai in 0..s.outcomes() {
                        let mut a = s.outcomes_of(ai);
                        a.remove(party);
                        let ax = s.outcomes_of(ai);
                        out[encode(&a, s.d)] += b.prob(&x, &ax);
                    }
                    out
                };
                let base = marginal(0);
                for setting in 1..s.m {
                    for (k, (p, q)) in marginal(setting).iter().zip(&base).enumerate() {
                        let diff = (p - q).abs();
                        if diff > worst {
                            worst = diff;
                            let mut context = xr.clone();
                            context.insert(party, 0);
                            witness = Some(SignallingWitness {
                                party,
                                setting,
                                context,
                                marginal_outcomes: rest.outcomes_of(k),
                                difference: diff,
                            });
                        }
                    }
                }
            }
        }
    }
    let nonsignalling = worst <= tol;
    NonsignallingReport {
        nonsignalling,
        worst_violation: worst,
        witness: if nonsignalling { None } else { witness },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chsh() -> Scenario {
        Scenario::new(2, 2, 2).unwrap()
    }

    #[test]
    fn indexing_round_trip() {
        let s = Scenario::new(3, 2, 3).unwrap();
        let i = s.index(&[1, 0, 1], &[2, 0, 1]);
        assert_eq!(i, 5 * 27 + 19);
        assert_eq!(s.settings_of(5), vec![1, 0, 1]);
        assert_eq!(s.outcomes_of(19), vec![2, 0, 1]);
    }

    #[test]
    fn rejects_bad_scenarios() {
        assert!(Scenario::new(0, 2, 2).is_err());
        assert!(matches!(
            Scenario::new(30, 2, 2),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn behavior_validation() {
        let s = chsh();
        assert!(Behavior::new(s, vec![0.25; 16]).is_ok());
        assert!(Behavior::new(s, vec![0.25; 15]).is_err());
        let mut t = vec![0.25; 16];
        t[0] = -0.1;
        t[1] = 0.6;
        assert!(matches!(
            Behavior::new(s, t),
            Err(Error::NegativeProbability { index: 0, .. })
        ));
        let mut t = vec![0.25; 16];
        t[0] = 0.3;
        assert!(Behavior::new(s, t).is_err());
    }

    #[test]
    fn deterministic_behaviors_are_nonsignalling() {
        let s = Scenario::new(3, 2, 2).unwrap();
        for idx in 0..64 {
            let b = DeterministicStrategy::from_index(s, idx)
                .to_behavior(s)
                .unwrap();
            assert!(is_nonsignalling(&b, 1e-12).nonsignalling);
        }
    }

    #[test]
    fn strategy_index_order() {
        let s = chsh();
        let st = DeterministicStrategy::from_index(s, 0b0110);
        assert_eq!(st.outcomes, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn signalling_table_is_caught() {
        // Bob's outcome copies Alice's setting.
        let s = chsh();
        let mut t = vec![0.0; 16];
        for x1 in 0..2 {
            for x2 in 0..2 {
                t[s.index(&[x1, x2], &[0, x1])] = 1.0;
            }
        }
        let b = Behavior::new(s, t).unwrap();
        let r = is_nonsignalling(&b, 1e-9);
        assert!(!r.nonsignalling);
        assert_eq!(r.worst_violation, 1.0);
        let w = r.witness.unwrap();
        assert_eq!(w.party, 0);
        assert_eq!(w.setting, 1);
    }

    #[test]
    fn strategy_validation() {
        let s = chsh();
        assert!(DeterministicStrategy::new(s, vec![vec![0, 2], vec![0, 0]]).is_err());
        assert!(DeterministicStrategy::new(s, vec![vec![0, 1]]).is_err());
    }
}
