//! Two-outcome behaviors as full correlator tables.
//!
//! For a context `x` and subset `S` of parties,
//! `E_S(x) = Σ_a Π_{i∈S} s(a_i) P(a|x)` with `s(0) = +1`, `s(1) = −1`, and
//! conversely `P(a|x) = 2^{-n} Σ_S Π_{i∈S} s(a_i) E_S(x)`. Both directions
//! are Walsh–Hadamard transforms over subset bitmasks.

use serde::{Deserialize, Serialize};

use crate::correlations::behavior::{decode, encode, Behavior, Scenario};
use crate::error::{Error, Result};

/// Key digit meaning "party does not measure".
pub const ABSENT: usize = 0;

/// Correlators keyed by extended settings in `{absent, 0, …, m−1}^n`, stored
/// densely with digit 0 for an absent party and `x + 1` for setting `x`.
/// The all-absent entry is the normalization and always equals 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorSet {
    n: usize,
    m: usize,
    values: Vec<f64>,
}

/// Values may exceed `[−1, 1]` by this much.
pub const CORRELATOR_TOL: f64 = 1e-10;

fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a + b;
                *y = a - b;
            }
        }
        h *= 2;
    }
}

impl CorrelatorSet {
    pub fn new(n: usize, m: usize, values: Vec<f64>) -> Result<Self> {
        Scenario::new(n, m, 2)?;
        let len = (m + 1).pow(n as u32);
        if values.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: values.len(),
            });
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || v.abs() > 1.0 + CORRELATOR_TOL)
        {
            return Err(Error::invalid(format!(
                "correlator {i} = {v} is outside [-1, 1]"
            )));
        }
        if values[0] != 1.0 {
            return Err(Error::invalid("the empty correlator must equal 1"));
        }
        Ok(Self { n, m, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn key(&self, settings: &[Option<usize>]) -> usize {
        let digits: Vec<usize> = settings
            .iter()
            .map(|s| s.map_or(ABSENT, |x| x + 1))
            .collect();
        encode(&digits, self.m + 1)
    }

    /// `⟨Π_{i: settings[i] = Some(x)} M^{(i)}_x⟩`.
    pub fn get(&self, settings: &[Option<usize>]) -> Result<f64> {
        self.check_settings(settings)?;
        Ok(self.values[self.key(settings)])
    }

    pub fn set(&mut self, settings: &[Option<usize>], value: f64) -> Result<()> {
        self.check_settings(settings)?;
        if settings.iter().all(Option::is_none) {
            return Err(Error::invalid("the empty correlator is fixed to 1"));
        }
        if !value.is_finite() || value.abs() > 1.0 + CORRELATOR_TOL {
            return Err(Error::invalid(format!(
                "correlator value {value} is outside [-1, 1]"
            )));
        }
        let k = self.key(settings);
        self.values[k] = value;
        Ok(())
    }

    fn check_settings(&self, settings: &[Option<usize>]) -> Result<()> {
        if settings.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: settings.len(),
            });
        }
        if settings.iter().flatten().any(|&x| x >= self.m) {
            return Err(Error::invalid(format!(
                "settings {settings:?} out of range"
            )));
        }
        Ok(())
    }

    /// Iterates `(settings, value)` over every key, the empty one first.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<Option<usize>>, f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &v)| {
            let s = decode(k, self.m + 1, self.n)
                .into_iter()
                .map(|d| if d == ABSENT { None } else { Some(d - 1) })
                .collect();
            (s, v)
        })
    }
}

fn subset_key(mask: usize, x: &[usize], m: usize) -> usize {
    let n = x.len();
    let digits: Vec<usize> = (0..n)
        .map(|i| {
            if mask >> (n - 1 - i) & 1 == 1 {
                x[i] + 1
            } else {
                ABSENT
            }
        })
        .collect();
    encode(&digits, m + 1)
}

/// Reads every correlator from `b`. A key with absent parties uses the
/// marginal at setting 0 of those parties, which is unambiguous when `b` is
/// nonsignalling.
pub fn correlators_from_behavior(b: &Behavior) -> Result<CorrelatorSet> {
    let s = b.scenario();
    if s.d != 2 {
        return Err(Error::invalid(format!(
            "correlators need d = 2, got d = {}",
            s.d
        )));
    }
    let k = s.outcomes();
    let mut values = vec![f64::NAN; (s.m + 1).pow(s.n as u32)];
    for xi in 0..s.contexts() {
        let x = s.settings_of(xi);
        let mut v = b.table()[xi * k..(xi + 1) * k].to_vec();
        walsh_hadamard(&mut v);
        for (mask, e) in v.into_iter().enumerate() {
            let key = subset_key(mask, &x, s.m);
            // Absent parties at setting 0 define the marginal.
            let canonical = (0..s.n).all(|i| mask >> (s.n - 1 - i) & 1 == 1 || x[i] == 0);
            if canonical {
                values[key] = e.clamp(-1.0, 1.0);
            }
        }
    }
    values[0] = 1.0;
    CorrelatorSet::new(s.n, s.m, values)
}

/// Inverse transform; fails with [`Error::NegativeProbability`] when the
/// correlators do not come from a valid behavior.
pub fn behavior_from_correlators(c: &CorrelatorSet) -> Result<Behavior> {
    let s = Scenario::new(c.n, c.m, 2)?;
    let k = s.outcomes();
    let scale = 1.0 / k as f64;
    let mut table = Vec::with_capacity(s.table_len());
    for xi in 0..s.contexts() {
        let x = s.settings_of(xi);
        let mut v: Vec<f64> = (0..k)
            .map(|mask| c.values[subset_key(mask, &x, s.m)])
            .collect();
        walsh_hadamard(&mut v);
        table.extend(v.into_iter().map(|p| p * scale));
    }
    Behavior::new(s, table)
}
