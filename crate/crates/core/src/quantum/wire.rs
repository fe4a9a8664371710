//! JSON fixtures for states and operators: `{"dims": [...], "re": [...], "im": [...]}`.
//!
//! A fixture whose arrays have `Π dims` entries is a pure state; one with
//! `(Π dims)²` entries is a row-major density operator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::HermitianMatrix;
use crate::quantum::state::{DensityOperator, StateVector};

/// Largest density-operator dimension accepted from a fixture.
pub const MAX_FIXTURE_DIM: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexArrayWire {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateFixture {
    Pure(StateVector),
    Mixed(DensityOperator),
}

impl StateFixture {
    pub fn dims(&self) -> &[usize] {
        match self {
            StateFixture::Pure(p) => p.dims(),
            StateFixture::Mixed(r) => r.dims(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            StateFixture::Pure(p) => p.to_density(),
            StateFixture::Mixed(r) => r.clone(),
        }
    }
}

impl TryFrom<ComplexArrayWire> for StateFixture {
    type Error = Error;

    fn try_from(w: ComplexArrayWire) -> Result<Self> {
        if w.re.len() != w.im.len() {
            return Err(Error::Parse(format!(
                "re has {} entries, im has {}",
                w.re.len(),
                w.im.len()
            )));
        }
        if w.dims.is_empty() || w.dims.contains(&0) {
            return Err(Error::Parse("dims must be nonempty and positive".into()));
        }
        let total = w
            .dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= w.re.len().max(1))
            .ok_or_else(|| Error::Parse("dims product does not match the data length".into()))?;
        let values: Vec<C64> =
            w.re.iter()
                .zip(&w.im)
                .map(|(&a, &b)| C64::new(a, b))
                .collect();
        if values.len() == total {
            return Ok(StateFixture::Pure(StateVector::new(
                w.dims,
                DVector::from_vec(values),
            )?));
        }
        if total.checked_mul(total) == Some(values.len()) {
            if total > MAX_FIXTURE_DIM {
                return Err(Error::TooLarge {
                    what: "density fixture dimension",
                    size: total as u128,
                    limit: MAX_FIXTURE_DIM as u128,
                });
            }
            let m = DMatrix::from_row_slice(total, total, &values);
            let h = HermitianMatrix::new(m)?;
            return Ok(StateFixture::Mixed(DensityOperator::new(w.dims, h)?));
        }
        Err(Error::Parse(format!(
            "data length {} is neither {total} (pure) nor {} (mixed)",
            values.len(),
            total.saturating_mul(total)
        )))
    }
}

pub fn parse_state_fixture(text: &str) -> Result<StateFixture> {
    let wire: ComplexArrayWire = serde_json::from_str(text)?;
    StateFixture::try_from(wire)
}

impl From<&StateVector> for ComplexArrayWire {
    fn from(s: &StateVector) -> Self {
        Self {
            dims: s.dims().to_vec(),
            re: s.amplitudes().iter().map(|z| z.re).collect(),
            im: s.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

impl From<&DensityOperator> for ComplexArrayWire {
    fn from(r: &DensityOperator) -> Self {
        let m = r.matrix().matrix();
        let n = m.nrows();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        Self {
            dims: r.dims().to_vec(),
            re,
            im,
        }
    }
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexArrayWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = ComplexArrayWire::deserialize(d)?;
        match StateFixture::try_from(wire).map_err(serde::de::Error::custom)? {
            StateFixture::Pure(p) => Ok(p),
            StateFixture::Mixed(_) => Err(serde::de::Error::custom("expected a pure state")),
        }
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexArrayWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = ComplexArrayWire::deserialize(d)?;
        Ok(StateFixture::try_from(wire)
            .map_err(serde::de::Error::custom)?
            .to_density())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::max_entangled;

    #[test]
    fn pure_and_mixed_fixtures() {
        let psi = max_entangled(2).unwrap();
        let text = serde_json::to_string(&psi).unwrap();
        assert!(
            matches!(parse_state_fixture(&text).unwrap(), StateFixture::Pure(ref p) if *p == psi)
        );
        let rho = psi.to_density();
        let text = serde_json::to_string(&rho).unwrap();
        match parse_state_fixture(&text).unwrap() {
            StateFixture::Mixed(r) => {
                assert!((r.matrix().matrix() - rho.matrix().matrix()).norm() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_fixtures() {
        for bad in [
            r#"{"dims":[2],"re":[1,0],"im":[0]}"#,
            r#"{"dims":[],"re":[],"im":[]}"#,
            r#"{"dims":[0],"re":[],"im":[]}"#,
            r#"{"dims":[3],"re":[1,0],"im":[0,0]}"#,
            r#"{"dims":[2],"re":[1,1],"im":[0,0]}"#,
            r#"{"dims":[18446744073709551615,2],"re":[1],"im":[0]}"#,
            r#"{"dims":[2],"re":[1,0],"im":[0,0],"extra":1}"#,
            r#"{"dims":[2],"re":[1,0,0,-1],"im":[0,0,0,0]}"#,
        ] {
            assert!(parse_state_fixture(bad).is_err(), "{bad}");
        }
    }
}
