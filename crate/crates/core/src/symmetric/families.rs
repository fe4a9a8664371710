use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symmetric::bound::classical_bound_symmetric;
use crate::symmetric::expression::{BoundProvenance, PIBellExpression};

/// Sign choice shared by the `S₀` coefficient and the closed-form bound of
/// the Rioja class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Branch::Plus),
            "-" | "minus" => Ok(Branch::Minus),
            other => Err(Error::invalid(format!(
                "branch must be + or -, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiojaParams {
    pub x: i64,
    pub y: i64,
    pub sigma: i64,
    pub mu: i64,
    pub branch: Branch,
}

impl RiojaParams {
    /// Checks `x, y ≥ 1`, `σ = ±1` and, if `check_parity`, that `μ` has the
    /// opposite parity to `y²` for odd `n` and to `x²` for even `n`.
    pub fn validate(&self, n: usize, check_parity: bool) -> Result<()> {
        if self.x < 1 || self.y < 1 {
            return Err(Error::invalid(format!(
                "x and y must be >= 1, got x={} y={}",
                self.x, self.y
            )));
        }
        if self.sigma != 1 && self.sigma != -1 {
            return Err(Error::invalid(format!(
                "sigma must be +1 or -1, got {}",
                self.sigma
            )));
        }
        if check_parity {
            let (name, reference) = if n % 2 == 1 {
                ("y^2", self.y * self.y)
            } else {
                ("x^2", self.x * self.x)
            };
            if (self.mu - reference).rem_euclid(2) == 0 {
                return Err(Error::Parity(format!(
                    "mu = {} has the same parity as {name} = {reference} at n = {n}",
                    self.mu
                )));
            }
        }
        Ok(())
    }

    /// `(1/2)[n(x+y)² + (σμ ± x)² − 1]`.
    pub fn closed_form_bound(&self, n: usize) -> f64 {
        let s = self.x + self.y;
        let t = self.sigma * self.mu + self.branch.sign() * self.x;
        0.5 * (n as f64 * (s * s) as f64 + (t * t - 1) as f64)
    }
}

/// `α = x[σμ ± (x+y)]`, `β = μy`, `γ = x²`, `δ = σxy`, `ε = y²`, carrying the
/// closed-form bound.
pub fn rioja(p: RiojaParams, n: usize, check_parity: bool) -> Result<PIBellExpression> {
    p.validate(n, check_parity)?;
    let RiojaParams {
        x,
        y,
        sigma,
        mu,
        branch,
    } = p;
    let alpha = x * (sigma * mu + branch.sign() * (x + y));
    let e = PIBellExpression::new(
        n,
        [
            alpha as f64,
            (mu * y) as f64,
            (x * x) as f64,
            (sigma * x * y) as f64,
            (y * y) as f64,
        ],
    )?;
    Ok(e.with_bound(p.closed_form_bound(n), BoundProvenance::ClosedForm))
}

/// `−2S₀ + (1/2)S₀₀ − S₀₁ + (1/2)S₁₁ ≥ −2n`.
pub fn murcia(n: usize) -> Result<PIBellExpression> {
    let e = PIBellExpression::new(n, [-2.0, 0.0, 1.0, -1.0, 1.0])?;
    Ok(e.with_bound(2.0 * n as f64, BoundProvenance::ClosedForm))
}

/// Expression tailored to Dicke states: `α = n(n−1)(⌈n/2⌉ − n/2) = nβ`,
/// `γ = n(n−1)/2`, `δ = n/2`, `ε = −1`, with `β_C = (1/2)n(n−1)⌈(n+2)/2⌉`.
pub fn dicke_expression(n: usize) -> Result<PIBellExpression> {
    if n < 2 {
        return Err(Error::invalid(format!("expression needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let alpha = nf * (nf - 1.0) * (n.div_ceil(2) as f64 - nf / 2.0);
    let e = PIBellExpression::new(
        n,
        [alpha, alpha / nf, nf * (nf - 1.0) / 2.0, nf / 2.0, -1.0],
    )?;
    let bound = 0.5 * nf * (nf - 1.0) * (n + 2).div_ceil(2) as f64;
    Ok(e.with_bound(bound, BoundProvenance::ClosedForm))
}

/// One row of a Rioja closed-form vs. enumeration comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiojaRow {
    pub n: usize,
    pub x: i64,
    pub y: i64,
    pub sigma: i64,
    pub mu: i64,
    pub branch: Branch,
    pub bound_closed: f64,
    pub bound_enum: f64,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl RiojaRow {
    pub const CSV_HEADER: &'static str = "n,x,y,sigma,mu,branch,bound_closed,bound_enum,match";
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiojaGrid {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub mu: Vec<i64>,
    pub sigma: Vec<i64>,
    pub branch: Vec<Branch>,
    pub n: Vec<usize>,
    /// Skip parity-invalid points when set; otherwise include every point.
    pub check_parity: bool,
}

impl Default for RiojaGrid {
    fn default() -> Self {
        Self {
            x: vec![1, 2, 3],
            y: vec![1, 2, 3],
            mu: (-3..=3).collect(),
            sigma: vec![1, -1],
            branch: vec![Branch::Plus, Branch::Minus],
            n: (2..=20).collect(),
            check_parity: true,
        }
    }
}

/// Rows in loop order `n, x, y, sigma, mu, branch`.
pub fn rioja_bound_table(grid: &RiojaGrid) -> Result<Vec<RiojaRow>> {
    let mut rows = Vec::new();
    for &n in &grid.n {
        for &x in &grid.x {
            for &y in &grid.y {
                for &sigma in &grid.sigma {
                    for &mu in &grid.mu {
                        for &branch in &grid.branch {
                            let p = RiojaParams {
                                x,
                                y,
                                sigma,
                                mu,
                                branch,
                            };
                            let e = match rioja(p, n, grid.check_parity) {
                                Ok(e) => e,
                                Err(Error::Parity(_)) => continue,
                                Err(other) => return Err(other),
                            };
                            let bound_closed = e.bound.ok_or(Error::MissingBound)?;
                            let bound_enum = classical_bound_symmetric(&e)?.beta_c;
                            rows.push(RiojaRow {
                                n,
                                x,
                                y,
                                sigma,
                                mu,
                                branch,
                                bound_closed,
                                bound_enum,
                                matches: bound_closed == bound_enum,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn murcia_params() -> RiojaParams {
        RiojaParams {
            x: 1,
            y: 1,
            sigma: -1,
            mu: 0,
            branch: Branch::Minus,
        }
    }

    #[test]
    fn murcia_is_a_rioja_member() {
        for n in [2, 5, 8] {
            let r = rioja(murcia_params(), n, false).unwrap();
            let m = murcia(n).unwrap();
            assert_eq!(r.coefficients(), m.coefficients());
            assert_eq!(r.bound, Some(2.0 * n as f64));
        }
        assert_eq!(murcia(5).unwrap().bound, Some(10.0));
    }

    #[test]
    fn murcia_parity_depends_on_n() {
        // mu = 0 and x = y = 1: the literal parity rule rejects nothing at
        // either parity because 0 and 1 differ.
        assert!(rioja(murcia_params(), 4, true).is_ok());
        assert!(rioja(murcia_params(), 5, true).is_ok());
        let p = RiojaParams {
            mu: 1,
            ..murcia_params()
        };
        assert!(matches!(rioja(p, 4, true), Err(Error::Parity(_))));
        assert!(rioja(p, 4, false).is_ok());
    }

    #[test]
    fn dicke_coefficients() {
        let e = dicke_expression(4).unwrap();
        assert_eq!(e.coefficients(), [0.0, 0.0, 6.0, 2.0, -1.0]);
        assert_eq!(e.bound, Some(18.0));
        let e = dicke_expression(5).unwrap();
        assert_eq!(e.alpha, 10.0);
        assert_eq!(e.beta, 2.0);
    }

    #[test]
    fn argument_validation() {
        let bad_sigma = RiojaParams {
            sigma: 0,
            ..murcia_params()
        };
        assert!(rioja(bad_sigma, 4, false).is_err());
        let bad_x = RiojaParams {
            x: 0,
            ..murcia_params()
        };
        assert!(rioja(bad_x, 4, false).is_err());
        assert!(dicke_expression(1).is_err());
        assert!(murcia(1).is_err());
        assert_eq!("+".parse::<Branch>().unwrap(), Branch::Plus);
        assert!("x".parse::<Branch>().is_err());
    }
}
