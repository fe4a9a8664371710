//! Bell operators of permutationally invariant expressions when every party
//! measures `M₀ = σ_z` and `M₁ = cos θ σ_z + sin θ σ_x`.
//!
//! With `A = 2J_z` and `B = 2(cos θ J_z + sin θ J_x)`,
//! `S₀ = ⟨A⟩`, `S₁ = ⟨B⟩`, `S₀₀ = ⟨A²⟩ − n`, `S₁₁ = ⟨B²⟩ − n` and
//! `S₀₁ = ⟨AB + BA⟩/2 − n cos θ`. In the Dicke basis `A` is diagonal and `B`
//! tridiagonal, so the Bell operator is real and pentadiagonal.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collective::spin::{dicke_state, ladder_element, magnetization, SymmetricState};
use crate::error::{Error, Result};
use crate::numerics::{scalar_minimize, HermitianMatrix, MinimizeOptions, SymBanded};
use crate::symmetric::{
    classical_bound_symmetric, dicke_expression, murcia, rioja, PIBellExpression, RiojaParams,
    SymmetrizedCorrelators,
};

/// Diagonal of `A` and the diagonal and first off-diagonal of `B`.
struct Pieces {
    a: Vec<f64>,
    bd: Vec<f64>,
    bo: Vec<f64>,
}

fn pieces(n: usize, theta: f64) -> Pieces {
    let a: Vec<f64> = (0..=n).map(|k| 2.0 * magnetization(n, k)).collect();
    let bd = a.iter().map(|x| theta.cos() * x).collect();
    // ⟨k| J_x |k+1⟩ = ladder/2, so B's off-diagonal is sin θ · ladder.
    let bo = (0..n)
        .map(|k| theta.sin() * ladder_element(n, k + 1))
        .collect();
    Pieces { a, bd, bo }
}

/// Entry `(k, k + off)` of `B²`.
fn b_squared(p: &Pieces, k: usize, off: usize) -> f64 {
    let n = p.a.len();
    match off {
        0 => {
            let left = if k > 0 { p.bo[k - 1].powi(2) } else { 0.0 };
            let right = if k + 1 < n { p.bo[k].powi(2) } else { 0.0 };
            p.bd[k].powi(2) + left + right
        }
        1 => p.bo[k] * (p.bd[k] + p.bd[k + 1]),
        2 => p.bo[k] * p.bo[k + 1],
        _ => 0.0,
    }
}

/// Entry `(k, k + off)` of `AB + BA`.
fn anticommutator(p: &Pieces, k: usize, off: usize) -> f64 {
    match off {
        0 => 2.0 * p.a[k] * p.bd[k],
        1 => (p.a[k] + p.a[k + 1]) * p.bo[k],
        _ => 0.0,
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("non-finite measurement angle"))
    }
}

pub fn symmetrized_correlators(
    state: &SymmetricState,
    theta: f64,
) -> Result<SymmetrizedCorrelators> {
    check_theta(theta)?;
    let n = state.n();
    let p = pieces(n, theta);
    let psi = state.amplitudes();
    // ⟨ψ|M|ψ⟩ for a real symmetric banded M given entry-wise.
    let form = |entry: &dyn Fn(usize, usize) -> f64| -> f64 {
        let mut total = 0.0;
        for k in 0..=n {
            total += entry(k, 0) * psi[k].norm_sqr();
            for off in 1..=2 {
                if k + off <= n {
                    total += 2.0 * entry(k, off) * (psi[k].conj() * psi[k + off]).re;
                }
            }
        }
        total
    };
    let nf = n as f64;
    Ok(SymmetrizedCorrelators {
        s0: form(&|k, off| if off == 0 { p.a[k] } else { 0.0 }),
        s1: form(&|k, off| match off {
            0 => p.bd[k],
            1 => p.bo[k],
            _ => 0.0,
        }),
        s00: form(&|k, off| if off == 0 { p.a[k] * p.a[k] } else { 0.0 }) - nf,
        s01: 0.5 * form(&|k, off| anticommutator(&p, k, off)) - nf * theta.cos(),
        s11: form(&|k, off| b_squared(&p, k, off)) - nf,
    })
}

/// `αA + βB + (γ/2)(A² − n) + δ(½(AB+BA) − n cos θ) + (ε/2)(B² − n)`.
pub fn bell_operator(expr: &PIBellExpression, theta: f64) -> Result<SymBanded> {
    expr.validate()?;
    check_theta(theta)?;
    let n = expr.n;
    let nf = n as f64;
    let p = pieces(n, theta);
    let mut m = SymBanded::zeros(n + 1, 2);
    let constant = -0.5 * expr.gamma * nf - expr.delta * nf * theta.cos() - 0.5 * expr.epsilon * nf;
    for k in 0..=n {
        for off in 0..=2 {
            if k + off > n {
                continue;
            }
            let mut v = 0.5 * expr.delta * anticommutator(&p, k, off)
                + 0.5 * expr.epsilon * b_squared(&p, k, off);
            match off {
                0 => {
                    v += expr.alpha * p.a[k]
                        + expr.beta * p.bd[k]
                        + 0.5 * expr.gamma * p.a[k] * p.a[k]
                        + constant
                }
                1 => v += expr.beta * p.bo[k],
                _ => {}
            }
            m.set(k, k + off, v);
        }
    }
    Ok(m)
}

/// Dense complex form of [`bell_operator`].
pub fn bell_operator_matrix(expr: &PIBellExpression, theta: f64) -> Result<HermitianMatrix> {
    let b = bell_operator(expr, theta)?;
    HermitianMatrix::from_real(b.to_dense())
}

/// `θ` search settings: `grid` points on `[lo, hi]`, then refinement to `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaSearch {
    pub lo: f64,
    pub hi: f64,
    pub grid: usize,
    pub tol: f64,
}

impl Default for ThetaSearch {
    fn default() -> Self {
        Self {
            lo: 0.0,
            hi: PI,
            grid: 256,
            tol: 1e-6,
        }
    }
}

impl ThetaSearch {
    fn options(&self) -> MinimizeOptions {
        MinimizeOptions {
            grid: self.grid,
            tol: self.tol,
        }
    }
}

/// Lowest eigenvalue of the Bell operator and its eigenvector.
pub fn lowest_bell_eigenpair(expr: &PIBellExpression, theta: f64) -> Result<(f64, SymmetricState)> {
    let pair = bell_operator(expr, theta)?.lowest_eigenpair()?;
    let state = SymmetricState::from_real(expr.n, &pair.vector)?;
    Ok((pair.value, state))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// `max(0, −λ_min − β_C)`.
    pub qv: f64,
    /// `λ_min` of the Bell operator at `theta_star`.
    pub lambda_min: f64,
    pub beta_c: f64,
    pub theta_star: f64,
    pub state: SymmetricState,
}

impl Violation {
    pub fn ratio(&self) -> f64 {
        self.qv / self.beta_c
    }
}

/// Minimizes `λ_min(𝓑(θ))` over `θ`. The search is restricted to symmetric
/// states and the fixed measurement family.
pub fn max_violation(expr: &PIBellExpression, search: ThetaSearch) -> Result<Violation> {
    let beta_c = expr.bound.ok_or(Error::MissingBound)?;
    expr.validate()?;
    let mut failure = None;
    let min = scalar_minimize(
        |theta| match bell_operator(expr, theta).and_then(|b| b.lowest_eigenpair()) {
            Ok(pair) => pair.value,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        search.lo,
        search.hi,
        search.options(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let min = min?;
    let (lambda_min, state) = lowest_bell_eigenpair(expr, min.x)?;
    Ok(Violation {
        qv: (-lambda_min - beta_c).max(0.0),
        lambda_min,
        beta_c,
        theta_star: min.x,
        state,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DickeViolation {
    pub n: usize,
    /// Down spins of the evaluated Dicke state.
    pub k: usize,
    /// Lowest value of the expression over `θ`.
    pub value: f64,
    pub beta_c: f64,
    pub violated: bool,
    pub theta_star: f64,
    /// `(−value − β_C) / β_C`.
    pub relative: f64,
}

/// Evaluates the Dicke-tailored expression on `|D_n^k⟩` and minimizes over
/// `θ`; `k` defaults to `⌊n/2⌋`.
pub fn dicke_violation(n: usize, k: Option<usize>, search: ThetaSearch) -> Result<DickeViolation> {
    let expr = dicke_expression(n)?;
    let beta_c = expr.bound.ok_or(Error::MissingBound)?;
    let k = k.unwrap_or(n / 2);
    let state = dicke_state(n, k)?;
    let mut failure = None;
    let min = scalar_minimize(
        |theta| match symmetrized_correlators(&state, theta) {
            Ok(s) => expr.evaluate(&s),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        search.lo,
        search.hi,
        search.options(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let min = min?;
    Ok(DickeViolation {
        n,
        k,
        value: min.value,
        beta_c,
        violated: min.value < -beta_c,
        theta_star: min.x,
        relative: (-min.value - beta_c) / beta_c,
    })
}

/// Expression families indexed by `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpressionFamily {
    Murcia,
    Dicke,
    Rioja {
        params: RiojaParams,
        check_parity: bool,
    },
}

impl ExpressionFamily {
    /// The member at `n`, with a bound: the closed form where the family
    /// has one, otherwise enumeration.
    pub fn instantiate(&self, n: usize) -> Result<PIBellExpression> {
        let e = match *self {
            ExpressionFamily::Murcia => murcia(n)?,
            ExpressionFamily::Dicke => dicke_expression(n)?,
            ExpressionFamily::Rioja {
                params,
                check_parity,
            } => rioja(params, n, check_parity)?,
        };
        if e.bound.is_some() {
            return Ok(e);
        }
        let b = classical_bound_symmetric(&e)?.beta_c;
        Ok(e.with_bound(b, crate::symmetric::BoundProvenance::Enumeration))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub beta_c: f64,
    pub qv: f64,
    pub ratio: f64,
    pub theta_star: f64,
}

impl ScanRow {
    pub const CSV_HEADER: &'static str = "n,beta_c,qv,ratio,theta_star";
}

/// One [`max_violation`] per `n`, computed in parallel, rows in input order.
pub fn ratio_scan(
    family: &ExpressionFamily,
    ns: &[usize],
    search: ThetaSearch,
) -> Result<Vec<ScanRow>> {
    ns.par_iter()
        .map(|&n| {
            let expr = family.instantiate(n)?;
            let v = max_violation(&expr, search)?;
            Ok(ScanRow {
                n,
                beta_c: v.beta_c,
                qv: v.qv,
                ratio: v.ratio(),
                theta_star: v.theta_star,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub theta: f64,
    /// `λ_min` of the Bell operator.
    pub value: f64,
    pub beta_c: f64,
    pub violated: bool,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "n,theta,value,beta_c,violated";
}

/// `λ_min(𝓑(θ))` at each angle.
pub fn theta_sweep(expr: &PIBellExpression, thetas: &[f64]) -> Result<Vec<SweepRow>> {
    let beta_c = expr.bound.ok_or(Error::MissingBound)?;
    thetas
        .par_iter()
        .map(|&theta| {
            let value = bell_operator(expr, theta)?.lowest_eigenpair()?.value;
            Ok(SweepRow {
                n: expr.n,
                theta,
                value,
                beta_c,
                violated: value < -beta_c,
            })
        })
        .collect()
}

/// Dense reference used for cross-checks: `A`, `B` as matrices.
pub fn collective_observables(n: usize, theta: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let p = pieces(n, theta);
    let a = DMatrix::from_diagonal(&DVector::from_vec(p.a.clone()));
    let mut b = DMatrix::from_diagonal(&DVector::from_vec(p.bd.clone()));
    for k in 0..n {
        b[(k, k + 1)] = p.bo[k];
        b[(k + 1, k)] = p.bo[k];
    }
    (a, b)
}

/// `⟨ψ| 𝓑 |ψ⟩`.
pub fn bell_expectation(
    expr: &PIBellExpression,
    state: &SymmetricState,
    theta: f64,
) -> Result<f64> {
    if state.n() != expr.n {
        return Err(Error::DimensionMismatch {
            expected: expr.n,
            found: state.n(),
        });
    }
    let b = bell_operator(expr, theta)?;
    let psi = state.amplitudes();
    let re: Vec<f64> = psi.iter().map(|z| z.re).collect();
    let im: Vec<f64> = psi.iter().map(|z| z.im).collect();
    Ok(b.quadratic_form(&re) + b.quadratic_form(&im))
}
