use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Thin singular value decomposition `M = U diag(σ) V†` with `σ` descending.
///
/// For an `r × c` input, `u` is `r × k`, `v` is `c × k`, `k = min(r, c)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<C64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<C64>,
}

impl Svd {
    /// Number of singular values above `rel_tol * σ_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        self.singular_values
            .iter()
            .filter(|&&s| s > rel_tol * top)
            .count()
    }

    pub fn reconstruct(&self) -> DMatrix<C64> {
        let mut us = self.u.clone();
        for (c, &s) in self.singular_values.iter().enumerate() {
            us.column_mut(c).scale_mut(s);
        }
        us * self.v.adjoint()
    }
}

/// Relative accuracy demanded of a decomposition before it is accepted.
const ACCEPT_TOL: f64 = 1e-10;

pub fn svd(m: &DMatrix<C64>) -> Result<Svd> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("svd of an empty matrix"));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("svd input has non-finite entries"));
    }
    let fast = lapack_style(m);
    if fast.is_accurate(m) {
        return Ok(fast);
    }
    // nalgebra's bidiagonal QR occasionally returns a wrong factorization for
    // rank-deficient complex input, so fall back to one-sided Jacobi.
    let slow = if rows >= cols {
        jacobi(m)
    } else {
        let t = jacobi(&m.adjoint());
        Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        }
    };
    if slow.is_accurate(m) {
        Ok(slow)
    } else {
        let residual = (slow.reconstruct() - m).norm();
        Err(Error::NotConverged {
            iterations: 100,
            residual,
        })
    }
}

fn lapack_style(m: &DMatrix<C64>) -> Svd {
    let (rows, cols) = m.shape();
    let dec = m.clone().svd(true, true);
    let u = dec.u.expect("u requested");
    let v_t = dec.v_t.expect("v_t requested");
    let k = dec.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let singular_values = order
        .iter()
        .map(|&i| dec.singular_values[i].max(0.0))
        .collect();
    let u = DMatrix::from_fn(rows, k, |r, c| u[(r, order[c])]);
    let v = DMatrix::from_fn(cols, k, |r, c| v_t[(order[c], r)].conj());
    Svd {
        u,
        singular_values,
        v,
    }
}

impl Svd {
    fn is_accurate(&self, m: &DMatrix<C64>) -> bool {
        let scale = m.norm().max(f64::MIN_POSITIVE);
        let k = self.singular_values.len();
        let eye = DMatrix::<C64>::identity(k, k);
        (self.reconstruct() - m).norm() <= ACCEPT_TOL * scale
            && (self.u.adjoint() * &self.u - &eye).norm() <= ACCEPT_TOL * k as f64
            && (self.v.adjoint() * &self.v - &eye).norm() <= ACCEPT_TOL * k as f64
    }
}

/// One-sided (Hestenes) Jacobi for `rows >= cols`.
fn jacobi(m: &DMatrix<C64>) -> Svd {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut v = DMatrix::<C64>::identity(cols, cols);
    for _ in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma: Vec<(f64, usize)> = (0..cols).map(|j| (a.column(j).norm(), j)).collect();
    sigma.sort_by(|x, y| y.0.total_cmp(&x.0));
    let top = sigma[0].0;
    let mut u = DMatrix::<C64>::zeros(rows, cols);
    let mut filled = 0;
    for (c, &(s, j)) in sigma.iter().enumerate() {
        if s > 1e-300 && s > f64::EPSILON * top * 1e-4 {
            u.set_column(c, &(a.column(j) / C64::new(s, 0.0)));
            filled += 1;
        }
    }
    complete_basis(&mut u, filled);
    let v = DMatrix::from_fn(cols, cols, |r, c| v[(r, sigma[c].1)]);
    let singular_values = sigma.iter().map(|&(s, _)| s).collect();
    Svd {
        u,
        singular_values,
        v,
    }
}

/// Replaces column `q` by `(a_q e^{-iφ})` rotated against column `p`.
fn rotate(x: &mut DMatrix<C64>, p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let back = phase.conj();
    for r in 0..x.nrows() {
        let xp = x[(r, p)];
        let xq = x[(r, q)] * back;
        x[(r, p)] = xp * c - xq * s;
        x[(r, q)] = xp * s + xq * c;
    }
}

/// Fills columns `filled..` with unit vectors orthogonal to all earlier ones.
fn complete_basis(u: &mut DMatrix<C64>, filled: usize) {
    let (rows, cols) = u.shape();
    let mut next = filled;
    for e in 0..rows {
        if next == cols {
            break;
        }
        let mut w = nalgebra::DVector::<C64>::zeros(rows);
        w[e] = C64::new(1.0, 0.0);
        // Two passes of Gram-Schmidt for stability.
        for _ in 0..2 {
            for c in 0..next {
                let proj = u.column(c).dotc(&w);
                w -= u.column(c) * proj;
            }
        }
        let n = w.norm();
        if n > 1e-8 {
            u.set_column(next, &(w / C64::new(n, 0.0)));
            next += 1;
        }
    }
}
