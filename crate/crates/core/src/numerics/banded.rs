//! Real symmetric banded matrices and a lowest-eigenpair solver for them.
//!
//! The solver brackets `λ_min` by bisection on the shift `σ`, using the fact
//! that a banded Cholesky factorization of `M − σI` succeeds exactly when
//! `σ < λ_min`. The eigenvector then comes from inverse iteration with a
//! shift just below the bracket, reusing the same banded factorization.
//! Everything is `O(n b²)` per factorization, so the `n ~ 10⁴` Dicke-basis
//! Bell operators are cheap.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymBanded {
    n: usize,
    /// `diags[k][i] = M[i][i+k]` for `k = 0..=bandwidth`.
    diags: Vec<Vec<f64>>,
}

impl SymBanded {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let diags = (0..=bandwidth)
            .map(|k| vec![0.0; n.saturating_sub(k)])
            .collect();
        Self { n, diags }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.diags.len() - 1
    }

    /// Smallest `b` such that every entry with `|i − j| > b` is zero.
    pub fn effective_bandwidth(&self) -> usize {
        (0..self.diags.len())
            .rev()
            .find(|&k| self.diags[k].iter().any(|&x| x != 0.0))
            .unwrap_or(0)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        if k < self.diags.len() {
            self.diags[k][lo]
        } else {
            0.0
        }
    }

    /// Sets `M[i][j]` and `M[j][i]`. Panics if outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.diags[hi - lo][lo] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.diags[hi - lo][lo] += value;
    }

    pub fn from_dense(m: &DMatrix<f64>, bandwidth: usize) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.ncols(),
            });
        }
        let mut out = Self::zeros(n, bandwidth);
        for i in 0..n {
            for j in 0..n {
                let k = i.abs_diff(j);
                if k > bandwidth {
                    if m[(i, j)] != 0.0 {
                        return Err(Error::invalid(format!(
                            "entry ({i},{j}) lies outside bandwidth {bandwidth}"
                        )));
                    }
                } else if i <= j {
                    out.diags[k][i] = m[(i, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            *yi = self.diags[0][i] * x[i];
        }
        for k in 1..self.diags.len() {
            for (i, &m) in self.diags[k].iter().enumerate() {
                y[i] += m * x[i + k];
                y[i + k] += m * x[i];
            }
        }
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a * b).sum()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut radius = 0.0;
            for k in 1..self.diags.len() {
                if i + k < self.n {
                    radius += self.diags[k][i].abs();
                }
                if i >= k {
                    radius += self.diags[k][i - k].abs();
                }
            }
            lo = lo.min(self.diags[0][i] - radius);
            hi = hi.max(self.diags[0][i] + radius);
        }
        (lo, hi)
    }

    /// Lowest eigenvalue and a unit eigenvector.
    pub fn lowest_eigenpair(&self) -> Result<LowestEigenpair> {
        if self.n == 0 {
            return Err(Error::invalid("empty matrix"));
        }
        if self.diags.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::invalid("banded matrix has non-finite entries"));
        }
        let (g_lo, g_hi) = self.gershgorin();
        let scale = g_lo.abs().max(g_hi.abs()).max(f64::MIN_POSITIVE);
        // A 1×1 or all-zero matrix has e₀ as a lowest eigenvector.
        if self.n == 1 || (g_lo == 0.0 && g_hi == 0.0) {
            let mut vector = vec![0.0; self.n];
            vector[0] = 1.0;
            return Ok(LowestEigenpair {
                value: self.diags[0][0],
                vector,
                residual: 0.0,
            });
        }

        // λ_min > lo always holds, and λ_min <= min_i M_ii.
        let mut lo = g_lo - 1e-3 * scale;
        let mut hi = self.diags[0].iter().copied().fold(f64::INFINITY, f64::min);
        let mut factor = BandCholesky::workspace(self.n, self.bandwidth());
        let floor = 4.0 * f64::EPSILON * scale;
        while hi - lo > floor {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if factor.factor(self, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }

        // Inverse iteration below the bracket keeps M − σI positive definite.
        let mut shift = lo - (hi - lo).max(floor);
        while !factor.factor(self, shift) {
            shift -= 16.0 * floor;
        }
        let mut v: Vec<f64> = (0..self.n)
            .map(|i| 1.0 + 1e-3 * ((i * 7919) % 101) as f64)
            .collect();
        normalize(&mut v);
        let mut value = self.quadratic_form(&v);
        let mut residual = f64::INFINITY;
        let mut mv = vec![0.0; self.n];
        for _ in 0..8 {
            factor.solve(&mut v);
            normalize(&mut v);
            self.matvec(&v, &mut mv);
            value = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
            residual = mv
                .iter()
                .zip(&v)
                .map(|(m, x)| (m - value * x).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= 1e-12 * scale {
                break;
            }
        }
        Ok(LowestEigenpair {
            value,
            vector: v,
            residual,
        })
    }
}

#[derive(Debug, Clone)]
pub struct LowestEigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖M v − λ v‖₂`.
    pub residual: f64,
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Lower-triangular banded Cholesky factor, `l[i][t] = L[i][i − t]`.
struct BandCholesky {
    n: usize,
    b: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    fn workspace(n: usize, b: usize) -> Self {
        Self {
            n,
            b,
            l: vec![0.0; n * (b + 1)],
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.l[i * (self.b + 1) + (i - j)]
    }

    /// Factors `M − shift·I`; returns false when a pivot is not positive.
    fn factor(&mut self, m: &SymBanded, shift: f64) -> bool {
        let b = self.b;
        for j in 0..self.n {
            let k0 = j.saturating_sub(b);
            let mut d = m.diags[0][j] - shift;
            for k in k0..j {
                let x = self.at(j, k);
                d -= x * x;
            }
            if !(d > 0.0) {
                return false;
            }
            let ljj = d.sqrt();
            self.l[j * (b + 1)] = ljj;
            for i in (j + 1)..(j + b + 1).min(self.n) {
                let mut s = m.diags[i - j][j];
                for k in i.saturating_sub(b)..j {
                    s -= self.at(i, k) * self.at(j, k);
                }
                self.l[i * (b + 1) + (i - j)] = s / ljj;
            }
        }
        true
    }

    /// Solves `L Lᵀ x = rhs` in place.
    fn solve(&self, x: &mut [f64]) {
        let b = self.b;
        for i in 0..self.n {
            let mut s = x[i];
            for (k, xk) in x.iter().enumerate().take(i).skip(i.saturating_sub(b)) {
                s -= self.at(i, k) * xk;
            }
            x[i] = s / self.at(i, i);
        }
        for i in (0..self.n).rev() {
            let mut s = x[i];
            for (k, xk) in x
                .iter()
                .enumerate()
                .take((i + b + 1).min(self.n))
                .skip(i + 1)
            {
                s -= self.at(k, i) * xk;
            }
            x[i] = s / self.at(i, i);
        }
    }
}
