//! Slow, obviously-correct reference computations shared by the integration
//! tests. Nothing here calls into the symmetric or banded machinery.

#![allow(dead_code)]

use bellscope::symmetric::PIBellExpression;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn sx() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn sy() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0)],
    )
}

pub fn sz() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

/// `op` acting on qubit `site` (0-based, most significant first) of `n`.
pub fn on_site(n: usize, site: usize, op: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(1, 1, c(1.0));
    for q in 0..n {
        let f = if q == site {
            op.clone()
        } else {
            DMatrix::identity(2, 2)
        };
        out = kron(&out, &f);
    }
    out
}

/// The Bell operator of `e` on all `2^n` amplitudes, built from the pair
/// sums term by term.
pub fn full_bell_operator(e: &PIBellExpression, theta: f64) -> DMatrix<C64> {
    let n = e.n;
    let m0 = sz();
    let m1 = sz() * c(theta.cos()) + sx() * c(theta.sin());
    let m0s: Vec<_> = (0..n).map(|i| on_site(n, i, &m0)).collect();
    let m1s: Vec<_> = (0..n).map(|i| on_site(n, i, &m1)).collect();
    let dim = 1 << n;
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..n {
        out += &m0s[i] * c(e.alpha) + &m1s[i] * c(e.beta);
        for j in 0..n {
            if i == j {
                continue;
            }
            out += &m0s[i] * &m0s[j] * c(e.gamma / 2.0);
            out += &m0s[i] * &m1s[j] * c(e.delta);
            out += &m1s[i] * &m1s[j] * c(e.epsilon / 2.0);
        }
    }
    out
}

/// Lowest eigenvalue of a Hermitian matrix through nalgebra directly.
pub fn lowest_eigenvalue(m: &DMatrix<C64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn sorted_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `β_C` by trying all `4^n` deterministic per-party answers.
pub fn brute_force_bound(e: &PIBellExpression) -> f64 {
    let n = e.n;
    let mut best = f64::INFINITY;
    for code in 0..(1u64 << (2 * n)) {
        let mut a0 = vec![0f64; n];
        let mut a1 = vec![0f64; n];
        for i in 0..n {
            a0[i] = if code >> (2 * i) & 1 == 0 { 1.0 } else { -1.0 };
            a1[i] = if code >> (2 * i + 1) & 1 == 0 {
                1.0
            } else {
                -1.0
            };
        }
        let (mut s0, mut s1, mut s00, mut s01, mut s11) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            s0 += a0[i];
            s1 += a1[i];
            for j in 0..n {
                if i != j {
                    s00 += a0[i] * a0[j];
                    s01 += a0[i] * a1[j];
                    s11 += a1[i] * a1[j];
                }
            }
        }
        let v = e.alpha * s0
            + e.beta * s1
            + e.gamma / 2.0 * s00
            + e.delta * s01
            + e.epsilon / 2.0 * s11;
        best = best.min(v);
    }
    -best
}

/// `H = −(λ/n) Σ_{i<j}(XX + YY) − h Σ Z` on the full space.
pub fn full_lmg(n: usize, lambda: f64, h: f64) -> DMatrix<C64> {
    let dim = 1 << n;
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    let xs: Vec<_> = (0..n).map(|i| on_site(n, i, &sx())).collect();
    let ys: Vec<_> = (0..n).map(|i| on_site(n, i, &sy())).collect();
    for i in 0..n {
        out -= on_site(n, i, &sz()) * c(h);
        for j in i + 1..n {
            out -= (&xs[i] * &xs[j] + &ys[i] * &ys[j]) * c(lambda / n as f64);
        }
    }
    out
}

/// Exact mean entanglement entropy (nats) of a random `m × n` pure state,
/// `Σ_{k=n+1}^{mn} 1/k − (m−1)/(2n)` for `m ≤ n`.
pub fn exact_page_mean(m: usize, n: usize) -> f64 {
    let tail: f64 = (n + 1..=m * n).map(|k| 1.0 / k as f64).sum();
    tail - (m as f64 - 1.0) / (2.0 * n as f64)
}

/// Von Neumann entropy (bits) of the left `cut` sites of a pure state on
/// `n` sites of dimension `d`, from the explicit reduced density matrix.
pub fn block_entropy_bits(psi: &[C64], d: usize, n: usize, cut: usize) -> f64 {
    let left = d.pow(cut as u32);
    let right = d.pow((n - cut) as u32);
    let m = DMatrix::from_fn(left, right, |i, j| psi[i * right + j]);
    let rho = &m * m.adjoint();
    rho.symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|&&p| p > 1e-15)
        .map(|&p| -p * p.log2())
        .sum()
}
