//! Explicitly restarted Lanczos for the lowest eigenpair of a Hermitian
//! operator given only through its action on vectors.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::rng::RandomSource;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Krylov subspace size per restart cycle.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Relative residual target, `‖Hx − λx‖ ≤ tol · max(1, |λ|)`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 64,
            max_restarts: 400,
            tol: 1e-10,
            seed: 0x001a_2c05,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosResult {
    pub value: f64,
    pub vector: Vec<C64>,
    pub residual: f64,
    pub restarts: usize,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn lanczos_lowest<F>(dim: usize, apply: F, opts: LanczosOptions) -> Result<LanczosResult>
where
    F: Fn(&[C64], &mut [C64]),
{
    if dim == 0 {
        return Err(Error::invalid("lanczos on an empty space"));
    }
    let mut rng = RandomSource::new(opts.seed);
    let mut start: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
    let nrm = norm(&start);
    start.iter_mut().for_each(|z| *z /= nrm);

    let kmax = opts.krylov_dim.clamp(2, dim.max(2)).min(dim);
    let mut w = vec![C64::new(0.0, 0.0); dim];
    let mut best = LanczosResult {
        value: f64::INFINITY,
        vector: start.clone(),
        residual: f64::INFINITY,
        restarts: 0,
    };

    for restart in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(kmax);
        let mut alpha = Vec::with_capacity(kmax);
        let mut beta: Vec<f64> = Vec::with_capacity(kmax);
        basis.push(start.clone());
        loop {
            let j = basis.len() - 1;
            apply(&basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // Full reorthogonalization, applied twice.
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= c * qi;
                    }
                }
            }
            let b = norm(&w);
            if basis.len() == kmax || b <= 1e-14 * a.abs().max(1.0) {
                beta.push(b);
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|z| z / b).collect());
        }

        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let (imin, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        let y = eig.eigenvectors.column(imin);
        let mut x = vec![C64::new(0.0, 0.0); dim];
        for (q, &yi) in basis.iter().zip(y.iter()) {
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi += qi * yi;
            }
        }
        let nx = norm(&x);
        x.iter_mut().for_each(|z| *z /= nx);
        apply(&x, &mut w);
        let value = dot(&x, &w).re;
        let residual = w
            .iter()
            .zip(&x)
            .map(|(hw, xi)| (hw - xi * value).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if value < best.value || residual < best.residual {
            best = LanczosResult {
                value,
                vector: x.clone(),
                residual,
                restarts: restart,
            };
        }
        if residual <= opts.tol * value.abs().max(1.0) {
            return Ok(LanczosResult {
                value,
                vector: x,
                residual,
                restarts: restart,
            });
        }
        start = x;
    }
    Err(Error::NotConverged {
        iterations: opts.max_restarts,
        residual: best.residual,
    })
}
