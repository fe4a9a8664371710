use crate::error::{Error, Result};

/// Golden-section refinement after a uniform grid pre-scan.
#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    /// Number of grid points, endpoints included. Values below 64 are raised to 64.
    pub grid: usize,
    /// Target width of the final bracket.
    pub tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            grid: 256,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

fn eval(f: &mut impl FnMut(f64) -> f64, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_nan() {
        Err(Error::NaN { x })
    } else {
        Ok(v)
    }
}

/// Minimizes `f` on `[a, b]`.
///
/// The best grid point (ties go to the smaller `x`) is bracketed by its grid
/// neighbours and refined by golden-section search until the bracket is
/// narrower than `tol`. The better of the refined point and the grid point is
/// returned, again preferring the smaller `x` on ties.
pub fn scalar_minimize(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    opts: MinimizeOptions,
) -> Result<Minimum> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!("invalid interval [{a}, {b}]")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let g = opts.grid.max(64);
    let step = (b - a) / (g - 1) as f64;
    let xs: Vec<f64> = (0..g)
        .map(|i| if i + 1 == g { b } else { a + step * i as f64 })
        .collect();
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let v = eval(&mut f, x)?;
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let grid_best = Minimum {
        x: xs[best_i],
        value: best_v,
    };

    let mut lo = xs[best_i.saturating_sub(1)];
    let mut hi = xs[(best_i + 1).min(g - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(&mut f, x1)?;
    let mut f2 = eval(&mut f, x2)?;
    while hi - lo > opts.tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(&mut f, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(&mut f, x2)?;
        }
    }
    let refined = if f1 <= f2 {
        Minimum { x: x1, value: f1 }
    } else {
        Minimum { x: x2, value: f2 }
    };
    let pick_refined = refined.value < grid_best.value
        || (refined.value == grid_best.value && refined.x < grid_best.x);
    Ok(if pick_refined { refined } else { grid_best })
}
