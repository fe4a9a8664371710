use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::RandomSource;
use crate::quantum::entropy::{entropy_of_spectrum, LogBase};
use crate::quantum::state::{Bipartition, StateVector};

/// Haar-random pure state on `C^m ⊗ C^n`: i.i.d. complex Gaussian
/// amplitudes, normalized.
pub fn haar_state(m: usize, n: usize, rng: &mut RandomSource) -> Result<StateVector> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("haar_state needs m, n >= 1"));
    }
    let amps = DVector::from_fn(m * n, |_, _| rng.complex_normal());
    StateVector::normalized(vec![m, n], amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PageStats {
    pub m: usize,
    pub n: usize,
    pub samples: usize,
    /// Sample mean of `S(ρ_A)` in nats.
    pub mean_entropy: f64,
    /// Standard error of that mean.
    pub std_error: f64,
    /// Sample mean of `tr ρ_A²`.
    pub mean_purity: f64,
    /// `ln m − m/(2n)`.
    pub predicted_entropy: f64,
    /// `(m + n)/(mn)`.
    pub predicted_purity: f64,
}

/// Monte-Carlo estimate of the average subsystem entropy and purity of
/// random pure states. Sample `i` draws from substream `i` of `rng`'s seed,
/// so the result does not depend on the thread count.
pub fn page_experiment(
    m: usize,
    n: usize,
    samples: usize,
    rng: &RandomSource,
) -> Result<PageStats> {
    if m == 0 || m > n {
        return Err(Error::invalid(format!(
            "page_experiment needs 1 <= m <= n, got m={m}, n={n}"
        )));
    }
    if samples < 100 {
        return Err(Error::invalid(format!(
            "page_experiment needs >= 100 samples, got {samples}"
        )));
    }
    let bip = Bipartition::new(m, n)?;
    let draws: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut sub = rng.substream(i as u64);
            let psi = haar_state(m, n, &mut sub)?;
            let rho_a =
                crate::quantum::ops::reduced_state(&psi, bip, crate::quantum::state::Side::Left)?;
            let p = crate::numerics::eigvalsh(rho_a.matrix());
            let purity: f64 = p.iter().map(|x| x * x).sum();
            Ok((entropy_of_spectrum(&p, LogBase::E), purity))
        })
        .collect::<Result<_>>()?;
    let k = samples as f64;
    let mean_entropy = draws.iter().map(|d| d.0).sum::<f64>() / k;
    let var = draws
        .iter()
        .map(|d| (d.0 - mean_entropy).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    let mean_purity = draws.iter().map(|d| d.1).sum::<f64>() / k;
    let (mf, nf) = (m as f64, n as f64);
    Ok(PageStats {
        m,
        n,
        samples,
        mean_entropy,
        std_error: (var / k).sqrt(),
        mean_purity,
        predicted_entropy: mf.ln() - mf / (2.0 * nf),
        predicted_purity: (mf + nf) / (mf * nf),
    })
}
