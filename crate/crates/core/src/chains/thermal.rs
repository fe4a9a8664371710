//! Mutual information of thermal states across a cut, quantum and classical,
//! against their area-law bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::hamiltonian::{spectral_norm, Boundary, ChainHamiltonian};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, RandomSource};
use crate::quantum::entropy::{entropy_of_spectrum, mutual_information, LogBase};
use crate::quantum::{Bipartition, DensityOperator};

/// Largest `d^N` for the quantum thermal check.
pub const MAX_THERMAL_DIM: usize = 1 << 10;

/// Largest number of joint classical configurations.
pub const MAX_GIBBS_CONFIGS: usize = 1_000_000;

/// Slack allowed when comparing a mutual information with its bound.
pub const BOUND_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalCheck {
    pub beta: f64,
    pub mutual_info: f64,
    pub bound: f64,
    pub ok: bool,
}

impl ThermalCheck {
    pub const CSV_HEADER: &'static str = "beta,mutual_info,bound,ok";

    fn new(beta: f64, mutual_info: f64, bound: f64) -> Self {
        Self {
            beta,
            mutual_info,
            bound,
            ok: mutual_info <= bound + BOUND_TOL,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::invalid(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    Ok(())
}

fn check_cut(cut: usize, n: usize) -> Result<()> {
    if cut == 0 || cut >= n {
        return Err(Error::invalid(format!("cut must be in 1..{n}, got {cut}")));
    }
    Ok(())
}

/// `ρ = e^{−βH}/Z` for a small chain.
pub fn thermal_state(h: &ChainHamiltonian, beta: f64) -> Result<DensityOperator> {
    check_beta(beta)?;
    let dim = h.dim()?;
    if dim > MAX_THERMAL_DIM {
        return Err(Error::TooLarge {
            what: "thermal state Hilbert space dimension",
            size: dim as u128,
            limit: MAX_THERMAL_DIM as u128,
        });
    }
    let eig = hermitian_eigen(&h.to_matrix()?);
    let e0 = eig.values[0];
    let weights: Vec<f64> = eig
        .values
        .iter()
        .map(|&e| (-beta * (e - e0)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let mut scaled = eig.vectors.clone();
    for (c, w) in weights.iter().enumerate() {
        scaled.column_mut(c).scale_mut(w / z);
    }
    let rho = scaled * eig.vectors.adjoint();
    DensityOperator::new(
        vec![h.local_dim(); h.sites()],
        crate::numerics::HermitianMatrix::new(rho)?,
    )
}

/// `I(A:B)` in nats for `A` = the first `cut` sites, against
/// `2β‖h‖|∂A|`, with `‖h‖` the largest spectral norm among the bond terms
/// crossing the cut.
pub fn thermal_mutual_info_check(
    h: &ChainHamiltonian,
    beta: f64,
    cut: usize,
) -> Result<ThermalCheck> {
    check_cut(cut, h.sites())?;
    let rho = thermal_state(h, beta)?;
    let bip = Bipartition::at_cut(rho.dims(), cut)?;
    let mi = mutual_information(&rho, bip, LogBase::E)?;
    let crossing = h.crossing_bonds(cut);
    let norm = crossing
        .iter()
        .map(|&b| spectral_norm(&h.bonds()[b]))
        .fold(0.0, f64::max);
    let bound = 2.0 * beta * norm * h.boundary().cut_size() as f64;
    Ok(ThermalCheck::new(beta, mi, bound))
}

/// One check per `β`, computed in parallel, returned in input order.
pub fn thermal_beta_scan(
    h: &ChainHamiltonian,
    betas: &[f64],
    cut: usize,
) -> Result<Vec<ThermalCheck>> {
    betas
        .par_iter()
        .map(|&b| thermal_mutual_info_check(h, b, cut))
        .collect()
}

/// Reads a [`ClassicalChain`] from JSON and validates it.
pub fn parse_classical_chain(text: &str) -> Result<ClassicalChain> {
    let c: ClassicalChain = serde_json::from_str(text)?;
    c.validate()?;
    Ok(c)
}

/// Classical `d`-state chain with energy
/// `E(x) = Σ_bonds J_b[x_i][x_{i+1}] + Σ_i f_i[x_i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalChain {
    pub n: usize,
    pub d: usize,
    pub boundary: Boundary,
    /// Row-major `d × d` coupling tables, one per bond.
    pub couplings: Vec<Vec<f64>>,
    /// Optional length-`d` field per site.
    #[serde(default)]
    pub fields: Option<Vec<Vec<f64>>>,
}

impl ClassicalChain {
    pub fn validate(&self) -> Result<usize> {
        if self.n < 2 || self.d < 2 {
            return Err(Error::invalid("classical chain needs n >= 2 and d >= 2"));
        }
        let bonds = match self.boundary {
            Boundary::Open => self.n - 1,
            Boundary::Periodic if self.n >= 3 => self.n,
            Boundary::Periodic => return Err(Error::invalid("periodic chains need n >= 3")),
        };
        if self.couplings.len() != bonds {
            return Err(Error::DimensionMismatch {
                expected: bonds,
                found: self.couplings.len(),
            });
        }
        if let Some(t) = self.couplings.iter().find(|t| t.len() != self.d * self.d) {
            return Err(Error::DimensionMismatch {
                expected: self.d * self.d,
                found: t.len(),
            });
        }
        if let Some(f) = &self.fields {
            if f.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: f.len(),
                });
            }
            if let Some(x) = f.iter().find(|x| x.len() != self.d) {
                return Err(Error::DimensionMismatch {
                    expected: self.d,
                    found: x.len(),
                });
            }
        }
        let all = self
            .couplings
            .iter()
            .flatten()
            .chain(self.fields.iter().flatten().flatten());
        if all.into_iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("classical chain energies must be finite"));
        }
        let configs = (self.d as u128)
            .checked_pow(self.n as u32)
            .unwrap_or(u128::MAX);
        if configs > MAX_GIBBS_CONFIGS as u128 {
            return Err(Error::TooLarge {
                what: "classical configurations",
                size: configs,
                limit: MAX_GIBBS_CONFIGS as u128,
            });
        }
        Ok(configs as usize)
    }

    /// Ferromagnetic Ising, `J[a][b] = −J` when `a = b` and `+J` otherwise.
    pub fn ising(n: usize, j: f64, boundary: Boundary) -> Self {
        let bonds = match boundary {
            Boundary::Open => n.saturating_sub(1),
            Boundary::Periodic => n,
        };
        Self {
            n,
            d: 2,
            boundary,
            couplings: vec![vec![-j, j, j, -j]; bonds],
            fields: None,
        }
    }

    /// Standard normal couplings and fields.
    pub fn random(n: usize, d: usize, boundary: Boundary, rng: &mut RandomSource) -> Self {
        let bonds = match boundary {
            Boundary::Open => n.saturating_sub(1),
            Boundary::Periodic => n,
        };
        let couplings = (0..bonds)
            .map(|_| (0..d * d).map(|_| rng.normal()).collect())
            .collect();
        let fields = Some(
            (0..n)
                .map(|_| (0..d).map(|_| rng.normal()).collect())
                .collect(),
        );
        Self {
            n,
            d,
            boundary,
            couplings,
            fields,
        }
    }

    fn energy(&self, digits: &[usize]) -> f64 {
        let d = self.d;
        let mut e: f64 = self
            .couplings
            .iter()
            .enumerate()
            .map(|(b, t)| t[digits[b] * d + digits[(b + 1) % self.n]])
            .sum();
        if let Some(f) = &self.fields {
            e += f.iter().zip(digits).map(|(row, &x)| row[x]).sum::<f64>();
        }
        e
    }
}

/// Shannon `I(A:B)` in bits of the Gibbs distribution `p ∝ e^{−βE}` for
/// `A` = the first `cut` sites, against `|∂A| log₂ d`.
pub fn classical_gibbs_mutual_info(
    chain: &ClassicalChain,
    beta: f64,
    cut: usize,
) -> Result<ThermalCheck> {
    check_beta(beta)?;
    let configs = chain.validate()?;
    check_cut(cut, chain.n)?;
    let d = chain.d;
    let mut digits = vec![0usize; chain.n];
    let mut log_w = Vec::with_capacity(configs);
    for idx in 0..configs {
        let mut r = idx;
        for slot in digits.iter_mut().rev() {
            *slot = r % d;
            r /= d;
        }
        log_w.push(-beta * chain.energy(&digits));
    }
    let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = log_w.iter().map(|&l| (l - top).exp()).collect();
    let z: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= z);

    let right = d.pow((chain.n - cut) as u32);
    let left = configs / right;
    let mut pa = vec![0.0; left];
    let mut pb = vec![0.0; right];
    for (idx, &x) in p.iter().enumerate() {
        pa[idx / right] += x;
        pb[idx % right] += x;
    }
    let h = |v: &[f64]| entropy_of_spectrum(v, LogBase::Two);
    let mi = (h(&pa) + h(&pb) - h(&p)).max(0.0);
    let bound = chain.boundary.cut_size() as f64 * (d as f64).log2();
    Ok(ThermalCheck::new(beta, mi, bound))
}
