//! Nearest-neighbor chain Hamiltonians `H = Σ_i h_{i,i+1} + Σ_i f_i` and
//! their exact ground states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chains::mps::checked_pow;
use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eigen, kron, lanczos_lowest, HermitianMatrix, LanczosOptions, RandomSource,
};
use crate::quantum::entropy::{entanglement_entropy, LogBase};
use crate::quantum::{Bipartition, StateVector};

/// Largest `d^N` handled by [`ground_state_exact`].
pub const MAX_GROUND_STATE_DIM: usize = 1 << 13;

/// Up to this dimension the full matrix is diagonalized densely.
pub const DENSE_GROUND_STATE_DIM: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
}

impl Boundary {
    /// `|∂A|` for a contiguous block cut out of the chain.
    pub fn cut_size(self) -> usize {
        match self {
            Boundary::Open => 1,
            Boundary::Periodic => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainHamiltonian {
    n: usize,
    d: usize,
    boundary: Boundary,
    /// `bonds[i]` acts on sites `i, (i+1) mod N` (0-based), a `d² × d²` matrix.
    bonds: Vec<HermitianMatrix>,
    /// Per-site `d × d` terms.
    fields: Option<Vec<HermitianMatrix>>,
}

impl ChainHamiltonian {
    /// One bond term per bond: `N − 1` for open chains, `N` for periodic ones.
    pub fn new(
        n: usize,
        d: usize,
        boundary: Boundary,
        bonds: Vec<HermitianMatrix>,
        fields: Option<Vec<HermitianMatrix>>,
    ) -> Result<Self> {
        if n < 2 || d < 2 {
            return Err(Error::invalid(format!(
                "chain needs N >= 2 and d >= 2, got N = {n}, d = {d}"
            )));
        }
        if boundary == Boundary::Periodic && n < 3 {
            return Err(Error::invalid("periodic chains need N >= 3"));
        }
        let expected = match boundary {
            Boundary::Open => n - 1,
            Boundary::Periodic => n,
        };
        if bonds.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: bonds.len(),
            });
        }
        if let Some(b) = bonds.iter().find(|b| b.dim() != d * d) {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: b.dim(),
            });
        }
        if let Some(f) = &fields {
            if f.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: f.len(),
                });
            }
            if let Some(x) = f.iter().find(|x| x.dim() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: x.dim(),
                });
            }
        }
        let finite = |m: &HermitianMatrix| {
            m.matrix()
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite())
        };
        if !bonds.iter().all(finite) || !fields.iter().flatten().all(finite) {
            return Err(Error::invalid("chain terms must be finite"));
        }
        Ok(Self {
            n,
            d,
            boundary,
            bonds,
            fields,
        })
    }

    /// Same bond term on every bond, same field on every site.
    pub fn uniform(
        n: usize,
        d: usize,
        boundary: Boundary,
        bond: HermitianMatrix,
        field: Option<HermitianMatrix>,
    ) -> Result<Self> {
        let bonds = match boundary {
            Boundary::Open => n.saturating_sub(1),
            Boundary::Periodic => n,
        };
        Self::new(n, d, boundary, vec![bond; bonds], field.map(|f| vec![f; n]))
    }

    /// `−J Σ σ_z σ_z − h Σ σ_x`.
    pub fn transverse_ising(n: usize, j: f64, h: f64, boundary: Boundary) -> Result<Self> {
        let zz = kron(&pauli_z(), &pauli_z()) * C64::new(-j, 0.0);
        let x = pauli_x() * C64::new(-h, 0.0);
        Self::uniform(
            n,
            2,
            boundary,
            HermitianMatrix::new(zz)?,
            Some(HermitianMatrix::new(x)?),
        )
    }

    /// `J Σ S_i · S_{i+1}` with `S = σ/2`.
    pub fn heisenberg(n: usize, j: f64, boundary: Boundary) -> Result<Self> {
        let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
        let term = (kron(&x, &x) + kron(&y, &y) + kron(&z, &z)) * C64::new(j / 4.0, 0.0);
        Self::uniform(n, 2, boundary, HermitianMatrix::new(term)?, None)
    }

    /// Random Hermitian bond terms with Gaussian entries, each scaled to
    /// spectral norm 1, and no field.
    pub fn random(n: usize, d: usize, boundary: Boundary, rng: &mut RandomSource) -> Result<Self> {
        let count = match boundary {
            Boundary::Open => n.saturating_sub(1),
            Boundary::Periodic => n,
        };
        let dd = d * d;
        let bonds = (0..count)
            .map(|_| {
                let g = DMatrix::from_fn(dd, dd, |_, _| rng.complex_normal());
                let h = HermitianMatrix::new((&g + g.adjoint()) * C64::new(0.5, 0.0))?;
                let norm = spectral_norm(&h);
                Ok(h.scale(1.0 / norm.max(f64::MIN_POSITIVE)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, d, boundary, bonds, None)
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn bonds(&self) -> &[HermitianMatrix] {
        &self.bonds
    }

    pub fn fields(&self) -> Option<&[HermitianMatrix]> {
        self.fields.as_deref()
    }

    /// `J`, the largest spectral norm among the bond terms.
    pub fn max_term_norm(&self) -> f64 {
        self.bonds.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    /// Bond indices crossing the cut between sites `cut − 1` and `cut`
    /// (0-based), including the wrap-around bond on periodic chains.
    pub fn crossing_bonds(&self, cut: usize) -> Vec<usize> {
        let mut out = vec![cut - 1];
        if self.boundary == Boundary::Periodic {
            out.push(self.n - 1);
        }
        out
    }

    pub fn dim(&self) -> Result<usize> {
        checked_pow(self.d, self.n)
    }

    /// `y += H x` without forming the matrix.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        let (n, d) = (self.n, self.d);
        let stride = |site: usize| d.pow((n - 1 - site) as u32);
        for (b, term) in self.bonds.iter().enumerate() {
            let (si, sj) = (stride(b), stride((b + 1) % n));
            apply_two_site(term.matrix(), d, si, sj, x, y);
        }
        if let Some(fields) = &self.fields {
            for (site, f) in fields.iter().enumerate() {
                let s = stride(site);
                let m = f.matrix();
                for (idx, &xv) in x.iter().enumerate() {
                    if xv == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let a = (idx / s) % d;
                    let base = idx - a * s;
                    for a2 in 0..d {
                        y[base + a2 * s] += m[(a2, a)] * xv;
                    }
                }
            }
        }
    }

    /// Full `d^N × d^N` matrix.
    pub fn to_matrix(&self) -> Result<HermitianMatrix> {
        let dim = self.dim()?;
        let mut out = DMatrix::<C64>::zeros(dim, dim);
        let mut e = vec![C64::new(0.0, 0.0); dim];
        let mut col = vec![C64::new(0.0, 0.0); dim];
        for c in 0..dim {
            e[c] = C64::new(1.0, 0.0);
            col.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            self.apply(&e, &mut col);
            out.column_mut(c).copy_from_slice(&col);
            e[c] = C64::new(0.0, 0.0);
        }
        Ok(HermitianMatrix::from_raw_symmetrized(out))
    }
}

fn apply_two_site(h: &DMatrix<C64>, d: usize, si: usize, sj: usize, x: &[C64], y: &mut [C64]) {
    for (idx, &xv) in x.iter().enumerate() {
        if xv == C64::new(0.0, 0.0) {
            continue;
        }
        let a = (idx / si) % d;
        let b = (idx / sj) % d;
        let base = idx - a * si - b * sj;
        let col = a * d + b;
        for a2 in 0..d {
            for b2 in 0..d {
                let m = h[(a2 * d + b2, col)];
                if m != C64::new(0.0, 0.0) {
                    y[base + a2 * si + b2 * sj] += m * xv;
                }
            }
        }
    }
}

pub(crate) fn spectral_norm(h: &HermitianMatrix) -> f64 {
    crate::numerics::eigvalsh(h)
        .iter()
        .fold(0.0, |acc: f64, x| acc.max(x.abs()))
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
}

/// Lowest eigenpair, dense up to [`DENSE_GROUND_STATE_DIM`] and Lanczos
/// beyond.
pub fn ground_state_exact(h: &ChainHamiltonian) -> Result<GroundState> {
    let dim = h.dim()?;
    if dim > MAX_GROUND_STATE_DIM {
        return Err(Error::TooLarge {
            what: "ground state Hilbert space dimension",
            size: dim as u128,
            limit: MAX_GROUND_STATE_DIM as u128,
        });
    }
    let dims = vec![h.d; h.n];
    if dim <= DENSE_GROUND_STATE_DIM {
        let eig = hermitian_eigen(&h.to_matrix()?);
        let state = StateVector::normalized(dims, eig.column(0))?;
        return Ok(GroundState {
            energy: eig.values[0],
            state,
        });
    }
    let res = lanczos_lowest(
        dim,
        |x, y| {
            y.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            h.apply(x, y);
        },
        LanczosOptions::default(),
    )?;
    let state = StateVector::normalized(dims, DVector::from_vec(res.vector))?;
    Ok(GroundState {
        energy: res.value,
        state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRow {
    pub block: usize,
    pub entropy_bits: f64,
}

impl EntropyRow {
    pub const CSV_HEADER: &'static str = "block,entropy_bits";
}

/// `S(ρ_R)` in bits for `R = {1..r}`, `r = 1..=max_block`.
pub fn block_entropy_curve(psi: &StateVector, max_block: usize) -> Result<Vec<EntropyRow>> {
    let n = psi.dims().len();
    if max_block == 0 || max_block > n {
        return Err(Error::invalid(format!(
            "block size must be in 1..={n}, got {max_block}"
        )));
    }
    (1..=max_block)
        .map(|r| {
            let bip = Bipartition::at_cut(psi.dims(), r)?;
            Ok(EntropyRow {
                block: r,
                entropy_bits: entanglement_entropy(psi, bip, LogBase::Two)?,
            })
        })
        .collect()
}
