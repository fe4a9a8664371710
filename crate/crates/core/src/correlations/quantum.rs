use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::correlations::behavior::{Behavior, Scenario};
use crate::error::{Error, Result};
use crate::numerics::{eigvalsh, kron, scalar_minimize, HermitianMatrix, MinimizeOptions};
use crate::quantum::DensityOperator;

/// Tolerance on measurement positivity and completeness.
pub const MEASUREMENT_TOL: f64 = 1e-9;

/// `measurements[party][setting][outcome]`, each a PSD operator on that
/// party's factor, summing to the identity over outcomes.
pub type MeasurementSet = Vec<Vec<Vec<HermitianMatrix>>>;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Projectors onto the `±1` eigenspaces of `cos θ σ_z + sin θ cos φ σ_x +
/// sin θ sin φ σ_y`, outcome 0 being `+1`.
pub fn qubit_projective(theta: f64, phi: f64) -> Vec<HermitianMatrix> {
    let (nz, nx, ny) = (
        theta.cos(),
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
    );
    let obs = DMatrix::from_row_slice(2, 2, &[c(nz), C64::new(nx, -ny), C64::new(nx, ny), c(-nz)]);
    let id = DMatrix::<C64>::identity(2, 2);
    let half = c(0.5);
    vec![
        HermitianMatrix::new((&id + &obs) * half).expect("hermitian"),
        HermitianMatrix::new((&id - &obs) * half).expect("hermitian"),
    ]
}

fn validate_measurements(s: Scenario, dims: &[usize], meas: &MeasurementSet) -> Result<()> {
    for (party, settings) in meas.iter().enumerate() {
        if settings.len() != s.m {
            return Err(Error::InvalidMeasurement(format!(
                "party {party} has {} settings, expected {}",
                settings.len(),
                s.m
            )));
        }
        for (x, ops) in settings.iter().enumerate() {
            if ops.len() != s.d {
                return Err(Error::InvalidMeasurement(format!(
                    "party {party} setting {x} has {} outcomes, expected {}",
                    ops.len(),
                    s.d
                )));
            }
            let dim = dims[party];
            let mut total = DMatrix::<C64>::zeros(dim, dim);
            for (a, op) in ops.iter().enumerate() {
                if op.dim() != dim {
                    return Err(Error::InvalidMeasurement(format!(
                        "operator ({party}, {x}, {a}) has dimension {}, party dimension is {dim}",
                        op.dim()
                    )));
                }
                let low = eigvalsh(op)[0];
                if low < -MEASUREMENT_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "operator ({party}, {x}, {a}) has eigenvalue {low:e}"
                    )));
                }
                total += op.matrix();
            }
            let defect = (total - DMatrix::<C64>::identity(dim, dim)).norm();
            if defect > MEASUREMENT_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "party {party} setting {x} does not sum to the identity (defect {defect:e})"
                )));
            }
        }
    }
    Ok(())
}

/// `P(a|x) = tr(ρ M^{x₁}_{a₁} ⊗ ⋯ ⊗ M^{xₙ}_{aₙ})`, one party per tensor factor
/// of `rho`.
pub fn behavior_from_quantum(rho: &DensityOperator, meas: &MeasurementSet) -> Result<Behavior> {
    let n = rho.dims().len();
    if meas.len() != n {
        return Err(Error::InvalidMeasurement(format!(
            "{} parties measured, state has {n} factors",
            meas.len()
        )));
    }
    let m = meas[0].len();
    let d = meas[0].first().map_or(0, Vec::len);
    let s = Scenario::new(n, m, d)?;
    validate_measurements(s, rho.dims(), meas)?;
    let r = rho.matrix().matrix();
    let mut table = Vec::with_capacity(s.table_len());
    for xi in 0..s.contexts() {
        let x = s.settings_of(xi);
        for ai in 0..s.outcomes() {
            let a = s.outcomes_of(ai);
            let mut op = meas[0][x[0]][a[0]].matrix().clone();
            for p in 1..n {
                op = kron(&op, meas[p][x[p]][a[p]].matrix());
            }
            let p: C64 = r
                .iter()
                .zip(op.transpose().iter())
                .map(|(u, v)| u * v)
                .sum();
            table.push(p.re.max(0.0));
        }
    }
    Behavior::new(s, table)
}

/// Pauli correlations `T[i][j] = tr(ρ σ_i ⊗ σ_j)` for `i, j ∈ {z, x}`.
fn zx_correlations(rho: &DensityOperator) -> Result<[[f64; 2]; 2]> {
    if rho.dims() != [2, 2] {
        return Err(Error::invalid(format!(
            "expected a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    let z = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let paulis = [&z, &x];
    let r = rho.matrix().matrix();
    let mut t = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            t[i][j] = (r * kron(paulis[i], paulis[j])).trace().re;
        }
    }
    Ok(t)
}

fn correlator(t: &[[f64; 2]; 2], a: f64, b: f64) -> f64 {
    let u = [a.cos(), a.sin()];
    let v = [b.cos(), b.sin()];
    (0..2)
        .map(|i| (0..2).map(|j| u[i] * t[i][j] * v[j]).sum::<f64>())
        .sum()
}

fn chsh_from(t: &[[f64; 2]; 2], ang: &[f64; 4]) -> f64 {
    let [a0, a1, b0, b1] = *ang;
    correlator(t, a0, b0) + correlator(t, a0, b1) + correlator(t, a1, b0) - correlator(t, a1, b1)
}

/// CHSH correlator value with observables `cos θ σ_z + sin θ σ_x` at angles
/// `[a₀, a₁, b₀, b₁]`.
pub fn chsh_value(rho: &DensityOperator, angles: [f64; 4]) -> Result<f64> {
    Ok(chsh_from(&zx_correlations(rho)?, &angles))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshDemo {
    pub value: f64,
    pub angles: [f64; 4],
}

/// Maximizes the CHSH correlator value over xz-plane projective settings:
/// a `grid⁴` scan of `[0, 2π)` followed by cyclic coordinate refinement.
pub fn chsh_quantum_demo(rho: &DensityOperator, grid: usize) -> Result<ChshDemo> {
    if grid == 0 {
        return Err(Error::invalid("angle grid must have at least one point"));
    }
    let t = zx_correlations(rho)?;
    let step = std::f64::consts::TAU / grid as f64;
    let mut best = ([0.0; 4], f64::NEG_INFINITY);
    for i in 0..grid.pow(4) {
        let idx = [
            i / grid.pow(3),
            i / grid.pow(2) % grid,
            i / grid % grid,
            i % grid,
        ];
        let ang = idx.map(|k| k as f64 * step);
        let v = chsh_from(&t, &ang);
        if v > best.1 {
            best = (ang, v);
        }
    }
    let opts = MinimizeOptions {
        grid: 64,
        tol: 1e-10,
    };
    for _ in 0..50 {
        let before = best.1;
        for k in 0..4 {
            let mut ang = best.0;
            let min = scalar_minimize(
                |th| {
                    ang[k] = th;
                    -chsh_from(&t, &ang)
                },
                best.0[k] - step,
                best.0[k] + step,
                opts,
            )?;
            if -min.value > best.1 {
                best.0[k] = min.x;
                best.1 = -min.value;
            }
        }
        if best.1 - before <= 1e-14 {
            break;
        }
    }
    Ok(ChshDemo {
        value: best.1,
        angles: best.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::behavior::is_nonsignalling;
    use crate::quantum::{max_entangled, StateVector};

    fn zz() -> MeasurementSet {
        vec![vec![qubit_projective(0.0, 0.0)]; 2]
    }

    #[test]
    fn bell_state_sigma_z() {
        let rho = max_entangled(2).unwrap().to_density();
        let b = behavior_from_quantum(&rho, &zz()).unwrap();
        let t = b.table();
        assert!((t[0] - 0.5).abs() < 1e-15 && (t[3] - 0.5).abs() < 1e-15);
        assert!(t[1].abs() < 1e-15 && t[2].abs() < 1e-15);
    }

    #[test]
    fn product_state_is_deterministic() {
        let psi = StateVector::product_basis(vec![2, 2], &[0, 1]).unwrap();
        let b = behavior_from_quantum(&psi.to_density(), &zz()).unwrap();
        assert!((b.table()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn incomplete_measurement_rejected() {
        let rho = max_entangled(2).unwrap().to_density();
        let mut meas = zz();
        meas[1][0][1] = meas[1][0][0].clone();
        assert!(matches!(
            behavior_from_quantum(&rho, &meas),
            Err(Error::InvalidMeasurement(_))
        ));
        let neg = HermitianMatrix::from_real(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -1.0]))
            .unwrap();
        meas[1][0] = vec![neg, HermitianMatrix::zeros(2)];
        assert!(matches!(
            behavior_from_quantum(&rho, &meas),
            Err(Error::InvalidMeasurement(_))
        ));
    }

    #[test]
    fn quantum_chsh_behavior_is_nonsignalling() {
        let rho = max_entangled(2).unwrap().to_density();
        let meas = vec![
            vec![qubit_projective(0.0, 0.0), qubit_projective(1.1, 0.3)],
            vec![qubit_projective(0.4, 2.0), qubit_projective(2.5, -1.0)],
        ];
        let b = behavior_from_quantum(&rho, &meas).unwrap();
        assert!(is_nonsignalling(&b, 1e-12).nonsignalling);
    }

    #[test]
    fn tsirelson_and_classical_limits() {
        let bell = max_entangled(2).unwrap().to_density();
        let demo = chsh_quantum_demo(&bell, 8).unwrap();
        assert!(
            (demo.value - 2.0 * 2f64.sqrt()).abs() < 1e-9,
            "{}",
            demo.value
        );
        assert!(chsh_value(&bell, [0.7; 4]).unwrap() <= 2.0 + 1e-12);
        let prod = StateVector::product_basis(vec![2, 2], &[0, 0])
            .unwrap()
            .to_density();
        assert!(chsh_quantum_demo(&prod, 8).unwrap().value <= 2.0 + 1e-12);
    }
}
