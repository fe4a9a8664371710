//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so every line prints.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::{LN_2, SQRT_2};
use std::process::Command;
use std::time::{Duration, Instant};

use bellscope::chains::{
    canonical_residuals, classical_gibbs_mutual_info, cut_spectra, mps_from_dense,
    random_chain_state, renyi_tail_bound, tail_weight, thermal_mutual_info_check, truncate,
    truncation_bound, Boundary, ChainHamiltonian, ClassicalChain,
};
use bellscope::collective::{
    bell_operator, dicke_violation, lmg_energies, max_violation, ThetaSearch,
};
use bellscope::correlations::{
    chsh_correlator_form, chsh_probability_form, chsh_quantum_demo, local_bound_bruteforce,
};
use bellscope::numerics::{svd, HermitianMatrix, RandomSource};
use bellscope::quantum::{
    max_entangled, page_experiment, ppt_report, renyi_of_spectrum, Bipartition, DensityOperator,
    LogBase, StateVector,
};
use bellscope::symmetric::{
    classical_bound_symmetric, dicke_expression, murcia, rioja_bound_table, PIBellExpression,
    RiojaGrid,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// `Ok(detail)` passes, `Err(detail)` fails.
type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn chsh_classical() -> Outcome {
    let p = local_bound_bruteforce(&chsh_probability_form()).map_err(|e| e.to_string())?;
    let k = local_bound_bruteforce(&chsh_correlator_form()).map_err(|e| e.to_string())?;
    check(
        p.max == 3.0 && k.max == 2.0,
        format!("probability form {}, correlator form {}", p.max, k.max),
    )
}

fn chsh_quantum() -> Outcome {
    let rho = max_entangled(2).unwrap().to_density();
    let demo = chsh_quantum_demo(&rho, 16).map_err(|e| e.to_string())?;
    let v = demo.value;
    check(
        v >= 2.828 && (v - 2.0 * SQRT_2).abs() <= 1e-4,
        format!("value {v:.10}"),
    )
}

fn rioja_identity() -> Outcome {
    let rows = rioja_bound_table(&RiojaGrid::default()).map_err(|e| e.to_string())?;
    let bad: Vec<_> = rows.iter().filter(|r| !r.matches).collect();
    let detail = match bad.first() {
        None => format!("{} grid points, all equal", rows.len()),
        Some(r) => format!(
            "{} of {} grid points differ, first n={} x={} y={} sigma={} mu={} branch={}: closed {} vs exact {}",
            bad.len(),
            rows.len(),
            r.n,
            r.x,
            r.y,
            r.sigma,
            r.mu,
            r.branch,
            r.bound_closed,
            r.bound_enum
        ),
    };
    check(bad.is_empty(), detail)
}

fn count_vs_full_enumeration() -> Outcome {
    let mut rng = RandomSource::new(4);
    let mut checked = 0;
    // Two-body expressions need a pair, so n starts at 2.
    for n in 2..=8 {
        for _ in 0..20 {
            let mut coef = [0.0; 5];
            for x in &mut coef {
                *x = rng.below(13) as f64 - 6.0;
            }
            let e = PIBellExpression::new(n, coef).map_err(|e| e.to_string())?;
            let fast = classical_bound_symmetric(&e)
                .map_err(|e| e.to_string())?
                .beta_c;
            let slow = common::brute_force_bound(&e);
            if fast != slow {
                return Err(format!("n={n} {coef:?}: counts {fast} vs 4^n {slow}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} expressions equal"))
}

fn murcia_criterion() -> Outcome {
    let mut problems = Vec::new();
    for n in 2..=100 {
        let e = murcia(n).map_err(|e| e.to_string())?;
        let exact = classical_bound_symmetric(&e)
            .map_err(|e| e.to_string())?
            .beta_c;
        if exact != 2.0 * n as f64 || e.bound != Some(2.0 * n as f64) {
            problems.push(format!("beta_c({n}) = {exact}"));
        }
    }
    let mut not_violated = Vec::new();
    for n in 3..=100 {
        let e = murcia(n).map_err(|e| e.to_string())?;
        let v = max_violation(&e, ThetaSearch::default()).map_err(|e| e.to_string())?;
        if !(v.qv > 0.0 && v.ratio() > 0.0) {
            not_violated.push(n);
        }
        if n <= 6 {
            let sym = bell_operator(&e, v.theta_star)
                .unwrap()
                .lowest_eigenpair()
                .unwrap()
                .value;
            let full = common::lowest_eigenvalue(&common::full_bell_operator(&e, v.theta_star));
            if (sym - full).abs() > 1e-9 {
                problems.push(format!("n={n}: symmetric {sym} vs full {full}"));
            }
        }
    }
    if !not_violated.is_empty() {
        problems.push(format!("Q_v = 0 at n = {not_violated:?}"));
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            "all n".into()
        } else {
            problems.join("; ")
        },
    )
}

fn dicke_criterion() -> Outcome {
    let mut problems = Vec::new();
    for n in 2..=20 {
        let e = dicke_expression(n).map_err(|e| e.to_string())?;
        let exact = classical_bound_symmetric(&e)
            .map_err(|e| e.to_string())?
            .beta_c;
        if Some(exact) != e.bound {
            problems.push(format!("n={n}: closed {:?} vs exact {exact}", e.bound));
        }
    }
    let mut relative = Vec::new();
    for n in (4..=40).step_by(2) {
        let v = dicke_violation(n, None, ThetaSearch::default()).map_err(|e| e.to_string())?;
        if !v.violated {
            problems.push(format!("n={n} not violated"));
        }
        if n >= 10 {
            relative.push((n, v.relative));
        }
    }
    for w in relative.windows(2) {
        if w[1].1 > w[0].1 + 1e-9 {
            problems.push(format!(
                "relative violation rises from n={} to n={}",
                w[0].0, w[1].0
            ));
        }
    }
    let detail = format!(
        "relative violation {:.4} at n=10, {:.4} at n=40",
        relative.first().unwrap().1,
        relative.last().unwrap().1
    );
    check(
        problems.is_empty(),
        if problems.is_empty() {
            detail
        } else {
            problems.join("; ")
        },
    )
}

fn lmg_criterion() -> Outcome {
    let mut problems = Vec::new();
    for n in 2..=6 {
        for &(lambda, h) in &[(1.0, 0.0), (1.0, 0.4), (0.7, -1.1)] {
            let sym = lmg_energies(n, lambda, h).map_err(|e| e.to_string())?;
            let full = common::sorted_eigenvalues(&common::full_lmg(n, lambda, h));
            for &energy in &sym.energies {
                if !full.iter().any(|&x| (x - energy).abs() <= 1e-9) {
                    problems.push(format!("n={n} energy {energy} missing from full spectrum"));
                }
            }
            // With ferromagnetic coupling the global ground state is symmetric.
            let sym_min = sym.energies.iter().copied().fold(f64::INFINITY, f64::min);
            if (sym_min - full[0]).abs() > 1e-9 {
                problems.push(format!(
                    "n={n}: symmetric minimum {sym_min} vs full {}",
                    full[0]
                ));
            }
        }
    }
    for n in 2..=40 {
        let g = lmg_energies(n, 1.0, 0.0).map_err(|e| e.to_string())?.ground;
        let expected = if n % 2 == 0 {
            vec![n / 2]
        } else {
            vec![n / 2, n / 2 + 1]
        };
        if g != expected {
            problems.push(format!("n={n}: ground {g:?}"));
        }
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            "n <= 6 spectra and Dicke ground states".into()
        } else {
            problems.join("; ")
        },
    )
}

fn page_criterion() -> Outcome {
    let rng = RandomSource::new(2024);
    let s = page_experiment(2, 16, 10_000, &rng).map_err(|e| e.to_string())?;
    let target = LN_2 - 2.0 / 32.0;
    let entropy_ok = (s.mean_entropy - target).abs() <= 3.0 * s.std_error;
    let mut purity_notes = Vec::new();
    let mut purity_ok = true;
    for &(m, n) in &[(2, 16), (4, 8), (4, 16)] {
        let p = page_experiment(m, n, 10_000, &rng).map_err(|e| e.to_string())?;
        let rel = (p.mean_purity - p.predicted_purity).abs() / p.predicted_purity;
        purity_ok &= rel <= 0.05;
        purity_notes.push(format!("({m},{n}) purity off by {:.1}%", 100.0 * rel));
    }
    check(
        entropy_ok && purity_ok,
        format!(
            "mean S {:.5} vs {:.5}, {:.1} standard errors (exact finite-size mean {:.5}); {}",
            s.mean_entropy,
            target,
            (s.mean_entropy - target).abs() / s.std_error,
            common::exact_page_mean(2, 16),
            purity_notes.join(", ")
        ),
    )
}

fn random_unitary(d: usize, rng: &mut RandomSource) -> DMatrix<C64> {
    svd(&DMatrix::from_fn(d, d, |_, _| rng.complex_normal()))
        .unwrap()
        .u
}

fn random_local_density(d: usize, rng: &mut RandomSource) -> DensityOperator {
    let a = DMatrix::from_fn(d, d, |_, _| rng.complex_normal());
    let rho = &a * a.adjoint();
    let tr = rho.trace().re;
    DensityOperator::new(vec![d], HermitianMatrix::new(rho / c(tr)).unwrap()).unwrap()
}

fn ppt_criterion() -> Outcome {
    let mut rng = RandomSource::new(9);
    let d = 4;
    let bip = Bipartition::new(d, d).unwrap();
    for r in 2..=4 {
        for _ in 0..10 {
            let (ua, ub) = (random_unitary(d, &mut rng), random_unitary(d, &mut rng));
            let coef: Vec<f64> = (0..r).map(|_| rng.uniform_in(0.1, 1.0)).collect();
            let norm = coef.iter().map(|x| x * x).sum::<f64>().sqrt();
            let amps = DVector::from_fn(d * d, |idx, _| {
                let (i, j) = (idx / d, idx % d);
                (0..r)
                    .map(|k| ua[(i, k)] * ub[(j, k)] * (coef[k] / norm))
                    .sum()
            });
            let psi = StateVector::new(vec![d, d], amps).unwrap();
            let rep = ppt_report(&psi.to_density(), bip).map_err(|e| e.to_string())?;
            if rep.negative_count != r * (r - 1) / 2 {
                return Err(format!(
                    "rank {r}: {} negative eigenvalues",
                    rep.negative_count
                ));
            }
        }
    }
    for _ in 0..50 {
        let parts: Vec<(f64, DensityOperator)> = (0..1 + rng.below(6))
            .map(|_| {
                let a = random_local_density(3, &mut rng);
                let b = random_local_density(3, &mut rng);
                (rng.uniform(), a.tensor(&b))
            })
            .collect();
        let total: f64 = parts.iter().map(|p| p.0).sum();
        let parts: Vec<_> = parts.into_iter().map(|(w, r)| (w / total, r)).collect();
        let rho = DensityOperator::mixture(&parts).map_err(|e| e.to_string())?;
        let rep = ppt_report(&rho, Bipartition::new(3, 3).unwrap()).map_err(|e| e.to_string())?;
        if rep.entangled || rep.min_eigenvalue < -1e-10 {
            return Err(format!(
                "separable mixture has partial-transpose eigenvalue {}",
                rep.min_eigenvalue
            ));
        }
    }
    Ok("pure ranks 2..4 and 50 separable mixtures".into())
}

fn mps_criterion() -> Outcome {
    let mut rng = RandomSource::new(31);
    let mut worst_residual = 0.0_f64;
    for n in 2..=8 {
        for d in [2, 3] {
            if d == 3 && n > 6 {
                continue;
            }
            let psi = random_chain_state(d, n, &mut rng).unwrap();
            let full = d.pow((n / 2) as u32);
            let t = truncate(&psi, full).map_err(|e| e.to_string())?;
            let fid = t.mps.to_dense().unwrap().fidelity(&psi);
            if fid < 1.0 - 1e-10 {
                return Err(format!("round trip n={n} d={d}: fidelity {fid}"));
            }
            let exact = mps_from_dense(&psi, None).map_err(|e| e.to_string())?;
            for r in canonical_residuals(&exact)
                .iter()
                .chain(&canonical_residuals(&t.mps))
            {
                worst_residual = worst_residual.max(r.max());
            }
        }
    }
    let mut worst_ratio = 0.0_f64;
    for i in 0..100 {
        let n = 4 + i % 5;
        let psi = random_chain_state(2, n, &mut rng).unwrap();
        let spectra = cut_spectra(&psi).unwrap();
        for dmax in [1, 2, 4] {
            let t = truncate(&psi, dmax).map_err(|e| e.to_string())?;
            let bound = truncation_bound(&spectra, dmax);
            if t.error_sq > bound + 1e-12 {
                return Err(format!(
                    "state {i}, D={dmax}: error {} above bound {bound}",
                    t.error_sq
                ));
            }
            if bound > 0.0 {
                worst_ratio = worst_ratio.max(t.error_sq / bound);
            }
            for r in canonical_residuals(&t.mps) {
                worst_residual = worst_residual.max(r.max());
            }
        }
    }
    if worst_residual > 1e-10 {
        return Err(format!("canonical residual {worst_residual:e}"));
    }
    for i in 0..100 {
        let len = 2 + rng.below(30);
        let mut p: Vec<f64> = (0..len).map(|_| rng.uniform().powi(3)).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        p.sort_by(|a, b| b.total_cmp(a));
        let alpha = rng.uniform_in(0.05, 0.95);
        let dmax = 1 + rng.below(len);
        let tail = tail_weight(&p, dmax);
        let bound = renyi_tail_bound(&p, alpha, dmax).map_err(|e| e.to_string())?;
        // Cross-check the bound's Rényi entropy against the library's.
        let s = renyi_of_spectrum(&p, alpha, LogBase::Two).unwrap();
        let expect = (1.0 - alpha) / alpha * (s - (dmax as f64 / (1.0 - alpha)).log2());
        if (expect - bound).abs() > 1e-9 {
            return Err(format!("spectrum {i}: bound {bound} vs {expect}"));
        }
        if tail > 0.0 && tail.log2() > bound + 1e-12 {
            return Err(format!(
                "spectrum {i}: log2 tail {} above {bound}",
                tail.log2()
            ));
        }
    }
    Ok(format!(
        "worst residual {worst_residual:.1e}, worst error/bound {worst_ratio:.3}, 100 spectra"
    ))
}

fn thermal_criterion() -> Outcome {
    let mut rng = RandomSource::new(77);
    let mut tightest = 0.0_f64;
    for i in 0..50 {
        let n = 2 + i % 7;
        let boundary = if n >= 3 && i % 2 == 1 {
            Boundary::Periodic
        } else {
            Boundary::Open
        };
        let h = ChainHamiltonian::random(n, 2, boundary, &mut rng).map_err(|e| e.to_string())?;
        let cut = 1 + rng.below(n - 1);
        for beta in [0.1, 1.0, 5.0] {
            let t = thermal_mutual_info_check(&h, beta, cut).map_err(|e| e.to_string())?;
            if !t.ok {
                return Err(format!(
                    "chain {i} beta {beta}: I {} above {}",
                    t.mutual_info, t.bound
                ));
            }
            tightest = tightest.max(t.mutual_info / t.bound);
        }
    }
    for i in 0..100 {
        let n = 2 + rng.below(9);
        let d = 2 + rng.below(2);
        if d.pow(n as u32) > 100_000 {
            continue;
        }
        let boundary = if n >= 3 && i % 3 == 0 {
            Boundary::Periodic
        } else {
            Boundary::Open
        };
        let chain = ClassicalChain::random(n, d, boundary, &mut rng);
        let cut = 1 + rng.below(n - 1);
        let beta = rng.uniform_in(0.0, 10.0);
        let t = classical_gibbs_mutual_info(&chain, beta, cut).map_err(|e| e.to_string())?;
        if !t.ok {
            return Err(format!(
                "classical chain {i}: I {} above {}",
                t.mutual_info, t.bound
            ));
        }
    }
    Ok(format!(
        "quantum I/bound at most {tightest:.3}; classical instances within bound"
    ))
}

fn reproducibility() -> Outcome {
    let runs: &[&[&str]] = &[
        &[
            "--seed",
            "5",
            "page",
            "--m",
            "2",
            "--n",
            "8",
            "--samples",
            "500",
        ],
        &["--seed", "5", "mps", "--sites", "7"],
        &["--seed", "5", "thermal-mi", "--sites", "5"],
        &["--seed", "5", "gibbs-mi", "--sites", "7"],
        &[
            "--seed", "5", "area-law", "--model", "random", "--sites", "8",
        ],
        &[
            "--seed",
            "5",
            "theta-sweep",
            "--family",
            "murcia",
            "--n",
            "9",
            "--points",
            "16",
        ],
        &[
            "--seed", "5", "scan", "--family", "murcia", "--n-max", "12", "--jobs", "4",
        ],
    ];
    for args in runs {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_bellscope"))
                .args(*args)
                .output()
                .expect("binary runs")
        };
        let (a, b) = (run(), run());
        if a.status.code() != Some(0) {
            return Err(format!("{args:?} exited {:?}", a.status.code()));
        }
        if a.stdout != b.stdout || a.stderr != b.stderr {
            return Err(format!("{args:?} differs between runs"));
        }
    }
    Ok(format!("{} commands byte-identical", runs.len()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (
            "CHSH classical bounds",
            Duration::from_secs(1),
            chsh_classical,
        ),
        ("CHSH quantum value", Duration::from_secs(5), chsh_quantum),
        (
            "Rioja closed-form bound",
            Duration::from_secs(120),
            rioja_identity,
        ),
        (
            "count vs full enumeration",
            Duration::from_secs(120),
            count_vs_full_enumeration,
        ),
        ("Murcia family", Duration::from_secs(300), murcia_criterion),
        ("Dicke class", Duration::from_secs(300), dicke_criterion),
        ("LMG spectrum", Duration::from_secs(60), lmg_criterion),
        (
            "random-state entropy",
            Duration::from_secs(120),
            page_criterion,
        ),
        ("PPT structure", Duration::from_secs(60), ppt_criterion),
        ("MPS truncation", Duration::from_secs(120), mps_criterion),
        (
            "thermal mutual information",
            Duration::from_secs(180),
            thermal_criterion,
        ),
        (
            "CLI reproducibility",
            Duration::from_secs(60),
            reproducibility,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; took {took:.1?}, limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:>2} {name} ({:.2}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
