use std::path::Path;

use bellscope::chains::{
    block_entropy_curve, canonical_residuals, classical_gibbs_mutual_info, cut_spectra,
    ground_state_exact, parse_classical_chain, random_chain_state, renyi_tail_bound, tail_weight,
    thermal_mutual_info_check, truncate, truncation_bound, ChainHamiltonian, ClassicalChain,
    EntropyRow, ThermalCheck,
};
use bellscope::collective::{
    dicke_violation, lmg_energies, max_violation, ratio_scan, theta_sweep, ExpressionFamily,
    ScanRow, SweepRow, ThetaSearch,
};
use bellscope::correlations::{
    chsh_correlator_form, chsh_probability_form, chsh_quantum_demo, local_bound_bruteforce,
    parse_functional, parse_ti_expression, ti_classical_bound,
};
use bellscope::numerics::RandomSource;
use bellscope::quantum::{
    entanglement_entropy, log_negativity, max_entangled, negativity, parse_state_fixture,
    ppt_report, schmidt_rank, Bipartition, LogBase, StateFixture,
};
use bellscope::symmetric::{
    classical_bound_symmetric, murcia, parse_pi_expression, rioja, rioja_bound_table, Branch,
    RiojaGrid, RiojaParams, RiojaRow,
};

use crate::output::Table;
use crate::{BoundKind, ChainModel, ClassicalModel, Cli, CliError, Command, FamilyArg, RiojaArgs};

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn rioja_params(a: &RiojaArgs) -> Result<RiojaParams, CliError> {
    let need = |v: Option<i64>, name: &str| {
        v.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
    };
    let branch: Branch = a
        .branch
        .parse()
        .map_err(|e: bellscope::Error| CliError::Usage(e.to_string()))?;
    Ok(RiojaParams {
        x: need(a.x, "x")?,
        y: need(a.y, "y")?,
        sigma: need(a.sigma, "sigma")?,
        mu: need(a.mu, "mu")?,
        branch,
    })
}

fn family(f: FamilyArg, params: &RiojaArgs) -> Result<ExpressionFamily, CliError> {
    Ok(match f {
        FamilyArg::Murcia => ExpressionFamily::Murcia,
        FamilyArg::Dicke => ExpressionFamily::Dicke,
        FamilyArg::Rioja => ExpressionFamily::Rioja {
            params: rioja_params(params)?,
            check_parity: !params.no_parity_check,
        },
    })
}

fn rioja_row(t: &mut Table, r: &RiojaRow, verified: bool) {
    t.push(vec![
        r.n.into(),
        r.x.into(),
        r.y.into(),
        r.sigma.into(),
        r.mu.into(),
        r.branch.to_string().into(),
        r.bound_closed.into(),
        verified.then_some(r.bound_enum).into(),
        verified.then_some(r.matches).into(),
    ]);
}

fn scan_table(rows: &[ScanRow]) -> Table {
    let mut t = Table::with_header(ScanRow::CSV_HEADER);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.beta_c.into(),
            r.qv.into(),
            r.ratio.into(),
            r.theta_star.into(),
        ]);
    }
    t
}

fn thermal_table(rows: &[ThermalCheck]) -> Table {
    let mut t = Table::with_header(ThermalCheck::CSV_HEADER);
    for r in rows {
        t.push(vec![
            r.beta.into(),
            r.mutual_info.into(),
            r.bound.into(),
            r.ok.into(),
        ]);
    }
    t
}

fn default_cut(cut: Option<usize>, sites: usize) -> usize {
    cut.unwrap_or(sites / 2)
}

fn chain(
    model: ChainModel,
    sites: usize,
    d: usize,
    j: f64,
    h: f64,
    boundary: crate::BoundaryArg,
    seed: u64,
) -> Result<ChainHamiltonian, CliError> {
    let b = boundary.into();
    let need_qubits = || {
        if d != 2 {
            Err(CliError::Usage(format!("model {model:?} needs d = 2")))
        } else {
            Ok(())
        }
    };
    Ok(match model {
        ChainModel::Random => ChainHamiltonian::random(sites, d, b, &mut RandomSource::new(seed))?,
        ChainModel::Tfim => {
            need_qubits()?;
            ChainHamiltonian::transverse_ising(sites, j, h, b)?
        }
        ChainModel::Heisenberg => {
            need_qubits()?;
            ChainHamiltonian::heisenberg(sites, j, b)?
        }
    })
}

pub(crate) fn dispatch(cli: &Cli) -> Result<Table, CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Chsh { grid } => {
            let p = local_bound_bruteforce(&chsh_probability_form())?;
            let c = local_bound_bruteforce(&chsh_correlator_form())?;
            let rho = max_entangled(2)?.to_density();
            let q = chsh_quantum_demo(&rho, *grid)?;
            Ok(Table::key_value(vec![
                ("classical_probability_form", p.max.into()),
                ("classical_correlator_form", c.max.into()),
                ("quantum_correlator_form", q.value.into()),
                ("tsirelson", (2.0 * std::f64::consts::SQRT_2).into()),
                ("a0", q.angles[0].into()),
                ("a1", q.angles[1].into()),
                ("b0", q.angles[2].into()),
                ("b1", q.angles[3].into()),
            ]))
        }
        Command::Bound { input, kind } => {
            let text = read_input(input)?;
            match kind {
                BoundKind::Generic => {
                    let f = parse_functional(&text)?;
                    let b = local_bound_bruteforce(&f)?;
                    Ok(Table::key_value(vec![
                        ("min", b.min.into()),
                        ("max", b.max.into()),
                        ("strategies", b.strategies.into()),
                        ("stated_bound", f.bound.into()),
                    ]))
                }
                BoundKind::Ti => {
                    let e = parse_ti_expression(&text)?;
                    let b = ti_classical_bound(&e)?;
                    let fmt = |v: &[i8]| {
                        v.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    Ok(Table::key_value(vec![
                        ("beta_c", b.beta_c.into()),
                        ("m0", fmt(&b.m0).into()),
                        ("m1", fmt(&b.m1).into()),
                    ]))
                }
                BoundKind::Pi => {
                    let e = parse_pi_expression(&text)?;
                    let b = classical_bound_symmetric(&e)?;
                    let w = b.witness;
                    Ok(Table::key_value(vec![
                        ("beta_c", b.beta_c.into()),
                        ("exact", b.exact.into()),
                        ("witness_a", w.a.into()),
                        ("witness_b", w.b.into()),
                        ("witness_c", w.c.into()),
                        ("witness_d", w.d.into()),
                        ("stated_bound", e.bound.into()),
                    ]))
                }
            }
        }
        Command::Rioja {
            n,
            params,
            verify,
            table,
        } => {
            let mut t = Table::with_header(RiojaRow::CSV_HEADER);
            if *table {
                let grid = RiojaGrid {
                    check_parity: !params.no_parity_check,
                    ..RiojaGrid::default()
                };
                for r in rioja_bound_table(&grid)? {
                    rioja_row(&mut t, &r, true);
                }
                return Ok(t);
            }
            let n =
                n.ok_or_else(|| CliError::Usage("--n is required unless --table is given".into()))?;
            let p = rioja_params(params)?;
            let e = rioja(p, n, !params.no_parity_check)?;
            let bound_closed = e.bound.ok_or(bellscope::Error::MissingBound)?;
            let bound_enum = if *verify {
                classical_bound_symmetric(&e)?.beta_c
            } else {
                f64::NAN
            };
            let row = RiojaRow {
                n,
                x: p.x,
                y: p.y,
                sigma: p.sigma,
                mu: p.mu,
                branch: p.branch,
                bound_closed,
                bound_enum,
                matches: bound_closed == bound_enum,
            };
            rioja_row(&mut t, &row, *verify);
            Ok(t)
        }
        Command::Murcia { n, verify } => {
            let e = murcia(*n)?;
            let v = max_violation(&e, ThetaSearch::default())?;
            let mut pairs = vec![
                ("n", (*n).into()),
                ("beta_c", v.beta_c.into()),
                ("lambda_min", v.lambda_min.into()),
                ("qv", v.qv.into()),
                ("ratio", v.ratio().into()),
                ("theta_star", v.theta_star.into()),
            ];
            if *verify {
                pairs.push((
                    "beta_c_enumerated",
                    classical_bound_symmetric(&e)?.beta_c.into(),
                ));
            }
            Ok(Table::key_value(pairs))
        }
        Command::Dicke { n, k } => {
            let v = dicke_violation(*n, *k, ThetaSearch::default())?;
            let mut t = Table::new(&[
                "n",
                "k",
                "value",
                "beta_c",
                "violated",
                "theta_star",
                "relative",
            ]);
            t.push(vec![
                v.n.into(),
                v.k.into(),
                v.value.into(),
                v.beta_c.into(),
                v.violated.into(),
                v.theta_star.into(),
                v.relative.into(),
            ]);
            Ok(t)
        }
        Command::Scan {
            family: f,
            n_min,
            n_max,
            n_step,
            jobs,
            params,
        } => {
            if *n_step == 0 || n_min > n_max {
                return Err(CliError::Usage(
                    "need n-step >= 1 and n-min <= n-max".into(),
                ));
            }
            let fam = family(*f, params)?;
            let ns: Vec<usize> = (*n_min..=*n_max).step_by(*n_step).collect();
            let rows = match jobs {
                Some(0) => return Err(CliError::Usage("--jobs must be >= 1".into())),
                Some(k) => rayon::ThreadPoolBuilder::new()
                    .num_threads(*k)
                    .build()
                    .map_err(|e| CliError::Internal(e.to_string()))?
                    .install(|| ratio_scan(&fam, &ns, ThetaSearch::default()))?,
                None => ratio_scan(&fam, &ns, ThetaSearch::default())?,
            };
            Ok(scan_table(&rows))
        }
        Command::ThetaSweep {
            family: f,
            n,
            points,
            theta_min,
            theta_max,
            params,
        } => {
            if *points < 2 || theta_min >= theta_max {
                return Err(CliError::Usage(
                    "need points >= 2 and theta-min < theta-max".into(),
                ));
            }
            let e = family(*f, params)?.instantiate(*n)?;
            let step = (theta_max - theta_min) / (*points - 1) as f64;
            let thetas: Vec<f64> = (0..*points).map(|i| theta_min + step * i as f64).collect();
            let mut t = Table::with_header(SweepRow::CSV_HEADER);
            for r in theta_sweep(&e, &thetas)? {
                t.push(vec![
                    r.n.into(),
                    r.theta.into(),
                    r.value.into(),
                    r.beta_c.into(),
                    r.violated.into(),
                ]);
            }
            Ok(t)
        }
        Command::Lmg { n, lambda, h } => {
            let s = lmg_energies(*n, *lambda, *h)?;
            let mut t = Table::new(&["k", "m", "energy", "ground"]);
            for (k, &e) in s.energies.iter().enumerate() {
                t.push(vec![
                    k.into(),
                    (*n as f64 / 2.0 - k as f64).into(),
                    e.into(),
                    s.ground.contains(&k).into(),
                ]);
            }
            Ok(t)
        }
        Command::Page { m, n, samples } => {
            let s =
                bellscope::quantum::page_experiment(*m, *n, *samples, &RandomSource::new(seed))?;
            Ok(Table::key_value(vec![
                ("m", s.m.into()),
                ("n", s.n.into()),
                ("samples", s.samples.into()),
                ("mean_entropy_nats", s.mean_entropy.into()),
                ("std_error", s.std_error.into()),
                ("predicted_entropy_nats", s.predicted_entropy.into()),
                ("mean_purity", s.mean_purity.into()),
                ("predicted_purity", s.predicted_purity.into()),
            ]))
        }
        Command::Ppt { input, cut } => {
            let fixture = parse_state_fixture(&read_input(input)?)?;
            let bip = Bipartition::at_cut(fixture.dims(), *cut)?;
            let rho = fixture.to_density();
            let r = ppt_report(&rho, bip)?;
            let mut pairs = vec![
                ("left_dim", bip.left.into()),
                ("right_dim", bip.right.into()),
                ("negative_eigenvalues", r.negative_count.into()),
                ("min_eigenvalue", r.min_eigenvalue.into()),
                ("entangled", r.entangled.into()),
                ("negativity", negativity(&rho, bip)?.into()),
                ("log_negativity", log_negativity(&rho, bip)?.into()),
            ];
            if let StateFixture::Pure(psi) = &fixture {
                pairs.push(("schmidt_rank", schmidt_rank(psi, bip, 1e-10)?.into()));
                pairs.push((
                    "entanglement_bits",
                    entanglement_entropy(psi, bip, LogBase::Two)?.into(),
                ));
            }
            Ok(Table::key_value(pairs))
        }
        Command::Mps {
            input,
            sites,
            d,
            bond_dims,
            alpha,
        } => {
            let psi = match input {
                Some(path) => match parse_state_fixture(&read_input(path)?)? {
                    StateFixture::Pure(p) => p,
                    StateFixture::Mixed(_) => {
                        return Err(CliError::Usage("mps needs a pure state".into()))
                    }
                },
                None => random_chain_state(*d, *sites, &mut RandomSource::new(seed))?,
            };
            let spectra = cut_spectra(&psi)?;
            let mid = spectra
                .get((spectra.len().max(1) - 1) / 2)
                .cloned()
                .unwrap_or_else(|| vec![1.0]);
            let mut t = Table::new(&[
                "bond_dim",
                "error_sq",
                "tail_bound",
                "within_bound",
                "max_residual",
                "log2_tail_mid",
                "renyi_bound_mid",
            ]);
            for &dim in bond_dims {
                let tr = truncate(&psi, dim)?;
                let bound = truncation_bound(&spectra, dim);
                let residual = canonical_residuals(&tr.mps)
                    .iter()
                    .map(|r| r.max())
                    .fold(0.0, f64::max);
                t.push(vec![
                    dim.into(),
                    tr.error_sq.into(),
                    bound.into(),
                    (tr.error_sq <= bound + 1e-12).into(),
                    residual.into(),
                    tail_weight(&mid, dim).log2().into(),
                    renyi_tail_bound(&mid, *alpha, dim)?.into(),
                ]);
            }
            Ok(t)
        }
        Command::AreaLaw {
            model,
            sites,
            d,
            j,
            h,
            boundary,
            max_block,
        } => {
            let ham = chain(*model, *sites, *d, *j, *h, *boundary, seed)?;
            let g = ground_state_exact(&ham)?;
            let rows = block_entropy_curve(&g.state, max_block.unwrap_or(sites.saturating_sub(1)))?;
            let mut t = Table::with_header(EntropyRow::CSV_HEADER);
            for r in rows {
                t.push(vec![r.block.into(), r.entropy_bits.into()]);
            }
            Ok(t)
        }
        Command::ThermalMi {
            model,
            sites,
            d,
            j,
            h,
            boundary,
            betas,
            cut,
        } => {
            let ham = chain(*model, *sites, *d, *j, *h, *boundary, seed)?;
            let cut = default_cut(*cut, *sites);
            let rows = betas
                .iter()
                .map(|&b| thermal_mutual_info_check(&ham, b, cut))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(thermal_table(&rows))
        }
        Command::GibbsMi {
            input,
            model,
            sites,
            d,
            j,
            boundary,
            betas,
            cut,
        } => {
            let c = match input {
                Some(path) => parse_classical_chain(&read_input(path)?)?,
                None => match model {
                    ClassicalModel::Random => ClassicalChain::random(
                        *sites,
                        *d,
                        (*boundary).into(),
                        &mut RandomSource::new(seed),
                    ),
                    ClassicalModel::Ising => {
                        if *d != 2 {
                            return Err(CliError::Usage("ising needs d = 2".into()));
                        }
                        ClassicalChain::ising(*sites, *j, (*boundary).into())
                    }
                },
            };
            let cut = default_cut(*cut, c.n);
            let rows = betas
                .iter()
                .map(|&b| classical_gibbs_mutual_info(&c, b, cut))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(thermal_table(&rows))
        }
    }
}
