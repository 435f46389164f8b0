use std::path::Path;

use fermi_eos_core::eos::corrected_pressure;
use fermi_eos_core::exponents::{
    build_program, error_budget, optimize, q, sigma_affine, to_f64, validity_window, AlphaAffine, ErrorBudget,
    Optimum, Q,
};
use fermi_eos_core::freegas::ThermoPoint;
use fermi_eos_core::scattering::{second_moment_identity, solve_scattering, PotentialShape, SolverOptions};
use fermi_eos_core::verify::{run_check, select_checks, CheckReport, SuiteOptions};
use fermi_eos_core::Dimension;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::output::{csv_text, fmt12, svg_line_chart, to_json, write_file};
use crate::CliError;

#[derive(Debug, Serialize)]
struct ScatterSummary<'a> {
    dimension: u8,
    potential: &'a PotentialShape,
    scattering_length: f64,
    a_pow_d: f64,
    second_moment: f64,
    second_moment_identity: f64,
    /// `|μ₂ / identity - 1|`; absent when `a = 0`.
    identity_rel_error: Option<f64>,
    residual: f64,
    steps: usize,
    range: f64,
    l1_norm: f64,
    tol: f64,
}

pub fn scatter(cfg: &RunConfig, out: &Path, formats: &[Format]) -> Result<(), CliError> {
    let (pot, tol) = cfg.build_potential()?;
    let opts = tol.map_or_else(SolverOptions::default, SolverOptions::with_tol);
    let sol = solve_scattering(&pot, opts)?;
    let a = sol.scattering_length();
    let mu2 = if a > 0.0 { sol.second_moment_w()? } else { 0.0 };
    let ident = second_moment_identity(pot.dim(), a);
    let summary = ScatterSummary {
        dimension: pot.dim().get(),
        potential: pot.shape(),
        scattering_length: a,
        a_pow_d: sol.a_pow_d(),
        second_moment: mu2,
        second_moment_identity: ident,
        identity_rel_error: (ident > 0.0).then(|| (mu2 / ident - 1.0).abs()),
        residual: sol.residual(),
        steps: sol.steps(),
        range: pot.range(),
        l1_norm: pot.l1_norm(),
        tol: sol.tol(),
    };
    println!("a = {}  a^D = {}  mu2 = {}  residual = {}", fmt12(a), fmt12(sol.a_pow_d()), fmt12(mu2), fmt12(sol.residual()));

    let (r, f, w) = (sol.grid(), sol.f_samples(), sol.w_samples());
    if formats.contains(&Format::Csv) {
        let rows: Vec<Vec<String>> =
            (0..r.len()).map(|i| vec![fmt12(r[i]), fmt12(f[i]), fmt12(w[i])]).collect();
        write_file(out, "scattering_solution.csv", &csv_text(&["r", "f", "W"], &rows)?)?;
    }
    if formats.contains(&Format::Json) {
        write_file(out, "summary.json", &to_json(&summary)?)?;
    }
    if formats.contains(&Format::Svg) {
        let pts: Vec<(f64, f64)> = r.iter().copied().zip(f.iter().copied()).collect();
        write_file(out, "scattering_solution.svg", &svg_line_chart("Zero-energy scattering solution", "r", "f(r)", &pts))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct EosRow {
    dimension: u8,
    beta: f64,
    mu: f64,
    z: f64,
    psi0: f64,
    rho0: f64,
    a: f64,
    diluteness: f64,
    c: f64,
    correction: f64,
    psi_upper: f64,
    warning: String,
}

pub fn eos(cfg: &RunConfig, out: &Path, formats: &[Format]) -> Result<(), CliError> {
    let dim = cfg.dim()?;
    if dim == Dimension::One {
        return Err(CliError::Validation(
            "no pressure correction is available in one dimension: the asymptotics are only established for D = 2 and D = 3".into(),
        ));
    }
    let Some(th) = &cfg.thermo else {
        return Err(CliError::Validation("config has no [thermo] section".into()));
    };
    if th.beta.is_empty() {
        return Err(CliError::Validation("thermo.beta must not be empty".into()));
    }
    let points: Vec<(f64, bool)> = match (&th.mu, &th.z) {
        (Some(mu), None) => mu.iter().map(|&m| (m, false)).collect(),
        (None, Some(z)) => z.iter().map(|&z| (z, true)).collect(),
        _ => return Err(CliError::Validation("give exactly one of thermo.mu and thermo.z".into())),
    };
    if points.is_empty() {
        return Err(CliError::Validation("thermo grid must not be empty".into()));
    }
    let a_list = match &th.a {
        Some(a) if a.is_empty() => return Err(CliError::Validation("thermo.a must not be empty".into())),
        Some(a) => a.clone(),
        None => {
            let (pot, tol) = cfg.build_potential()?;
            let opts = tol.map_or_else(SolverOptions::default, SolverOptions::with_tol);
            vec![solve_scattering(&pot, opts)?.scattering_length()]
        }
    };
    let mut grid = Vec::new();
    for &beta in &th.beta {
        for &(v, is_z) in &points {
            let tp = if is_z { ThermoPoint::from_fugacity(dim, beta, v)? } else { ThermoPoint::new(dim, beta, v)? };
            for &a in &a_list {
                grid.push((tp, a));
            }
        }
    }
    let rows: Vec<EosRow> = grid
        .par_iter()
        .map(|(tp, a)| {
            let rep = corrected_pressure(tp, *a)?;
            Ok(EosRow {
                dimension: dim.get(),
                beta: tp.beta,
                mu: tp.mu,
                z: tp.z(),
                psi0: rep.psi0,
                rho0: rep.rho0,
                a: *a,
                diluteness: rep.diluteness,
                c: rep.c,
                correction: rep.correction,
                psi_upper: rep.psi_upper,
                warning: rep.warnings.join("; "),
            })
        })
        .collect::<Result<_, CliError>>()?;
    for row in rows.iter().filter(|r| !r.warning.is_empty()) {
        eprintln!("warning (beta = {}, mu = {}, a = {}): {}", fmt12(row.beta), fmt12(row.mu), fmt12(row.a), row.warning);
    }
    println!("{} rows", rows.len());

    if formats.contains(&Format::Csv) {
        let header = ["D", "beta", "mu", "z", "psi0", "rho0", "a", "aD_rho0", "c", "correction", "psi_upper", "warning"];
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                let mut v: Vec<String> = [r.beta, r.mu, r.z, r.psi0, r.rho0, r.a, r.diluteness, r.c, r.correction, r.psi_upper]
                    .iter()
                    .map(|&x| fmt12(x))
                    .collect();
                v.insert(0, r.dimension.to_string());
                v.push(r.warning.clone());
                v
            })
            .collect();
        write_file(out, "eos_table.csv", &csv_text(&header, &cells)?)?;
    }
    if formats.contains(&Format::Json) {
        write_file(out, "eos_table.json", &to_json(&rows)?)?;
    }
    if formats.contains(&Format::Svg) {
        // one curve: first beta and first a, ordered by z
        let mut pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.beta == th.beta[0] && r.a == a_list[0])
            .map(|r| (r.z, r.psi_upper))
            .collect();
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        write_file(out, "eos_pressure.svg", &svg_line_chart("Corrected pressure", "z", "psi0 - c a^D rho0^(2+2/D)", &pts))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct VerifyReport<'a> {
    tolerance_scale: f64,
    passed: usize,
    failed: usize,
    checks: &'a [CheckReport],
}

pub fn verify(cfg: &RunConfig, only: Option<&str>, out: &Path, formats: &[Format]) -> Result<(), CliError> {
    let opts = SuiteOptions { tolerance_scale: cfg.verify.tolerance_scale };
    let names = select_checks(only.or(cfg.verify.only.as_deref()))?;
    let reports: Vec<CheckReport> =
        names.par_iter().map(|n| run_check(n, opts).map_err(CliError::from)).collect::<Result<_, _>>()?;
    let passed = reports.iter().filter(|r| r.pass).count();
    let failed = reports.len() - passed;

    println!("{:<28} {:<6} {:>14} {:>14} {:>12}", "check", "result", "measured", "target", "tol");
    for r in &reports {
        let worst = r.measured.iter().copied().fold(f64::NAN, |m, v| if (v - r.target).abs() > (m - r.target).abs() || m.is_nan() { v } else { m });
        println!(
            "{:<28} {:<6} {:>14} {:>14} {:>12}",
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            format!("{worst:.6e}"),
            format!("{:.6e}", r.target),
            format!("{:.3e}", r.tol)
        );
    }
    println!("{passed} passed, {failed} failed");

    let report = VerifyReport { tolerance_scale: opts.tolerance_scale, passed, failed, checks: &reports };
    // the JSON report is always written
    write_file(out, "verify_report.json", &to_json(&report)?)?;
    if formats.contains(&Format::Csv) {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| {
                let m: Vec<String> = r.measured.iter().map(|&v| fmt12(v)).collect();
                vec![r.name.clone(), (if r.pass { "PASS" } else { "FAIL" }).into(), m.join(";"), fmt12(r.target), fmt12(r.tol)]
            })
            .collect();
        write_file(out, "verify_report.csv", &csv_text(&["check", "result", "measured", "target", "tol"], &rows)?)?;
    }
    if failed > 0 {
        return Err(CliError::VerificationFailed(failed));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct GridRow {
    #[serde(with = "fermi_eos_core::exponents::rational_str")]
    alpha: Q,
    optimum: Optimum,
}

#[derive(Debug, Serialize)]
struct ExponentsReport {
    dimension: u8,
    #[serde(with = "fermi_eos_core::exponents::rational_str")]
    alpha: Q,
    optimum: Optimum,
    /// `σ*(α)` near `α = 0`.
    sigma_affine: AlphaAffine,
    #[serde(with = "fermi_eos_core::exponents::rational_str")]
    sigma_affine_at_alpha: Q,
    validity_window: Option<String>,
    error_budget: Option<ErrorBudget>,
    grid: Vec<GridRow>,
}

pub fn exponents(cfg: &RunConfig, out: &Path, formats: &[Format]) -> Result<(), CliError> {
    let ex = &cfg.exponents;
    let d = ex.dimension.unwrap_or(cfg.dimension);
    Dimension::try_from(d)?;
    let alpha = ex.alpha.as_ref().map_or(Ok(Q::from_integer(0.into())), |a| a.parse())?;
    let opt = optimize(&build_program(d, alpha.clone())?)?;
    println!("s*={} t*={} σ*={}", opt.s, opt.t, opt.sigma);
    println!("s*≈{} t*≈{} σ*≈{}", fmt12(to_f64(&opt.s)), fmt12(to_f64(&opt.t)), fmt12(to_f64(&opt.sigma)));

    let zero = Q::from_integer(0.into());
    let affine = sigma_affine(d, &zero, &q(1, 1000))?;
    let affine_at = affine.at(&alpha);
    println!("σ*(α) = {affine} for small α, giving {affine_at} at α = {alpha}");
    if affine_at != opt.sigma {
        println!("α = {alpha} is outside the affine range; the exact optimum above applies");
    }

    let grid: Vec<Q> = match &ex.alpha_grid {
        Some(g) => g.iter().map(|a| a.parse()).collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Validation("exponents.alpha_grid must be strictly increasing".into()));
    }
    let rows: Vec<GridRow> = grid
        .par_iter()
        .map(|a| Ok(GridRow { alpha: a.clone(), optimum: optimize(&build_program(d, a.clone())?)? }))
        .collect::<Result<_, CliError>>()?;
    let window = if grid.is_empty() { None } else { validity_window(d, &grid)?.map(|w| w.to_string()) };
    let budget = if d == 3 && alpha >= zero { Some(error_budget(&alpha)?) } else { None };
    if let Some(b) = &budget {
        let parts: Vec<String> = b.terms.iter().map(|t| format!("{}={}", t.term, t.exponent)).collect();
        println!("error budget: {} (dominant {})", parts.join(" "), b.dominant);
    }

    let report = ExponentsReport {
        dimension: d,
        alpha,
        optimum: opt,
        sigma_affine: affine,
        sigma_affine_at_alpha: affine_at,
        validity_window: window,
        error_budget: budget,
        grid: rows,
    };
    if formats.contains(&Format::Json) {
        write_file(out, "exponents.json", &to_json(&report)?)?;
    }
    if !report.grid.is_empty() {
        if formats.contains(&Format::Csv) {
            let cells: Vec<Vec<String>> = report
                .grid
                .iter()
                .map(|r| {
                    let o = &r.optimum;
                    vec![
                        r.alpha.to_string(),
                        fmt12(to_f64(&r.alpha)),
                        o.s.to_string(),
                        o.t.to_string(),
                        o.sigma.to_string(),
                        fmt12(to_f64(&o.sigma)),
                    ]
                })
                .collect();
            write_file(out, "sigma_alpha.csv", &csv_text(&["alpha", "alpha_decimal", "s", "t", "sigma", "sigma_decimal"], &cells)?)?;
        }
        if formats.contains(&Format::Svg) {
            let pts: Vec<(f64, f64)> = report.grid.iter().map(|r| (to_f64(&r.alpha), to_f64(&r.optimum.sigma))).collect();
            write_file(out, "sigma_alpha.svg", &svg_line_chart("Optimal exponent", "alpha", "sigma*", &pts))?;
        }
    }
    Ok(())
}
