//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fermi_eos_core::eos::{coefficient_c, dyson_interaction, first_order_energy};
use fermi_eos_core::exponents::{build_program, error_budget, optimize, parse_rational, q, sigma_affine, Q};
use fermi_eos_core::freegas::{
    free_density, free_density_quadrature, free_pressure, free_pressure_quadrature, one_mode_inequality_check,
    FreeGasModel, ThermoPoint,
};
use fermi_eos_core::scattering::{solve_scattering, RadialPotential, SolverOptions};
use fermi_eos_core::specfun::{fermi_dirac, FdIndex};
use fermi_eos_core::verify::{
    dilute_sweep, fit_power_law, gaussian_tail_integral, gaussian_tail_quadrature, lemma22_scaling, reference_solution,
    riemann_gap, NormKind,
};
use fermi_eos_core::Dimension;

type Outcome = Result<String, String>;
// name, check, runtime limit in seconds
type Criterion = (&'static str, fn() -> Outcome, u64);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn solve(pot: &RadialPotential) -> fermi_eos_core::scattering::ScatteringSolution {
    solve_scattering(pot, SolverOptions::default()).expect("solver")
}

fn fd(s: f64, x: f64) -> f64 {
    fermi_dirac(FdIndex::new(s).unwrap(), x).unwrap()
}

fn c1_scattering_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let cases = [
        RadialPotential::square_barrier(10.0, 1.0, Dimension::Three).unwrap(),
        RadialPotential::square_barrier(1000.0, 1.0, Dimension::Three).unwrap(),
        RadialPotential::shell(50.0, 0.5, 1.0, Dimension::Three).unwrap(),
        RadialPotential::square_barrier(10.0, 1.0, Dimension::Two).unwrap(),
    ];
    for pot in &cases {
        let sol = solve(pot);
        let a = sol.scattering_length();
        let target = match pot.dim() {
            Dimension::Three => 24.0 * PI * a.powi(3),
            _ => 8.0 * PI * a * a,
        };
        worst = worst.max(rel(sol.second_moment_w().unwrap(), target));
    }
    check(worst <= 1e-6, format!("max rel. error {worst:.2e} (tol 1e-6)"))
}

fn c2_hard_sphere() -> Outcome {
    let a3 = solve(&RadialPotential::square_barrier(1e6, 1.0, Dimension::Three).unwrap()).scattering_length();
    let a2 = solve(&RadialPotential::square_barrier(1e6, 1.0, Dimension::Two).unwrap()).scattering_length();
    let ok = [a3, a2].iter().all(|&a| (0.99..=1.0).contains(&a));
    check(ok, format!("a/R = {a3:.6} (3D), {a2:.6} (2D), window [0.99, 1]"))
}

fn c3_exponent_optima() -> Outcome {
    let zero = Q::from_integer(0.into());
    let expect = [(3u8, q(1, 4), q(1, 32), q(1, 16)), (1, q(3, 11), q(1, 11), q(2, 11)), (2, q(1, 4), q(1, 16), q(1, 8))];
    let mut ok = true;
    let mut got = Vec::new();
    for (d, s, t, sigma) in expect {
        let o = optimize(&build_program(d, zero.clone()).unwrap()).unwrap();
        ok &= o.s == s && o.t == t && o.sigma == sigma;
        got.push(format!("D={d}: ({}, {}, {})", o.s, o.t, o.sigma));
    }
    let aff = sigma_affine(3, &zero, &q(1, 1000)).unwrap();
    ok &= aff.constant == q(1, 16) && aff.slope == q(-21, 32);
    check(ok, format!("{}; sigma(alpha) = {aff}", got.join(", ")))
}

fn c4_error_budget() -> Outcome {
    let b = error_budget(&Q::from_integer(0.into())).unwrap();
    let want = ["1/16", "1/2", "1/5", "1/2", "2/3"].map(|s| parse_rational(s).unwrap());
    let names = ["E_pt", "E_V", "E_scat", "E_OD", "E_Vphi"];
    let ok = b.terms.len() == 5
        && b.terms.iter().zip(want.iter()).zip(names).all(|((t, w), n)| &t.exponent == w && t.term == n)
        && b.dominant == "E_pt";
    let got: Vec<String> = b.terms.iter().map(|t| format!("{}={}", t.term, t.exponent)).collect();
    check(ok, format!("{} dominant {}", got.join(" "), b.dominant))
}

fn c5_free_gas() -> Outcome {
    let (mut closed, mut deriv): (f64, f64) = (0.0, 0.0);
    for dim in [Dimension::One, Dimension::Two, Dimension::Three] {
        for z in [0.1, 1.0, 10.0] {
            for beta in [0.5, 1.0, 2.0] {
                let tp = ThermoPoint::from_fugacity(dim, beta, z).unwrap();
                let rho = free_density(&tp).unwrap();
                closed = closed.max(rel(free_pressure(&tp).unwrap(), free_pressure_quadrature(&tp).unwrap()));
                closed = closed.max(rel(rho, free_density_quadrature(&tp).unwrap()));
                let h = 1e-5 * (1.0 / beta).max(tp.mu.abs());
                let up = free_pressure(&ThermoPoint::new(dim, beta, tp.mu + h).unwrap()).unwrap();
                let dn = free_pressure(&ThermoPoint::new(dim, beta, tp.mu - h).unwrap()).unwrap();
                deriv = deriv.max(rel((up - dn) / (2.0 * h), rho));
            }
        }
    }
    check(closed <= 1e-9 && deriv <= 1e-6, format!("closed vs quadrature {closed:.2e} (tol 1e-9), dpsi/dmu vs rho {deriv:.2e} (tol 1e-6)"))
}

fn c6_pair_density() -> Outcome {
    let tp = ThermoPoint::new(Dimension::Three, 1.0, 0.0).unwrap();
    let model = FreeGasModel::new(tp).unwrap();
    let rho = model.density();
    // 2π (-Li_{5/2}(-z)) / (-Li_{3/2}(-z))^{5/3} ρ₀^{8/3}
    let coeff = 2.0 * PI * fd(2.5, 0.0) / fd(1.5, 0.0).powf(5.0 / 3.0) * rho.powf(8.0 / 3.0);
    let ell = rho.powf(-1.0 / 3.0);
    let r0 = 0.01 * ell;
    let dev0 = rel(model.pair_density(r0).unwrap() / (r0 * r0), coeff);
    let grid: Vec<f64> = [0.01, 0.02, 0.04, 0.08, 0.16].iter().map(|f| f * ell).collect();
    let devs: Vec<f64> = grid.iter().map(|&r| rel(model.pair_density(r).unwrap() / (r * r), coeff)).collect();
    let fit = fit_power_law(&grid, &devs, 2.0, 0.2).unwrap();
    check(
        dev0 <= 1e-3 && fit.pass,
        format!("deviation at 0.01 rho^(-1/3): {dev0:.2e} (tol 1e-3), correction exponent {:.3} (2 +/- 0.2)", fit.fitted_exponent),
    )
}

fn c7_first_order_energy() -> Outcome {
    let tp = ThermoPoint::new(Dimension::Three, 1.0, 0.0).unwrap();
    let rho = free_density(&tp).unwrap();
    let c = coefficient_c(tp.z(), Dimension::Three).unwrap();
    let unit = RadialPotential::square_barrier(100.0, 1.0, Dimension::Three).unwrap();
    let a1 = solve(&unit).scattering_length();
    let devs: Vec<f64> = [0.05, 0.025, 0.0125]
        .iter()
        .map(|&a| {
            let sol = solve(&unit.rescaled(a1 / a).unwrap());
            let a = sol.scattering_length();
            rel(first_order_energy(&tp, &sol).unwrap(), c * a.powi(3) * rho.powf(8.0 / 3.0))
        })
        .collect();
    let orders: Vec<f64> = devs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    check(
        devs[0] <= 0.01 && orders.iter().all(|&o| o >= 1.8),
        format!("deviation at a = 0.05: {:.2e} (tol 1e-2), orders {:.3}, {:.3} (>= 1.8)", devs[0], orders[0], orders[1]),
    )
}

fn c8_riemann() -> Outcome {
    let tp = ThermoPoint::new(Dimension::Three, 1.0, 0.0).unwrap();
    let gaps: Vec<f64> = [20.0, 40.0, 80.0].iter().map(|&l| riemann_gap(&tp, l, 2.0).unwrap().gap).collect();
    let ratios = [gaps[0] / gaps[1], gaps[1] / gaps[2]];
    let ratio_ok = ratios.iter().all(|r| (1.6..=2.4).contains(r));
    let mut quad: f64 = 0.0;
    for dim in [Dimension::One, Dimension::Two, Dimension::Three] {
        let tp = ThermoPoint::new(dim, 1.0, 0.0).unwrap();
        quad = quad.max(rel(gaussian_tail_quadrature(&tp, 2.0).unwrap(), gaussian_tail_integral(&tp, 2.0)));
    }
    check(
        ratio_ok && quad <= 1e-10,
        format!(
            "gaps {:.3e}, {:.3e}, {:.3e}; ratios {:.3}, {:.3} (window [1.6, 2.4]); closed form vs quadrature {quad:.2e} (tol 1e-10)",
            gaps[0], gaps[1], gaps[2], ratios[0], ratios[1]
        ),
    )
}

fn c9_one_mode() -> Outcome {
    let mut worst = f64::INFINITY;
    for i in 0..50 {
        let h = 0.01 * 5000f64.powf(f64::from(i) / 49.0);
        for j in 0..=20 {
            worst = worst.min(one_mode_inequality_check(h, f64::from(j) / 20.0).unwrap());
        }
    }
    check(worst >= -1e-12, format!("min margin {worst:.3e} over 50 x 21 grid (>= -1e-12)"))
}

fn c10_norm_scalings() -> Outcome {
    let sol = reference_solution(1.0).unwrap();
    let kfs = dilute_sweep(sol.scattering_length(), 7);
    let norms = [
        ("|x| phi L1", NormKind::PhiL1 { n: 1 }),
        ("|x|^2 phi L1", NormKind::PhiL1 { n: 2 }),
        ("phi L2", NormKind::PhiL2 { n: 0 }),
        ("|x| E L1", NormKind::EphiL1 { n: 1 }),
        ("|x|^2 E L1", NormKind::EphiL1 { n: 2 }),
        ("E L2", NormKind::EphiL2 { n: 0 }),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, which) in norms {
        let fit = lemma22_scaling(&sol, &kfs, which, 0.15).unwrap();
        ok &= fit.pass;
        parts.push(format!("{label}: {:.3} vs {}{}", fit.fitted_exponent, fit.target_exponent, if fit.pass { "" } else { " X" }));
    }
    check(ok, format!("{} (tol 0.15)", parts.join("; ")))
}

fn c11_dyson() -> Outcome {
    let (a, r) = (0.05, 0.2);
    let u = dyson_interaction(a, r).unwrap();
    let m = u.moments();
    let quad = u.moments_quadrature().unwrap();
    // closed form, equal up to rounding
    let exact_second = rel(m.second, 24.0 * PI * a.powi(3)) <= 1e-15;
    let e4 = rel(quad.fourth, 120.0 * PI / 7.0 * a.powi(3) * r * r);
    let e2 = rel(quad.weighted_l2_sq, 720.0 * PI * a.powi(6) / r.powi(5));
    let e0 = rel(quad.second, 24.0 * PI * a.powi(3));

    let tp = ThermoPoint::new(Dimension::Three, 1.0, 0.0).unwrap();
    let unit = RadialPotential::square_barrier(100.0, 1.0, Dimension::Three).unwrap();
    let a1 = solve(&unit).scattering_length();
    let sol = solve(&unit.rescaled(a1 / 0.05).unwrap());
    let aw = sol.scattering_length();
    let w = first_order_energy(&tp, &sol).unwrap();
    let d4 = (dyson_interaction(aw, 4.0 * aw).unwrap().pair_energy(&tp).unwrap() - w).abs();
    let d2 = (dyson_interaction(aw, 2.0 * aw).unwrap().pair_energy(&tp).unwrap() - w).abs();
    let factor = d4 / d2;
    check(
        exact_second && e0.max(e4).max(e2) <= 1e-12 && factor >= 3.5,
        format!("second moment exact: {exact_second}; quadrature errors {e0:.1e}, {e4:.1e}, {e2:.1e} (tol 1e-12); shrink factor {factor:.3} (>= 3.5)"),
    )
}

fn c12_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_fermi-eos");
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    let mut codes = Vec::new();
    for run in ["run1", "run2"] {
        let out = dir.path().join(run);
        let status = Command::new(bin)
            .args(["verify", "--config"])
            .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default.toml"))
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        codes.push(status.status.code());
        outputs.push(std::fs::read(out.join("verify_report.json")).unwrap_or_default());
    }
    let same = !outputs[0].is_empty() && outputs[0] == outputs[1];
    check(
        same && codes.iter().all(|c| *c == Some(0)),
        format!("reports identical: {same} ({} bytes), exit codes {:?}", outputs[0].len(), codes),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 scattering identity", c1_scattering_identity, 5),
        ("2 hard-sphere limit", c2_hard_sphere, 5),
        ("3 exponent optima", c3_exponent_optima, 1),
        ("4 error budget", c4_error_budget, 1),
        ("5 free-gas closed forms", c5_free_gas, 30),
        ("6 pair-density expansion", c6_pair_density, 60),
        ("7 first-order energy", c7_first_order_energy, 60),
        ("8 lattice sum vs integral", c8_riemann, 60),
        ("9 one-mode inequality", c9_one_mode, 1),
        ("10 norm scalings", c10_norm_scalings, 120),
        ("11 regularized interaction", c11_dyson, 30),
        ("12 determinism", c12_determinism, 600),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(limit);
        let (pass, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {name}: {detail}; {:.2}s (limit {limit}s)",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
