use fermi_eos_core::freegas::ThermoPoint;
use fermi_eos_core::verify::{
    gaussian_tail_integral, gaussian_tail_quadrature, lemma22_scaling, reference_solution, run_check, NormKind,
    SuiteOptions, CHECKS,
};
use fermi_eos_core::Dimension;

#[test]
fn closed_form_matches_brute_quadrature() {
    for dim in [Dimension::One, Dimension::Two, Dimension::Three] {
        for (beta, mu, thr) in [(1.0, 0.0, 2.0), (2.0, 0.3, 0.5), (0.5, -1.0, 4.0)] {
            let tp = ThermoPoint::new(dim, beta, mu).unwrap();
            let exact = gaussian_tail_integral(&tp, thr);
            let quad = gaussian_tail_quadrature(&tp, thr).unwrap();
            assert!((quad / exact - 1.0).abs() <= 1e-10, "{dim} {beta} {mu} {thr}");
        }
    }
}

#[test]
fn fitted_exponents_stable_under_refinement() {
    let sol = reference_solution(1.0).unwrap();
    let a = sol.scattering_length();
    let sweep = |n: usize| -> Vec<f64> { (0..n).map(|i| 1e-1 * 1e-2f64.powf(i as f64 / (n - 1) as f64) / a).collect() };
    for which in [NormKind::PhiL1 { n: 1 }, NormKind::PhiL2 { n: 0 }, NormKind::EphiL1 { n: 2 }] {
        let coarse = lemma22_scaling(&sol, &sweep(5), which, 0.15).unwrap();
        let fine = lemma22_scaling(&sol, &sweep(9), which, 0.15).unwrap();
        assert!((coarse.fitted_exponent - fine.fitted_exponent).abs() <= 0.05, "{which:?}");
    }
}

#[test]
fn sweep_outside_dilute_window_rejected() {
    let sol = reference_solution(1.0).unwrap();
    let a = sol.scattering_length();
    let kfs: Vec<f64> = [0.5, 0.1, 0.05, 0.01].iter().map(|x| x / a).collect();
    assert!(lemma22_scaling(&sol, &kfs, NormKind::PhiL1 { n: 1 }, 0.15).is_err());
}

#[test]
fn every_check_passes_and_zero_tolerance_fails() {
    for name in CHECKS {
        let r = run_check(name, SuiteOptions::default()).unwrap();
        assert!(r.pass, "{name}: {:?}", r.measured);
        assert_eq!(r.name, *name);
    }
    let strict = SuiteOptions { tolerance_scale: 0.0 };
    assert!(!run_check("scattering_identity", strict).unwrap().pass);
    assert!(!run_check("lemma31", strict).unwrap().pass);
}
