use approx::assert_relative_eq;
use fermi_eos_core::freegas::{
    free_density, free_density_quadrature, free_pressure, free_pressure_quadrature, one_mode_inequality_check,
    one_pdm, one_pdm_torus, pair_expansion_coeff, FreeGasModel, ThermoPoint, TorusSpec,
};
use fermi_eos_core::Dimension;

const DIMS: [Dimension; 3] = [Dimension::One, Dimension::Two, Dimension::Three];

#[test]
fn closed_forms_on_grid() {
    for dim in DIMS {
        for z in [0.1, 1.0, 10.0] {
            for beta in [0.5, 1.0, 2.0] {
                let tp = ThermoPoint::from_fugacity(dim, beta, z).unwrap();
                assert_relative_eq!(free_pressure(&tp).unwrap(), free_pressure_quadrature(&tp).unwrap(), max_relative = 1e-9);
                assert_relative_eq!(free_density(&tp).unwrap(), free_density_quadrature(&tp).unwrap(), max_relative = 1e-9);

                let h = 1e-5 * (1.0 / beta).max(tp.mu.abs());
                let up = free_pressure(&ThermoPoint::new(dim, beta, tp.mu + h).unwrap()).unwrap();
                let dn = free_pressure(&ThermoPoint::new(dim, beta, tp.mu - h).unwrap()).unwrap();
                assert_relative_eq!((up - dn) / (2.0 * h), free_density(&tp).unwrap(), max_relative = 1e-6);
            }
        }
    }
}

#[test]
fn pair_density_vanishes_at_contact() {
    for dim in DIMS {
        let m = FreeGasModel::new(ThermoPoint::new(dim, 1.0, 0.5).unwrap()).unwrap();
        let rho = m.density();
        assert!(m.pair_density(0.0).unwrap().abs() <= 1e-8 * rho * rho);
    }
}

#[test]
fn pair_density_correction_constant_is_stable() {
    let tp = ThermoPoint::new(Dimension::Three, 1.0, 0.0).unwrap();
    let m = FreeGasModel::new(tp).unwrap();
    let rho = m.density();
    let ell = rho.powf(-1.0 / 3.0);
    let coeff = pair_expansion_coeff(&tp).unwrap();
    let c_of = |r: f64| (m.pair_density(r).unwrap() / (coeff * r * r) - 1.0).abs() / (rho.powf(2.0 / 3.0) * r * r);
    let cs: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|f| c_of(f * ell)).collect();
    assert!((cs[1] / cs[0] - 1.0).abs() < 0.05, "{cs:?}");
    assert!((cs[2] / cs[1] - 1.0).abs() < 0.05, "{cs:?}");
}

#[test]
fn torus_gap_is_order_one_over_l() {
    // |gap| L must stay bounded as L doubles
    let tp = ThermoPoint::new(Dimension::Three, 1.0, 0.0).unwrap();
    for r in [0.5, 2.0] {
        let exact = one_pdm(&tp, r).unwrap();
        let scaled: Vec<f64> = [20.0, 40.0, 80.0]
            .iter()
            .map(|&l| {
                let torus = TorusSpec::for_point(&tp, l).unwrap();
                (one_pdm_torus(&tp, &torus, r) - exact).abs() * l
            })
            .collect();
        assert!(scaled[1] <= scaled[0] * 1.25 && scaled[2] <= scaled[0] * 1.25, "r = {r}: {scaled:?}");
    }
}

#[test]
fn one_mode_margin_on_grid() {
    for i in 0..50 {
        let h = 0.01 * 5000f64.powf(f64::from(i) / 49.0);
        for j in 0..=20 {
            let m = one_mode_inequality_check(h, f64::from(j) / 20.0).unwrap();
            assert!(m >= -1e-12, "h = {h}, t = {}: {m}", f64::from(j) / 20.0);
        }
    }
}
