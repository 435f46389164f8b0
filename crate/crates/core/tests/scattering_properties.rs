use approx::assert_relative_eq;
use fermi_eos_core::scattering::{second_moment_identity, solve_scattering, RadialPotential, SolverOptions};
use fermi_eos_core::Dimension;

fn solve(p: &RadialPotential) -> fermi_eos_core::scattering::ScatteringSolution {
    solve_scattering(p, SolverOptions::default()).unwrap()
}

#[test]
fn exterior_tail_and_pointwise_bound() {
    let tol = SolverOptions::default().tol;
    for pot in [
        RadialPotential::square_barrier(10.0, 1.0, Dimension::Three).unwrap(),
        RadialPotential::shell(50.0, 0.5, 1.0, Dimension::Three).unwrap(),
    ] {
        let sol = solve(&pot);
        let a = sol.scattering_length();
        for &r in sol.grid() {
            let f = sol.f(r);
            if r >= pot.range() {
                assert!((f - sol.a_pow_d() * r.powi(-3)).abs() <= tol, "tail at r = {r}");
            }
            if r > 0.0 {
                assert!(f >= -1e-14 && f <= 1.0_f64.min(a.powi(3) / r.powi(3)) + 1e-12, "bound at r = {r}: {f}");
            }
        }
    }
}

#[test]
fn scattering_length_grows_with_strength() {
    for dim in [Dimension::Two, Dimension::Three] {
        let mut last = 0.0;
        for v0 in [1.0, 10.0, 100.0, 1e4] {
            let a = solve(&RadialPotential::square_barrier(v0, 1.0, dim).unwrap()).scattering_length();
            assert!(a > last, "{dim}: a({v0}) = {a} not above {last}");
            assert!(a <= 1.0);
            last = a;
        }
    }
}

#[test]
fn rescaling_shrinks_length() {
    let pot = RadialPotential::shell(30.0, 0.3, 1.0, Dimension::Three).unwrap();
    let a = solve(&pot).scattering_length();
    for lambda in [2.0, 5.0] {
        let b = solve(&pot.rescaled(lambda).unwrap()).scattering_length();
        assert_relative_eq!(b, a / lambda, max_relative = 1e-8);
    }
}

#[test]
fn second_moment_on_every_shape() {
    let tab = RadialPotential::tabulated(vec![0.0, 0.5, 1.0], vec![20.0, 10.0, 0.0], Dimension::Three).unwrap();
    for pot in [
        tab,
        RadialPotential::square_barrier(3.0, 2.0, Dimension::Two).unwrap(),
        RadialPotential::shell(100.0, 0.8, 1.0, Dimension::Three).unwrap(),
        RadialPotential::square_barrier(5.0, 1.0, Dimension::One).unwrap(),
    ] {
        let sol = solve(&pot);
        let mu2 = sol.second_moment_w().unwrap();
        assert_relative_eq!(mu2, second_moment_identity(pot.dim(), sol.scattering_length()), max_relative = 1e-6);
    }
}

#[test]
fn hard_sphere_limit_from_below() {
    for dim in [Dimension::Two, Dimension::Three] {
        let a = solve(&RadialPotential::square_barrier(1e6, 1.0, dim).unwrap()).scattering_length();
        assert!((0.99..=1.0).contains(&a), "{dim}: {a}");
    }
}
