//! Leading interaction correction to the free pressure of a dilute
//! spin-polarized Fermi gas, and the quantities it is assembled from.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dim::Dimension;
use crate::error::{invalid, Result};
use crate::freegas::{free_density, free_pressure, FreeGasModel, ThermoPoint};
use crate::quad::{integrate, Tolerance};
use crate::scattering::ScatteringSolution;
use crate::specfun::{fermi_dirac, FdIndex};

/// Diluteness above which results are flagged.
pub const DILUTENESS_GUARD: f64 = 0.1;

/// Remainder constant of the pressure bound; not computed.
pub const REMAINDER_CONSTANT: &str = "unquantified (bounded on compact z-sets)";

fn fd(s: f64, x: f64) -> Result<f64> {
    fermi_dirac(FdIndex::new(s)?, x)
}

fn no_1d() -> crate::Error {
    invalid("no pressure correction is available in one dimension (only D = 2 and D = 3 are covered)")
}

/// `c(z) = 24π² (-Li_{5/2}(-z)) / (-Li_{3/2}(-z))^{5/3}` in 3D and
/// `8π² (-Li_2(-z)) / (-Li_1(-z))²` in 2D.
pub fn coefficient_c(z: f64, dim: Dimension) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(invalid(format!("fugacity must be positive, got {z}")));
    }
    let x = z.ln();
    match dim {
        Dimension::Three => Ok(24.0 * PI * PI * fd(2.5, x)? / fd(1.5, x)?.powf(5.0 / 3.0)),
        Dimension::Two => Ok(8.0 * PI * PI * fd(2.0, x)? / fd(1.0, x)?.powi(2)),
        Dimension::One => Err(no_1d()),
    }
}

/// Free pressure, its interaction correction and the resulting upper bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureReport {
    pub psi0: f64,
    pub rho0: f64,
    pub diluteness: f64,
    pub c: f64,
    pub correction: f64,
    pub psi_upper: f64,
    /// Exponent of `a^D ρ₀` in the relative remainder, up to an arbitrarily small loss.
    pub error_exponent: f64,
    pub error_exponent_label: &'static str,
    pub remainder_constant: &'static str,
    pub warnings: Vec<String>,
}

/// `ψ₀ - c(z) a^D ρ₀^{2+2/D}` for `D ∈ {2, 3}`.
pub fn corrected_pressure(tp: &ThermoPoint, a: f64) -> Result<PressureReport> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(invalid(format!("scattering length must be non-negative, got {a}")));
    }
    let (exponent, label) = match tp.dim {
        Dimension::Three => (1.0 / 16.0, "1/16 - eps"),
        Dimension::Two => (1.0 / 8.0, "1/8 - eps"),
        Dimension::One => return Err(no_1d()),
    };
    let d = tp.dim.as_f64();
    let psi0 = free_pressure(tp)?;
    let rho0 = free_density(tp)?;
    let c = coefficient_c(tp.z(), tp.dim)?;
    let diluteness = a.powf(d) * rho0;
    let correction = c * diluteness * rho0.powf(1.0 + 2.0 / d);
    let mut warnings = Vec::new();
    if diluteness >= DILUTENESS_GUARD {
        warnings.push(format!("a^D rho0 = {diluteness:.3e} is not small (guard {DILUTENESS_GUARD})"));
    }
    Ok(PressureReport {
        psi0,
        rho0,
        diluteness,
        c,
        correction,
        psi_upper: psi0 - correction,
        error_exponent: exponent,
        error_exponent_label: label,
        remainder_constant: REMAINDER_CONSTANT,
        warnings,
    })
}

/// Cutoff bookkeeping: `κ = ζ x^{-α}` and `k_F^κ = [μ + κ/β]₊^{1/2}` with
/// `x = a^D ρ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilutenessReport {
    pub a: f64,
    pub rho0: f64,
    pub x: f64,
    pub alpha: f64,
    pub zeta: f64,
    pub kappa: f64,
    pub kf_kappa: f64,
    /// `k_F^κ / (ρ₀^{1/D} x^{-α/2})`, which stays of order one as `x → 0`.
    pub asymptotic_ratio: f64,
}

pub fn cutoff_report(tp: &ThermoPoint, a: f64, alpha: f64) -> Result<DilutenessReport> {
    if !(a.is_finite() && a > 0.0) {
        return Err(invalid(format!("scattering length must be positive, got {a}")));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(invalid(format!("alpha must lie in (0, 1/2), got {alpha}")));
    }
    let d = tp.dim.as_f64();
    let rho0 = free_density(tp)?;
    let x = a.powf(d) * rho0;
    if !(x.is_finite() && x > 0.0) {
        return Err(invalid(format!("diluteness a^D rho0 = {x:e} must be positive and finite")));
    }
    let zeta = tp.zeta();
    let kappa = zeta * x.powf(-alpha);
    let k2 = tp.mu + kappa / tp.beta;
    if k2 <= 0.0 {
        return Err(invalid(format!("mu + kappa/beta = {k2:e} is not positive; mu is too negative")));
    }
    let kf_kappa = k2.sqrt();
    let asymptotic_ratio = kf_kappa / (rho0.powf(1.0 / d) * x.powf(-0.5 * alpha));
    Ok(DilutenessReport { a, rho0, x, alpha, zeta, kappa, kf_kappa, asymptotic_ratio })
}

/// `½ ∫ U(|x|) ρ₀⁽²⁾(|x|) dx` for a radial `U` supported in `[0, breakpoints.last()]`,
/// smooth between consecutive breakpoints.
pub fn pair_interaction_energy<F: Fn(f64) -> f64>(
    tp: &ThermoPoint,
    u: F,
    breakpoints: &[f64],
) -> Result<f64> {
    let model = FreeGasModel::new(*tp)?;
    let d = tp.dim.as_f64();
    let mut lo = 0.0;
    let mut total = 0.0;
    for &hi in breakpoints {
        if hi <= lo {
            continue;
        }
        let pad = 1e-12 * (hi - lo);
        let piece = integrate(
            |r: f64| {
                let rho2 = model.pair_density(r).unwrap_or(f64::NAN);
                r.powf(d - 1.0) * u(r.clamp(lo + pad, hi - pad)) * rho2
            },
            lo,
            hi,
            Tolerance { abs: 1e-300, rel: 1e-10 },
        )?;
        if !piece.value.is_finite() {
            return Err(crate::Error::Quadrature { achieved: f64::INFINITY, requested: 1e-10 });
        }
        total += piece.value;
        lo = hi;
    }
    Ok(0.5 * tp.dim.sphere_area() * total)
}

/// `⟨W⟩ = ½ ∫ W ρ₀⁽²⁾` with `W = V(1 - φ₀)` from the scattering solution.
pub fn first_order_energy(tp: &ThermoPoint, sol: &ScatteringSolution) -> Result<f64> {
    if tp.dim != sol.dim() {
        return Err(invalid("thermodynamic point and scattering solution disagree on the dimension"));
    }
    if sol.potential().is_zero() {
        return Ok(0.0);
    }
    pair_interaction_energy(tp, |r| sol.w(r), &sol.potential().breakpoints())
}

/// Flat 3D interaction `U = 30 a³ R⁻⁵` on `|x| ≤ R`, with the same second
/// moment `24π a³` as `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizedInteraction {
    pub a: f64,
    pub range: f64,
    pub amplitude: f64,
}

/// Closed-form moments of a [`RegularizedInteraction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DysonMoments {
    /// `‖|·|² U‖₁`
    pub second: f64,
    /// `‖|·|⁴ U‖₁`
    pub fourth: f64,
    /// `‖|·| U‖₂²`
    pub weighted_l2_sq: f64,
}

pub fn dyson_interaction(a: f64, range: f64) -> Result<RegularizedInteraction> {
    if !(a.is_finite() && a > 0.0) {
        return Err(invalid(format!("scattering length must be positive, got {a}")));
    }
    if !(range.is_finite() && range >= a) {
        return Err(invalid(format!("range must satisfy R >= a = {a}, got {range}")));
    }
    Ok(RegularizedInteraction { a, range, amplitude: 30.0 * a.powi(3) / range.powi(5) })
}

impl RegularizedInteraction {
    pub fn value(&self, r: f64) -> f64 {
        if r <= self.range {
            self.amplitude
        } else {
            0.0
        }
    }

    /// `24πa³`, `(120π/7) a³ R²` and `720π a⁶ R⁻⁵`.
    pub fn moments(&self) -> DysonMoments {
        let (a, r) = (self.a, self.range);
        DysonMoments {
            second: 24.0 * PI * a.powi(3),
            fourth: 120.0 * PI / 7.0 * a.powi(3) * r * r,
            weighted_l2_sq: 720.0 * PI * a.powi(6) / r.powi(5),
        }
    }

    /// The same moments by radial quadrature of the profile.
    pub fn moments_quadrature(&self) -> Result<DysonMoments> {
        let tol = Tolerance::relative(1e-12);
        let u = self.amplitude;
        let m = |f: &dyn Fn(f64) -> f64| -> Result<f64> { Ok(4.0 * PI * integrate(f, 0.0, self.range, tol)?.value) };
        Ok(DysonMoments {
            second: m(&|r| r.powi(4) * u)?,
            fourth: m(&|r| r.powi(6) * u)?,
            weighted_l2_sq: m(&|r| r.powi(4) * u * u)?,
        })
    }

    /// `⟨U⟩ = ½ ∫ U ρ₀⁽²⁾` at a 3D thermodynamic point.
    pub fn pair_energy(&self, tp: &ThermoPoint) -> Result<f64> {
        if tp.dim != Dimension::Three {
            return Err(invalid("the regularized interaction is defined in three dimensions"));
        }
        pair_interaction_energy(tp, |r| self.value(r), &[self.range])
    }
}
