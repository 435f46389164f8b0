//! Free spin-polarized Fermi gas with dispersion `|k|²` in `D` dimensions.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dim::Dimension;
use crate::error::{invalid, Result};
use crate::quad::{integrate, integrate_panels, integrate_tail, neumaier_sum, Tolerance};
use crate::specfun::{fermi_dirac, fermi_factor, one_minus_j0, one_minus_sinc, bessel_j0, sinc, FdIndex};

/// `γ̂₀(k) < 1e-16` beyond `β(k² - μ) = 36.84`.
pub const OCCUPATION_CUTOFF: f64 = 36.84;

/// Dimension, inverse temperature and chemical potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoPoint {
    pub dim: Dimension,
    pub beta: f64,
    pub mu: f64,
}

impl ThermoPoint {
    pub fn new(dim: Dimension, beta: f64, mu: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid(format!("beta must be positive, got {beta}")));
        }
        if !mu.is_finite() {
            return Err(invalid(format!("mu must be finite, got {mu}")));
        }
        Ok(Self { dim, beta, mu })
    }

    pub fn from_fugacity(dim: Dimension, beta: f64, z: f64) -> Result<Self> {
        if !(z.is_finite() && z > 0.0) {
            return Err(invalid(format!("fugacity must be positive, got {z}")));
        }
        Self::new(dim, beta, z.ln() / beta)
    }

    /// `log z = βμ`.
    pub fn log_z(&self) -> f64 {
        self.beta * self.mu
    }

    pub fn z(&self) -> f64 {
        self.log_z().exp()
    }

    /// `1 + |log z|`.
    pub fn zeta(&self) -> f64 {
        1.0 + self.log_z().abs()
    }
}

fn fd(s: f64, x: f64) -> Result<f64> {
    fermi_dirac(FdIndex::new(s)?, x)
}

/// `ψ₀ = β^{-(D/2+1)} (4π)^{-D/2} (-Li_{D/2+1}(-z))`.
pub fn free_pressure(tp: &ThermoPoint) -> Result<f64> {
    let h = 0.5 * tp.dim.as_f64();
    Ok(tp.beta.powf(-(h + 1.0)) * (4.0 * PI).powf(-h) * fd(h + 1.0, tp.log_z())?)
}

/// `ρ₀ = (4πβ)^{-D/2} (-Li_{D/2}(-z))`.
pub fn free_density(tp: &ThermoPoint) -> Result<f64> {
    let h = 0.5 * tp.dim.as_f64();
    Ok((4.0 * PI * tp.beta).powf(-h) * fd(h, tp.log_z())?)
}

/// `γ̂₀(k) = 1 / (1 + e^{β(k² - μ)})`.
pub fn momentum_occupation(tp: &ThermoPoint, k: f64) -> f64 {
    fermi_factor(tp.beta * (k * k - tp.mu))
}

// `log(1 + e^y)` without overflow.
fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

// (2π)^{-D} |S^{D-1}| ∫₀^∞ k^{D-1} g(k) dk, split at the Fermi edge.
fn radial_k_integral<F: Fn(f64) -> f64>(tp: &ThermoPoint, g: F, from: f64) -> Result<f64> {
    let d = tp.dim.as_f64();
    let integrand = |k: f64| k.powf(d - 1.0) * g(k);
    let width = 1.0 / tp.beta.sqrt();
    let edge = tp.mu.max(0.0).sqrt() + 2.0 * width;
    let tol = Tolerance::relative(1e-13);
    let head = if edge > from { integrate(integrand, from, edge, tol)?.value } else { 0.0 };
    let tail = integrate_tail(integrand, edge.max(from), width, tol, 1e-15)?.value;
    Ok(tp.dim.sphere_area() * (head + tail) / (2.0 * PI).powf(d))
}

/// Direct quadrature of `β^{-1} ∫ log(1 + z e^{-β|k|²}) dk/(2π)^D`; used to
/// cross-check [`free_pressure`].
pub fn free_pressure_quadrature(tp: &ThermoPoint) -> Result<f64> {
    let v = radial_k_integral(tp, |k| softplus(tp.beta * (tp.mu - k * k)), 0.0)?;
    Ok(v / tp.beta)
}

/// Direct quadrature of `∫ γ̂₀(k) dk/(2π)^D`.
pub fn free_density_quadrature(tp: &ThermoPoint) -> Result<f64> {
    radial_k_integral(tp, |k| momentum_occupation(tp, k), 0.0)
}

/// Number and kinetic energy per volume carried by modes with `|k| > k_threshold`
/// in infinite volume.
pub fn tail_integrals(tp: &ThermoPoint, k_threshold: f64) -> Result<TailSums> {
    let n = radial_k_integral(tp, |k| momentum_occupation(tp, k), k_threshold)?;
    let kin = radial_k_integral(tp, |k| k * k * momentum_occupation(tp, k), k_threshold)?;
    Ok(TailSums { n_tail: n, k_tail: kin })
}

/// Small-separation coefficient of the pair density,
/// `2π (-Li_{D/2+1}(-z)) / (-Li_{D/2}(-z))^{1+2/D} ρ₀^{2+2/D}`.
pub fn pair_expansion_coeff(tp: &ThermoPoint) -> Result<f64> {
    let d = tp.dim.as_f64();
    let h = 0.5 * d;
    let x = tp.log_z();
    let rho = free_density(tp)?;
    Ok(2.0 * PI * fd(h + 1.0, x)? / fd(h, x)?.powf(1.0 + 2.0 / d) * rho.powf(2.0 + 2.0 / d))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kernel {
    // γ₀ itself
    Direct,
    // ρ₀ - γ₀
    Deficit,
}

/// Evaluator for the real-space correlations of the free gas at one
/// thermodynamic point. Cheap to build; all state is immutable.
#[derive(Debug, Clone, Copy)]
pub struct FreeGasModel {
    tp: ThermoPoint,
    pressure: f64,
    density: f64,
    k_max: f64,
}

impl FreeGasModel {
    pub fn new(tp: ThermoPoint) -> Result<Self> {
        let k_max = (tp.mu.max(0.0) + 40.0 / tp.beta).sqrt();
        Ok(Self { tp, pressure: free_pressure(&tp)?, density: free_density(&tp)?, k_max })
    }

    pub fn point(&self) -> &ThermoPoint {
        &self.tp
    }

    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    fn transform(&self, r: f64, kernel: Kernel) -> Result<f64> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(invalid(format!("separation must be finite and non-negative, got {r}")));
        }
        let dim = self.tp.dim;
        let prefactor = match dim {
            Dimension::One => 1.0 / PI,
            Dimension::Two => 1.0 / (2.0 * PI),
            Dimension::Three => 1.0 / (2.0 * PI * PI),
        };
        let kf = self.tp.mu.max(0.0).sqrt();
        let mut pts = vec![0.0];
        if r > 0.0 {
            // Half-period panels of the oscillating kernel.
            let step = PI / r;
            let count = ((self.k_max / step) as usize).min(20_000);
            pts.extend((1..=count).map(|i| i as f64 * step));
        }
        if kf > 0.0 && kf < self.k_max {
            pts.push(kf);
        }
        pts.push(self.k_max);
        pts.retain(|&k| k <= self.k_max);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * self.k_max);
        let beta = self.tp.beta;
        let mu = self.tp.mu;
        let occ = |k: f64| fermi_factor(beta * (k * k - mu));
        let f = |k: f64| {
            let x = k * r;
            let w = match (dim, kernel) {
                (Dimension::One, Kernel::Direct) => x.cos(),
                (Dimension::One, Kernel::Deficit) => 2.0 * (0.5 * x).sin().powi(2),
                (Dimension::Two, Kernel::Direct) => k * bessel_j0(x),
                (Dimension::Two, Kernel::Deficit) => k * one_minus_j0(x),
                (Dimension::Three, Kernel::Direct) => k * k * sinc(x),
                (Dimension::Three, Kernel::Deficit) => k * k * one_minus_sinc(x),
            };
            w * occ(k)
        };
        let scale = self.density / prefactor;
        let v = integrate_panels(f, &pts, Tolerance::new(1e-12 * scale, 1e-12))?.value;
        Ok(prefactor * v)
    }

    /// `γ₀(r)`, the one-particle density matrix at separation `r`.
    pub fn one_pdm(&self, r: f64) -> Result<f64> {
        self.transform(r, Kernel::Direct)
    }

    /// `ρ₀ - γ₀(r)`, computed without cancellation at small `r`.
    pub fn one_pdm_deficit(&self, r: f64) -> Result<f64> {
        self.transform(r, Kernel::Deficit)
    }

    /// `ρ₀⁽²⁾(r) = ρ₀² - γ₀(r)²`.
    pub fn pair_density(&self, r: f64) -> Result<f64> {
        let deficit = self.one_pdm_deficit(r)?;
        Ok(deficit * (2.0 * self.density - deficit))
    }
}

pub fn one_pdm(tp: &ThermoPoint, r: f64) -> Result<f64> {
    FreeGasModel::new(*tp)?.one_pdm(r)
}

pub fn pair_density(tp: &ThermoPoint, r: f64) -> Result<f64> {
    FreeGasModel::new(*tp)?.pair_density(r)
}

/// Periodic box of side `l`; lattice sums run over `(2π/l)ℤ^D` up to `|k| ≤ k_cut`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusSpec {
    pub l: f64,
    pub dim: Dimension,
    pub k_cut: f64,
}

impl TorusSpec {
    pub fn new(l: f64, dim: Dimension, k_cut: f64) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(invalid(format!("box side must be positive, got {l}")));
        }
        if !(k_cut.is_finite() && k_cut > 0.0) {
            return Err(invalid(format!("k_cut must be positive, got {k_cut}")));
        }
        Ok(Self { l, dim, k_cut })
    }

    /// Box whose cutoff is the radius beyond which `γ̂₀ < 1e-16`.
    pub fn for_point(tp: &ThermoPoint, l: f64) -> Result<Self> {
        let k2 = tp.mu + OCCUPATION_CUTOFF / tp.beta;
        Self::new(l, tp.dim, k2.max(0.0).sqrt().max(1e-300))
    }

    /// `L^{-D} Σ_{k ∈ (2π/L)ℤ^D, |k| ≤ k_cut} f(|k|², k₁)`. The lattice is walked
    /// over its non-negative octant with multiplicities, in a fixed order,
    /// with compensated summation; `f` must be even in `k₁`.
    pub fn lattice_sum<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let dk = 2.0 * PI / self.l;
        let nmax = (self.k_cut / dk).floor() as i64;
        let kc2 = self.k_cut * self.k_cut;
        let mult = |n: i64| if n == 0 { 1.0 } else { 2.0 };
        let mut terms = Vec::new();
        let (n2max, n3max) = match self.dim {
            Dimension::One => (0, 0),
            Dimension::Two => (nmax, 0),
            Dimension::Three => (nmax, nmax),
        };
        for n1 in 0..=nmax {
            let k1 = n1 as f64 * dk;
            for n2 in 0..=n2max {
                let k2 = n2 as f64 * dk;
                if k1 * k1 + k2 * k2 > kc2 {
                    break;
                }
                for n3 in 0..=n3max {
                    let k3 = n3 as f64 * dk;
                    let ksq = k1 * k1 + k2 * k2 + k3 * k3;
                    if ksq > kc2 {
                        break;
                    }
                    let v = f(ksq, k1);
                    if v != 0.0 {
                        terms.push(mult(n1) * mult(n2) * mult(n3) * v);
                    }
                }
            }
        }
        neumaier_sum(terms) / self.l.powf(self.dim.as_f64())
    }
}

/// Lattice version of `γ₀` along a coordinate axis.
pub fn one_pdm_torus(tp: &ThermoPoint, torus: &TorusSpec, r: f64) -> f64 {
    torus.lattice_sum(|k2, k1| fermi_factor(tp.beta * (k2 - tp.mu)) * (k1 * r).cos())
}

/// Number and kinetic energy per volume of modes above a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSums {
    pub n_tail: f64,
    pub k_tail: f64,
}

/// `L^{-D} Σ_{|k| > k_threshold} (γ̂₀(k), |k|²γ̂₀(k))` on the torus. Modes
/// beyond `k_cut` carry less than `1e-16` occupation and are omitted, so a
/// threshold at or above `k_cut` gives zero.
pub fn tail_sums(tp: &ThermoPoint, torus: &TorusSpec, k_threshold: f64) -> Result<TailSums> {
    if !(k_threshold.is_finite() && k_threshold > 0.0) {
        return Err(invalid(format!("threshold must be positive, got {k_threshold}")));
    }
    if torus.dim != tp.dim {
        return Err(invalid("torus and thermodynamic point disagree on the dimension"));
    }
    let t2 = k_threshold * k_threshold;
    let occ = |k2: f64| if k2 > t2 { fermi_factor(tp.beta * (k2 - tp.mu)) } else { 0.0 };
    Ok(TailSums {
        n_tail: torus.lattice_sum(|k2, _| occ(k2)),
        k_tail: torus.lattice_sum(|k2, _| k2 * occ(k2)),
    })
}

// t log t with 0 log 0 = 0
fn xlogx(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * t.ln()
    }
}

fn check_unit(name: &str, t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("{name} must lie in [0, 1], got {t}")));
    }
    Ok(())
}

/// Binary entropy `s(t)` and relative entropy
/// `s(t, t') = t log(t/t') + (1-t) log((1-t)/(1-t'))`.
pub fn entropy_fns(t: f64, t_ref: f64) -> Result<(f64, f64)> {
    check_unit("t", t)?;
    if !(t_ref > 0.0 && t_ref < 1.0) {
        return Err(invalid(format!("reference occupation must lie in (0, 1), got {t_ref}")));
    }
    let s = -xlogx(t) - xlogx(1.0 - t);
    let rel = relative_entropy(t, t_ref.ln(), (-t_ref).ln_1p());
    Ok((s, rel))
}

// s(t, t') from log t' and log(1 - t'), so that t' = e^{-50} keeps its digits.
fn relative_entropy(t: f64, log_ref: f64, log_1m_ref: f64) -> f64 {
    let a = if t == 0.0 { 0.0 } else { t * (t.ln() - log_ref) };
    let b = if t == 1.0 { 0.0 } else { (1.0 - t) * ((-t).ln_1p() - log_1m_ref) };
    a + b
}

/// Margin `2 s(t, t₀) + h/(1 + e^{h/2}) - h t` with `t₀ = 1/(1 + e^h)`.
pub fn one_mode_inequality_check(h: f64, t: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(invalid(format!("h must be positive, got {h}")));
    }
    check_unit("t", t)?;
    let rel = relative_entropy(t, -softplus(h), -softplus(-h));
    Ok(2.0 * rel + h * fermi_factor(0.5 * h) - h * t)
}
