use serde::{Deserialize, Serialize};

use super::solver::ScatteringSolution;
use crate::dim::Dimension;
use crate::error::{invalid, Result};
use crate::quad::trapezoid;

/// Radial cutoff profile `χ(u)`: equal to one for `u ≤ 1` and zero for `u ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CutoffFunction {
    /// `1 / (1 + exp(1/(1-u) + 1/(2-u)))` on `(1, 2)`; smooth.
    #[default]
    SmoothBump,
    /// Cubic smoothstep; one continuous derivative.
    Smoothstep,
    /// Linear ramp; continuous only.
    Linear,
}

impl CutoffFunction {
    /// Number of continuous derivatives (capped at 3 for the smooth profile).
    pub fn smoothness(self) -> u32 {
        match self {
            CutoffFunction::SmoothBump => 3,
            CutoffFunction::Smoothstep => 1,
            CutoffFunction::Linear => 0,
        }
    }

    /// `(χ, χ', χ'')` at `u`.
    pub fn eval(self, u: f64) -> (f64, f64, f64) {
        if u <= 1.0 {
            return (1.0, 0.0, 0.0);
        }
        if u >= 2.0 {
            return (0.0, 0.0, 0.0);
        }
        match self {
            CutoffFunction::SmoothBump => {
                let (x, y) = (u - 1.0, 2.0 - u);
                let q = -1.0 / x + 1.0 / y;
                let q1 = 1.0 / (x * x) + 1.0 / (y * y);
                let q2 = -2.0 / (x * x * x) + 2.0 / (y * y * y);
                // s(1-s) written to avoid overflow of exp(q)
                let s = if q > 0.0 { (-q).exp() / (1.0 + (-q).exp()) } else { 1.0 / (1.0 + q.exp()) };
                let ss = if q.abs() > 700.0 { 0.0 } else { s * (1.0 - s) };
                (s, -ss * q1, ss * ((1.0 - 2.0 * s) * q1 * q1 - q2))
            }
            CutoffFunction::Smoothstep => {
                let t = u - 1.0;
                (1.0 - t * t * (3.0 - 2.0 * t), -6.0 * t * (1.0 - t), -6.0 + 12.0 * t)
            }
            CutoffFunction::Linear => (2.0 - u, -1.0, 0.0),
        }
    }
}

/// A radial function sampled on an increasing grid starting at zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSamples {
    pub dim: Dimension,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialSamples {
    /// Largest radius with a nonzero value (zero if none).
    pub fn support_radius(&self) -> f64 {
        self.radii
            .iter()
            .zip(&self.values)
            .rev()
            .find(|(_, v)| **v != 0.0)
            .map_or(0.0, |(r, _)| *r)
    }
}

/// Which weighted norm `‖ |x|^n ∇^m F ‖_p` to compute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub weight_power: f64,
    pub derivative: u32,
    pub p: f64,
}

impl NormSpec {
    pub fn new(weight_power: f64, derivative: u32, p: f64) -> Self {
        Self { weight_power, derivative, p }
    }
}

const MIN_SUPPORT_POINTS: usize = 64;

/// `‖ |x|^n ∇^m F ‖_{L^p(ℝ^D)}` for a radial `F`, using centred finite
/// differences on the sample grid and the trapezoid rule in `r`. For `m = 2`
/// the pointwise Hessian is measured in the Frobenius norm.
pub fn weighted_norm(samples: &RadialSamples, spec: NormSpec) -> Result<f64> {
    let NormSpec { weight_power: n, derivative: m, p } = spec;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid(format!("norm exponent must be in [1, ∞), got {p}")));
    }
    if m > 2 {
        return Err(invalid(format!("derivative order must be 0, 1 or 2, got {m}")));
    }
    let r = &samples.radii;
    let f = &samples.values;
    if r.len() != f.len() || r.len() < 3 {
        return Err(invalid("sample grid needs matching radii and values with at least three points"));
    }
    if r.windows(2).any(|w| w[1] <= w[0]) || r[0] < 0.0 {
        return Err(invalid("sample radii must be non-negative and strictly increasing"));
    }
    let support = samples.support_radius();
    let inside = r.iter().filter(|&&x| x <= support).count();
    if support > 0.0 && inside < MIN_SUPPORT_POINTS {
        return Err(invalid(format!(
            "grid too coarse: {inside} points across the support, need at least {MIN_SUPPORT_POINTS}"
        )));
    }
    let d = samples.dim.as_f64();
    let len = r.len();
    let (d1, d2) = derivatives(r, f);
    let integrand: Vec<f64> = (0..len)
        .map(|i| {
            let ri = r[i];
            let pointwise = match m {
                0 => f[i].abs(),
                1 => d1[i].abs(),
                _ => {
                    // Angular block of the Hessian: f'/r, repeated D-1 times.
                    let ang = if ri > 0.0 { d1[i] / ri } else { d2[i] };
                    (d2[i] * d2[i] + (d - 1.0) * ang * ang).sqrt()
                }
            };
            let weight = if n == 0.0 { 1.0 } else { ri.powf(n) };
            (weight * pointwise).powf(p) * ri.powf(d - 1.0)
        })
        .collect();
    let total = samples.dim.sphere_area() * trapezoid(r, &integrand);
    Ok(total.powf(1.0 / p))
}

// Second-order first and second differences on a nonuniform grid.
fn derivatives(r: &[f64], f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = r.len();
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    let centred = |i: usize, im: usize, ip: usize| {
        let hl = r[i] - r[im];
        let hr = r[ip] - r[i];
        let den = hl * hr * (hl + hr);
        let first = (hl * hl * f[ip] - hr * hr * f[im] + (hr * hr - hl * hl) * f[i]) / den;
        let second = 2.0 * (hl * f[ip] - (hl + hr) * f[i] + hr * f[im]) / den;
        (first, second)
    };
    for i in 1..n - 1 {
        (d1[i], d2[i]) = centred(i, i - 1, i + 1);
    }
    // Radial symmetry at the origin; one-sided stencil at the far end.
    if r[0] == 0.0 {
        d1[0] = 0.0;
        d2[0] = 2.0 * (f[1] - f[0]) / (r[1] * r[1]);
    } else {
        let (a, b) = one_sided(r[0], r[1], r[2], f[0], f[1], f[2]);
        d1[0] = a;
        d2[0] = b;
    }
    let (a, b) = one_sided(r[n - 1], r[n - 2], r[n - 3], f[n - 1], f[n - 2], f[n - 3]);
    d1[n - 1] = a;
    d2[n - 1] = b;
    (d1, d2)
}

// Derivatives at x0 of the parabola through three points.
fn one_sided(x0: f64, x1: f64, x2: f64, f0: f64, f1: f64, f2: f64) -> (f64, f64) {
    let (h1, h2) = (x1 - x0, x2 - x0);
    let s1 = (f1 - f0) / h1;
    let s2 = (f2 - f0) / h2;
    let second = 2.0 * (s2 - s1) / (h2 - h1);
    let first = s1 - 0.5 * second * h1;
    (first, second)
}

/// Grid for `φ(r) = f(r) χ(k_F r)`: uniform across the potential, geometric
/// up to `1/k_F`, uniform through the cutoff region.
pub fn cutoff_grid(range: f64, kf: f64, per_segment: usize) -> Vec<f64> {
    let n = per_segment.max(8);
    let outer = 2.0 / kf;
    let inner = 1.0 / kf;
    let core = range.min(outer);
    let mut pts: Vec<f64> = (0..=n).map(|i| core * i as f64 / n as f64).collect();
    if inner > core {
        let ratio = (inner / core).powf(1.0 / n as f64);
        let mut r = core;
        for i in 1..=n {
            r *= ratio;
            pts.push(if i == n { inner } else { r });
        }
    }
    let start = core.max(inner);
    if outer > start {
        for i in 1..=n {
            pts.push(start + (outer - start) * i as f64 / n as f64);
        }
    }
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-300));
    pts
}

fn check_cutoff_args(kf: f64) -> Result<()> {
    if !(kf.is_finite() && kf > 0.0) {
        return Err(invalid(format!("Fermi momentum must be positive, got {kf}")));
    }
    Ok(())
}

/// Samples `φ(r) = f(r) χ(k_F r)` on [`cutoff_grid`].
pub fn cutoff_phi(sol: &ScatteringSolution, kf: f64, chi: CutoffFunction) -> Result<RadialSamples> {
    check_cutoff_args(kf)?;
    let radii = cutoff_grid(sol.potential().range(), kf, 2000);
    let values = radii.iter().map(|&r| sol.f(r) * chi.eval(kf * r).0).collect();
    Ok(RadialSamples { dim: sol.dim(), radii, values })
}

/// Pointwise defect of `φ` in the scattering equation,
/// `r Δ_{D+2}φ + ½ r V (1 - φ)`, expanded analytically:
/// `2k r f'χ' + k² r f χ'' + (D+1) k f χ' + ½ r V (1 - χ)`.
pub fn discrepancy_e_phi(sol: &ScatteringSolution, kf: f64, chi: CutoffFunction) -> Result<RadialSamples> {
    check_cutoff_args(kf)?;
    if chi.smoothness() < 2 {
        return Err(invalid(format!(
            "cutoff needs two continuous derivatives, {chi:?} has {}",
            chi.smoothness()
        )));
    }
    let d1 = sol.dim().as_f64() + 1.0;
    let radii = cutoff_grid(sol.potential().range(), kf, 2000);
    let values = radii
        .iter()
        .map(|&r| {
            let (f, fp, _) = sol.f_derivs(r);
            let (c, cp, cpp) = chi.eval(kf * r);
            let v = sol.potential().value(r);
            2.0 * kf * r * fp * cp + kf * kf * r * f * cpp + d1 * kf * f * cp + 0.5 * r * v * (1.0 - c)
        })
        .collect();
    Ok(RadialSamples { dim: sol.dim(), radii, values })
}
