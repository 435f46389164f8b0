use serde::Serialize;

use super::potential::RadialPotential;
use crate::dim::Dimension;
use crate::error::{invalid, Error, Result};
use crate::ode::{dopri_step, QuinticHermite, State};
use crate::quad::{integrate, Tolerance};

// Rescaling threshold for the growing interior solution.
const BIG: f64 = 1e100;
const MAX_STEPS: usize = 5_000_000;

/// Knobs for [`solve_scattering`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Target for the ODE residual, relative to `max(1, ‖V‖∞)`.
    pub tol: f64,
    /// Outer radius of the sample grid; defaults to `10 R_V`.
    pub r_max: Option<f64>,
    /// Number of geometric samples between `R_V` and `r_max`.
    pub exterior_points: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, r_max: None, exterior_points: 200 }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Solution of the radial scattering problem `f'' + (D+1)/r f' = ½ V (f - 1)`
/// with `f → 0` at infinity; outside the support `f = a^D / r^D`.
#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    potential: RadialPotential,
    tol: f64,
    eps: f64,
    nodes: Vec<f64>,
    // g = 1 - f and its first derivative at each node
    g: Vec<f64>,
    dg: Vec<f64>,
    // one-sided second derivatives at the ends of each interval
    d2_lo: Vec<f64>,
    d2_hi: Vec<f64>,
    a_pow_d: f64,
    residual: f64,
    steps: usize,
    grid: Vec<f64>,
}

/// Summary numbers for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringSummary {
    pub dim: u8,
    pub scattering_length: f64,
    pub a_pow_d: f64,
    pub range: f64,
    pub l1_norm: f64,
    pub residual: f64,
    pub steps: usize,
}

/// Integrates the interior problem by shooting from the origin with
/// adaptive Dormand–Prince steps that never straddle a breakpoint of `V`,
/// then matches to the exterior solution at `R_V`.
pub fn solve_scattering(potential: &RadialPotential, opts: SolverOptions) -> Result<ScatteringSolution> {
    let tol = opts.tol;
    if !(tol > 1e-12 && tol < 1e-3) {
        return Err(invalid(format!("tolerance must lie in (1e-12, 1e-3), got {tol:e}")));
    }
    let range = potential.range();
    let r_max = opts.r_max.unwrap_or(10.0 * range);
    if !(r_max.is_finite() && r_max >= 2.0 * range) {
        return Err(invalid(format!("r_max must be at least twice the potential range {range}, got {r_max}")));
    }
    let dim = potential.dim();
    let d = dim.as_f64();
    let d1 = d + 1.0;
    let vscale = potential.sup_norm().max(1.0);
    let rk_tol = tol;

    // Regular start: g ≈ 1 + V(0) r² / (4(D+2)).
    let eps = 1e-6 * range;
    let v0 = potential.value(0.0);
    let c0 = v0 / (4.0 * (d + 2.0));
    let mut y: State = [1.0 + c0 * eps * eps, 2.0 * c0 * eps];

    let mut nodes = vec![eps];
    let mut g = vec![y[0]];
    let mut dg = vec![y[1]];
    let mut scale = vec![0i32];
    let mut d2_lo = Vec::new();
    let mut d2_hi = Vec::new();
    let mut defects: Vec<(f64, i32)> = Vec::new();
    let mut k = 0i32;
    let mut steps = 0usize;

    let mut h = (1e-3 * range).min(0.05 / vscale.sqrt());
    let mut lo = eps;
    for hi in potential.breakpoints().into_iter().filter(|&b| b > eps) {
        let vf = |r: f64| potential.value_on_piece(r, lo, hi);
        let rhs = |r: f64, y: State| [y[1], 0.5 * vf(r) * y[0] - d1 / r * y[1]];
        let mut r = lo;
        let mut dy = rhs(r, y);
        while r < hi {
            let mut hs = h;
            let last = r + 1.01 * hs >= hi;
            if last {
                hs = hi - r;
            }
            let st = dopri_step(&rhs, r, y, dy, hs);
            steps += 1;
            let gmax = y[0].abs().max(st.y[0].abs());
            let pmax = y[1].abs().max(st.y[1].abs());
            let sc_g = rk_tol * gmax + f64::MIN_POSITIVE;
            let sc_p = rk_tol * (pmax + gmax / range) + f64::MIN_POSITIVE;
            let err = (st.err[0].abs() / sc_g).max(st.err[1].abs() / sc_p);

            // Residual of the interpolant at the midpoint, built on the
            // increment so that g'' does not drown in rounding of g.
            let herm = QuinticHermite { h: hs, y: [0.0, st.inc[0]], d1: [y[1], st.y[1]], d2: [dy[1], st.dy[1]] };
            let (gm, pm, ppm) = herm.eval(0.5);
            let gm = y[0] + gm;
            let rm = r + 0.5 * hs;
            let defect = (ppm + d1 / rm * pm - 0.5 * vf(rm) * gm).abs();
            let def_ratio = defect / (0.5 * tol * vscale * gmax + f64::MIN_POSITIVE);

            if err.is_finite() && err <= 1.0 && def_ratio <= 1.0 {
                let r_new = if last { hi } else { r + hs };
                nodes.push(r_new);
                g.push(st.y[0]);
                dg.push(st.y[1]);
                d2_lo.push(dy[1]);
                d2_hi.push(st.dy[1]);
                scale.push(k);
                defects.push((defect, k));
                y = st.y;
                dy = st.dy;
                r = r_new;
                if y[0].abs() > BIG {
                    y = [y[0] / BIG, y[1] / BIG];
                    dy = [dy[0] / BIG, dy[1] / BIG];
                    k += 1;
                }
            }
            let grow = |ratio: f64, p: f64| if ratio.is_finite() { ratio.max(1e-12).powf(-p) } else { 0.2 };
            let factor = (0.9 * grow(err, 0.2).min(grow(def_ratio, 0.25))).clamp(0.2, 5.0);
            h = hs * factor;
            if h < 1e-15 * range {
                return Err(Error::Solver(format!("step size underflow at r = {r:e}")));
            }
            if steps > MAX_STEPS {
                return Err(Error::Solver(format!("step budget exhausted at r = {r:e}")));
            }
        }
        lo = hi;
    }

    // Exterior match at R_V.
    let (g_r, p_r) = (y[0], y[1]);
    let amp = g_r + p_r * range / d;
    if !(amp.is_finite() && amp > 0.0) {
        return Err(Error::Solver(format!("degenerate matching amplitude {amp:e}")));
    }
    let a_pow_d = p_r * range.powf(d + 1.0) / (d * amp);
    if a_pow_d < 0.0 {
        return Err(Error::Solver(format!("negative a^D = {a_pow_d:e}; is the potential attractive?")));
    }
    let factor = |kk: i32| 10f64.powi(-100 * (k - kk)) / amp;
    for i in 0..nodes.len() {
        let s = factor(scale[i]);
        g[i] *= s;
        dg[i] *= s;
    }
    for i in 0..d2_lo.len() {
        d2_lo[i] *= factor(scale[i]);
        d2_hi[i] *= factor(scale[i + 1]);
    }
    let residual = defects.iter().map(|&(dd, kk)| dd * factor(kk)).fold(0.0, f64::max);

    let mut grid = vec![0.0];
    grid.extend_from_slice(&nodes);
    let n_ext = opts.exterior_points.max(2);
    if r_max > range {
        let ratio = (r_max / range).powf(1.0 / n_ext as f64);
        let mut r = range;
        for i in 1..=n_ext {
            r *= ratio;
            grid.push(if i == n_ext { r_max } else { r });
        }
    }

    Ok(ScatteringSolution {
        potential: potential.clone(),
        tol,
        eps,
        nodes,
        g,
        dg,
        d2_lo,
        d2_hi,
        a_pow_d,
        residual,
        steps,
        grid,
    })
}

impl ScatteringSolution {
    pub fn potential(&self) -> &RadialPotential {
        &self.potential
    }

    pub fn dim(&self) -> Dimension {
        self.potential.dim()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `a^D`, the quantity the exterior solution is expressed in.
    pub fn a_pow_d(&self) -> f64 {
        self.a_pow_d
    }

    /// The scattering length `a`.
    pub fn scattering_length(&self) -> f64 {
        self.a_pow_d.powf(1.0 / self.dim().as_f64())
    }

    /// Largest ODE residual measured on the accepted steps, in units of the
    /// normalized solution.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn summary(&self) -> ScatteringSummary {
        ScatteringSummary {
            dim: self.dim().get(),
            scattering_length: self.scattering_length(),
            a_pow_d: self.a_pow_d,
            range: self.potential.range(),
            l1_norm: self.potential.l1_norm(),
            residual: self.residual,
            steps: self.steps,
        }
    }

    /// `(g, g', g'')` with `g = 1 - f`.
    fn g_all(&self, r: f64) -> (f64, f64, f64) {
        let range = self.potential.range();
        let d = self.dim().as_f64();
        let r = r.abs();
        if r >= range {
            let ad = self.a_pow_d;
            let rd = r.powf(-d);
            return (1.0 - ad * rd, d * ad * rd / r, -d * (d + 1.0) * ad * rd / (r * r));
        }
        if r <= self.eps {
            // Taylor branch: g = g(ε) (1 + c r²) / (1 + c ε²).
            let c = self.potential.value(0.0) / (4.0 * (d + 2.0));
            let base = self.g[0] / (1.0 + c * self.eps * self.eps);
            return (base * (1.0 + c * r * r), 2.0 * base * c * r, 2.0 * base * c);
        }
        let i = self.nodes.partition_point(|&x| x <= r).clamp(1, self.nodes.len() - 1) - 1;
        let h = self.nodes[i + 1] - self.nodes[i];
        let herm = QuinticHermite {
            h,
            y: [self.g[i], self.g[i + 1]],
            d1: [self.dg[i], self.dg[i + 1]],
            d2: [self.d2_lo[i], self.d2_hi[i]],
        };
        herm.eval(((r - self.nodes[i]) / h).clamp(0.0, 1.0))
    }

    pub fn f(&self, r: f64) -> f64 {
        1.0 - self.g_all(r).0
    }

    /// `(f, f', f'')` at radius `r`.
    pub fn f_derivs(&self, r: f64) -> (f64, f64, f64) {
        let (g, gp, gpp) = self.g_all(r);
        (1.0 - g, -gp, -gpp)
    }

    /// `W = V (1 - f)`.
    pub fn w(&self, r: f64) -> f64 {
        self.potential.value(r) * self.g_all(r).0
    }

    /// Radii at which the solution was resolved: `0`, the accepted ODE
    /// nodes, then a geometric grid out to `r_max`.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn f_samples(&self) -> Vec<f64> {
        self.grid.iter().map(|&r| self.f(r)).collect()
    }

    pub fn w_samples(&self) -> Vec<f64> {
        self.grid.iter().map(|&r| self.w(r)).collect()
    }

    /// `∫_{ℝ^D} |x|^k W(x) dx` by quadrature over the pieces of `V`.
    pub fn moment_w(&self, k: f64) -> Result<f64> {
        let d = self.dim().as_f64();
        let mut lo = 0.0;
        let mut total = 0.0;
        for hi in self.potential.breakpoints() {
            let piece = integrate(
                |r: f64| r.powf(d - 1.0 + k) * self.potential.value_on_piece(r, lo, hi) * self.g_all(r).0,
                lo,
                hi,
                Tolerance { abs: 1e-300, rel: 1e-12 },
            )?;
            total += piece.value;
            lo = hi;
        }
        Ok(self.dim().sphere_area() * total)
    }

    /// `∫ |x|² W`; equals `2 D |S^{D-1}| a^D` for an exact solution.
    pub fn second_moment_w(&self) -> Result<f64> {
        self.moment_w(2.0)
    }
}

/// Closed-form value of `∫ |x|² W` in terms of `a`.
pub fn second_moment_identity(dim: Dimension, a: f64) -> f64 {
    let d = dim.as_f64();
    dim.sphere_area() * 2.0 * d * a.powf(d)
}
