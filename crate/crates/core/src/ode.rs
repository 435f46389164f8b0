//! Dormand–Prince 5(4) step for two-component first-order systems, plus the
//! quintic Hermite basis used to interpolate second-order ODE solutions.

pub type State = [f64; 2];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the fifth- and embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy(y: State, terms: &[(f64, State)], h: f64) -> State {
    let mut out = y;
    for &(c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Result of one Dormand–Prince step.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub y: State,
    /// `y_new - y` before rounding into `y_new`.
    pub inc: State,
    /// Derivative at the new point (first stage of the next step).
    pub dy: State,
    /// Componentwise local error estimate.
    pub err: State,
}

/// Advances `y` (with derivative `dy = f(x, y)`) by `h`.
pub fn dopri_step<F: Fn(f64, State) -> State>(f: &F, x: f64, y: State, dy: State, h: f64) -> Step {
    let k1 = dy;
    let k2 = f(x + C2 * h, axpy(y, &[(A21, k1)], h));
    let k3 = f(x + C3 * h, axpy(y, &[(A31, k1), (A32, k2)], h));
    let k4 = f(x + C4 * h, axpy(y, &[(A41, k1), (A42, k2), (A43, k3)], h));
    let k5 = f(x + C5 * h, axpy(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], h));
    let k6 = f(x + h, axpy(y, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)], h));
    let inc = axpy([0.0; 2], &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)], h);
    let y_new = [y[0] + inc[0], y[1] + inc[1]];
    let k7 = f(x + h, y_new);
    let mut err = [0.0; 2];
    for i in 0..2 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Step { y: y_new, inc, dy: k7, err }
}

/// Quintic Hermite interpolant on `[x0, x0 + h]` from values, first and
/// second derivatives at both ends. Returns `(y, y', y'')` at `x0 + u h`.
#[derive(Debug, Clone, Copy)]
pub struct QuinticHermite {
    pub h: f64,
    pub y: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

impl QuinticHermite {
    pub fn eval(&self, u: f64) -> (f64, f64, f64) {
        let h = self.h;
        let (u2, u3) = (u * u, u * u * u);
        let (u4, u5) = (u3 * u, u3 * u2);
        // Basis polynomials and their u-derivatives.
        let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
        let h0p = -30.0 * u2 + 60.0 * u3 - 30.0 * u4;
        let h0pp = -60.0 * u + 180.0 * u2 - 120.0 * u3;
        let h1 = 1.0 - h0;
        let h1p = -h0p;
        let h1pp = -h0pp;
        let g0 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
        let g0p = 1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4;
        let g0pp = -36.0 * u + 96.0 * u2 - 60.0 * u3;
        let g1 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
        let g1p = -12.0 * u2 + 28.0 * u3 - 15.0 * u4;
        let g1pp = -24.0 * u + 84.0 * u2 - 60.0 * u3;
        let k0 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
        let k0p = 0.5 * (2.0 * u - 9.0 * u2 + 12.0 * u3 - 5.0 * u4);
        let k0pp = 0.5 * (2.0 - 18.0 * u + 36.0 * u2 - 20.0 * u3);
        let k1 = 0.5 * (u3 - 2.0 * u4 + u5);
        let k1p = 0.5 * (3.0 * u2 - 8.0 * u3 + 5.0 * u4);
        let k1pp = 0.5 * (6.0 * u - 24.0 * u2 + 20.0 * u3);
        let [y0, y1] = self.y;
        let [d0, d1] = self.d1;
        let [s0, s1] = self.d2;
        let v = y0 * h0 + y1 * h1 + h * (d0 * g0 + d1 * g1) + h * h * (s0 * k0 + s1 * k1);
        let vp = (y0 * h0p + y1 * h1p) / h + d0 * g0p + d1 * g1p + h * (s0 * k0p + s1 * k1p);
        let vpp = (y0 * h0pp + y1 * h1pp) / (h * h) + (d0 * g0pp + d1 * g1pp) / h + s0 * k0pp + s1 * k1pp;
        (v, vp, vpp)
    }
}
