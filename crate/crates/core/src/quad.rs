//! Adaptive Gauss–Kronrod quadrature and small summation helpers.
//!
//! The integrator is a global-adaptive 21-point Kronrod scheme in the style of
//! QUADPACK's `qag`: the interval with the largest error estimate is bisected
//! until the total estimated error meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for the abscissae XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Absolute and relative accuracy targets; the integrator stops once the
/// estimated error is below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub const fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// One application of the 21-point Kronrod rule on `[a, b]`.
/// Returns `(value, error_estimate)`.
pub fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

pub const DEFAULT_MAX_SEGMENTS: usize = 4000;

/// Global-adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    integrate_with_limit(f, a, b, tol, DEFAULT_MAX_SEGMENTS)
}

pub fn integrate_with_limit<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    max_segments: usize,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(crate::error::invalid("integration limits must be finite"));
    }
    if a == b {
        return Ok(Integral { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    let (value, err) = kronrod21(&f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, err });
    let mut total = value;
    let mut total_err = err;
    loop {
        let target = tol.abs.max(tol.rel * total.abs());
        if total_err <= target || !total.is_finite() {
            break;
        }
        if heap.len() >= max_segments {
            return Err(Error::Quadrature { achieved: total_err, requested: target });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature { achieved: total_err, requested: target });
        }
        let (v1, e1) = kronrod21(&f, worst.a, mid);
        let (v2, e2) = kronrod21(&f, mid, worst.b);
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
        if total_err < 0.0 {
            total_err = heap.iter().map(|s| s.err).sum();
        }
    }
    // Re-sum in position order so the result does not depend on heap layout.
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = neumaier_sum(segs.iter().map(|s| s.value));
    let abs_error = segs.iter().map(|s| s.err).sum();
    Ok(Integral { value, abs_error, evaluations })
}

/// Integrates over consecutive panels `[p0, p1], [p1, p2], ...`, each with its own
/// adaptive refinement. Use for integrands with known kinks or oscillation scales.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<Integral> {
    let mut value = Vec::with_capacity(points.len());
    let mut abs_error = 0.0;
    let mut evaluations = 0;
    let n = points.len().saturating_sub(1).max(1) as f64;
    let per_panel = Tolerance::new(tol.abs / n, tol.rel);
    for w in points.windows(2) {
        let r = integrate(&f, w[0], w[1], per_panel)?;
        value.push(r.value);
        abs_error += r.abs_error;
        evaluations += r.evaluations;
    }
    Ok(Integral { value: neumaier_sum(value), abs_error, evaluations })
}

/// Integrates `f` over `[start, ∞)` by panels of doubling width, stopping once a
/// panel contributes less than `stop_rel` of the accumulated total.
pub fn integrate_tail<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    first_width: f64,
    tol: Tolerance,
    stop_rel: f64,
) -> Result<Integral> {
    let mut parts = Vec::new();
    let mut acc = 0.0;
    let mut abs_error = 0.0;
    let mut evaluations = 0;
    let mut lo = start;
    let mut width = first_width;
    for _ in 0..200 {
        let hi = lo + width;
        let r = integrate(&f, lo, hi, tol)?;
        parts.push(r.value);
        acc += r.value;
        abs_error += r.abs_error;
        evaluations += r.evaluations;
        if r.value.abs() <= stop_rel * acc.abs() || (acc == 0.0 && r.value == 0.0) {
            return Ok(Integral { value: neumaier_sum(parts), abs_error, evaluations });
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Quadrature { achieved: abs_error.max(parts.last().copied().unwrap_or(0.0).abs()), requested: stop_rel * acc.abs() })
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Trapezoid rule on an arbitrary increasing grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    neumaier_sum(x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])))
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kronrod_is_exact_for_high_degree_polynomials() {
        // The 21-point rule integrates polynomials up to degree 31 exactly.
        let f = |x: f64| x.powi(30) + 3.0 * x.powi(7) - 1.0;
        let (v, _) = kronrod21(&f, -1.0, 1.0);
        assert_relative_eq!(v, 2.0 / 31.0 - 2.0, max_relative = 1e-14);
        let (v, _) = kronrod21(&|x: f64| x.powi(31), 0.0, 1.0);
        assert_relative_eq!(v, 1.0 / 32.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_weights_integrate_low_degree() {
        // The embedded 10-point Gauss rule alone should reproduce ∫ x^18 on [-1, 1].
        let mut g = 0.0;
        for j in 0..5 {
            let x = XGK[2 * j + 1];
            g += WG[j] * 2.0 * x.powi(18);
        }
        assert_relative_eq!(g, 2.0 / 19.0, max_relative = 1e-14);
        let wsum: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert_relative_eq!(wsum, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0, Tolerance::relative(1e-10)).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
        let r = integrate(|x: f64| x.sqrt(), 0.0, 4.0, Tolerance::relative(1e-13)).unwrap();
        assert_relative_eq!(r.value, 16.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn tail_integration_of_exponential() {
        let r = integrate_tail(|x: f64| (-x).exp(), 0.0, 1.0, Tolerance::relative(1e-13), 1e-16).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn oscillatory_panels() {
        let r = integrate_panels(
            |x: f64| x.sin() * (-0.01 * x).exp(),
            &(0..=200).map(|i| i as f64 * std::f64::consts::PI).collect::<Vec<_>>(),
            Tolerance::new(1e-14, 1e-13),
        )
        .unwrap();
        let exact = (1.0 - (-0.01 * 200.0 * std::f64::consts::PI).exp()) / (1.0 + 1e-4);
        assert_relative_eq!(r.value, exact, max_relative = 1e-12);
    }

    #[test]
    fn non_convergence_is_reported() {
        let err = integrate_with_limit(|x: f64| (1.0 / x).sin() / x, 1e-9, 1.0, Tolerance::relative(1e-14), 20);
        assert!(matches!(err, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn golden_section_finds_maximum() {
        let (x, fx) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6);
        assert_relative_eq!(fx, 2.0, max_relative = 1e-14);
    }
}
