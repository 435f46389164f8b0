//! Exact max-min programs over affine forms in two exponents `(s, t)`.
//!
//! The objective is `σ(s, t) = scale · min_i F_i(s, t)` over `s, t ≥ 0`, where
//! each `F_i` is affine in `(s, t)` with an offset affine in a parameter `α`.
//! Everything is computed in arbitrary-precision rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    let v = Q::from_str(t).map_err(|_| invalid(format!("not a rational number: '{text}'")))?;
    Ok(v)
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// `constant + slope · α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaAffine {
    #[serde(with = "rational_str")]
    pub constant: Q,
    #[serde(with = "rational_str")]
    pub slope: Q,
}

impl AlphaAffine {
    pub fn new(constant: Q, slope: Q) -> Self {
        Self { constant, slope }
    }

    pub fn at(&self, alpha: &Q) -> Q {
        &self.constant + &self.slope * alpha
    }

    /// The `α` where the value vanishes, if the slope is nonzero.
    pub fn root(&self) -> Option<Q> {
        if self.slope.is_zero() {
            None
        } else {
            Some(-&self.constant / &self.slope)
        }
    }
}

impl fmt::Display for AlphaAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_zero() {
            return write!(f, "{}", self.constant);
        }
        let sign = if self.slope.is_negative() { '-' } else { '+' };
        write!(f, "{} {} {}α", self.constant, sign, self.slope.abs())
    }
}

/// `coeff_s · s + coeff_t · t + offset(α)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineForm {
    pub label: String,
    #[serde(rename = "s", with = "rational_str")]
    pub coeff_s: Q,
    #[serde(rename = "t", with = "rational_str")]
    pub coeff_t: Q,
    #[serde(flatten)]
    pub offset: AlphaAffine,
}

impl AffineForm {
    pub fn new(label: impl Into<String>, coeff_s: Q, coeff_t: Q, constant: Q, alpha_slope: Q) -> Self {
        Self { label: label.into(), coeff_s, coeff_t, offset: AlphaAffine::new(constant, alpha_slope) }
    }

    pub fn eval(&self, s: &Q, t: &Q, alpha: &Q) -> Q {
        &self.coeff_s * s + &self.coeff_t * t + self.offset.at(alpha)
    }
}

/// A set of affine forms, the prefactor of the objective and the value of `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentProgram {
    pub forms: Vec<AffineForm>,
    #[serde(with = "rational_str")]
    pub scale: Q,
    #[serde(with = "rational_str")]
    pub alpha: Q,
}

impl ExponentProgram {
    pub fn new(forms: Vec<AffineForm>, scale: Q, alpha: Q) -> Result<Self> {
        let prog = Self { forms, scale, alpha };
        prog.validate()?;
        Ok(prog)
    }

    fn validate(&self) -> Result<()> {
        if self.forms.len() < 2 {
            return Err(invalid("an exponent program needs at least two forms"));
        }
        if !self.scale.is_positive() {
            return Err(invalid(format!("scale must be positive, got {}", self.scale)));
        }
        if self.alpha.is_negative() {
            return Err(invalid(format!("alpha must be non-negative, got {}", self.alpha)));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let prog: Self = serde_json::from_str(text).map_err(|e| invalid(format!("exponent program: {e}")))?;
        prog.validate()?;
        Ok(prog)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("exponent programs always serialize")
    }

    /// `scale · min_i F_i(s, t)`.
    pub fn objective(&self, s: &Q, t: &Q) -> Q {
        let m = self.forms.iter().map(|f| f.eval(s, t, &self.alpha)).min().expect("validated non-empty");
        &self.scale * m
    }

    /// The same program at another value of `α`.
    pub fn with_alpha(&self, alpha: Q) -> Result<Self> {
        Self::new(self.forms.clone(), self.scale.clone(), alpha)
    }
}

/// The general-`D` program with prefactor `1/8`:
/// `16t − (4D+16)α`, `2 − (4D+8)t + 2Ds`, `−(4D+8)t + (2D+8)s − (D+4)α`,
/// `2 − 2Ds`, `(8−2D)s − (D+4)α`.
pub fn build_program(dim: u8, alpha: Q) -> Result<ExponentProgram> {
    if !(1..=3).contains(&dim) {
        return Err(invalid(format!("dimension must be 1, 2 or 3, got {dim}")));
    }
    let d = i64::from(dim);
    let forms = vec![
        AffineForm::new("F1", qi(0), qi(16), qi(0), qi(-(4 * d + 16))),
        AffineForm::new("F2", qi(2 * d), qi(-(4 * d + 8)), qi(2), qi(0)),
        AffineForm::new("F3", qi(2 * d + 8), qi(-(4 * d + 8)), qi(0), qi(-(d + 4))),
        AffineForm::new("F4", qi(-2 * d), qi(0), qi(2), qi(0)),
        AffineForm::new("F5", qi(8 - 2 * d), qi(0), qi(0), qi(-(d + 4))),
    ];
    ExponentProgram::new(forms, q(1, 8), alpha)
}

/// Optimal point of an [`ExponentProgram`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Optimum {
    #[serde(with = "rational_str")]
    pub s: Q,
    #[serde(with = "rational_str")]
    pub t: Q,
    #[serde(with = "rational_str")]
    pub sigma: Q,
    /// Labels of the forms attaining the minimum at `(s, t)`.
    pub active: Vec<String>,
}

// A constraint m ≤ a s + b t + c, or a sign constraint on s or t, written as
// the plane  a s + b t - w m + c = 0 when tight.
#[derive(Clone)]
struct Plane {
    a: Q,
    b: Q,
    w: Q,
    c: Q,
}

fn det3(m: &[[Q; 3]; 3]) -> Q {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

// Cramer's rule for (s, t, m) on three tight planes.
fn intersect(p: &Plane, q2: &Plane, r: &Plane) -> Option<(Q, Q, Q)> {
    let rows = [p, q2, r];
    let m: [[Q; 3]; 3] = std::array::from_fn(|i| [rows[i].a.clone(), rows[i].b.clone(), -&rows[i].w]);
    let rhs: [Q; 3] = std::array::from_fn(|i| -&rows[i].c);
    let det = det3(&m);
    if det.is_zero() {
        return None;
    }
    let col = |j: usize| {
        let mut mm = m.clone();
        for i in 0..3 {
            mm[i][j] = rhs[i].clone();
        }
        det3(&mm) / &det
    };
    Some((col(0), col(1), col(2)))
}

/// `max_{d ∈ simplex} min_i ∇F_i · d`; positive iff `σ` is unbounded above.
fn recession_value(prog: &ExponentProgram) -> Q {
    let val = |u: &Q| {
        // direction (u, 1 - u)
        prog.forms
            .iter()
            .map(|f| &f.coeff_s * u + &f.coeff_t * (Q::one() - u))
            .min()
            .expect("non-empty")
    };
    let mut candidates = vec![Q::zero(), Q::one()];
    for (i, f) in prog.forms.iter().enumerate() {
        for g in &prog.forms[i + 1..] {
            // (a_f - b_f) u + b_f = (a_g - b_g) u + b_g
            let den = (&f.coeff_s - &f.coeff_t) - (&g.coeff_s - &g.coeff_t);
            if !den.is_zero() {
                let u = (&g.coeff_t - &f.coeff_t) / den;
                if !u.is_negative() && u <= Q::one() {
                    candidates.push(u);
                }
            }
        }
    }
    candidates.iter().map(val).max().expect("non-empty")
}

/// Maximizes `σ` by enumerating all vertices of the epigraph polyhedron in
/// `(s, t, m)`; ties are broken towards the smallest `t`, then the smallest `s`.
pub fn optimize(prog: &ExponentProgram) -> Result<Optimum> {
    prog.validate()?;
    let forms = &prog.forms;
    let parallel = forms
        .iter()
        .all(|f| forms.iter().all(|g| (&f.coeff_s * &g.coeff_t - &f.coeff_t * &g.coeff_s).is_zero()));
    if parallel {
        return Err(Error::Program("degenerate program: all forms are parallel".into()));
    }
    if recession_value(prog).is_positive() {
        return Err(Error::Program("unbounded program: sigma grows without limit".into()));
    }
    let mut planes: Vec<Plane> = forms
        .iter()
        .map(|f| Plane { a: f.coeff_s.clone(), b: f.coeff_t.clone(), w: Q::one(), c: f.offset.at(&prog.alpha) })
        .collect();
    planes.push(Plane { a: Q::one(), b: Q::zero(), w: Q::zero(), c: Q::zero() });
    planes.push(Plane { a: Q::zero(), b: Q::one(), w: Q::zero(), c: Q::zero() });

    let mut best: Option<(Q, Q, Q)> = None;
    let n = planes.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some((s, t, m)) = intersect(&planes[i], &planes[j], &planes[k]) else { continue };
                if s.is_negative() || t.is_negative() {
                    continue;
                }
                let feasible = forms.iter().all(|f| m <= f.eval(&s, &t, &prog.alpha));
                if !feasible {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((bs, bt, bm)) => m > *bm || (m == *bm && (t < *bt || (t == *bt && s < *bs))),
                };
                if better {
                    best = Some((s, t, m));
                }
            }
        }
    }
    let (s, t, m) = best.ok_or_else(|| Error::Program("no feasible vertex found".into()))?;
    let active = forms.iter().filter(|f| f.eval(&s, &t, &prog.alpha) == m).map(|f| f.label.clone()).collect();
    Ok(Optimum { sigma: &prog.scale * &m, s, t, active })
}

/// `σ*(α)` as an exact affine function, from the optimum at two values of `α`.
pub fn sigma_affine(dim: u8, alpha1: &Q, alpha2: &Q) -> Result<AlphaAffine> {
    if alpha1 == alpha2 {
        return Err(invalid("need two distinct alpha values"));
    }
    let s1 = optimize(&build_program(dim, alpha1.clone())?)?.sigma;
    let s2 = optimize(&build_program(dim, alpha2.clone())?)?.sigma;
    let slope = (&s2 - &s1) / (alpha2 - alpha1);
    Ok(AlphaAffine::new(&s1 - &slope * alpha1, slope))
}

/// Largest `α` of an increasing grid up to which the `α = 0` active set stays
/// active at the optimum; `None` if it already changes at the first point.
pub fn validity_window(dim: u8, grid: &[Q]) -> Result<Option<Q>> {
    let base = optimize(&build_program(dim, Q::zero())?)?.active;
    let mut last = None;
    for alpha in grid {
        let opt = optimize(&build_program(dim, alpha.clone())?)?;
        if base.iter().all(|l| opt.active.contains(l)) {
            last = Some(alpha.clone());
        } else {
            break;
        }
    }
    Ok(last)
}

/// One row of the error budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BudgetTerm {
    pub term: &'static str,
    pub formula: AlphaAffine,
    #[serde(with = "rational_str")]
    pub exponent: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorBudget {
    #[serde(with = "rational_str")]
    pub alpha: Q,
    pub terms: Vec<BudgetTerm>,
    /// The term with the smallest exponent.
    pub dominant: &'static str,
}

/// Exponents of the five remainder terms of the 3D pressure bound as
/// functions of `α`.
pub fn budget_formulas() -> Vec<(&'static str, AlphaAffine)> {
    vec![
        ("E_pt", AlphaAffine::new(q(1, 16), q(-21, 32))),
        ("E_V", AlphaAffine::new(q(1, 2), q(-5, 2))),
        ("E_scat", AlphaAffine::new(q(1, 5), qi(-2))),
        ("E_OD", AlphaAffine::new(q(1, 2), q(-13, 4))),
        ("E_Vphi", AlphaAffine::new(q(2, 3), qi(-4))),
    ]
}

pub fn error_budget(alpha: &Q) -> Result<ErrorBudget> {
    if alpha.is_negative() {
        return Err(invalid(format!("alpha must be non-negative, got {alpha}")));
    }
    let terms: Vec<BudgetTerm> = budget_formulas()
        .into_iter()
        .map(|(term, formula)| BudgetTerm { term, exponent: formula.at(alpha), formula })
        .collect();
    // First minimal entry wins ties.
    let dominant = terms.iter().fold(&terms[0], |m, t| if t.exponent < m.exponent { t } else { m }).term;
    Ok(ErrorBudget { alpha: alpha.clone(), terms, dominant })
}

/// Converts a rational to the nearest `f64`.
pub fn to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_dimensional_forms() {
        let a = q(1, 10);
        let p = build_program(3, a.clone()).unwrap();
        let expect = [
            (qi(0), qi(16), qi(0), qi(-28)),
            (qi(6), qi(-20), qi(2), qi(0)),
            (qi(14), qi(-20), qi(0), qi(-7)),
            (qi(-6), qi(0), qi(2), qi(0)),
            (qi(2), qi(0), qi(0), qi(-7)),
        ];
        for (f, (s, t, c, al)) in p.forms.iter().zip(expect) {
            assert_eq!((&f.coeff_s, &f.coeff_t, &f.offset.constant, &f.offset.slope), (&s, &t, &c, &al));
        }
    }

    #[test]
    fn optima_at_alpha_zero() {
        let cases = [(3, q(1, 4), q(1, 32), q(1, 16)), (1, q(3, 11), q(1, 11), q(2, 11)), (2, q(1, 4), q(1, 16), q(1, 8))];
        for (d, s, t, sigma) in cases {
            let opt = optimize(&build_program(d, Q::zero()).unwrap()).unwrap();
            assert_eq!((opt.s, opt.t, opt.sigma), (s, t, sigma), "D = {d}");
            assert!(opt.active.len() >= 2);
        }
    }

    #[test]
    fn symbolic_sigma() {
        let aff = sigma_affine(3, &q(1, 1000), &q(1, 100)).unwrap();
        assert_eq!(aff, AlphaAffine::new(q(1, 16), q(-21, 32)));
        let opt = optimize(&build_program(3, q(1, 100)).unwrap()).unwrap();
        assert_eq!(opt.s, q(1, 4) + q(7, 8) * q(1, 100));
        assert_eq!(opt.t, q(1, 32) + q(91, 64) * q(1, 100));
        assert_eq!(sigma_affine(1, &q(1, 1000), &q(1, 100)).unwrap().slope, q(-30, 44));
        assert_eq!(sigma_affine(2, &q(1, 1000), &q(1, 100)).unwrap().slope, q(-3, 8));
    }

    #[test]
    fn unbounded_and_degenerate_programs() {
        let up = vec![
            AffineForm::new("a", qi(1), qi(0), qi(0), qi(0)),
            AffineForm::new("b", qi(0), qi(1), qi(0), qi(0)),
        ];
        let err = optimize(&ExponentProgram::new(up, qi(1), qi(0)).unwrap()).unwrap_err();
        assert!(err.to_string().contains("unbounded"));
        let flat = vec![
            AffineForm::new("a", qi(1), qi(2), qi(0), qi(0)),
            AffineForm::new("b", qi(-2), qi(-4), qi(1), qi(0)),
        ];
        let err = optimize(&ExponentProgram::new(flat, qi(1), qi(0)).unwrap()).unwrap_err();
        assert!(err.to_string().contains("parallel"));
    }

    #[test]
    fn json_round_trip() {
        let p = build_program(2, q(1, 7)).unwrap();
        let text = p.to_json();
        assert!(text.contains("\"1/8\""));
        assert_eq!(ExponentProgram::from_json(&text).unwrap(), p);
        assert!(ExponentProgram::from_json(r#"{"forms": [], "scale": "1", "alpha": "0"}"#).is_err());
    }

    #[test]
    fn budget_at_zero_and_root() {
        let b = error_budget(&Q::zero()).unwrap();
        let values: Vec<Q> = b.terms.iter().map(|t| t.exponent.clone()).collect();
        assert_eq!(values, vec![q(1, 16), q(1, 2), q(1, 5), q(1, 2), q(2, 3)]);
        assert_eq!(b.dominant, "E_pt");
        assert_eq!(budget_formulas()[0].1.root(), Some(q(2, 21)));
        assert_eq!(error_budget(&q(1, 100)).unwrap().terms[0].exponent, q(1, 16) - q(21, 3200));
    }

    #[test]
    fn window_is_positive() {
        let grid: Vec<Q> = (1..=50).map(|k| q(k, 1000)).collect();
        let w = validity_window(3, &grid).unwrap();
        assert!(w.is_some());
    }
}
