use serde::{Deserialize, Serialize};

use crate::dim::Dimension;
use crate::error::{invalid, Result};
use crate::quad::{integrate, Tolerance};

/// Closed-form or tabulated radial profile of a repulsive interaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialShape {
    /// `V = v0` for `r ≤ r`, zero beyond.
    SquareBarrier { v0: f64, r: f64 },
    /// `V = v0` for `r_inner ≤ r ≤ r_outer`, zero elsewhere.
    Shell { v0: f64, r_inner: f64, r_outer: f64 },
    /// Linear interpolation between samples; constant below the first radius,
    /// zero beyond the last.
    Tabulated { radii: Vec<f64>, values: Vec<f64> },
}

/// A non-negative, radial, compactly supported potential in `D` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPotential {
    shape: PotentialShape,
    dim: Dimension,
    range: f64,
    l1_norm: f64,
    sup_norm: f64,
}

impl RadialPotential {
    pub fn new(shape: PotentialShape, dim: Dimension) -> Result<Self> {
        let nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be finite and non-negative, got {v}")))
            }
        };
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be finite and positive, got {v}")))
            }
        };
        let (range, sup_norm) = match &shape {
            PotentialShape::SquareBarrier { v0, r } => {
                nonneg("v0", *v0)?;
                positive("r", *r)?;
                (*r, *v0)
            }
            PotentialShape::Shell { v0, r_inner, r_outer } => {
                nonneg("v0", *v0)?;
                nonneg("r_inner", *r_inner)?;
                positive("r_outer", *r_outer)?;
                if r_inner >= r_outer {
                    return Err(invalid(format!("shell needs r_inner < r_outer, got {r_inner} >= {r_outer}")));
                }
                (*r_outer, *v0)
            }
            PotentialShape::Tabulated { radii, values } => {
                if radii.len() < 2 || radii.len() != values.len() {
                    return Err(invalid("tabulated potential needs at least two (radius, value) rows"));
                }
                for (i, (&r, &v)) in radii.iter().zip(values).enumerate() {
                    nonneg(&format!("radius in row {}", i + 1), r)?;
                    nonneg(&format!("potential value in row {}", i + 1), v)?;
                }
                if radii.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(invalid("tabulated radii must be strictly increasing"));
                }
                let last = *radii.last().unwrap();
                positive("last tabulated radius", last)?;
                (last, values.iter().copied().fold(0.0, f64::max))
            }
        };
        let mut pot = Self { shape, dim, range, l1_norm: 0.0, sup_norm };
        pot.l1_norm = pot.compute_l1()?;
        Ok(pot)
    }

    pub fn square_barrier(v0: f64, r: f64, dim: Dimension) -> Result<Self> {
        Self::new(PotentialShape::SquareBarrier { v0, r }, dim)
    }

    pub fn shell(v0: f64, r_inner: f64, r_outer: f64, dim: Dimension) -> Result<Self> {
        Self::new(PotentialShape::Shell { v0, r_inner, r_outer }, dim)
    }

    pub fn tabulated(radii: Vec<f64>, values: Vec<f64>, dim: Dimension) -> Result<Self> {
        Self::new(PotentialShape::Tabulated { radii, values }, dim)
    }

    /// Parses a two-column `radius,value` CSV table. A non-numeric first line
    /// is treated as a header; blank lines and `#` comments are skipped.
    pub fn from_csv_str(text: &str, dim: Dimension) -> Result<Self> {
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 2 {
                return Err(invalid(format!("line {}: expected two columns, found {}", lineno + 1, cols.len())));
            }
            match (cols[0].parse::<f64>(), cols[1].parse::<f64>()) {
                (Ok(r), Ok(v)) => {
                    radii.push(r);
                    values.push(v);
                }
                _ if radii.is_empty() && lineno == 0 => continue,
                _ => return Err(invalid(format!("line {}: could not parse '{line}'", lineno + 1))),
            }
        }
        Self::tabulated(radii, values, dim)
    }

    pub fn shape(&self) -> &PotentialShape {
        &self.shape
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    /// Radius beyond which `V` vanishes.
    pub fn range(&self) -> f64 {
        self.range
    }

    /// `∫_{ℝ^D} V`.
    pub fn l1_norm(&self) -> f64 {
        self.l1_norm
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn is_zero(&self) -> bool {
        self.sup_norm == 0.0
    }

    pub fn value(&self, r: f64) -> f64 {
        match &self.shape {
            PotentialShape::SquareBarrier { v0, r: rr } => {
                if r <= *rr {
                    *v0
                } else {
                    0.0
                }
            }
            PotentialShape::Shell { v0, r_inner, r_outer } => {
                if r >= *r_inner && r <= *r_outer {
                    *v0
                } else {
                    0.0
                }
            }
            PotentialShape::Tabulated { radii, values } => {
                let last = radii.len() - 1;
                if r > radii[last] {
                    0.0
                } else if r <= radii[0] {
                    values[0]
                } else {
                    let i = radii.partition_point(|&x| x <= r).min(last);
                    let (r0, r1) = (radii[i - 1], radii[i]);
                    let t = (r - r0) / (r1 - r0);
                    values[i - 1] + t * (values[i] - values[i - 1])
                }
            }
        }
    }

    /// Value on the open piece `(lo, hi)` between two consecutive breakpoints,
    /// extended continuously to the piece's endpoints.
    pub fn value_on_piece(&self, r: f64, lo: f64, hi: f64) -> f64 {
        let pad = 1e-12 * (hi - lo);
        self.value(r.clamp(lo + pad, hi - pad))
    }

    /// Radii in `(0, range]` where `V` or its derivative may jump; always ends
    /// with `range`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = match &self.shape {
            PotentialShape::SquareBarrier { r, .. } => vec![*r],
            PotentialShape::Shell { r_inner, r_outer, .. } => vec![*r_inner, *r_outer],
            PotentialShape::Tabulated { radii, .. } => radii.clone(),
        };
        pts.retain(|&r| r > 0.0);
        pts.dedup();
        pts
    }

    /// The rescaled potential `λ² V(λ r)`, whose scattering length is `a / λ`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid(format!("scale factor must be positive, got {lambda}")));
        }
        let l2 = lambda * lambda;
        let shape = match &self.shape {
            PotentialShape::SquareBarrier { v0, r } => PotentialShape::SquareBarrier { v0: v0 * l2, r: r / lambda },
            PotentialShape::Shell { v0, r_inner, r_outer } => PotentialShape::Shell {
                v0: v0 * l2,
                r_inner: r_inner / lambda,
                r_outer: r_outer / lambda,
            },
            PotentialShape::Tabulated { radii, values } => PotentialShape::Tabulated {
                radii: radii.iter().map(|r| r / lambda).collect(),
                values: values.iter().map(|v| v * l2).collect(),
            },
        };
        Self::new(shape, self.dim)
    }

    fn compute_l1(&self) -> Result<f64> {
        let d = self.dim.as_f64();
        let area = self.dim.sphere_area();
        Ok(match &self.shape {
            PotentialShape::SquareBarrier { v0, r } => area * v0 * r.powf(d) / d,
            PotentialShape::Shell { v0, r_inner, r_outer } => area * v0 * (r_outer.powf(d) - r_inner.powf(d)) / d,
            PotentialShape::Tabulated { .. } => {
                let mut lo = 0.0;
                let mut total = 0.0;
                for hi in self.breakpoints() {
                    let piece = integrate(
                        |r: f64| r.powf(d - 1.0) * self.value_on_piece(r, lo, hi),
                        lo,
                        hi,
                        Tolerance::relative(1e-13),
                    )?;
                    total += piece.value;
                    lo = hi;
                }
                area * total
            }
        })
    }
}
