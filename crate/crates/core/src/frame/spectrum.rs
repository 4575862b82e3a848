use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Largest spectrum [`generate_spectrum`] will build.
pub const MAX_SPECTRUM_POINTS: usize = 10_000_000;

/// How to generate a finite frequency set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumSpec {
    Explicit {
        points: Vec<Vec<f64>>,
    },
    /// `spacing · ℤ^d ∩ {|λ| ≤ radius}`.
    LatticeBall {
        spacing: f64,
        radius: f64,
    },
    /// `step · ℤ · e_d ∩ {|λ| ≤ radius}`.
    AxisLine {
        step: f64,
        radius: f64,
    },
    /// Lattice points within `half_angle` of the line through `axis` (both
    /// nappes), plus the origin.
    ConeLattice {
        axis: Vec<f64>,
        half_angle: f64,
        spacing: f64,
        radius: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub d: usize,
    /// Sorted by `(|λ|, lexicographic)`.
    pub points: Vec<Vec<f64>>,
    /// Generator radius; `None` for explicit lists.
    pub radius: Option<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same spectrum without `λ = 0`.
    pub fn without_zero(&self) -> Spectrum {
        Spectrum {
            d: self.d,
            points: self.points.iter().filter(|p| p.iter().any(|v| *v != 0.0)).cloned().collect(),
            radius: self.radius,
        }
    }

    /// CSV with one column per coordinate.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<String> = (1..=self.d).map(|i| format!("lambda_{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|v| format!("{v}")).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Deterministically enumerates the spectrum in dimension `d`.
pub fn generate_spectrum(spec: &SpectrumSpec, d: usize, exclude_zero: bool) -> Result<Spectrum> {
    if d < 1 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let (mut points, radius) = match spec {
        SpectrumSpec::Explicit { points } => {
            if let Some(p) = points.iter().find(|p| p.len() != d) {
                return Err(Error::DimensionMismatch { expected: d, got: p.len() });
            }
            if points.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::invalid("spectrum points must be finite"));
            }
            if points.len() > MAX_SPECTRUM_POINTS {
                return Err(Error::SpectrumTooLarge { count: points.len(), limit: MAX_SPECTRUM_POINTS });
            }
            (points.clone(), None)
        }
        SpectrumSpec::LatticeBall { spacing, radius } => {
            check_positive(*spacing, *radius)?;
            (lattice_ball(d, *spacing, *radius, |_| true)?, Some(*radius))
        }
        SpectrumSpec::AxisLine { step, radius } => {
            check_positive(*step, *radius)?;
            let n = (radius / step + 1e-9).floor() as i64;
            let count = 2 * n as usize + 1;
            if count > MAX_SPECTRUM_POINTS {
                return Err(Error::SpectrumTooLarge { count, limit: MAX_SPECTRUM_POINTS });
            }
            let pts = (-n..=n)
                .map(|j| {
                    let mut p = vec![0.0; d];
                    p[d - 1] = j as f64 * step;
                    p
                })
                .collect();
            (pts, Some(*radius))
        }
        SpectrumSpec::ConeLattice { axis, half_angle, spacing, radius } => {
            check_positive(*spacing, *radius)?;
            if axis.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: axis.len() });
            }
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(half_angle) {
                return Err(Error::invalid("cone half-angle must lie in [0, π/2]"));
            }
            let an = linalg::norm(axis);
            if !(an > 0.0) {
                return Err(Error::invalid("cone axis must be nonzero"));
            }
            let unit: Vec<f64> = axis.iter().map(|v| v / an).collect();
            let cos = half_angle.cos();
            let pts = lattice_ball(d, *spacing, *radius, |p| {
                let r = linalg::norm(p);
                r == 0.0 || linalg::dot(p, &unit).abs() >= cos * r * (1.0 - 1e-12)
            })?;
            (pts, Some(*radius))
        }
    };
    if exclude_zero {
        points.retain(|p| p.iter().any(|v| *v != 0.0));
    }
    sort_points(&mut points);
    if points.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("spectrum points must be pairwise distinct"));
    }
    Ok(Spectrum { d, points, radius })
}

fn check_positive(spacing: f64, radius: f64) -> Result<()> {
    if !(spacing > 0.0 && spacing.is_finite() && radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid("spacing and radius must be positive"));
    }
    Ok(())
}

fn sort_points(points: &mut [Vec<f64>]) {
    points.sort_by(|a, b| {
        linalg::norm(a).total_cmp(&linalg::norm(b)).then_with(|| {
            a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
}

/// Upper estimate of `#(ℤ^d ∩ B(0, n))`: the ball volume inflated by the
/// lattice cell diameter.
fn ball_count_bound(d: usize, n: f64) -> f64 {
    let r = n + 0.5 * (d as f64).sqrt();
    // volume of the unit d-ball
    let mut v = [1.0f64, 2.0];
    let mut vol = if d == 0 { 1.0 } else { 2.0 };
    for k in 2..=d {
        vol = v[0] * 2.0 * std::f64::consts::PI / k as f64;
        v = [v[1], vol];
    }
    vol * r.powi(d as i32)
}

fn lattice_ball(d: usize, spacing: f64, radius: f64, keep: impl Fn(&[f64]) -> bool) -> Result<Vec<Vec<f64>>> {
    let n = radius / spacing;
    let bound = ball_count_bound(d, n);
    if bound > 10.0 * MAX_SPECTRUM_POINTS as f64 {
        return Err(Error::SpectrumTooLarge { count: bound as usize, limit: MAX_SPECTRUM_POINTS });
    }
    let r2 = n * n * (1.0 + 1e-12);
    let mut out = Vec::new();
    let mut idx = vec![0i64; d];
    let mut point = vec![0.0; d];
    fn rec(
        axis: usize,
        rem: f64,
        idx: &mut [i64],
        point: &mut [f64],
        spacing: f64,
        keep: &dyn Fn(&[f64]) -> bool,
        out: &mut Vec<Vec<f64>>,
    ) -> Result<()> {
        if axis == idx.len() {
            for (p, &i) in point.iter_mut().zip(idx.iter()) {
                *p = i as f64 * spacing;
            }
            if keep(point) {
                if out.len() >= MAX_SPECTRUM_POINTS {
                    return Err(Error::SpectrumTooLarge { count: out.len() + 1, limit: MAX_SPECTRUM_POINTS });
                }
                out.push(point.to_vec());
            }
            return Ok(());
        }
        let m = rem.max(0.0).sqrt().floor() as i64;
        for i in -m..=m {
            idx[axis] = i;
            rec(axis + 1, rem - (i * i) as f64, idx, point, spacing, keep, out)?;
        }
        Ok(())
    }
    rec(0, r2, &mut idx, &mut point, spacing, &keep, &mut out)?;
    Ok(out)
}
