//! Leading-order stationary-phase approximation of `(ψ dσ)^(ξ)`.
//!
//! Each point `p` whose normal is parallel to `±ξ` contributes
//! `e^{−2πi p·ξ} e^{−πi s/4} |K(p)|^{−1/2} ψ(p) m(p)⁻¹ |ξ|^{−(d−1)/2}`, with
//! the second fundamental form (and so the signature `s`) taken for the
//! normal pointing along `+ξ`. For the unit sphere in ℝ³ the two poles give
//! exactly `2 sin(2π|ξ|)/|ξ|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{NormalCone, SearchOptions, ShapeData};
use crate::linalg;
use crate::surface::{check_window, Region, Surface, Window};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhaseOptions {
    /// Smallest `|ξ|` accepted.
    pub xi_min: f64,
    /// Stationary points with `|K|` below this are rejected as degenerate.
    pub min_curvature: f64,
    pub seeds_per_axis: usize,
}

impl Default for PhaseOptions {
    fn default() -> Self {
        PhaseOptions { xi_min: 5.0, min_curvature: 1e-8, seeds_per_axis: 32 }
    }
}

/// One stationary point and its leading-order term at a given `ξ`.
#[derive(Debug, Clone, Serialize)]
pub struct StationaryTerm {
    pub shape: ShapeData,
    pub window_value: f64,
    /// `|K|^{1/2}`.
    pub abs_det_sqrt: f64,
    pub signature: i32,
    pub term: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryData {
    pub xi: Vec<f64>,
    pub points: Vec<StationaryTerm>,
    pub value: Complex64,
    /// More than one stationary point inside the window support; the
    /// single-point picture for small windows does not apply.
    pub non_unique: bool,
}

/// Stationary-phase evaluator with cached Gauss-map samples.
pub struct StationaryPhase<'a> {
    surface: &'a Surface,
    window: Option<&'a Window>,
    cone: NormalCone<'a>,
    opts: PhaseOptions,
}

/// Stationary points for one direction, reusable along the ray.
#[derive(Debug, Clone, Serialize)]
pub struct RayPoints {
    pub direction: Vec<f64>,
    pub points: Vec<(ShapeData, f64)>,
}

impl<'a> StationaryPhase<'a> {
    pub fn new(surface: &'a Surface, window: Option<&'a Window>, opts: PhaseOptions) -> Result<Self> {
        let region = match window {
            Some(w) => {
                check_window(surface, w)?;
                Region::WindowSupport(w)
            }
            None => Region::Whole,
        };
        let search = SearchOptions { seeds_per_axis: opts.seeds_per_axis, ..SearchOptions::default() };
        let cone = NormalCone::new(surface, region, search)?;
        Ok(StationaryPhase { surface, window, cone, opts })
    }

    /// Nondegenerate stationary points for `direction`, with weights
    /// `ψ(p) / m(p)`.
    pub fn ray_points(&self, direction: &[f64]) -> Result<RayPoints> {
        let n = linalg::norm(direction);
        let e: Vec<f64> = direction.iter().map(|v| v / n).collect();
        let shapes = self.cone.stationary_points(&e)?;
        let mut points = Vec::with_capacity(shapes.len());
        for s in shapes {
            if !(s.gaussian_curvature.abs() >= self.opts.min_curvature) {
                return Err(Error::DegenerateStationaryPoint {
                    chart: s.point.chart,
                    u: s.point.u.clone(),
                    curvature: s.gaussian_curvature,
                });
            }
            let psi = self.window.map_or(1.0, |w| w.value(&s.point.u));
            let weight = psi / self.surface.multiplicity(s.point.chart) as f64;
            points.push((s, weight));
        }
        Ok(RayPoints { direction: e, points })
    }

    pub fn evaluate(&self, xi: &[f64]) -> Result<StationaryData> {
        let d = self.surface.ambient_dim();
        if xi.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: xi.len() });
        }
        let r = linalg::norm(xi);
        if !(r >= self.opts.xi_min) {
            return Err(Error::invalid(format!("|xi| = {r} is below the asymptotic threshold {}", self.opts.xi_min)));
        }
        let ray = self.ray_points(xi)?;
        Ok(self.evaluate_on_ray(&ray, r))
    }

    /// Leading term at `ξ = t · ray.direction`.
    pub fn evaluate_on_ray(&self, ray: &RayPoints, t: f64) -> StationaryData {
        let d = self.surface.ambient_dim();
        let xi: Vec<f64> = ray.direction.iter().map(|v| t * v).collect();
        let decay = t.powf(-0.5 * (d as f64 - 1.0));
        let mut value = Complex64::new(0.0, 0.0);
        let mut in_window = 0;
        let points: Vec<StationaryTerm> = ray
            .points
            .iter()
            .map(|(s, weight)| {
                let k = s.gaussian_curvature.abs().sqrt();
                let phase = -2.0 * PI * linalg::dot(&s.point.position, &xi) - PI * s.signature as f64 / 4.0;
                let term = Complex64::from_polar(weight * decay / k, phase);
                value += term;
                if *weight > 0.0 {
                    in_window += 1;
                }
                let window_value = self.window.map_or(1.0, |w| w.value(&s.point.u));
                StationaryTerm { shape: s.clone(), window_value, abs_det_sqrt: k, signature: s.signature, term }
            })
            .collect();
        StationaryData { xi, points, value, non_unique: self.window.is_some() && in_window > 1 }
    }
}

/// One-shot leading-term evaluation.
pub fn stationary_phase_eval(
    surface: &Surface,
    window: Option<&Window>,
    xi: &[f64],
    opts: &PhaseOptions,
) -> Result<StationaryData> {
    StationaryPhase::new(surface, window, *opts)?.evaluate(xi)
}
