use rayon::prelude::*;
use serde::Serialize;

use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::fourier::{FourierCache, Measure, StationaryPhase};
use crate::geometry::NormalCone;
use crate::linalg;

#[derive(Debug, Clone, Serialize)]
pub struct EnergySample {
    pub xi: Vec<f64>,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub samples: Vec<EnergySample>,
    pub min: f64,
    pub max: f64,
}

/// `E(ξ) = Σ_λ |μ̂(λ − ξ)|²` on each grid point.
pub fn energy_scan(
    measure: &Measure<'_>,
    cache: &FourierCache,
    spectrum: &Spectrum,
    grid: &[Vec<f64>],
) -> Result<EnergyReport> {
    let mut samples = Vec::with_capacity(grid.len());
    for xi in grid {
        if xi.len() != spectrum.d {
            return Err(Error::DimensionMismatch { expected: spectrum.d, got: xi.len() });
        }
        let diffs: Vec<Vec<f64>> =
            spectrum.points.iter().map(|l| l.iter().zip(xi).map(|(a, b)| a - b).collect()).collect();
        let values = cache.values(measure, &diffs)?;
        let energy = values.iter().map(|v| v.norm_sqr()).sum();
        samples.push(EnergySample { xi: xi.clone(), energy });
    }
    let min = samples.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min);
    let max = samples.iter().map(|s| s.energy).fold(0.0, f64::max);
    Ok(EnergyReport { samples, min, max })
}

/// Angle below which membership counts as exact.
pub const STRICT_ANGLE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct ConePartition {
    pub tolerance: f64,
    /// `Λ ∩ 𝒞` at the given tolerance; `λ = 0` always belongs.
    pub inside: Vec<Vec<f64>>,
    pub outside: Vec<Vec<f64>>,
    /// Size of `Λ ∩ 𝒞` when membership requires an angle below [`STRICT_ANGLE`].
    pub strict_inside: usize,
}

/// Splits `Λ` by membership in the normal cone of the sampled region.
pub fn cone_filter(spectrum: &Spectrum, cone: &NormalCone<'_>, angular_tol: f64) -> Result<ConePartition> {
    let angles: Vec<f64> = spectrum
        .points
        .par_iter()
        .map(|l| if linalg::norm(l) == 0.0 { Ok(0.0) } else { cone.nearest(l).map(|n| n.angle) })
        .collect::<Result<_>>()?;
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (l, a) in spectrum.points.iter().zip(&angles) {
        if *a <= angular_tol {
            inside.push(l.clone());
        } else {
            outside.push(l.clone());
        }
    }
    let strict_inside = angles.iter().filter(|a| **a <= STRICT_ANGLE).count();
    Ok(ConePartition { tolerance: angular_tol, inside, outside, strict_inside })
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundSample {
    pub lambda: Vec<f64>,
    pub norm: f64,
    /// `|μ̂(λ)|² |λ|^{d−1}`.
    pub scaled_energy: f64,
    /// The same quantity for the stationary-phase leading term.
    pub predicted: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OffConeSample {
    pub lambda: Vec<f64>,
    pub scaled_energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    pub samples: Vec<LowerBoundSample>,
    pub off_cone: Vec<OffConeSample>,
    pub min_scaled_energy: f64,
    pub min_ratio: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Checks `|ψ̂dσ(λ)|² |λ|^{d−1} ≥ threshold` over the sampled `λ` whose
/// direction is a normal of `{ψ ≥ floor}` (`level_cone`). Other `λ` are
/// reported separately.
pub fn cone_lower_bound_check(
    measure: &Measure<'_>,
    phase: &StationaryPhase<'_>,
    level_cone: &NormalCone<'_>,
    lambdas: &[Vec<f64>],
    angular_tol: f64,
    threshold: f64,
) -> Result<LowerBoundReport> {
    let d = measure.surface().ambient_dim();
    let mut samples = Vec::new();
    let mut off_cone = Vec::new();
    for l in lambdas {
        let norm = linalg::norm(l);
        let scale = norm.powf(d as f64 - 1.0);
        let value = measure.ft(l)?.value;
        let scaled_energy = value.norm_sqr() * scale;
        if level_cone.nearest(l)?.angle > angular_tol {
            off_cone.push(OffConeSample { lambda: l.clone(), scaled_energy });
            continue;
        }
        let predicted = phase.evaluate(l)?.value.norm_sqr() * scale;
        samples.push(LowerBoundSample {
            lambda: l.clone(),
            norm,
            scaled_energy,
            predicted,
            ratio: scaled_energy / predicted,
        });
    }
    let min_scaled_energy = samples.iter().map(|s| s.scaled_energy).fold(f64::INFINITY, f64::min);
    let min_ratio = samples.iter().map(|s| s.ratio).fold(f64::INFINITY, f64::min);
    let passed = !samples.is_empty() && min_scaled_energy >= threshold;
    Ok(LowerBoundReport { samples, off_cone, min_scaled_energy, min_ratio, threshold, passed })
}
