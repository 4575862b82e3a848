//! JSON experiment configurations.

use std::path::Path;

use anyhow::{bail, Context, Result};
use curveft::fourier::linspace;
use curveft::{PhaseOptions, QuadratureConfig, SpectrumSpec, SurfaceSpec, WindowSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One experiment. Only the section of the command being run is required.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub surface: Option<SurfaceSpec>,
    #[serde(default)]
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub seed: u64,
    /// Cells per axis for chart validation.
    #[serde(default = "default_validation_samples")]
    pub validation_samples: usize,
    #[serde(default)]
    pub ft_scan: Option<FtScanParams>,
    #[serde(default)]
    pub sp_compare: Option<SpCompareParams>,
    #[serde(default)]
    pub hemisphere: Option<HemisphereParams>,
    #[serde(default)]
    pub coverage: Option<CoverageParams>,
    #[serde(default)]
    pub frame: Option<FrameParams>,
}

fn default_validation_samples() -> usize {
    64
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed experiment config")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// SHA-256 of the canonical serialisation.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(canonical))
    }

    pub fn surface(&self) -> Result<&SurfaceSpec> {
        self.surface.as_ref().context("config has no \"surface\" section")
    }

    pub fn section<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T> {
        value.as_ref().with_context(|| format!("config has no \"{name}\" section"))
    }
}

/// Evenly or logarithmically spaced magnitudes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

impl Range {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            bail!("range needs a positive count and finite ends");
        }
        if !self.log {
            return Ok(linspace(self.start, self.stop, self.count));
        }
        if !(self.start > 0.0 && self.stop > 0.0) {
            bail!("log-spaced ranges need positive ends");
        }
        Ok(linspace(self.start.ln(), self.stop.ln(), self.count).into_iter().map(f64::exp).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FrequencySpec {
    Explicit {
        points: Vec<Vec<f64>>,
    },
    Ray {
        direction: Vec<f64>,
        magnitudes: Range,
    },
    /// Uniform directions with magnitudes uniform in `[min_radius, max_radius]`,
    /// drawn from the config seed.
    Random {
        count: usize,
        min_radius: f64,
        max_radius: f64,
    },
}

impl FrequencySpec {
    pub fn generate(&self, d: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        match self {
            FrequencySpec::Explicit { points } => {
                if let Some(p) = points.iter().find(|p| p.len() != d) {
                    bail!("frequency {p:?} does not have {d} coordinates");
                }
                Ok(points.clone())
            }
            FrequencySpec::Ray { direction, magnitudes } => {
                if direction.len() != d {
                    bail!("ray direction must have {d} coordinates");
                }
                Ok(curveft::fourier::ray(direction, &magnitudes.values()?)?)
            }
            FrequencySpec::Random { count, min_radius, max_radius } => {
                if !(0.0 <= *min_radius && min_radius <= max_radius && max_radius.is_finite()) {
                    bail!("random frequencies need 0 <= min_radius <= max_radius");
                }
                Ok(random_frequencies(d, *count, *min_radius, *max_radius, seed))
            }
        }
    }
}

/// Seeded frequencies with uniform directions and uniform magnitudes.
pub fn random_frequencies(d: usize, count: usize, min_radius: f64, max_radius: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dir = loop {
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 1e-3 && n <= 1.0 {
                    break v.into_iter().map(|x| x / n).collect::<Vec<f64>>();
                }
            };
            let r = if max_radius > min_radius { rng.random_range(min_radius..=max_radius) } else { min_radius };
            dir.into_iter().map(|x| r * x).collect()
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FtScanParams {
    pub frequencies: FrequencySpec,
    /// Fit the envelope exponent and zero offsets (ray scans only).
    #[serde(default)]
    pub fit: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpCompareParams {
    pub direction: Vec<f64>,
    pub magnitudes: Range,
    #[serde(default)]
    pub phase: PhaseOptions,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HemisphereParams {
    pub d: usize,
    pub magnitudes: Range,
    /// Frequencies for the `2 Re σ̂₊ = σ̂` check; needs a hemisphere surface.
    #[serde(default)]
    pub symmetry: Option<FrequencySpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Whole,
    WindowSupport,
    WindowLevel,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageParams {
    pub resolution: f64,
    #[serde(default = "default_angle_tol")]
    pub angular_tol: f64,
    #[serde(default = "whole")]
    pub region: RegionKind,
}

fn default_angle_tol() -> f64 {
    1e-3
}

fn whole() -> RegionKind {
    RegionKind::Whole
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameParams {
    pub spectrum: SpectrumSpec,
    #[serde(default)]
    pub exclude_zero: bool,
    /// Radii for the divergence partial sums.
    #[serde(default)]
    pub divergence_radii: Option<Vec<f64>>,
    /// Grid for translated energies.
    #[serde(default)]
    pub energy_grid: Option<FrequencySpec>,
    /// Partition of the spectrum by the normal cone of this region.
    #[serde(default)]
    pub cone: Option<ConeParams>,
    /// Test frequencies `H` for the frame-bound estimate.
    #[serde(default)]
    pub test_grid: Option<FrequencySpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeParams {
    #[serde(default = "whole")]
    pub region: RegionKind,
    #[serde(default = "default_angle_tol")]
    pub angular_tol: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_defaults() {
        let c = ExperimentConfig::from_json(r#"{"surface": {"kind": "circle", "params": {}}}"#).unwrap();
        assert_eq!(c.seed, 0);
        assert_eq!(c.quadrature, QuadratureConfig::default());
        assert!(c.ft_scan.is_none());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"surface": {"kind": "figure1_curve"}, "sed": 1}"#).is_err());
        let bad = r#"{"ft_scan": {"frequencies": {"kind": "explicit", "points": []}, "extra": true}}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = ExperimentConfig::from_json(r#"{"surface": {"kind": "figure1_curve"}}"#).unwrap();
        let b = ExperimentConfig::from_json("{\n  \"surface\" : { \"kind\" : \"figure1_curve\" }\n}").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let c = ExperimentConfig { seed: 1, ..a.clone() };
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn random_frequencies_are_seeded() {
        let a = random_frequencies(3, 10, 1.0, 2.0, 7);
        assert_eq!(a, random_frequencies(3, 10, 1.0, 2.0, 7));
        assert_ne!(a, random_frequencies(3, 10, 1.0, 2.0, 8));
        for v in &a {
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((1.0..=2.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn log_ranges() {
        let r = Range { start: 10.0, stop: 100.0, count: 3, log: true }.values().unwrap();
        assert!((r[1] - 10f64.powf(1.5)).abs() < 1e-9);
        assert!(Range { start: 0.0, stop: 1.0, count: 3, log: true }.values().is_err());
    }
}
