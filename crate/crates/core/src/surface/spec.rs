//! JSON descriptions of catalog surfaces and windows:
//! `{"surface": {"kind": "...", "params": {...}}, "window": {...}}`.

use serde::{Deserialize, Serialize};

use super::catalog::{self, HemispherePair};
use super::maps::Height;
use super::window::Window;
use super::{check_window, Surface};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    Circle {
        #[serde(default = "one")]
        r: f64,
    },
    Sphere {
        d: usize,
        #[serde(default)]
        semi_axes: Option<Vec<f64>>,
    },
    CapGraph {
        d: usize,
        height: HeightSpec,
        base: Vec<(f64, f64)>,
    },
    SphericalCap {
        d: usize,
        half_angle: f64,
    },
    /// Builds the upper half; [`SurfaceSpec::build_hemisphere`] gives both.
    Hemisphere {
        d: usize,
        #[serde(default)]
        semi_axes: Option<Vec<f64>>,
    },
    Figure1Curve,
    RevolutionSurface {
        d: usize,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum HeightSpec {
    SphereCap { radius: f64 },
    Quadratic { coeffs: Vec<f64> },
}

impl From<&HeightSpec> for Height {
    fn from(h: &HeightSpec) -> Self {
        match h {
            HeightSpec::SphereCap { radius } => Height::SphereCap { radius: *radius },
            HeightSpec::Quadratic { coeffs } => Height::Quadratic { coeffs: coeffs.clone() },
        }
    }
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<Surface> {
        match self {
            SurfaceSpec::Circle { r } => catalog::circle(*r),
            SurfaceSpec::Sphere { d, semi_axes } => match semi_axes {
                None => catalog::sphere(*d),
                Some(a) => {
                    check_len(*d, a)?;
                    catalog::ellipsoid(a)
                }
            },
            SurfaceSpec::CapGraph { d, height, base } => catalog::cap_graph(*d, height.into(), base),
            SurfaceSpec::SphericalCap { d, half_angle } => catalog::spherical_cap(*d, *half_angle),
            SurfaceSpec::Hemisphere { .. } => Ok(self.build_hemisphere()?.expect("hemisphere spec").upper),
            SurfaceSpec::Figure1Curve => catalog::figure1_curve(),
            SurfaceSpec::RevolutionSurface { d } => catalog::revolution_surface(*d),
        }
    }

    /// The `(S, S₊)` pair for hemisphere specs, `None` for other kinds.
    pub fn build_hemisphere(&self) -> Result<Option<HemispherePair>> {
        let SurfaceSpec::Hemisphere { d, semi_axes } = self else {
            return Ok(None);
        };
        let pair = match semi_axes {
            None => catalog::hemisphere(*d)?,
            Some(a) => {
                check_len(*d, a)?;
                catalog::hemi_ellipsoid(a)?
            }
        };
        Ok(Some(pair))
    }
}

fn check_len(d: usize, a: &[f64]) -> Result<()> {
    if a.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: a.len() });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub chart: usize,
    pub support: Vec<(f64, f64)>,
    #[serde(default)]
    pub plateau: f64,
    #[serde(default = "half")]
    pub floor: f64,
}

fn half() -> f64 {
    0.5
}

impl WindowSpec {
    pub fn build(&self, surface: &Surface) -> Result<Window> {
        let w = Window::new(self.chart, self.support.clone(), self.plateau, self.floor)?;
        check_window(surface, &w)?;
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub window: Option<WindowSpec>,
}

impl SurfaceDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<(Surface, Option<Window>)> {
        let surface = self.surface.build()?;
        let window = self.window.as_ref().map(|w| w.build(&surface)).transpose()?;
        Ok((surface, window))
    }
}
