//! Immersed hypersurfaces as unions of charts, with the multiplicity-weighted
//! surface measure, subsurface selections, windows and a catalog of concrete
//! surfaces.

pub mod catalog;
pub mod chart;
pub mod maps;
pub mod spec;
pub mod window;

use serde::Serialize;

pub use chart::{Chart, ChartMap, DerivativeMode, Interval, ParamBox, Side};
pub use maps::Height;
pub use window::Window;

use crate::error::{Error, Result};
use crate::fourier::{Measure, QuadratureConfig};
use crate::geometry;
use crate::linalg;

/// How chart images overlap for measure purposes.
#[derive(Debug, Clone, PartialEq)]
pub enum OverlapPolicy {
    /// Charts meet only in sets of measure zero; `m(p) = 1`.
    Disjoint,
    /// Listed chart pairs parameterise the same set in full. Partial overlaps
    /// are not representable.
    Declared(Vec<(usize, usize)>),
}

#[derive(Debug, Clone)]
pub struct Surface {
    pub name: String,
    charts: Vec<Chart>,
    overlap: OverlapPolicy,
    multiplicity: Vec<usize>,
}

impl Surface {
    pub fn new(name: impl Into<String>, charts: Vec<Chart>, overlap: OverlapPolicy) -> Result<Self> {
        let first = charts.first().ok_or_else(|| Error::invalid("surface needs at least one chart"))?;
        let d = first.ambient_dim();
        if d < 2 {
            return Err(Error::invalid("ambient dimension must be at least 2"));
        }
        if let Some(c) = charts.iter().find(|c| c.ambient_dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: c.ambient_dim() });
        }
        let multiplicity = multiplicities(charts.len(), &overlap)?;
        Ok(Surface { name: name.into(), charts, overlap, multiplicity })
    }

    pub fn ambient_dim(&self) -> usize {
        self.charts[0].ambient_dim()
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> Result<&Chart> {
        self.charts.get(i).ok_or_else(|| Error::invalid(format!("chart index {i} out of range")))
    }

    pub fn overlap(&self) -> &OverlapPolicy {
        &self.overlap
    }

    /// `m(p)` for points parameterised by chart `i`.
    pub fn multiplicity(&self, chart: usize) -> usize {
        self.multiplicity[chart]
    }

    /// Same surface with every chart switched to finite-difference derivatives.
    pub fn finite_difference(&self) -> Surface {
        Surface {
            name: self.name.clone(),
            charts: self.charts.iter().cloned().map(Chart::finite_difference).collect(),
            overlap: self.overlap.clone(),
            multiplicity: self.multiplicity.clone(),
        }
    }

    pub fn point(&self, chart: usize, u: &[f64]) -> Result<SurfacePoint> {
        let c = self.chart(chart)?;
        if !c.domain().contains(u) {
            return Err(Error::OutsideDomain { chart, u: u.to_vec() });
        }
        Ok(SurfacePoint { chart, u: u.to_vec(), position: c.embed(u), area_element: c.area_element(u) })
    }
}

fn multiplicities(n: usize, overlap: &OverlapPolicy) -> Result<Vec<usize>> {
    let pairs = match overlap {
        OverlapPolicy::Disjoint => return Ok(vec![1; n]),
        OverlapPolicy::Declared(pairs) => pairs,
    };
    // union-find over declared full overlaps
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for &(a, b) in pairs {
        if a >= n || b >= n || a == b {
            return Err(Error::invalid(format!("bad overlap pair ({a}, {b})")));
        }
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        parent[ra] = rb;
    }
    let roots: Vec<usize> = (0..n).map(|i| root(&mut parent, i)).collect();
    Ok(roots.iter().map(|r| roots.iter().filter(|s| *s == r).count()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub chart: usize,
    pub u: Vec<f64>,
    pub position: Vec<f64>,
    pub area_element: f64,
}

/// `m(p)⁻¹ · √det(JᵀJ)` at the point: the density of σ_S in chart parameters.
pub fn surface_measure_weight(surface: &Surface, point: &SurfacePoint) -> Result<f64> {
    let chart = surface.chart(point.chart)?;
    if !chart.domain().contains(&point.u) {
        return Err(Error::OutsideDomain { chart: point.chart, u: point.u.clone() });
    }
    Ok(chart.area_element(&point.u) / surface.multiplicity(point.chart) as f64)
}

/// Mass of σ_S (or of ψ dσ_S), i.e. the transform at ξ = 0.
pub fn total_mass(surface: &Surface, window: Option<&Window>, quadrature: &QuadratureConfig) -> Result<f64> {
    let mut measure = Measure::new(surface).with_quadrature(quadrature.clone());
    if let Some(w) = window {
        measure = measure.with_window(w)?;
    }
    let zero = vec![0.0; surface.ambient_dim()];
    Ok(measure.ft(&zero)?.value.re)
}

/// A subsurface `S' = ⋃ χ_i(V_i)` compactly contained in `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsurfaceSelection {
    boxes: Vec<Option<ParamBox>>,
    pub margin: f64,
}

impl SubsurfaceSelection {
    /// `boxes[i]` is `V_i` as per-axis bounds, or `None` for an empty `V_i`.
    ///
    /// Every side of `V_i` facing a free side of `U_i` must stay at least
    /// `margin` away from it; sides may touch seams and periodic axes may be
    /// selected in full.
    pub fn new(surface: &Surface, boxes: Vec<Option<Vec<(f64, f64)>>>, margin: f64) -> Result<Self> {
        if !(margin > 0.0) {
            return Err(Error::invalid("selection margin must be positive"));
        }
        if boxes.len() != surface.charts().len() {
            return Err(Error::DimensionMismatch { expected: surface.charts().len(), got: boxes.len() });
        }
        let mut out = Vec::with_capacity(boxes.len());
        for (i, b) in boxes.into_iter().enumerate() {
            let Some(bounds) = b else {
                out.push(None);
                continue;
            };
            let domain = surface.chart(i)?.domain();
            if bounds.len() != domain.dim() {
                return Err(Error::DimensionMismatch { expected: domain.dim(), got: bounds.len() });
            }
            let mut axes = Vec::with_capacity(bounds.len());
            for (ax, &(lo, hi)) in domain.axes.iter().zip(&bounds) {
                if !(lo < hi) {
                    return Err(Error::invalid(format!("empty selection interval on chart {i}")));
                }
                if ax.periodic {
                    let full = hi - lo >= ax.width() - 1e-12 * ax.width();
                    axes.push(if full { ax.clone() } else { Interval::free(lo, hi) });
                    continue;
                }
                let lo_gap = lo - ax.lo;
                let hi_gap = ax.hi - hi;
                let tol = 1e-12 * ax.width();
                let lo_ok = if ax.lo_side == Side::Free { lo_gap >= margin - tol } else { lo_gap >= -tol };
                let hi_ok = if ax.hi_side == Side::Free { hi_gap >= margin - tol } else { hi_gap >= -tol };
                if !lo_ok || !hi_ok {
                    return Err(Error::invalid(format!(
                        "selection [{lo}, {hi}] on chart {i} is not compactly contained in [{}, {}] with margin {margin}",
                        ax.lo, ax.hi
                    )));
                }
                let lo_side = if lo_gap.abs() <= tol { ax.lo_side } else { Side::Free };
                let hi_side = if hi_gap.abs() <= tol { ax.hi_side } else { Side::Free };
                axes.push(Interval { lo, hi, periodic: false, lo_side, hi_side });
            }
            out.push(Some(ParamBox::new(axes)));
        }
        Ok(SubsurfaceSelection { boxes: out, margin })
    }

    /// Every chart domain shrunk by `margin` on its free sides.
    pub fn inset(surface: &Surface, margin: f64) -> Result<Self> {
        let boxes = surface
            .charts()
            .iter()
            .map(|c| {
                Some(
                    c.domain()
                        .axes
                        .iter()
                        .map(|a| {
                            if a.periodic {
                                (a.lo, a.hi)
                            } else {
                                let lo = if a.lo_side == Side::Free { a.lo + margin } else { a.lo };
                                let hi = if a.hi_side == Side::Free { a.hi - margin } else { a.hi };
                                (lo, hi)
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        Self::new(surface, boxes, margin)
    }

    pub fn boxes(&self) -> &[Option<ParamBox>] {
        &self.boxes
    }
}

/// Where on a surface to look for normals or stationary points.
#[derive(Debug, Clone, Copy)]
pub enum Region<'a> {
    Whole,
    Selection(&'a SubsurfaceSelection),
    /// `supp ψ`.
    WindowSupport(&'a Window),
    /// `{ψ ≥ floor}`.
    WindowLevel(&'a Window),
}

/// One chart's share of a [`Region`].
#[derive(Debug, Clone)]
pub struct RegionPiece<'a> {
    pub chart: usize,
    pub bounds: ParamBox,
    pub level: Option<&'a Window>,
}

impl RegionPiece<'_> {
    pub fn admits(&self, u: &[f64]) -> bool {
        self.bounds.contains(u) && self.level.map_or(true, |w| w.value(u) >= w.floor * (1.0 - 1e-12))
    }
}

impl<'a> Region<'a> {
    pub fn pieces(&self, surface: &Surface) -> Result<Vec<RegionPiece<'a>>> {
        Ok(match *self {
            Region::Whole => surface
                .charts()
                .iter()
                .enumerate()
                .map(|(i, c)| RegionPiece { chart: i, bounds: c.domain().clone(), level: None })
                .collect(),
            Region::Selection(sel) => sel
                .boxes()
                .iter()
                .enumerate()
                .filter_map(|(i, b)| b.clone().map(|bounds| RegionPiece { chart: i, bounds, level: None }))
                .collect(),
            Region::WindowSupport(w) | Region::WindowLevel(w) => {
                check_window(surface, w)?;
                let level = matches!(self, Region::WindowLevel(_)).then_some(w);
                vec![RegionPiece { chart: w.chart, bounds: w.support_box(), level }]
            }
        })
    }
}

pub(crate) fn check_window(surface: &Surface, w: &Window) -> Result<()> {
    let domain = surface.chart(w.chart)?.domain();
    if w.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: w.dim() });
    }
    for (ax, &(lo, hi)) in domain.axes.iter().zip(&w.support) {
        let tol = 1e-12 * ax.width();
        if lo < ax.lo - tol || hi > ax.hi + tol {
            return Err(Error::invalid(format!(
                "window support [{lo}, {hi}] leaves chart domain [{}, {}]",
                ax.lo, ax.hi
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ValidationThresholds {
    pub min_singular_value: f64,
    pub min_curvature: f64,
}

impl Default for ValidationThresholds {
    fn default() -> Self {
        ValidationThresholds { min_singular_value: 1e-8, min_curvature: 1e-8 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationFailure {
    pub u: Vec<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub chart: usize,
    pub samples: usize,
    pub min_singular_value: f64,
    pub min_abs_curvature: f64,
    pub max_abs_curvature: f64,
    pub passed: bool,
    pub failure: Option<ValidationFailure>,
}

impl ValidationReport {
    /// Turns a failed report into [`Error::ValidationFailed`].
    pub fn check(self) -> Result<Self> {
        match &self.failure {
            Some(f) => Err(Error::ValidationFailed { chart: self.chart, u: f.u.clone(), reason: f.reason.clone() }),
            None => Ok(self),
        }
    }
}

/// Checks immersion and nonvanishing curvature on the cell-centre grid with
/// `samples_per_axis` cells per axis.
pub fn validate_chart(chart: &Chart, samples_per_axis: usize) -> Result<ValidationReport> {
    validate_chart_with(chart, 0, samples_per_axis, ValidationThresholds::default())
}

pub fn validate_chart_with(
    chart: &Chart,
    index: usize,
    samples_per_axis: usize,
    thresholds: ValidationThresholds,
) -> Result<ValidationReport> {
    if samples_per_axis < 2 {
        return Err(Error::invalid("validation needs at least 2 samples per axis"));
    }
    let d = chart.ambient_dim();
    let m = d - 1;
    let mut report = ValidationReport {
        chart: index,
        samples: 0,
        min_singular_value: f64::INFINITY,
        min_abs_curvature: f64::INFINITY,
        max_abs_curvature: 0.0,
        passed: true,
        failure: None,
    };
    let mut worst_sv: Option<Vec<f64>> = None;
    let mut worst_k: Option<Vec<f64>> = None;
    let mut g = vec![0.0; m * m];
    for u in chart.domain().midpoint_grid(samples_per_axis) {
        report.samples += 1;
        let jac = chart.jacobian(&u);
        linalg::gram(d, m, &jac, &mut g);
        let sv = linalg::sym_eigenvalues(m, &g)[0].max(0.0).sqrt();
        if !(sv >= report.min_singular_value) {
            report.min_singular_value = sv;
            worst_sv = Some(u.clone());
        }
        let k = geometry::shape::gaussian_curvature(chart, &u).map(f64::abs).unwrap_or(0.0);
        if !(k >= report.min_abs_curvature) {
            report.min_abs_curvature = k;
            worst_k = Some(u.clone());
        }
        if k.is_finite() {
            report.max_abs_curvature = report.max_abs_curvature.max(k);
        }
    }
    if !(report.min_singular_value > thresholds.min_singular_value) {
        report.passed = false;
        report.failure = Some(ValidationFailure {
            u: worst_sv.unwrap_or_default(),
            reason: format!("Jacobian is rank deficient (min singular value {:e})", report.min_singular_value),
        });
    } else if !(report.min_abs_curvature > thresholds.min_curvature) {
        report.passed = false;
        report.failure = Some(ValidationFailure {
            u: worst_k.unwrap_or_default(),
            reason: format!("Gaussian curvature vanishes (min |K| {:e})", report.min_abs_curvature),
        });
    }
    Ok(report)
}

/// Validates every chart of `surface`.
pub fn validate_surface(surface: &Surface, samples_per_axis: usize) -> Result<Vec<ValidationReport>> {
    surface
        .charts()
        .iter()
        .enumerate()
        .map(|(i, c)| validate_chart_with(c, i, samples_per_axis, ValidationThresholds::default()))
        .collect()
}
