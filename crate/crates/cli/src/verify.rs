//! The acceptance suite: one check per criterion, each reporting its
//! measured values against pinned tolerances.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use anyhow::{ensure, Result};
use curveft::fourier::{axis_integral, decay_phase_fit, linspace, ray};
use curveft::frame::divergence_partial_sum;
use curveft::geometry::{coverage_with, gaussian_curvature, NormalCone, SearchOptions};
use curveft::reference::{bessel_j0, sphere3_ft};
use curveft::surface::Height;
use curveft::{
    asymptotic_compare, catalog, cone_lower_bound_check, curvature_closed_form_revolution, frame_bounds_estimate,
    generate_spectrum, hemisphere_axis_profile, hemisphere_symmetry_check, Complex64, FourierCache, Measure,
    PhaseOptions, QuadratureConfig, Region, SpectrumSpec, StationaryPhase, Window,
};
use serde::Serialize;

use crate::config::random_frequencies;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fast,
    Full,
}

impl std::str::FromStr for Suite {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            other => anyhow::bail!("unknown suite {other:?} (expected \"fast\" or \"full\")"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

/// Checks `(id, name, limit in seconds)`.
pub const CRITERIA: [(usize, &str, f64); 11] = [
    (1, "revolution-surface curvature", 5.0),
    (2, "circle transform vs Bessel", 10.0),
    (3, "sphere transform vs closed form", 60.0),
    (4, "decay exponent and zero offsets", 600.0),
    (5, "hemisphere symmetry identity", 600.0),
    (6, "hemisphere axis decay", 600.0),
    (7, "stationary-phase remainder order", 600.0),
    (8, "cone lower bound", 600.0),
    (9, "divergence/convergence dichotomy", 600.0),
    (10, "frame-bound trends", 300.0),
    (11, "normal-cone coverage", 600.0),
];

/// Outcome of one check before timing is attached.
struct Check {
    passed: bool,
    detail: String,
    metrics: BTreeMap<String, f64>,
}

impl Check {
    fn new() -> Self {
        Check { passed: true, detail: String::new(), metrics: BTreeMap::new() }
    }

    /// Records `name = value` and whether it satisfies `ok`.
    fn metric(&mut self, name: &str, value: f64, ok: bool, bound: &str) {
        self.metrics.insert(name.to_string(), value);
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&format!("{name} = {value:.4e} ({bound}{})", if ok { "" } else { ", violated" }));
        self.passed &= ok;
    }
}

pub fn run_criterion(id: usize, suite: Suite) -> CriterionResult {
    let (_, name, limit) = CRITERIA[id - 1];
    let start = Instant::now();
    let outcome = match id {
        1 => curvature(),
        2 => circle(suite),
        3 => sphere(suite),
        4 => decay_phase(suite),
        5 => symmetry(suite),
        6 => hemisphere_axis(suite),
        7 => remainder_order(),
        8 => cone_bound(suite),
        9 => dichotomy(),
        10 => frame_trends(suite),
        11 => coverage(suite),
        _ => unreachable!("criteria are numbered 1..=11"),
    };
    let seconds = start.elapsed().as_secs_f64();
    let mut c =
        outcome.unwrap_or_else(|e| Check { passed: false, detail: format!("error: {e:#}"), metrics: BTreeMap::new() });
    if seconds > limit {
        c.passed = false;
        c.detail.push_str(&format!("; runtime above {limit} s"));
    }
    CriterionResult { id, name, passed: c.passed, detail: c.detail, metrics: c.metrics, seconds }
}

pub fn run_suite(suite: Suite, mut progress: impl FnMut(&CriterionResult)) -> SuiteReport {
    let criteria: Vec<CriterionResult> = (1..=CRITERIA.len())
        .map(|id| {
            let r = run_criterion(id, suite);
            progress(&r);
            r
        })
        .collect();
    SuiteReport { suite, passed: criteria.iter().all(|c| c.passed), criteria }
}

fn quadrature() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn curvature() -> Result<Check> {
    let mut c = Check::new();
    for d in 2..=4 {
        let s = catalog::revolution_surface(d)?;
        let chart = &s.charts()[0];
        let mut worst: f64 = 0.0;
        for i in 0..256 {
            let theta = 2.0 * PI * i as f64 / 256.0;
            let mut u = vec![theta];
            u.extend([1.1, 0.4].iter().take(d - 2));
            let k = gaussian_curvature(chart, &u).map(f64::abs).unwrap_or(f64::NAN);
            let want = curvature_closed_form_revolution(theta, d);
            let rel = (k - want).abs() / want;
            worst = if rel.is_nan() { f64::INFINITY } else { worst.max(rel) };
        }
        c.metric(&format!("max_rel_error_d{d}"), worst, worst <= 1e-8, "<= 1e-8");
    }
    Ok(c)
}

fn circle(suite: Suite) -> Result<Check> {
    let count = match suite {
        Suite::Fast => 40,
        Suite::Full => 100,
    };
    let s = catalog::circle(1.0)?;
    let m = Measure::new(&s);
    let freqs = random_frequencies(2, count, 0.0, 100.0, 2);
    let mut worst: f64 = 0.0;
    for xi in &freqs {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let want = 2.0 * PI * bessel_j0(2.0 * PI * r);
        let err = (m.ft(xi)?.value - Complex64::new(want, 0.0)).norm();
        worst = worst.max(err);
    }
    let mut c = Check::new();
    c.metric("max_abs_error", worst, worst <= 1e-8, "<= 1e-8");
    Ok(c)
}

fn sphere(suite: Suite) -> Result<Check> {
    let count = match suite {
        Suite::Fast => 8,
        Suite::Full => 20,
    };
    let s = catalog::sphere(3)?;
    let m = Measure::new(&s);
    let mut freqs = random_frequencies(3, count - 1, 0.0, 50.0, 3);
    freqs.push(vec![0.0, 0.0, 50.0]);
    let mut worst: f64 = 0.0;
    for xi in &freqs {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let err = (m.ft(xi)?.value - Complex64::new(sphere3_ft(r), 0.0)).norm();
        worst = worst.max(err);
    }
    let mut c = Check::new();
    c.metric("max_abs_error", worst, worst <= 1e-7, "<= 1e-7");
    Ok(c)
}

/// Clusters of `per` samples spaced `step` apart, starting at each centre.
fn clusters(starts: &[f64], per: usize, step: f64) -> Vec<f64> {
    starts.iter().flat_map(|&t0| (0..per).map(move |k| t0 + step * k as f64)).collect()
}

fn decay_phase(suite: Suite) -> Result<Check> {
    let mut c = Check::new();
    for d in [2usize, 3] {
        let starts: Vec<f64> = match (suite, d) {
            (Suite::Full, 2) => linspace(10.0, 49.0, 14),
            (Suite::Full, _) => vec![10.0, 15.0, 20.0, 30.0, 40.0, 49.0],
            (Suite::Fast, 2) => vec![10.0, 20.0, 30.0, 40.0, 49.0],
            (Suite::Fast, _) => vec![10.0, 25.0, 49.0],
        };
        let ts = clusters(&starts, 21, 0.05);
        let s = catalog::sphere(d)?;
        let m = Measure::new(&s);
        let mut dir = vec![0.3; d];
        dir[d - 1] = 1.0;
        let values = ray(&dir, &ts)?.iter().map(|xi| m.ft(xi).map(|v| v.value)).collect::<curveft::Result<Vec<_>>>()?;
        let r = decay_phase_fit(&ts, &values, d)?;
        let want = -0.5 * (d as f64 - 1.0);
        c.metric(&format!("slope_d{d}"), r.fit.slope, (r.fit.slope - want).abs() <= 0.05, &format!("{want} ± 0.05"));
        c.metric(&format!("max_zero_offset_error_d{d}"), r.max_offset_error, r.max_offset_error <= 0.01, "<= 0.01");
        ensure!(r.zeros.len() >= starts.len(), "only {} zeros found for d = {d}", r.zeros.len());
    }
    Ok(c)
}

fn symmetry(suite: Suite) -> Result<Check> {
    let max_radius = match suite {
        Suite::Fast => 6.0,
        Suite::Full => 10.0,
    };
    let mut c = Check::new();
    for d in [2usize, 3] {
        let pair = catalog::hemisphere(d)?;
        let freqs = random_frequencies(d, 50, 0.5, max_radius, 5 + d as u64);
        let r = hemisphere_symmetry_check(&pair, &freqs, &quadrature())?;
        c.metric(&format!("max_deviation_d{d}"), r.max_deviation, r.max_deviation <= 1e-7, "<= 1e-7");
    }
    Ok(c)
}

fn hemisphere_axis(suite: Suite) -> Result<Check> {
    let count = match suite {
        Suite::Fast => 721,
        Suite::Full => 1801,
    };
    let ts = linspace(10.0, 100.0, count);
    let r = hemisphere_axis_profile(4, &ts)?;
    let mut c = Check::new();
    c.metric("slope", r.fit.slope, (r.fit.slope + 1.0).abs() <= 0.05, "-1 ± 0.05");
    c.metric("scaled_min", r.scaled_min, r.scaled_min > 0.0, "> 0");
    c.metric("scaled_max", r.scaled_max, r.scaled_max < 10.0 * r.scaled_min, "< 10 scaled_min");
    let full = r.full_sphere_fit.map_or(f64::NAN, |f| f.slope);
    c.metric("full_sphere_slope", full, (full + 1.5).abs() <= 0.1, "-1.5 ± 0.1");
    // quadrature cross-check of the one-dimensional reduction at one point
    let pair = catalog::hemisphere(4)?;
    let xi = [0.0, 0.0, 0.0, 3.0];
    let q = Measure::new(&pair.upper).ft(&xi)?.value;
    let a = axis_integral(4, 3.0, 1e-14)? * curveft::fourier::sphere_area(2);
    c.metric("reduction_mismatch", (q - a).norm(), (q - a).norm() <= 1e-8, "<= 1e-8");
    Ok(c)
}

/// Sphere with a bump window on the chart around `e_d`.
fn cap_window(d: usize, half_width: f64, floor: f64) -> Result<(curveft::Surface, Window)> {
    let s = catalog::sphere(d)?;
    let w = Window::new(2 * (d - 1), vec![(-half_width, half_width); d - 1], 0.0, floor)?;
    Ok((s, w))
}

fn remainder_order() -> Result<Check> {
    let mut c = Check::new();
    let ts = {
        let logs = linspace(10f64.ln(), 100f64.ln(), 24);
        logs.into_iter().map(f64::exp).collect::<Vec<_>>()
    };
    for d in [2usize, 3] {
        let (s, w) = cap_window(d, 0.3, 0.5)?;
        let m = Measure::new(&s).with_window(&w)?;
        let sp = StationaryPhase::new(&s, Some(&w), PhaseOptions::default())?;
        let mut e = vec![0.0; d];
        e[d - 1] = 1.0;
        let r = asymptotic_compare(&m, &sp, &e, &ts)?;
        let slope = r.fit.map_or(f64::NAN, |f| f.slope);
        c.metric(&format!("slope_d{d}"), slope, slope <= -0.8, "<= -0.8");
    }
    Ok(c)
}

fn cone_bound(suite: Suite) -> Result<Check> {
    let per_direction = match suite {
        Suite::Fast => 4,
        Suite::Full => 8,
    };
    let mut c = Check::new();
    for d in [2usize, 3] {
        let (s, w) = cap_window(d, 0.3, 0.5)?;
        let chart = &s.charts()[w.chart];
        let m = Measure::new(&s).with_window(&w)?;
        let sp = StationaryPhase::new(&s, Some(&w), PhaseOptions::default())?;
        let level = NormalCone::new(&s, Region::WindowLevel(&w), SearchOptions::default())?;
        // normals at the centre and at points inside {ψ ≥ 1/2}
        let mut params = vec![vec![0.0; d - 1]];
        for a in 0..d - 1 {
            let mut u = vec![0.0; d - 1];
            u[a] = 0.1;
            params.push(u);
        }
        let mags: Vec<f64> = linspace(10f64.ln(), 100f64.ln(), per_direction).into_iter().map(f64::exp).collect();
        let mut lambdas = Vec::new();
        for u in &params {
            let n = chart.unit_normal(u).ok_or_else(|| anyhow::anyhow!("degenerate chart point"))?;
            for t in &mags {
                lambdas.push(n.iter().map(|v| t * v).collect::<Vec<f64>>());
            }
        }
        let probe = cone_lower_bound_check(&m, &sp, &level, &lambdas, 1e-3, 0.0)?;
        ensure!(probe.samples.len() == lambdas.len(), "a sampled frequency fell outside the level cone");
        let predicted = probe.samples.iter().map(|s| s.predicted).fold(f64::INFINITY, f64::min);
        let r = cone_lower_bound_check(&m, &sp, &level, &lambdas, 1e-3, 0.5 * predicted)?;
        c.metric(&format!("min_scaled_energy_d{d}"), r.min_scaled_energy, r.passed, ">= 0.5 min prediction");
        c.metric(&format!("min_ratio_d{d}"), r.min_ratio, r.min_ratio >= 0.5, ">= 0.5");
    }
    Ok(c)
}

fn dichotomy() -> Result<Check> {
    let mut c = Check::new();
    let lattice = generate_spectrum(&SpectrumSpec::LatticeBall { spacing: 1.0, radius: 200.0 }, 2, true)?;
    let r = divergence_partial_sum(&lattice, 2, &[100.0])?;
    let ratio = r.sums[0].ratio.unwrap_or(f64::NAN);
    c.metric("lattice_ratio_R100", ratio, (ratio - 2.0).abs() <= 0.1, "2 ± 0.1");
    let axis = generate_spectrum(&SpectrumSpec::AxisLine { step: 1.0, radius: 1000.0 }, 3, true)?;
    let r = divergence_partial_sum(&axis, 3, &[1000.0])?;
    let gap = (r.sums[0].sum - PI * PI / 3.0).abs();
    c.metric("axis_gap_R1000", gap, gap <= 2e-3, "<= 2e-3");
    Ok(c)
}

/// `α_min` of the frame-bound estimate for each test-grid size.
fn alpha_mins(
    m: &Measure<'_>,
    lambda: &curveft::Spectrum,
    sizes: &[usize],
    grid: impl Fn(usize) -> Vec<Vec<f64>>,
) -> Result<Vec<f64>> {
    let cache = FourierCache::new();
    sizes.iter().map(|&n| Ok(frame_bounds_estimate(m, &cache, lambda, &grid(n))?.alpha_min)).collect()
}

fn frame_trends(suite: Suite) -> Result<Check> {
    let sizes: &[usize] = match suite {
        Suite::Fast => &[8, 64],
        Suite::Full => &[8, 16, 32, 64],
    };
    let mut c = Check::new();

    // graph over [-1/4, 1/4]: the base lattice ℤ is a frame for the base interval
    let cap = catalog::cap_graph(2, Height::SphereCap { radius: 1.0 }, &[(-0.25, 0.25)])?;
    let m = Measure::new(&cap);
    let base = generate_spectrum(
        &SpectrumSpec::ConeLattice { axis: vec![1.0, 0.0], half_angle: 0.0, spacing: 1.0, radius: 160.0 },
        2,
        false,
    )?;
    let line = |n: usize, step: f64| -> Vec<Vec<f64>> {
        (0..n).map(|j| vec![step * (j as f64 - (n / 2) as f64), 0.0]).collect()
    };
    let cap_alpha = alpha_mins(&m, &base, sizes, |n| line(n, 2.0))?;
    let c8 = cap_alpha[0];
    let worst = cap_alpha.iter().copied().fold(f64::INFINITY, f64::min);
    c.metric("cap_alpha_min_8", c8, c8 > 0.0, "> 0");
    c.metric("cap_alpha_min_worst_over_8", worst / c8, worst >= 0.5 * c8, ">= 0.5");

    // full circle with a cone-restricted spectrum
    let circle = catalog::circle(1.0)?;
    let m = Measure::new(&circle);
    let cone = generate_spectrum(
        &SpectrumSpec::ConeLattice { axis: vec![0.0, 1.0], half_angle: PI / 12.0, spacing: 1.0, radius: 40.0 },
        2,
        false,
    )?;
    let circle_alpha = alpha_mins(&m, &cone, sizes, |n| line(n, 0.5))?;
    let shrink = circle_alpha[0] / circle_alpha[circle_alpha.len() - 1];
    c.metric("circle_alpha_min_8", circle_alpha[0], circle_alpha[0] > 0.0, "> 0");
    c.metric("circle_shrink_8_to_64", shrink, shrink >= 10.0, ">= 10");
    Ok(c)
}

fn coverage(suite: Suite) -> Result<Check> {
    let resolution = match suite {
        Suite::Fast => PI / 32.0,
        Suite::Full => PI / 64.0,
    };
    let mut c = Check::new();
    let f = catalog::figure1_curve()?;
    let r = coverage_with(&f, Region::Whole, PI / 64.0, 1e-3, SearchOptions::default())?;
    c.metric("figure1_fraction", r.fraction, (r.fraction - 1.0).abs() <= 1e-12, "= 1");
    let cap = catalog::spherical_cap(3, PI / 6.0)?;
    let r = coverage_with(&cap, Region::Whole, resolution, 1e-3, SearchOptions::default())?;
    let want = 1.0 - (PI / 6.0).cos();
    let err = (r.fraction - want).abs();
    c.metric("cap_fraction_error", err, err <= 0.01, "<= 0.01");
    Ok(c)
}
