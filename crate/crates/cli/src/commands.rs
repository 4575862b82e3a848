//! Drivers behind each subcommand.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use curveft::fourier::{FourierSample, ScanOutcome};
use curveft::frame::{divergence_partial_sum, energy_scan};
use curveft::geometry::{coverage_with, NormalCone, SearchOptions};
use curveft::surface::Window;
use curveft::{
    asymptotic_compare, catalog, cone_filter, decay_phase_fit, frame_bounds_estimate, generate_spectrum,
    hemisphere_axis_profile, hemisphere_symmetry_check, total_mass, validate_surface, FourierCache, Measure, Region,
    StationaryPhase, Surface,
};
use serde_json::json;

use crate::config::{ExperimentConfig, FrequencySpec, RegionKind};
use crate::output::{columns, num, write_json, write_table, Table};

/// A run that completed but did not pass (exit code 2), as opposed to a
/// usage or configuration error (exit code 1).
#[derive(Debug)]
pub struct Failed(pub String);

impl fmt::Display for Failed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn failed(e: impl fmt::Display) -> anyhow::Error {
    Failed(e.to_string()).into()
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub summary: String,
    pub files: Vec<PathBuf>,
    pub passed: bool,
}

struct Built {
    surface: Surface,
    window: Option<Window>,
}

/// Builds and validates the configured surface and window.
fn build(cfg: &ExperimentConfig) -> Result<Built> {
    let spec = cfg.surface()?;
    let surface = spec.build().context("cannot build surface")?;
    let window = cfg.window.as_ref().map(|w| w.build(&surface)).transpose().context("cannot build window")?;
    for r in validate_surface(&surface, cfg.validation_samples)? {
        if let Some(f) = r.failure {
            return Err(failed(format!(
                "surface validation failed on chart {} at u = {:?}: {}",
                r.chart, f.u, f.reason
            )));
        }
    }
    Ok(Built { surface, window })
}

fn measure<'a>(cfg: &ExperimentConfig, b: &'a Built) -> Result<Measure<'a>> {
    Ok(Measure::new(&b.surface).with_quadrature(cfg.quadrature.clone()).with_optional_window(b.window.as_ref())?)
}

fn region<'a>(kind: RegionKind, window: Option<&'a Window>) -> Result<Region<'a>> {
    Ok(match (kind, window) {
        (RegionKind::Whole, _) => Region::Whole,
        (RegionKind::WindowSupport, Some(w)) => Region::WindowSupport(w),
        (RegionKind::WindowLevel, Some(w)) => Region::WindowLevel(w),
        (_, None) => bail!("region {kind:?} needs a \"window\" section"),
    })
}

fn point_table(prefix: &str, points: &[Vec<f64>], d: usize) -> Table {
    let mut t = Table::new(columns(prefix, d));
    for p in points {
        t.push(p.iter().map(|v| num(*v)).collect());
    }
    t
}

pub fn surface_info(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let spec = cfg.surface()?;
    let surface = spec.build().context("cannot build surface")?;
    let window = cfg.window.as_ref().map(|w| w.build(&surface)).transpose().context("cannot build window")?;
    let reports = validate_surface(&surface, cfg.validation_samples)?;
    let passed = reports.iter().all(|r| r.passed);
    let min_k = reports.iter().map(|r| r.min_abs_curvature).fold(f64::INFINITY, f64::min);
    let max_k = reports.iter().map(|r| r.max_abs_curvature).fold(0.0, f64::max);
    let mass = total_mass(&surface, window.as_ref(), &cfg.quadrature);
    let report = json!({
        "surface": surface.name,
        "ambient_dim": surface.ambient_dim(),
        "charts": surface.charts().len(),
        "passed": passed,
        "min_abs_curvature": min_k,
        "max_abs_curvature": max_k,
        "total_mass": mass.as_ref().ok(),
        "mass_error": mass.as_ref().err().map(|e| e.to_string()),
        "validation": reports,
        "config_hash": cfg.hash(),
    });
    let file = write_json(out, "surface_info.json", &report)?;
    let summary = format!(
        "surface-info: {} {} (min |K| = {min_k:.6e}, max |K| = {max_k:.6e})",
        surface.name,
        if passed { "passed" } else { "FAILED validation" }
    );
    Ok(Outcome { summary, files: vec![file], passed })
}

fn sample_row(s: &FourierSample) -> Vec<String> {
    let mut row: Vec<String> = s.xi.iter().map(|v| num(*v)).collect();
    row.extend([num(s.value.re), num(s.value.im), num(s.value.norm()), s.nodes.to_string(), num(s.error_estimate)]);
    row
}

fn scan_table(d: usize, scan: &ScanOutcome) -> Table {
    let mut header = columns("xi", d);
    header.extend(["re", "im", "abs", "nodes", "err_est"].map(String::from));
    let mut t = Table::new(header);
    for s in &scan.samples {
        t.push(sample_row(s));
    }
    t
}

pub fn ft_scan(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let params = cfg.section(&cfg.ft_scan, "ft_scan")?;
    let b = build(cfg)?;
    let d = b.surface.ambient_dim();
    let freqs = params.frequencies.generate(d, cfg.seed)?;
    let m = measure(cfg, &b)?;
    let scan = m.scan(&freqs);
    if scan.samples.is_empty() && !scan.failures.is_empty() {
        return Err(failed(format!("every frequency failed; first: {}", scan.failures[0].message)));
    }
    let hash = cfg.hash();
    let csv = write_table(out, "ft_scan.csv", &scan_table(d, &scan), &hash)?;
    let mut report = json!({
        "samples": scan.samples.len(),
        "failures": scan.failures,
        "max_err_est": scan.samples.iter().map(|s| s.error_estimate).fold(0.0, f64::max),
        "config_hash": hash,
    });
    if params.fit {
        let FrequencySpec::Ray { magnitudes, .. } = &params.frequencies else {
            bail!("\"fit\" needs ray frequencies");
        };
        let ts = magnitudes.values()?;
        let (ts, values): (Vec<f64>, Vec<_>) = ts
            .iter()
            .zip(&freqs)
            .filter_map(|(t, xi)| scan.samples.iter().find(|s| &s.xi == xi).map(|s| (*t, s.value)))
            .unzip();
        report["fit"] = match decay_phase_fit(&ts, &values, d) {
            Ok(f) => serde_json::to_value(f)?,
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    let js = write_json(out, "ft_scan.json", &report)?;
    let summary = format!(
        "ft-scan: {} samples, {} failures, max error estimate {:.3e}",
        scan.samples.len(),
        scan.failures.len(),
        report["max_err_est"].as_f64().unwrap_or(0.0)
    );
    Ok(Outcome { summary, files: vec![csv, js], passed: true })
}

pub fn sp_compare(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let params = cfg.section(&cfg.sp_compare, "sp_compare")?;
    let b = build(cfg)?;
    let m = measure(cfg, &b)?;
    let sp = StationaryPhase::new(&b.surface, b.window.as_ref(), params.phase)?;
    let ts = params.magnitudes.values()?;
    let r = asymptotic_compare(&m, &sp, &params.direction, &ts).map_err(failed)?;
    let mut t = Table::new(["t", "ft_re", "ft_im", "lead_re", "lead_im", "deviation", "nodes", "err_est"]);
    for s in &r.samples {
        t.push(vec![
            num(s.t),
            num(s.ft.value.re),
            num(s.ft.value.im),
            num(s.leading.re),
            num(s.leading.im),
            num(s.deviation),
            s.ft.nodes.to_string(),
            num(s.ft.error_estimate),
        ]);
    }
    let hash = cfg.hash();
    let csv = write_table(out, "sp_compare.csv", &t, &hash)?;
    let report = json!({
        "direction": r.direction,
        "stationary_points": r.stationary_points,
        "fit": r.fit,
        "max_deviation": r.max_deviation,
        "config_hash": hash,
    });
    let js = write_json(out, "sp_compare.json", &report)?;
    let slope = r.fit.as_ref().map_or("none (below noise floor)".to_string(), |f| format!("{:.4}", f.slope));
    let summary = format!(
        "sp-compare: {} samples, {} stationary points, remainder slope {slope}",
        r.samples.len(),
        r.stationary_points
    );
    Ok(Outcome { summary, files: vec![csv, js], passed: true })
}

pub fn hemisphere(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let params = cfg.section(&cfg.hemisphere, "hemisphere")?;
    let ts = params.magnitudes.values()?;
    let r = hemisphere_axis_profile(params.d, &ts).map_err(failed)?;
    let mut t = Table::new(["xi_d", "re", "im", "abs", "scaled"]);
    for s in &r.samples {
        t.push(vec![num(s.xi_d), num(s.transform.re), num(s.transform.im), num(s.transform.norm()), num(s.scaled)]);
    }
    let hash = cfg.hash();
    let mut files = vec![write_table(out, "hemisphere_axis.csv", &t, &hash)?];
    let mut report = json!({
        "d": r.d,
        "slope": r.fit.slope,
        "fit": r.fit,
        "scaled_min": r.scaled_min,
        "scaled_max": r.scaled_max,
        "full_sphere_fit": r.full_sphere_fit,
        "config_hash": hash,
    });
    let mut summary = format!(
        "hemisphere: d = {}, axis slope {:.4}, |xi_d| |transform| in [{:.4e}, {:.4e}]",
        r.d, r.fit.slope, r.scaled_min, r.scaled_max
    );
    if let Some(sym) = &params.symmetry {
        let pair = match &cfg.surface {
            Some(spec) => spec.build_hemisphere()?.context("symmetry needs a hemisphere surface")?,
            None => catalog::hemisphere(params.d)?,
        };
        let freqs = sym.generate(pair.full.ambient_dim(), cfg.seed)?;
        let s = hemisphere_symmetry_check(&pair, &freqs, &cfg.quadrature).map_err(failed)?;
        let mut header = columns("xi", pair.full.ambient_dim());
        header.extend(["full_re", "full_im", "upper_re", "upper_im", "deviation"].map(String::from));
        let mut t = Table::new(header);
        for x in &s.samples {
            let mut row: Vec<String> = x.xi.iter().map(|v| num(*v)).collect();
            row.extend([num(x.full.re), num(x.full.im), num(x.upper.re), num(x.upper.im), num(x.deviation)]);
            t.push(row);
        }
        files.push(write_table(out, "hemisphere_symmetry.csv", &t, &hash)?);
        report["symmetry_max_deviation"] = json!(s.max_deviation);
        summary.push_str(&format!(", symmetry deviation {:.3e}", s.max_deviation));
    }
    files.push(write_json(out, "hemisphere.json", &report)?);
    Ok(Outcome { summary, files, passed: true })
}

pub fn coverage(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let params = cfg.section(&cfg.coverage, "coverage")?;
    let b = build(cfg)?;
    let reg = region(params.region, b.window.as_ref())?;
    let r = coverage_with(&b.surface, reg, params.resolution, params.angular_tol, SearchOptions::default())
        .map_err(failed)?;
    let d = b.surface.ambient_dim();
    let mut header = columns("e", d);
    header.extend(["weight", "member", "nearest_angle"].map(String::from));
    let mut t = Table::new(header);
    for c in &r.cells {
        let mut row: Vec<String> = c.direction.iter().map(|v| num(*v)).collect();
        row.extend([num(c.weight), u8::from(c.member).to_string(), num(c.nearest_angle)]);
        t.push(row);
    }
    let hash = cfg.hash();
    let csv = write_table(out, "coverage.csv", &t, &hash)?;
    let report = json!({
        "fraction": r.fraction,
        "resolution": r.resolution,
        "tolerance": r.tolerance,
        "cells": r.cells.len(),
        "uncovered": r.uncovered().count(),
        "config_hash": hash,
    });
    let js = write_json(out, "coverage.json", &report)?;
    let summary = format!("coverage: fraction {:.6} over {} cells", r.fraction, r.cells.len());
    Ok(Outcome { summary, files: vec![csv, js], passed: true })
}

pub fn frame(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let params = cfg.section(&cfg.frame, "frame")?;
    let b = build(cfg)?;
    let d = b.surface.ambient_dim();
    let spectrum = generate_spectrum(&params.spectrum, d, params.exclude_zero)?;
    let hash = cfg.hash();
    let mut files = vec![write_table(out, "spectrum.csv", &point_table("lambda", &spectrum.points, d), &hash)?];
    let mut report = json!({ "lambda_size": spectrum.len(), "config_hash": hash });
    let mut summary = format!("frame: |Lambda| = {}", spectrum.len());
    let m = measure(cfg, &b)?;
    let cache = FourierCache::new();

    if let Some(radii) = &params.divergence_radii {
        let r = divergence_partial_sum(&spectrum, d, radii)?;
        if let Some(last) = r.sums.last() {
            summary.push_str(&format!(", S({}) = {:.6}", last.radius, last.sum));
        }
        report["divergence"] = serde_json::to_value(&r)?;
    }
    if let Some(grid) = &params.energy_grid {
        let grid = grid.generate(d, cfg.seed)?;
        let e = energy_scan(&m, &cache, &spectrum, &grid).map_err(failed)?;
        let mut header = columns("xi", d);
        header.push("energy".into());
        let mut t = Table::new(header);
        for s in &e.samples {
            let mut row: Vec<String> = s.xi.iter().map(|v| num(*v)).collect();
            row.push(num(s.energy));
            t.push(row);
        }
        files.push(write_table(out, "energy.csv", &t, &hash)?);
        summary.push_str(&format!(", E in [{:.4e}, {:.4e}]", e.min, e.max));
        report["energy"] = json!({ "min": e.min, "max": e.max, "samples": e.samples.len() });
    }
    if let Some(cp) = &params.cone {
        let reg = region(cp.region, b.window.as_ref())?;
        let cone = NormalCone::new(&b.surface, reg, SearchOptions::default())?;
        let p = cone_filter(&spectrum, &cone, cp.angular_tol).map_err(failed)?;
        files.push(write_table(out, "cone_inside.csv", &point_table("lambda", &p.inside, d), &hash)?);
        summary.push_str(&format!(", {} in cone", p.inside.len()));
        report["cone"] = json!({
            "tolerance": p.tolerance,
            "inside": p.inside.len(),
            "outside": p.outside.len(),
            "strict_inside": p.strict_inside,
        });
    }
    if let Some(test) = &params.test_grid {
        let h = test.generate(d, cfg.seed)?;
        let f = frame_bounds_estimate(&m, &cache, &spectrum, &h).map_err(failed)?;
        summary.push_str(&format!(", alpha in [{:.4e}, {:.4e}]", f.alpha_min, f.alpha_max));
        files.push(write_json(out, "frame_estimate.json", &f)?);
        report["frame_estimate"] = serde_json::to_value(&f)?;
    }
    files.push(write_json(out, "frame.json", &report)?);
    Ok(Outcome { summary, files, passed: true })
}

/// Runs the acceptance suite, printing one line per criterion.
pub fn verify(suite: crate::verify::Suite, out: Option<&Path>) -> Result<Outcome> {
    let report = crate::verify::run_suite(suite, |c| println!("{}", c.line()));
    let mut files = Vec::new();
    if let Some(dir) = out {
        files.push(write_json(dir, "verify.json", &report)?);
    }
    let passed_count = report.criteria.iter().filter(|c| c.passed).count();
    let summary =
        format!("verify {:?}: {passed_count}/{} criteria passed", suite, report.criteria.len()).to_lowercase();
    Ok(Outcome { summary, files, passed: report.passed })
}
