//! Log-log fits, zero crossings, and the comparisons between quadrature and
//! the stationary-phase leading term.

use num_complex::Complex64;
use serde::Serialize;

use super::ft::{FourierSample, Measure};
use super::stationary_phase::StationaryPhase;
use crate::error::{Error, Result};

/// Least-squares line through `(ln t, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `ln y`.
    pub residual: f64,
    pub used: usize,
}

/// Plain log-log least squares over the positive, finite samples.
pub fn fit_loglog(ts: &[f64], ys: &[f64]) -> Result<LogFit> {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(ys)
        .filter(|(t, y)| **t > 0.0 && **y > 0.0 && t.is_finite() && y.is_finite())
        .map(|(t, y)| (t.ln(), y.ln()))
        .collect();
    line_fit(&pts)
}

fn line_fit(pts: &[(f64, f64)]) -> Result<LogFit> {
    let n = pts.len();
    if n < 2 {
        return Err(Error::Fit(format!("need at least 2 usable samples, got {n}")));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("samples do not span a range of abscissae".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / nf).sqrt();
    Ok(LogFit { slope, intercept, residual, used: n })
}

/// Log-log fit of the upper envelope: the samples are split into `bins`
/// equal bins in `ln t` and the largest `y` of each bin is fitted.
pub fn envelope_fit(ts: &[f64], ys: &[f64], bins: usize) -> Result<LogFit> {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(ys)
        .filter(|(t, y)| **t > 0.0 && **y > 0.0 && t.is_finite() && y.is_finite())
        .map(|(t, y)| (t.ln(), *y))
        .collect();
    if pts.len() < 2 || bins < 2 {
        return Err(Error::Fit("too few samples for an envelope fit".into()));
    }
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    for &(x, y) in &pts {
        let b = (((x - lo) / width) as usize).min(bins - 1);
        if best[b].map_or(true, |(_, v)| y > v) {
            best[b] = Some((x, y));
        }
    }
    let env: Vec<(f64, f64)> = best.into_iter().flatten().map(|(x, y)| (x, y.ln())).collect();
    if env.len() < 2 {
        return Err(Error::Fit("envelope has fewer than 2 bins".into()));
    }
    line_fit(&env)
}

/// Sign changes of `ys`, located by the cubic through the four samples
/// around each bracket (linear at the ends), then bisection on that cubic.
pub fn zero_crossings(ts: &[f64], ys: &[f64]) -> Vec<f64> {
    zero_crossings_within(ts, ys, f64::INFINITY)
}

/// As [`zero_crossings`], ignoring brackets wider than `max_step` so that
/// clustered samples with gaps between clusters do not produce spurious zeros.
pub fn zero_crossings_within(ts: &[f64], ys: &[f64], max_step: f64) -> Vec<f64> {
    let n = ts.len().min(ys.len());
    let near = |i: usize, j: usize| ts[j] - ts[i] <= max_step;
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let (a, b) = (ys[i], ys[i + 1]);
        if a == 0.0 {
            out.push(ts[i]);
            continue;
        }
        if a * b >= 0.0 || !near(i, i + 1) {
            continue;
        }
        let wide = i >= 1 && i + 2 < n && near(i - 1, i) && near(i + 1, i + 2);
        let idx: Vec<usize> = if wide { vec![i - 1, i, i + 1, i + 2] } else { vec![i, i + 1] };
        let pts: Vec<(f64, f64)> = idx.iter().map(|&k| (ts[k], ys[k])).collect();
        let (mut lo, mut hi) = (ts[i], ts[i + 1]);
        let mut flo = a;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            let fm = lagrange(&pts, mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    if n > 0 && ys[n - 1] == 0.0 {
        out.push(ts[n - 1]);
    }
    out
}

/// Log-log fit through the local maxima of `ys`, each refined by the parabola
/// through it and its two neighbours. Neighbours further than `max_step`
/// apart do not form a peak. Needs at least three peaks.
pub fn peak_fit(ts: &[f64], ys: &[f64], max_step: f64) -> Result<LogFit> {
    let n = ts.len().min(ys.len());
    let mut peaks = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
        if !(y1 > y0 && y1 >= y2) || ts[i + 1] - ts[i - 1] > 2.0 * max_step {
            continue;
        }
        let (t0, t1, t2) = (ts[i - 1], ts[i], ts[i + 1]);
        // vertex of the interpolating parabola
        let d1 = (y1 - y0) / (t1 - t0);
        let d2 = (y2 - y1) / (t2 - t1);
        let curv = (d2 - d1) / (t2 - t0);
        let (t, y) = if curv < 0.0 {
            let tv = 0.5 * (t0 + t1) - d1 / (2.0 * curv);
            let tv = tv.clamp(t0, t2);
            (tv, lagrange(&[(t0, y0), (t1, y1), (t2, y2)], tv))
        } else {
            (t1, y1)
        };
        peaks.push((t, y));
    }
    if peaks.len() < 3 {
        return Err(Error::Fit(format!("found {} peaks, need at least 3", peaks.len())));
    }
    let (pt, py): (Vec<f64>, Vec<f64>) = peaks.into_iter().unzip();
    fit_loglog(&pt, &py)
}

/// Median spacing of sorted abscissae.
fn median_step(ts: &[f64]) -> f64 {
    let mut steps: Vec<f64> = ts.windows(2).map(|w| w[1] - w[0]).filter(|h| *h > 0.0).collect();
    if steps.is_empty() {
        return f64::INFINITY;
    }
    steps.sort_by(f64::total_cmp);
    steps[steps.len() / 2]
}

fn lagrange(pts: &[(f64, f64)], t: f64) -> f64 {
    let mut s = 0.0;
    for (j, &(xj, yj)) in pts.iter().enumerate() {
        let mut l = 1.0;
        for (k, &(xk, _)) in pts.iter().enumerate() {
            if k != j {
                l *= (t - xk) / (xj - xk);
            }
        }
        s += yj * l;
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayPhaseReport {
    pub fit: LogFit,
    pub zeros: Vec<f64>,
    /// `(z − 1/4) mod 1/2` per zero, in `[0, 1/2)`.
    pub offsets: Vec<f64>,
    /// `(d − 1)/8 mod 1/2`.
    pub predicted_offset: f64,
    /// Largest distance (mod 1/2) between an offset and the prediction.
    pub max_offset_error: f64,
}

/// Envelope exponent and zero offsets of `Re μ̂` along a ray.
///
/// Zeros of `cos(2π(t − (d−1)/8))` sit at `t = (d−1)/8 + 1/4 + k/2`. Samples
/// must be sorted and dense enough to resolve each oscillation (spacing well
/// below 1/4). They may come in clusters: brackets wider than twice the
/// median spacing are skipped. The envelope is fitted through the peaks of
/// `|μ̂|`, or through binned maxima when fewer than three peaks are seen.
pub fn decay_phase_fit(ts: &[f64], values: &[Complex64], d: usize) -> Result<DecayPhaseReport> {
    if ts.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: ts.len(), got: values.len() });
    }
    if ts.len() < 16 {
        return Err(Error::Fit(format!("need at least 16 samples, got {}", ts.len())));
    }
    let lo = ts.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo > 0.0 && hi >= 2.0 * lo) {
        return Err(Error::Fit("samples must span at least a factor of two in |xi|".into()));
    }
    let abs: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let spread = abs.iter().copied().fold(0.0f64, f64::max) - abs.iter().copied().fold(f64::INFINITY, f64::min);
    if !(spread > 1e-12 * abs.iter().copied().fold(0.0f64, f64::max)) {
        return Err(Error::Fit("samples show no decay".into()));
    }
    if ts.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Fit("samples must be sorted by increasing |xi|".into()));
    }
    let max_step = 2.0 * median_step(ts);
    let fit = match peak_fit(ts, &abs, max_step) {
        Ok(f) => f,
        Err(_) => envelope_fit(ts, &abs, (ts.len() / 4).clamp(4, 32))?,
    };
    let re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let zeros = zero_crossings_within(ts, &re, max_step);
    if zeros.len() < 2 {
        return Err(Error::Fit(format!("found {} zero crossings, need at least 2", zeros.len())));
    }
    let predicted_offset = ((d as f64 - 1.0) / 8.0).rem_euclid(0.5);
    let offsets: Vec<f64> = zeros.iter().map(|z| (z - 0.25).rem_euclid(0.5)).collect();
    let max_offset_error = offsets
        .iter()
        .map(|o| {
            let diff = (o - predicted_offset).rem_euclid(0.5);
            diff.min(0.5 - diff)
        })
        .fold(0.0, f64::max);
    Ok(DecayPhaseReport { fit, zeros, offsets, predicted_offset, max_offset_error })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSample {
    pub t: f64,
    pub ft: FourierSample,
    pub leading: Complex64,
    /// `|μ̂ − leading| · t^{(d−1)/2}`.
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub direction: Vec<f64>,
    pub stationary_points: usize,
    pub samples: Vec<CompareSample>,
    /// Envelope fit of the deviation; `None` when every deviation is below
    /// the quadrature noise floor.
    pub fit: Option<LogFit>,
    pub max_deviation: f64,
}

/// Quadrature against the leading term along `t · direction`, `t ∈ magnitudes`.
pub fn asymptotic_compare(
    measure: &Measure<'_>,
    phase: &StationaryPhase<'_>,
    direction: &[f64],
    magnitudes: &[f64],
) -> Result<AsymptoticReport> {
    let d = measure.surface().ambient_dim();
    if direction.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: direction.len() });
    }
    let ray = phase.ray_points(direction)?;
    let mut samples = Vec::with_capacity(magnitudes.len());
    for &t in magnitudes {
        let xi: Vec<f64> = ray.direction.iter().map(|v| t * v).collect();
        let ft = measure.ft(&xi)?;
        let leading = phase.evaluate_on_ray(&ray, t).value;
        let deviation = (ft.value - leading).norm() * t.powf(0.5 * (d as f64 - 1.0));
        samples.push(CompareSample { t, ft, leading, deviation });
    }
    let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.deviation).collect();
    let max_deviation = ys.iter().copied().fold(0.0, f64::max);
    let usable = ys.iter().filter(|y| **y > 0.0 && y.is_finite()).count();
    if usable < 8 {
        return Err(Error::Fit(format!("need at least 8 usable samples, got {usable}")));
    }
    let noise = samples.iter().map(|s| s.ft.error_estimate * s.t.powf(0.5 * (d as f64 - 1.0))).fold(0.0, f64::max);
    let fit = if max_deviation <= 10.0 * noise.max(1e-12) {
        None
    } else {
        Some(envelope_fit(&ts, &ys, (ts.len() / 4).clamp(4, 32))?)
    };
    Ok(AsymptoticReport {
        direction: ray.direction.clone(),
        stationary_points: ray.points.len(),
        samples,
        fit,
        max_deviation,
    })
}
