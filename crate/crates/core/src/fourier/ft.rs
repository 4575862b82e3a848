//! Fourier transforms of (windowed) surface measures by tensor Gauss–Legendre
//! quadrature, `μ̂(ξ) = ∫ e^{−2πi x·ξ} dμ(x)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadrature::{gauss_legendre, standard_order};
use crate::surface::{check_window, Chart, ParamBox, Surface, Window};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    /// Minimum nodes per axis.
    pub min_nodes: usize,
    /// Nodes per oscillation per axis.
    pub nyquist: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_doublings: usize,
    /// Refuse evaluations needing more tensor nodes than this for one chart.
    pub max_total_nodes: usize,
    pub max_frequency: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            min_nodes: 16,
            nyquist: 6.0,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_doublings: 4,
            max_total_nodes: 100_000_000,
            max_frequency: 1000.0,
        }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if self.min_nodes < 1 || !(self.nyquist > 0.0) || !(self.abs_tol >= 0.0) || !(self.rel_tol >= 0.0) {
            return Err(Error::invalid("bad quadrature configuration"));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::invalid("quadrature tolerances cannot both be zero"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSample {
    pub xi: Vec<f64>,
    pub value: Complex64,
    /// Tensor nodes used by the accepted (finest) rule, summed over charts.
    pub nodes: usize,
    /// `|Q_fine − Q_coarse|` summed over charts.
    pub error_estimate: f64,
}

/// A surface measure `σ_S`, optionally multiplied by a window.
#[derive(Debug, Clone)]
pub struct Measure<'a> {
    surface: &'a Surface,
    window: Option<&'a Window>,
    weight: f64,
    quadrature: QuadratureConfig,
}

impl<'a> Measure<'a> {
    pub fn new(surface: &'a Surface) -> Self {
        Measure { surface, window: None, weight: 1.0, quadrature: QuadratureConfig::default() }
    }

    pub fn with_window(mut self, window: &'a Window) -> Result<Self> {
        check_window(self.surface, window)?;
        self.window = Some(window);
        Ok(self)
    }

    pub fn with_optional_window(self, window: Option<&'a Window>) -> Result<Self> {
        match window {
            Some(w) => self.with_window(w),
            None => Ok(self),
        }
    }

    /// Multiplies the measure by a constant `weight > 0`.
    pub fn with_weight(mut self, weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::invalid("measure weight must be positive and finite"));
        }
        self.weight = weight;
        Ok(self)
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn with_quadrature(mut self, quadrature: QuadratureConfig) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn surface(&self) -> &'a Surface {
        self.surface
    }

    pub fn window(&self) -> Option<&'a Window> {
        self.window
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quadrature
    }

    /// `μ̂(ξ)`, refining each chart until its coarse/fine estimate meets the
    /// tolerance.
    pub fn ft(&self, xi: &[f64]) -> Result<FourierSample> {
        let d = self.surface.ambient_dim();
        if xi.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: xi.len() });
        }
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("frequency must be finite"));
        }
        let q = &self.quadrature;
        q.validate()?;
        let radius = linalg::norm(xi);
        if radius > q.max_frequency {
            return Err(Error::invalid(format!("|xi| = {radius} exceeds the configured maximum {}", q.max_frequency)));
        }
        let mut total =
            FourierSample { xi: xi.to_vec(), value: Complex64::new(0.0, 0.0), nodes: 0, error_estimate: 0.0 };
        for (i, chart) in self.surface.charts().iter().enumerate() {
            let (bounds, window) = match self.window {
                Some(w) if w.chart == i => (w.support_box(), Some(w)),
                Some(_) => continue,
                None => (chart.domain().clone(), None),
            };
            let piece =
                Piece { chart, bounds: &bounds, window, scale: self.weight / self.surface.multiplicity(i) as f64 };
            let r = piece.adaptive(xi, radius, q)?;
            total.value += r.value;
            total.nodes += r.nodes;
            total.error_estimate += r.error_estimate;
        }
        Ok(total)
    }

    /// Evaluates every frequency, recording failures instead of stopping.
    pub fn scan(&self, frequencies: &[Vec<f64>]) -> ScanOutcome {
        let mut out = ScanOutcome::default();
        for xi in frequencies {
            match self.ft(xi) {
                Ok(s) => out.samples.push(s),
                Err(e) => out.failures.push(ScanFailure { xi: xi.clone(), message: e.to_string() }),
            }
        }
        out
    }
}

/// `μ̂(ξ)` for `σ_S` or `ψ dσ_S` with the given quadrature settings.
pub fn ft_point(
    surface: &Surface,
    window: Option<&Window>,
    xi: &[f64],
    quadrature: &QuadratureConfig,
) -> Result<FourierSample> {
    Measure::new(surface).with_quadrature(quadrature.clone()).with_optional_window(window)?.ft(xi)
}

pub fn ft_scan(
    surface: &Surface,
    window: Option<&Window>,
    frequencies: &[Vec<f64>],
    quadrature: &QuadratureConfig,
) -> Result<ScanOutcome> {
    Ok(Measure::new(surface).with_quadrature(quadrature.clone()).with_optional_window(window)?.scan(frequencies))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanFailure {
    pub xi: Vec<f64>,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ScanOutcome {
    pub samples: Vec<FourierSample>,
    pub failures: Vec<ScanFailure>,
}

/// Frequencies `t · direction/|direction|` for each magnitude `t`.
pub fn ray(direction: &[f64], magnitudes: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = linalg::norm(direction);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::invalid("ray direction must be nonzero"));
    }
    Ok(magnitudes.iter().map(|t| direction.iter().map(|v| t * v / n).collect()).collect())
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
    }
}

struct Piece<'p> {
    chart: &'p Chart,
    bounds: &'p ParamBox,
    window: Option<&'p Window>,
    scale: f64,
}

struct Rule {
    value: Complex64,
    nodes: usize,
    error_estimate: f64,
}

impl Piece<'_> {
    fn adaptive(&self, xi: &[f64], radius: f64, q: &QuadratureConfig) -> Result<Rule> {
        let speed = self.chart.speed();
        let mut fine: Vec<usize> = self
            .bounds
            .axes
            .iter()
            .zip(speed)
            .map(|(ax, s)| {
                standard_order(q.min_nodes.max((q.nyquist * (1.0 + radius) * ax.width() * s).ceil() as usize))
            })
            .collect();
        // first estimate against a ⅔ rule, later ones against the previous level
        let mut coarse: Vec<usize> = fine.iter().map(|&n| standard_order((2 * n).div_ceil(3))).collect();
        let mut coarse_value = self.integrate(xi, &coarse, q)?;
        let mut last = (0.0, 0.0);
        for _ in 0..=q.max_doublings {
            let value = self.integrate(xi, &fine, q)?;
            let est = (value - coarse_value).norm();
            let tol = q.abs_tol + q.rel_tol * value.norm();
            let nodes = fine.iter().product();
            if est <= tol {
                return Ok(Rule { value, nodes, error_estimate: est });
            }
            last = (est, tol);
            coarse = fine.clone();
            coarse_value = value;
            fine = coarse.iter().map(|n| 2 * n).collect();
        }
        Err(Error::QuadratureNotConverged {
            xi: xi.to_vec(),
            estimate: last.0,
            tolerance: last.1,
            nodes: coarse.iter().product(),
        })
    }

    fn integrate(&self, xi: &[f64], nodes: &[usize], q: &QuadratureConfig) -> Result<Complex64> {
        let total = nodes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n)).unwrap_or(usize::MAX);
        if total > q.max_total_nodes {
            return Err(Error::QuadratureBudget { nodes: total, limit: q.max_total_nodes });
        }
        let m = nodes.len();
        let d = m + 1;
        let rules: Vec<(Vec<f64>, Vec<f64>)> =
            self.bounds.axes.iter().zip(nodes).map(|(ax, &n)| gauss_legendre(n).on_interval(ax.lo, ax.hi)).collect();
        let inner: usize = nodes[1..].iter().product();
        let partials: Vec<Complex64> = (0..nodes[0])
            .into_par_iter()
            .map(|i0| {
                let mut u = vec![0.0; m];
                let mut x = vec![0.0; d];
                let mut jac = vec![0.0; d * m];
                let mut g = vec![0.0; m * m];
                let mut idx = vec![0usize; m];
                idx[0] = i0;
                u[0] = rules[0].0[i0];
                let w0 = rules[0].1[i0];
                let mut acc = Complex64::new(0.0, 0.0);
                for _ in 0..inner {
                    let mut w = w0;
                    for a in 1..m {
                        u[a] = rules[a].0[idx[a]];
                        w *= rules[a].1[idx[a]];
                    }
                    if let Some(win) = self.window {
                        w *= win.value(&u);
                    }
                    if w != 0.0 {
                        self.chart.embed_into(&u, &mut x);
                        self.chart.jacobian_into(&u, &mut jac);
                        linalg::gram(d, m, &jac, &mut g);
                        let area = linalg::det_in_place(m, &mut g).max(0.0).sqrt();
                        let phase = -2.0 * PI * linalg::dot(&x, xi);
                        let (s, c) = phase.sin_cos();
                        let wa = w * area;
                        acc += Complex64::new(wa * c, wa * s);
                    }
                    for a in (1..m).rev() {
                        idx[a] += 1;
                        if idx[a] < nodes[a] {
                            break;
                        }
                        idx[a] = 0;
                    }
                }
                acc
            })
            .collect();
        Ok(partials.into_iter().sum::<Complex64>() * self.scale)
    }
}

/// Memoised transforms keyed by the exact bits of `ξ`.
#[derive(Debug, Default)]
pub struct FourierCache {
    entries: Mutex<HashMap<Vec<u64>, FourierSample>>,
}

impl FourierCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, measure: &Measure<'_>, xi: &[f64]) -> Result<FourierSample> {
        let key = key(xi);
        if let Some(s) = self.entries.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let s = measure.ft(xi)?;
        self.entries.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }

    /// Values for every frequency, computing the missing ones in parallel.
    pub fn values(&self, measure: &Measure<'_>, frequencies: &[Vec<f64>]) -> Result<Vec<Complex64>> {
        let keys: Vec<Vec<u64>> = frequencies.iter().map(|xi| key(xi)).collect();
        let mut missing: Vec<usize> = {
            let map = self.entries.lock().unwrap();
            (0..keys.len()).filter(|&i| !map.contains_key(&keys[i])).collect()
        };
        missing.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        missing.dedup_by(|a, b| keys[*a] == keys[*b]);
        let fresh: Vec<(usize, FourierSample)> =
            missing.par_iter().map(|&i| measure.ft(&frequencies[i]).map(|s| (i, s))).collect::<Result<_>>()?;
        let mut map = self.entries.lock().unwrap();
        for (i, s) in fresh {
            map.insert(keys[i].clone(), s);
        }
        Ok(keys.iter().map(|k| map[k].value).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn key(xi: &[f64]) -> Vec<u64> {
    // -0.0 and 0.0 give the same transform
    xi.iter().map(|v| (v + 0.0).to_bits()).collect()
}
