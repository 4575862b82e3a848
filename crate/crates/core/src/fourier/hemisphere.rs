//! Hemisphere transforms: the axis profile of `σ̂₊` and the symmetry
//! `2 Re σ̂₊ = σ̂` for centrally symmetric surfaces.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::asymptotics::{envelope_fit, fit_loglog, peak_fit, LogFit};
use super::ft::{Measure, QuadratureConfig};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::surface::catalog::HemispherePair;

/// `|S^n|`, the surface area of the unit sphere in ℝ^{n+1}.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 1.0) * sphere_area(n - 2),
    }
}

/// `∫₀^{π/2} e^{−2πi ξ cos θ} sin^{d−2} θ dθ` by Gauss–Legendre in θ,
/// doubling until two successive rules agree to `tol`.
pub fn axis_integral(d: usize, xi: f64, tol: f64) -> Result<Complex64> {
    if d < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    let power = (d - 2) as i32;
    let eval = |n: usize| {
        let rule = gauss_legendre(n);
        let (x, w) = rule.on_interval(0.0, FRAC_PI_2);
        x.iter()
            .zip(&w)
            .map(|(&t, &wt)| {
                let (s, c) = t.sin_cos();
                Complex64::from_polar(wt * s.powi(power), -2.0 * PI * xi * c)
            })
            .sum::<Complex64>()
    };
    let mut n = 16usize.max((6.0 * (1.0 + xi.abs()) * FRAC_PI_2).ceil() as usize);
    let mut prev = eval(n);
    for _ in 0..8 {
        n *= 2;
        let next = eval(n);
        if (next - prev).norm() <= tol * (1.0 + next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged { xi: vec![xi], estimate: f64::NAN, tolerance: tol, nodes: n })
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisSample {
    pub xi_d: f64,
    pub integral: Complex64,
    /// `σ̂₊(0, …, 0, ξ_d) = |S^{d−2}| · integral` for the unit sphere.
    pub transform: Complex64,
    /// `ξ_d · |σ̂₊|`.
    pub scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisProfileReport {
    pub d: usize,
    pub samples: Vec<AxisSample>,
    /// Log-log least squares of `|σ̂₊|`.
    pub fit: LogFit,
    pub scaled_min: f64,
    pub scaled_max: f64,
    /// Peak (or binned-envelope) fit of the full sphere's `|σ̂| = |2 Re σ̂₊|` on the same axis.
    pub full_sphere_fit: Option<LogFit>,
}

/// Decay of the unit hemisphere's transform along the `x_d` axis.
pub fn hemisphere_axis_profile(d: usize, magnitudes: &[f64]) -> Result<AxisProfileReport> {
    let area = sphere_area(d - 2);
    let samples = magnitudes
        .iter()
        .map(|&xi| {
            let integral = axis_integral(d, xi, 1e-14)?;
            let transform = integral * area;
            Ok(AxisSample { xi_d: xi, integral, transform, scaled: xi.abs() * transform.norm() })
        })
        .collect::<Result<Vec<_>>>()?;
    let ts: Vec<f64> = samples.iter().map(|s| s.xi_d).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.transform.norm()).collect();
    let fit = fit_loglog(&ts, &ys)?;
    let full: Vec<f64> = samples.iter().map(|s| 2.0 * s.transform.re.abs()).collect();
    let step = ts.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let full_sphere_fit =
        peak_fit(&ts, &full, step).or_else(|_| envelope_fit(&ts, &full, (ts.len() / 4).clamp(4, 32))).ok();
    let positive = samples.iter().filter(|s| s.xi_d > 0.0);
    let scaled_min = positive.clone().map(|s| s.scaled).fold(f64::INFINITY, f64::min);
    let scaled_max = positive.map(|s| s.scaled).fold(0.0, f64::max);
    Ok(AxisProfileReport { d, samples, fit, scaled_min, scaled_max, full_sphere_fit })
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetrySample {
    pub xi: Vec<f64>,
    pub full: Complex64,
    pub upper: Complex64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub max_deviation: f64,
    pub samples: Vec<SymmetrySample>,
}

/// `max |2 Re σ̂₊(ξ) − σ̂(ξ)|` over the given frequencies.
pub fn hemisphere_symmetry_check(
    pair: &HemispherePair,
    frequencies: &[Vec<f64>],
    quadrature: &QuadratureConfig,
) -> Result<SymmetryReport> {
    let full = Measure::new(&pair.full).with_quadrature(quadrature.clone());
    let upper = Measure::new(&pair.upper).with_quadrature(quadrature.clone());
    let mut samples = Vec::with_capacity(frequencies.len());
    for xi in frequencies {
        let f = full.ft(xi)?.value;
        let u = upper.ft(xi)?.value;
        let deviation = (Complex64::new(2.0 * u.re, 0.0) - f).norm();
        samples.push(SymmetrySample { xi: xi.clone(), full: f, upper: u, deviation });
    }
    let max_deviation = samples.iter().map(|s| s.deviation).fold(0.0, f64::max);
    Ok(SymmetryReport { max_deviation, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn d3_matches_antiderivative() {
        for xi in [0.3, 1.0, 7.25, 40.0, 100.0] {
            let got = axis_integral(3, xi, 1e-14).unwrap();
            let z = Complex64::new(0.0, 2.0 * PI * xi);
            let want = (Complex64::new(1.0, 0.0) - (-z).exp()) / z;
            assert!((got - want).norm() < 1e-10, "{xi}");
        }
    }

    #[test]
    fn zero_frequency_is_wallis() {
        // ∫₀^{π/2} sin² = π/4, sin³ = 2/3
        assert!((axis_integral(4, 0.0, 1e-14).unwrap().re - PI / 4.0).abs() < 1e-14);
        assert!((axis_integral(5, 0.0, 1e-14).unwrap().re - 2.0 / 3.0).abs() < 1e-14);
    }
}
