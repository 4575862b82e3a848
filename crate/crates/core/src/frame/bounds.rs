//! Frame bounds restricted to finite exponential spans.
//!
//! For `f = Σ_η c_η e^{2πi η·x}` with `η ∈ H`:
//! `Σ_λ |⟨f, e_λ⟩_μ|² = c* A c` with `A = M*M`, `M[λ, η] = μ̂(λ − η)`, and
//! `‖f‖²_{L²(μ)} = c* G c` with `G[η, η'] = μ̂(η − η')`. The extreme
//! eigenvalues of the pencil `(A, G)` are the best frame constants on that span.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::fourier::{FourierCache, Measure};

pub const MAX_TEST_FREQUENCIES: usize = 256;
pub const MAX_GRAM_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Serialize)]
pub struct FrameEstimate {
    #[serde(rename = "H_size")]
    pub h_size: usize,
    pub lambda_size: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
    #[serde(rename = "cond_G")]
    pub cond_g: f64,
}

pub fn frame_bounds_estimate(
    measure: &Measure<'_>,
    cache: &FourierCache,
    spectrum: &Spectrum,
    test: &[Vec<f64>],
) -> Result<FrameEstimate> {
    let h = test.len();
    if h == 0 || h > MAX_TEST_FREQUENCIES {
        return Err(Error::invalid(format!("test grid must hold 1..={MAX_TEST_FREQUENCIES} frequencies, got {h}")));
    }
    let d = spectrum.d;
    if let Some(p) = test.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: p.len() });
    }
    for i in 0..h {
        if test[i + 1..].contains(&test[i]) {
            return Err(Error::invalid("test frequencies must be distinct"));
        }
    }
    let sub = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let n = spectrum.len();
    let mut freqs = Vec::with_capacity(n * h + h * h);
    for l in &spectrum.points {
        for eta in test {
            freqs.push(sub(l, eta));
        }
    }
    for a in test {
        for b in test {
            freqs.push(sub(a, b));
        }
    }
    let values = cache.values(measure, &freqs)?;
    let m = DMatrix::from_fn(n, h, |i, j| values[i * h + j]);
    let g = DMatrix::from_fn(h, h, |i, j| values[n * h + i * h + j]);
    let g = hermitian_part(&g);
    let a = hermitian_part(&(m.adjoint() * &m));

    let g_eigs = g.clone().symmetric_eigenvalues();
    let g_max = g_eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let g_min = g_eigs.iter().copied().fold(f64::INFINITY, f64::min);
    let cond_g = if g_min > 0.0 { g_max / g_min } else { f64::INFINITY };
    if !(cond_g <= MAX_GRAM_CONDITION) {
        return Err(Error::SingularGram { condition: cond_g });
    }
    let chol = g.cholesky().ok_or(Error::SingularGram { condition: cond_g })?;
    let l_inv = chol.l().try_inverse().ok_or(Error::SingularGram { condition: cond_g })?;
    let c = hermitian_part(&(&l_inv * a * l_inv.adjoint()));
    let eigs = c.symmetric_eigenvalues();
    let alpha_min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    let alpha_max = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(FrameEstimate { h_size: h, lambda_size: n, alpha_min, alpha_max, cond_g })
}

fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}
