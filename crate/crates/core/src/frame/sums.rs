use serde::Serialize;

use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Serialize)]
pub struct PartialSum {
    pub radius: f64,
    /// `S(R) = Σ_{0<|λ|≤R} |λ|^{−(d−1)}`.
    pub sum: f64,
    pub count: usize,
    /// `S(2R)/S(R)`, when `2R` is within the generated spectrum (or the
    /// spectrum is an explicit, complete list).
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    pub d: usize,
    pub sums: Vec<PartialSum>,
}

/// Partial sums of `|λ|^{−(d−1)}` over `0 < |λ| ≤ R` for each radius.
pub fn divergence_partial_sum(spectrum: &Spectrum, d: usize, radii: &[f64]) -> Result<DivergenceReport> {
    if d < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::invalid("radii must be positive and increasing"));
    }
    let mut norms: Vec<f64> = spectrum.points.iter().map(|p| linalg::norm(p)).filter(|r| *r > 0.0).collect();
    norms.sort_by(f64::total_cmp);
    // compensated prefix sums
    let p = d as f64 - 1.0;
    let mut prefix = Vec::with_capacity(norms.len() + 1);
    prefix.push(0.0);
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for r in &norms {
        let y = r.powf(-p) - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
        prefix.push(s);
    }
    let at = |radius: f64| {
        let k = norms.partition_point(|r| *r <= radius * (1.0 + 1e-12));
        (prefix[k], k)
    };
    let sums = radii
        .iter()
        .map(|&radius| {
            let (sum, count) = at(radius);
            let complete = spectrum.radius.map_or(true, |g| 2.0 * radius <= g * (1.0 + 1e-12));
            let ratio = (complete && sum > 0.0).then(|| at(2.0 * radius).0 / sum);
            PartialSum { radius, sum, count, ratio }
        })
        .collect();
    Ok(DivergenceReport { d, sums })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::spectrum::{generate_spectrum, SpectrumSpec};

    #[test]
    fn axis_sum_is_basel() {
        let s = generate_spectrum(&SpectrumSpec::AxisLine { step: 1.0, radius: 100.0 }, 3, false).unwrap();
        let r = divergence_partial_sum(&s, 3, &[10.0, 50.0]).unwrap();
        let want: f64 = (1..=10).map(|n| 2.0 / (n * n) as f64).sum();
        assert!((r.sums[0].sum - want).abs() < 1e-14);
        assert_eq!(r.sums[0].count, 20);
        assert!(r.sums[1].ratio.is_some());
        assert!(divergence_partial_sum(&s, 3, &[60.0]).unwrap().sums[0].ratio.is_none());
    }

    #[test]
    fn finite_spectrum_stabilises() {
        let s = generate_spectrum(&SpectrumSpec::Explicit { points: vec![vec![0.0, 1.0], vec![3.0, 4.0]] }, 2, false)
            .unwrap();
        let r = divergence_partial_sum(&s, 2, &[10.0, 100.0]).unwrap();
        assert_eq!(r.sums[0].sum, r.sums[1].sum);
        assert_eq!(r.sums[0].ratio, Some(1.0));
    }
}
