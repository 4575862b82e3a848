//! Fixtures shared by the benchmarks.

/// `n` frequencies of magnitude `r` along directions spread over the upper
/// half plane of the first two coordinates.
pub fn frequencies(d: usize, n: usize, r: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let a = std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
            let mut xi = vec![0.0; d];
            xi[0] = r * a.cos();
            xi[d - 1] += r * a.sin();
            xi
        })
        .collect()
}
