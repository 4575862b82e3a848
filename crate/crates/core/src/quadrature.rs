//! Gauss–Legendre rules.
//!
//! Nodes come from Newton iteration on the three-term Legendre recurrence,
//! started from Tricomi's asymptotic guess. Rules are memoised per order since
//! high-frequency scans request the same few thousand-node rules repeatedly.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // i-th largest root
            let theta = PI * (4.0 * i as f64 + 3.0) / (4.0 * nf + 2.0);
            let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
            nodes[i] = -x;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let x = self.nodes.iter().map(|t| mid + half * t).collect();
        let w = self.weights.iter().map(|w| half * w).collect();
        (x, w)
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(t, w)| w * f(mid + half * t)).sum::<f64>() * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Smallest order `≥ n` of the form `j·2^k` with `8 ≤ j < 16`, so that scans
/// over many frequencies reuse a small set of memoised rules (at most 12.5%
/// extra nodes).
pub fn standard_order(n: usize) -> usize {
    if n <= 16 {
        return n.max(1);
    }
    let shift = (usize::BITS - 1 - n.leading_zeros()) - 3;
    let j = n.div_ceil(1 << shift);
    j << shift
}

static RULES: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();

/// Shared, memoised rule of order `n`.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    let cache = RULES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(GaussLegendre::new(n));
    cache.lock().unwrap().entry(n).or_insert(rule).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules_are_exact() {
        let r = GaussLegendre::new(2);
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        let r = GaussLegendre::new(5);
        // exact for degree 9
        let v = r.integrate(-1.0, 2.0, |x| x.powi(9) - 3.0 * x.powi(4));
        let exact = (2f64.powi(10) - 1.0) / 10.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn standard_orders() {
        assert_eq!(standard_order(10), 10);
        assert_eq!(standard_order(17), 18);
        assert_eq!(standard_order(100), 104);
        assert_eq!(standard_order(128), 128);
        for n in 1..5000 {
            let s = standard_order(n);
            assert!(s >= n && (s as f64) <= 1.125 * n as f64 + 1.0);
            assert_eq!(standard_order(s), s);
            assert_eq!(standard_order(2 * s), 2 * s);
        }
    }

    #[test]
    fn weights_sum_to_two_for_large_orders() {
        for n in [1, 7, 64, 501, 4000] {
            let r = gauss_legendre(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-12, "n = {n}: {s}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn resolves_high_frequency_cosine() {
        // ∫_0^1 cos(2π·200 x) dx = 0, sin integral = 0; ∫ cos(2π·200.25 x) = sin(2π·200.25)/(2π·200.25)
        let r = gauss_legendre(1300);
        let w = 2.0 * PI * 200.25;
        let v = r.integrate(0.0, 1.0, |x| (w * x).cos());
        assert!((v - w.sin() / w).abs() < 1e-13);
    }
}
