//! Independent reference values used to check the quadrature code: Bessel
//! `J₀`, closed-form sphere transforms, Wallis integrals and an adaptive
//! Simpson rule. None of this shares code with the main quadrature path.

use std::f64::consts::{FRAC_PI_4, PI};

/// `J₀(x)`: power series below `x = 13`, Hankel asymptotic expansion above.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 13.0 {
        let q = -0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            term *= q / (k * k) as f64;
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    // P ~ Σ (−1)^k a_{2k} / x^{2k}, Q ~ −Σ (−1)^k a_{2k+1} / x^{2k+1},
    // a_k = ((1)(9)(25)…((2k−1)²)) / (k! 8^k); truncated at the smallest term
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200usize {
        if term > last || term < 1e-17 {
            break;
        }
        last = term;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q -= sign * term;
        }
        let odd = (2 * k + 1) as f64;
        term *= odd * odd / ((k + 1) as f64 * 8.0 * x);
    }
    let phase = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * phase.cos() - q * phase.sin())
}

/// Transform of arc length on the unit circle: `2π J₀(2π|ξ|)`.
pub fn circle_ft(r: f64) -> f64 {
    2.0 * PI * bessel_j0(2.0 * PI * r)
}

/// Transform of area measure on the unit sphere in ℝ³: `2 sin(2π|ξ|)/|ξ|`.
pub fn sphere3_ft(r: f64) -> f64 {
    if r == 0.0 {
        4.0 * PI
    } else {
        2.0 * (2.0 * PI * r).sin() / r
    }
}

/// `∫₀^{π/2} sin^n θ dθ`.
pub fn wallis(n: usize) -> f64 {
    let mut v = [PI / 2.0, 1.0];
    if n < 2 {
        return v[n];
    }
    for k in 2..=n {
        let next = v[0] * (k as f64 - 1.0) / k as f64;
        v = [v[1], next];
    }
    v[1]
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_known_values() {
        // first zero and tabulated values
        assert!(bessel_j0(2.404_825_557_695_773).abs() < 1e-15);
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j0(10.0) + 0.245_935_764_451_348_3).abs() < 1e-12);
        assert!((bessel_j0(20.0) - 0.167_024_664_340_583_1).abs() < 1e-13);
        assert!((bessel_j0(15.0) + 0.014_224_472_826_780_8).abs() < 1e-12);
        assert!((bessel_j0(100.0) - 0.019_985_850_304_223_122).abs() < 1e-14);
        assert!((bessel_j0(2.0 * PI * 100.0)).is_finite());
    }

    #[test]
    fn j0_branches_agree_at_the_switch() {
        // series just below, asymptotic just above; J₀ is smooth there
        let below = bessel_j0(13.0 - 1e-9);
        let above = bessel_j0(13.0);
        assert!((below - above).abs() < 1e-10);
    }

    #[test]
    fn wallis_and_simpson() {
        assert!((wallis(2) - PI / 4.0).abs() < 1e-15);
        assert!((wallis(3) - 2.0 / 3.0).abs() < 1e-15);
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }
}
