use serde::{Deserialize, Serialize};

use super::chart::{Interval, ParamBox};
use crate::error::{Error, Result};

/// Smooth compactly supported weight ψ on one chart.
///
/// The profile is a product of one-dimensional plateau bumps: equal to 1 on
/// the inner `plateau` fraction of each half-width and falling to 0 at the
/// edge of `support` through the C^∞ transition `e^{-1/x}/(e^{-1/x}+e^{-1/(1-x)})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub chart: usize,
    pub support: Vec<(f64, f64)>,
    pub plateau: f64,
    /// Level `1/N` defining the superlevel set `{ψ ≥ floor}` used for cone filtering.
    pub floor: f64,
}

impl Window {
    pub fn new(chart: usize, support: Vec<(f64, f64)>, plateau: f64, floor: f64) -> Result<Self> {
        if support.iter().any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::invalid("window support must be a nonempty finite box"));
        }
        if !(0.0..1.0).contains(&plateau) {
            return Err(Error::invalid("window plateau fraction must lie in [0, 1)"));
        }
        if !(floor > 0.0 && floor <= 1.0) {
            return Err(Error::invalid("window floor must lie in (0, 1]"));
        }
        Ok(Window { chart, support, plateau, floor })
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.support.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect()
    }

    /// The support as a parameter box with free sides.
    pub fn support_box(&self) -> ParamBox {
        ParamBox::new(self.support.iter().map(|&(lo, hi)| Interval::free(lo, hi)).collect())
    }

    pub fn value(&self, u: &[f64]) -> f64 {
        self.support.iter().zip(u).map(|(&(lo, hi), &t)| self.profile(lo, hi, t).0).product()
    }

    pub fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let parts: Vec<(f64, f64)> =
            self.support.iter().zip(u).map(|(&(lo, hi), &t)| self.profile(lo, hi, t)).collect();
        (0..parts.len())
            .map(|a| parts.iter().enumerate().map(|(b, &(v, dv))| if a == b { dv } else { v }).product())
            .collect()
    }

    /// Value and derivative of the 1-D factor on `[lo, hi]`.
    fn profile(&self, lo: f64, hi: f64, t: f64) -> (f64, f64) {
        let half = 0.5 * (hi - lo);
        let s = (t - 0.5 * (lo + hi)) / half;
        let r = s.abs();
        if r >= 1.0 {
            return (0.0, 0.0);
        }
        if r <= self.plateau {
            return (1.0, 0.0);
        }
        let span = 1.0 - self.plateau;
        let x = (1.0 - r) / span;
        let (v, dv) = transition(x);
        // dx/dt = -sign(s) / (span * half)
        (v, -dv * s.signum() / (span * half))
    }
}

fn bump(x: f64) -> (f64, f64) {
    if x <= 0.0 {
        (0.0, 0.0)
    } else {
        let e = (-1.0 / x).exp();
        (e, e / (x * x))
    }
}

/// Smooth step from 0 at `x ≤ 0` to 1 at `x ≥ 1`, with derivative.
fn transition(x: f64) -> (f64, f64) {
    let (a, da) = bump(x);
    let (b, db) = bump(1.0 - x);
    let s = a + b;
    (a / s, (da * b + a * db) / (s * s))
}
