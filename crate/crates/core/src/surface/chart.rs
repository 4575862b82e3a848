use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg;

/// How a side of a parameter box relates to the rest of the surface.
///
/// `Glued` sides are seams shared with another chart (or coordinate
/// singularities that are not geometric boundary); `Free` sides are genuine
/// boundary of the surface or of a selected region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Free,
    Glued,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Periodic axes wrap `hi` onto `lo`; their sides are ignored.
    pub periodic: bool,
    pub lo_side: Side,
    pub hi_side: Side,
}

impl Interval {
    pub fn free(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, periodic: false, lo_side: Side::Free, hi_side: Side::Free }
    }

    pub fn glued(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, periodic: false, lo_side: Side::Glued, hi_side: Side::Glued }
    }

    pub fn periodic(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, periodic: true, lo_side: Side::Glued, hi_side: Side::Glued }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * self.width().max(1.0);
        t >= self.lo - slack && t <= self.hi + slack
    }

    /// Maps `t` into the interval: wraps periodic axes, clamps the others.
    pub fn project(&self, t: f64) -> f64 {
        if self.periodic {
            let w = self.width();
            self.lo + (t - self.lo).rem_euclid(w)
        } else {
            t.clamp(self.lo, self.hi)
        }
    }

    /// Signed parameter distance, shortest way round on periodic axes.
    pub fn delta(&self, a: f64, b: f64) -> f64 {
        let d = a - b;
        if self.periodic {
            let w = self.width();
            d - w * (d / w).round()
        } else {
            d
        }
    }
}

/// Axis-aligned box of chart parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamBox {
    pub axes: Vec<Interval>,
}

impl ParamBox {
    pub fn new(axes: Vec<Interval>) -> Self {
        ParamBox { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.len() == self.dim() && self.axes.iter().zip(u).all(|(a, &t)| a.periodic || a.contains(t))
    }

    pub fn project(&self, u: &mut [f64]) {
        for (a, t) in self.axes.iter().zip(u.iter_mut()) {
            *t = a.project(*t);
        }
    }

    pub fn center(&self) -> Vec<f64> {
        self.axes.iter().map(|a| 0.5 * (a.lo + a.hi)).collect()
    }

    pub fn distance(&self, u: &[f64], v: &[f64]) -> f64 {
        self.axes.iter().zip(u.iter().zip(v)).map(|(a, (&x, &y))| a.delta(x, y).powi(2)).sum::<f64>().sqrt()
    }

    /// Sides (axis, is_hi) that `u` sits on, up to a relative tolerance.
    pub fn active_sides(&self, u: &[f64]) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for (i, (a, &t)) in self.axes.iter().zip(u).enumerate() {
            if a.periodic {
                continue;
            }
            let tol = 1e-10 * a.width().max(1e-300);
            if (t - a.lo).abs() <= tol {
                out.push((i, false));
            } else if (t - a.hi).abs() <= tol {
                out.push((i, true));
            }
        }
        out
    }

    /// True if `u` lies on a `Free` side.
    pub fn on_free_side(&self, u: &[f64]) -> bool {
        self.active_sides(u).into_iter().any(|(i, hi)| {
            let a = &self.axes[i];
            (if hi { a.hi_side } else { a.lo_side }) == Side::Free
        })
    }

    /// Regular grid: `n` points per axis, endpoints included on bounded axes,
    /// `[lo, hi)` on periodic ones. Row-major in axis order.
    pub fn grid(&self, n: usize) -> Vec<Vec<f64>> {
        let m = self.dim();
        let ticks: Vec<Vec<f64>> = self
            .axes
            .iter()
            .map(|a| {
                if n == 1 {
                    return vec![0.5 * (a.lo + a.hi)];
                }
                if a.periodic {
                    (0..n).map(|i| a.lo + a.width() * i as f64 / n as f64).collect()
                } else {
                    (0..n).map(|i| a.lo + a.width() * i as f64 / (n - 1) as f64).collect()
                }
            })
            .collect();
        let total = n.pow(m as u32);
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; m];
        for _ in 0..total {
            out.push(idx.iter().enumerate().map(|(ax, &i)| ticks[ax][i]).collect());
            for ax in (0..m).rev() {
                idx[ax] += 1;
                if idx[ax] < n {
                    break;
                }
                idx[ax] = 0;
            }
        }
        out
    }

    /// Cell-centre grid with `n` cells per axis; never touches the sides.
    pub fn midpoint_grid(&self, n: usize) -> Vec<Vec<f64>> {
        let shifted = ParamBox::new(
            self.axes
                .iter()
                .map(|a| {
                    let h = a.width() / n as f64;
                    Interval::free(a.lo + 0.5 * h, a.hi - 0.5 * h)
                })
                .collect(),
        );
        shifted.grid(n)
    }
}

/// Smooth parameterisation `u ↦ χ(u) ∈ ℝ^d` of one patch.
///
/// Layouts: the Jacobian is row-major `d × m` (`jac[k*m + a] = ∂_a χ_k`), the
/// Hessian is `hess[(a*m + b)*d + k] = ∂_a ∂_b χ_k`, where `m = d - 1`.
/// Maps that cannot supply derivatives return `false` and the owning
/// [`Chart`] falls back to central differences.
pub trait ChartMap: Send + Sync + fmt::Debug {
    fn ambient_dim(&self) -> usize;

    fn embed(&self, u: &[f64], x: &mut [f64]);

    fn jacobian(&self, _u: &[f64], _jac: &mut [f64]) -> bool {
        false
    }

    fn hessian(&self, _u: &[f64], _hess: &mut [f64]) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeMode {
    Analytic,
    /// Central differences with the given absolute step (parameter units);
    /// second derivatives use ten times that step.
    FiniteDifference {
        step: f64,
    },
}

/// One chart χ: U → ℝ^d of an immersed hypersurface.
#[derive(Clone, Debug)]
pub struct Chart {
    map: Arc<dyn ChartMap>,
    domain: ParamBox,
    mode: DerivativeMode,
    speed: Vec<f64>,
}

impl Chart {
    /// Wraps `map` over `domain`, using analytic derivatives when the map
    /// provides them and central differences with step `1e-5 · width`
    /// otherwise.
    pub fn new(map: Arc<dyn ChartMap>, domain: ParamBox) -> Self {
        let d = map.ambient_dim();
        assert_eq!(domain.dim() + 1, d, "chart domain must have dimension d - 1");
        let u = domain.center();
        let mut jac = vec![0.0; d * (d - 1)];
        let mode = if map.jacobian(&u, &mut jac) {
            DerivativeMode::Analytic
        } else {
            DerivativeMode::FiniteDifference { step: default_fd_step(&domain) }
        };
        let mut chart = Chart { map, domain, mode, speed: Vec::new() };
        chart.speed = chart.estimate_speed();
        chart
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn finite_difference(self) -> Self {
        let step = default_fd_step(&self.domain);
        self.with_mode(DerivativeMode::FiniteDifference { step })
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.ambient_dim()
    }

    pub fn param_dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &ParamBox {
        &self.domain
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    /// Upper estimate of `|∂χ/∂u_a|` per axis, sampled on a grid.
    pub fn speed(&self) -> &[f64] {
        &self.speed
    }

    pub fn embed_into(&self, u: &[f64], x: &mut [f64]) {
        self.map.embed(u, x);
    }

    pub fn embed(&self, u: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.ambient_dim()];
        self.map.embed(u, &mut x);
        x
    }

    pub fn jacobian_into(&self, u: &[f64], jac: &mut [f64]) {
        match self.mode {
            DerivativeMode::Analytic if self.map.jacobian(u, jac) => {}
            DerivativeMode::Analytic => self.fd_jacobian(u, default_fd_step(&self.domain), jac),
            DerivativeMode::FiniteDifference { step } => self.fd_jacobian(u, step, jac),
        }
    }

    pub fn jacobian(&self, u: &[f64]) -> Vec<f64> {
        let d = self.ambient_dim();
        let mut jac = vec![0.0; d * (d - 1)];
        self.jacobian_into(u, &mut jac);
        jac
    }

    pub fn hessian_into(&self, u: &[f64], hess: &mut [f64]) {
        match self.mode {
            DerivativeMode::Analytic if self.map.hessian(u, hess) => {}
            DerivativeMode::Analytic => self.fd_hessian(u, HESSIAN_STEP_FACTOR * default_fd_step(&self.domain), hess),
            DerivativeMode::FiniteDifference { step } => self.fd_hessian(u, HESSIAN_STEP_FACTOR * step, hess),
        }
    }

    pub fn hessian(&self, u: &[f64]) -> Vec<f64> {
        let d = self.ambient_dim();
        let m = d - 1;
        let mut hess = vec![0.0; m * m * d];
        self.hessian_into(u, &mut hess);
        hess
    }

    /// `√det(JᵀJ)` at `u`.
    pub fn area_element(&self, u: &[f64]) -> f64 {
        let d = self.ambient_dim();
        let m = d - 1;
        let jac = self.jacobian(u);
        let mut g = vec![0.0; m * m];
        linalg::gram(d, m, &jac, &mut g);
        linalg::det_in_place(m, &mut g).max(0.0).sqrt()
    }

    /// Unit normal (arbitrary orientation) at `u`, or `None` where the
    /// Jacobian is rank deficient.
    pub fn unit_normal(&self, u: &[f64]) -> Option<Vec<f64>> {
        let d = self.ambient_dim();
        let jac = self.jacobian(u);
        let mut n = vec![0.0; d];
        linalg::cross_normal(d, &jac, &mut n);
        let len = linalg::norm(&n);
        if !(len > 0.0) || !len.is_finite() {
            return None;
        }
        n.iter_mut().for_each(|v| *v /= len);
        Some(n)
    }

    fn fd_jacobian(&self, u: &[f64], h: f64, jac: &mut [f64]) {
        let d = self.ambient_dim();
        let m = d - 1;
        let mut up = u.to_vec();
        let mut xp = vec![0.0; d];
        let mut xm = vec![0.0; d];
        for a in 0..m {
            up[a] = u[a] + h;
            self.map.embed(&up, &mut xp);
            up[a] = u[a] - h;
            self.map.embed(&up, &mut xm);
            up[a] = u[a];
            for k in 0..d {
                jac[k * m + a] = (xp[k] - xm[k]) / (2.0 * h);
            }
        }
    }

    fn fd_hessian(&self, u: &[f64], h: f64, hess: &mut [f64]) {
        let d = self.ambient_dim();
        let m = d - 1;
        let mut v = u.to_vec();
        let mut x0 = vec![0.0; d];
        let mut buf = [vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]];
        self.map.embed(u, &mut x0);
        for a in 0..m {
            for b in a..m {
                if a == b {
                    v[a] = u[a] + h;
                    self.map.embed(&v, &mut buf[0]);
                    v[a] = u[a] - h;
                    self.map.embed(&v, &mut buf[1]);
                    v[a] = u[a];
                    for k in 0..d {
                        hess[(a * m + a) * d + k] = (buf[0][k] - 2.0 * x0[k] + buf[1][k]) / (h * h);
                    }
                } else {
                    let signs = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
                    for (slot, (sa, sb)) in signs.iter().enumerate() {
                        v[a] = u[a] + sa * h;
                        v[b] = u[b] + sb * h;
                        self.map.embed(&v, &mut buf[slot]);
                    }
                    v[a] = u[a];
                    v[b] = u[b];
                    for k in 0..d {
                        let val = (buf[0][k] - buf[1][k] - buf[2][k] + buf[3][k]) / (4.0 * h * h);
                        hess[(a * m + b) * d + k] = val;
                        hess[(b * m + a) * d + k] = val;
                    }
                }
            }
        }
    }

    fn estimate_speed(&self) -> Vec<f64> {
        let d = self.ambient_dim();
        let m = d - 1;
        let n = match m {
            1 => 257,
            2 => 33,
            _ => 9,
        };
        let mut speed = vec![0.0f64; m];
        let mut jac = vec![0.0; d * m];
        for u in self.domain.grid(n) {
            self.jacobian_into(&u, &mut jac);
            for (a, s) in speed.iter_mut().enumerate() {
                let len = (0..d).map(|k| jac[k * m + a].powi(2)).sum::<f64>().sqrt();
                if len.is_finite() {
                    *s = s.max(len);
                }
            }
        }
        // grid maxima undershoot between samples
        speed.iter().map(|s| 1.05 * s.max(1e-12)).collect()
    }
}

// Second differences lose two orders to cancellation, so they use a wider step.
const HESSIAN_STEP_FACTOR: f64 = 10.0;

fn default_fd_step(domain: &ParamBox) -> f64 {
    let w = domain.axes.iter().map(Interval::width).fold(0.0, f64::max);
    1e-5 * w
}
