//! Concrete parameterisations used by the catalog. All of them supply exact
//! first and second derivatives except [`GraphMap`] over a user closure.

use std::fmt;
use std::sync::Arc;

use super::chart::ChartMap;

/// `θ ↦ (r cos θ, r sin θ)`.
#[derive(Debug, Clone)]
pub struct CircleMap {
    pub radius: f64,
}

impl ChartMap for CircleMap {
    fn ambient_dim(&self) -> usize {
        2
    }

    fn embed(&self, u: &[f64], x: &mut [f64]) {
        let (s, c) = u[0].sin_cos();
        x[0] = self.radius * c;
        x[1] = self.radius * s;
    }

    fn jacobian(&self, u: &[f64], jac: &mut [f64]) -> bool {
        let (s, c) = u[0].sin_cos();
        jac[0] = -self.radius * s;
        jac[1] = self.radius * c;
        true
    }

    fn hessian(&self, u: &[f64], hess: &mut [f64]) -> bool {
        let (s, c) = u[0].sin_cos();
        hess[0] = -self.radius * c;
        hess[1] = -self.radius * s;
        true
    }
}

/// Profile `(a, b)(θ) = (cos θ + 2 cos 2θ, sin θ + sin 2θ)` and its first two
/// derivatives, as `[a, a', a'', b, b', b'']`. Note `b' = a`.
pub fn figure1_profile(theta: f64) -> [f64; 6] {
    let (s1, c1) = theta.sin_cos();
    let (s2, c2) = (2.0 * theta).sin_cos();
    [c1 + 2.0 * c2, -s1 - 4.0 * s2, -c1 - 8.0 * c2, s1 + s2, c1 + 2.0 * c2, -s1 - 4.0 * s2]
}

#[derive(Debug, Clone, Copy)]
enum Factor {
    Sin,
    Cos,
}

impl Factor {
    /// k-th derivative of sin/cos at `t`.
    fn eval(self, t: f64, k: usize) -> f64 {
        let (s, c) = t.sin_cos();
        let base = match self {
            Factor::Sin => [s, c, -s, -c],
            Factor::Cos => [c, -s, -c, s],
        };
        base[k % 4]
    }
}

/// Hyperspherical coordinates on `S^{n-1} ⊂ ℝ^n` with `n - 1` angles:
/// `ω_j = sin α_0 ⋯ sin α_{j-1} cos α_j`, last component all sines.
#[derive(Debug, Clone)]
struct Hyperspherical {
    components: Vec<Vec<(usize, Factor)>>,
}

impl Hyperspherical {
    fn new(n: usize) -> Self {
        let components = (0..n)
            .map(|j| {
                let mut f: Vec<(usize, Factor)> = (0..j.min(n - 1)).map(|i| (i, Factor::Sin)).collect();
                if j < n - 1 {
                    f.push((j, Factor::Cos));
                }
                f
            })
            .collect();
        Hyperspherical { components }
    }

    /// Component `j` differentiated `orders[i]` times in angle `i`.
    fn component(&self, j: usize, angles: &[f64], orders: &[(usize, usize)]) -> f64 {
        let factors = &self.components[j];
        for &(angle, _) in orders {
            if !factors.iter().any(|&(i, _)| i == angle) {
                return 0.0;
            }
        }
        factors
            .iter()
            .map(|&(i, f)| {
                let k: usize = orders.iter().filter(|(a, _)| *a == i).map(|(_, k)| k).sum();
                f.eval(angles[i], k)
            })
            .product()
    }
}

/// Surface of revolution `(a(θ) ω, b(θ))`, `ω ∈ S^{d-2}`, generated by the
/// figure-1 profile. Parameters are `(θ, α_0, …, α_{d-3})`. For `d = 2` the
/// sphere `S^0 = {±1}` is represented by `sign`.
#[derive(Debug, Clone)]
pub struct RevolutionMap {
    d: usize,
    sign: f64,
    sphere: Hyperspherical,
}

impl RevolutionMap {
    pub fn new(d: usize, sign: f64) -> Self {
        RevolutionMap { d, sign, sphere: Hyperspherical::new(d - 1) }
    }
}

impl ChartMap for RevolutionMap {
    fn ambient_dim(&self) -> usize {
        self.d
    }

    fn embed(&self, u: &[f64], x: &mut [f64]) {
        let p = figure1_profile(u[0]);
        let n = self.d - 1;
        for (k, xk) in x.iter_mut().take(n).enumerate() {
            *xk = self.sign * p[0] * self.sphere.component(k, &u[1..], &[]);
        }
        x[n] = p[3];
    }

    fn jacobian(&self, u: &[f64], jac: &mut [f64]) -> bool {
        let p = figure1_profile(u[0]);
        let n = self.d - 1;
        let m = n;
        let angles = &u[1..];
        for k in 0..n {
            let w = self.sign * self.sphere.component(k, angles, &[]);
            jac[k * m] = p[1] * w;
            for a in 1..m {
                jac[k * m + a] = self.sign * p[0] * self.sphere.component(k, angles, &[(a - 1, 1)]);
            }
        }
        jac[n * m] = p[4];
        for a in 1..m {
            jac[n * m + a] = 0.0;
        }
        true
    }

    fn hessian(&self, u: &[f64], hess: &mut [f64]) -> bool {
        let p = figure1_profile(u[0]);
        let d = self.d;
        let n = d - 1;
        let m = n;
        let angles = &u[1..];
        for a in 0..m {
            for b in 0..m {
                let base = (a * m + b) * d;
                for k in 0..n {
                    hess[base + k] = self.sign
                        * match (a, b) {
                            (0, 0) => p[2] * self.sphere.component(k, angles, &[]),
                            (0, b) => p[1] * self.sphere.component(k, angles, &[(b - 1, 1)]),
                            (a, 0) => p[1] * self.sphere.component(k, angles, &[(a - 1, 1)]),
                            (a, b) if a == b => p[0] * self.sphere.component(k, angles, &[(a - 1, 2)]),
                            (a, b) => p[0] * self.sphere.component(k, angles, &[(a - 1, 1), (b - 1, 1)]),
                        };
                }
                hess[base + n] = if a == 0 && b == 0 { p[5] } else { 0.0 };
            }
        }
        true
    }
}

/// Height function of a graph chart `x ↦ (x, h(x))`.
#[derive(Clone)]
pub enum Height {
    /// Upper hemisphere `h(x) = √(r² − |x|²)` of the sphere of radius `r`.
    SphereCap { radius: f64 },
    /// `h(x) = ½ Σ c_i x_i²`.
    Quadratic { coeffs: Vec<f64> },
    /// Arbitrary smooth height; derivatives by finite differences.
    Custom(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl fmt::Debug for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::SphereCap { radius } => f.debug_struct("SphereCap").field("radius", radius).finish(),
            Height::Quadratic { coeffs } => f.debug_struct("Quadratic").field("coeffs", coeffs).finish(),
            Height::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphMap {
    pub d: usize,
    pub height: Height,
}

impl GraphMap {
    fn value(&self, x: &[f64]) -> f64 {
        match &self.height {
            Height::SphereCap { radius } => (radius * radius - x.iter().map(|t| t * t).sum::<f64>()).sqrt(),
            Height::Quadratic { coeffs } => 0.5 * coeffs.iter().zip(x).map(|(c, t)| c * t * t).sum::<f64>(),
            Height::Custom(h) => h(x),
        }
    }
}

impl ChartMap for GraphMap {
    fn ambient_dim(&self) -> usize {
        self.d
    }

    fn embed(&self, u: &[f64], x: &mut [f64]) {
        let m = self.d - 1;
        x[..m].copy_from_slice(&u[..m]);
        x[m] = self.value(u);
    }

    fn jacobian(&self, u: &[f64], jac: &mut [f64]) -> bool {
        let m = self.d - 1;
        for k in 0..m {
            for a in 0..m {
                jac[k * m + a] = if k == a { 1.0 } else { 0.0 };
            }
        }
        match &self.height {
            Height::SphereCap { .. } => {
                let h = self.value(u);
                for a in 0..m {
                    jac[m * m + a] = -u[a] / h;
                }
            }
            Height::Quadratic { coeffs } => {
                for a in 0..m {
                    jac[m * m + a] = coeffs[a] * u[a];
                }
            }
            Height::Custom(_) => return false,
        }
        true
    }

    fn hessian(&self, u: &[f64], hess: &mut [f64]) -> bool {
        let d = self.d;
        let m = d - 1;
        hess.iter_mut().for_each(|v| *v = 0.0);
        match &self.height {
            Height::SphereCap { .. } => {
                let h = self.value(u);
                for a in 0..m {
                    for b in 0..m {
                        let delta = if a == b { 1.0 } else { 0.0 };
                        hess[(a * m + b) * d + m] = -delta / h - u[a] * u[b] / (h * h * h);
                    }
                }
            }
            Height::Quadratic { coeffs } => {
                for a in 0..m {
                    hess[(a * m + a) * d + m] = coeffs[a];
                }
            }
            Height::Custom(_) => return false,
        }
        true
    }
}

/// Radial projection of one face of the cube `[-1,1]^d` onto an ellipsoid.
///
/// The face is `{y : y_axis = sign}`; its free coordinates are `scale · w`
/// where `w = u` or, with `disk`, the elliptical square-to-disk image of `u`.
/// The point is `x_q = semi_axes[q] · y_q / |y|`. With `disk` and
/// `scale = tan α` the face covers exactly the spherical cap of half-angle α.
#[derive(Debug, Clone)]
pub struct ProjectedFaceMap {
    pub d: usize,
    pub axis: usize,
    pub sign: f64,
    pub semi_axes: Vec<f64>,
    pub scale: f64,
    pub disk: bool,
}

impl ProjectedFaceMap {
    fn ambient_index(&self, j: usize) -> usize {
        if j < self.axis {
            j
        } else {
            j + 1
        }
    }

    /// Square-to-disk map with Jacobian `wj[i*m + a]` and, when requested,
    /// Hessian `wh[(a*m + b)*m + i]`.
    fn inner(&self, u: &[f64], w: &mut [f64], wj: &mut [f64], mut wh: Option<&mut [f64]>) {
        let m = self.d - 1;
        wj.iter_mut().for_each(|v| *v = 0.0);
        if let Some(wh) = wh.as_deref_mut() {
            wh.iter_mut().for_each(|v| *v = 0.0);
        }
        if !self.disk || m == 1 {
            w[..m].copy_from_slice(&u[..m]);
            for i in 0..m {
                wj[i * m + i] = 1.0;
            }
            return;
        }
        for i in 0..m {
            // q_i = 1 − ½ Σ_{j≠i} u_j² + ⅓ Σ_{j<k; j,k≠i} u_j² u_k²
            let mut q = 1.0;
            let mut others = [0usize; 8];
            let mut n_others = 0;
            for j in (0..m).filter(|&j| j != i) {
                others[n_others] = j;
                n_others += 1;
            }
            let others = &others[..n_others];
            for &j in others {
                q -= 0.5 * u[j] * u[j];
            }
            for (p, &j) in others.iter().enumerate() {
                for &k in &others[p + 1..] {
                    q += u[j] * u[j] * u[k] * u[k] / 3.0;
                }
            }
            let mut qa = [0.0; 8];
            let mut qab = [0.0; 64];
            for &a in others {
                let rest: f64 = others.iter().filter(|&&k| k != a).map(|&k| u[k] * u[k]).sum();
                qa[a] = -u[a] + 2.0 / 3.0 * u[a] * rest;
                qab[a * m + a] = -1.0 + 2.0 / 3.0 * rest;
                for &b in others {
                    if b != a {
                        qab[a * m + b] = 4.0 / 3.0 * u[a] * u[b];
                    }
                }
            }
            let sq = q.sqrt();
            w[i] = u[i] * sq;
            for a in 0..m {
                let delta = if a == i { 1.0 } else { 0.0 };
                wj[i * m + a] = delta * sq + u[i] * qa[a] / (2.0 * sq);
            }
            let Some(wh) = wh.as_deref_mut() else {
                continue;
            };
            for a in 0..m {
                for b in 0..m {
                    let da = if a == i { 1.0 } else { 0.0 };
                    let db = if b == i { 1.0 } else { 0.0 };
                    wh[(a * m + b) * m + i] = da * qa[b] / (2.0 * sq)
                        + db * qa[a] / (2.0 * sq)
                        + u[i] * (qab[a * m + b] / (2.0 * sq) - qa[a] * qa[b] / (4.0 * q * sq));
                }
            }
        }
    }

    fn unit_point(&self, w: &[f64], s: &mut [f64]) -> f64 {
        let m = self.d - 1;
        s[self.axis] = self.sign;
        for j in 0..m {
            s[self.ambient_index(j)] = self.scale * w[j];
        }
        let rho = s.iter().map(|t| t * t).sum::<f64>().sqrt();
        s.iter_mut().for_each(|t| *t /= rho);
        rho
    }
}

impl ChartMap for ProjectedFaceMap {
    fn ambient_dim(&self) -> usize {
        self.d
    }

    fn embed(&self, u: &[f64], x: &mut [f64]) {
        let m = self.d - 1;
        let mut w = [0.0; 8];
        let mut wj = [0.0; 64];
        if self.disk {
            self.inner(u, &mut w, &mut wj[..m * m], None);
        } else {
            w[..m].copy_from_slice(&u[..m]);
        }
        self.unit_point(&w[..m], x);
        for (q, xq) in x.iter_mut().enumerate() {
            *xq *= self.semi_axes[q];
        }
    }

    fn jacobian(&self, u: &[f64], jac: &mut [f64]) -> bool {
        let d = self.d;
        let m = d - 1;
        let mut w = [0.0; 8];
        let mut wj = [0.0; 64];
        self.inner(u, &mut w, &mut wj[..m * m], None);
        let mut s = [0.0; 8];
        let rho = self.unit_point(&w[..m], &mut s[..d]);
        for q in 0..d {
            for a in 0..m {
                let mut acc = 0.0;
                for j in 0..m {
                    let p = self.ambient_index(j);
                    let delta = if q == p { 1.0 } else { 0.0 };
                    let g = self.scale * (delta - s[q] * s[p]) / rho;
                    acc += g * wj[j * m + a];
                }
                jac[q * m + a] = self.semi_axes[q] * acc;
            }
        }
        true
    }

    fn hessian(&self, u: &[f64], hess: &mut [f64]) -> bool {
        let d = self.d;
        let m = d - 1;
        let mut w = [0.0; 8];
        let mut wj = [0.0; 64];
        let mut wh = [0.0; 512];
        self.inner(u, &mut w, &mut wj[..m * m], Some(&mut wh[..m * m * m]));
        let mut s = [0.0; 8];
        let rho = self.unit_point(&w[..m], &mut s[..d]);
        let sc = self.scale;
        for q in 0..d {
            // first and second derivatives of s_q in w
            let mut g1 = [0.0; 8];
            let mut g2 = [0.0; 64];
            for i in 0..m {
                let p = self.ambient_index(i);
                let dqp = if q == p { 1.0 } else { 0.0 };
                g1[i] = sc * (dqp - s[q] * s[p]) / rho;
                for j in 0..m {
                    let r = self.ambient_index(j);
                    let dqr = if q == r { 1.0 } else { 0.0 };
                    let dpr = if p == r { 1.0 } else { 0.0 };
                    g2[i * m + j] =
                        sc * sc * (-dqp * s[r] - dqr * s[p] - dpr * s[q] + 3.0 * s[q] * s[p] * s[r]) / (rho * rho);
                }
            }
            for a in 0..m {
                for b in 0..m {
                    let mut acc = 0.0;
                    for i in 0..m {
                        for j in 0..m {
                            acc += g2[i * m + j] * wj[i * m + a] * wj[j * m + b];
                        }
                        acc += g1[i] * wh[(a * m + b) * m + i];
                    }
                    hess[(a * m + b) * d + q] = self.semi_axes[q] * acc;
                }
            }
        }
        true
    }
}
