use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::surface::maps::figure1_profile;
use crate::surface::{Chart, Surface, SurfacePoint};

/// Local second-order geometry at one point.
///
/// `second_form` is `II_ab = n · ∂_a∂_b χ` for the stored normal `n`, and the
/// principal curvatures are the eigenvalues of `I⁻¹ II`. With this sign
/// convention the unit sphere has `κ_i = −1` for the outward normal (so
/// `K = +1` in ℝ³) and `κ_i = +1` for the inward one. Near the point the
/// surface is the graph of `½ yᵀ II y` over its tangent plane in direction
/// `n`, which is what the stationary-phase signature refers to.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeData {
    pub point: SurfacePoint,
    pub normal: Vec<f64>,
    pub first_form: Vec<f64>,
    pub second_form: Vec<f64>,
    /// Ascending.
    pub principal_curvatures: Vec<f64>,
    pub gaussian_curvature: f64,
    pub signature: i32,
}

impl ShapeData {
    /// `|det II|^{1/2}` as used in the stationary-phase amplitude, relative to
    /// the area element: `|K|^{1/2}`.
    pub fn abs_curvature_sqrt(&self) -> f64 {
        self.gaussian_curvature.abs().sqrt()
    }

    /// The same data for the opposite normal.
    pub fn flipped(&self) -> ShapeData {
        let m = self.principal_curvatures.len();
        let mut kappa: Vec<f64> = self.principal_curvatures.iter().map(|k| -k).collect();
        kappa.reverse();
        ShapeData {
            point: self.point.clone(),
            normal: self.normal.iter().map(|v| -v).collect(),
            first_form: self.first_form.clone(),
            second_form: self.second_form.iter().map(|v| -v).collect(),
            principal_curvatures: kappa,
            gaussian_curvature: if m % 2 == 0 { self.gaussian_curvature } else { -self.gaussian_curvature },
            signature: -self.signature,
        }
    }
}

/// Shape data on chart `chart` of `surface`, with the normal oriented so that
/// `n · orient_toward > 0`.
pub fn shape_data(surface: &Surface, chart: usize, u: &[f64], orient_toward: &[f64]) -> Result<ShapeData> {
    let c = surface.chart(chart)?;
    if !c.domain().contains(u) {
        return Err(Error::OutsideDomain { chart, u: u.to_vec() });
    }
    chart_shape(c, chart, u, orient_toward)
}

/// [`shape_data`] on a bare chart; `index` is recorded in the point.
pub fn chart_shape(chart: &Chart, index: usize, u: &[f64], orient_toward: &[f64]) -> Result<ShapeData> {
    let d = chart.ambient_dim();
    let m = d - 1;
    if orient_toward.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: orient_toward.len() });
    }
    let jac = chart.jacobian(u);
    let hess = chart.hessian(u);
    let mut normal = vec![0.0; d];
    linalg::cross_normal(d, &jac, &mut normal);
    let len = linalg::norm(&normal);
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::ValidationFailed {
            chart: index,
            u: u.to_vec(),
            reason: "Jacobian is rank deficient".into(),
        });
    }
    normal.iter_mut().for_each(|v| *v /= len);
    let along = linalg::dot(&normal, orient_toward);
    if along.abs() <= 1e-12 * linalg::norm(orient_toward) {
        return Err(Error::AmbiguousOrientation { u: u.to_vec() });
    }
    if along < 0.0 {
        normal.iter_mut().for_each(|v| *v = -*v);
    }
    let mut first = vec![0.0; m * m];
    linalg::gram(d, m, &jac, &mut first);
    let second = second_form(d, &hess, &normal);
    let kappa = linalg::generalized_sym_eigenvalues(m, &second, &first).ok_or_else(|| Error::ValidationFailed {
        chart: index,
        u: u.to_vec(),
        reason: "first fundamental form is not positive definite".into(),
    })?;
    let mut scratch = first.clone();
    let det_i = linalg::det_in_place(m, &mut scratch);
    let mut scratch = second.clone();
    let det_ii = linalg::det_in_place(m, &mut scratch);
    let scale = kappa.iter().fold(0.0f64, |a, k| a.max(k.abs()));
    let zero = 1e-12 * scale;
    let signature =
        kappa.iter().filter(|k| **k > zero).count() as i32 - kappa.iter().filter(|k| **k < -zero).count() as i32;
    let point =
        SurfacePoint { chart: index, u: u.to_vec(), position: chart.embed(u), area_element: det_i.max(0.0).sqrt() };
    Ok(ShapeData {
        point,
        normal,
        first_form: first,
        second_form: second,
        principal_curvatures: kappa,
        gaussian_curvature: det_ii / det_i,
        signature,
    })
}

fn second_form(d: usize, hess: &[f64], normal: &[f64]) -> Vec<f64> {
    let m = d - 1;
    (0..m * m).map(|ab| linalg::dot(&hess[ab * d..(ab + 1) * d], normal)).collect()
}

/// Gaussian curvature for the normal `cross_normal` produces, or `None` where
/// the chart is not an immersion.
pub fn gaussian_curvature(chart: &Chart, u: &[f64]) -> Option<f64> {
    let d = chart.ambient_dim();
    let m = d - 1;
    let jac = chart.jacobian(u);
    let mut normal = vec![0.0; d];
    linalg::cross_normal(d, &jac, &mut normal);
    let len = linalg::norm(&normal);
    if !(len > 0.0) || !len.is_finite() {
        return None;
    }
    normal.iter_mut().for_each(|v| *v /= len);
    let hess = chart.hessian(u);
    let mut second = second_form(d, &hess, &normal);
    let mut first = vec![0.0; m * m];
    linalg::gram(d, m, &jac, &mut first);
    let det_i = linalg::det_in_place(m, &mut first);
    let det_ii = linalg::det_in_place(m, &mut second);
    let k = det_ii / det_i;
    k.is_finite().then_some(k)
}

/// `|K|` of the figure-1 surface of revolution in ℝ^d at profile angle θ:
/// `(17 + 6 cos θ + 4 cos³ θ) / (a'² + a²)^{(d+1)/2}`. For `d = 2` this is
/// the curvature of the plane curve itself.
pub fn curvature_closed_form_revolution(theta: f64, d: usize) -> f64 {
    let [a, da, ..] = figure1_profile(theta);
    let c = theta.cos();
    let num = 17.0 + 6.0 * c + 4.0 * c * c * c;
    num / (da * da + a * a).powf(0.5 * (d as f64 + 1.0))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::surface::catalog;

    #[test]
    fn closed_form_values() {
        assert!((curvature_closed_form_revolution(0.0, 3) - 1.0 / 3.0).abs() < 1e-15);
        assert!((curvature_closed_form_revolution(PI, 3) - 7.0).abs() < 1e-12);
        assert!((curvature_closed_form_revolution(0.0, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unit_sphere_convention() {
        let s = catalog::sphere(3).unwrap();
        // top face centre is the north pole
        let top = s.charts().iter().position(|c| (c.embed(&[0.0, 0.0])[2] - 1.0).abs() < 1e-14).unwrap();
        let out = shape_data(&s, top, &[0.0, 0.0], &[0.0, 0.0, 1.0]).unwrap();
        assert!(out.principal_curvatures.iter().all(|k| (k + 1.0).abs() < 1e-12));
        assert!((out.gaussian_curvature - 1.0).abs() < 1e-12);
        assert_eq!(out.signature, -2);
        let inward = shape_data(&s, top, &[0.0, 0.0], &[0.0, 0.0, -1.0]).unwrap();
        assert!(inward.principal_curvatures.iter().all(|k| (k - 1.0).abs() < 1e-12));
        assert_eq!(inward.signature, 2);
    }

    #[test]
    fn tangent_orientation_is_ambiguous() {
        let c = catalog::circle(1.0).unwrap();
        let r = shape_data(&c, 0, &[0.0], &[0.0, 1.0]);
        assert!(matches!(r, Err(Error::AmbiguousOrientation { .. })));
    }

    #[test]
    fn flipping_matches_recomputation() {
        let s = catalog::revolution_surface(4).unwrap();
        let u = [0.7, 1.1, 2.0];
        let a = shape_data(&s, 0, &u, &[0.3, 0.2, -0.1, 1.0]).unwrap();
        let n: Vec<f64> = a.normal.iter().map(|v| -v).collect();
        let b = shape_data(&s, 0, &u, &n).unwrap();
        let f = a.flipped();
        assert_eq!(b.signature, f.signature);
        assert!((b.gaussian_curvature - f.gaussian_curvature).abs() < 1e-12 * f.gaussian_curvature.abs());
        for (x, y) in b.principal_curvatures.iter().zip(&f.principal_curvatures) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
