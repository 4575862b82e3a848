//! Concrete surfaces and windows.
//!
//! Closed spheres and ellipsoids use the cube-sphere atlas: the `2d` faces of
//! `[-1,1]^d` projected radially, glued along their edges. This avoids pole
//! singularities so every chart is an immersion up to its boundary.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use super::chart::{Chart, Interval, ParamBox, Side};
use super::maps::{CircleMap, GraphMap, Height, ProjectedFaceMap, RevolutionMap};
use super::window::Window;
use super::{check_window, OverlapPolicy, Surface};
use crate::error::{Error, Result};

fn check_dim(d: usize) -> Result<()> {
    if !(2..=8).contains(&d) {
        return Err(Error::invalid(format!("ambient dimension {d} outside supported range 2..=8")));
    }
    Ok(())
}

/// Circle of radius `r`, parameterised by angle on `[0, 2π)`.
pub fn circle(r: f64) -> Result<Surface> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("circle radius must be positive"));
    }
    let chart = Chart::new(Arc::new(CircleMap { radius: r }), ParamBox::new(vec![Interval::periodic(0.0, 2.0 * PI)]));
    Surface::new(format!("circle(r={r})"), vec![chart], OverlapPolicy::Disjoint)
}

/// Unit sphere `S^{d-1} ⊂ ℝ^d`.
pub fn sphere(d: usize) -> Result<Surface> {
    check_dim(d)?;
    ellipsoid(&vec![1.0; d])
}

/// Boundary of the ellipsoid with the given semi-axes.
pub fn ellipsoid(semi_axes: &[f64]) -> Result<Surface> {
    let d = semi_axes.len();
    check_dim(d)?;
    if semi_axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::invalid("semi-axes must be positive"));
    }
    let mut charts = Vec::with_capacity(2 * d);
    for axis in 0..d {
        for sign in [1.0, -1.0] {
            let map = face(d, axis, sign, semi_axes);
            charts.push(Chart::new(Arc::new(map), ParamBox::new(vec![Interval::glued(-1.0, 1.0); d - 1])));
        }
    }
    Surface::new(format!("ellipsoid({semi_axes:?})"), charts, OverlapPolicy::Disjoint)
}

fn face(d: usize, axis: usize, sign: f64, semi_axes: &[f64]) -> ProjectedFaceMap {
    ProjectedFaceMap { d, axis, sign, semi_axes: semi_axes.to_vec(), scale: 1.0, disk: false }
}

/// A closed surface together with its upper half `S₊ = S ∩ {x_d ≥ 0}`.
#[derive(Debug, Clone)]
pub struct HemispherePair {
    pub full: Surface,
    pub upper: Surface,
}

/// Unit sphere and its upper hemisphere.
pub fn hemisphere(d: usize) -> Result<HemispherePair> {
    check_dim(d)?;
    hemi_ellipsoid(&vec![1.0; d])
}

/// Ellipsoid (centrally symmetric) and its upper half. The upper half uses
/// the top cube face plus the upper halves of the side faces; the equator is
/// a free side of the side faces.
pub fn hemi_ellipsoid(semi_axes: &[f64]) -> Result<HemispherePair> {
    let full = ellipsoid(semi_axes)?;
    let d = semi_axes.len();
    let m = d - 1;
    let mut charts = Vec::with_capacity(2 * d - 1);
    charts
        .push(Chart::new(Arc::new(face(d, d - 1, 1.0, semi_axes)), ParamBox::new(vec![Interval::glued(-1.0, 1.0); m])));
    for axis in 0..d - 1 {
        for sign in [1.0, -1.0] {
            // the face parameter carrying x_d is the last one
            let mut axes = vec![Interval::glued(-1.0, 1.0); m];
            axes[m - 1] = Interval { lo: 0.0, hi: 1.0, periodic: false, lo_side: Side::Free, hi_side: Side::Glued };
            charts.push(Chart::new(Arc::new(face(d, axis, sign, semi_axes)), ParamBox::new(axes)));
        }
    }
    let upper = Surface::new(format!("upper half of {}", full.name), charts, OverlapPolicy::Disjoint)?;
    Ok(HemispherePair { full, upper })
}

/// Graph `{(x, h(x)) : x ∈ base}` over a box in `ℝ^{d-1}`; all sides free.
pub fn cap_graph(d: usize, height: Height, base: &[(f64, f64)]) -> Result<Surface> {
    check_dim(d)?;
    if base.len() != d - 1 {
        return Err(Error::DimensionMismatch { expected: d - 1, got: base.len() });
    }
    if base.iter().any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
        return Err(Error::invalid("graph base must be a nonempty finite box"));
    }
    match &height {
        Height::SphereCap { radius } => {
            let r2 = base.iter().map(|&(lo, hi)| lo.abs().max(hi.abs()).powi(2)).sum::<f64>();
            if !(*radius > 0.0) || r2 >= radius * radius {
                return Err(Error::invalid("graph base must lie strictly inside the sphere's equatorial ball"));
            }
        }
        Height::Quadratic { coeffs } if coeffs.len() != d - 1 => {
            return Err(Error::DimensionMismatch { expected: d - 1, got: coeffs.len() });
        }
        _ => {}
    }
    let domain = ParamBox::new(base.iter().map(|&(lo, hi)| Interval::free(lo, hi)).collect());
    let chart = Chart::new(Arc::new(GraphMap { d, height: height.clone() }), domain);
    Surface::new(format!("graph({height:?})"), vec![chart], OverlapPolicy::Disjoint)
}

/// Cap `{x ∈ S^{d-1} : angle(x, e_d) ≤ half_angle}` of the unit sphere as a
/// single chart over `[-1,1]^{d-1}` (square-to-disk map, then gnomonic lift).
pub fn spherical_cap(d: usize, half_angle: f64) -> Result<Surface> {
    if !(2..=4).contains(&d) {
        return Err(Error::invalid("spherical caps are supported for d = 2, 3, 4"));
    }
    if !(half_angle > 0.0 && half_angle < FRAC_PI_2) {
        return Err(Error::invalid("cap half-angle must lie in (0, π/2)"));
    }
    let map =
        ProjectedFaceMap { d, axis: d - 1, sign: 1.0, semi_axes: vec![1.0; d], scale: half_angle.tan(), disk: true };
    let chart = Chart::new(Arc::new(map), ParamBox::new(vec![Interval::free(-1.0, 1.0); d - 1]));
    Surface::new(format!("spherical_cap(d={d}, half_angle={half_angle})"), vec![chart], OverlapPolicy::Disjoint)
}

/// The closed plane curve `(cos θ + 2 cos 2θ, sin θ + sin 2θ)`.
pub fn figure1_curve() -> Result<Surface> {
    let chart =
        Chart::new(Arc::new(RevolutionMap::new(2, 1.0)), ParamBox::new(vec![Interval::periodic(0.0, 2.0 * PI)]));
    Surface::new("figure1_curve", vec![chart], OverlapPolicy::Disjoint)
}

/// `(a(θ) ω, b(θ))` with `(a, b)` the figure-1 profile and `ω ∈ S^{d-2}`.
///
/// Parameters are `(θ, α_0, …, α_{d-3})`: θ and the last angle are periodic,
/// the remaining polar angles run over `[0, π]`. For `d = 2` the surface is
/// the figure-1 curve together with its mirror image `(-a, b)`.
pub fn revolution_surface(d: usize) -> Result<Surface> {
    check_dim(d)?;
    let theta = Interval::periodic(0.0, 2.0 * PI);
    if d == 2 {
        let charts = [1.0, -1.0]
            .iter()
            .map(|&s| Chart::new(Arc::new(RevolutionMap::new(2, s)), ParamBox::new(vec![theta.clone()])))
            .collect();
        return Surface::new("revolution_surface(d=2)", charts, OverlapPolicy::Disjoint);
    }
    let mut axes = vec![theta];
    for _ in 0..d - 3 {
        axes.push(Interval::glued(0.0, PI));
    }
    axes.push(Interval::periodic(0.0, 2.0 * PI));
    let chart = Chart::new(Arc::new(RevolutionMap::new(d, 1.0)), ParamBox::new(axes));
    Surface::new(format!("revolution_surface(d={d})"), vec![chart], OverlapPolicy::Disjoint)
}

/// Bump window on `chart` supported on `support`, which must lie inside the
/// chart domain. Plateau 0 and floor 1/2.
pub fn bump_window(surface: &Surface, chart: usize, support: Vec<(f64, f64)>) -> Result<Window> {
    let w = Window::new(chart, support, 0.0, 0.5)?;
    check_window(surface, &w)?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_positions() {
        let c = figure1_curve().unwrap();
        let p = c.charts()[0].embed(&[0.0]);
        assert!((p[0] - 3.0).abs() < 1e-15 && p[1].abs() < 1e-15);
        let r = revolution_surface(3).unwrap();
        let p = r.charts()[0].embed(&[0.0, 0.0]);
        assert!((p[0] - 3.0).abs() < 1e-15 && p[1].abs() < 1e-15 && p[2].abs() < 1e-15);
    }

    #[test]
    fn cube_sphere_points_are_on_the_sphere() {
        for d in 2..=4 {
            let s = sphere(d).unwrap();
            assert_eq!(s.charts().len(), 2 * d);
            for c in s.charts() {
                for u in c.domain().grid(5) {
                    let x = c.embed(&u);
                    let r: f64 = x.iter().map(|t| t * t).sum::<f64>().sqrt();
                    assert!((r - 1.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn hemisphere_charts_stay_in_upper_half() {
        let h = hemisphere(3).unwrap();
        assert_eq!(h.upper.charts().len(), 5);
        for c in h.upper.charts() {
            for u in c.domain().grid(7) {
                assert!(c.embed(&u)[2] >= -1e-15);
            }
        }
    }

    #[test]
    fn spherical_cap_boundary_has_the_requested_angle() {
        let alpha = PI / 6.0;
        let s = spherical_cap(3, alpha).unwrap();
        let c = &s.charts()[0];
        for u in [[1.0, 0.3], [-0.2, 1.0], [1.0, 1.0], [-1.0, -0.7]] {
            let x = c.embed(&u);
            assert!((x[2].acos() - alpha).abs() < 1e-12, "{u:?}");
        }
        assert!((c.embed(&[0.0, 0.0])[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(circle(0.0).is_err());
        assert!(sphere(1).is_err());
        assert!(spherical_cap(3, 2.0).is_err());
        assert!(cap_graph(3, Height::SphereCap { radius: 1.0 }, &[(-1.0, 1.0), (0.0, 0.5)]).is_err());
        let s = circle(1.0).unwrap();
        assert!(bump_window(&s, 0, vec![(-1.0, 1.0)]).is_err());
        assert!(bump_window(&s, 0, vec![(1.0, 2.0)]).is_ok());
    }
}
