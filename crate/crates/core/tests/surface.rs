use std::f64::consts::PI;
use std::sync::Arc;

use curveft::surface::maps::figure1_profile;
use curveft::surface::{Chart, ChartMap, Height, Interval, OverlapPolicy, ParamBox};
use curveft::{
    catalog, surface_measure_weight, total_mass, validate_chart, validate_surface, QuadratureConfig,
    SubsurfaceSelection, Surface, SurfaceDocument,
};

#[derive(Debug)]
struct Line;

impl ChartMap for Line {
    fn ambient_dim(&self) -> usize {
        2
    }

    fn embed(&self, u: &[f64], x: &mut [f64]) {
        x[0] = u[0];
        x[1] = 0.0;
    }
}

fn catalog_surfaces() -> Vec<Surface> {
    vec![
        catalog::circle(1.5).unwrap(),
        catalog::sphere(3).unwrap(),
        catalog::sphere(4).unwrap(),
        catalog::ellipsoid(&[1.0, 2.0, 0.5]).unwrap(),
        catalog::hemisphere(3).unwrap().upper,
        catalog::cap_graph(3, Height::SphereCap { radius: 1.0 }, &[(-0.3, 0.3), (-0.2, 0.4)]).unwrap(),
        catalog::cap_graph(2, Height::Quadratic { coeffs: vec![2.0] }, &[(-1.0, 1.0)]).unwrap(),
        catalog::spherical_cap(3, PI / 6.0).unwrap(),
        catalog::spherical_cap(4, PI / 5.0).unwrap(),
        catalog::figure1_curve().unwrap(),
        catalog::revolution_surface(2).unwrap(),
        catalog::revolution_surface(3).unwrap(),
        catalog::revolution_surface(4).unwrap(),
    ]
}

#[test]
fn circle_chart_validates_with_unit_curvature() {
    let c = catalog::circle(1.0).unwrap();
    let r = validate_chart(&c.charts()[0], 64).unwrap();
    assert!(r.passed);
    assert!((r.min_abs_curvature - 1.0).abs() < 1e-12);
    assert!((r.max_abs_curvature - 1.0).abs() < 1e-12);
    assert_eq!(r.samples, 64);
}

#[test]
fn flat_chart_fails_validation() {
    let chart = Chart::new(Arc::new(Line), ParamBox::new(vec![Interval::free(-1.0, 1.0)]));
    let r = validate_chart(&chart, 16).unwrap();
    assert!(!r.passed);
    assert!(r.min_abs_curvature < 1e-8);
    let err = r.check().unwrap_err();
    assert!(err.to_string().contains("curvature"), "{err}");
}

#[test]
fn figure1_chart_validates_with_closed_form_minimum() {
    let c = catalog::figure1_curve().unwrap();
    let r = validate_chart(&c.charts()[0], 512).unwrap();
    assert!(r.passed);
    // brute-force minimum of the closed form on a fine grid
    let min = (0..200_000)
        .map(|i| curveft::curvature_closed_form_revolution(2.0 * PI * i as f64 / 200_000.0, 2))
        .fold(f64::INFINITY, f64::min);
    assert!(min > 0.0);
    assert!(r.min_abs_curvature >= min * (1.0 - 1e-9));
    assert!(r.min_abs_curvature <= min * 1.01);
}

#[test]
fn validation_rejects_too_few_samples() {
    let c = catalog::circle(1.0).unwrap();
    assert!(validate_chart(&c.charts()[0], 1).is_err());
}

#[test]
fn catalog_surfaces_pass_validation() {
    for s in catalog_surfaces() {
        let samples = if s.ambient_dim() <= 3 { 24 } else { 10 };
        for r in validate_surface(&s, samples).unwrap() {
            assert!(r.passed, "{}: {:?}", s.name, r.failure);
        }
    }
}

#[test]
fn finite_differences_match_analytic_derivatives() {
    for s in catalog_surfaces() {
        let fd = s.finite_difference();
        for (a, b) in s.charts().iter().zip(fd.charts()) {
            for u in a.domain().midpoint_grid(5) {
                let ja = a.jacobian(&u);
                let jb = b.jacobian(&u);
                let scale = ja.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (x, y) in ja.iter().zip(&jb) {
                    assert!((x - y).abs() <= 1e-6 * scale, "{}: jacobian {x} vs {y} at {u:?}", s.name);
                }
                let ha = a.hessian(&u);
                let hb = b.hessian(&u);
                let scale = ha.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);
                for (x, y) in ha.iter().zip(&hb) {
                    assert!((x - y).abs() <= 1e-6 * scale, "{}: hessian {x} vs {y} at {u:?}", s.name);
                }
            }
        }
    }
}

#[test]
fn jacobian_integrates_back_to_the_embedding() {
    // χ(u) − χ(c) = ∫₀¹ J(c + t(u − c)) (u − c) dt
    let rule = curveft::quadrature::gauss_legendre(40);
    for s in catalog_surfaces() {
        for chart in s.charts() {
            let d = chart.ambient_dim();
            let m = d - 1;
            let c = chart.domain().center();
            for u in chart.domain().midpoint_grid(3) {
                let mut got = vec![0.0; d];
                for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                    let s01 = 0.5 * (t + 1.0);
                    let v: Vec<f64> = c.iter().zip(&u).map(|(a, b)| a + s01 * (b - a)).collect();
                    let j = chart.jacobian(&v);
                    for q in 0..d {
                        for a in 0..m {
                            got[q] += 0.5 * w * j[q * m + a] * (u[a] - c[a]);
                        }
                    }
                }
                let want: Vec<f64> = chart.embed(&u).iter().zip(chart.embed(&c)).map(|(a, b)| a - b).collect();
                let scale = want.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).abs() <= 1e-6 * scale, "{}: {g} vs {w}", s.name);
                }
            }
        }
    }
}

#[test]
fn surface_points_recompute() {
    let s = catalog::sphere(3).unwrap();
    let p = s.point(4, &[0.2, -0.3]).unwrap();
    assert_eq!(p.position, s.charts()[4].embed(&p.u));
    assert!(s.point(4, &[1.5, 0.0]).is_err());
}

#[test]
fn measure_weights() {
    let c = catalog::circle(1.0).unwrap();
    for t in [0.0, 1.0, 4.0] {
        let p = c.point(0, &[t]).unwrap();
        assert!((surface_measure_weight(&c, &p).unwrap() - 1.0).abs() < 1e-14);
    }
    // graph chart at the critical point of h
    let g = catalog::cap_graph(3, Height::SphereCap { radius: 1.0 }, &[(-0.5, 0.5), (-0.5, 0.5)]).unwrap();
    let p = g.point(0, &[0.0, 0.0]).unwrap();
    assert!((surface_measure_weight(&g, &p).unwrap() - 1.0).abs() < 1e-14);
    // two coincident copies declared as overlapping
    let chart = c.charts()[0].clone();
    let twice = Surface::new("two circles", vec![chart.clone(), chart], OverlapPolicy::Declared(vec![(0, 1)])).unwrap();
    let p = twice.point(1, &[2.0]).unwrap();
    assert!((surface_measure_weight(&twice, &p).unwrap() - 0.5).abs() < 1e-14);
    let mut outside = g.point(0, &[0.1, 0.1]).unwrap();
    outside.u = vec![0.7, 0.0];
    assert!(surface_measure_weight(&g, &outside).is_err());
}

#[test]
fn masses() {
    let q = QuadratureConfig::default();
    let c = catalog::circle(1.0).unwrap();
    assert!((total_mass(&c, None, &q).unwrap() - 2.0 * PI).abs() < 1e-10);
    let s = catalog::sphere(3).unwrap();
    assert!((total_mass(&s, None, &q).unwrap() - 4.0 * PI).abs() < 1e-8);
    let s4 = catalog::sphere(4).unwrap();
    assert!((total_mass(&s4, None, &q).unwrap() - 2.0 * PI * PI).abs() < 1e-8);

    let f = catalog::figure1_curve().unwrap();
    let speed = |t: f64| {
        let p = figure1_profile(t);
        // [a, a', a'', b, b', b'']
        (p[1] * p[1] + p[4] * p[4]).sqrt()
    };
    let want = curveft::reference::adaptive_simpson(&speed, 0.0, 2.0 * PI, 1e-12);
    assert!((total_mass(&f, None, &q).unwrap() - want).abs() < 1e-9 * want);
}

#[test]
fn mass_is_additive_and_halves_on_full_overlap() {
    let q = QuadratureConfig::default();
    let s = catalog::sphere(3).unwrap();
    let per_chart: f64 = s
        .charts()
        .iter()
        .map(|c| {
            let one = Surface::new("face", vec![c.clone()], OverlapPolicy::Disjoint).unwrap();
            total_mass(&one, None, &q).unwrap()
        })
        .sum();
    assert!((per_chart - total_mass(&s, None, &q).unwrap()).abs() < 1e-10);

    let c = catalog::circle(2.0).unwrap().charts()[0].clone();
    let disjoint = Surface::new("two", vec![c.clone(), c.clone()], OverlapPolicy::Disjoint).unwrap();
    let declared = Surface::new("two", vec![c.clone(), c], OverlapPolicy::Declared(vec![(0, 1)])).unwrap();
    let a = total_mass(&disjoint, None, &q).unwrap();
    let b = total_mass(&declared, None, &q).unwrap();
    assert!((a - 8.0 * PI).abs() < 1e-9 && (b - 4.0 * PI).abs() < 1e-9);
}

#[test]
fn windowed_mass() {
    let q = QuadratureConfig::default();
    let c = catalog::circle(1.0).unwrap();
    let w = catalog::bump_window(&c, 0, vec![(1.0, 2.0)]).unwrap();
    let got = total_mass(&c, Some(&w), &q).unwrap();
    let want = curveft::reference::adaptive_simpson(&|t: f64| w.value(&[t]), 1.0, 2.0, 1e-13);
    assert!((got - want).abs() < 1e-10);
    let center = w.value(&w.center());
    assert!(center > 0.0 && center <= 1.0);
    assert_eq!(w.value(&[0.99]), 0.0);
    assert_eq!(w.value(&[2.0]), 0.0);
}

#[test]
fn subsurface_selection_respects_margin() {
    let g = catalog::cap_graph(3, Height::SphereCap { radius: 1.0 }, &[(-0.5, 0.5), (-0.5, 0.5)]).unwrap();
    assert!(SubsurfaceSelection::new(&g, vec![Some(vec![(-0.4, 0.4), (-0.4, 0.4)])], 0.05).is_ok());
    assert!(SubsurfaceSelection::new(&g, vec![Some(vec![(-0.48, 0.4), (-0.4, 0.4)])], 0.05).is_err());
    assert!(SubsurfaceSelection::new(&g, vec![Some(vec![(-0.4, 0.4), (-0.4, 0.4)])], 0.0).is_err());
    let inset = SubsurfaceSelection::inset(&g, 0.1).unwrap();
    let b = inset.boxes()[0].as_ref().unwrap();
    assert!((b.axes[0].lo + 0.4).abs() < 1e-15 && (b.axes[1].hi - 0.4).abs() < 1e-15);
}

#[test]
fn surfaces_load_from_json() {
    let doc = SurfaceDocument::from_json(
        r#"{"surface": {"kind": "sphere", "params": {"d": 3}},
            "window": {"chart": 4, "support": [[-0.5, 0.5], [-0.5, 0.5]]}}"#,
    )
    .unwrap();
    let (s, w) = doc.build().unwrap();
    assert_eq!(s.charts().len(), 6);
    assert_eq!(w.unwrap().floor, 0.5);

    let doc = SurfaceDocument::from_json(r#"{"surface": {"kind": "figure1_curve"}}"#).unwrap();
    let (s, _) = doc.build().unwrap();
    assert_eq!(s.charts()[0].embed(&[0.0]), vec![3.0, 0.0]);

    assert!(SurfaceDocument::from_json(r#"{"surface": {"kind": "torus", "params": {}}}"#).is_err());
    assert!(SurfaceDocument::from_json(r#"{"surface": {"kind": "circle", "params": {"r": 1, "x": 2}}}"#).is_err());
    let bad_window = SurfaceDocument::from_json(
        r#"{"surface": {"kind": "circle", "params": {}}, "window": {"chart": 0, "support": [[-1, 1]]}}"#,
    )
    .unwrap();
    assert!(bad_window.build().is_err());
}
