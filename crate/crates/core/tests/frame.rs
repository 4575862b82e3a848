use std::f64::consts::PI;

use curveft::fourier::linspace;
use curveft::frame::{divergence_partial_sum, energy_scan, frame_bounds_estimate, Spectrum};
use curveft::geometry::{NormalCone, SearchOptions};
use curveft::surface::Window;
use curveft::{
    catalog, cone_filter, cone_lower_bound_check, generate_spectrum, total_mass, Error, FourierCache, Measure,
    PhaseOptions, QuadratureConfig, Region, SpectrumSpec, StationaryPhase,
};
use proptest::prelude::*;

fn explicit(d: usize, points: Vec<Vec<f64>>) -> Spectrum {
    generate_spectrum(&SpectrumSpec::Explicit { points }, d, false).unwrap()
}

fn lattice(d: usize, radius: f64) -> Spectrum {
    generate_spectrum(&SpectrumSpec::LatticeBall { spacing: 1.0, radius }, d, false).unwrap()
}

#[test]
fn spectrum_examples() {
    let s = lattice(2, 2.5);
    assert_eq!(s.len(), 21);
    let axis = generate_spectrum(&SpectrumSpec::AxisLine { step: 1.0, radius: 3.0 }, 3, false).unwrap();
    let mut want = vec![vec![0.0, 0.0, 0.0]];
    for k in 1..=3 {
        want.push(vec![0.0, 0.0, -(k as f64)]);
        want.push(vec![0.0, 0.0, k as f64]);
    }
    assert_eq!(axis.points, want);
    let cone = SpectrumSpec::ConeLattice { axis: vec![1.0, 1.0, 0.0], half_angle: 0.0, spacing: 1.0, radius: 6.0 };
    let c = generate_spectrum(&cone, 3, true).unwrap();
    assert_eq!(c.len(), 8);
    assert!(c.points.iter().all(|p| p[0] == p[1] && p[2] == 0.0 && p[0] != 0.0));
    // regeneration is deterministic
    assert_eq!(generate_spectrum(&cone, 3, true).unwrap(), c);
}

#[test]
fn spectrum_csv_has_one_column_per_coordinate() {
    let mut buf = Vec::new();
    lattice(3, 1.0).write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda_1,lambda_2,lambda_3");
    assert_eq!(lines.len(), 1 + 7);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 3));
}

#[test]
fn bad_spectrum_parameters_are_rejected() {
    for spec in [
        SpectrumSpec::LatticeBall { spacing: 0.0, radius: 2.0 },
        SpectrumSpec::LatticeBall { spacing: 1.0, radius: -1.0 },
        SpectrumSpec::AxisLine { step: 1.0, radius: f64::NAN },
        SpectrumSpec::ConeLattice { axis: vec![0.0, 0.0], half_angle: 0.1, spacing: 1.0, radius: 3.0 },
        SpectrumSpec::ConeLattice { axis: vec![0.0, 1.0], half_angle: 2.0, spacing: 1.0, radius: 3.0 },
        SpectrumSpec::Explicit { points: vec![vec![f64::INFINITY, 0.0]] },
    ] {
        assert!(generate_spectrum(&spec, 2, false).is_err(), "{spec:?}");
    }
}

#[test]
fn integer_lattice_sum_grows_linearly() {
    // S(R) ≈ 2πR for Λ = ℤ², so S(2R)/S(R) → 2
    let s = lattice(2, 200.0);
    let r = divergence_partial_sum(&s, 2, &[50.0, 100.0]).unwrap();
    for p in &r.sums {
        let ratio = p.ratio.unwrap();
        assert!((ratio - 2.0).abs() < 0.1, "R = {}: {ratio}", p.radius);
        assert!((p.sum / (2.0 * PI * p.radius) - 1.0).abs() < 0.1);
    }
    // the origin is excluded
    assert_eq!(r.sums[0].count, s.points.iter().filter(|p| p.iter().map(|v| v * v).sum::<f64>() <= 2500.0).count() - 1);
}

#[test]
fn axis_sum_converges_to_basel() {
    let s = generate_spectrum(&SpectrumSpec::AxisLine { step: 1.0, radius: 1000.0 }, 3, false).unwrap();
    let r = divergence_partial_sum(&s, 3, &[10.0, 100.0, 1000.0]).unwrap();
    let limit = PI * PI / 3.0;
    let last = r.sums[2].sum;
    assert!((last - limit).abs() < 2e-3 && last < limit);
    // tail Σ_{n>N} 2/n² ≈ 2/N
    assert!(((limit - last) * 1000.0 - 2.0).abs() < 0.01);
    assert!(r.sums[0].ratio.unwrap() > 1.0 && r.sums[1].ratio.unwrap() < 1.005);
    assert!(divergence_partial_sum(&s, 3, &[10.0, 5.0]).is_err());
}

#[test]
fn energy_at_a_spectrum_point_exceeds_mass_squared() {
    let c = catalog::circle(1.0).unwrap();
    let m = Measure::new(&c);
    let cache = FourierCache::new();
    let s = lattice(2, 4.0);
    let grid: Vec<Vec<f64>> = s.points.iter().take(5).cloned().collect();
    let e = energy_scan(&m, &cache, &s, &grid).unwrap();
    let mass = total_mass(&c, None, &QuadratureConfig::default()).unwrap();
    for sample in &e.samples {
        assert!(sample.energy >= mass * mass * (1.0 - 1e-12));
    }
    let empty = explicit(2, vec![]);
    let z = energy_scan(&m, &cache, &empty, &grid).unwrap();
    assert!(z.samples.iter().all(|s| s.energy == 0.0) && z.max == 0.0);
    assert!(energy_scan(&m, &cache, &s, &[vec![0.0; 3]]).is_err());
}

#[test]
fn circle_energy_minimum_grows_with_radius() {
    let c = catalog::circle(1.0).unwrap();
    let m = Measure::new(&c);
    let cache = FourierCache::new();
    let grid: Vec<Vec<f64>> = linspace(0.0, 0.5, 4)
        .iter()
        .flat_map(|&a| linspace(0.0, 0.5, 4).into_iter().map(move |b| vec![a, b]))
        .collect();
    let small = energy_scan(&m, &cache, &lattice(2, 10.0), &grid).unwrap();
    let large = energy_scan(&m, &cache, &lattice(2, 20.0), &grid).unwrap();
    assert!(small.min > 0.0);
    assert!(large.min > 1.5 * small.min, "{} vs {}", large.min, small.min);
}

#[test]
fn cone_filter_on_full_and_capped_surfaces() {
    let sphere = catalog::sphere(3).unwrap();
    let full = NormalCone::new(&sphere, Region::Whole, SearchOptions::default()).unwrap();
    let s = lattice(3, 2.0);
    let p = cone_filter(&s, &full, 1e-3).unwrap();
    assert_eq!(p.inside.len(), s.len());
    assert!(p.outside.is_empty());

    let cap = catalog::spherical_cap(3, PI / 10.0).unwrap();
    let cone = NormalCone::new(&cap, Region::Whole, SearchOptions::default()).unwrap();
    let axis = generate_spectrum(&SpectrumSpec::AxisLine { step: 1.0, radius: 5.0 }, 3, false).unwrap();
    let p = cone_filter(&axis, &cone, 1e-3).unwrap();
    assert_eq!(p.inside.len(), axis.len());
    assert_eq!(p.strict_inside, axis.len());
}

#[test]
fn frame_bounds_in_one_dimension_equal_the_mass() {
    let c = catalog::circle(1.0).unwrap();
    let m = Measure::new(&c);
    let cache = FourierCache::new();
    let f = frame_bounds_estimate(&m, &cache, &explicit(2, vec![vec![0.0, 0.0]]), &[vec![0.0, 0.0]]).unwrap();
    let mass = 2.0 * PI;
    assert!((f.alpha_min - mass).abs() < 1e-10 && (f.alpha_max - mass).abs() < 1e-10);
    assert_eq!((f.h_size, f.lambda_size), (1, 1));
    assert_eq!(f.cond_g, 1.0);
    let json = serde_json::to_value(&f).unwrap();
    for key in ["H_size", "lambda_size", "alpha_min", "alpha_max", "cond_G"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn frame_bounds_refuse_bad_test_grids() {
    let c = catalog::circle(1.0).unwrap();
    let m = Measure::new(&c);
    let cache = FourierCache::new();
    let s = lattice(2, 3.0);
    let close = [vec![0.0, 0.0], vec![1e-7, 0.0]];
    assert!(matches!(frame_bounds_estimate(&m, &cache, &s, &close), Err(Error::SingularGram { .. })));
    let many: Vec<Vec<f64>> = (0..257).map(|k| vec![k as f64 * 0.01, 0.0]).collect();
    assert!(frame_bounds_estimate(&m, &cache, &s, &many).is_err());
    assert!(frame_bounds_estimate(&m, &cache, &s, &[]).is_err());
    assert!(frame_bounds_estimate(&m, &cache, &s, &[vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
}

#[test]
fn cap_window_lower_bound_holds_on_the_cone() {
    let s = catalog::sphere(2).unwrap();
    let w = catalog::bump_window(&s, 2, vec![(-0.3, 0.3)]).unwrap();
    let m = Measure::new(&s).with_window(&w).unwrap();
    let sp = StationaryPhase::new(&s, Some(&w), PhaseOptions::default()).unwrap();
    let level = NormalCone::new(&s, Region::WindowLevel(&w), SearchOptions::default()).unwrap();
    let mut lambdas: Vec<Vec<f64>> = linspace(10.0, 100.0, 12).into_iter().map(|t| vec![0.0, t]).collect();
    lambdas.push(vec![40.0, 0.0]);
    let probe = cone_lower_bound_check(&m, &sp, &level, &lambdas, 1e-3, 0.0).unwrap();
    assert_eq!(probe.samples.len(), 12);
    assert_eq!(probe.off_cone.len(), 1);
    let floor = probe.samples.iter().map(|s| s.predicted).fold(f64::INFINITY, f64::min);
    let r = cone_lower_bound_check(&m, &sp, &level, &lambdas, 1e-3, 0.5 * floor).unwrap();
    assert!(r.passed, "{}", r.min_ratio);
    assert!(r.min_ratio > 0.5);
    // no stationary point off the cone: the transform is negligible there
    assert!(r.off_cone[0].scaled_energy < 1e-6 * floor);
}

#[test]
fn floor_one_level_set_matches_the_single_point_prediction() {
    // with floor 1 the level set of a bump is its centre alone
    for d in [2, 3] {
        let s = catalog::sphere(d).unwrap();
        let w = Window::new(2 * (d - 1), vec![(-0.6, 0.6); d - 1], 0.0, 1.0).unwrap();
        let m = Measure::new(&s).with_window(&w).unwrap();
        let sp = StationaryPhase::new(&s, Some(&w), PhaseOptions::default()).unwrap();
        let level = NormalCone::new(&s, Region::WindowLevel(&w), SearchOptions::default()).unwrap();
        let mut lambdas: Vec<Vec<f64>> = [50.0, 100.0]
            .iter()
            .map(|&t| {
                let mut l = vec![0.0; d];
                l[d - 1] = t;
                l
            })
            .collect();
        let mut off = vec![0.0; d];
        off[0] = 5.0;
        off[d - 1] = 50.0;
        lambdas.push(off);
        let r = cone_lower_bound_check(&m, &sp, &level, &lambdas, 1e-3, 0.0).unwrap();
        assert_eq!((r.samples.len(), r.off_cone.len()), (2, 1));
        for s in &r.samples {
            assert!((s.ratio - 1.0).abs() < 0.2, "d = {d}, |λ| = {}: {}", s.norm, s.ratio);
        }
    }
}

/// Frame bounds of the circle for a small integer spectrum and test grid.
fn circle_bounds(points: &[Vec<f64>], weight: f64) -> (f64, f64) {
    let c = catalog::circle(1.0).unwrap();
    let m = Measure::new(&c).with_weight(weight).unwrap();
    let cache = FourierCache::new();
    let test = [vec![0.0, 0.0], vec![0.5, 0.0], vec![0.0, 0.5]];
    let f = frame_bounds_estimate(&m, &cache, &explicit(2, points.to_vec()), &test).unwrap();
    assert!(f.alpha_min <= f.alpha_max);
    (f.alpha_min, f.alpha_max)
}

fn integer_points(max: i32, len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::btree_set((-max..=max, -max..=max), 1..=len)
        .prop_map(|set| set.into_iter().map(|(a, b)| vec![a as f64, b as f64]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partial_sums_ignore_order_and_grow(points in integer_points(20, 40), seed in any::<u64>()) {
        let mut shuffled = points.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed.wrapping_mul(i as u64 + 7) % (i as u64 + 1)) as usize);
        }
        let radii = [1.0, 5.0, 10.0, 20.0, 40.0];
        let a = divergence_partial_sum(&explicit(2, points), 2, &radii).unwrap();
        let b = divergence_partial_sum(&explicit(2, shuffled), 2, &radii).unwrap();
        for (x, y) in a.sums.iter().zip(&b.sums) {
            prop_assert_eq!(x.sum, y.sum);
            prop_assert_eq!(x.count, y.count);
        }
        prop_assert!(a.sums.windows(2).all(|w| w[0].sum <= w[1].sum));
    }

    #[test]
    fn energy_is_translation_invariant(points in integer_points(6, 12), v in (-4i32..=4, -4i32..=4), xi in (-3i32..=3, -3i32..=3)) {
        let c = catalog::circle(1.0).unwrap();
        let m = Measure::new(&c);
        let cache = FourierCache::new();
        let shift = [v.0 as f64, v.1 as f64];
        let moved: Vec<Vec<f64>> = points.iter().map(|p| vec![p[0] + shift[0], p[1] + shift[1]]).collect();
        let xi0 = vec![0.25 * xi.0 as f64, 0.25 * xi.1 as f64];
        let xi1 = vec![xi0[0] + shift[0], xi0[1] + shift[1]];
        let e0 = energy_scan(&m, &cache, &explicit(2, points.clone()), &[xi0.clone()]).unwrap().min;
        let e1 = energy_scan(&m, &cache, &explicit(2, moved), &[xi1]).unwrap().min;
        prop_assert!((e0 - e1).abs() <= 1e-12 * e0.max(1.0));
        // every single term is a lower bound
        for p in &points {
            let diff = [p[0] - xi0[0], p[1] - xi0[1]];
            let term = m.ft(&diff).unwrap().value.norm_sqr();
            prop_assert!(e0 >= term * (1.0 - 1e-12));
        }
    }

    #[test]
    fn frame_bounds_scale_with_the_measure(points in integer_points(3, 10), t in 0.1f64..10.0) {
        let (lo, hi) = circle_bounds(&points, 1.0);
        let (lo_t, hi_t) = circle_bounds(&points, t);
        prop_assert!((lo_t - t * lo).abs() <= 1e-8 * t * hi);
        prop_assert!((hi_t - t * hi).abs() <= 1e-8 * t * hi);
    }

    #[test]
    fn adding_a_frequency_never_lowers_the_bounds(points in integer_points(3, 10), extra in (-3i32..=3, -3i32..=3)) {
        let new = vec![extra.0 as f64, extra.1 as f64];
        prop_assume!(!points.contains(&new));
        let (lo, hi) = circle_bounds(&points, 1.0);
        let mut more = points.clone();
        more.push(new);
        let (lo2, hi2) = circle_bounds(&more, 1.0);
        prop_assert!(lo2 >= lo - 1e-9 * hi && hi2 >= hi - 1e-9 * hi);
    }

    #[test]
    fn cone_filter_partitions(points in integer_points(8, 30)) {
        let cap = catalog::spherical_cap(2, PI / 8.0).unwrap();
        let cone = NormalCone::new(&cap, Region::Whole, SearchOptions::default()).unwrap();
        let s = explicit(2, points);
        let p = cone_filter(&s, &cone, 1e-3).unwrap();
        prop_assert_eq!(p.inside.len() + p.outside.len(), s.len());
        for l in &s.points {
            prop_assert!(p.inside.contains(l) != p.outside.contains(l));
        }
        prop_assert!(p.strict_inside <= p.inside.len());
    }
}
