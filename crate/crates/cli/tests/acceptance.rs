//! Acceptance criteria, one PASS/FAIL line each. Runs the full-size suite.

use curveft_cli::{run_criterion, Suite};

fn check(id: usize) {
    let r = run_criterion(id, Suite::Full);
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_revolution_curvature() {
    check(1);
}

#[test]
fn criterion_02_circle_transform() {
    check(2);
}

#[test]
fn criterion_03_sphere_transform() {
    check(3);
}

#[test]
fn criterion_04_decay_and_phase() {
    check(4);
}

#[test]
fn criterion_05_hemisphere_symmetry() {
    check(5);
}

#[test]
fn criterion_06_hemisphere_axis_decay() {
    check(6);
}

#[test]
fn criterion_07_remainder_order() {
    check(7);
}

#[test]
fn criterion_08_cone_lower_bound() {
    check(8);
}

#[test]
fn criterion_09_divergence_dichotomy() {
    check(9);
}

#[test]
fn criterion_10_frame_trends() {
    check(10);
}

#[test]
fn criterion_11_coverage() {
    check(11);
}
