use std::f64::consts::PI;

use bs_nerve::margulis::{euclidean_ball_volume, tube_volume_bound_or_zero, tube_volume_lower_bound, TubeBoundInput};

/// Straight transcription of the formula chain for d = 4.
fn transcription(eps: f64, c: f64, ell: f64) -> (f64, f64, f64, f64) {
    let dim_o = 3.0; // (4 - 1)(4 - 2) / 2
    let big_l = (eps / (6.0 * c * ell.powf(1.0 / (dim_o + 1.0)))).acosh();
    let theta = eps / (2.0 * big_l);
    let count = (PI / (2.0 * theta)).floor();
    let ball = PI * PI / 2.0 * (eps / 3.0).powi(4);
    (big_l, theta, count, count * ball)
}

#[test]
fn matches_transcription_at_reference_point() {
    let r = tube_volume_lower_bound(&TubeBoundInput { d: 4, a: 1.0, epsilon: 0.1, ell: 1e-9, c_cover: 1.0 }).unwrap();
    let (l, theta, count, bound) = transcription(0.1, 1.0, 1e-9);
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    assert_eq!(r.dim_o, 3);
    assert_eq!(r.m, (1e-9f64).powf(-0.25).floor());
    assert!(rel(r.depth, l) < 1e-12);
    assert!(rel(r.theta, theta) < 1e-12);
    assert_eq!(r.ball_count as f64, count);
    assert!(rel(r.volume_bound, bound) < 1e-12);
    assert!(rel(r.rotation_bound, 1e-9f64.powf(0.25)) < 1e-12);
}

#[test]
fn ball_volume_against_gamma_free_closed_forms() {
    for r in [0.1, 1.0, 2.5] {
        let closed = [2.0 * r, PI * r * r, 4.0 / 3.0 * PI * r.powi(3), PI * PI / 2.0 * r.powi(4), 8.0 / 15.0 * PI * PI * r.powi(5)];
        for (i, v) in closed.iter().enumerate() {
            let got = euclidean_ball_volume(i as u32 + 1, r);
            assert!(((got - v) / v).abs() < 1e-14, "d = {}", i + 1);
        }
    }
}

#[test]
fn monotone_for_several_covering_constants() {
    for c in [0.01, 0.1, 1.0] {
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let ell = 10f64.powf(-15.0 + 12.0 * i as f64 / 49.0);
            let v = tube_volume_bound_or_zero(&TubeBoundInput { d: 5, a: 0.5, epsilon: 0.2, ell, c_cover: c }).unwrap();
            assert!(v <= prev, "c = {c}, ell = {ell}");
            prev = v;
        }
    }
}
