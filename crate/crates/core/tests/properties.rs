use std::f64::consts::PI;

use ghlab::curve::{wrap_angle, PolyCurve};
use ghlab::lagrangian::{cohomological_phase, free_reduce, grading, homotopy_word, maslov_number};
use ghlab::plane::{PlaneFrame, Point2};
use ghlab::sphere::{gauss_curvature, positivity_certificate, tilde_phi_bounds};
use ghlab::{Center, MonopoleConfig, Vec3};
use proptest::prelude::*;

fn vec3(r: f64) -> impl Strategy<Value = Vec3> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn config(max_k: usize) -> impl Strategy<Value = MonopoleConfig> {
    (0.0..1.0f64, prop::collection::vec((vec3(2.0), 1u32..3), 1..=max_k))
        .prop_filter_map("centers too close", |(m, cs)| {
            let centers: Vec<Center> = cs.into_iter().map(|(p, c)| Center { position: p, charge: c }).collect();
            let ok = centers.iter().enumerate().all(|(i, a)| centers[..i].iter().all(|b| (a.position - b.position).norm() > 0.1));
            ok.then(|| MonopoleConfig::finite(m, centers).ok()).flatten()
        })
}

fn away(cfg: &MonopoleConfig, x: &Vec3, r: f64) -> bool {
    cfg.centers().iter().all(|c| (c.position - x).norm() > r)
}

/// Chord `(0,0,-1)` to `(0,0,1)` plus other unit centers at distance in
/// `(4.2, 9)` from the origin, so the positivity hypothesis holds.
fn far_config(extra: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = MonopoleConfig> {
    prop::collection::vec((0.0..2.0 * PI, -1.0..1.0f64, 4.2..9.0f64), extra).prop_map(|others| {
        let mut pos = vec![Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, 1.0)];
        for (lon, z, r) in others {
            let s = (1.0 - z * z).sqrt();
            pos.push(Vec3::new(s * lon.cos(), s * lon.sin(), z) * r);
        }
        MonopoleConfig::unit_charges(0.0, &pos).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potential_is_harmonic(cfg in config(5), x in vec3(3.0)) {
        prop_assume!(away(&cfg, &x, 0.2));
        let h = cfg.hess_phi(&x).unwrap();
        prop_assert!(h.trace().abs() <= 1e-9 * h.abs().max().max(1.0));
    }

    #[test]
    fn connection_is_skew_and_hessian_symmetric(cfg in config(4), x in vec3(3.0), df in vec3(1.0), a in vec3(1.0)) {
        prop_assume!(away(&cfg, &x, 0.2));
        let g = cfg.connection_coefficients(&x).unwrap();
        for i in 0..4 { for j in 0..4 { for k in 0..4 {
            prop_assert!((g[i][j][k] + g[i][k][j]).abs() < 1e-12);
        }}}
        let d2f = a * a.transpose();
        let h = cfg.invariant_hessian(&x, &df, &d2f).unwrap();
        prop_assert!((h - h.transpose()).abs().max() < 1e-12);
    }

    #[test]
    fn arc_grading_spans_the_sweep(sweep in -3.0..3.0f64, px in -2.0..2.0f64, py in -2.0..2.0f64, angle in -PI..PI, len in 0.5..3.0f64) {
        prop_assume!(sweep.abs() > 1e-3);
        let p = Point2::new(px, py);
        let q = p + Point2::new(angle.cos(), angle.sin()) * len;
        let arc = PolyCurve::circular_arc(PlaneFrame::horizontal(), p, q, sweep, 301, 0, 1).unwrap();
        let g = grading(&arc);
        prop_assert!((g.variation - sweep.abs()).abs() < 1e-9);
        prop_assert!((g.total_change + sweep).abs() < 1e-9);
        prop_assert!(wrap_angle(cohomological_phase(&arc).unwrap() - angle).abs() < 1e-9);
        prop_assert_eq!(maslov_number(&arc), 0);
    }

    #[test]
    fn circles_have_maslov_one(cx in -2.0..2.0f64, cy in -2.0..2.0f64, r in 0.1..3.0f64, n in 8usize..200) {
        let c = PolyCurve::circle(PlaneFrame::horizontal(), Point2::new(cx, cy), r, n).unwrap();
        prop_assert_eq!(maslov_number(&c), 1);
        prop_assert!((grading(&c).total_change - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn free_reduction_is_idempotent(word in prop::collection::vec((0usize..3, prop::bool::ANY), 0..30)) {
        let letters: Vec<(usize, i32)> = word.into_iter().map(|(c, s)| (c, if s { 1 } else { -1 })).collect();
        let once = free_reduce(&letters);
        prop_assert_eq!(free_reduce(&once), once.clone());
        prop_assert!(once.windows(2).all(|w| !(w[0].0 == w[1].0 && w[0].1 == -w[1].1)));
    }

    #[test]
    fn word_exponent_sums_are_windings(
        sweep in 0.2..3.0f64,
        others in prop::collection::vec((0.1..3.9f64, -2.0..2.0f64), 1..4),
        seed in 0u64..1000,
    ) {
        let mut pos = vec![Vec3::zeros(), Vec3::new(4.0, 0.0, 0.0)];
        pos.extend(others.iter().map(|&(x, y)| Vec3::new(x, y, 0.0)));
        let cfg = MonopoleConfig::unit_charges(0.0, &pos).unwrap();
        let arc = PolyCurve::circular_arc(PlaneFrame::horizontal(), Point2::zeros(), Point2::new(4.0, 0.0), sweep, 201, 0, 1).unwrap();
        prop_assume!(others.iter().all(|&(x, y)| arc.distance_to(&Vec3::new(x, y, 0.0)) > 1e-3 && y.abs() > 1e-3));
        let w = homotopy_word(&cfg, &arc, seed).unwrap();
        for (k, &(x, y)) in others.iter().enumerate() {
            prop_assert_eq!(w.exponent_sum(k + 2), arc.winding_around(&Point2::new(x, y)));
        }
    }

    #[test]
    fn gradient_bound_holds_along_chords(cfg in config(6), t in -0.95..0.95f64) {
        prop_assume!(cfg.centers().len() >= 3);
        if let Ok(b) = tilde_phi_bounds(&cfg, 0, 1, t * (cfg.centers()[1].position - cfg.centers()[0].position).norm() / 2.0) {
            prop_assert!(b.within_bound);
            prop_assert!(b.second_derivative <= b.cubic_sum * (1.0 + 1e-12) + 1e-300);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn far_centers_give_positive_round_spheres(cfg in far_config(1..=3)) {
        let cert = positivity_certificate(&cfg, 0, 1).unwrap();
        prop_assert!(cert.hypothesis_met);
        let prof = gauss_curvature(&cfg, 0, 1, 2000).unwrap();
        prop_assert!(prof.min_k > 0.0);
        prop_assert!((prof.gauss_bonnet_integral - 4.0 * PI).abs() < 1e-3);
        for s in &prof.samples {
            let (m, n) = (s.m.unwrap(), s.n.unwrap());
            prop_assert!(n < 0.0);
            prop_assert!((m + n - s.inv_phi_dd).abs() <= 1e-6 * s.inv_phi_dd.abs().max(1e-12));
        }
    }
}

#[test]
fn curvature_split_matches_differenced_inverse_potential() {
    let cfg = MonopoleConfig::unit_charges(
        0.2,
        &[Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.5, 0.5, 0.3), Vec3::new(-0.7, 2.0, -1.2)],
    )
    .unwrap();
    let prof = gauss_curvature(&cfg, 0, 1, 64).unwrap();
    let h = 1e-4;
    let inv = |mu: f64| 1.0 / cfg.phi(&Vec3::new(0.0, 0.0, mu)).unwrap();
    for s in prof.samples.iter().filter(|s| s.mu.abs() < 0.9) {
        let fd = (inv(s.mu + h) - 2.0 * inv(s.mu) + inv(s.mu - h)) / (h * h);
        assert!((fd - s.inv_phi_dd).abs() < 1e-5 * fd.abs().max(1.0), "{fd} {}", s.inv_phi_dd);
        assert!((s.m.unwrap() + s.n.unwrap() - s.inv_phi_dd).abs() < 1e-6 * s.inv_phi_dd.abs());
    }
}

#[test]
fn gauss_bonnet_counts_the_endpoint_charges() {
    let cfg = MonopoleConfig::finite(
        0.0,
        vec![
            Center { position: Vec3::new(0.0, 0.0, -1.0), charge: 1 },
            Center { position: Vec3::new(0.0, 0.0, 1.0), charge: 2 },
            Center::unit(Vec3::new(6.0, 0.0, 0.0)),
        ],
    )
    .unwrap();
    let prof = gauss_curvature(&cfg, 0, 1, 2000).unwrap();
    assert!((prof.gauss_bonnet_integral - 2.0 * PI * 1.5).abs() < 1e-3);
    assert!(prof.samples[0].m.is_none());
}

#[test]
fn quoted_cubic_sum_can_exceed_the_exact_second_derivative() {
    // A center level with the chord midpoint: the exact second derivative of
    // the other potential along the chord is negative there.
    let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, 1.0), Vec3::new(5.0, 0.0, 0.0)]).unwrap();
    let b = tilde_phi_bounds(&cfg, 0, 1, 0.0).unwrap();
    assert!((b.second_derivative + 0.5 / 125.0).abs() < 1e-15);
    assert!((b.cubic_sum - 1.0 / 125.0).abs() < 1e-15);
    assert_eq!(b.first_derivative, 0.0);
}
