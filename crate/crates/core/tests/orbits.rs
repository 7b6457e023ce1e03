use ghlab::orbits::{find_critical_points, ov_axis_orbit, triangle_axis_equation, triangle_config, triangle_orbits, verify_morse_count, SeedingControls};
use ghlab::{MonopoleConfig, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn collinear_centers_have_orbits_between_neighbours() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for k in 2..=6usize {
        let mut xs: Vec<f64> = Vec::new();
        while xs.len() < k {
            let x = rng.gen_range(-3.0..3.0);
            if xs.iter().all(|y: &f64| (x - y).abs() > 0.3) {
                xs.push(x);
            }
        }
        let pos: Vec<Vec3> = xs.iter().map(|&x| Vec3::new(x, 0.0, 0.0)).collect();
        let cfg = MonopoleConfig::unit_charges(rng.gen_range(0.0..0.5), &pos).unwrap();
        let recs = find_critical_points(&cfg, &SeedingControls::default()).unwrap();
        assert_eq!(recs.len(), k - 1, "k = {k}");
        xs.sort_by(f64::total_cmp);
        for (r, w) in recs.iter().zip(xs.windows(2)) {
            assert!(r.location.y.abs() < 1e-9 && r.location.z.abs() < 1e-9);
            assert!(w[0] < r.location.x && r.location.x < w[1]);
            assert_eq!(r.morse_index, 2);
        }
        let count = verify_morse_count(&recs, k as u32).unwrap();
        assert!(count.satisfied);
    }
}

#[test]
fn triangle_search_finds_the_four_orbits() {
    let tri = triangle_orbits(1.0, 0.0).unwrap();
    assert!(triangle_axis_equation(1.0, tri.b).abs() < 1e-12);
    assert!((tri.b - 0.430_563_290_393_930_85).abs() < 1e-12);
    let recs = find_critical_points(&triangle_config(1.0, 0.0).unwrap(), &SeedingControls::default()).unwrap();
    assert_eq!(recs.len(), 4);
    let index1: Vec<_> = recs.iter().filter(|r| r.morse_index == 1).collect();
    assert_eq!(index1.len(), 1);
    assert!((index1[0].location - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-9);
    for q in &tri.q {
        assert_eq!(q.morse_index, 2);
        assert!(recs.iter().any(|r| (r.location - q.location).norm() < 1e-6 && r.morse_index == 2));
    }
}

#[test]
fn random_configurations_satisfy_the_morse_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut runs = 0;
    while runs < 20 {
        let k = rng.gen_range(3..=5);
        let pos: Vec<Vec3> = (0..k).map(|_| Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let cfg = MonopoleConfig::unit_charges(rng.gen_range(0.0..0.3), &pos).unwrap();
        let recs = find_critical_points(&cfg, &SeedingControls::default()).unwrap();
        let Ok(count) = verify_morse_count(&recs, k as u32) else { continue };
        assert!(count.satisfied, "{count:?} {pos:?}");
        runs += 1;
    }
}

#[test]
fn periodic_orbit_converges_under_truncation() {
    let x200 = ov_axis_orbit(&MonopoleConfig::ooguri_vafa(200).unwrap()).unwrap().location.x;
    let x400 = ov_axis_orbit(&MonopoleConfig::ooguri_vafa(400).unwrap()).unwrap().location.x;
    assert!((x200 - PI).abs() < 1e-6);
    assert!((x200 - x400).abs() < 1e-8);
}
