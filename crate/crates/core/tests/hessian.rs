use ghlab::{Center, MonopoleConfig, Vec3};
use nalgebra::{Matrix3, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// f(x) = dx^2 + cos(dy) dx dz + dy^3 + dz^2 with d = x - c.
fn f_value(c: &Vec3, x: &Vec3) -> f64 {
    let d = x - c;
    d.x * d.x + d.y.cos() * d.x * d.z + d.y.powi(3) + d.z * d.z
}

fn f_grad(c: &Vec3, x: &Vec3) -> Vec3 {
    let d = x - c;
    Vec3::new(2.0 * d.x + d.y.cos() * d.z, -d.y.sin() * d.x * d.z + 3.0 * d.y * d.y, d.y.cos() * d.x + 2.0 * d.z)
}

fn f_hess(c: &Vec3, x: &Vec3) -> Matrix3<f64> {
    let d = x - c;
    let (s, co) = (d.y.sin(), d.y.cos());
    Matrix3::new(
        2.0, -s * d.z, co,
        -s * d.z, -co * d.x * d.z + 6.0 * d.y, -s * d.x,
        co, -s * d.x, 2.0,
    )
}

/// `Hess f(e_a, e_b) = e_a(e_b f) - sum_c Gamma[a][b][c] e_c f` with
/// `e_i = phi^{-1/2} d/dx_i` and `e_0` acting trivially on invariant functions;
/// the outer derivative by central differences.
fn frame_hessian_oracle(cfg: &MonopoleConfig, c: &Vec3, x: &Vec3, h: f64) -> Matrix4<f64> {
    let e = |y: &Vec3| -> [f64; 4] {
        let s = cfg.phi(y).unwrap().powf(-0.5);
        let g = f_grad(c, y);
        [0.0, s * g.x, s * g.y, s * g.z]
    };
    let gamma = cfg.connection_coefficients(x).unwrap();
    let ef = e(x);
    let s = cfg.phi(x).unwrap().powf(-0.5);
    let mut out = Matrix4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let mut v = 0.0;
            if a > 0 {
                let mut dx = Vec3::zeros();
                dx[a - 1] = h;
                v += s * (e(&(x + dx))[b] - e(&(x - dx))[b]) / (2.0 * h);
            }
            for k in 0..4 {
                v -= gamma[a][b][k] * ef[k];
            }
            out[(a, b)] = v;
        }
    }
    out
}

fn random_config(rng: &mut ChaCha8Rng) -> MonopoleConfig {
    let k = rng.gen_range(1..=4);
    let centers = (0..k)
        .map(|_| Center {
            position: Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            charge: rng.gen_range(1..=2),
        })
        .collect();
    MonopoleConfig::finite(rng.gen_range(0.0..1.0), centers).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, cfg: &MonopoleConfig) -> Vec3 {
    loop {
        let x = Vec3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if cfg.centers().iter().all(|c| (c.position - x).norm() > 0.3) {
            return x;
        }
    }
}

#[test]
fn closed_form_matches_frame_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let cfg = random_config(&mut rng);
        let x = random_point(&mut rng, &cfg);
        let c = Vec3::new(0.3, -0.2, 0.5);
        let closed = cfg.invariant_hessian(&x, &f_grad(&c, &x), &f_hess(&c, &x)).unwrap();
        let oracle = frame_hessian_oracle(&cfg, &c, &x, 1e-5);
        let scale = oracle.abs().max().max(1e-12);
        assert!((closed - oracle).abs().max() / scale < 1e-5, "{closed} vs {oracle}");
        assert!((closed - closed.transpose()).abs().max() <= 1e-12 * scale);
    }
}

#[test]
fn test_function_derivatives_are_consistent() {
    let c = Vec3::new(0.3, -0.2, 0.5);
    let x = Vec3::new(0.7, 1.1, -0.4);
    let h = 1e-5;
    for i in 0..3 {
        let mut dx = Vec3::zeros();
        dx[i] = h;
        let fd = (f_value(&c, &(x + dx)) - f_value(&c, &(x - dx))) / (2.0 * h);
        assert!((fd - f_grad(&c, &x)[i]).abs() < 1e-8);
        let fdg = (f_grad(&c, &(x + dx)) - f_grad(&c, &(x - dx))) / (2.0 * h);
        assert!((fdg - f_hess(&c, &x).column(i)).norm() < 1e-8);
    }
}

/// Hessian of `r^2` in the single-center metric with mass `m`:
/// `H00 = 1/(2 r phi^2)`, `H0i = 0`, `Hij = delta_ij (4 r phi - 1)/(2 r phi^2) + x_i x_j / (r^3 phi^2)`.
fn radial_square_hessian(m: f64, x: &Vec3) -> Matrix4<f64> {
    let r = x.norm();
    let phi = m + 0.5 / r;
    let mut h = Matrix4::zeros();
    h[(0, 0)] = 1.0 / (2.0 * r * phi * phi);
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { (4.0 * r * phi - 1.0) / (2.0 * r * phi * phi) } else { 0.0 };
            h[(i + 1, j + 1)] = delta + x[i] * x[j] / (r.powi(3) * phi * phi);
        }
    }
    h
}

#[test]
fn radial_square_is_strictly_convex() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in [0.0, 1.0] {
        let cfg = MonopoleConfig::unit_charges(m, &[Vec3::zeros()]).unwrap();
        for _ in 0..20 {
            let x = Vec3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let h = cfg.invariant_hessian(&x, &(2.0 * x), &(2.0 * Matrix3::identity())).unwrap();
            let expected = radial_square_hessian(m, &x);
            assert!((h - expected).abs().max() < 1e-12 * expected.abs().max());
            let eig = h.symmetric_eigen().eigenvalues;
            assert!(eig.min() > 0.0, "{eig}");
        }
    }
}
