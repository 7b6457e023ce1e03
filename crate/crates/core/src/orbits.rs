//! Circle orbits that are closed geodesics. These are exactly the critical
//! points of `phi`; they are found by damped Newton iteration from a grid of
//! seeds and classified by the Morse index of `hess phi`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Rotation3, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monopole::{MonopoleConfig, Vec3};

/// Eigenvalues with `|lambda| < DEGENERACY_RATIO * max |lambda|` count as zero.
pub const DEGENERACY_RATIO: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedingControls {
    /// Seeds per axis of the grid laid over the inflated bounding box.
    pub grid_density: usize,
    /// Convergence threshold on `|grad phi|`, relative to `k / (2 D^2)`.
    pub newton_tol: f64,
    /// Solutions closer than this are merged. `None` means `1e-6` hull diameters.
    pub dedup_radius: Option<f64>,
    pub max_newton_iter: usize,
}

impl Default for SeedingControls {
    fn default() -> Self {
        SeedingControls { grid_density: 25, newton_tol: 1e-10, dedup_radius: None, max_newton_iter: 100 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPointRecord {
    pub location: Vec3,
    /// `|grad phi|` at `location`.
    pub residual: f64,
    pub morse_index: usize,
    /// Eigenvalues of `hess phi`, ascending.
    pub eigenvalues: [f64; 3],
    pub orbit_length: f64,
    pub degenerate: bool,
}

impl CriticalPointRecord {
    /// Lower bound `3 - index` on the Morse index of the orbit as a closed geodesic.
    pub fn geodesic_index_lower_bound(&self) -> usize {
        3 - self.morse_index.min(3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MorseCount {
    pub m1: usize,
    pub m2: usize,
    pub k: u32,
    pub satisfied: bool,
}

/// Ascending eigenvalues of a symmetric matrix and the matching unit eigenvectors.
pub fn sorted_eigen(h: &Matrix3<f64>) -> ([f64; 3], [Vec3; 3]) {
    let eig = SymmetricEigen::new(*h);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.map(|i| eig.eigenvalues[i]);
    let vecs = idx.map(|i| eig.eigenvectors.column(i).into_owned());
    (vals, vecs)
}

fn is_degenerate(eigenvalues: &[f64; 3]) -> bool {
    let max = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    max == 0.0 || eigenvalues.iter().any(|v| v.abs() < DEGENERACY_RATIO * max)
}

/// Number of negative eigenvalues of `hess phi` at `x`.
pub fn morse_index(config: &MonopoleConfig, x: &Vec3) -> Result<usize> {
    let (vals, _) = sorted_eigen(&config.hess_phi(x)?);
    if is_degenerate(&vals) {
        let smallest = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        return Err(Error::DegenerateCritical { smallest });
    }
    Ok(vals.iter().filter(|v| **v < 0.0).count())
}

/// Builds the record for a point already known to be critical.
pub fn classify(config: &MonopoleConfig, x: &Vec3) -> Result<CriticalPointRecord> {
    let jet = config.jet(x)?;
    let (eigenvalues, _) = sorted_eigen(&jet.hess);
    Ok(CriticalPointRecord {
        location: *x,
        residual: jet.grad.norm(),
        morse_index: eigenvalues.iter().filter(|v| **v < 0.0).count(),
        eigenvalues,
        orbit_length: jet.phi.powf(-0.5),
        degenerate: is_degenerate(&eigenvalues),
    })
}

/// Convex-combination weights `beta_i = (c_i / r_i^3) / sum_j (c_j / r_j^3)`. At a
/// critical point `x = sum_i beta_i p_i`.
pub fn hull_weights(config: &MonopoleConfig, x: &Vec3) -> Vec<f64> {
    let raw: Vec<f64> = config
        .centers()
        .iter()
        .map(|c| f64::from(c.charge) / (x - c.position).norm().powi(3))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

struct Bounds {
    lo: Vec3,
    hi: Vec3,
}

impl Bounds {
    fn contains(&self, x: &Vec3) -> bool {
        (0..3).all(|i| x[i] >= self.lo[i] && x[i] <= self.hi[i])
    }
}

/// Damped Newton iteration on `grad phi = 0`. Returns the converged point, or
/// `None` if the iterate stalls, leaves `bounds` or hits a center.
fn newton(config: &MonopoleConfig, x0: Vec3, tol: f64, max_iter: usize, bounds: &Bounds) -> Option<Vec3> {
    let mut x = x0;
    let mut jet = config.jet(&x).ok()?;
    let mut res = jet.grad.norm();
    let mut polish = 0;
    for _ in 0..max_iter {
        if res < tol {
            polish += 1;
            if polish > 3 {
                break;
            }
        }
        let step = jet.hess.lu().solve(&(-jet.grad))?;
        let mut alpha = 1.0;
        let mut accepted = false;
        while alpha > 1e-8 {
            let trial = x + step * alpha;
            if let Ok(j) = config.jet(&trial) {
                let r = j.grad.norm();
                if r < (1.0 - 1e-4 * alpha) * res {
                    x = trial;
                    jet = j;
                    res = r;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted || !bounds.contains(&x) {
            break;
        }
    }
    (res < tol && bounds.contains(&x)).then_some(x)
}

/// Newton refinement of an approximate critical point.
pub fn refine_critical_point(config: &MonopoleConfig, x: &Vec3) -> Result<CriticalPointRecord> {
    let scale = config.length_scale();
    let bounds = Bounds { lo: x.add_scalar(-scale), hi: x.add_scalar(scale) };
    let tol = 1e-12 * f64::from(config.total_charge()) / (scale * scale);
    let y = newton(config, *x, tol, 100, &bounds).unwrap_or(*x);
    classify(config, &y)
}

/// All critical points of `phi`, sorted lexicographically by location.
pub fn find_critical_points(config: &MonopoleConfig, controls: &SeedingControls) -> Result<Vec<CriticalPointRecord>> {
    if config.is_periodic() {
        return Err(Error::Unsupported(
            "the periodic configuration has infinitely many critical points; use ov_axis_orbit".into(),
        ));
    }
    if config.centers().len() < 2 {
        return Err(Error::NoCriticalPoints);
    }
    let diam = config.hull_diameter();
    let dedup = controls.dedup_radius.unwrap_or(1e-6 * diam);
    let tol = controls.newton_tol * f64::from(config.total_charge()) / (2.0 * diam * diam);

    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for c in config.centers() {
        lo = lo.inf(&c.position);
        hi = hi.sup(&c.position);
    }
    let margin = (0.05 * diam).max(dedup);
    let grid_lo = lo.add_scalar(-margin);
    let grid_hi = hi.add_scalar(margin);
    let bounds = Bounds { lo: lo.add_scalar(-0.5 * diam), hi: hi.add_scalar(0.5 * diam) };

    let mut seeds = Vec::new();
    let n = controls.grid_density.max(2);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let t = Vec3::new(i as f64, j as f64, k as f64) / (n - 1) as f64;
                seeds.push(grid_lo + (grid_hi - grid_lo).component_mul(&t));
            }
        }
    }
    let centers = config.centers();
    for (i, a) in centers.iter().enumerate() {
        for (j, b) in centers.iter().enumerate().skip(i + 1) {
            seeds.push((a.position + b.position) * 0.5);
            for c in &centers[j + 1..] {
                seeds.push((a.position + b.position + c.position) / 3.0);
            }
        }
    }

    let mut found: Vec<(Vec3, f64)> = Vec::new();
    for seed in seeds {
        let Some(x) = newton(config, seed, tol, controls.max_newton_iter, &bounds) else {
            continue;
        };
        let res = config.grad_phi(&x)?.norm();
        match found.iter_mut().find(|(y, _)| (x - y).norm() < dedup) {
            Some(entry) => {
                if res < entry.1 {
                    *entry = (x, res);
                }
            }
            None => found.push((x, res)),
        }
    }
    if found.is_empty() {
        return Err(Error::NoCriticalPoints);
    }
    let mut records = found
        .iter()
        .map(|(x, _)| classify(config, x))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        (0..3)
            .map(|i| a.location[i].total_cmp(&b.location[i]))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(records)
}

/// Counts index-1 and index-2 points and checks `m2 - m1 = k - 1`.
pub fn verify_morse_count(records: &[CriticalPointRecord], k: u32) -> Result<MorseCount> {
    if records.iter().any(|r| r.degenerate) {
        return Err(Error::DegeneratePresent);
    }
    let m1 = records.iter().filter(|r| r.morse_index == 1).count();
    let m2 = records.iter().filter(|r| r.morse_index == 2).count();
    Ok(MorseCount { m1, m2, k, satisfied: m2 as i64 - m1 as i64 == i64::from(k) - 1 })
}

/// Unit centers at `(-sqrt3 a, 0, 0)`, `(sqrt3 a, 0, 0)`, `(0, 3a, 0)`.
pub fn triangle_config(a: f64, mass: f64) -> Result<MonopoleConfig> {
    let s = 3f64.sqrt() * a;
    MonopoleConfig::unit_charges(mass, &[Vec3::new(-s, 0.0, 0.0), Vec3::new(s, 0.0, 0.0), Vec3::new(0.0, 3.0 * a, 0.0)])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleOrbits {
    pub a: f64,
    /// Root of `f` in `(0, a)`; the index-2 orbit on the symmetry axis sits at `(0, b, 0)`.
    pub b: f64,
    /// Index-1 orbit at the barycenter `(0, a, 0)`.
    pub p: CriticalPointRecord,
    /// Index-2 orbits: `(0, b, 0)` and its rotations by `2 pi / 3` about `p`.
    pub q: [CriticalPointRecord; 3],
}

/// Reduced equation for critical points on the axis `x = 0` of the triangle:
/// `f(mu) = (mu^2 + 3a^2)^{3/2} - 2 mu (mu - 3a)^2`.
pub fn triangle_axis_equation(a: f64, mu: f64) -> f64 {
    (mu * mu + 3.0 * a * a).powf(1.5) - 2.0 * mu * (mu - 3.0 * a).powi(2)
}

fn triangle_axis_slope(a: f64, mu: f64) -> f64 {
    3.0 * mu * (mu * mu + 3.0 * a * a).sqrt() - 2.0 * (mu - 3.0 * a).powi(2) - 4.0 * mu * (mu - 3.0 * a)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, to the last representable bit.
pub(crate) fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The four orbits of the equilateral triangle configuration, located from the
/// reduced axis equation rather than by search.
pub fn triangle_orbits(a: f64, mass: f64) -> Result<TriangleOrbits> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidConfig(format!("triangle scale must be positive, got {a}")));
    }
    let config = triangle_config(a, mass)?;
    // f is convex on (0, a) with f(0) > 0 = f(a); its minimum separates the roots.
    let turn = bisect(0.0, a, |mu| triangle_axis_slope(a, mu));
    let b = bisect(0.0, turn, |mu| triangle_axis_equation(a, mu));

    let p_loc = Vec3::new(0.0, a, 0.0);
    let q_loc = Vec3::new(0.0, b, 0.0);
    let p = classify(&config, &p_loc)?;
    let mut q = [p; 3];
    for (k, slot) in q.iter_mut().enumerate() {
        let rot = Rotation3::from_axis_angle(&Vec3::z_axis(), 2.0 * PI * k as f64 / 3.0);
        *slot = classify(&config, &(p_loc + rot * (q_loc - p_loc)))?;
    }
    Ok(TriangleOrbits { a, b, p, q })
}

/// Orbit on the `x1` axis of the periodic configuration, between the center at
/// the origin and its image at `2 pi`.
pub fn ov_axis_orbit(config: &MonopoleConfig) -> Result<CriticalPointRecord> {
    if !config.is_periodic() {
        return Err(Error::Unsupported("ov_axis_orbit needs the periodic configuration".into()));
    }
    let eps = 1e-3;
    let slope = |t: f64| config.grad_phi(&Vec3::new(t, 0.0, 0.0)).map(|g| g.x).unwrap_or(f64::NAN);
    let (lo, hi) = (eps, 2.0 * PI - eps);
    if !(slope(lo) < 0.0 && slope(hi) > 0.0) {
        return Err(Error::NoCriticalPoints);
    }
    let t = bisect(lo, hi, slope);
    classify(config, &Vec3::new(t, 0.0, 0.0))
}
