//! Gauss curvature of the invariant spheres lying over straight chords between
//! two centers. Along the chord, parametrized by `mu` in `(-a, a)` with the two
//! centers at `mu = -a` and `mu = a`, the sphere has `K = -(1/(2 phi))''` and
//! area element `2 pi dmu`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monopole::{MonopoleConfig, Vec3};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn point_segment_distance3(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// A chord between centers `i` (at `mu = -a`) and `j` (at `mu = a`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chord {
    pub i: usize,
    pub j: usize,
    pub midpoint: Vec3,
    pub axis: Vec3,
    pub half_length: f64,
    charge_minus: f64,
    charge_plus: f64,
}

impl Chord {
    pub fn new(config: &MonopoleConfig, i: usize, j: usize) -> Result<Self> {
        if config.is_periodic() {
            return Err(Error::Unsupported("chord spheres need the finite mode".into()));
        }
        let c = config.centers();
        let (ci, cj) = match (c.get(i), c.get(j)) {
            (Some(a), Some(b)) if i != j => (a, b),
            _ => return Err(Error::InvalidConfig(format!("no chord between centers {i} and {j}"))),
        };
        let tol = 1e-9 * config.length_scale();
        for (l, other) in c.iter().enumerate() {
            if l != i && l != j && point_segment_distance3(&other.position, &ci.position, &cj.position) < tol {
                return Err(Error::ChordThroughCenter { i, j, through: l });
            }
        }
        let d = cj.position - ci.position;
        Ok(Chord {
            i,
            j,
            midpoint: 0.5 * (ci.position + cj.position),
            axis: d.normalize(),
            half_length: 0.5 * d.norm(),
            charge_minus: f64::from(ci.charge),
            charge_plus: f64::from(cj.charge),
        })
    }

    pub fn point(&self, mu: f64) -> Vec3 {
        self.midpoint + self.axis * mu
    }
}

/// Potential of the other centers (plus the mass) and its first two derivatives
/// along the chord.
fn tilde_phi(config: &MonopoleConfig, chord: &Chord, mu: f64) -> Result<(f64, f64, f64)> {
    let jet = config.jet_without(&chord.point(mu), &[chord.i, chord.j])?;
    let e = chord.axis;
    Ok((jet.phi, jet.grad.dot(&e), e.dot(&(jet.hess * e))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub mu: f64,
    pub k: f64,
    /// `(1/phi)''`.
    pub inv_phi_dd: f64,
    /// Split of `(1/phi)''` into the part carrying `tilde_phi'` and the rest;
    /// defined for unit charges at both ends.
    pub m: Option<f64>,
    pub n: Option<f64>,
}

fn sample(config: &MonopoleConfig, chord: &Chord, mu: f64) -> Result<CurvatureSample> {
    let a = chord.half_length;
    let (cm, cp) = (chord.charge_minus, chord.charge_plus);
    let (f, f1, f2) = tilde_phi(config, chord, mu)?;
    let d = a * a - mu * mu;
    let (d1, d2) = (-2.0 * mu, -2.0);
    // phi = (g + f d) / d with g the endpoint contribution times d.
    let g = 0.5 * (cp * (a + mu) + cm * (a - mu));
    let g1 = 0.5 * (cp - cm);
    let e = g + f * d;
    let e1 = g1 + f1 * d + f * d1;
    let e2 = f2 * d + 2.0 * f1 * d1 + f * d2;
    let inv_phi_dd = d2 / e - 2.0 * d1 * e1 / (e * e) - d * e2 / (e * e) + 2.0 * d * e1 * e1 / (e * e * e);
    let (m, n) = if cm == 1.0 && cp == 1.0 {
        let den = (a + f * d).powi(3);
        let n = -(2.0 * a * a
            + 2.0 * a * f * d
            + 8.0 * a * f * mu * mu
            + a * f2 * d * d
            + f * f2 * d * d * d)
            / den;
        let m = (2.0 * f1 * f1 * d * d * d + 8.0 * a * mu * f1 * d) / den;
        (Some(m), Some(n))
    } else {
        (None, None)
    };
    Ok(CurvatureSample { mu, k: -0.5 * inv_phi_dd, inv_phi_dd, m, n })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureProfile {
    pub chord: (usize, usize),
    pub half_length: f64,
    /// Gauss-Legendre nodes on the open chord, ascending in `mu`.
    pub samples: Vec<CurvatureSample>,
    pub min_k: f64,
    /// `int K dA = 2 pi int K dmu` over the whole chord.
    pub gauss_bonnet_integral: f64,
}

/// Curvature at `n_samples` Gauss-Legendre nodes of `(-a + eps, a - eps)`,
/// `eps = 1e-6 a`; the two end slivers are added by the midpoint rule.
pub fn gauss_curvature(config: &MonopoleConfig, i: usize, j: usize, n_samples: usize) -> Result<CurvatureProfile> {
    if n_samples == 0 {
        return Err(Error::InvalidConfig("need at least one sample".into()));
    }
    let chord = Chord::new(config, i, j)?;
    let a = chord.half_length;
    let eps = 1e-6 * a;
    let half = a - eps;
    let (x, w) = gauss_legendre(n_samples);
    let mut samples = Vec::with_capacity(n_samples);
    let mut integral = 0.0;
    for (xk, wk) in x.iter().zip(&w) {
        let s = sample(config, &chord, half * xk)?;
        integral += wk * half * s.k;
        samples.push(s);
    }
    for mu in [-a + 0.5 * eps, a - 0.5 * eps] {
        integral += eps * sample(config, &chord, mu)?.k;
    }
    let min_k = samples.iter().map(|s| s.k).fold(f64::INFINITY, f64::min);
    Ok(CurvatureProfile {
        chord: (i, j),
        half_length: a,
        samples,
        min_k,
        gauss_bonnet_integral: 2.0 * PI * integral,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TildePhiBounds {
    /// `tilde_phi'` along the chord.
    pub first_derivative: f64,
    /// `sum c_l / (2 r_l^2)` over the other centers.
    pub grad_bound: f64,
    /// Exact `tilde_phi''` along the chord.
    pub second_derivative: f64,
    /// `sum c_l / r_l^3`, the commonly quoted value of `tilde_phi''`. It is an
    /// upper bound for the exact value, which can be negative.
    pub cubic_sum: f64,
    pub within_bound: bool,
}

pub fn tilde_phi_bounds(config: &MonopoleConfig, i: usize, j: usize, mu: f64) -> Result<TildePhiBounds> {
    let chord = Chord::new(config, i, j)?;
    let x = chord.point(mu);
    let (_, f1, f2) = tilde_phi(config, &chord, mu)?;
    let (mut grad_bound, mut cubic_sum) = (0.0, 0.0);
    for (l, c) in config.centers().iter().enumerate() {
        if l == i || l == j {
            continue;
        }
        let r = (x - c.position).norm();
        grad_bound += f64::from(c.charge) / (2.0 * r * r);
        cubic_sum += f64::from(c.charge) / (r * r * r);
    }
    Ok(TildePhiBounds {
        first_derivative: f1,
        grad_bound,
        second_derivative: f2,
        cubic_sum,
        within_bound: f1.abs() <= grad_bound * (1.0 + 1e-12),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityCertificate {
    /// Distance from the chord midpoint to the nearest other center, in units
    /// of the half length. Infinite without other centers.
    pub s: f64,
    pub threshold: f64,
    pub hypothesis_met: bool,
}

/// Sufficient condition for positive curvature: every other center is farther
/// than `s d` from the midpoint, `d` the half length, `s > max(4, sqrt((k-2)/2))`.
pub fn positivity_certificate(config: &MonopoleConfig, i: usize, j: usize) -> Result<PositivityCertificate> {
    let chord = Chord::new(config, i, j)?;
    let k = config.centers().len();
    let s = config
        .centers()
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != i && *l != j)
        .map(|(_, c)| (c.position - chord.midpoint).norm() / chord.half_length)
        .fold(f64::INFINITY, f64::min);
    let threshold = 4.0_f64.max(((k as f64 - 2.0) / 2.0).sqrt());
    Ok(PositivityCertificate { s, threshold, hypothesis_met: s > threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        for n in [1, 2, 5, 40, 2001] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-12);
            let deg = (2 * n - 1).min(20) as i32;
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            assert_relative_eq!(q, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_center_sphere_is_round() {
        let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::new(0.0, 0.0, -1.5), Vec3::new(0.0, 0.0, 1.5)]).unwrap();
        let prof = gauss_curvature(&cfg, 0, 1, 64).unwrap();
        for s in &prof.samples {
            assert_relative_eq!(s.k, 1.0 / 1.5, epsilon = 1e-12);
        }
        assert_relative_eq!(prof.gauss_bonnet_integral, 4.0 * PI, epsilon = 1e-9);
    }

    #[test]
    fn collinear_third_center_blocks_the_chord() {
        let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)]).unwrap();
        assert_eq!(gauss_curvature(&cfg, 0, 1, 8), Err(Error::ChordThroughCenter { i: 0, j: 1, through: 2 }));
    }

    #[test]
    fn certificate_thresholds() {
        let d = 1.0;
        let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::new(-d, 0.0, 0.0), Vec3::new(d, 0.0, 0.0), Vec3::new(0.0, 5.0 * d, 0.0)]).unwrap();
        let c = positivity_certificate(&cfg, 0, 1).unwrap();
        assert_relative_eq!(c.s, 5.0);
        assert!(c.hypothesis_met);
        let two = MonopoleConfig::unit_charges(0.0, &[Vec3::zeros(), Vec3::x()]).unwrap();
        assert!(positivity_certificate(&two, 0, 1).unwrap().hypothesis_met);
    }
}
