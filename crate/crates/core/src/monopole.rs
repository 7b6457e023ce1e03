//! Harmonic potential of a multi-center Gibbons-Hawking metric, its derivatives,
//! the orbit-length function, the Levi-Civita connection in the invariant
//! orthonormal frame and the Hessian of circle-invariant functions.
//!
//! The potential is `phi(x) = m + sum_i c_i / (2 |x - p_i|)` in the finite mode.
//! The periodic (Ooguri-Vafa) mode places unit charges at `(2 pi k, 0, 0)` for all
//! integers `k` and regularizes the divergent sum by subtracting `1/(2 pi |k|)`
//! from every image term. Evaluation first reduces `x1` into `[-pi, pi]`, so the
//! truncated potential is exactly `2 pi`-periodic and even in `x1`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Evaluations closer than this to a center are rejected.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-9;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Mass parameter for which the Ooguri-Vafa metric is the standard one:
/// `pi m = ln(4 pi) - gamma`.
pub fn ooguri_vafa_default_mass() -> f64 {
    ((4.0 * PI).ln() - EULER_GAMMA) / PI
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Center {
    pub position: Vec3,
    pub charge: u32,
}

impl Center {
    pub fn unit(position: Vec3) -> Self {
        Center { position, charge: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Finite,
    PeriodicOv { truncation: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigFile", into = "ConfigFile")]
pub struct MonopoleConfig {
    mass: f64,
    centers: Vec<Center>,
    mode: Mode,
    exclusion_radius: f64,
}

/// Point-source term `weight / |x - position|` contributing to `phi`.
#[derive(Debug, Clone, Copy)]
struct Source {
    position: Vec3,
    weight: f64,
}

/// `phi`, its gradient and its Hessian at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiJet {
    pub phi: f64,
    pub grad: Vec3,
    pub hess: Matrix3<f64>,
}

impl MonopoleConfig {
    /// Finite configuration. Mass must be non-negative, centers pairwise distinct
    /// (farther apart than twice the exclusion radius) and charges positive.
    pub fn finite(mass: f64, centers: Vec<Center>) -> Result<Self> {
        let cfg = MonopoleConfig {
            mass,
            centers,
            mode: Mode::Finite,
            exclusion_radius: DEFAULT_EXCLUSION_RADIUS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Finite configuration with all charges equal to one.
    pub fn unit_charges(mass: f64, positions: &[Vec3]) -> Result<Self> {
        Self::finite(mass, positions.iter().copied().map(Center::unit).collect())
    }

    /// Single unit center at the origin with its images along the `x1` axis.
    pub fn periodic_ov(mass: f64, truncation: usize) -> Result<Self> {
        let cfg = MonopoleConfig {
            mass,
            centers: vec![Center::unit(Vec3::zeros())],
            mode: Mode::PeriodicOv { truncation },
            exclusion_radius: DEFAULT_EXCLUSION_RADIUS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Ooguri-Vafa configuration with the standard mass.
    pub fn ooguri_vafa(truncation: usize) -> Result<Self> {
        Self::periodic_ov(ooguri_vafa_default_mass(), truncation)
    }

    pub fn with_exclusion_radius(mut self, radius: f64) -> Result<Self> {
        self.exclusion_radius = radius;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !self.mass.is_finite() || self.mass < 0.0 {
            return Err(Error::InvalidConfig(format!("mass must be finite and >= 0, got {}", self.mass)));
        }
        if !(self.exclusion_radius.is_finite() && self.exclusion_radius > 0.0) {
            return Err(Error::InvalidConfig("exclusion radius must be positive".into()));
        }
        if self.centers.is_empty() {
            return Err(Error::InvalidConfig("at least one center is required".into()));
        }
        for (i, c) in self.centers.iter().enumerate() {
            if c.charge == 0 {
                return Err(Error::InvalidConfig(format!("center {i} has zero charge")));
            }
            if !c.position.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidConfig(format!("center {i} has a non-finite coordinate")));
            }
            for (j, d) in self.centers.iter().enumerate().skip(i + 1) {
                if (c.position - d.position).norm() <= 2.0 * self.exclusion_radius {
                    return Err(Error::InvalidConfig(format!("centers {i} and {j} coincide")));
                }
            }
        }
        if let Mode::PeriodicOv { truncation } = self.mode {
            if truncation == 0 {
                return Err(Error::InvalidConfig("periodic truncation must be at least 1".into()));
            }
            if self.centers.len() != 1 || self.centers[0].position != Vec3::zeros() || self.centers[0].charge != 1 {
                return Err(Error::InvalidConfig(
                    "periodic mode takes a single unit center at the origin".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn centers(&self) -> &[Center] {
        &self.centers
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion_radius
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.mode, Mode::PeriodicOv { .. })
    }

    /// Sum of all charges (the `k` in the Morse count `m2 - m1 = k - 1`).
    pub fn total_charge(&self) -> u32 {
        self.centers.iter().map(|c| c.charge).sum()
    }

    /// Largest distance between two centers.
    pub fn hull_diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.centers.iter().enumerate() {
            for b in &self.centers[i + 1..] {
                d = d.max((a.position - b.position).norm());
            }
        }
        d
    }

    /// Length scale used to make tolerances dimensionless: the hull diameter, or 1
    /// for a single center.
    pub fn length_scale(&self) -> f64 {
        let d = self.hull_diameter();
        if d > 0.0 {
            d
        } else {
            1.0
        }
    }

    /// Reduces `x` to the cell where the source list is evaluated.
    fn reduce(&self, x: &Vec3) -> Vec3 {
        match self.mode {
            Mode::Finite => *x,
            Mode::PeriodicOv { .. } => {
                let period = 2.0 * PI;
                let mut y = *x;
                y.x -= period * (x.x / period).round();
                y
            }
        }
    }

    /// Calls `f` on each point source, farthest periodic images first so the
    /// small terms are accumulated before the large ones.
    fn for_each_source(&self, mut f: impl FnMut(Source)) {
        match self.mode {
            Mode::Finite => {
                for c in &self.centers {
                    f(Source { position: c.position, weight: 0.5 * f64::from(c.charge) });
                }
            }
            Mode::PeriodicOv { truncation } => {
                for k in (1..=truncation).rev() {
                    let shift = 2.0 * PI * k as f64;
                    f(Source { position: Vec3::new(shift, 0.0, 0.0), weight: 0.5 });
                    f(Source { position: Vec3::new(-shift, 0.0, 0.0), weight: 0.5 });
                }
                f(Source { position: Vec3::zeros(), weight: 0.5 });
            }
        }
    }

    /// Constant added by the periodic regularization, `-sum_{0<|k|<=N} 1/(4 pi |k|)`.
    fn regularization(&self) -> f64 {
        match self.mode {
            Mode::Finite => 0.0,
            Mode::PeriodicOv { truncation } => {
                let mut s = 0.0;
                for k in (1..=truncation).rev() {
                    s += 1.0 / (2.0 * PI * k as f64);
                }
                -s
            }
        }
    }

    /// Index of a center within the exclusion radius of `x`, if any.
    pub fn nearby_center(&self, x: &Vec3) -> Option<usize> {
        let y = self.reduce(x);
        self.centers
            .iter()
            .position(|c| (y - c.position).norm() < self.exclusion_radius)
    }

    fn check_point(&self, x: &Vec3) -> Result<Vec3> {
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidConfig("evaluation point is not finite".into()));
        }
        if let Some(index) = self.nearby_center(x) {
            return Err(Error::EvaluationAtCenter { index });
        }
        Ok(self.reduce(x))
    }

    fn check_phi(&self, phi: f64) -> Result<f64> {
        if phi > 0.0 && phi.is_finite() {
            Ok(phi)
        } else {
            Err(Error::NonpositivePhi { phi })
        }
    }

    pub fn phi(&self, x: &Vec3) -> Result<f64> {
        let y = self.check_point(x)?;
        let mut s = 0.0;
        self.for_each_source(|src| s += src.weight / (y - src.position).norm());
        self.check_phi(self.mass + self.regularization() + s)
    }

    pub fn grad_phi(&self, x: &Vec3) -> Result<Vec3> {
        let y = self.check_point(x)?;
        let mut g = Vec3::zeros();
        self.for_each_source(|src| {
            let d = y - src.position;
            let r = d.norm();
            g -= d * (src.weight / (r * r * r));
        });
        Ok(g)
    }

    pub fn hess_phi(&self, x: &Vec3) -> Result<Matrix3<f64>> {
        let y = self.check_point(x)?;
        let mut h = Matrix3::zeros();
        self.for_each_source(|src| h += source_hessian(&(y - src.position), src.weight));
        Ok(h)
    }

    /// `phi`, gradient and Hessian in one pass. In the periodic mode `phi` must be
    /// positive, as for [`MonopoleConfig::phi`].
    pub fn jet(&self, x: &Vec3) -> Result<PhiJet> {
        let y = self.check_point(x)?;
        let mut phi = 0.0;
        let mut grad = Vec3::zeros();
        let mut hess = Matrix3::zeros();
        self.for_each_source(|src| {
            let d = y - src.position;
            let r = d.norm();
            phi += src.weight / r;
            grad -= d * (src.weight / (r * r * r));
            hess += source_hessian(&d, src.weight);
        });
        let phi = self.check_phi(self.mass + self.regularization() + phi)?;
        Ok(PhiJet { phi, grad, hess })
    }

    /// Contribution of the sources other than `skip` (used for the chord potential).
    pub(crate) fn jet_without(&self, x: &Vec3, skip: &[usize]) -> Result<PhiJet> {
        if self.is_periodic() {
            return Err(Error::Unsupported("partial potentials need the finite mode".into()));
        }
        let mut phi = self.mass;
        let mut grad = Vec3::zeros();
        let mut hess = Matrix3::zeros();
        for (i, c) in self.centers.iter().enumerate() {
            if skip.contains(&i) {
                continue;
            }
            let d = x - c.position;
            let r = d.norm();
            if r < self.exclusion_radius {
                return Err(Error::EvaluationAtCenter { index: i });
            }
            let w = 0.5 * f64::from(c.charge);
            phi += w / r;
            grad -= d * (w / (r * r * r));
            hess += source_hessian(&d, w);
        }
        Ok(PhiJet { phi, grad, hess })
    }

    /// Length `phi^{-1/2}` of the circle orbit through `x`.
    pub fn orbit_length(&self, x: &Vec3) -> Result<f64> {
        Ok(self.phi(x)?.powf(-0.5))
    }

    /// Euclidean gradient of the orbit length, `-grad phi / (2 phi^{3/2})`.
    pub fn grad_orbit_length(&self, x: &Vec3) -> Result<Vec3> {
        let j = self.jet(x)?;
        Ok(-j.grad / (2.0 * j.phi.powf(1.5)))
    }

    /// Connection coefficients in the frame `e0 = phi^{1/2} d/dtheta`,
    /// `e_i = phi^{-1/2} d/dx_i` (indices 1..=3). Entry `[a][b][c]` is the
    /// coefficient of `e_c` in `nabla_{e_a} e_b`.
    pub fn connection_coefficients(&self, x: &Vec3) -> Result<[[[f64; 4]; 4]; 4]> {
        let j = self.jet(x)?;
        Ok(connection_from_gradient(j.phi, &j.grad))
    }

    /// Hessian of a circle-invariant function `f` in the invariant frame, from the
    /// Euclidean gradient and Hessian of `f` at `x`.
    pub fn invariant_hessian(&self, x: &Vec3, df: &Vec3, d2f: &Matrix3<f64>) -> Result<Matrix4<f64>> {
        let j = self.jet(x)?;
        Ok(invariant_hessian_from(j.phi, &j.grad, df, d2f))
    }
}

fn source_hessian(d: &Vec3, weight: f64) -> Matrix3<f64> {
    let r2 = d.norm_squared();
    let r = r2.sqrt();
    let r3 = r2 * r;
    let r5 = r3 * r2;
    d * d.transpose() * (3.0 * weight / r5) - Matrix3::identity() * (weight / r3)
}

/// Levi-Civita symbol on indices 0..3 (standing for 1..=3).
fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub(crate) fn connection_from_gradient(phi: f64, grad: &Vec3) -> [[[f64; 4]; 4]; 4] {
    let g = grad / (2.0 * phi.powf(1.5));
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for i in 0..3 {
        gamma[0][0][i + 1] = g[i];
        gamma[0][i + 1][0] = -g[i];
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e == 0.0 {
                    continue;
                }
                gamma[i + 1][0][k + 1] += e * g[j];
                gamma[0][i + 1][k + 1] += e * g[j];
                gamma[i + 1][j + 1][0] += e * g[k];
            }
            gamma[i + 1][j + 1][i + 1] += g[j];
        }
        for k in 0..3 {
            gamma[i + 1][i + 1][k + 1] -= g[k];
        }
    }
    gamma
}

pub(crate) fn invariant_hessian_from(phi: f64, dphi: &Vec3, df: &Vec3, d2f: &Matrix3<f64>) -> Matrix4<f64> {
    let c = 1.0 / (2.0 * phi * phi);
    let dot = dphi.dot(df);
    let cross = dphi.cross(df);
    let mut h = Matrix4::zeros();
    h[(0, 0)] = -c * dot;
    for i in 0..3 {
        h[(0, i + 1)] = -c * cross[i];
        h[(i + 1, 0)] = -c * cross[i];
        for j in 0..3 {
            let delta = if i == j { c * dot } else { 0.0 };
            h[(i + 1, j + 1)] = d2f[(i, j)] / phi + delta - c * (df[i] * dphi[j] + dphi[i] * df[j]);
        }
    }
    h
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CenterFile {
    p: [f64; 3],
    #[serde(default = "unit_charge")]
    charge: u32,
}

fn unit_charge() -> u32 {
    1
}

/// On-disk JSON shape of a configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass: Option<f64>,
    #[serde(default)]
    centers: Vec<CenterFile>,
    #[serde(default = "finite_mode")]
    mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exclusion_radius: Option<f64>,
}

fn finite_mode() -> Mode {
    Mode::Finite
}

impl TryFrom<ConfigFile> for MonopoleConfig {
    type Error = Error;

    fn try_from(f: ConfigFile) -> Result<Self> {
        let mut cfg = match f.mode {
            Mode::Finite => MonopoleConfig::finite(
                f.mass.unwrap_or(0.0),
                f.centers
                    .iter()
                    .map(|c| Center { position: Vec3::from(c.p), charge: c.charge })
                    .collect(),
            )?,
            Mode::PeriodicOv { truncation } => {
                let default_center = f.centers.len() == 1 && f.centers[0].p == [0.0; 3] && f.centers[0].charge == 1;
                if !(f.centers.is_empty() || default_center) {
                    return Err(Error::InvalidConfig(
                        "periodic mode takes a single unit center at the origin".into(),
                    ));
                }
                MonopoleConfig::periodic_ov(f.mass.unwrap_or_else(ooguri_vafa_default_mass), truncation)?
            }
        };
        if let Some(r) = f.exclusion_radius {
            cfg = cfg.with_exclusion_radius(r)?;
        }
        Ok(cfg)
    }
}

impl From<MonopoleConfig> for ConfigFile {
    fn from(c: MonopoleConfig) -> Self {
        ConfigFile {
            mass: Some(c.mass),
            centers: c
                .centers
                .iter()
                .map(|x| CenterFile { p: [x.position.x, x.position.y, x.position.z], charge: x.charge })
                .collect(),
            mode: c.mode,
            exclusion_radius: (c.exclusion_radius != DEFAULT_EXCLUSION_RADIUS).then_some(c.exclusion_radius),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eh() -> MonopoleConfig {
        MonopoleConfig::unit_charges(0.0, &[Vec3::new(1.0, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0)]).unwrap()
    }

    fn fd_grad(cfg: &MonopoleConfig, x: &Vec3, h: f64) -> Vec3 {
        let mut g = Vec3::zeros();
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = h;
            g[i] = (cfg.phi(&(x + e)).unwrap() - cfg.phi(&(x - e)).unwrap()) / (2.0 * h);
        }
        g
    }

    fn fd_hess(cfg: &MonopoleConfig, x: &Vec3, h: f64) -> Matrix3<f64> {
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = h;
            let col = (cfg.grad_phi(&(x + e)).unwrap() - cfg.grad_phi(&(x - e)).unwrap()) / (2.0 * h);
            m.set_column(i, &col);
        }
        m
    }

    #[test]
    fn flat_space_values() {
        let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::zeros()]).unwrap();
        let x = Vec3::new(2.0, 0.0, 0.0);
        assert_relative_eq!(cfg.phi(&x).unwrap(), 0.25);
        assert_relative_eq!(cfg.grad_phi(&x).unwrap(), Vec3::new(-0.125, 0.0, 0.0));
        let h = cfg.hess_phi(&x).unwrap();
        assert_relative_eq!(h[(0, 0)], 1.0 / 8.0, epsilon = 1e-15);
        assert_relative_eq!(h[(1, 1)], -1.0 / 16.0, epsilon = 1e-15);
        assert_relative_eq!(h[(2, 2)], -1.0 / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn eh_midpoint_is_critical() {
        let cfg = eh();
        assert_eq!(cfg.phi(&Vec3::zeros()).unwrap(), 1.0);
        assert_eq!(cfg.grad_phi(&Vec3::zeros()).unwrap(), Vec3::zeros());
        assert_relative_eq!(cfg.orbit_length(&Vec3::zeros()).unwrap(), 1.0);
    }

    #[test]
    fn evaluation_at_center_is_rejected() {
        let cfg = eh();
        assert_eq!(cfg.phi(&Vec3::new(1.0, 0.0, 1e-12)), Err(Error::EvaluationAtCenter { index: 0 }));
        assert!(cfg.phi(&Vec3::new(1.0, 0.0, 1e-6)).is_ok());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cfg = MonopoleConfig::finite(
            0.3,
            vec![
                Center { position: Vec3::new(0.1, -0.4, 0.7), charge: 2 },
                Center::unit(Vec3::new(-0.9, 0.2, 0.0)),
                Center::unit(Vec3::new(0.5, 0.8, -0.3)),
            ],
        )
        .unwrap();
        let x = Vec3::new(0.25, 0.1, 0.35);
        assert_relative_eq!(cfg.grad_phi(&x).unwrap(), fd_grad(&cfg, &x, 1e-5), epsilon = 1e-7);
        assert_relative_eq!(cfg.hess_phi(&x).unwrap(), fd_hess(&cfg, &x, 1e-5), epsilon = 1e-6);
        assert_relative_eq!(cfg.hess_phi(&x).unwrap().trace(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn grad_orbit_length_matches_finite_difference() {
        let cfg = eh();
        let x = Vec3::new(0.3, 0.4, -0.2);
        let h = 1e-6;
        let g = cfg.grad_orbit_length(&x).unwrap();
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = h;
            let fd = (cfg.orbit_length(&(x + e)).unwrap() - cfg.orbit_length(&(x - e)).unwrap()) / (2.0 * h);
            assert_relative_eq!(g[i], fd, epsilon = 1e-8);
        }
    }

    #[test]
    fn connection_is_metric_compatible() {
        let cfg = eh();
        let gamma = cfg.connection_coefficients(&Vec3::new(0.2, 0.7, -0.1)).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert_relative_eq!(gamma[a][b][c], -gamma[a][c][b], epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn periodic_potential_is_periodic_and_even() {
        let cfg = MonopoleConfig::ooguri_vafa(200).unwrap();
        let x = Vec3::new(0.7, 0.3, -0.2);
        let shifted = x + Vec3::new(2.0 * PI, 0.0, 0.0);
        assert_relative_eq!(cfg.phi(&x).unwrap(), cfg.phi(&shifted).unwrap(), epsilon = 1e-12);
        let mirrored = Vec3::new(-x.x, x.y, x.z);
        assert_relative_eq!(cfg.phi(&x).unwrap(), cfg.phi(&mirrored).unwrap(), epsilon = 1e-14);
        assert_relative_eq!(cfg.grad_phi(&x).unwrap(), fd_grad(&cfg, &x, 1e-5), epsilon = 1e-7);
    }

    #[test]
    fn periodic_images_are_excluded() {
        let cfg = MonopoleConfig::ooguri_vafa(50).unwrap();
        assert_eq!(
            cfg.phi(&Vec3::new(4.0 * PI, 0.0, 0.0)),
            Err(Error::EvaluationAtCenter { index: 0 })
        );
    }

    #[test]
    fn periodic_mass_must_keep_phi_positive() {
        let cfg = MonopoleConfig::periodic_ov(0.0, 100).unwrap();
        assert!(matches!(cfg.phi(&Vec3::new(PI, 50.0, 0.0)), Err(Error::NonpositivePhi { .. })));
    }

    #[test]
    fn config_json_round_trip() {
        let text = r#"{"mass": 0.5, "centers": [{"p": [1, 0, 0]}, {"p": [-1, 0, 0], "charge": 2}]}"#;
        let cfg: MonopoleConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.centers()[1].charge, 2);
        assert_eq!(cfg.mode(), Mode::Finite);
        let back: MonopoleConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);

        let ov: MonopoleConfig = serde_json::from_str(r#"{"mode": {"periodic_ov": {"truncation": 200}}}"#).unwrap();
        assert_relative_eq!(ov.mass(), ooguri_vafa_default_mass());
        assert!(serde_json::from_str::<MonopoleConfig>(r#"{"centers": []}"#).is_err());
        assert!(serde_json::from_str::<MonopoleConfig>(r#"{"mass": -1, "centers": [{"p": [0,0,0]}]}"#).is_err());
    }
}
