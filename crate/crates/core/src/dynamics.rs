//! Gradient flow of the orbit length. The orbit length `l = phi^{-1/2}` has
//! gradient `-grad phi / (2 phi^{3/2})` and the flow `x' = grad phi / (2 phi^2)`
//! moves points so that orbits shrink. Centers attract, critical points repel.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monopole::{MonopoleConfig, Vec3};
use crate::ode::{Dopri5, Tolerances};
use crate::orbits::{self, CriticalPointRecord};
use crate::plane::{PlaneFrame, Point2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitFlowControls {
    pub t_max: f64,
    pub tolerances: Tolerances,
    /// Distance to a center that counts as arrival. `None` means `1e-6` length scales.
    pub capture_radius: Option<f64>,
    /// Flow speed below which the trajectory is considered to sit at a critical point.
    pub rest_speed: f64,
    pub max_steps: usize,
}

impl Default for OrbitFlowControls {
    fn default() -> Self {
        OrbitFlowControls {
            t_max: 100.0,
            tolerances: Tolerances::default(),
            capture_radius: None,
            rest_speed: 1e-9,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: Vec3,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Termination {
    ReachedCenter(usize),
    NearCriticalPoint(CriticalPointRecord),
    MaxTime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub termination: Termination,
}

/// Velocity of the orbit-shrinking flow at `x`.
pub fn orbit_velocity(config: &MonopoleConfig, x: &Vec3) -> Result<Vec3> {
    let phi = config.phi(x)?;
    Ok(config.grad_phi(x)? / (2.0 * phi * phi))
}

fn capture_radius(config: &MonopoleConfig, controls: &OrbitFlowControls) -> f64 {
    controls.capture_radius.unwrap_or(1e-6 * config.length_scale())
}

fn captured_by(config: &MonopoleConfig, x: &Vec3, radius: f64) -> Option<usize> {
    config
        .centers()
        .iter()
        .enumerate()
        .map(|(i, c)| (i, (x - c.position).norm()))
        .filter(|(_, d)| *d < radius)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// Integrates the flow from `x0` until it reaches a center, stalls at a critical
/// point, or runs out of time.
pub fn orbit_flow(config: &MonopoleConfig, x0: &Vec3, controls: &OrbitFlowControls) -> Result<Trajectory> {
    let radius = capture_radius(config, controls);
    let field = |x: &Vec3| orbit_velocity(config, x);
    let mut ode = Dopri5::new(field, controls.tolerances);
    let mut t = 0.0;
    let mut x = *x0;
    let mut samples = vec![TrajectorySample { t, x, phi: config.phi(&x)? }];
    let finish = |samples, termination| Ok(Trajectory { samples, termination });
    for _ in 0..controls.max_steps {
        if let Some(i) = captured_by(config, &x, radius) {
            return finish(samples, Termination::ReachedCenter(i));
        }
        if orbit_velocity(config, &x)?.norm() < controls.rest_speed {
            let record = orbits::refine_critical_point(config, &x)?;
            return finish(samples, Termination::NearCriticalPoint(record));
        }
        if t >= controls.t_max {
            return finish(samples, Termination::MaxTime);
        }
        let (tn, xn) = match ode.step(t, &x, controls.t_max) {
            Ok(s) => s,
            // Underflow right next to a center means the trajectory has arrived.
            Err(Error::StepUnderflow { .. }) if captured_by(config, &x, 1e3 * radius).is_some() => {
                let i = captured_by(config, &x, 1e3 * radius).unwrap_or(0);
                return finish(samples, Termination::ReachedCenter(i));
            }
            Err(e) => return Err(e),
        };
        t = tn;
        x = xn;
        let phi = match config.phi(&x) {
            Ok(p) => p,
            Err(Error::EvaluationAtCenter { index }) => return finish(samples, Termination::ReachedCenter(index)),
            Err(e) => return Err(e),
        };
        samples.push(TrajectorySample { t, x, phi });
    }
    Err(Error::StepUnderflow { t })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RestPointKind {
    /// A center: every nearby trajectory flows into it.
    Attractor { center: usize },
    /// A critical point, with an eigen-direction of `hess phi` along which the
    /// linearized flow grows.
    Unstable { eigenvalue: f64, direction: Vec3 },
}

/// Classifies a rest point of the flow. Points that are neither near a center
/// nor critical give `NotRestPoint`.
pub fn classify_rest_point(config: &MonopoleConfig, x: &Vec3, tol: f64) -> Result<RestPointKind> {
    if let Some(center) = captured_by(config, x, 1e-6 * config.length_scale()) {
        return Ok(RestPointKind::Attractor { center });
    }
    let jet = config.jet(x)?;
    if jet.grad.norm() / (2.0 * jet.phi * jet.phi) > tol {
        return Err(Error::NotRestPoint);
    }
    let (vals, vecs) = orbits::sorted_eigen(&jet.hess);
    if vals[2] > 0.0 {
        Ok(RestPointKind::Unstable { eigenvalue: vals[2], direction: vecs[2] })
    } else {
        Err(Error::DegenerateCritical { smallest: vals[2].abs() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitGrid {
    pub frame: PlaneFrame,
    pub u_range: (f64, f64),
    pub w_range: (f64, f64),
    pub n_u: usize,
    pub n_w: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortraitSample {
    pub uv: Point2,
    pub position: Vec3,
    /// In-plane components of the flow velocity; zero at singular samples.
    pub velocity: Point2,
    /// Velocity component along the plane normal.
    pub normal_velocity: f64,
    pub orbit_length: f64,
    pub singular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlanarRestKind {
    Center,
    Source,
    Sink,
    Saddle,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortraitRestPoint {
    pub uv: Point2,
    pub position: Vec3,
    pub kind: PlanarRestKind,
    pub center: Option<usize>,
    /// Eigenvalues of the in-plane restriction of `hess phi` (zero for centers).
    pub planar_eigenvalues: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePortrait {
    pub n_u: usize,
    pub n_w: usize,
    pub samples: Vec<PortraitSample>,
    pub rest_points: Vec<PortraitRestPoint>,
}

/// Classifies a critical point through the restriction of `hess phi` to the plane.
/// The linearized flow there is `hess phi / (2 phi^2)`, so positive eigenvalues
/// repel.
pub fn planar_rest_kind(config: &MonopoleConfig, frame: &PlaneFrame, x: &Vec3) -> Result<(PlanarRestKind, [f64; 2])> {
    let h = config.hess_phi(x)?;
    let (u, w) = (frame.u(), frame.w());
    let a = u.dot(&(h * u));
    let b = u.dot(&(h * w));
    let d = w.dot(&(h * w));
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let (l1, l2) = (mean - rad, mean + rad);
    let scale = h.abs().max();
    let zero = |l: f64| l.abs() <= orbits::DEGENERACY_RATIO * scale;
    let kind = if zero(l1) || zero(l2) {
        PlanarRestKind::Inconclusive
    } else if l1 > 0.0 {
        PlanarRestKind::Source
    } else if l2 < 0.0 {
        PlanarRestKind::Sink
    } else {
        PlanarRestKind::Saddle
    };
    Ok((kind, [l1, l2]))
}

/// Samples the flow on a grid in a plane and marks centers and critical points
/// lying in it.
pub fn phase_portrait(config: &MonopoleConfig, grid: &PortraitGrid) -> Result<PhasePortrait> {
    if grid.n_u < 2 || grid.n_w < 2 {
        return Err(Error::InvalidConfig("portrait grid needs at least 2 x 2 samples".into()));
    }
    let frame = &grid.frame;
    let mut samples = Vec::with_capacity(grid.n_u * grid.n_w);
    for j in 0..grid.n_w {
        for i in 0..grid.n_u {
            let s = i as f64 / (grid.n_u - 1) as f64;
            let r = j as f64 / (grid.n_w - 1) as f64;
            let uv = Point2::new(
                grid.u_range.0 + s * (grid.u_range.1 - grid.u_range.0),
                grid.w_range.0 + r * (grid.w_range.1 - grid.w_range.0),
            );
            let position = frame.to_world(&uv);
            let sample = match config.jet(&position) {
                Ok(jet) => {
                    let v = jet.grad / (2.0 * jet.phi * jet.phi);
                    PortraitSample {
                        uv,
                        position,
                        velocity: frame.project_vector(&v),
                        normal_velocity: v.dot(&frame.normal()),
                        orbit_length: jet.phi.powf(-0.5),
                        singular: false,
                    }
                }
                Err(Error::EvaluationAtCenter { .. }) => PortraitSample {
                    uv,
                    position,
                    velocity: Point2::zeros(),
                    normal_velocity: 0.0,
                    orbit_length: 0.0,
                    singular: true,
                },
                Err(e) => return Err(e),
            };
            samples.push(sample);
        }
    }

    let in_plane = |x: &Vec3| frame.distance(x) < 1e-9 * config.length_scale();
    let mut rest_points = Vec::new();
    for (i, c) in config.centers().iter().enumerate() {
        if in_plane(&c.position) {
            rest_points.push(PortraitRestPoint {
                uv: frame.project(&c.position),
                position: c.position,
                kind: PlanarRestKind::Center,
                center: Some(i),
                planar_eigenvalues: [0.0; 2],
            });
        }
    }
    if !config.is_periodic() && config.centers().len() > 1 {
        for rec in orbits::find_critical_points(config, &orbits::SeedingControls::default())? {
            if in_plane(&rec.location) {
                let (kind, planar_eigenvalues) = planar_rest_kind(config, frame, &rec.location)?;
                rest_points.push(PortraitRestPoint {
                    uv: frame.project(&rec.location),
                    position: rec.location,
                    kind,
                    center: None,
                    planar_eigenvalues,
                });
            }
        }
    }
    Ok(PhasePortrait { n_u: grid.n_u, n_w: grid.n_w, samples, rest_points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RadialModel {
    /// Single center with `m = 0`: `r(t) = r0 - t`.
    Flat,
    /// Single center with mass `m > 0`: `(1 + 2 m r)^3 = (1 + 2 m r0)^3 - 6 m t`.
    TaubNut { mass: f64 },
}

/// Closed-form distance to the center along the flow of a single-center space.
pub fn reference_radial_solution(model: RadialModel, r0: f64, t: f64) -> Result<f64> {
    match model {
        RadialModel::Flat => {
            if t > r0 {
                return Err(Error::PastExtinction { t, extinction: r0 });
            }
            Ok(r0 - t)
        }
        RadialModel::TaubNut { mass } if mass > 0.0 => {
            let m = mass;
            // (1 + 2 m r)^3 = 1 + delta, written without cancellation for small m.
            let delta = 6.0 * m * r0 + 12.0 * m * m * r0 * r0 + 8.0 * m * m * m * r0 * r0 * r0 - 6.0 * m * t;
            let extinction = ((1.0 + 2.0 * m * r0).powi(3) - 1.0) / (6.0 * m);
            if delta < 0.0 {
                return Err(Error::PastExtinction { t, extinction });
            }
            Ok((delta.ln_1p() / 3.0).exp_m1() / (2.0 * m))
        }
        RadialModel::TaubNut { .. } => reference_radial_solution(RadialModel::Flat, r0, t),
    }
}
