//! Flow of plane curves by `d gamma / dt = phi^{-1} gamma''` (derivatives in
//! Euclidean arclength). This is mean curvature flow of the circle-invariant
//! surface lying over the curve. Explicit finite differences on a polyline with
//! arclength resampling at every checkpoint.

use serde::Serialize;

use crate::curve::{CurveKind, PolyCurve};
use crate::error::{Error, Result};
use crate::lagrangian;
use crate::monopole::{MonopoleConfig, Vec3};
use crate::plane::Point2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveFlowControls {
    pub n_nodes: usize,
    /// Time step factor: `dt <= cfl * h^2 * min phi`.
    pub cfl: f64,
    pub checkpoint_dt: f64,
    pub t_max: f64,
    /// Bound on `phi^{-1} kappa^2` in units of the configuration length scale.
    pub singularity_threshold: f64,
    /// Hausdorff distance to the chord and curvature below which an open curve
    /// counts as converged.
    pub conv_tol: f64,
    /// Diameter below which a closed curve counts as shrunk to a point.
    /// `None` means `1e-2` times the initial diameter.
    pub extinction_tol: Option<f64>,
    /// Distance from the curve to a center that counts as a collision.
    /// `None` means `1e-3` length scales.
    pub collision_radius: Option<f64>,
    pub max_steps: usize,
}

impl Default for CurveFlowControls {
    fn default() -> Self {
        CurveFlowControls {
            n_nodes: 128,
            cfl: 0.4,
            checkpoint_dt: 0.01,
            t_max: 10.0,
            singularity_threshold: 1e6,
            conv_tol: 1e-3,
            extinction_tol: None,
            collision_radius: None,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FlowOutcome {
    ConvergedToSegment,
    ShrunkToPoint,
    SingularityDetected,
    CenterCollision { center: usize },
    /// The polyline stopped being embedded.
    SelfIntersection,
    MaxTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowDiagnostics {
    pub length: f64,
    /// Area of the invariant surface over the curve, `2 pi` times the length.
    pub surface_area: f64,
    pub beta_variation: f64,
    pub max_phi_inv_kappa_sq: f64,
    pub max_normal_grad_sq: f64,
    pub max_abs_kappa: f64,
    pub diameter: f64,
    /// Distance to the nearest center other than the endpoints (`None` if there is none).
    pub min_center_distance: Option<f64>,
    pub hausdorff_to_chord: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowCheckpoint {
    pub t: f64,
    pub steps: usize,
    pub curve: PolyCurve,
    pub diagnostics: FlowDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTrace {
    pub checkpoints: Vec<FlowCheckpoint>,
    pub outcome: FlowOutcome,
}

/// Surface area of the invariant surface over a curve: every orbit over the
/// curve has length `phi^{-1/2}` and the surface metric is `phi ds^2`, so the
/// area element is `2 pi ds`.
pub fn surface_area(curve: &PolyCurve) -> f64 {
    2.0 * std::f64::consts::PI * curve.length()
}

fn endpoint_centers(curve: &PolyCurve) -> Vec<usize> {
    match curve.kind() {
        CurveKind::Closed => Vec::new(),
        CurveKind::Open { start, end } => vec![start, end],
    }
}

/// `max phi^{-1} kappa^2` and `max phi^{-2} |grad_perp phi|^2` over interior nodes,
/// where `grad_perp` drops the component along the curve.
pub fn blowup_diagnostics(config: &MonopoleConfig, curve: &PolyCurve) -> Result<(f64, f64)> {
    let world = curve.world_nodes();
    let tangents = curve.world_tangents();
    let mut kmax: f64 = 0.0;
    let mut gmax: f64 = 0.0;
    for s in curve.curvature() {
        let jet = config.jet(&world[s.node])?;
        kmax = kmax.max(s.kappa * s.kappa / jet.phi);
        let t = tangents[s.node];
        let perp = jet.grad - t * jet.grad.dot(&t);
        gmax = gmax.max(perp.norm_squared() / (jet.phi * jet.phi));
    }
    Ok((kmax, gmax))
}

fn diagnostics(config: &MonopoleConfig, curve: &PolyCurve) -> Result<FlowDiagnostics> {
    let (max_phi_inv_kappa_sq, max_normal_grad_sq) = blowup_diagnostics(config, curve)?;
    let skip = endpoint_centers(curve);
    let min_center_distance = config
        .centers()
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, c)| curve.distance_to(&c.position))
        .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |v| v.min(d))));
    Ok(FlowDiagnostics {
        length: curve.length(),
        surface_area: surface_area(curve),
        beta_variation: lagrangian::grading(curve).variation,
        max_phi_inv_kappa_sq,
        max_normal_grad_sq,
        max_abs_kappa: curve.curvature().iter().fold(0.0, |m, s| m.max(s.kappa.abs())),
        diameter: curve.diameter(),
        min_center_distance,
        hausdorff_to_chord: curve.hausdorff_to_chord(),
    })
}

/// Terminal state reached by `curve`, if any: an open curve within `conv_tol`
/// of its chord (in position and curvature), or a closed curve of diameter
/// below `extinction_tol`.
pub fn detect_convergence(curve: &PolyCurve, conv_tol: f64, extinction_tol: f64) -> Option<FlowOutcome> {
    match curve.kind() {
        CurveKind::Open { .. } => {
            let close = curve.hausdorff_to_chord().is_some_and(|h| h < conv_tol);
            let flat = curve.curvature().iter().all(|s| s.kappa.abs() < conv_tol);
            (close && flat).then_some(FlowOutcome::ConvergedToSegment)
        }
        CurveKind::Closed => (curve.diameter() < extinction_tol).then_some(FlowOutcome::ShrunkToPoint),
    }
}

/// Centers lying in the plane of the curve, other than its endpoints.
fn planar_obstacles(config: &MonopoleConfig, curve: &PolyCurve) -> Vec<(usize, Point2)> {
    let tol = 1e-9 * config.length_scale();
    let skip = endpoint_centers(curve);
    config
        .centers()
        .iter()
        .enumerate()
        .filter(|(i, c)| !skip.contains(i) && curve.frame().distance(&c.position) < tol)
        .map(|(i, c)| (i, curve.frame().project(&c.position)))
        .collect()
}

/// Runs the flow from `curve0` and records a checkpoint every `checkpoint_dt`,
/// and in between whenever the length has dropped by a tenth since the last one.
pub fn curve_flow(config: &MonopoleConfig, curve0: &PolyCurve, controls: &CurveFlowControls) -> Result<FlowTrace> {
    curve0.check_against(config)?;
    if !(controls.cfl > 0.0 && controls.checkpoint_dt > 0.0 && controls.t_max > 0.0) {
        return Err(Error::InvalidConfig("flow controls must be positive".into()));
    }
    let scale = config.length_scale().max(curve0.diameter());
    let extinction_tol = controls.extinction_tol.unwrap_or(1e-2 * curve0.diameter());
    let collision_radius = controls.collision_radius.unwrap_or(1e-3 * scale);
    let obstacles = planar_obstacles(config, curve0);
    let frame = *curve0.frame();
    let kind = curve0.kind();
    let closed = curve0.is_closed();

    let mut curve = curve0.resample(controls.n_nodes)?;
    let windings: Vec<i64> = obstacles.iter().map(|(_, p)| curve.winding_around(p)).collect();
    let mut checkpoints = vec![FlowCheckpoint { t: 0.0, steps: 0, curve: curve.clone(), diagnostics: diagnostics(config, &curve)? }];
    let finish = |checkpoints, outcome| Ok(FlowTrace { checkpoints, outcome });
    if let Some(outcome) = detect_convergence(&curve, controls.conv_tol, extinction_tol) {
        return finish(checkpoints, outcome);
    }

    let n = curve.nodes().len();
    let interior: Vec<usize> = if closed { (0..n).collect() } else { (1..n - 1).collect() };
    let mut nodes: Vec<Point2> = curve.nodes().to_vec();
    let mut velocity = vec![Point2::zeros(); n];
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut regular = 1u32;
    let mut next_checkpoint = controls.checkpoint_dt.min(controls.t_max);

    let mut checkpoint_length = curve.length();
    while steps < controls.max_steps {
        let mut h_min = f64::INFINITY;
        let mut length = 0.0;
        let segments = if closed { n } else { n - 1 };
        for k in 0..segments {
            let h = (nodes[(k + 1) % n] - nodes[k]).norm();
            h_min = h_min.min(h);
            length += h;
        }
        if h_min < 0.5 * length / segments as f64 {
            let even = PolyCurve::from_parts(frame, nodes.clone(), kind).resample(controls.n_nodes)?;
            nodes.copy_from_slice(even.nodes());
            h_min = length / segments as f64;
        }
        let mut phi_min = f64::INFINITY;
        for &i in &interior {
            let a = nodes[(i + n - 1) % n];
            let b = nodes[i];
            let c = nodes[(i + 1) % n];
            let (hm, hp) = ((b - a).norm(), (c - b).norm());
            let phi = match config.phi(&frame.to_world(&b)) {
                Ok(p) => p,
                Err(Error::EvaluationAtCenter { index }) => {
                    return finish(checkpoints, FlowOutcome::CenterCollision { center: index });
                }
                Err(e) => return Err(e),
            };
            phi_min = phi_min.min(phi);
            let second = ((c - b) / hp - (b - a) / hm) * (2.0 / (hm + hp));
            velocity[i] = second / phi;
        }
        let dt = (controls.cfl * h_min * h_min * phi_min).min(next_checkpoint - t);
        if dt.is_nan() || dt <= 0.0 {
            return Err(Error::StepUnderflow { t });
        }
        for &i in &interior {
            nodes[i] += velocity[i] * dt;
        }
        t = if dt == next_checkpoint - t { next_checkpoint } else { t + dt };
        steps += 1;
        // Extra checkpoints when the curve shrinks fast, so that extinction and
        // collisions are seen before the next regular checkpoint.
        let shrinking = length < 0.9 * checkpoint_length;
        if t < next_checkpoint && !shrinking {
            continue;
        }

        curve = PolyCurve::from_parts(frame, nodes.clone(), kind).resample(controls.n_nodes)?;
        nodes.copy_from_slice(curve.nodes());
        if !curve.is_embedded() {
            return finish(checkpoints, FlowOutcome::SelfIntersection);
        }
        for ((idx, p), w0) in obstacles.iter().zip(&windings) {
            let d = curve.distance_to(&frame.to_world(p));
            if d < collision_radius || curve.winding_around(p) != *w0 {
                return finish(checkpoints, FlowOutcome::CenterCollision { center: *idx });
            }
        }
        let diag = match diagnostics(config, &curve) {
            Ok(d) => d,
            Err(Error::EvaluationAtCenter { index }) => {
                return finish(checkpoints, FlowOutcome::CenterCollision { center: index });
            }
            Err(e) => return Err(e),
        };
        checkpoint_length = diag.length;
        checkpoints.push(FlowCheckpoint { t, steps, curve: curve.clone(), diagnostics: diag });
        if let Some(outcome) = detect_convergence(&curve, controls.conv_tol, extinction_tol) {
            return finish(checkpoints, outcome);
        }
        if diag.max_phi_inv_kappa_sq * scale > controls.singularity_threshold {
            return finish(checkpoints, FlowOutcome::SingularityDetected);
        }
        if t >= controls.t_max {
            return finish(checkpoints, FlowOutcome::MaxTime);
        }
        if t >= next_checkpoint {
            regular += 1;
            next_checkpoint = (f64::from(regular) * controls.checkpoint_dt).min(controls.t_max);
        }
    }
    Err(Error::StepUnderflow { t })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CliffordModel {
    /// `r(t) = r0 - 2t`.
    Flat,
    /// `m r^2 + r = m r0^2 + r0 - 2t`.
    TaubNut { mass: f64 },
}

/// Radius of a circle centered on the single center and flowing in a plane
/// through it.
pub fn clifford_radius(model: CliffordModel, r0: f64, t: f64) -> Result<f64> {
    let (m, rhs) = match model {
        CliffordModel::Flat => (0.0, r0 - 2.0 * t),
        CliffordModel::TaubNut { mass } => (mass, mass * r0 * r0 + r0 - 2.0 * t),
    };
    if rhs < 0.0 {
        let extinction = 0.5 * (m * r0 * r0 + r0);
        return Err(Error::PastExtinction { t, extinction });
    }
    // Positive root of m r^2 + r - rhs = 0, in a form stable as m -> 0.
    Ok(2.0 * rhs / (1.0 + (1.0 + 4.0 * m * rhs).sqrt()))
}

/// The flow velocity `phi^{-1} gamma''` at an interior node, for tests and probes.
pub fn node_velocity(config: &MonopoleConfig, curve: &PolyCurve, i: usize) -> Result<Vec3> {
    let n = curve.nodes().len();
    let nd = curve.nodes();
    let (a, b, c) = (nd[(i + n - 1) % n], nd[i], nd[(i + 1) % n]);
    let (hm, hp) = ((b - a).norm(), (c - b).norm());
    let second = ((c - b) / hp - (b - a) / hm) * (2.0 / (hm + hp));
    let phi = config.phi(&curve.frame().to_world(&b))?;
    let v = second / phi;
    Ok(curve.frame().u() * v.x + curve.frame().w() * v.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::PlaneFrame;
    use approx::assert_relative_eq;

    #[test]
    fn clifford_reference() {
        assert_relative_eq!(clifford_radius(CliffordModel::Flat, 1.0, 0.25).unwrap(), 0.5);
        let r = clifford_radius(CliffordModel::TaubNut { mass: 1.0 }, 1.0, 0.5).unwrap();
        assert_relative_eq!(r * r + r, 1.0, epsilon = 1e-14);
        assert!(clifford_radius(CliffordModel::Flat, 1.0, 0.6).is_err());
    }

    #[test]
    fn flat_circle_moves_inward_at_speed_two() {
        let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::zeros()]).unwrap();
        let c = PolyCurve::circle(PlaneFrame::horizontal(), Point2::zeros(), 0.8, 64).unwrap();
        let v = node_velocity(&cfg, &c, 5).unwrap();
        let x = c.frame().to_world(&c.nodes()[5]);
        assert_relative_eq!(v, -x / x.norm() * 2.0, epsilon = 1e-12);
    }

    #[test]
    fn straight_chord_is_stationary() {
        let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::new(-1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)]).unwrap();
        let arc = PolyCurve::circular_arc(PlaneFrame::horizontal(), Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 0.0, 20, 0, 1).unwrap();
        let trace = curve_flow(&cfg, &arc, &CurveFlowControls { n_nodes: 20, ..Default::default() }).unwrap();
        assert_eq!(trace.outcome, FlowOutcome::ConvergedToSegment);
    }
}
