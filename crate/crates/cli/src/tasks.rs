//! One function per scenario task. Each returns its artifacts and the checks
//! it evaluated.

use std::f64::consts::PI;
use std::path::Path;

use ghlab::curve::PolyCurve;
use ghlab::dynamics::{orbit_flow, phase_portrait, OrbitFlowControls, PlanarRestKind, PortraitGrid, Termination};
use ghlab::flow::{curve_flow, CurveFlowControls, FlowOutcome};
use ghlab::lagrangian::{
    almost_calibrated, cohomological_phase, flow_stable, grading, jordan_holder, maslov_number, thomas_stable,
};
use ghlab::orbits::{find_critical_points, ov_axis_orbit, verify_morse_count, SeedingControls};
use ghlab::plane::{PlaneFrame, Point2};
use ghlab::sphere::{gauss_curvature, positivity_certificate};
use ghlab::{Error, MonopoleConfig, Vec3};
use nalgebra::{Matrix3, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::manifest::{
    resolve_curve, CliffordCheck, CurveSource, FlowVerdictLabel, OutcomeLabel, RadialCheck, StabilityLabels, Task,
    TestFunction,
};
use crate::output::{to_json, Cell, Csv};
use crate::svg::{contour_segments, Canvas, Mark};
use crate::RunError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Bound the value was compared with, if the check is quantitative.
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl Check {
    fn within(name: &str, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance: Some(tolerance), passed: value.abs() <= tolerance }
    }

    fn holds(name: &str, passed: bool) -> Self {
        Check { name: name.into(), value: if passed { 1.0 } else { 0.0 }, tolerance: None, passed }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, Default)]
pub struct TaskOutput {
    pub artifacts: Vec<Artifact>,
    pub checks: Vec<Check>,
}

impl TaskOutput {
    fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.artifacts.push(Artifact { name: name.into(), bytes });
    }
}

pub struct Context<'a> {
    pub base: &'a Path,
    pub seed: u64,
    pub precision: usize,
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::InvalidCurve(_) => RunError::Invalid(e.to_string()),
            _ => RunError::Failed(e.to_string()),
        }
    }
}

pub fn run_task(config: &MonopoleConfig, task: &Task, ctx: &Context) -> Result<TaskOutput, RunError> {
    match task {
        Task::Orbits { grid_density } => orbits(config, *grid_density, ctx),
        Task::OrbitFlow { start, t_max, check, check_until } => {
            orbit_flow_task(config, Vec3::from(*start), *t_max, *check, check_until.unwrap_or(*t_max), ctx)
        }
        Task::Portrait { plane, u_range, w_range, n, levels } => {
            let grid = PortraitGrid {
                frame: *plane,
                u_range: (u_range[0], u_range[1]),
                w_range: (w_range[0], w_range[1]),
                n_u: *n,
                n_w: *n,
            };
            portrait(config, &grid, *levels, ctx)
        }
        Task::CurveFlow { curve, nodes, cfl, checkpoint_dt, t_max, conv_tol, singularity_threshold, check, expect } => {
            let controls = CurveFlowControls {
                n_nodes: *nodes,
                cfl: *cfl,
                checkpoint_dt: *checkpoint_dt,
                t_max: *t_max,
                conv_tol: *conv_tol,
                singularity_threshold: *singularity_threshold,
                ..Default::default()
            };
            curve_flow_task(config, curve, &controls, *check, expect.as_deref(), ctx)
        }
        Task::Stability { curve, delta, expect } => stability(config, curve, *delta, *expect, ctx),
        Task::JordanHolder { curve, expect_tau } => jordan_holder_task(config, curve, expect_tau.as_deref(), ctx),
        Task::Curvature { chord, samples } => curvature(config, chord[0], chord[1], *samples, ctx),
        Task::HessianCheck { points, function, about, half_width, expect_positive } => {
            hessian_check(config, *points, *function, Vec3::from(*about), *half_width, *expect_positive, ctx)
        }
    }
}

fn orbits(config: &MonopoleConfig, grid_density: Option<usize>, ctx: &Context) -> Result<TaskOutput, RunError> {
    let mut out = TaskOutput::default();
    let records = if config.is_periodic() {
        vec![ov_axis_orbit(config)?]
    } else {
        let mut controls = SeedingControls::default();
        if let Some(g) = grid_density {
            controls.grid_density = g;
        }
        find_critical_points(config, &controls)?
    };
    let mut csv = Csv::new(
        &[
            "x[L]", "y[L]", "z[L]", "residual[1/L^2]", "morse_index", "lambda1[1/L^3]", "lambda2[1/L^3]",
            "lambda3[1/L^3]", "orbit_length[L^1/2]", "degenerate",
        ],
        ctx.precision,
    );
    for r in &records {
        let l = r.location;
        csv.row(&[
            Cell::Num(l.x),
            Cell::Num(l.y),
            Cell::Num(l.z),
            Cell::Num(r.residual),
            Cell::Int(r.morse_index as i64),
            Cell::Num(r.eigenvalues[0]),
            Cell::Num(r.eigenvalues[1]),
            Cell::Num(r.eigenvalues[2]),
            Cell::Num(r.orbit_length),
            Cell::Bool(r.degenerate),
        ]);
    }
    let morse = if config.is_periodic() {
        None
    } else {
        match verify_morse_count(&records, config.total_charge()) {
            Ok(count) => {
                out.checks.push(Check::holds("morse-relation", count.satisfied));
                Some(count)
            }
            Err(Error::DegeneratePresent) => {
                out.checks.push(Check::holds("non-degenerate", false));
                None
            }
            Err(e) => return Err(e.into()),
        }
    };
    out.add("orbits.csv", csv.into_bytes());
    out.add("orbits.json", to_json(&json!({ "records": records, "morse_count": morse }), ctx.precision));
    Ok(out)
}

fn orbit_flow_task(
    config: &MonopoleConfig,
    start: Vec3,
    t_max: f64,
    check: Option<RadialCheck>,
    check_until: f64,
    ctx: &Context,
) -> Result<TaskOutput, RunError> {
    let mut out = TaskOutput::default();
    let controls = OrbitFlowControls { t_max, ..Default::default() };
    let traj = orbit_flow(config, &start, &controls)?;
    let origin = config.centers().first().map(|c| c.position).unwrap_or_default();
    let mut csv = Csv::new(&["t[L]", "x[L]", "y[L]", "z[L]", "phi[1/L]", "r[L]"], ctx.precision);
    for s in &traj.samples {
        csv.nums(&[s.t, s.x.x, s.x.y, s.x.z, s.phi, (s.x - origin).norm()]);
    }
    if let Some(check) = check {
        let r0 = (start - origin).norm();
        let checked = traj.samples.iter().filter(|s| s.t <= check_until);
        let value = match check {
            RadialCheck::Flat { .. } => checked.map(|s| ((s.x - origin).norm() - (r0 - s.t)).abs()).fold(0.0, f64::max),
            RadialCheck::TaubNut { mass, .. } => {
                let invariant = |r: f64, t: f64| (1.0 + 2.0 * mass * r).powi(3) + 6.0 * mass * t;
                let i0 = invariant(r0, 0.0);
                checked.map(|s| (invariant((s.x - origin).norm(), s.t) - i0).abs()).fold(0.0, f64::max)
            }
        };
        let (name, tol) = match check {
            RadialCheck::Flat { tolerance } => ("radius-follows-r0-minus-t", tolerance),
            RadialCheck::TaubNut { tolerance, .. } => ("radial-invariant-drift", tolerance),
        };
        out.checks.push(Check::within(name, value, tol));
    }
    let termination = match traj.termination {
        Termination::ReachedCenter(i) => json!({ "reached_center": i }),
        Termination::NearCriticalPoint(r) => json!({ "near_critical_point": r }),
        Termination::MaxTime => json!("max_time"),
    };
    let last = traj.samples.last().copied();
    out.add("trajectory.csv", csv.into_bytes());
    out.add(
        "orbit_flow.json",
        to_json(
            &json!({
                "start": start,
                "termination": termination,
                "samples": traj.samples.len(),
                "final": last,
            }),
            ctx.precision,
        ),
    );
    Ok(out)
}

fn center_marks(canvas: &mut Canvas, config: &MonopoleConfig, frame: &PlaneFrame) {
    let tol = 1e-9 * config.length_scale();
    for c in config.centers() {
        if frame.distance(&c.position) < tol {
            canvas.mark(&frame.project(&c.position), Mark::Center, "black");
        }
    }
}

fn portrait(config: &MonopoleConfig, grid: &PortraitGrid, levels: Option<usize>, ctx: &Context) -> Result<TaskOutput, RunError> {
    let mut out = TaskOutput::default();
    let p = phase_portrait(config, grid)?;
    let mut csv = Csv::new(
        &["u[L]", "w[L]", "x[L]", "y[L]", "z[L]", "vu[1]", "vw[1]", "vn[1]", "orbit_length[L^1/2]", "singular"],
        ctx.precision,
    );
    for s in &p.samples {
        csv.row(&[
            Cell::Num(s.uv.x),
            Cell::Num(s.uv.y),
            Cell::Num(s.position.x),
            Cell::Num(s.position.y),
            Cell::Num(s.position.z),
            Cell::Num(s.velocity.x),
            Cell::Num(s.velocity.y),
            Cell::Num(s.normal_velocity),
            Cell::Num(s.orbit_length),
            Cell::Bool(s.singular),
        ]);
    }
    let corners = [Point2::new(grid.u_range.0, grid.w_range.0), Point2::new(grid.u_range.1, grid.w_range.1)];
    let du = (grid.u_range.1 - grid.u_range.0) / (grid.n_u - 1) as f64;
    let dw = (grid.w_range.1 - grid.w_range.0) / (grid.n_w - 1) as f64;

    let mut canvas = Canvas::covering(corners.iter());
    let stride = grid.n_u.div_ceil(25).max(1);
    let arrow = canvas.world_length(18.0);
    for j in (0..grid.n_w).step_by(stride) {
        for i in (0..grid.n_u).step_by(stride) {
            let s = &p.samples[j * grid.n_u + i];
            let norm = s.velocity.norm();
            if !s.singular && norm > 0.0 && norm.is_finite() {
                canvas.arrow(&s.uv, &(s.velocity * (arrow / norm)), "#555");
            }
        }
    }
    rest_marks(&mut canvas, &p.rest_points);
    out.add("portrait.csv", csv.into_bytes());
    out.add("rest_points.json", to_json(&p.rest_points, ctx.precision));
    out.add("portrait.svg", canvas.finish("orbit flow portrait"));

    if let Some(k) = levels {
        let values: Vec<f64> = p.samples.iter().map(|s| if s.singular { f64::NAN } else { s.orbit_length }).collect();
        let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        sorted.sort_by(f64::total_cmp);
        let mut canvas = Canvas::covering(corners.iter());
        let mut chosen = Vec::new();
        if !sorted.is_empty() {
            for m in 0..k {
                let level = sorted[((m + 1) * sorted.len() / (k + 1)).min(sorted.len() - 1)];
                let segs = contour_segments(&values, grid.n_u, grid.n_w, corners[0], du, dw, level);
                canvas.segments(&segs, "#1f5fa8", 1.2);
                chosen.push(level);
            }
        }
        rest_marks(&mut canvas, &p.rest_points);
        out.add("levels.svg", canvas.finish("level sets of the orbit length"));
        out.add("levels.json", to_json(&json!({ "levels": chosen }), ctx.precision));
    }
    Ok(out)
}

fn rest_marks(canvas: &mut Canvas, rest: &[ghlab::dynamics::PortraitRestPoint]) {
    for r in rest {
        let (mark, color) = match r.kind {
            PlanarRestKind::Center => (Mark::Center, "black"),
            PlanarRestKind::Saddle => (Mark::Saddle, "#c0392b"),
            PlanarRestKind::Source => (Mark::Source, "#c0392b"),
            PlanarRestKind::Sink | PlanarRestKind::Inconclusive => (Mark::Other, "#c0392b"),
        };
        canvas.mark(&r.uv, mark, color);
    }
}

fn outcome_label(o: FlowOutcome) -> OutcomeLabel {
    match o {
        FlowOutcome::ConvergedToSegment => OutcomeLabel::ConvergedToSegment,
        FlowOutcome::ShrunkToPoint => OutcomeLabel::ShrunkToPoint,
        FlowOutcome::SingularityDetected => OutcomeLabel::SingularityDetected,
        FlowOutcome::CenterCollision { .. } => OutcomeLabel::CenterCollision,
        FlowOutcome::SelfIntersection => OutcomeLabel::SelfIntersection,
        FlowOutcome::MaxTime => OutcomeLabel::MaxTime,
    }
}

fn curve_flow_task(
    config: &MonopoleConfig,
    source: &CurveSource,
    controls: &CurveFlowControls,
    check: Option<CliffordCheck>,
    expect: Option<&[OutcomeLabel]>,
    ctx: &Context,
) -> Result<TaskOutput, RunError> {
    let mut out = TaskOutput::default();
    let curve = resolve_curve(source, ctx.base)?;
    let trace = curve_flow(config, &curve, controls)?;
    let mut csv = Csv::new(
        &[
            "t[L]", "steps", "length[L]", "surface_area[L^2]", "beta_variation[rad]", "max_phi_inv_kappa_sq[1/L]",
            "max_normal_grad_sq[1/L^2]", "max_abs_kappa[1/L]", "diameter[L]", "min_center_distance[L]",
            "hausdorff_to_chord[L]",
        ],
        ctx.precision,
    );
    for c in &trace.checkpoints {
        let d = &c.diagnostics;
        csv.row(&[
            Cell::Num(c.t),
            Cell::Int(c.steps as i64),
            Cell::Num(d.length),
            Cell::Num(d.surface_area),
            Cell::Num(d.beta_variation),
            Cell::Num(d.max_phi_inv_kappa_sq),
            Cell::Num(d.max_normal_grad_sq),
            Cell::Num(d.max_abs_kappa),
            Cell::Num(d.diameter),
            Cell::Num(d.min_center_distance.unwrap_or(f64::NAN)),
            Cell::Num(d.hausdorff_to_chord.unwrap_or(f64::NAN)),
        ]);
    }
    if let Some(check) = check {
        let frame = curve.frame();
        let center = config.centers().first().map(|c| frame.project(&c.position)).unwrap_or_default();
        let mean_radius = |c: &PolyCurve| c.nodes().iter().map(|p| (p - center).norm()).sum::<f64>() / c.nodes().len() as f64;
        let r0 = mean_radius(&trace.checkpoints[0].curve);
        let (name, tol, value) = match check {
            CliffordCheck::Flat { tolerance } => (
                "radius-follows-r0-minus-2t",
                tolerance,
                trace.checkpoints.iter().map(|c| (mean_radius(&c.curve) - (r0 - 2.0 * c.t)).abs()).fold(0.0, f64::max),
            ),
            CliffordCheck::TaubNut { mass, tolerance } => {
                let q = |r: f64| mass * r * r + r;
                (
                    "m-r2-plus-r-slope-minus-2",
                    tolerance,
                    trace.checkpoints.iter().map(|c| (q(mean_radius(&c.curve)) - (q(r0) - 2.0 * c.t)).abs()).fold(0.0, f64::max),
                )
            }
        };
        out.checks.push(Check::within(name, value, tol));
    }
    let label = outcome_label(trace.outcome);
    if let Some(allowed) = expect {
        out.checks.push(Check::holds("expected-outcome", allowed.contains(&label)));
    }

    let last = trace.checkpoints.last().expect("flow records its initial state");
    let frame = *curve.frame();
    let mut all: Vec<Point2> = trace.checkpoints.iter().flat_map(|c| c.curve.nodes().to_vec()).collect();
    all.extend(curve.nodes());
    let mut canvas = Canvas::covering(all.iter());
    canvas.polyline(curve.nodes(), curve.is_closed(), "#999", 1.0, Some("4 3"));
    let n = trace.checkpoints.len();
    for k in 1..=5usize {
        let c = &trace.checkpoints[(k * (n - 1)) / 5];
        canvas.polyline(c.curve.nodes(), c.curve.is_closed(), "#1f5fa8", 1.0 + 0.3 * k as f64, None);
    }
    center_marks(&mut canvas, config, &frame);

    out.add("checkpoints.csv", csv.into_bytes());
    out.add(
        "flow.json",
        to_json(
            &json!({
                "outcome": trace.outcome,
                "outcome_label": label,
                "final_t": last.t,
                "steps": last.steps,
                "checkpoints": n,
                "final_diagnostics": last.diagnostics,
            }),
            ctx.precision,
        ),
    );
    out.add("final_curve.json", to_json(&last.curve, ctx.precision));
    out.add("flow.svg", canvas.finish("curve flow"));
    Ok(out)
}

fn stability(
    config: &MonopoleConfig,
    source: &CurveSource,
    delta: f64,
    expect: Option<StabilityLabels>,
    ctx: &Context,
) -> Result<TaskOutput, RunError> {
    let mut out = TaskOutput::default();
    let curve = resolve_curve(source, ctx.base)?;
    let thomas = thomas_stable(config, &curve, ctx.seed)?;
    let flow = flow_stable(config, &curve);
    let flow_label = match &flow {
        Ok(v) if v.stable => FlowVerdictLabel::Stable,
        Ok(_) => FlowVerdictLabel::Unstable,
        Err(Error::NotAlmostCalibrated { .. }) => FlowVerdictLabel::NotAlmostCalibrated,
        Err(e) => return Err(e.clone().into()),
    };
    let g = grading(&curve);
    if let Some(labels) = expect {
        out.checks.push(Check::holds("thomas-verdict", thomas.stable == labels.thomas));
        out.checks.push(Check::holds("flow-verdict", flow_label == labels.flow));
    }
    let report = json!({
        "seed": ctx.seed,
        "thomas": thomas,
        "flow_label": flow_label,
        "flow": flow.as_ref().ok(),
        "almost_calibrated": almost_calibrated(&curve, delta)?,
        "delta": delta,
        "grading": { "inf": g.inf, "sup": g.sup, "variation": g.variation },
        "maslov": maslov_number(&curve),
        "phase": cohomological_phase(&curve)?,
        "length": curve.length(),
    });

    let frame = *curve.frame();
    let mut canvas = Canvas::covering(curve.nodes());
    if let Some((a, b)) = curve.chord() {
        canvas.polyline(&[a, b], false, "#999", 1.5, Some("6 4"));
    }
    canvas.polyline(curve.nodes(), curve.is_closed(), "#1f5fa8", 2.0, None);
    center_marks(&mut canvas, config, &frame);
    if let Some(w) = thomas.witness.or(flow.as_ref().ok().and_then(|v| v.witness)) {
        canvas.mark(&frame.project(&config.centers()[w].position), Mark::Other, "#c0392b");
    }
    out.add("stability.json", to_json(&report, ctx.precision));
    out.add("stability.svg", canvas.finish("stability"));
    Ok(out)
}

fn jordan_holder_task(
    config: &MonopoleConfig,
    source: &CurveSource,
    expect_tau: Option<&[f64]>,
    ctx: &Context,
) -> Result<TaskOutput, RunError> {
    let mut out = TaskOutput::default();
    let curve = resolve_curve(source, ctx.base)?;
    let jh = jordan_holder(config, &curve)?;
    out.checks.push(Check::holds("monotone-phases", jh.monotone));
    if let Some(tau) = expect_tau {
        let err = if tau.len() == jh.facets.len() {
            tau.iter().zip(&jh.facets).map(|(t, f)| (t - f.tau).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        out.checks.push(Check::within("facet-phases", err, 1e-12));
    }
    let frame = *curve.frame();
    let mut canvas = Canvas::covering(curve.nodes());
    if let Some((a, b)) = curve.chord() {
        canvas.polyline(&[a, b], false, "#999", 1.5, Some("6 4"));
    }
    canvas.polyline(curve.nodes(), false, "#1f5fa8", 2.0, None);
    let facets: Vec<(Point2, Point2)> = jh.facets.iter().map(|f| (f.from, f.to)).collect();
    canvas.segments(&facets, "#c0392b", 2.0);
    center_marks(&mut canvas, config, &frame);
    out.add("jordan_holder.json", to_json(&jh, ctx.precision));
    out.add("jordan_holder.svg", canvas.finish("convex hull chain"));
    Ok(out)
}

fn curvature(config: &MonopoleConfig, i: usize, j: usize, samples: usize, ctx: &Context) -> Result<TaskOutput, RunError> {
    let mut out = TaskOutput::default();
    let prof = gauss_curvature(config, i, j, samples)?;
    let cert = positivity_certificate(config, i, j)?;
    let mut csv = Csv::new(&["mu[L]", "K[1/L^2]", "M[1/L^2]", "N[1/L^2]"], ctx.precision);
    for s in &prof.samples {
        csv.nums(&[s.mu, s.k, s.m.unwrap_or(f64::NAN), s.n.unwrap_or(f64::NAN)]);
    }
    let c = config.centers();
    let expected = 2.0 * PI * (1.0 / f64::from(c[i].charge) + 1.0 / f64::from(c[j].charge));
    out.checks.push(Check::within("gauss-bonnet", prof.gauss_bonnet_integral - expected, 1e-3));
    if cert.hypothesis_met {
        out.checks.push(Check::holds("certified-positive", prof.min_k > 0.0));
    }
    out.add("curvature.csv", csv.into_bytes());
    out.add(
        "curvature.json",
        to_json(
            &json!({
                "chord": [i, j],
                "half_length": prof.half_length,
                "samples": prof.samples.len(),
                "min_K": prof.min_k,
                "gauss_bonnet_integral": prof.gauss_bonnet_integral,
                "certificate": cert,
            }),
            ctx.precision,
        ),
    );
    Ok(out)
}

fn test_gradient(f: TestFunction, c: &Vec3, x: &Vec3) -> Vec3 {
    let d = x - c;
    match f {
        TestFunction::RadialSquare => 2.0 * d,
        TestFunction::Mixed => Vec3::new(
            2.0 * d.x + d.y.cos() * d.z,
            -d.y.sin() * d.x * d.z + 3.0 * d.y * d.y,
            d.y.cos() * d.x + 2.0 * d.z,
        ),
    }
}

fn test_hessian(f: TestFunction, c: &Vec3, x: &Vec3) -> Matrix3<f64> {
    let d = x - c;
    match f {
        TestFunction::RadialSquare => 2.0 * Matrix3::identity(),
        TestFunction::Mixed => {
            let (s, co) = (d.y.sin(), d.y.cos());
            Matrix3::new(2.0, -s * d.z, co, -s * d.z, -co * d.x * d.z + 6.0 * d.y, -s * d.x, co, -s * d.x, 2.0)
        }
    }
}

/// `Hess f(e_a, e_b) = e_a(e_b f) - sum_c Gamma[a][b][c] e_c f` with the outer
/// derivative by central differences and `e_0` acting trivially.
fn frame_hessian_by_differences(
    config: &MonopoleConfig,
    f: TestFunction,
    c: &Vec3,
    x: &Vec3,
    h: f64,
) -> Result<Matrix4<f64>, Error> {
    let e = |y: &Vec3| -> Result<[f64; 4], Error> {
        let s = config.phi(y)?.powf(-0.5);
        let g = test_gradient(f, c, y);
        Ok([0.0, s * g.x, s * g.y, s * g.z])
    };
    let gamma = config.connection_coefficients(x)?;
    let ef = e(x)?;
    let s = config.phi(x)?.powf(-0.5);
    let mut out = Matrix4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let mut v = 0.0;
            if a > 0 {
                let mut dx = Vec3::zeros();
                dx[a - 1] = h;
                v += s * (e(&(x + dx))?[b] - e(&(x - dx))?[b]) / (2.0 * h);
            }
            for k in 0..4 {
                v -= gamma[a][b][k] * ef[k];
            }
            out[(a, b)] = v;
        }
    }
    Ok(out)
}

fn hessian_check(
    config: &MonopoleConfig,
    points: usize,
    f: TestFunction,
    about: Vec3,
    half_width: f64,
    expect_positive: bool,
    ctx: &Context,
) -> Result<TaskOutput, RunError> {
    let mut out = TaskOutput::default();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let keep_away = 0.05 * half_width;
    let mut csv = Csv::new(&["x[L]", "y[L]", "z[L]", "relative_error[1]", "min_eigenvalue"], ctx.precision);
    let (mut worst, mut all_positive) = (0.0f64, true);
    let mut done = 0;
    let mut attempts = 0;
    while done < points {
        attempts += 1;
        if attempts > 1000 * points.max(1) {
            return Err(RunError::Invalid("cannot place test points away from the centers".into()));
        }
        let x = about + Vec3::from_fn(|_, _| rng.gen_range(-half_width..half_width));
        if config.centers().iter().any(|c| (c.position - x).norm() < keep_away) {
            continue;
        }
        let closed = match config.invariant_hessian(&x, &test_gradient(f, &about, &x), &test_hessian(f, &about, &x)) {
            Ok(h) => h,
            Err(Error::NonpositivePhi { .. } | Error::EvaluationAtCenter { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        let oracle = frame_hessian_by_differences(config, f, &about, &x, 1e-5)?;
        let rel = (closed - oracle).abs().max() / oracle.abs().max().max(f64::MIN_POSITIVE);
        let min_eig = closed.symmetric_eigen().eigenvalues.min();
        worst = worst.max(rel);
        all_positive &= min_eig > 0.0;
        csv.nums(&[x.x, x.y, x.z, rel, min_eig]);
        done += 1;
    }
    out.checks.push(Check::within("frame-oracle-agreement", worst, 1e-5));
    if expect_positive {
        out.checks.push(Check::holds("positive-definite", all_positive));
    }
    out.add("hessian_check.csv", csv.into_bytes());
    out.add(
        "hessian_check.json",
        to_json(&json!({ "seed": ctx.seed, "points": points, "max_relative_error": worst, "positive_definite": all_positive }), ctx.precision),
    );
    Ok(out)
}
