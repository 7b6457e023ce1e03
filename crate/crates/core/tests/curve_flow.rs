use std::f64::consts::PI;

use ghlab::curve::PolyCurve;
use ghlab::flow::{clifford_radius, curve_flow, CliffordModel, CurveFlowControls, FlowOutcome};
use ghlab::lagrangian::grading;
use ghlab::plane::{PlaneFrame, Point2};
use ghlab::{MonopoleConfig, Vec3};

fn single_center(mass: f64) -> MonopoleConfig {
    MonopoleConfig::unit_charges(mass, &[Vec3::zeros()]).unwrap()
}

fn clifford_errors(mass: f64, n: usize, t_max: f64) -> f64 {
    let cfg = single_center(mass);
    let circle = PolyCurve::circle(PlaneFrame::horizontal(), Point2::zeros(), 1.0, n).unwrap();
    let controls = CurveFlowControls { n_nodes: n, checkpoint_dt: 0.05, t_max, ..Default::default() };
    let trace = curve_flow(&cfg, &circle, &controls).unwrap();
    assert_eq!(trace.outcome, FlowOutcome::MaxTime);
    let model = if mass == 0.0 { CliffordModel::Flat } else { CliffordModel::TaubNut { mass } };
    trace
        .checkpoints
        .iter()
        .map(|c| {
            let r = c.curve.nodes().iter().map(|p| p.norm()).sum::<f64>() / c.curve.nodes().len() as f64;
            (r - clifford_radius(model, 1.0, c.t).unwrap()).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn clifford_circle_in_flat_space() {
    assert!(clifford_errors(0.0, 256, 0.4) < 1e-4);
}

#[test]
fn clifford_circle_in_taub_nut() {
    assert!(clifford_errors(1.0, 256, 0.6) < 1e-4);
}

#[test]
fn closed_curve_away_from_centers_shrinks() {
    let cfg = MonopoleConfig::unit_charges(
        0.0,
        &[Vec3::new(1.0, 0.0, 0.0), Vec3::new(-0.5, 0.8, 0.0), Vec3::new(-0.5, -0.8, 0.0)],
    )
    .unwrap();
    let frame = PlaneFrame::horizontal_at(Vec3::new(0.0, 0.0, 1.0));
    let nodes: Vec<Point2> = (0..200)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / 200.0;
            Point2::new(1.5 * t.cos(), 0.8 * t.sin() + 0.2 * (2.0 * t).sin())
        })
        .collect();
    let curve = PolyCurve::new(frame, nodes, ghlab::curve::CurveKind::Closed).unwrap();
    let controls = CurveFlowControls { n_nodes: 128, checkpoint_dt: 0.01, t_max: 20.0, ..Default::default() };
    let trace = curve_flow(&cfg, &curve, &controls).unwrap();
    assert_eq!(trace.outcome, FlowOutcome::ShrunkToPoint);
    for w in trace.checkpoints.windows(2) {
        assert!(w[1].diagnostics.length < w[0].diagnostics.length);
        assert!(w[1].curve.is_embedded());
    }
}

#[test]
fn almost_calibrated_arc_converges_to_its_chord() {
    let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::new(-1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)]).unwrap();
    let sweep = 0.9 * PI * (1.0 - 0.1);
    let arc = PolyCurve::circular_arc(PlaneFrame::horizontal(), Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), sweep, 129, 0, 1).unwrap();
    assert!((grading(&arc).variation - sweep).abs() < 1e-9);
    let controls = CurveFlowControls { n_nodes: 128, checkpoint_dt: 0.05, t_max: 50.0, ..Default::default() };
    let trace = curve_flow(&cfg, &arc, &controls).unwrap();
    let last = trace.checkpoints.last().unwrap();
    println!("{:?} t={} steps={}", trace.outcome, last.t, last.steps);
    assert_eq!(trace.outcome, FlowOutcome::ConvergedToSegment);
    assert!(last.diagnostics.hausdorff_to_chord.unwrap() < 1e-3);
    for w in trace.checkpoints.windows(2) {
        assert!(w[1].diagnostics.beta_variation <= w[0].diagnostics.beta_variation + 1e-6, "{} {}", w[0].diagnostics.beta_variation, w[1].diagnostics.beta_variation);
    }
}
