use ghlab::error::Error;
use ghlab::flow::{curve_flow, CurveFlowControls, FlowOutcome};
use ghlab::gallery::{self, CurveScenario};
use ghlab::lagrangian::{flow_stable, homotopy_word, seidel_invariant, thomas_stable};
use ghlab::plane::Point2;

fn verdicts(s: &CurveScenario) -> (bool, Result<bool, Error>) {
    let thomas = thomas_stable(&s.config, &s.curve, 7).unwrap().stable;
    let flow = flow_stable(&s.config, &s.curve).map(|v| v.stable);
    (thomas, flow)
}

#[test]
fn enclosing_arc_is_unstable_at_the_enclosed_center() {
    let s = gallery::enclosing_arc().unwrap();
    let t = thomas_stable(&s.config, &s.curve, 7).unwrap();
    assert!(!t.stable);
    assert_eq!(t.witness, Some(2));
    let f = flow_stable(&s.config, &s.curve).unwrap();
    assert!(!f.stable);
    assert_eq!(f.witness, Some(2));
    let c = f.checks[0];
    assert!(!c.angle_condition && !c.length_condition);
}

#[test]
fn curated_labels() {
    let expected: [(&str, bool, Result<bool, Error>); 6] = [
        ("enclosing-arc", false, Ok(false)),
        ("passing-arc", true, Ok(true)),
        ("double-enclosing-arc", false, Ok(false)),
        ("commutator-arc", false, Err(Error::NotAlmostCalibrated { variation: 0.0 })),
        ("straight-chord", true, Ok(true)),
        ("seidel-spiral", false, Err(Error::NotAlmostCalibrated { variation: 0.0 })),
    ];
    for (s, (name, thomas, flow)) in gallery::curated().unwrap().iter().zip(expected) {
        assert_eq!(s.name, name);
        let (t, f) = verdicts(s);
        assert_eq!(t, thomas, "{name}");
        match (f, flow) {
            (Err(Error::NotAlmostCalibrated { .. }), Err(Error::NotAlmostCalibrated { .. })) => {}
            (got, want) => assert_eq!(got, want, "{name}"),
        }
    }
}

#[test]
fn commutator_word_has_zero_exponent_sums() {
    let s = gallery::commutator_arc().unwrap();
    for seed in 0..20 {
        let w = homotopy_word(&s.config, &s.curve, seed).unwrap();
        assert!(!w.is_trivial());
        assert_eq!(w.exponent_sum(2), 0);
        assert_eq!(w.exponent_sum(3), 0);
        assert_eq!(w.letters.len(), 4, "{:?}", w.letters);
    }
}

#[test]
fn words_are_deterministic_per_seed() {
    let s = gallery::commutator_arc().unwrap();
    assert_eq!(homotopy_word(&s.config, &s.curve, 11).unwrap(), homotopy_word(&s.config, &s.curve, 11).unwrap());
}

#[test]
fn unstable_arcs_do_not_converge() {
    for s in [gallery::enclosing_arc().unwrap(), gallery::double_enclosing_arc().unwrap()] {
        let controls = CurveFlowControls { n_nodes: 128, checkpoint_dt: 0.02, t_max: 50.0, ..Default::default() };
        let trace = curve_flow(&s.config, &s.curve, &controls).unwrap();
        assert!(
            matches!(trace.outcome, FlowOutcome::CenterCollision { .. } | FlowOutcome::SingularityDetected),
            "{}: {:?}",
            s.name,
            trace.outcome
        );
    }
}

#[test]
fn passing_arc_converges() {
    let s = gallery::passing_arc().unwrap();
    let controls = CurveFlowControls { n_nodes: 128, checkpoint_dt: 0.05, t_max: 100.0, ..Default::default() };
    let trace = curve_flow(&s.config, &s.curve, &controls).unwrap();
    assert_eq!(trace.outcome, FlowOutcome::ConvergedToSegment);
}

#[test]
fn seidel_winding_is_the_turn_difference() {
    let spirals: Vec<_> = (1..=3).map(|r| gallery::seidel_spiral(r).unwrap().curve).collect();
    for r in 1..=3i64 {
        for s in 1..=3i64 {
            let w = seidel_invariant(&spirals[r as usize - 1], &spirals[s as usize - 1], &Point2::zeros()).unwrap();
            assert_eq!(w, r - s);
        }
    }
}
