//! Ready-made planar configurations and curves used by the stability scenarios.
//! All curves lie in the horizontal plane and join center 0 to center 1.

use std::f64::consts::PI;

use crate::curve::{CurveKind, PolyCurve};
use crate::error::{Error, Result};
use crate::lagrangian::spiral_arc;
use crate::monopole::{MonopoleConfig, Vec3};
use crate::plane::{PlaneFrame, Point2};

/// A configuration together with a curve between two of its centers.
#[derive(Debug, Clone)]
pub struct CurveScenario {
    pub name: &'static str,
    pub config: MonopoleConfig,
    pub curve: PolyCurve,
}

fn planar(points: &[(f64, f64)]) -> Result<MonopoleConfig> {
    let pos: Vec<Vec3> = points.iter().map(|&(x, y)| Vec3::new(x, y, 0.0)).collect();
    MonopoleConfig::unit_charges(0.0, &pos)
}

fn arc(p: (f64, f64), q: (f64, f64), sweep: f64) -> Result<PolyCurve> {
    PolyCurve::circular_arc(PlaneFrame::horizontal(), Point2::new(p.0, p.1), Point2::new(q.0, q.1), sweep, 201, 0, 1)
}

/// Circular arc from `(0,0)` to `(4,0)` bulging over a third center `(2, 0.5)`.
pub fn enclosing_arc() -> Result<CurveScenario> {
    Ok(CurveScenario {
        name: "enclosing-arc",
        config: planar(&[(0.0, 0.0), (4.0, 0.0), (2.0, 0.5)])?,
        curve: arc((0.0, 0.0), (4.0, 0.0), 1.2)?,
    })
}

/// The same arc with the third center moved outside it, to `(2, 1)`.
pub fn passing_arc() -> Result<CurveScenario> {
    Ok(CurveScenario {
        name: "passing-arc",
        config: planar(&[(0.0, 0.0), (4.0, 0.0), (2.0, 1.0)])?,
        curve: arc((0.0, 0.0), (4.0, 0.0), 1.2)?,
    })
}

/// A taller arc enclosing two extra centers.
pub fn double_enclosing_arc() -> Result<CurveScenario> {
    Ok(CurveScenario {
        name: "double-enclosing-arc",
        config: planar(&[(0.0, 0.0), (4.0, 0.0), (1.0, 1.0), (3.0, 1.0)])?,
        curve: arc((0.0, 0.0), (4.0, 0.0), 2.4)?,
    })
}

/// Straight segment between the first two centers, a third center off the line.
pub fn straight_chord() -> Result<CurveScenario> {
    Ok(CurveScenario {
        name: "straight-chord",
        config: planar(&[(0.0, 0.0), (4.0, 0.0), (2.0, 1.0)])?,
        curve: arc((0.0, 0.0), (4.0, 0.0), 0.0)?,
    })
}

/// Arc from `(0,0)` to `(1,0)` made of half circles through the axis points
/// `0, -2, 0.5, 1.5, 3, 0.25, -1.5, -0.5, 0.125, 4, 1`, alternately below and
/// above the axis. Centers sit at `(-1,0)` and `(2,0)`; the curve winds zero
/// times around each, but is not isotopic to the chord: cutting along rays to
/// the left of `(-1,0)` and to the right of `(2,0)` reads the commutator word.
pub fn commutator_arc() -> Result<CurveScenario> {
    let stops = [0.0, -2.0, 0.5, 1.5, 3.0, 0.25, -1.5, -0.5, 0.125, 4.0, 1.0];
    let per_half = 48;
    let mut nodes = vec![Point2::new(stops[0], 0.0)];
    for (k, w) in stops.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let side = if k % 2 == 0 { -1.0 } else { 1.0 };
        for j in 1..=per_half {
            let s = PI * j as f64 / per_half as f64;
            let x = a + (b - a) * 0.5 * (1.0 - s.cos());
            let y = side * 0.5 * (b - a).abs() * s.sin();
            nodes.push(Point2::new(x, if j == per_half { 0.0 } else { y }));
        }
    }
    Ok(CurveScenario {
        name: "commutator-arc",
        config: planar(&[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (2.0, 0.0)])?,
        curve: PolyCurve::new(PlaneFrame::horizontal(), nodes, CurveKind::Open { start: 0, end: 1 })?,
    })
}

/// Centers `p1 = (1,0)`, `p2 = (0,-5)` and `p0 = (0,0)` (indices 0, 1, 2), and
/// the arc from `p1` to `p2` spiralling `turns` extra times around `p0`.
pub fn seidel_spiral(turns: u32) -> Result<CurveScenario> {
    let config = planar(&[(1.0, 0.0), (0.0, -5.0), (0.0, 0.0)])?;
    let curve = spiral_arc(
        PlaneFrame::horizontal(),
        Point2::zeros(),
        Point2::new(1.0, 0.0),
        Point2::new(0.0, -5.0),
        turns,
        96,
        0,
        1,
    )?;
    Ok(CurveScenario { name: "seidel-spiral", config, curve })
}

/// The curated set: enclosing and passing arcs, an arc around two centers,
/// the commutator arc, the straight chord and the one-turn spiral.
pub fn curated() -> Result<Vec<CurveScenario>> {
    Ok(vec![
        enclosing_arc()?,
        passing_arc()?,
        double_enclosing_arc()?,
        commutator_arc()?,
        straight_chord()?,
        seidel_spiral(1)?,
    ])
}

/// Names accepted by [`by_name`]; spirals take their number of extra turns as
/// a suffix, as in `seidel-spiral-2`.
pub const NAMES: [&str; 6] =
    ["enclosing-arc", "passing-arc", "double-enclosing-arc", "commutator-arc", "straight-chord", "seidel-spiral-N"];

pub fn by_name(name: &str) -> Result<CurveScenario> {
    match name {
        "enclosing-arc" => enclosing_arc(),
        "passing-arc" => passing_arc(),
        "double-enclosing-arc" => double_enclosing_arc(),
        "commutator-arc" => commutator_arc(),
        "straight-chord" => straight_chord(),
        _ => match name.strip_prefix("seidel-spiral-").map(str::parse::<u32>) {
            Some(Ok(turns)) => seidel_spiral(turns),
            _ => Err(Error::InvalidConfig(format!("unknown gallery entry {name:?}"))),
        },
    }
}
