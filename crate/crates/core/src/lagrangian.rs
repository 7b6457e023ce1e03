//! Invariant Lagrangians through their projection curves. A plane curve gives a
//! circle-invariant surface that is Lagrangian for the symplectic form `omega_v`
//! whose normal is `v`. Its grading is the tangent angle of the curve and its
//! cohomological phase the angle of the chord. The stability tests compare the
//! curve with the chord joining its endpoints.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::{direction_angle, orient, point_segment_distance, wrap_angle, winding_number, CurveKind, PolyCurve};
use crate::error::{Error, Result};
use crate::monopole::{MonopoleConfig, Vec3};
use crate::plane::{PlaneFrame, Point2};

/// Largest `|<t, v>|` over the segments of a space curve, `t` the unit tangent.
/// Zero exactly when the curve lies in a plane orthogonal to `v`.
pub fn lagrangian_defect(curve: &[Vec3], v: &Vec3) -> f64 {
    let v = v.normalize();
    curve
        .windows(2)
        .filter_map(|w| {
            let t = w[1] - w[0];
            let n = t.norm();
            (n > 0.0).then(|| (t.dot(&v) / n).abs())
        })
        .fold(0.0, f64::max)
}

/// Directions `v` for which the sphere over the chord from `p_i` to `p_j` is
/// Lagrangian for some invariant form `omega_v`: the great circle orthogonal to
/// `p_j - p_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagrangianDirections {
    pub chord: Vec3,
    pub normal: Vec3,
}

impl LagrangianDirections {
    /// Pairing `2 pi <p_j - p_i, v>` of `[omega_v]` with the sphere class.
    pub fn class_pairing(&self, v: &Vec3) -> f64 {
        2.0 * PI * self.chord.dot(v)
    }

    pub fn accepts(&self, v: &Vec3, tol: f64) -> bool {
        self.normal.dot(&v.normalize()).abs() <= tol
    }

    /// `n` unit directions evenly spaced on the great circle.
    pub fn sample(&self, n: usize) -> Vec<Vec3> {
        let seed = if self.normal.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        let a = (seed - self.normal * seed.dot(&self.normal)).normalize();
        let b = self.normal.cross(&a);
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                a * t.cos() + b * t.sin()
            })
            .collect()
    }
}

pub fn lagrangian_directions(config: &MonopoleConfig, i: usize, j: usize) -> Result<LagrangianDirections> {
    let c = config.centers();
    let (pi, pj) = match (c.get(i), c.get(j)) {
        (Some(a), Some(b)) if i != j => (a.position, b.position),
        _ => return Err(Error::InvalidConfig(format!("no chord between centers {i} and {j}"))),
    };
    let chord = pj - pi;
    Ok(LagrangianDirections { chord, normal: chord.normalize() })
}

/// Continuous lift `beta` of the tangent angle at the nodes, with `cos beta`,
/// `sin beta` the components of the unit tangent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradingProfile {
    pub beta: Vec<f64>,
    pub inf: f64,
    pub sup: f64,
    pub variation: f64,
    /// Change of the lift over the whole curve (once around for closed curves).
    pub total_change: f64,
}

pub fn grading(curve: &PolyCurve) -> GradingProfile {
    let angles = curve.tangent_angles();
    let mut beta = Vec::with_capacity(angles.len());
    let mut current = angles[0];
    beta.push(current);
    for w in angles.windows(2) {
        current += wrap_angle(w[1] - w[0]);
        beta.push(current);
    }
    let total_change = if curve.is_closed() {
        current + wrap_angle(angles[0] - angles[angles.len() - 1]) - beta[0]
    } else {
        current - beta[0]
    };
    let inf = beta.iter().copied().fold(f64::INFINITY, f64::min);
    let sup = beta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    GradingProfile { beta, inf, sup, variation: sup - inf, total_change }
}

/// Rotation number of the grading: zero for arcs, the turning number for loops.
pub fn maslov_number(curve: &PolyCurve) -> i64 {
    if curve.is_closed() {
        (grading(curve).total_change / (2.0 * PI)).round() as i64
    } else {
        0
    }
}

/// Angle in `(-pi, pi]` of the chord from the first to the last node.
pub fn cohomological_phase(curve: &PolyCurve) -> Result<f64> {
    let (p, q) = curve
        .chord()
        .ok_or_else(|| Error::InvalidCurve("the phase is defined for open curves".into()))?;
    Ok(direction_angle(&(q - p)))
}

/// Whether the grading varies by less than `pi - delta`.
pub fn almost_calibrated(curve: &PolyCurve, delta: f64) -> Result<bool> {
    if curve.is_closed() {
        return Err(Error::InvalidCurve("almost calibration is tested on open curves".into()));
    }
    Ok(grading(curve).variation < PI - delta)
}

/// Reduced word in the free group on the centers of the punctured plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyWord {
    /// `(center, +1 | -1)`; `+1` crosses a cut ray counterclockwise.
    pub letters: Vec<(usize, i32)>,
    pub seed: u64,
    /// Number of ray directions tried before a non-degenerate one was found.
    pub attempts: usize,
}

impl HomotopyWord {
    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    /// Exponent sum of `center`, equal to the winding number around it.
    pub fn exponent_sum(&self, center: usize) -> i64 {
        self.letters.iter().filter(|(c, _)| *c == center).map(|(_, s)| i64::from(*s)).sum()
    }
}

pub fn free_reduce(letters: &[(usize, i32)]) -> Vec<(usize, i32)> {
    let mut out: Vec<(usize, i32)> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&(c, s)) if c == l.0 && s == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

fn cross2(a: &Point2, b: &Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Non-endpoint centers lying in the plane of the curve.
fn punctures(config: &MonopoleConfig, curve: &PolyCurve) -> Vec<(usize, Point2)> {
    let tol = 1e-9 * config.length_scale();
    let skip = match curve.kind() {
        CurveKind::Open { start, end } => vec![start, end],
        CurveKind::Closed => Vec::new(),
    };
    config
        .centers()
        .iter()
        .enumerate()
        .filter(|(i, c)| !skip.contains(i) && curve.frame().distance(&c.position) < tol)
        .map(|(i, c)| (i, curve.frame().project(&c.position)))
        .collect()
}

fn distance_to_ray(p: &Point2, origin: &Point2, dir: &Point2) -> f64 {
    let t = (p - origin).dot(dir);
    if t <= 0.0 {
        (p - origin).norm()
    } else {
        (p - (origin + dir * t)).norm()
    }
}

const MAX_RAY_ATTEMPTS: usize = 64;

/// Homotopy class, relative to the punctures, of the loop formed by an open
/// curve followed by its chord backwards. Cut rays from every puncture run in
/// one common seeded random direction, so they are pairwise disjoint; the word
/// lists the signed ray crossings in loop order, freely reduced.
pub fn homotopy_word(config: &MonopoleConfig, curve: &PolyCurve, seed: u64) -> Result<HomotopyWord> {
    if curve.is_closed() {
        return Err(Error::InvalidCurve("homotopy words are defined for open curves".into()));
    }
    curve.check_against(config)?;
    let holes = punctures(config, curve);
    let nodes = curve.nodes();
    let n = nodes.len();
    let tol = 1e-9 * config.length_scale().max(curve.diameter());
    for (idx, q) in &holes {
        let d = (0..n)
            .map(|k| point_segment_distance(q, &nodes[k], &nodes[(k + 1) % n]))
            .fold(f64::INFINITY, f64::min);
        if d < tol {
            return Err(Error::InvalidCurve(format!("center {idx} lies on the curve or its chord")));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_RAY_ATTEMPTS {
        let angle: f64 = rng.gen_range(-PI..PI);
        let dir = Point2::new(angle.cos(), angle.sin());
        let degenerate = holes.iter().any(|(_, q)| {
            nodes.iter().any(|p| distance_to_ray(p, q, &dir) < tol)
                || holes.iter().any(|(_, o)| o != q && distance_to_ray(o, q, &dir) < tol)
        });
        if degenerate {
            continue;
        }
        let mut crossings: Vec<(usize, f64, usize, i32)> = Vec::new();
        for k in 0..n {
            let a = nodes[k];
            let b = nodes[(k + 1) % n];
            let e = b - a;
            let denom = cross2(&dir, &e);
            if denom == 0.0 {
                continue;
            }
            for (idx, q) in &holes {
                let t = cross2(&(a - q), &e) / denom;
                let s = cross2(&(q - a), &dir) / cross2(&e, &dir);
                if t > 0.0 && (0.0..1.0).contains(&s) {
                    crossings.push((k, s, *idx, if denom > 0.0 { 1 } else { -1 }));
                }
            }
        }
        crossings.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let letters: Vec<(usize, i32)> = crossings.iter().map(|c| (c.2, c.3)).collect();
        return Ok(HomotopyWord { letters: free_reduce(&letters), seed, attempts: attempt });
    }
    Err(Error::RayDegeneracy { attempts: MAX_RAY_ATTEMPTS })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThomasVerdict {
    /// The curve is isotopic to its chord in the punctured plane.
    pub stable: bool,
    /// A center around which the curve winds nontrivially, if unstable.
    pub witness: Option<usize>,
    pub word: HomotopyWord,
}

pub fn thomas_stable(config: &MonopoleConfig, curve: &PolyCurve, seed: u64) -> Result<ThomasVerdict> {
    let word = homotopy_word(config, curve, seed)?;
    Ok(ThomasVerdict { stable: word.is_trivial(), witness: word.letters.first().map(|l| l.0), word })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnclosedCenterCheck {
    pub center: usize,
    /// Angle of `q - p1` relative to the chord.
    pub beta1: f64,
    /// Angle of `p2 - q` relative to the chord.
    pub beta2: f64,
    /// The closed interval between `beta1` and `beta2` is not inside the open
    /// range of the grading.
    pub angle_condition: bool,
    /// The curve is shorter than the two-leg path through `q`.
    pub length_condition: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowVerdict {
    pub stable: bool,
    pub witness: Option<usize>,
    pub checks: Vec<EnclosedCenterCheck>,
    /// Grading range relative to the chord direction.
    pub grading_range: (f64, f64),
}

/// Centers around which the curve-plus-chord loop winds.
fn enclosed(config: &MonopoleConfig, curve: &PolyCurve) -> Vec<(usize, Point2)> {
    punctures(config, curve)
        .into_iter()
        .filter(|(_, q)| winding_number(curve.nodes(), q) != 0)
        .collect()
}

/// Stability test for almost calibrated arcs: for every enclosed center `q`,
/// either the chord angles through `q` leave the grading range or the curve is
/// shorter than the path through `q`.
pub fn flow_stable(config: &MonopoleConfig, curve: &PolyCurve) -> Result<FlowVerdict> {
    if curve.is_closed() {
        return Err(Error::InvalidCurve("flow stability is defined for open curves".into()));
    }
    curve.check_against(config)?;
    let g = grading(curve);
    if g.variation >= PI {
        return Err(Error::NotAlmostCalibrated { variation: g.variation });
    }
    let tau = cohomological_phase(curve)?;
    let mid = 0.5 * (g.inf + g.sup) - tau;
    let shift = tau + 2.0 * PI * (mid / (2.0 * PI)).round();
    let (lo, hi) = (g.inf - shift, g.sup - shift);
    let (p1, p2) = curve.chord().unwrap_or_default();
    let length = curve.length();
    let mut checks = Vec::new();
    for (center, q) in enclosed(config, curve) {
        let beta1 = wrap_angle(direction_angle(&(q - p1)) - tau);
        let beta2 = wrap_angle(direction_angle(&(p2 - q)) - tau);
        let inside = lo < beta1.min(beta2) && beta1.max(beta2) < hi;
        checks.push(EnclosedCenterCheck {
            center,
            beta1,
            beta2,
            angle_condition: !inside,
            length_condition: length < (q - p1).norm() + (p2 - q).norm(),
        });
    }
    let witness = checks.iter().find(|c| !(c.angle_condition || c.length_condition)).map(|c| c.center);
    Ok(FlowVerdict { stable: witness.is_none(), witness, checks, grading_range: (lo, hi) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HullFacet {
    pub from: Point2,
    pub to: Point2,
    pub from_center: usize,
    pub to_center: usize,
    /// Phase of the facet relative to the chord.
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanHolder {
    /// Hull facets other than the chord, in order from the first endpoint.
    pub facets: Vec<HullFacet>,
    /// The centers lie to the right of the chord, so the endpoints were swapped
    /// to read the facets with the centers on the left.
    pub reversed: bool,
    /// Facet phases are non-increasing.
    pub monotone: bool,
}

/// Decomposition of a curve bounding a convex region with its chord into the
/// chain of convex-hull facets through the enclosed centers.
pub fn jordan_holder(config: &MonopoleConfig, curve: &PolyCurve) -> Result<JordanHolder> {
    let CurveKind::Open { start, end } = curve.kind() else {
        return Err(Error::InvalidCurve("the decomposition is defined for open curves".into()));
    };
    curve.check_against(config)?;
    let kappa = curve.curvature();
    let positive = kappa.iter().all(|s| s.kappa > 1e-9);
    let negative = kappa.iter().all(|s| s.kappa < -1e-9);
    if !(positive || negative) {
        return Err(Error::NotPerfectMorse);
    }
    let (p1, p2) = curve.chord().unwrap_or_default();
    let inside = enclosed(config, curve);
    let reversed = inside.first().is_some_and(|(_, q)| orient(&p1, &p2, q) < 0.0);
    let (a, b, ca, cb) = if reversed { (p2, p1, end, start) } else { (p1, p2, start, end) };

    let mut pts: Vec<(Point2, usize)> = vec![(a, ca), (b, cb)];
    pts.extend(inside.iter().map(|(i, q)| (*q, *i)));
    pts.sort_by(|x, y| x.0.x.total_cmp(&y.0.x).then(x.0.y.total_cmp(&y.0.y)));
    // Andrew's monotone chain, counterclockwise, collinear points dropped.
    let mut hull: Vec<(Point2, usize)> = Vec::new();
    for pass in 0..2 {
        let base = hull.len();
        let iter: Box<dyn Iterator<Item = &(Point2, usize)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= base + 2 && orient(&hull[hull.len() - 2].0, &hull[hull.len() - 1].0, &p.0) <= 0.0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    let ia = hull.iter().position(|p| p.1 == ca).ok_or(Error::NotPerfectMorse)?;
    let ib = hull.iter().position(|p| p.1 == cb).ok_or(Error::NotPerfectMorse)?;
    // Counterclockwise from b back to a, then reversed to run from a to b.
    let m = hull.len();
    let mut chain = vec![hull[ib]];
    let mut k = ib;
    while k != ia {
        k = (k + 1) % m;
        chain.push(hull[k]);
    }
    chain.reverse();
    let base = direction_angle(&(b - a));
    let facets: Vec<HullFacet> = chain
        .windows(2)
        .map(|w| HullFacet {
            from: w[0].0,
            to: w[1].0,
            from_center: w[0].1,
            to_center: w[1].1,
            tau: wrap_angle(direction_angle(&(w[1].0 - w[0].0)) - base),
        })
        .collect();
    let monotone = facets.windows(2).all(|w| w[1].tau <= w[0].tau + 1e-12);
    Ok(JordanHolder { facets, reversed, monotone })
}

/// Winding number around `p0` of `curve_r` followed by `curve_s` backwards; both
/// must join the same two points.
pub fn seidel_invariant(curve_r: &PolyCurve, curve_s: &PolyCurve, p0: &Point2) -> Result<i64> {
    let (Some((a1, b1)), Some((a2, b2))) = (curve_r.chord(), curve_s.chord()) else {
        return Err(Error::InvalidCurve("the invariant compares two open curves".into()));
    };
    let tol = 1e-9 * curve_r.diameter().max(curve_s.diameter());
    if (a1 - a2).norm() > tol || (b1 - b2).norm() > tol || curve_r.frame() != curve_s.frame() {
        return Err(Error::InvalidCurve("curves must share their plane and endpoints".into()));
    }
    let mut poly: Vec<Point2> = curve_r.nodes().to_vec();
    let s = curve_s.nodes();
    poly.extend(s[1..s.len() - 1].iter().rev());
    let on_loop = (0..poly.len()).any(|k| point_segment_distance(p0, &poly[k], &poly[(k + 1) % poly.len()]) < tol);
    if on_loop {
        return Err(Error::InvalidCurve("base point lies on the loop".into()));
    }
    Ok(winding_number(&poly, p0))
}

/// Arc from `p1` to `p2` spiralling counterclockwise around `p0`: the angle seen
/// from `p0` grows monotonically through `turns` extra full turns while the
/// radius interpolates linearly. Simple whenever `|p2 - p0| > |p1 - p0|`.
#[allow(clippy::too_many_arguments)]
pub fn spiral_arc(
    frame: PlaneFrame,
    p0: Point2,
    p1: Point2,
    p2: Point2,
    turns: u32,
    nodes_per_turn: usize,
    start: usize,
    end: usize,
) -> Result<PolyCurve> {
    let (r1, r2) = ((p1 - p0).norm(), (p2 - p0).norm());
    let t1 = direction_angle(&(p1 - p0));
    let mut span = (direction_angle(&(p2 - p0)) - t1).rem_euclid(2.0 * PI);
    if span == 0.0 {
        span = 2.0 * PI;
    }
    let total = span + 2.0 * PI * f64::from(turns);
    let n = ((nodes_per_turn as f64 * total / (2.0 * PI)).ceil() as usize).max(3) + 1;
    let mut nodes: Vec<Point2> = (0..n)
        .map(|k| {
            let s = k as f64 / (n - 1) as f64;
            let (a, r) = (t1 + total * s, r1 + (r2 - r1) * s);
            p0 + Point2::new(a.cos(), a.sin()) * r
        })
        .collect();
    nodes[0] = p1;
    nodes[n - 1] = p2;
    PolyCurve::new(frame, nodes, CurveKind::Open { start, end })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn horizontal(points: &[(f64, f64)]) -> MonopoleConfig {
        let pos: Vec<Vec3> = points.iter().map(|&(x, y)| Vec3::new(x, y, 0.0)).collect();
        MonopoleConfig::unit_charges(0.0, &pos).unwrap()
    }

    #[test]
    fn free_reduction_cancels_adjacent_inverses() {
        assert_eq!(free_reduce(&[(1, 1), (2, 1), (2, -1), (1, -1), (3, 1)]), vec![(3, 1)]);
        assert_eq!(free_reduce(&[(1, 1), (1, 1)]), vec![(1, 1), (1, 1)]);
    }

    #[test]
    fn half_circle_is_borderline() {
        let arc = PolyCurve::circular_arc(PlaneFrame::horizontal(), Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), PI, 65, 0, 1).unwrap();
        let g = grading(&arc);
        assert_relative_eq!(g.variation, PI, epsilon = 1e-12);
        assert!(!almost_calibrated(&arc, 1e-9).unwrap());
        assert_eq!(cohomological_phase(&arc).unwrap(), 0.0);
    }

    #[test]
    fn closed_circle_has_maslov_one() {
        let c = PolyCurve::circle(PlaneFrame::horizontal(), Point2::zeros(), 1.0, 40).unwrap();
        assert_eq!(maslov_number(&c), 1);
    }

    #[test]
    fn phase_uses_the_upper_branch() {
        let arc = PolyCurve::circular_arc(PlaneFrame::horizontal(), Point2::new(1.0, 0.0), Point2::new(-1.0, 0.0), 0.5, 9, 0, 1).unwrap();
        assert_eq!(cohomological_phase(&arc).unwrap(), PI);
    }

    #[test]
    fn directions_are_orthogonal_to_the_chord() {
        let cfg = MonopoleConfig::unit_charges(0.0, &[Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, 1.0)]).unwrap();
        let dirs = lagrangian_directions(&cfg, 0, 1).unwrap();
        for v in dirs.sample(12) {
            assert!(dirs.accepts(&v, 1e-12));
            assert!(dirs.class_pairing(&v).abs() < 1e-12);
        }
        assert_relative_eq!(dirs.class_pairing(&Vec3::z()), 4.0 * PI);
    }

    #[test]
    fn convex_chain_example() {
        let cfg = horizontal(&[(0.0, 0.0), (4.0, 0.0), (1.0, 1.0), (3.0, 1.0)]);
        let arc = PolyCurve::circular_arc(PlaneFrame::horizontal(), Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), 2.4, 200, 0, 1).unwrap();
        let jh = jordan_holder(&cfg, &arc).unwrap();
        let taus: Vec<f64> = jh.facets.iter().map(|f| f.tau).collect();
        assert_eq!(taus.len(), 3);
        assert_relative_eq!(taus[0], PI / 4.0, epsilon = 1e-12);
        assert_relative_eq!(taus[1], 0.0, epsilon = 1e-12);
        assert_relative_eq!(taus[2], -PI / 4.0, epsilon = 1e-12);
        assert!(jh.monotone && !jh.reversed);

        let below = PolyCurve::circular_arc(PlaneFrame::horizontal(), Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), -2.4, 200, 0, 1).unwrap();
        let cfg_below = horizontal(&[(0.0, 0.0), (4.0, 0.0), (1.0, -1.0), (3.0, -1.0)]);
        let jh = jordan_holder(&cfg_below, &below).unwrap();
        assert!(jh.reversed && jh.monotone);
        assert_eq!(jh.facets.len(), 3);
    }

    #[test]
    fn wiggly_curve_is_not_perfect_morse() {
        let cfg = horizontal(&[(0.0, 0.0), (4.0, 0.0)]);
        let nodes = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.5), Point2::new(2.0, 0.0), Point2::new(3.0, -0.5), Point2::new(4.0, 0.0)];
        let c = PolyCurve::new(PlaneFrame::horizontal(), nodes, CurveKind::Open { start: 0, end: 1 }).unwrap();
        assert_eq!(jordan_holder(&cfg, &c), Err(Error::NotPerfectMorse));
    }
}
