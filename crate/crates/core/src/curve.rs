//! Polygonal curves in a plane of `R^3`: closed loops, or open arcs joining two
//! centers. Geometric predicates use exact orientation tests.

use std::f64::consts::PI;

use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monopole::{MonopoleConfig, Vec3};
use crate::plane::{PlaneFrame, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Closed,
    /// Arc from center `start` to center `end`; the first and last nodes sit on
    /// the projections of those centers.
    Open { start: usize, end: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveFile", into = "CurveFile")]
pub struct PolyCurve {
    frame: PlaneFrame,
    nodes: Vec<Point2>,
    kind: CurveKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    plane: PlaneFrame,
    kind: CurveKind,
    nodes: Vec<[f64; 2]>,
}

impl TryFrom<CurveFile> for PolyCurve {
    type Error = Error;
    fn try_from(f: CurveFile) -> Result<Self> {
        PolyCurve::new(f.plane, f.nodes.into_iter().map(Point2::from).collect(), f.kind)
    }
}

impl From<PolyCurve> for CurveFile {
    fn from(c: PolyCurve) -> Self {
        CurveFile { plane: c.frame, kind: c.kind, nodes: c.nodes.iter().map(|p| [p.x, p.y]).collect() }
    }
}

fn coord(p: &Point2) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Positive when `a, b, c` turn counterclockwise, zero when collinear (exact).
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> f64 {
    orient2d(coord(a), coord(b), coord(c))
}

fn cross(a: &Point2, b: &Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Angle of a plane vector in `(-pi, pi]`.
pub fn direction_angle(v: &Point2) -> f64 {
    // `+ 0.0` turns a negative zero into a positive one so the branch is (-pi, pi].
    (v.y + 0.0).atan2(v.x)
}

fn on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Distance from `p` to the segment `ab`.
pub fn point_segment_distance(p: &Point2, a: &Point2, b: &Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 { ((p - a).dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * t)).norm()
}

/// Winding number of the closed polygon `poly` (last node joined to the first)
/// around `p`. `p` must not lie on the polygon.
pub fn winding_number(poly: &[Point2], p: &Point2) -> i64 {
    let n = poly.len();
    let mut wn = 0;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Tangent angle at the middle node of `a, b, c` from the circle through the
/// three points, with the half-angles it subtends toward `a` and toward `c`.
/// Returns `(psi_minus, x, y)`: tangent at `b` is `psi_minus + x`, at `a` is
/// `psi_minus - x`, and at `c` is `psi_plus + y`.
fn circle_tangent(a: &Point2, b: &Point2, c: &Point2) -> (f64, f64, f64) {
    let (em, ep) = (b - a, c - b);
    let (hm, hp) = (em.norm(), ep.norm());
    let psi_m = direction_angle(&em);
    let delta = wrap_angle(direction_angle(&ep) - psi_m);
    let x = (hm * delta.sin()).atan2(hp + hm * delta.cos());
    (psi_m, x, delta - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub node: usize,
    /// Signed curvature, positive when the curve turns counterclockwise.
    pub kappa: f64,
    /// Half the summed length of the two adjacent segments.
    pub ds: f64,
}

impl PolyCurve {
    /// Validated curve: enough nodes, no repeated consecutive nodes, no
    /// self-intersections.
    pub fn new(frame: PlaneFrame, nodes: Vec<Point2>, kind: CurveKind) -> Result<Self> {
        let curve = PolyCurve { frame, nodes, kind };
        curve.check_shape()?;
        if !curve.is_embedded() {
            return Err(Error::InvalidCurve("curve intersects itself".into()));
        }
        Ok(curve)
    }

    pub(crate) fn from_parts(frame: PlaneFrame, nodes: Vec<Point2>, kind: CurveKind) -> Self {
        PolyCurve { frame, nodes, kind }
    }

    fn check_shape(&self) -> Result<()> {
        let min = if self.is_closed() { 3 } else { 2 };
        if self.nodes.len() < min {
            return Err(Error::InvalidCurve(format!("need at least {min} nodes, got {}", self.nodes.len())));
        }
        if !self.nodes.iter().all(|p| p.x.is_finite() && p.y.is_finite()) {
            return Err(Error::InvalidCurve("non-finite node".into()));
        }
        if let CurveKind::Open { start, end } = self.kind {
            if start == end {
                return Err(Error::InvalidCurve("open curve must join two different centers".into()));
            }
        }
        for i in 0..self.segment_count() {
            let (a, b) = self.segment(i);
            if a == b {
                return Err(Error::InvalidCurve(format!("segment {i} has zero length")));
            }
        }
        Ok(())
    }

    /// Checks that an open curve starts and ends on its centers and that both lie
    /// in the plane of the curve.
    pub fn check_against(&self, config: &MonopoleConfig) -> Result<()> {
        let CurveKind::Open { start, end } = self.kind else {
            return Ok(());
        };
        let tol = 1e-9 * config.length_scale();
        for (node, idx) in [(self.nodes[0], start), (*self.nodes.last().unwrap_or(&self.nodes[0]), end)] {
            let c = config
                .centers()
                .get(idx)
                .ok_or_else(|| Error::InvalidCurve(format!("center {idx} does not exist")))?;
            if self.frame.distance(&c.position) > tol {
                return Err(Error::InvalidCurve(format!("center {idx} is not in the plane of the curve")));
            }
            if (self.frame.project(&c.position) - node).norm() > tol {
                return Err(Error::InvalidCurve(format!("endpoint does not sit on center {idx}")));
            }
        }
        Ok(())
    }

    pub fn frame(&self) -> &PlaneFrame {
        &self.frame
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.kind, CurveKind::Closed)
    }

    pub fn segment_count(&self) -> usize {
        if self.is_closed() {
            self.nodes.len()
        } else {
            self.nodes.len() - 1
        }
    }

    pub fn segment(&self, i: usize) -> (Point2, Point2) {
        (self.nodes[i], self.nodes[(i + 1) % self.nodes.len()])
    }

    pub fn world_nodes(&self) -> Vec<Vec3> {
        self.nodes.iter().map(|p| self.frame.to_world(p)).collect()
    }

    pub fn length(&self) -> f64 {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                (b - a).norm()
            })
            .sum()
    }

    pub fn min_spacing(&self) -> f64 {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                (b - a).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Endpoints of an open curve.
    pub fn chord(&self) -> Option<(Point2, Point2)> {
        match self.kind {
            CurveKind::Closed => None,
            CurveKind::Open { .. } => Some((self.nodes[0], self.nodes[self.nodes.len() - 1])),
        }
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Winding number around `p` of the closed polygon (for open curves: the arc
    /// followed by its chord traversed backwards).
    pub fn winding_around(&self, p: &Point2) -> i64 {
        winding_number(&self.nodes, p)
    }

    /// No two non-adjacent segments meet and adjacent segments do not fold back.
    pub fn is_embedded(&self) -> bool {
        let m = self.segment_count();
        let closed = self.is_closed();
        for i in 0..m {
            let (a, b) = self.segment(i);
            for j in i + 1..m {
                let (c, d) = self.segment(j);
                let adjacent = j == i + 1 || (closed && i == 0 && j == m - 1);
                if adjacent {
                    // Segments p->q and q->r share only q unless r folds back over p->q.
                    let (p, q, r) = if j == i + 1 { (a, b, d) } else { (c, d, b) };
                    if orient(&p, &q, &r) == 0.0 && (q - p).dot(&(r - q)) < 0.0 {
                        return false;
                    }
                    continue;
                }
                if segments_intersect(&a, &b, &c, &d) {
                    return false;
                }
            }
        }
        true
    }

    /// Distance in `R^3` from `x` to the polyline.
    pub fn distance_to(&self, x: &Vec3) -> f64 {
        let p = self.frame.project(x);
        let h = self.frame.distance(x);
        let d = (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                point_segment_distance(&p, &a, &b)
            })
            .fold(f64::INFINITY, f64::min);
        (d * d + h * h).sqrt()
    }

    /// Hausdorff distance between an open curve and its chord.
    pub fn hausdorff_to_chord(&self) -> Option<f64> {
        let (p, q) = self.chord()?;
        let mut h: f64 = 0.0;
        for n in &self.nodes {
            h = h.max(point_segment_distance(n, &p, &q));
        }
        let samples = 2 * self.nodes.len();
        for k in 0..=samples {
            let y = p + (q - p) * (k as f64 / samples as f64);
            let d = (0..self.segment_count())
                .map(|i| {
                    let (a, b) = self.segment(i);
                    point_segment_distance(&y, &a, &b)
                })
                .fold(f64::INFINITY, f64::min);
            h = h.max(d);
        }
        Some(h)
    }

    /// `n` nodes equally spaced in arclength along the polyline. Open curves keep
    /// their endpoints bit-for-bit.
    pub fn resample(&self, n: usize) -> Result<PolyCurve> {
        let min = if self.is_closed() { 3 } else { 2 };
        if n < min {
            return Err(Error::InvalidCurve(format!("cannot resample to {n} nodes")));
        }
        let m = self.segment_count();
        let lens: Vec<f64> = (0..m)
            .map(|i| {
                let (a, b) = self.segment(i);
                (b - a).norm()
            })
            .collect();
        let total: f64 = lens.iter().sum();
        let pieces = if self.is_closed() { n } else { n - 1 };
        let mut out = Vec::with_capacity(n);
        let mut seg = 0;
        let mut seg_start = 0.0;
        for k in 0..pieces {
            let s = total * k as f64 / pieces as f64;
            while seg + 1 < m && seg_start + lens[seg] < s {
                seg_start += lens[seg];
                seg += 1;
            }
            let (a, b) = self.segment(seg);
            let t = ((s - seg_start) / lens[seg]).clamp(0.0, 1.0);
            out.push(if t == 0.0 { a } else { a + (b - a) * t });
        }
        if !self.is_closed() {
            out.push(self.nodes[self.nodes.len() - 1]);
        }
        Ok(PolyCurve { frame: self.frame, nodes: out, kind: self.kind })
    }

    /// Tangent angle at every node, in `(-pi, pi]`, taken from the circle through
    /// the node and its neighbours (exact on circles and lines). Endpoints of open
    /// curves use the circle through the first or last three nodes.
    pub fn tangent_angles(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let nd = &self.nodes;
        if self.is_closed() {
            return (0..n)
                .map(|i| {
                    let (psi, x, _) = circle_tangent(&nd[(i + n - 1) % n], &nd[i], &nd[(i + 1) % n]);
                    wrap_angle(psi + x)
                })
                .collect();
        }
        if n == 2 {
            let a = direction_angle(&(nd[1] - nd[0]));
            return vec![a, a];
        }
        let mut out = Vec::with_capacity(n);
        let (psi, x, _) = circle_tangent(&nd[0], &nd[1], &nd[2]);
        out.push(wrap_angle(psi - x));
        for i in 1..n - 1 {
            let (psi, x, _) = circle_tangent(&nd[i - 1], &nd[i], &nd[i + 1]);
            out.push(wrap_angle(psi + x));
        }
        let (_, _, y) = circle_tangent(&nd[n - 3], &nd[n - 2], &nd[n - 1]);
        out.push(wrap_angle(direction_angle(&(nd[n - 1] - nd[n - 2])) + y));
        out
    }

    /// Unit tangent in `R^3` at each node.
    pub fn world_tangents(&self) -> Vec<Vec3> {
        self.tangent_angles()
            .into_iter()
            .map(|a| self.frame.u() * a.cos() + self.frame.w() * a.sin())
            .collect()
    }

    /// Menger curvature at interior nodes (all nodes of a closed curve).
    pub fn curvature(&self) -> Vec<CurvatureSample> {
        let n = self.nodes.len();
        let nd = &self.nodes;
        let range: Vec<usize> = if self.is_closed() { (0..n).collect() } else { (1..n - 1).collect() };
        range
            .into_iter()
            .map(|i| {
                let a = nd[(i + n - 1) % n];
                let b = nd[i];
                let c = nd[(i + 1) % n];
                let (hm, hp, hc) = ((b - a).norm(), (c - b).norm(), (c - a).norm());
                let kappa = 2.0 * cross(&(b - a), &(c - b)) / (hm * hp * hc);
                CurvatureSample { node: i, kappa, ds: 0.5 * (hm + hp) }
            })
            .collect()
    }

    /// Closed circle of `n` nodes, counterclockwise.
    pub fn circle(frame: PlaneFrame, center: Point2, radius: f64, n: usize) -> Result<PolyCurve> {
        let nodes = (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                center + Point2::new(a.cos(), a.sin()) * radius
            })
            .collect();
        PolyCurve::new(frame, nodes, CurveKind::Closed)
    }

    /// Circular arc from `p` to `q` with `n` nodes whose tangent turns clockwise by
    /// `sweep` radians in total. A positive sweep bulges to the left of `p -> q`.
    pub fn circular_arc(
        frame: PlaneFrame,
        p: Point2,
        q: Point2,
        sweep: f64,
        n: usize,
        start: usize,
        end: usize,
    ) -> Result<PolyCurve> {
        if n < 2 {
            return Err(Error::InvalidCurve("arc needs at least 2 nodes".into()));
        }
        let chord = q - p;
        let half = 0.5 * sweep;
        let mut nodes = Vec::with_capacity(n);
        if half.abs() < 1e-12 {
            for k in 0..n {
                nodes.push(p + chord * (k as f64 / (n - 1) as f64));
            }
        } else {
            let len = chord.norm();
            let radius = 0.5 * len / half.sin().abs();
            let mid = (p + q) * 0.5;
            let normal = Point2::new(-chord.y, chord.x) / len;
            // Center lies on the side opposite to the bulge.
            let offset = radius * half.cos() * half.signum();
            let center = mid - normal * offset;
            let a0 = direction_angle(&(p - center));
            for k in 0..n {
                let a = a0 - sweep * k as f64 / (n - 1) as f64;
                nodes.push(center + Point2::new(a.cos(), a.sin()) * radius);
            }
            nodes[0] = p;
            nodes[n - 1] = q;
        }
        PolyCurve::new(frame, nodes, CurveKind::Open { start, end })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn plane() -> PlaneFrame {
        PlaneFrame::horizontal()
    }

    #[test]
    fn circle_tangents_and_curvature_are_exact() {
        let c = PolyCurve::circle(plane(), Point2::new(0.5, -0.2), 2.0, 64).unwrap();
        for (i, t) in c.tangent_angles().iter().enumerate() {
            let expected = wrap_angle(2.0 * PI * i as f64 / 64.0 + PI / 2.0);
            assert_relative_eq!(wrap_angle(t - expected), 0.0, epsilon = 1e-12);
        }
        let menger = c.curvature();
        assert!(menger.iter().all(|s| (s.kappa - 0.5).abs() < 1e-12));
        let total: f64 = menger.iter().map(|s| s.kappa * s.ds).sum();
        assert_relative_eq!(total, 2.0 * PI, max_relative = 1e-3);
    }

    #[test]
    fn arc_endpoint_tangents() {
        let arc = PolyCurve::circular_arc(plane(), Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), PI, 33, 0, 1).unwrap();
        let t = arc.tangent_angles();
        assert_relative_eq!(t[0], PI / 2.0, epsilon = 1e-12);
        assert_relative_eq!(t[32], -PI / 2.0, epsilon = 1e-12);
        assert!(arc.nodes().iter().all(|p| p.y >= -1e-12));
        assert_eq!(arc.winding_around(&Point2::new(1.0, 0.5)), -1);
    }

    #[test]
    fn self_intersection_is_rejected() {
        let bow = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        assert!(PolyCurve::new(plane(), bow, CurveKind::Closed).is_err());
        let fold = vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(1.0, 0.0)];
        assert!(PolyCurve::new(plane(), fold, CurveKind::Open { start: 0, end: 1 }).is_err());
        let square = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)];
        let sq = PolyCurve::new(plane(), square, CurveKind::Closed).unwrap();
        assert_eq!(sq.winding_around(&Point2::new(0.5, 0.5)), 1);
        assert_eq!(sq.winding_around(&Point2::new(1.5, 0.5)), 0);
    }

    #[test]
    fn resampling_keeps_endpoints() {
        let arc = PolyCurve::circular_arc(plane(), Point2::new(0.1, 0.3), Point2::new(2.7, -0.4), 1.0, 17, 0, 1).unwrap();
        let r = arc.resample(50).unwrap();
        assert_eq!(r.nodes()[0], arc.nodes()[0]);
        assert_eq!(r.nodes()[49], arc.nodes()[16]);
        assert!(r.length() <= arc.length() + 1e-12);
        let spacing: Vec<f64> = (0..r.segment_count()).map(|i| { let (a, b) = r.segment(i); (b - a).norm() }).collect();
        let (lo, hi) = spacing.iter().fold((f64::INFINITY, 0.0f64), |(l, h), s| (l.min(*s), h.max(*s)));
        assert!(hi / lo < 1.01);
    }

    #[test]
    fn curve_json_round_trip() {
        let text = r#"{"plane": {"origin": [0,0,0], "u": [1,0,0], "w": [0,1,0]},
                       "kind": {"open": {"start": 0, "end": 1}},
                       "nodes": [[0,0],[1,1],[2,0]]}"#;
        let c: PolyCurve = serde_json::from_str(text).unwrap();
        assert_eq!(c.kind(), CurveKind::Open { start: 0, end: 1 });
        let back: PolyCurve = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
