//! Minimal SVG writer for plane data: polylines, segments, arrows and point
//! marks in world coordinates, mapped onto a fixed-size canvas.

use std::fmt::Write;

use ghlab::plane::Point2;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    /// Filled disc: a center.
    Center,
    /// Open square: a saddle of the flow.
    Saddle,
    /// Open circle: a source.
    Source,
    /// Filled triangle: a sink or anything else of interest.
    Other,
}

pub struct Canvas {
    min: Point2,
    scale: f64,
    body: String,
}

impl Canvas {
    /// Canvas covering the bounding box of `points` (the unit square if empty).
    pub fn covering<'a>(points: impl IntoIterator<Item = &'a Point2>) -> Self {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            if p.x.is_finite() && p.y.is_finite() {
                lo = lo.inf(p);
                hi = hi.sup(p);
            }
        }
        if lo.x > hi.x || lo.x.is_nan() {
            lo = Point2::new(-1.0, -1.0);
            hi = Point2::new(1.0, 1.0);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let mid = (lo + hi) * 0.5;
        Canvas {
            min: mid - Point2::new(0.5 * span, 0.5 * span),
            scale: (SIZE - 2.0 * MARGIN) / span,
            body: String::new(),
        }
    }

    fn px(&self, p: &Point2) -> (f64, f64) {
        (MARGIN + (p.x - self.min.x) * self.scale, SIZE - MARGIN - (p.y - self.min.y) * self.scale)
    }

    pub fn world_length(&self, pixels: f64) -> f64 {
        pixels / self.scale
    }

    pub fn polyline(&mut self, points: &[Point2], closed: bool, stroke: &str, width: f64, dash: Option<&str>) {
        if points.is_empty() {
            return;
        }
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let (x, y) = self.px(p);
            let _ = write!(d, "{}{x:.3} {y:.3}", if i == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        let dash = dash.map(|s| format!(" stroke-dasharray=\"{s}\"")).unwrap_or_default();
        let _ = writeln!(
            self.body,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}/>"
        );
    }

    /// Unconnected segments drawn as one path.
    pub fn segments(&mut self, segs: &[(Point2, Point2)], stroke: &str, width: f64) {
        if segs.is_empty() {
            return;
        }
        let mut d = String::new();
        for (a, b) in segs {
            let ((x0, y0), (x1, y1)) = (self.px(a), self.px(b));
            let _ = write!(d, "M{x0:.3} {y0:.3} L{x1:.3} {y1:.3} ");
        }
        let _ = writeln!(self.body, "<path d=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>", d.trim_end());
    }

    /// Arrow from `from` along the world vector `v`.
    pub fn arrow(&mut self, from: &Point2, v: &Point2, stroke: &str) {
        let ((x0, y0), (x1, y1)) = (self.px(from), self.px(&(from + v)));
        let _ = writeln!(
            self.body,
            "<line x1=\"{x0:.3}\" y1=\"{y0:.3}\" x2=\"{x1:.3}\" y2=\"{y1:.3}\" stroke=\"{stroke}\" stroke-width=\"1\" marker-end=\"url(#head)\"/>"
        );
    }

    pub fn mark(&mut self, p: &Point2, mark: Mark, color: &str) {
        let (x, y) = self.px(p);
        let _ = match mark {
            Mark::Center => writeln!(self.body, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"5\" fill=\"{color}\"/>"),
            Mark::Source => writeln!(
                self.body,
                "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"6\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>"
            ),
            Mark::Saddle => writeln!(
                self.body,
                "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"12\" height=\"12\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
                x - 6.0,
                y - 6.0
            ),
            Mark::Other => writeln!(
                self.body,
                "<path d=\"M{x:.3} {:.3} L{:.3} {:.3} L{:.3} {:.3} Z\" fill=\"{color}\"/>",
                y - 7.0,
                x + 6.0,
                y + 5.0,
                x - 6.0,
                y + 5.0
            ),
        };
    }

    pub fn label(&mut self, p: &Point2, text: &str) {
        let (x, y) = self.px(p);
        let _ = writeln!(
            self.body,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
            x + 8.0,
            y - 8.0,
            escape(text)
        );
    }

    pub fn finish(self, title: &str) -> Vec<u8> {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
        );
        let _ = writeln!(s, "<title>{}</title>", escape(title));
        s.push_str(
            "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" orient=\"auto\">\
             <path d=\"M0 0 L6 3 L0 6 Z\" fill=\"#555\"/></marker></defs>\n",
        );
        let _ = writeln!(s, "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>");
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s.into_bytes()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Level-set segments of a scalar field sampled on a regular grid by marching
/// squares. `values[j * nx + i]` sits at `origin + (i dx, j dy)`; cells with a
/// non-finite corner are skipped. Saddle cells are split by the cell average.
pub fn contour_segments(values: &[f64], nx: usize, ny: usize, origin: Point2, dx: f64, dy: f64, level: f64) -> Vec<(Point2, Point2)> {
    let mut out = Vec::new();
    if nx < 2 || ny < 2 {
        return out;
    }
    let at = |i: usize, j: usize| values[j * nx + i];
    let pos = |i: usize, j: usize| origin + Point2::new(i as f64 * dx, j as f64 * dy);
    let cross = |pa: Point2, va: f64, pb: Point2, vb: f64| pa + (pb - pa) * ((level - va) / (vb - va));
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            // Corners counterclockwise from the lower left.
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v: Vec<f64> = c.iter().map(|&(a, b)| at(a, b)).collect();
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let p: Vec<Point2> = c.iter().map(|&(a, b)| pos(a, b)).collect();
            let above: Vec<bool> = v.iter().map(|&x| x > level).collect();
            // Edge k joins corner k to corner k + 1.
            let edges: Vec<usize> = (0..4).filter(|&k| above[k] != above[(k + 1) % 4]).collect();
            let point = |k: usize| cross(p[k], v[k], p[(k + 1) % 4], v[(k + 1) % 4]);
            match edges.len() {
                2 => out.push((point(edges[0]), point(edges[1]))),
                4 => {
                    let mean = v.iter().sum::<f64>() / 4.0;
                    if (mean > level) == above[0] {
                        out.push((point(0), point(1)));
                        out.push((point(2), point(3)));
                    } else {
                        out.push((point(3), point(0)));
                        out.push((point(1), point(2)));
                    }
                }
                _ => {}
            }
        }
    }
    out
}
