use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monopole::Vec3;

pub type Point2 = Vector2<f64>;

/// Affine plane `origin + a u + b w` with `u`, `w` orthonormal. The unit normal
/// `u x w` is the direction `v` of the Lagrangian projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlaneFile", into = "PlaneFile")]
pub struct PlaneFrame {
    origin: Vec3,
    u: Vec3,
    w: Vec3,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaneFile {
    origin: [f64; 3],
    u: [f64; 3],
    w: [f64; 3],
}

impl TryFrom<PlaneFile> for PlaneFrame {
    type Error = Error;
    fn try_from(f: PlaneFile) -> Result<Self> {
        PlaneFrame::new(Vec3::from(f.origin), Vec3::from(f.u), Vec3::from(f.w))
    }
}

impl From<PlaneFrame> for PlaneFile {
    fn from(p: PlaneFrame) -> Self {
        PlaneFile { origin: p.origin.into(), u: p.u.into(), w: p.w.into() }
    }
}

impl PlaneFrame {
    pub fn new(origin: Vec3, u: Vec3, w: Vec3) -> Result<Self> {
        let ok = (u.norm() - 1.0).abs() < 1e-9 && (w.norm() - 1.0).abs() < 1e-9 && u.dot(&w).abs() < 1e-9;
        if !ok || !origin.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidCurve("plane axes must be orthonormal".into()));
        }
        Ok(PlaneFrame { origin, u, w })
    }

    /// The `x1 x2` plane through the origin.
    pub fn horizontal() -> Self {
        PlaneFrame { origin: Vec3::zeros(), u: Vec3::x(), w: Vec3::y() }
    }

    /// Plane through `origin` spanned by the first two coordinate axes.
    pub fn horizontal_at(origin: Vec3) -> Self {
        PlaneFrame { origin, u: Vec3::x(), w: Vec3::y() }
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn u(&self) -> Vec3 {
        self.u
    }

    pub fn w(&self) -> Vec3 {
        self.w
    }

    pub fn normal(&self) -> Vec3 {
        self.u.cross(&self.w)
    }

    pub fn to_world(&self, p: &Point2) -> Vec3 {
        self.origin + self.u * p.x + self.w * p.y
    }

    pub fn project(&self, x: &Vec3) -> Point2 {
        let d = x - self.origin;
        Point2::new(d.dot(&self.u), d.dot(&self.w))
    }

    pub fn distance(&self, x: &Vec3) -> f64 {
        (x - self.origin).dot(&self.normal()).abs()
    }

    /// Plane coordinates of a world vector (no translation).
    pub fn project_vector(&self, v: &Vec3) -> Point2 {
        Point2::new(v.dot(&self.u), v.dot(&self.w))
    }
}
