//! Geometry of multi-center Gibbons-Hawking spaces: closed geodesic orbits of the
//! circle action, the orbit-length gradient flow, and the flow of Lagrangian
//! curves in the plane of a Lagrangian projection, with the stability tests
//! that go with it.

pub mod curve;
pub mod dynamics;
pub mod error;
pub mod flow;
pub mod gallery;
pub mod lagrangian;
pub mod monopole;
pub mod ode;
pub mod orbits;
pub mod plane;
pub mod sphere;

pub use error::{Error, Result};
pub use monopole::{Center, Mode, MonopoleConfig, PhiJet, Vec3};
