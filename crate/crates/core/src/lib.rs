//! Isogonal lines, pseudo-geodesics and generalized helices on parametrized
//! surfaces.

pub mod classify;
pub mod config;
pub mod darboux;
pub mod error;
pub mod export;
pub mod gallery;
pub mod intersect;
pub mod ode;
pub mod quad;
pub mod scenario;
pub mod stencil;
pub mod surface;
pub mod tracer;

pub use error::{Error, Result};
pub use surface::{Domain, PointGeometry, ShapeData, SurfaceDef, SurfaceJet2, Vec3};
