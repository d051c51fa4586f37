//! Decorated hyperbolic surfaces, constant-curvature cone metrics and the
//! light-cone geometry relating them.
//!
//! The crate is organised bottom-up:
//!
//! * [`minkowski`]: primitives of Minkowski 3-space and its future light cone.
//! * [`geometry`]: intrinsic triangle trigonometry for curvature -1, 0 and +1.
//! * [`surface`]: marked triangulations, metrics, flips and Delaunay maintenance.
//! * [`correspondence`]: the lambda-length dictionary between decorated and cone
//!   metrics, vertex scaling and discrete conformality tests.
//! * [`holonomy`]: developing maps, holonomy matrices and orbit enumeration.
//! * [`hull`]: finite-orbit convex hulls and mesh export.
//! * [`uniformize`]: prescribed-curvature solver.
//! * [`io`]: the JSON surface file format.

pub mod correspondence;
pub mod error;
pub mod geometry;
pub mod holonomy;
pub mod hull;
pub mod io;
pub mod minkowski;
pub mod surface;
pub mod uniformize;

pub use error::{Error, Result};
pub use minkowski::{Curvature, LightPoint, MinkVec};
pub use surface::{ConeMetric, DecoratedMetric, EdgeStatus, Triangulation};
