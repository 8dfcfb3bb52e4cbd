//! Numerical laboratory for Dini-type function spaces and the planar flow
//! problems built on them.
//!
//! The crate has four layers:
//!
//! * [`funcspace`] — moduli of continuity, the C*/B*/D* and Hölder-type
//!   semi-norm families, witness fields, and composition with maps.
//! * [`elliptic`] — Poisson and Stokes model problems on the unit square,
//!   the disk Green's function, and regularity ratio studies.
//! * [`euler`] — 2-D incompressible Euler in vorticity form via
//!   semi-Lagrangian characteristic tracing and Picard iteration.
//! * [`harness`] — configuration, field I/O, experiment orchestration and
//!   report emission for the `dinilab` binary.

pub mod error;
pub mod grid;

pub mod elliptic;
pub mod euler;
pub mod funcspace;
pub mod harness;

pub use error::{Error, Result};
pub use grid::{Domain, Point, SampledField, Shape, VectorField};
