//! Horoball packings in plane-symmetric ideal tetrahedra of hyperbolic 3-space.
//!
//! The crate is organised bottom-up:
//!
//! * [`kernel`]: the Lorentz-signature projective (Beltrami–Cayley–Klein) model.
//! * [`volumes`]: the Lobachevsky function and ideal tetrahedron volumes.
//! * [`horoball`]: horospheres as quadrics, tangency solving, sector volumes.
//! * [`oracle`]: direct numerical integration of sector volumes.
//! * [`tetrahedron`], [`scenario`], [`arrangement`]: the one-parameter tetrahedron
//!   family and the tangency-constrained horoball arrangements living in it.
//! * [`optimizer`]: density curves and one-dimensional maximization.
//! * [`report`]: the reproduction table, CSV and JSON output used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arrangement;
pub mod error;
pub mod horoball;
pub mod kernel;
pub mod optimizer;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod scenario;
pub mod tetrahedron;
pub mod volumes;

pub use error::{Error, Result};
