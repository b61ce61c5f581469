//! Constructive geometry of constant-width bodies.
//!
//! The crate makes three things executable:
//!
//! * the completion operator: cylinder `Z^+`, ball hulls, the
//!   single-direction completion and its iteration to a constant-width
//!   body ([`completion`]);
//! * the smoothing / spike-set / hull / completion pipeline that produces
//!   a nearby constant-width body whose tangential curvature radii on a
//!   spherical cap are certified to be 1 or 0 ([`t4`]);
//! * numerical estimators for tangential and sectional radii of curvature,
//!   quadratic-form fits, wideness predicates, and the classification
//!   dichotomy ([`curvature`]).
//!
//! Bodies are immutable primitive trees with membership, support, and
//! boundary-point oracles ([`body`]); all sphere-wide suprema run over
//! deterministic hierarchical direction grids ([`geom`]).
//!
//! Every major capability has a runnable example under `examples/`; the
//! thin `constwidth` binary exposes the same operations as subcommands.

pub mod body;
pub mod completion;
pub mod curvature;
pub mod error;
pub mod geom;
pub mod io;
pub(crate) mod linprog;
pub mod t4;
pub(crate) mod vecmath;

pub use body::{diameter, minkowski_combine, width_profile, Body, Membership, SupportValue};
pub use error::{Error, Result};
pub use geom::{
    convergence_compare, hausdorff_distance, make_direction_grid, polar_support, radial_function,
    Cap, Direction, DirectionGrid,
};
#[cfg(test)]
mod timing2_tests { include!("/tmp/timing2.rs"); }
