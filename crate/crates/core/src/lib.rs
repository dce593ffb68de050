//! Lipschitz-free spaces over finite metric spaces and finite R-trees.
//!
//! * [`metric`]: finite pointed metric spaces and point-set operations.
//! * [`free`]: free-space elements, norms by duality and by transport,
//!   cyclical monotonicity, extensions, `l1` constants.
//! * [`tree`]: R-trees, the isometry onto `L1` of the length measure,
//!   small-support and subtree distances.
//! * [`constructions`]: Cantor schemes and the star and dyadic families.
//! * [`harness`]: scenarios, reports and JSON input.
//!
//! All numerics are generic over [`Scalar`]: `f64` or exact [`Rational`].

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod constructions;
pub mod error;
pub mod free;
pub mod harness;
pub mod metric;
pub mod sample;
pub mod scalar;
pub mod tree;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
