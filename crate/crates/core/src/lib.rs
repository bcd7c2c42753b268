//! Pointwise tensor calculus for 3-dimensional Riemannian manifolds `(M, g, Q)`
//! with `Q⁴ = id` acting isometrically, and the associated almost-product
//! manifold `(M, g, P = Q²)`.
//!
//! The metric is `g = diag(A, A, B)` in a chart, with `A` and `B` given as
//! expressions in `x1, x2, x3`. The associated metric is `g̃ = diag(-A, -A, B)`.
//! Everything is computed at a point from second-order jets of `A` and `B`.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod catenoid;
pub mod classify;
pub mod cli;
pub mod connection;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod manifest;
pub mod qbasis;
pub mod report;
pub mod structures;
pub mod tensor;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{Jet2, ScalarField};
pub use structures::{MetricAt, MetricSpec, Which};
