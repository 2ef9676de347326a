//! Construction and numerical certification of planar monotone operators.
//!
//! The crate parses closed-form scalar fields u(x, y), evaluates them with
//! exact second-order derivatives through forward-mode jets, builds vector
//! fields from them (gradients, saddle fields, pointwise algebra), and
//! certifies the structural properties those constructions are used for:
//! monotonicity, convexity, separable convex-concavity, gradient structure
//! with potential reconstruction, and skew-affine structure with both a
//! least-squares fit and a minimax refutation.
//!
//! The headline pipeline, [`counterexample::refute_additivity`], assembles a
//! pair of monotone saddle operators from one coupling function and
//! certifies that their sum is the gradient of a non-affine convex
//! potential while neither summand is skew-affine: monotone structure that
//! cannot survive addition.
//!
//! Certificates are numerical evidence, not proofs: each records the
//! region, grid, tolerances, and seed it was computed with, and every
//! failing check carries a concrete witness point. Grid sweeps run in
//! parallel under the default `parallel` feature; all reductions happen
//! sequentially over index-ordered buffers, so results are bit-identical
//! for any thread count, including the sequential build.

pub mod builtin;
pub mod certify;
pub mod counterexample;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod field;
pub mod geom;
pub mod jet;
pub mod report;
pub mod sample;
pub mod sweep;
pub mod tolerances;

pub use error::{Error, Result};
pub use expr::Expr;
pub use field::{ScalarField, VectorField};
pub use geom::{Grid, GridSpec, Mat2, Region, Vec2};
pub use jet::Jet2;
