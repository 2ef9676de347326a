//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("exponent at byte {offset} must be a nonnegative integer literal")]
    NonIntegerExponent { offset: usize },

    #[error("domain error in `{subexpr}`: {message}")]
    Domain { subexpr: String, message: String },

    #[error("invalid region: {0}")]
    Region(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("empty search interval [{lo}, {hi}]")]
    EmptySearch { lo: f64, hi: f64 },

    #[error(
        "field is not curl-free on the region: max |J12 - J21| = {max_asymmetry:e} \
         at ({x}, {y}) exceeds {tol:e}"
    )]
    NotGradient {
        max_asymmetry: f64,
        x: f64,
        y: f64,
        tol: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
