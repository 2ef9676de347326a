//! Numerical certification of field properties.
//!
//! A certificate is a machine-readable record of a property check over a
//! region: which metrics were computed on which grid, with which tolerances
//! and seed, what was observed, and where. Passing is a falsifiable
//! numerical claim about sampled points, not an analytic proof; every
//! failing check carries a concrete witness. Re-running with identical
//! inputs reproduces a certificate bit for bit.

mod convex;
mod gradient;
mod monotone;
mod potential;
mod skew;

pub use convex::{certify_convex, certify_convex_concave, hessian_eig_grid, separable_margin_grid};
pub use gradient::{asymmetry_grid, certify_gradient};
pub use monotone::{certify_monotone, min_sym_eig_grid};
pub use potential::{classify_affinity, reconstruct_potential, Affinity, PotentialTable};
pub use skew::{
    asymmetry_signed_grid, fit_skew_affine, refute_skew_affine, RefutationWitness, SkewAffineFit,
};

use serde::Serialize;

use crate::error::Error;
use crate::geom::{Grid, GridSpec, Region, Vec2};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// An evaluation failed; nothing was certified or refuted.
    Indeterminate,
}

/// Direction of a check: whether the observed metric must stay above or
/// below its threshold.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// pass iff observed >= threshold
    Lower,
    /// pass iff observed > threshold
    StrictLower,
    /// pass iff observed <= threshold
    Upper,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub metric: String,
    pub observed: Option<f64>,
    pub threshold: f64,
    pub bound: Bound,
    pub pass: bool,
    pub witness: Option<Vec2>,
    pub details: String,
}

impl Check {
    pub fn new(
        id: &str,
        metric: &str,
        observed: f64,
        threshold: f64,
        bound: Bound,
        witness: Option<Vec2>,
        details: impl Into<String>,
    ) -> Self {
        let pass = match bound {
            Bound::Lower => observed >= threshold,
            Bound::StrictLower => observed > threshold,
            Bound::Upper => observed <= threshold,
        };
        Check {
            id: id.to_string(),
            metric: metric.to_string(),
            observed: Some(observed),
            threshold,
            bound,
            pass,
            witness,
            details: details.into(),
        }
    }

    fn evaluation_failure(point: Vec2, err: &Error) -> Self {
        Check {
            id: "evaluation".to_string(),
            metric: "none".to_string(),
            observed: None,
            threshold: 0.0,
            bound: Bound::Lower,
            pass: false,
            witness: Some(point),
            details: format!("evaluation failed: {err}"),
        }
    }
}

/// Structured pass/fail evidence for a named property over a region.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub property: String,
    pub operator: String,
    pub region: Region,
    pub grid: GridSpec,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
    pub verdict: Verdict,
}

impl Certificate {
    pub(crate) fn build(
        property: &str,
        operator: &str,
        region: Region,
        grid: GridSpec,
        tolerance: f64,
        seed: Option<u64>,
        checks: Vec<Check>,
        notes: Vec<String>,
    ) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Certificate {
            schema_version: SCHEMA_VERSION,
            property: property.to_string(),
            operator: operator.to_string(),
            region,
            grid,
            tolerance,
            seed,
            checks,
            notes,
            pass,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        }
    }

    /// Certificate for a run that could not evaluate the field everywhere:
    /// marked indeterminate with the failing point.
    pub(crate) fn indeterminate(
        property: &str,
        operator: &str,
        region: Region,
        grid: GridSpec,
        tolerance: f64,
        seed: Option<u64>,
        point: Vec2,
        err: &Error,
    ) -> Self {
        Certificate {
            schema_version: SCHEMA_VERSION,
            property: property.to_string(),
            operator: operator.to_string(),
            region,
            grid,
            tolerance,
            seed,
            checks: vec![Check::evaluation_failure(point, err)],
            notes: Vec::new(),
            pass: false,
            verdict: Verdict::Indeterminate,
        }
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// First failing check in declaration order, if any.
    pub fn first_failed(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Max |J12 - J21| over the grid, with its witness. Shared by the gradient
/// certificate and the potential-reconstruction precondition.
pub(crate) fn max_asymmetry(
    field: &crate::field::VectorField,
    grid: Grid,
) -> Result<(f64, Vec2), (Vec2, Error)> {
    let values = crate::sweep::map_indexed(grid.len(), |k| {
        field.jacobian(grid.point(k)).map(|j| j.asymmetry().abs())
    });
    match crate::sweep::first_error(values) {
        Ok(v) => {
            let e = crate::sweep::extremes(&v);
            Ok((e.max, grid.point(e.argmax)))
        }
        Err((k, err)) => Err((grid.point(k), err)),
    }
}
