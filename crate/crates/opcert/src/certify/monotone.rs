//! Monotonicity certification.
//!
//! Two independent checks, reported side by side because the definitional
//! and differential forms can disagree near tolerance:
//!
//! 1. Jacobian criterion: min over the grid of the smallest eigenvalue of
//!    the symmetric Jacobian part must be >= -tol.
//! 2. Definitional criterion: for seeded random pairs (z, z'), the ratio
//!    <F(z) - F(z'), z - z'> / |z - z'|^2 must be >= -tol.

use super::{Bound, Certificate, Check};
use crate::field::VectorField;
use crate::geom::{Grid, GridSpec, Region};
use crate::sample;
use crate::sweep;

pub fn certify_monotone(
    field: &VectorField,
    region: Region,
    grid: GridSpec,
    pair_samples: usize,
    seed: u64,
    tol: f64,
) -> Certificate {
    let g = Grid::new(region, grid);
    let property = "monotone";

    let eigs = sweep::map_indexed(g.len(), |k| {
        field.jacobian(g.point(k)).map(|j| j.min_sym_eig())
    });
    let eigs = match sweep::first_error(eigs) {
        Ok(v) => v,
        Err((k, err)) => {
            return Certificate::indeterminate(
                property,
                field.name(),
                region,
                grid,
                tol,
                Some(seed),
                g.point(k),
                &err,
            )
        }
    };
    let e = sweep::extremes(&eigs);
    let jacobian_check = Check::new(
        "jacobian-psd",
        "min_sym_eig",
        e.min,
        -tol,
        Bound::Lower,
        Some(g.point(e.argmin)),
        format!("minimum over {}x{} grid of the smallest symmetric-part eigenvalue", grid.nx, grid.ny),
    );

    // counter-based pairs: sample k depends only on (seed, k)
    let ratios = sweep::map_indexed(pair_samples, |k| {
        let (z, z2) = sample::pair_in(&region, seed, k as u64);
        let dz = z - z2;
        let denom = dz.norm_sq();
        if denom == 0.0 {
            return Ok((f64::INFINITY, z, z2));
        }
        let fz = field.value(z)?;
        let fz2 = field.value(z2)?;
        Ok(((fz - fz2).dot(dz) / denom, z, z2))
    });
    let ratios = match sweep::first_error(ratios) {
        Ok(v) => v,
        Err((k, err)) => {
            let (z, _) = sample::pair_in(&region, seed, k as u64);
            return Certificate::indeterminate(
                property,
                field.name(),
                region,
                grid,
                tol,
                Some(seed),
                z,
                &err,
            );
        }
    };
    let mut min_ratio = f64::INFINITY;
    let mut witness = None;
    for (r, z, z2) in &ratios {
        if *r < min_ratio {
            min_ratio = *r;
            witness = Some((*z, *z2));
        }
    }
    let (wz, wz2) = witness.expect("pair_samples >= 1");
    let pairwise_check = Check::new(
        "pairwise-inequality",
        "min_pair_ratio",
        min_ratio,
        -tol,
        Bound::Lower,
        Some(wz),
        format!(
            "minimum over {pair_samples} seeded pairs of <F(z)-F(z'), z-z'>/|z-z'|^2; paired with ({}, {})",
            wz2.x, wz2.y
        ),
    );

    let mut notes = Vec::new();
    if !field.jacobian_exact() {
        notes.push("jacobian computed by central finite differences".to_string());
    }
    Certificate::build(
        property,
        field.name(),
        region,
        grid,
        tol,
        Some(seed),
        vec![jacobian_check, pairwise_check],
        notes,
    )
}

/// Per-point grid metric for CSV dumps: smallest symmetric-part eigenvalue.
pub fn min_sym_eig_grid(field: &VectorField, region: Region, grid: GridSpec) -> crate::Result<Vec<f64>> {
    let g = Grid::new(region, grid);
    let v = sweep::map_indexed(g.len(), |k| field.jacobian(g.point(k)).map(|j| j.min_sym_eig()));
    sweep::first_error(v).map_err(|(_, e)| e)
}
