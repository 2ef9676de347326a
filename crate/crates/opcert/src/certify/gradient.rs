//! Gradient-structure certification: a field is locally a gradient iff its
//! Jacobian is symmetric, so the check is max over the grid of
//! |J12 - J21| <= tol.

use super::{max_asymmetry, Bound, Certificate, Check};
use crate::field::VectorField;
use crate::geom::{Grid, GridSpec, Region};
use crate::sweep;

pub fn certify_gradient(
    field: &VectorField,
    region: Region,
    grid: GridSpec,
    tol: f64,
) -> Certificate {
    let property = "gradient";
    let g = Grid::new(region, grid);
    let (max_abs, witness) = match max_asymmetry(field, g) {
        Ok(v) => v,
        Err((point, err)) => {
            return Certificate::indeterminate(
                property,
                field.name(),
                region,
                grid,
                tol,
                None,
                point,
                &err,
            )
        }
    };
    let check = Check::new(
        "curl-free",
        "max_abs_asymmetry",
        max_abs,
        tol,
        Bound::Upper,
        Some(witness),
        "maximum over the grid of |J12 - J21|",
    );
    let mut notes = Vec::new();
    if !field.jacobian_exact() {
        notes.push("jacobian computed by central finite differences".to_string());
    }
    Certificate::build(property, field.name(), region, grid, tol, None, vec![check], notes)
}

/// Per-point |J12 - J21| for CSV dumps.
pub fn asymmetry_grid(field: &VectorField, region: Region, grid: GridSpec) -> crate::Result<Vec<f64>> {
    let g = Grid::new(region, grid);
    let v = sweep::map_indexed(g.len(), |k| {
        field.jacobian(g.point(k)).map(|j| j.asymmetry().abs())
    });
    sweep::first_error(v).map_err(|(_, e)| e)
}
