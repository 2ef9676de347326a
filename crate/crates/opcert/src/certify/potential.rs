//! Potential reconstruction by line integration, and affinity
//! classification of the reconstructed potential's source field.

use serde::Serialize;

use super::max_asymmetry;
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::geom::{Grid, GridSpec, Region, Vec2};
use crate::sweep;

/// Grid of reconstructed potential values anchored at `anchor`, where the
/// potential is pinned to zero.
#[derive(Clone, Debug, Serialize)]
pub struct PotentialTable {
    pub region: Region,
    pub grid: GridSpec,
    pub anchor: Vec2,
    /// Requested quadrature step; each segment rounds it down so an even
    /// number of subintervals divides the segment exactly.
    pub quad_step: f64,
    /// Largest effective step after per-segment adjustment.
    pub effective_step_max: f64,
    /// Row-major potential values (x index fastest).
    pub values: Vec<f64>,
    /// Max over interior grid points of |central-difference gradient - F|,
    /// infinity norm; recorded at construction.
    pub gradient_match_sup: f64,
}

impl PotentialTable {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }
}

/// Composite Simpson integral of `f` from `a` to `b` (signed), with the
/// subinterval count rounded up to an even number so the requested step is
/// never exceeded. Returns the integral and the effective step.
fn simpson<F>(f: F, a: f64, b: f64, step: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let length = (b - a).abs();
    if length == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut n = (length / step).ceil() as usize;
    n = n.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h)?;
    }
    Ok((acc * h / 3.0, h.abs()))
}

/// Reconstruct a potential for a curl-free field by composite-Simpson line
/// integration along the axis-parallel path anchor -> (x, anchor.y) -> (x, y).
///
/// Precondition: the field must pass the gradient certificate on the same
/// region and grid at `curl_tol`; otherwise the integral is path-dependent
/// and the call fails.
pub fn reconstruct_potential(
    field: &VectorField,
    region: Region,
    grid: GridSpec,
    anchor: Vec2,
    quad_step: f64,
    curl_tol: f64,
) -> Result<PotentialTable> {
    if !(quad_step > 0.0) {
        return Err(Error::Grid(format!("quadrature step must be positive, got {quad_step}")));
    }
    let g = Grid::new(region, grid);
    match max_asymmetry(field, g) {
        Ok((max_abs, w)) => {
            if max_abs > curl_tol {
                return Err(Error::NotGradient {
                    max_asymmetry: max_abs,
                    x: w.x,
                    y: w.y,
                    tol: curl_tol,
                });
            }
        }
        Err((_, err)) => return Err(err),
    }

    let per_point = sweep::map_indexed(g.len(), |k| -> Result<(f64, f64)> {
        let p = g.point(k);
        let (horizontal, h1) = simpson(
            |t| field.value(Vec2::new(t, anchor.y)).map(|v| v.x),
            anchor.x,
            p.x,
            quad_step,
        )?;
        let (vertical, h2) = simpson(
            |t| field.value(Vec2::new(p.x, t)).map(|v| v.y),
            anchor.y,
            p.y,
            quad_step,
        )?;
        Ok((horizontal + vertical, h1.max(h2)))
    });
    let per_point = sweep::first_error(per_point).map_err(|(_, e)| e)?;
    let values: Vec<f64> = per_point.iter().map(|&(v, _)| v).collect();
    let effective_step_max = per_point.iter().fold(0.0f64, |m, &(_, h)| m.max(h));

    let gradient_match_sup = gradient_match(&values, field, g)?;

    Ok(PotentialTable {
        region,
        grid,
        anchor,
        quad_step,
        effective_step_max,
        values,
        gradient_match_sup,
    })
}

/// Max over interior grid points of the infinity-norm gap between the
/// table's central-difference gradient and the field.
fn gradient_match(values: &[f64], field: &VectorField, g: Grid) -> Result<f64> {
    let (nx, ny) = (g.spec.nx, g.spec.ny);
    if nx < 3 || ny < 3 {
        return Ok(0.0);
    }
    let interior = (nx - 2) * (ny - 2);
    let gaps = sweep::map_indexed(interior, |k| -> Result<f64> {
        let i = 1 + k % (nx - 2);
        let j = 1 + k / (nx - 2);
        let p = g.point(g.index(i, j));
        let f = field.value(p)?;
        let gx = (values[g.index(i + 1, j)] - values[g.index(i - 1, j)]) / (2.0 * g.dx());
        let gy = (values[g.index(i, j + 1)] - values[g.index(i, j - 1)]) / (2.0 * g.dy());
        Ok((gx - f.x).abs().max((gy - f.y).abs()))
    });
    let gaps = sweep::first_error(gaps).map_err(|(_, e)| e)?;
    Ok(gaps.iter().fold(0.0f64, |m, &v| m.max(v)))
}

/// Affinity classification of the field a potential table was built from:
/// affine iff the field's per-component spread over the grid stays within
/// tolerance.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "classification", rename_all = "kebab-case")]
pub enum Affinity {
    Affine {
        spread_x: f64,
        spread_y: f64,
    },
    NonAffine {
        spread_x: f64,
        spread_y: f64,
        /// Points attaining the extreme values of the wider component.
        witness_low: Vec2,
        witness_high: Vec2,
    },
}

impl Affinity {
    pub fn is_affine(&self) -> bool {
        matches!(self, Affinity::Affine { .. })
    }

    pub fn spreads(&self) -> (f64, f64) {
        match *self {
            Affinity::Affine { spread_x, spread_y }
            | Affinity::NonAffine { spread_x, spread_y, .. } => (spread_x, spread_y),
        }
    }
}

/// Classify the source field of `table` as affine or not by the spread of
/// its components over the table's grid (a gradient is constant iff the
/// potential is affine).
pub fn classify_affinity(table: &PotentialTable, field: &VectorField, tol: f64) -> Result<Affinity> {
    let g = Grid::new(table.region, table.grid);
    let samples = sweep::map_indexed(g.len(), |k| field.value(g.point(k)));
    let samples = sweep::first_error(samples).map_err(|(_, e)| e)?;
    let xs: Vec<f64> = samples.iter().map(|v| v.x).collect();
    let ys: Vec<f64> = samples.iter().map(|v| v.y).collect();
    let ex = sweep::extremes(&xs);
    let ey = sweep::extremes(&ys);
    let spread_x = ex.max - ex.min;
    let spread_y = ey.max - ey.min;
    if spread_x.max(spread_y) > tol {
        let e = if spread_x >= spread_y { ex } else { ey };
        Ok(Affinity::NonAffine {
            spread_x,
            spread_y,
            witness_low: g.point(e.argmin),
            witness_high: g.point(e.argmax),
        })
    } else {
        Ok(Affinity::Affine { spread_x, spread_y })
    }
}
