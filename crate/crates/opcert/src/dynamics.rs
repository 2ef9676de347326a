//! Minimal extragradient zero-finder, demonstrating that certified fields
//! plug into standard variational-inequality machinery.

use serde::Serialize;

use crate::error::Result;
use crate::field::VectorField;
use crate::geom::{Grid, GridSpec, Region, Vec2};
use crate::sweep;

#[derive(Clone, Debug, Serialize)]
pub struct SolveTrace {
    pub start: Vec2,
    pub final_point: Vec2,
    /// Infinity norm of F at the final point.
    pub final_residual: f64,
    pub iterations: usize,
    pub step_size: f64,
    pub converged: bool,
    /// Thinned iterate history (iteration, point, residual) when requested.
    pub iterates: Option<Vec<(usize, Vec2, f64)>>,
}

/// Max over the default-region grid of the Jacobian's Frobenius norm; an
/// upper bound on the operator norm, used for the constant step size.
pub fn lipschitz_estimate(field: &VectorField, region: Region, grid: GridSpec) -> Result<f64> {
    let g = Grid::new(region, grid);
    let norms = sweep::map_indexed(g.len(), |k| {
        field.jacobian(g.point(k)).map(|j| j.frobenius_norm())
    });
    let norms = sweep::first_error(norms).map_err(|(_, e)| e)?;
    Ok(norms.iter().fold(0.0f64, |m, &v| m.max(v)))
}

/// Extragradient iteration z <- z - eta F(z - eta F(z)) with constant step
/// eta = 1/(2L), L estimated on the default region grid. Stops when
/// |F(z)|_inf <= tol; hitting `max_iter` returns the trace flagged
/// unconverged rather than an error.
pub fn extragradient(
    field: &VectorField,
    start: Vec2,
    tol: f64,
    max_iter: usize,
    keep_every: Option<usize>,
) -> Result<SolveTrace> {
    let lipschitz = lipschitz_estimate(field, Region::standard(), GridSpec::default())?;
    let eta = 1.0 / (2.0 * lipschitz.max(f64::MIN_POSITIVE));

    let mut z = start;
    let mut history = keep_every.map(|_| Vec::new());
    let mut iterations = 0;
    let mut residual = field.value(z)?.norm_inf();
    while residual > tol && iterations < max_iter {
        if let (Some(h), Some(every)) = (history.as_mut(), keep_every) {
            if iterations % every == 0 {
                h.push((iterations, z, residual));
            }
        }
        let half = z - field.value(z)? * eta;
        z = z - field.value(half)? * eta;
        residual = field.value(z)?.norm_inf();
        iterations += 1;
    }
    if let Some(h) = history.as_mut() {
        h.push((iterations, z, residual));
    }
    Ok(SolveTrace {
        start,
        final_point: z,
        final_residual: residual,
        iterations,
        step_size: eta,
        converged: residual <= tol,
        iterates: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn saddle_operator_reaches_its_zero_at_the_origin() {
        let trace =
            extragradient(&builtin::field_plus(), Vec2::new(1.0, 1.0), 1e-8, 100_000, None)
                .unwrap();
        assert!(trace.converged);
        assert!(trace.final_residual <= 1e-8);
        assert!(trace.final_point.norm_inf() <= 1e-6, "{:?}", trace.final_point);
        // eta = 1/(2 L) with L = 2 on the standard grid
        assert!((trace.step_size - 0.25).abs() < 1e-12);
    }

    #[test]
    fn identity_field_residual_decreases_strictly() {
        let trace = extragradient(
            &builtin::identity_field(),
            Vec2::new(5.0, -3.0),
            1e-10,
            10_000,
            Some(1),
        )
        .unwrap();
        assert!(trace.converged);
        assert!(trace.final_point.norm_inf() < 1e-9);
        let h = trace.iterates.unwrap();
        for w in h.windows(2) {
            assert!(w[1].2 < w[0].2, "residual did not decrease: {w:?}");
        }
    }

    #[test]
    fn pure_rotation_converges() {
        let skew = builtin::skew_affine(1.0, Vec2::ZERO);
        let trace = extragradient(&skew, Vec2::new(1.0, 0.0), 1e-8, 100_000, None).unwrap();
        assert!(trace.converged);
        assert!(trace.final_residual <= 1e-8);
    }

    #[test]
    fn iteration_cap_flags_unconverged() {
        let trace =
            extragradient(&builtin::field_plus(), Vec2::new(1.0, 1.0), 1e-8, 3, None).unwrap();
        assert!(!trace.converged);
        assert_eq!(trace.iterations, 3);
    }

    #[test]
    fn trace_is_deterministic() {
        let a = extragradient(&builtin::field_plus(), Vec2::new(0.7, -0.2), 1e-9, 50_000, Some(10))
            .unwrap();
        let b = extragradient(&builtin::field_plus(), Vec2::new(0.7, -0.2), 1e-9, 50_000, Some(10))
            .unwrap();
        assert_eq!(a.final_point, b.final_point);
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.iterates, b.iterates);
    }
}
