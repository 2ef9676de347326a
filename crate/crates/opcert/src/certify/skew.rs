//! Skew-affine structure: least-squares fit of the model
//! z -> (a y + b1, -a x + b2), and its refutation through the
//! integrability residual.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::geom::{Grid, GridSpec, Region, Vec2};
use crate::sweep;

/// Least-squares parameters of the planar skew-affine model, with fit
/// residuals over the grid.
#[derive(Clone, Debug, Serialize)]
pub struct SkewAffineFit {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub rms_residual: f64,
    pub max_residual: f64,
}

/// Closed-form normal equations for min_a,b sum_p |F(p) - (a p_y + b1, -a p_x + b2)|^2.
///
/// Centering the data decouples the system: the offset absorbs the means
/// and `a` solves a scalar equation whose denominator is the grid variance,
/// positive for every valid region. A zero denominator (unreachable through
/// validated regions) falls back to the minimal-norm solution a = 0.
pub fn fit_skew_affine(field: &VectorField, region: Region, grid: GridSpec) -> Result<SkewAffineFit> {
    let g = Grid::new(region, grid);
    let n = g.len() as f64;
    let samples = sweep::map_indexed(g.len(), |k| {
        let p = g.point(k);
        field.value(p).map(|v| (p, v))
    });
    let samples = sweep::first_error(samples).map_err(|(_, e)| e)?;

    let mut mx = 0.0;
    let mut my = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (p, v) in &samples {
        mx += p.x;
        my += p.y;
        m1 += v.x;
        m2 += v.y;
    }
    mx /= n;
    my /= n;
    m1 /= n;
    m2 /= n;

    let mut cov_y_f1 = 0.0;
    let mut cov_x_f2 = 0.0;
    let mut var = 0.0;
    for (p, v) in &samples {
        let dx = p.x - mx;
        let dy = p.y - my;
        cov_y_f1 += dy * (v.x - m1);
        cov_x_f2 += dx * (v.y - m2);
        var += dx * dx + dy * dy;
    }
    let a = if var > 0.0 { (cov_y_f1 - cov_x_f2) / var } else { 0.0 };
    let b1 = m1 - a * my;
    let b2 = m2 + a * mx;

    let mut ssr = 0.0;
    let mut max_residual = 0.0f64;
    for (p, v) in &samples {
        let model = Vec2::new(a * p.y + b1, -a * p.x + b2);
        let r = (*v - model).norm();
        ssr += r * r;
        max_residual = max_residual.max(r);
    }
    Ok(SkewAffineFit {
        a,
        b1,
        b2,
        rms_residual: (ssr / n).sqrt(),
        max_residual,
    })
}

/// Outcome of the skew-affinity refutation.
#[derive(Clone, Debug, Serialize)]
pub struct RefutationWitness {
    pub best_a: f64,
    pub min_sup_residual: f64,
    /// Grid point where the Jacobian asymmetry attains its minimum.
    pub p_lo: Vec2,
    /// Grid point where the Jacobian asymmetry attains its maximum.
    pub p_hi: Vec2,
    pub a_search: (f64, f64),
    pub threshold: f64,
    /// True when no skew shift can make the remainder a gradient:
    /// min_sup_residual > threshold.
    pub refuted: bool,
}

/// Minimize over `a` the sup over the grid of the integrability residual of
/// F - skew(a), which is |J12 - J21 - 2a|. The default search interval is
/// [-(Amax + 1), Amax + 1] with Amax = max |J12| over the grid, wide enough
/// that the minimax `a` is interior for bounded mixed partials.
pub fn refute_skew_affine(
    field: &VectorField,
    region: Region,
    grid: GridSpec,
    a_search: Option<(f64, f64)>,
    threshold: f64,
) -> Result<RefutationWitness> {
    let g = Grid::new(region, grid);
    let jacobians = sweep::map_indexed(g.len(), |k| field.jacobian(g.point(k)));
    let jacobians = sweep::first_error(jacobians).map_err(|(_, e)| e)?;

    let asym: Vec<f64> = jacobians.iter().map(|j| j.asymmetry()).collect();
    let e = sweep::extremes(&asym);
    let (vmin, vmax) = (e.min, e.max);
    let (p_lo, p_hi) = (g.point(e.argmin), g.point(e.argmax));

    let (lo, hi) = match a_search {
        Some((lo, hi)) => {
            if !(lo < hi) {
                return Err(Error::EmptySearch { lo, hi });
            }
            (lo, hi)
        }
        None => {
            let amax = jacobians.iter().fold(0.0f64, |m, j| m.max(j.a12.abs()));
            (-(amax + 1.0), amax + 1.0)
        }
    };

    // |v - 2a| is convex in v, so the sup over the grid is attained at the
    // asymmetry extremes; the scan and refinement only need those two.
    let sup_residual = |a: f64| (vmin - 2.0 * a).abs().max((vmax - 2.0 * a).abs());

    // coarse scan
    let scan_n = 129;
    let mut best_k = 0;
    let mut best = f64::INFINITY;
    for k in 0..scan_n {
        let a = lo + (hi - lo) * k as f64 / (scan_n - 1) as f64;
        let r = sup_residual(a);
        if r < best {
            best = r;
            best_k = k;
        }
    }
    let step = (hi - lo) / (scan_n - 1) as f64;
    let mut a_lo = (lo + step * (best_k as f64 - 1.0)).max(lo);
    let mut a_hi = (lo + step * (best_k as f64 + 1.0)).min(hi);

    // golden-section refinement; the residual is convex piecewise-linear
    const INV_PHI: f64 = 0.618033988749894_8;
    let mut c = a_hi - INV_PHI * (a_hi - a_lo);
    let mut d = a_lo + INV_PHI * (a_hi - a_lo);
    let mut fc = sup_residual(c);
    let mut fd = sup_residual(d);
    while a_hi - a_lo > 1e-12 {
        if fc < fd {
            a_hi = d;
            d = c;
            fd = fc;
            c = a_hi - INV_PHI * (a_hi - a_lo);
            fc = sup_residual(c);
        } else {
            a_lo = c;
            c = d;
            fc = fd;
            d = a_lo + INV_PHI * (a_hi - a_lo);
            fd = sup_residual(d);
        }
    }
    let best_a = 0.5 * (a_lo + a_hi);
    let min_sup_residual = sup_residual(best_a);

    Ok(RefutationWitness {
        best_a,
        min_sup_residual,
        p_lo,
        p_hi,
        a_search: (lo, hi),
        threshold,
        refuted: min_sup_residual > threshold,
    })
}

/// Per-point Jacobian asymmetry J12 - J21 for CSV dumps.
pub fn asymmetry_signed_grid(
    field: &VectorField,
    region: Region,
    grid: GridSpec,
) -> Result<Vec<f64>> {
    let g = Grid::new(region, grid);
    let v = sweep::map_indexed(g.len(), |k| field.jacobian(g.point(k)).map(|j| j.asymmetry()));
    sweep::first_error(v).map_err(|(_, e)| e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::tolerances::TOL_QUAD;

    fn unit_box() -> Region {
        Region::new(-1.0, 1.0, -1.0, 1.0).unwrap()
    }

    #[test]
    fn exact_member_recovered() {
        let field = builtin::skew_affine(1.0, Vec2::new(1.0, 0.0));
        let fit = fit_skew_affine(&field, unit_box(), GridSpec::new(65, 65).unwrap()).unwrap();
        assert!((fit.a - 1.0).abs() < 1e-12);
        assert!((fit.b1 - 1.0).abs() < 1e-12);
        assert!(fit.b2.abs() < 1e-12);
        assert!(fit.max_residual <= 1e-12);
    }

    #[test]
    fn identity_field_is_orthogonal_to_the_skew_model() {
        let fit = fit_skew_affine(
            &builtin::identity_field(),
            unit_box(),
            GridSpec::new(65, 65).unwrap(),
        )
        .unwrap();
        assert!(fit.a.abs() < 1e-14);
        assert!(fit.b1.abs() < 1e-14);
        assert!(fit.b2.abs() < 1e-14);
        assert!(fit.max_residual > 1.0); // residual at the corners is |(1,1)|
    }

    #[test]
    fn saddle_operator_has_positive_fit_residual() {
        let fit = fit_skew_affine(
            &builtin::field_plus(),
            Region::standard(),
            GridSpec::default(),
        )
        .unwrap();
        assert!(fit.max_residual > 1.0, "{fit:?}");
    }

    #[test]
    fn refutation_on_standard_box() {
        let w = refute_skew_affine(
            &builtin::field_plus(),
            Region::standard(),
            GridSpec::default(),
            Some((-2.0, 2.0)),
            TOL_QUAD,
        )
        .unwrap();
        assert!((w.min_sup_residual - 2.0).abs() < 1e-6, "{w:?}");
        assert!(w.best_a.abs() < 1e-6);
        assert!(w.refuted);
    }

    #[test]
    fn default_search_interval_comes_from_mixed_partial_range() {
        let w = refute_skew_affine(
            &builtin::field_plus(),
            Region::standard(),
            GridSpec::default(),
            None,
            TOL_QUAD,
        )
        .unwrap();
        // Amax = max |J12| = max |cos x cos y| = 1
        assert_eq!(w.a_search, (-2.0, 2.0));
        assert!(w.refuted);
    }

    #[test]
    fn pure_rotation_is_skew_affine_and_not_refuted() {
        let field = builtin::skew_affine(1.0, Vec2::ZERO);
        let w = refute_skew_affine(
            &field,
            Region::standard(),
            GridSpec::default(),
            Some((-2.0, 2.0)),
            TOL_QUAD,
        )
        .unwrap();
        assert!(w.min_sup_residual.abs() < 1e-9);
        assert!((w.best_a - 1.0).abs() < 1e-6);
        assert!(!w.refuted);
    }

    #[test]
    fn empty_search_interval_is_an_error() {
        let err = refute_skew_affine(
            &builtin::field_plus(),
            Region::standard(),
            GridSpec::default(),
            Some((1.0, 1.0)),
            TOL_QUAD,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptySearch { .. }));
    }

    #[test]
    fn shift_does_not_change_the_refutation() {
        let base = builtin::field_plus();
        let shifted = VectorField::shift(base.clone(), Vec2::new(4.0, -7.0));
        let spec = GridSpec::new(65, 65).unwrap();
        let w1 = refute_skew_affine(&base, unit_box(), spec, Some((-2.0, 2.0)), TOL_QUAD).unwrap();
        let w2 =
            refute_skew_affine(&shifted, unit_box(), spec, Some((-2.0, 2.0)), TOL_QUAD).unwrap();
        assert_eq!(w1.best_a, w2.best_a);
        assert_eq!(w1.min_sup_residual, w2.min_sup_residual);
    }
}
