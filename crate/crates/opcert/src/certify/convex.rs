//! Convexity and separable convex-concavity certification.

use super::{certify_monotone, Bound, Certificate, Check};
use crate::field::{ScalarField, VectorField};
use crate::geom::{Grid, GridSpec, Region};
use crate::sweep;
use crate::tolerances::{PAIR_SAMPLES, SEED};

/// Convexity via the Hessian criterion, cross-checked against monotonicity
/// of the gradient field on the same region and grid. The two routes are
/// recorded as separate checks; pass/fail agreement between them is itself
/// a check.
pub fn certify_convex(f: &ScalarField, region: Region, grid: GridSpec, tol: f64) -> Certificate {
    let g = Grid::new(region, grid);
    let property = "convex";

    let eigs = sweep::map_indexed(g.len(), |k| {
        f.jet(g.point(k)).map(|j| j.hessian().min_sym_eig())
    });
    let eigs = match sweep::first_error(eigs) {
        Ok(v) => v,
        Err((k, err)) => {
            return Certificate::indeterminate(
                property,
                f.name(),
                region,
                grid,
                tol,
                None,
                g.point(k),
                &err,
            )
        }
    };
    let e = sweep::extremes(&eigs);
    let hessian_check = Check::new(
        "hessian-psd",
        "min_hessian_eig",
        e.min,
        -tol,
        Bound::Lower,
        Some(g.point(e.argmin)),
        "minimum over the grid of the smallest Hessian eigenvalue",
    );

    let mono = certify_monotone(
        &VectorField::gradient(f.clone()),
        region,
        grid,
        PAIR_SAMPLES,
        SEED,
        tol,
    );
    let agreement = Check::new(
        "gradient-monotone-crosscheck",
        "agreement",
        if mono.pass == hessian_check.pass { 1.0 } else { 0.0 },
        1.0,
        Bound::Lower,
        None,
        format!(
            "certify_monotone(gradient) verdict: {:?}; must match the Hessian criterion",
            mono.verdict
        ),
    );

    Certificate::build(
        property,
        f.name(),
        region,
        grid,
        tol,
        None,
        vec![hessian_check, agreement],
        Vec::new(),
    )
}

/// Separable convex-concavity: min over the grid of f_xx >= -tol and max
/// of f_yy <= tol. This is the slot-wise second-derivative criterion; it is
/// sufficient for convex-concavity but not necessary, and the certificate
/// says so.
pub fn certify_convex_concave(
    f: &ScalarField,
    region: Region,
    grid: GridSpec,
    tol: f64,
) -> Certificate {
    let g = Grid::new(region, grid);
    let property = "convex-concave";

    let curvatures = sweep::map_indexed(g.len(), |k| {
        f.jet(g.point(k)).map(|j| (j.hxx, j.hyy))
    });
    let curvatures = match sweep::first_error(curvatures) {
        Ok(v) => v,
        Err((k, err)) => {
            return Certificate::indeterminate(
                property,
                f.name(),
                region,
                grid,
                tol,
                None,
                g.point(k),
                &err,
            )
        }
    };
    let xx: Vec<f64> = curvatures.iter().map(|c| c.0).collect();
    let yy: Vec<f64> = curvatures.iter().map(|c| c.1).collect();
    let ex = sweep::extremes(&xx);
    let ey = sweep::extremes(&yy);

    let checks = vec![
        Check::new(
            "x-slot-convex",
            "min_fxx",
            ex.min,
            -tol,
            Bound::Lower,
            Some(g.point(ex.argmin)),
            "minimum over the grid of f_xx",
        ),
        Check::new(
            "y-slot-concave",
            "max_fyy",
            ey.max,
            tol,
            Bound::Upper,
            Some(g.point(ey.argmax)),
            "maximum over the grid of f_yy",
        ),
    ];
    Certificate::build(
        property,
        f.name(),
        region,
        grid,
        tol,
        None,
        checks,
        vec![
            "separable criterion: slot-wise second derivatives; sufficient for convex-concavity, not necessary".to_string(),
        ],
    )
}

/// Per-point margin min(f_xx, -f_yy) for CSV dumps; nonnegative wherever
/// the separable criterion holds.
pub fn separable_margin_grid(f: &ScalarField, region: Region, grid: GridSpec) -> crate::Result<Vec<f64>> {
    let g = Grid::new(region, grid);
    let v = sweep::map_indexed(g.len(), |k| f.jet(g.point(k)).map(|j| j.hxx.min(-j.hyy)));
    sweep::first_error(v).map_err(|(_, e)| e)
}

/// Per-point Hessian minimum eigenvalue for CSV dumps.
pub fn hessian_eig_grid(f: &ScalarField, region: Region, grid: GridSpec) -> crate::Result<Vec<f64>> {
    let g = Grid::new(region, grid);
    let v = sweep::map_indexed(g.len(), |k| f.jet(g.point(k)).map(|j| j.hessian().min_sym_eig()));
    sweep::first_error(v).map_err(|(_, e)| e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::tolerances::TOL_EXACT;

    fn region() -> Region {
        Region::standard()
    }

    #[test]
    fn bowl_is_convex() {
        let cert = certify_convex(&builtin::bowl(), region(), GridSpec::default(), TOL_EXACT);
        assert!(cert.pass);
        assert_eq!(cert.check("hessian-psd").unwrap().observed, Some(2.0));
        assert!(cert.check("gradient-monotone-crosscheck").unwrap().pass);
    }

    #[test]
    fn saddle_potential_is_not_convex_but_routes_agree() {
        let cert = certify_convex(&builtin::f_plus(), region(), GridSpec::default(), TOL_EXACT);
        assert!(!cert.pass);
        let h = cert.check("hessian-psd").unwrap();
        assert!(!h.pass);
        assert!(h.observed.unwrap() < -1.0);
        assert!(h.witness.is_some());
        // both routes fail, so the cross-check itself passes
        assert!(cert.check("gradient-monotone-crosscheck").unwrap().pass);
    }

    #[test]
    fn quartic_is_convex_with_zero_margin_at_origin() {
        let f = ScalarField::parse("x^4 + y^4", "quartic").unwrap();
        let cert = certify_convex(
            &f,
            Region::new(-1.0, 1.0, -1.0, 1.0).unwrap(),
            GridSpec::default(),
            TOL_EXACT,
        );
        assert!(cert.pass);
        let h = cert.check("hessian-psd").unwrap();
        // Hessian diag(12x^2, 12y^2) has a zero eigenvalue on both axes;
        // the witness is the first such lattice point
        assert_eq!(h.observed, Some(0.0));
        let w = h.witness.unwrap();
        assert!(w.x == 0.0 || w.y == 0.0, "{w}");
    }

    #[test]
    fn builtin_pair_is_convex_concave_with_zero_margins() {
        for f in [builtin::f_plus(), builtin::f_minus()] {
            let cert = certify_convex_concave(&f, region(), GridSpec::default(), TOL_EXACT);
            assert!(cert.pass, "{}", f.name());
            assert_eq!(cert.check("x-slot-convex").unwrap().observed, Some(0.0));
            assert_eq!(cert.check("y-slot-concave").unwrap().observed, Some(0.0));
        }
    }

    #[test]
    fn bilinear_passes_separable_criterion_vacuously() {
        // f = x*y has f_xx = f_yy = 0: the separable check passes even
        // though the function is not convex-concave in any strict sense;
        // the certificate carries the sufficiency note.
        let f = ScalarField::parse("x*y", "bilinear").unwrap();
        let cert = certify_convex_concave(&f, region(), GridSpec::default(), TOL_EXACT);
        assert!(cert.pass);
        assert!(cert.notes.iter().any(|n| n.contains("sufficient")));
    }
}
