//! The coupled saddle family and the end-to-end additivity refutation.
//!
//! From a scalar coupling u(x, y), build the pair of saddle operators of
//! (x^2/2 + u - y^2/2) and (x^2/2 - u - y^2/2). Under the admissibility
//! bounds |u_xx| <= 1, |u_yy| <= 1 both operators are monotone; their sum
//! collapses to z -> 2z, the gradient of a strictly non-affine potential,
//! while each summand fails to be skew-affine whenever the mixed partial
//! u_xy is nonconstant. [`refute_additivity`] certifies every one of those
//! checkable steps and aggregates the evidence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certify::{
    certify_convex_concave, certify_gradient, certify_monotone, classify_affinity,
    reconstruct_potential, refute_skew_affine, Affinity, Bound, Certificate, Check,
    RefutationWitness, Verdict, SCHEMA_VERSION,
};
use crate::error::Result;
use crate::expr::{self, Expr};
use crate::field::{ScalarField, VectorField};
use crate::geom::{Grid, GridSpec, Region, Vec2};
use crate::sweep;
use crate::tolerances::{PAIR_SAMPLES, QUAD_STEP, SEED, TOL_EXACT, TOL_QUAD};

/// The family member for a coupling u: potentials f+/f- and their saddle
/// fields. F+(p) + F-(p) = 2p up to rounding, since the u terms cancel.
#[derive(Clone, Debug)]
pub struct FamilyPair {
    pub u: ScalarField,
    pub f_plus: ScalarField,
    pub f_minus: ScalarField,
    pub field_plus: VectorField,
    pub field_minus: VectorField,
}

impl FamilyPair {
    pub fn from_u_expr(u: Expr) -> Self {
        let u_text = u.to_string();
        let half_sq = |v: Expr| Expr::div(Expr::pow(v, 2), Expr::Num(2.0));
        let fp_expr = Expr::sub(
            Expr::add(half_sq(Expr::var_x()), u.clone()),
            half_sq(Expr::var_y()),
        );
        let fm_expr = Expr::sub(
            Expr::sub(half_sq(Expr::var_x()), u.clone()),
            half_sq(Expr::var_y()),
        );
        let f_plus = ScalarField::from_expr(fp_expr, format!("f+[u={u_text}]"));
        let f_minus = ScalarField::from_expr(fm_expr, format!("f-[u={u_text}]"));
        FamilyPair {
            u: ScalarField::from_expr(u, "u"),
            field_plus: VectorField::saddle(f_plus.clone()).with_name(format!("F+[u={u_text}]")),
            field_minus: VectorField::saddle(f_minus.clone()).with_name(format!("F-[u={u_text}]")),
            f_plus,
            f_minus,
        }
    }

    /// Pointwise sum of the pair; collapses to z -> 2z.
    pub fn sum_field(&self) -> VectorField {
        VectorField::sum(self.field_plus.clone(), self.field_minus.clone())
            .with_name("F+ + F- (family sum)")
    }
}

/// Parse a coupling expression and build the family member.
pub fn make_pair(u_text: &str) -> Result<FamilyPair> {
    Ok(FamilyPair::from_u_expr(expr::parse(u_text)?))
}

/// Admissibility of a coupling: max |u_xx| <= 1 + tol, max |u_yy| <= 1 + tol,
/// and the mixed partial u_xy must be nonconstant on the grid
/// (max - min > tol).
pub fn check_admissibility(
    u: &ScalarField,
    region: Region,
    grid: GridSpec,
    tol: f64,
) -> Certificate {
    let g = Grid::new(region, grid);
    let jets = sweep::map_indexed(g.len(), |k| u.jet(g.point(k)));
    let jets = match sweep::first_error(jets) {
        Ok(v) => v,
        Err((k, err)) => {
            return Certificate::indeterminate(
                "family-admissibility",
                u.name(),
                region,
                grid,
                tol,
                None,
                g.point(k),
                &err,
            )
        }
    };
    let abs_xx: Vec<f64> = jets.iter().map(|j| j.hxx.abs()).collect();
    let abs_yy: Vec<f64> = jets.iter().map(|j| j.hyy.abs()).collect();
    let xy: Vec<f64> = jets.iter().map(|j| j.hxy).collect();
    let exx = sweep::extremes(&abs_xx);
    let eyy = sweep::extremes(&abs_yy);
    let exy = sweep::extremes(&xy);
    let spread = exy.max - exy.min;

    let checks = vec![
        Check::new(
            "xx-curvature-bound",
            "max_abs_uxx",
            exx.max,
            1.0 + tol,
            Bound::Upper,
            Some(g.point(exx.argmax)),
            "maximum over the grid of |u_xx|",
        ),
        Check::new(
            "yy-curvature-bound",
            "max_abs_uyy",
            eyy.max,
            1.0 + tol,
            Bound::Upper,
            Some(g.point(eyy.argmax)),
            "maximum over the grid of |u_yy|",
        ),
        Check::new(
            "mixed-partial-nonconstant",
            "uxy_spread",
            spread,
            tol,
            Bound::StrictLower,
            Some(g.point(exy.argmax)),
            format!(
                "spread of u_xy over the grid; extremes at ({}, {}) and ({}, {})",
                g.point(exy.argmin).x,
                g.point(exy.argmin).y,
                g.point(exy.argmax).x,
                g.point(exy.argmax).y
            ),
        ),
    ];
    let mut notes = Vec::new();
    if spread <= tol {
        notes.push("degenerate family member: mixed partial is constant on the grid".to_string());
    }
    Certificate::build(
        "family-admissibility",
        u.name(),
        region,
        grid,
        tol,
        None,
        checks,
        notes,
    )
}

/// Knobs for the refutation pipeline; defaults match the library defaults.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineConfig {
    pub tol_exact: f64,
    pub tol_quad: f64,
    pub pair_samples: usize,
    pub seed: u64,
    pub quad_step: f64,
    pub refute_threshold: f64,
    pub a_search: Option<(f64, f64)>,
    pub anchor: Vec2,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tol_exact: TOL_EXACT,
            tol_quad: TOL_QUAD,
            pair_samples: PAIR_SAMPLES,
            seed: SEED,
            quad_step: QUAD_STEP,
            refute_threshold: TOL_QUAD,
            a_search: None,
            anchor: Vec2::ZERO,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineVerdict {
    CounterexampleCertified,
    Failed,
    Indeterminate,
}

/// Compact view of a reconstructed potential for the aggregate report.
#[derive(Clone, Debug, Serialize)]
pub struct PotentialSummary {
    pub anchor: Vec2,
    pub quad_step: f64,
    pub effective_step_max: f64,
    pub gradient_match_sup: f64,
    pub min_value: f64,
    pub max_value: f64,
}

/// Aggregate evidence for one family member. The verdict is
/// counterexample-certified iff every stage passes and both refutations
/// succeed; `first_failed` names the earliest failing check in pipeline
/// order.
#[derive(Clone, Debug, Serialize)]
pub struct AdditivityCertificate {
    pub schema_version: u32,
    pub u_source: String,
    pub region: Region,
    pub grid: GridSpec,
    pub config: PipelineConfig,
    pub admissibility: Certificate,
    pub convex_concave_plus: Certificate,
    pub convex_concave_minus: Certificate,
    pub monotone_plus: Certificate,
    pub monotone_minus: Certificate,
    pub gradient_sum: Certificate,
    pub potential: Option<PotentialSummary>,
    pub affinity: Option<Affinity>,
    pub refutation_plus: Option<RefutationWitness>,
    pub refutation_minus: Option<RefutationWitness>,
    pub notes: Vec<String>,
    pub first_failed: Option<String>,
    pub verdict: PipelineVerdict,
}

/// Run the whole checkable pipeline for the family member built from
/// `u_text`: admissibility, convex-concavity of both potentials,
/// monotonicity of both saddle fields, gradient structure and potential of
/// the sum with affinity classification, and skew-affinity refutation of
/// both summands.
pub fn refute_additivity(
    u_text: &str,
    region: Region,
    grid: GridSpec,
    config: PipelineConfig,
) -> Result<AdditivityCertificate> {
    let pair = make_pair(u_text)?;
    let sum = pair.sum_field();
    let mut notes = Vec::new();

    let admissibility = check_admissibility(&pair.u, region, grid, config.tol_exact);
    let convex_concave_plus =
        certify_convex_concave(&pair.f_plus, region, grid, config.tol_exact);
    let convex_concave_minus =
        certify_convex_concave(&pair.f_minus, region, grid, config.tol_exact);
    let monotone_plus = certify_monotone(
        &pair.field_plus,
        region,
        grid,
        config.pair_samples,
        config.seed,
        config.tol_exact,
    );
    let monotone_minus = certify_monotone(
        &pair.field_minus,
        region,
        grid,
        config.pair_samples,
        config.seed,
        config.tol_exact,
    );
    let gradient_sum = certify_gradient(&sum, region, grid, config.tol_exact);

    let mut potential = None;
    let mut affinity = None;
    if gradient_sum.pass {
        match reconstruct_potential(
            &sum,
            region,
            grid,
            config.anchor,
            config.quad_step,
            config.tol_quad,
        ) {
            Ok(table) => {
                let e = sweep::extremes(&table.values);
                potential = Some(PotentialSummary {
                    anchor: table.anchor,
                    quad_step: table.quad_step,
                    effective_step_max: table.effective_step_max,
                    gradient_match_sup: table.gradient_match_sup,
                    min_value: e.min,
                    max_value: e.max,
                });
                match classify_affinity(&table, &sum, config.tol_quad) {
                    Ok(a) => affinity = Some(a),
                    Err(e) => notes.push(format!("affinity classification failed: {e}")),
                }
            }
            Err(e) => notes.push(format!("potential reconstruction failed: {e}")),
        }
    } else {
        notes.push("potential reconstruction skipped: sum is not curl-free".to_string());
    }

    let mut refutation = |field: &VectorField| match refute_skew_affine(
        field,
        region,
        grid,
        config.a_search,
        config.refute_threshold,
    ) {
        Ok(w) => Some(w),
        Err(e) => {
            notes.push(format!("refutation of {} failed to run: {e}", field.name()));
            None
        }
    };
    let refutation_plus = refutation(&pair.field_plus);
    let refutation_minus = refutation(&pair.field_minus);

    // walk everything in pipeline order for the verdict
    let mut first_failed = None;
    let mut indeterminate = false;
    let mut all_pass = true;
    {
        let mut visit_cert = |stage: &str, cert: &Certificate| {
            if cert.verdict == Verdict::Indeterminate {
                indeterminate = true;
            }
            for check in &cert.checks {
                if !check.pass {
                    all_pass = false;
                    if first_failed.is_none() {
                        first_failed = Some(format!("{stage}/{}", check.id));
                    }
                }
            }
        };
        visit_cert("admissibility", &admissibility);
        visit_cert("convex-concave-plus", &convex_concave_plus);
        visit_cert("convex-concave-minus", &convex_concave_minus);
        visit_cert("monotone-plus", &monotone_plus);
        visit_cert("monotone-minus", &monotone_minus);
        visit_cert("gradient-sum", &gradient_sum);
    }
    let mut visit_flag = |stage: &str, ok: Option<bool>| match ok {
        Some(true) => {}
        Some(false) => {
            all_pass = false;
            if first_failed.is_none() {
                first_failed = Some(stage.to_string());
            }
        }
        None => indeterminate = true,
    };
    visit_flag(
        "potential/gradient-match",
        potential
            .as_ref()
            .map(|p| p.gradient_match_sup <= 10.0 * config.tol_quad),
    );
    visit_flag("affinity/non-affine", affinity.as_ref().map(|a| !a.is_affine()));
    visit_flag(
        "refutation-plus/refuted",
        refutation_plus.as_ref().map(|w| w.refuted),
    );
    visit_flag(
        "refutation-minus/refuted",
        refutation_minus.as_ref().map(|w| w.refuted),
    );

    let verdict = if indeterminate {
        PipelineVerdict::Indeterminate
    } else if all_pass {
        PipelineVerdict::CounterexampleCertified
    } else {
        PipelineVerdict::Failed
    };

    Ok(AdditivityCertificate {
        schema_version: SCHEMA_VERSION,
        u_source: u_text.to_string(),
        region,
        grid,
        config,
        admissibility,
        convex_concave_plus,
        convex_concave_minus,
        monotone_plus,
        monotone_minus,
        gradient_sum,
        potential,
        affinity,
        refutation_plus,
        refutation_minus,
        notes,
        first_failed,
        verdict,
    })
}

/// Deterministic sampler of admissible couplings: trigonometric polynomials
/// with frequencies up to 3, rescaled by 1.05x the max grid curvature so
/// |u_xx|, |u_yy| stay strictly below 1 between lattice points as well.
/// Sample k depends only on (seed, k).
pub fn sample_admissible_u(seed: u64, index: u64) -> Expr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let fine = Grid::new(Region::standard(), GridSpec::default());

    for _attempt in 0..32 {
        let n_terms = rng.random_range(2..=4usize);
        let mut terms = Vec::with_capacity(n_terms);
        for _ in 0..n_terms {
            let amp = {
                let magnitude = rng.random_range(0.2..1.0f64);
                if rng.random::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            };
            let jx = rng.random_range(1..=3u32);
            let jy = rng.random_range(1..=3u32);
            let trig = |sin: bool, freq: u32, v: Expr| {
                let arg = if freq == 1 {
                    v
                } else {
                    Expr::mul(Expr::num(freq as f64), v)
                };
                if sin {
                    Expr::call(expr::Func::Sin, arg)
                } else {
                    Expr::call(expr::Func::Cos, arg)
                }
            };
            let sx = rng.random::<bool>();
            let sy = rng.random::<bool>();
            terms.push(Expr::mul(
                Expr::num(amp),
                Expr::mul(trig(sx, jx, Expr::var_x()), trig(sy, jy, Expr::var_y())),
            ));
        }
        let raw = terms
            .into_iter()
            .reduce(Expr::add)
            .expect("at least one term");

        let mut curvature_max = 0.0f64;
        let mut xy_min = f64::INFINITY;
        let mut xy_max = f64::NEG_INFINITY;
        for k in 0..fine.len() {
            let j = raw.eval_jet(fine.point(k)).expect("trig polynomials are total");
            curvature_max = curvature_max.max(j.hxx.abs()).max(j.hyy.abs());
            xy_min = xy_min.min(j.hxy);
            xy_max = xy_max.max(j.hxy);
        }
        if curvature_max == 0.0 {
            continue;
        }
        let scale = 1.0 / (1.05 * curvature_max);
        if (xy_max - xy_min) * scale <= 0.05 {
            continue;
        }
        return Expr::mul(Expr::num(scale), raw);
    }
    unreachable!("admissible coupling sampler failed 32 deterministic attempts");
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn coarse() -> (Region, GridSpec) {
        (Region::standard(), GridSpec::new(33, 33).unwrap())
    }

    #[test]
    fn built_in_coupling_reproduces_closed_forms() {
        let pair = make_pair("sin(x)*sin(y)").unwrap();
        let p = Vec2::new(FRAC_PI_2, 0.0);
        let vp = pair.field_plus.value(p).unwrap();
        let vm = pair.field_minus.value(p).unwrap();
        assert!((vp - Vec2::new(FRAC_PI_2, -1.0)).norm_inf() < 1e-15);
        assert!((vm - Vec2::new(FRAC_PI_2, 1.0)).norm_inf() < 1e-15);
        let s = vp + vm;
        assert!((s - Vec2::new(std::f64::consts::PI, 0.0)).norm_inf() < 1e-15);
    }

    #[test]
    fn zero_coupling_gives_identity_pair() {
        let pair = make_pair("0").unwrap();
        for &(x, y) in &[(0.0, 0.0), (1.0, -2.0), (0.25, 0.75)] {
            let p = Vec2::new(x, y);
            assert_eq!(pair.field_plus.value(p).unwrap(), p);
            assert_eq!(pair.field_minus.value(p).unwrap(), p);
        }
    }

    #[test]
    fn sum_collapses_for_any_coupling() {
        let pair = make_pair("0.3*sin(2*x)*cos(y) - 0.2*cos(x)*cos(3*y)").unwrap();
        let sum = pair.sum_field();
        for k in 0..10_000u64 {
            let p = crate::sample::point_in(&Region::standard(), 0, k);
            let v = sum.value(p).unwrap();
            assert!((v - p * 2.0).norm_inf() <= 1e-14, "at {p}: {v}");
        }
    }

    #[test]
    fn admissibility_of_the_built_in_coupling() {
        let u = ScalarField::parse("sin(x)*sin(y)", "u").unwrap();
        let cert = check_admissibility(&u, Region::standard(), GridSpec::default(), TOL_EXACT);
        assert!(cert.pass);
        assert_eq!(cert.check("xx-curvature-bound").unwrap().observed, Some(1.0));
        let spread = cert.check("mixed-partial-nonconstant").unwrap().observed.unwrap();
        assert!((spread - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quartic_coupling_violates_curvature_bounds() {
        let u = ScalarField::parse("x^2*y^2", "u").unwrap();
        let cert = check_admissibility(&u, Region::standard(), GridSpec::default(), TOL_EXACT);
        assert!(!cert.pass);
        let xx = cert.check("xx-curvature-bound").unwrap();
        assert!(!xx.pass);
        // u_xx = 2y^2 peaks at y = +/- pi
        let expected = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
        assert!((xx.observed.unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn zero_coupling_fails_only_nonconstancy() {
        let u = ScalarField::parse("0", "u").unwrap();
        let cert = check_admissibility(&u, Region::standard(), GridSpec::default(), TOL_EXACT);
        assert!(!cert.pass);
        assert!(cert.check("xx-curvature-bound").unwrap().pass);
        assert!(cert.check("yy-curvature-bound").unwrap().pass);
        assert!(!cert.check("mixed-partial-nonconstant").unwrap().pass);
        assert!(cert.notes.iter().any(|n| n.contains("degenerate")));
    }

    #[test]
    fn negating_the_coupling_swaps_the_pair_exactly() {
        let u = expr::parse("0.5*sin(x)*sin(2*y)").unwrap();
        let a = FamilyPair::from_u_expr(u.clone());
        let b = FamilyPair::from_u_expr(Expr::neg(u));
        for k in 0..1000u64 {
            let p = crate::sample::point_in(&Region::standard(), 1, k);
            assert_eq!(
                a.field_plus.value(p).unwrap(),
                b.field_minus.value(p).unwrap()
            );
            assert_eq!(
                a.field_minus.value(p).unwrap(),
                b.field_plus.value(p).unwrap()
            );
        }
    }

    #[test]
    fn pipeline_certifies_the_built_in_coupling() {
        let (region, grid) = coarse();
        let config = PipelineConfig {
            pair_samples: 2000,
            quad_step: 1e-2,
            ..PipelineConfig::default()
        };
        let cert = refute_additivity("sin(x)*sin(y)", region, grid, config).unwrap();
        assert_eq!(cert.verdict, PipelineVerdict::CounterexampleCertified);
        assert_eq!(cert.first_failed, None);
        let wp = cert.refutation_plus.as_ref().unwrap();
        assert!((wp.min_sup_residual - 2.0).abs() < 1e-6);
    }

    #[test]
    fn pipeline_flags_zero_coupling_at_nonconstancy() {
        let (region, grid) = coarse();
        let config = PipelineConfig {
            pair_samples: 1000,
            quad_step: 1e-2,
            ..PipelineConfig::default()
        };
        let cert = refute_additivity("0", region, grid, config).unwrap();
        assert_eq!(cert.verdict, PipelineVerdict::Failed);
        assert_eq!(
            cert.first_failed.as_deref(),
            Some("admissibility/mixed-partial-nonconstant")
        );
        // every stage before the refutations still passes
        assert!(cert.convex_concave_plus.pass);
        assert!(cert.monotone_plus.pass);
        assert!(cert.gradient_sum.pass);
    }

    #[test]
    fn half_amplitude_coupling_has_unit_residual() {
        let (region, grid) = coarse();
        let config = PipelineConfig {
            pair_samples: 1000,
            quad_step: 1e-2,
            ..PipelineConfig::default()
        };
        let cert = refute_additivity("0.5*sin(x)*sin(y)", region, grid, config).unwrap();
        assert_eq!(cert.verdict, PipelineVerdict::CounterexampleCertified);
        let w = cert.refutation_plus.as_ref().unwrap();
        assert!((w.min_sup_residual - 1.0).abs() < 1e-6, "{w:?}");
    }

    #[test]
    fn sampler_yields_admissible_couplings() {
        for k in 0..5 {
            let u = sample_admissible_u(42, k);
            let field = ScalarField::from_expr(u, "u");
            let cert =
                check_admissibility(&field, Region::standard(), GridSpec::default(), TOL_EXACT);
            assert!(cert.pass, "sample {k}: {:?}", cert.first_failed());
        }
    }

    #[test]
    fn sum_identity_across_sampled_couplings() {
        // the +/- coupling terms cancel pointwise for every family member
        let region = Region::standard();
        for k in 0..20u64 {
            let u = sample_admissible_u(3, k);
            let pair = FamilyPair::from_u_expr(u);
            let sum = pair.sum_field();
            let mut worst = 0.0f64;
            for i in 0..10_000u64 {
                let p = crate::sample::point_in(&region, 3, i);
                worst = worst.max((sum.value(p).unwrap() - p * 2.0).norm_inf());
            }
            assert!(worst <= 1e-12, "coupling {k}: sum identity off by {worst:e}");
        }
    }
}
