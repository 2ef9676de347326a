//! Built-in fields: the coupled saddle pair F+/F-, their potentials, and
//! reference fields used throughout certification.
//!
//! F+ and F- come in two constructions that must agree: a hard-coded closed
//! form with a hand-differentiated Jacobian, and the saddle field of the
//! parsed defining expression. Tests hold the two within 1e-14 of each
//! other, which guards transcription of the closed forms.

use crate::field::{ScalarField, VectorField};
use crate::geom::{Mat2, Vec2};

pub const F_PLUS_EXPR: &str = "x^2/2 + sin(x)*sin(y) - y^2/2";
pub const F_MINUS_EXPR: &str = "x^2/2 - sin(x)*sin(y) - y^2/2";

/// f+(x, y) = x^2/2 + sin x sin y - y^2/2 (convex in x, concave in y).
pub fn f_plus() -> ScalarField {
    ScalarField::parse(F_PLUS_EXPR, "f+").expect("constant expression parses")
}

/// f-(x, y) = x^2/2 - sin x sin y - y^2/2.
pub fn f_minus() -> ScalarField {
    ScalarField::parse(F_MINUS_EXPR, "f-").expect("constant expression parses")
}

/// The separable bowl x^2 + y^2, whose gradient is (2x, 2y).
pub fn bowl() -> ScalarField {
    ScalarField::parse("x^2 + y^2", "x^2 + y^2").expect("constant expression parses")
}

/// F+(x, y) = (x + cos x sin y, y - sin x cos y), closed form.
pub fn field_plus() -> VectorField {
    VectorField::closed_with_jacobian(
        "F+",
        |p: Vec2| Vec2::new(p.x + p.x.cos() * p.y.sin(), p.y - p.x.sin() * p.y.cos()),
        |p: Vec2| {
            let s = p.x.sin() * p.y.sin();
            let c = p.x.cos() * p.y.cos();
            Mat2::new(1.0 - s, c, -c, 1.0 + s)
        },
    )
}

/// F-(x, y) = (x - cos x sin y, y + sin x cos y), closed form.
pub fn field_minus() -> VectorField {
    VectorField::closed_with_jacobian(
        "F-",
        |p: Vec2| Vec2::new(p.x - p.x.cos() * p.y.sin(), p.y + p.x.sin() * p.y.cos()),
        |p: Vec2| {
            let s = p.x.sin() * p.y.sin();
            let c = p.x.cos() * p.y.cos();
            Mat2::new(1.0 + s, -c, c, 1.0 - s)
        },
    )
}

/// F+ built independently as the saddle field of the parsed expression.
pub fn field_plus_saddle() -> VectorField {
    VectorField::saddle(f_plus())
}

/// F- built independently as the saddle field of the parsed expression.
pub fn field_minus_saddle() -> VectorField {
    VectorField::saddle(f_minus())
}

/// The identity field z -> z.
pub fn identity_field() -> VectorField {
    VectorField::closed_with_jacobian("identity", |p: Vec2| p, |_| Mat2::identity())
}

/// F+ + F-, which collapses to z -> 2z pointwise.
pub fn field_sum() -> VectorField {
    VectorField::sum(field_plus(), field_minus()).with_name("F+ + F-")
}

/// A skew-affine field z -> (a y + b1, -a x + b2).
pub fn skew_affine(a: f64, b: Vec2) -> VectorField {
    VectorField::closed_with_jacobian(
        format!("skew(a={a}, b=({}, {}))", b.x, b.y),
        move |p: Vec2| Vec2::new(a * p.y + b.x, -a * p.x + b.y),
        move |_| Mat2::skew(a),
    )
}

/// A constant field z -> c.
pub fn constant_field(c: Vec2) -> VectorField {
    VectorField::closed_with_jacobian(
        format!("constant({}, {})", c.x, c.y),
        move |_| c,
        |_| Mat2::zero(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Region;
    use crate::sample;

    #[test]
    fn closed_forms_agree_with_saddle_construction() {
        let region = Region::standard();
        for (closed, saddle) in [
            (field_plus(), field_plus_saddle()),
            (field_minus(), field_minus_saddle()),
        ] {
            for k in 0..10_000 {
                let p = sample::point_in(&region, 0, k);
                let a = closed.value(p).unwrap();
                let b = saddle.value(p).unwrap();
                assert!((a - b).norm_inf() <= 1e-14, "value mismatch at {p}");
                let ja = closed.jacobian(p).unwrap();
                let jb = saddle.jacobian(p).unwrap();
                assert!(
                    (ja.a11 - jb.a11).abs().max((ja.a12 - jb.a12).abs())
                        .max((ja.a21 - jb.a21).abs())
                        .max((ja.a22 - jb.a22).abs())
                        <= 1e-14,
                    "jacobian mismatch at {p}"
                );
            }
        }
    }

    #[test]
    fn jacobian_of_field_plus_at_origin() {
        let j = field_plus().jacobian(Vec2::ZERO).unwrap();
        assert_eq!(j, Mat2::new(1.0, 1.0, -1.0, 1.0));
        let (sym, skew) = j.sym_split();
        assert_eq!(sym, Mat2::identity());
        assert_eq!(skew, Mat2::skew(1.0));
        assert_eq!(j.min_sym_eig(), 1.0);
        assert_eq!(j.asymmetry(), 2.0);
    }

    #[test]
    fn jacobian_of_field_plus_at_quarter_turn() {
        use std::f64::consts::FRAC_PI_2;
        let j = field_plus()
            .jacobian(Vec2::new(FRAC_PI_2, FRAC_PI_2))
            .unwrap();
        let (sym, _) = j.sym_split();
        // sym part diag(1 - sin x sin y, 1 + sin x sin y) = diag(0, 2)
        assert_eq!(sym.a11, 0.0);
        assert_eq!(sym.a22, 2.0);
        assert_eq!(sym.a12, 0.0);
        assert_eq!(j.min_sym_eig(), 0.0);
    }
}
