//! Second-order forward-mode jets over (x, y).
//!
//! A `Jet2` carries a value together with both first partials and the three
//! distinct second partials. Arithmetic propagates all six channels by the
//! product/quotient/chain rules, so evaluating an expression on seeded jets
//! yields exact derivatives (up to rounding). Schwarz symmetry is structural:
//! only one mixed entry is stored.

use crate::geom::{Mat2, Vec2};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub gx: f64,
    pub gy: f64,
    pub hxx: f64,
    pub hxy: f64,
    pub hyy: f64,
}

/// First-order jet: the value/gradient channels of [`Jet2`] without the
/// curvature rows. Every operation performs the same f64 sequence as the
/// corresponding channels of the full jet, so the two agree bit for bit;
/// this is the fast path for field values (quadrature, pair sampling).
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Jet1 {
    pub v: f64,
    pub gx: f64,
    pub gy: f64,
}

impl Jet1 {
    pub const fn constant(v: f64) -> Self {
        Jet1 { v, gx: 0.0, gy: 0.0 }
    }

    pub const fn var_x(v: f64) -> Self {
        Jet1 { v, gx: 1.0, gy: 0.0 }
    }

    pub const fn var_y(v: f64) -> Self {
        Jet1 { v, gx: 0.0, gy: 1.0 }
    }

    pub fn gradient(&self) -> Vec2 {
        Vec2::new(self.gx, self.gy)
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.gx.is_finite() && self.gy.is_finite()
    }

    pub fn sin(self) -> Self {
        let s = self.v.sin();
        let c = self.v.cos();
        Jet1 { v: s, gx: c * self.gx, gy: c * self.gy }
    }

    pub fn cos(self) -> Self {
        let s = self.v.sin();
        let c = self.v.cos();
        Jet1 { v: c, gx: -s * self.gx, gy: -s * self.gy }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Jet1 { v: e, gx: e * self.gx, gy: e * self.gy }
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Jet1::constant(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, r: Jet1) -> Jet1 {
        Jet1 { v: self.v + r.v, gx: self.gx + r.gx, gy: self.gy + r.gy }
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, r: Jet1) -> Jet1 {
        Jet1 { v: self.v - r.v, gx: self.gx - r.gx, gy: self.gy - r.gy }
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        Jet1 { v: -self.v, gx: -self.gx, gy: -self.gy }
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, r: Jet1) -> Jet1 {
        Jet1 {
            v: self.v * r.v,
            gx: self.gx * r.v + self.v * r.gx,
            gy: self.gy * r.v + self.v * r.gy,
        }
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    fn div(self, r: Jet1) -> Jet1 {
        let q = self.v / r.v;
        let inv = 1.0 / r.v;
        Jet1 {
            v: q,
            gx: (self.gx - q * r.gx) * inv,
            gy: (self.gy - q * r.gy) * inv,
        }
    }
}

impl Jet2 {
    pub const fn constant(v: f64) -> Self {
        Jet2 { v, gx: 0.0, gy: 0.0, hxx: 0.0, hxy: 0.0, hyy: 0.0 }
    }

    /// Seed for the x variable: dx/dx = 1, all curvature zero.
    pub const fn var_x(v: f64) -> Self {
        Jet2 { v, gx: 1.0, gy: 0.0, hxx: 0.0, hxy: 0.0, hyy: 0.0 }
    }

    /// Seed for the y variable.
    pub const fn var_y(v: f64) -> Self {
        Jet2 { v, gx: 0.0, gy: 1.0, hxx: 0.0, hxy: 0.0, hyy: 0.0 }
    }

    pub fn gradient(&self) -> Vec2 {
        Vec2::new(self.gx, self.gy)
    }

    /// Hessian; symmetric by construction (single mixed entry).
    pub fn hessian(&self) -> Mat2 {
        Mat2::new(self.hxx, self.hxy, self.hxy, self.hyy)
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite()
            && self.gx.is_finite()
            && self.gy.is_finite()
            && self.hxx.is_finite()
            && self.hxy.is_finite()
            && self.hyy.is_finite()
    }

    /// sin(f)' = cos(f) f', sin(f)'' = -sin(f) f'^2 + cos(f) f''
    pub fn sin(self) -> Self {
        let s = self.v.sin();
        let c = self.v.cos();
        Jet2 {
            v: s,
            gx: c * self.gx,
            gy: c * self.gy,
            hxx: -s * self.gx * self.gx + c * self.hxx,
            hxy: -s * self.gx * self.gy + c * self.hxy,
            hyy: -s * self.gy * self.gy + c * self.hyy,
        }
    }

    /// cos(f)' = -sin(f) f', cos(f)'' = -cos(f) f'^2 - sin(f) f''
    pub fn cos(self) -> Self {
        let s = self.v.sin();
        let c = self.v.cos();
        Jet2 {
            v: c,
            gx: -s * self.gx,
            gy: -s * self.gy,
            hxx: -c * self.gx * self.gx - s * self.hxx,
            hxy: -c * self.gx * self.gy - s * self.hxy,
            hyy: -c * self.gy * self.gy - s * self.hyy,
        }
    }

    /// exp(f)' = exp(f) f', exp(f)'' = exp(f) (f'^2 + f'')
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Jet2 {
            v: e,
            gx: e * self.gx,
            gy: e * self.gy,
            hxx: e * (self.gx * self.gx + self.hxx),
            hxy: e * (self.gx * self.gy + self.hxy),
            hyy: e * (self.gy * self.gy + self.hyy),
        }
    }

    /// Nonnegative integer power by repeated multiplication. The value
    /// channel performs the same f64 sequence as the value-only evaluator,
    /// so the two agree exactly.
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Jet2::constant(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, r: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + r.v,
            gx: self.gx + r.gx,
            gy: self.gy + r.gy,
            hxx: self.hxx + r.hxx,
            hxy: self.hxy + r.hxy,
            hyy: self.hyy + r.hyy,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, r: Jet2) -> Jet2 {
        Jet2 {
            v: self.v - r.v,
            gx: self.gx - r.gx,
            gy: self.gy - r.gy,
            hxx: self.hxx - r.hxx,
            hxy: self.hxy - r.hxy,
            hyy: self.hyy - r.hyy,
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            v: -self.v,
            gx: -self.gx,
            gy: -self.gy,
            hxx: -self.hxx,
            hxy: -self.hxy,
            hyy: -self.hyy,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, r: Jet2) -> Jet2 {
        // (fg)'' = f''g + 2 f'g' + f g''
        Jet2 {
            v: self.v * r.v,
            gx: self.gx * r.v + self.v * r.gx,
            gy: self.gy * r.v + self.v * r.gy,
            hxx: self.hxx * r.v + 2.0 * self.gx * r.gx + self.v * r.hxx,
            hxy: self.hxy * r.v + self.gx * r.gy + self.gy * r.gx + self.v * r.hxy,
            hyy: self.hyy * r.v + 2.0 * self.gy * r.gy + self.v * r.hyy,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, r: Jet2) -> Jet2 {
        // q = f/g; q' = (f' - q g')/g; q'' = (f'' - 2 q' g' - q g'')/g.
        // The value channel is a plain division so it matches the
        // value-only evaluator bit for bit.
        let q = self.v / r.v;
        let inv = 1.0 / r.v;
        let qx = (self.gx - q * r.gx) * inv;
        let qy = (self.gy - q * r.gy) * inv;
        Jet2 {
            v: q,
            gx: qx,
            gy: qy,
            hxx: (self.hxx - 2.0 * qx * r.gx - q * r.hxx) * inv,
            hxy: (self.hxy - qx * r.gy - qy * r.gx - q * r.hxy) * inv,
            hyy: (self.hyy - 2.0 * qy * r.gy - q * r.hyy) * inv,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(x: f64, y: f64) -> (Jet2, Jet2) {
        (Jet2::var_x(x), Jet2::var_y(y))
    }

    #[test]
    fn product_of_sines_at_origin() {
        let (x, y) = at(0.0, 0.0);
        let j = x.sin() * y.sin();
        assert_eq!(j.v, 0.0);
        assert_eq!(j.gx, 0.0);
        assert_eq!(j.gy, 0.0);
        assert_eq!(j.hxx, 0.0);
        assert_eq!(j.hxy, 1.0);
        assert_eq!(j.hyy, 0.0);
    }

    #[test]
    fn half_square_at_3_7() {
        let (x, _) = at(3.0, 7.0);
        let j = x.powi(2) / Jet2::constant(2.0);
        assert_eq!(j.v, 4.5);
        assert_eq!(j.gx, 3.0);
        assert_eq!(j.gy, 0.0);
        assert_eq!(j.hxx, 1.0);
        assert_eq!(j.hxy, 0.0);
        assert_eq!(j.hyy, 0.0);
    }

    #[test]
    fn quotient_rule_against_closed_form() {
        // f = x / (2 + y): f_x = 1/(2+y), f_y = -x/(2+y)^2,
        // f_xy = -1/(2+y)^2, f_yy = 2x/(2+y)^3
        let (x, y) = at(1.5, 0.5);
        let d = Jet2::constant(2.0) + y;
        let j = x / d;
        let g = 2.5f64;
        assert!((j.v - 1.5 / g).abs() < 1e-15);
        assert!((j.gx - 1.0 / g).abs() < 1e-15);
        assert!((j.gy + 1.5 / (g * g)).abs() < 1e-15);
        assert!((j.hxx).abs() < 1e-15);
        assert!((j.hxy + 1.0 / (g * g)).abs() < 1e-15);
        assert!((j.hyy - 3.0 / (g * g * g)).abs() < 1e-15);
    }

    #[test]
    fn chain_rule_sin_of_product() {
        // f = sin(x*y): f_xy = cos(xy) - xy sin(xy)
        let (x, y) = at(0.7, -0.3);
        let j = (x * y).sin();
        let p: f64 = 0.7 * -0.3;
        assert!((j.hxy - (p.cos() - p * p.sin())).abs() < 1e-15);
    }

    #[test]
    fn zeroth_power_is_one_everywhere() {
        let (x, _) = at(0.0, 0.0);
        let j = x.powi(0);
        assert_eq!(j, Jet2::constant(1.0));
    }

    #[test]
    fn exp_second_derivatives() {
        let (x, y) = at(0.25, 1.0);
        let j = (x * y).exp();
        let e = (0.25f64).exp();
        // d^2/dx^2 exp(xy) = y^2 exp(xy)
        assert!((j.hxx - e).abs() < 1e-15);
        // d^2/dxdy = (1 + xy) exp(xy)
        assert!((j.hxy - 1.25 * e).abs() < 1e-14);
    }

    #[test]
    fn first_order_jet_matches_full_jet_channels_exactly() {
        let cases: Vec<(Jet2, Jet1)> = vec![
            (Jet2::var_x(0.73), Jet1::var_x(0.73)),
            (Jet2::var_y(-1.9), Jet1::var_y(-1.9)),
            (Jet2::constant(2.5), Jet1::constant(2.5)),
        ];
        let combine2 = |a: Jet2, b: Jet2| ((a * b).sin() / (b.powi(2) + Jet2::constant(2.0))).exp() - a.cos();
        let combine1 = |a: Jet1, b: Jet1| ((a * b).sin() / (b.powi(2) + Jet1::constant(2.0))).exp() - a.cos();
        for (a2, a1) in &cases {
            for (b2, b1) in &cases {
                let full = combine2(*a2, *b2);
                let fast = combine1(*a1, *b1);
                assert_eq!((full.v, full.gx, full.gy), (fast.v, fast.gx, fast.gy));
            }
        }
    }
}
