//! Planar primitives: points/vectors, 2x2 matrices, rectangular regions and
//! corner-inclusive evaluation grids.

use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tolerances::MIN_REGION_WIDTH;

/// A point of the plane, also used for field values.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, rhs: Vec2) -> f64 {
        self.x * rhs.x + self.y * rhs.y
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, c: f64) -> Vec2 {
        Vec2::new(self.x * c, self.y * c)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl std::fmt::Display for Vec2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Dense 2x2 real matrix.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub const fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn zero() -> Self {
        Mat2::new(0.0, 0.0, 0.0, 0.0)
    }

    /// The skew-symmetric map z -> (a*z.y, -a*z.x).
    pub const fn skew(a: f64) -> Self {
        Mat2::new(0.0, a, -a, 0.0)
    }

    pub fn apply(self, z: Vec2) -> Vec2 {
        Vec2::new(self.a11 * z.x + self.a12 * z.y, self.a21 * z.x + self.a22 * z.y)
    }

    /// Symmetric and skew parts, S = (M + M^T)/2 and K = (M - M^T)/2.
    pub fn sym_split(self) -> (Mat2, Mat2) {
        let s = 0.5 * (self.a12 + self.a21);
        let k = 0.5 * (self.a12 - self.a21);
        (
            Mat2::new(self.a11, s, s, self.a22),
            Mat2::new(0.0, k, -k, 0.0),
        )
    }

    /// Smallest eigenvalue of the symmetric part, by the closed 2x2 formula.
    ///
    /// When the symmetric off-diagonal cancels exactly (saddle and gradient
    /// Jacobians) the eigenvalues are the diagonal entries, returned without
    /// going through the radical so the result is exact.
    pub fn min_sym_eig(self) -> f64 {
        let (s, _) = self.sym_split();
        if s.a12 == 0.0 {
            return s.a11.min(s.a22);
        }
        let mean = 0.5 * (s.a11 + s.a22);
        let half_gap = 0.5 * (s.a11 - s.a22);
        mean - (half_gap * half_gap + s.a12 * s.a12).sqrt()
    }

    /// Integrability residual a12 - a21; zero everywhere iff the field with
    /// this Jacobian is locally a gradient.
    pub fn asymmetry(self) -> f64 {
        self.a12 - self.a21
    }

    pub fn frobenius_norm(self) -> f64 {
        (self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22)
            .sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, c: f64) -> Mat2 {
        Mat2::new(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)
    }
}

/// Axis-aligned certification region.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Region {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Region {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        for (name, v) in [("xmin", xmin), ("xmax", xmax), ("ymin", ymin), ("ymax", ymax)] {
            if !v.is_finite() {
                return Err(Error::Region(format!("{name} = {v} is not finite")));
            }
        }
        if !(xmin < xmax) || !(ymin < ymax) {
            return Err(Error::Region(format!(
                "bounds must satisfy xmin < xmax and ymin < ymax, got [{xmin}, {xmax}] x [{ymin}, {ymax}]"
            )));
        }
        if xmax - xmin < MIN_REGION_WIDTH || ymax - ymin < MIN_REGION_WIDTH {
            return Err(Error::Region(format!(
                "degenerate region: width below {MIN_REGION_WIDTH:e} on some axis"
            )));
        }
        Ok(Region { xmin, xmax, ymin, ymax })
    }

    /// The default certification box [-pi, pi]^2.
    pub fn standard() -> Self {
        use std::f64::consts::PI;
        Region {
            xmin: -PI,
            xmax: PI,
            ymin: -PI,
            ymax: PI,
        }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }
}

impl Default for Region {
    fn default() -> Self {
        Region::standard()
    }
}

/// Lattice resolution; the grid always includes the region corners.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::Grid(format!("grid must be at least 2x2, got {nx}x{ny}")));
        }
        Ok(GridSpec { nx, ny })
    }

    pub fn square(n: usize) -> Result<Self> {
        GridSpec::new(n, n)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nx: crate::tolerances::GRID_N,
            ny: crate::tolerances::GRID_N,
        }
    }
}

/// A region paired with a grid spec; points are indexed row-major with the
/// x index running fastest, so sweep order (and witness tie-breaking) is
/// deterministic.
#[derive(Copy, Clone, Debug)]
pub struct Grid {
    pub region: Region,
    pub spec: GridSpec,
}

impl Grid {
    pub fn new(region: Region, spec: GridSpec) -> Self {
        Grid { region, spec }
    }

    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.region.width() / (self.spec.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        self.region.height() / (self.spec.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.spec.nx - 1 {
            self.region.xmax
        } else {
            self.region.xmin + i as f64 * self.dx()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j == self.spec.ny - 1 {
            self.region.ymax
        } else {
            self.region.ymin + j as f64 * self.dy()
        }
    }

    pub fn point(&self, k: usize) -> Vec2 {
        let i = k % self.spec.nx;
        let j = k / self.spec.nx;
        Vec2::new(self.x(i), self.y(j))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.spec.nx + i
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn degenerate_region_rejected() {
        assert!(Region::new(0.0, 1e-15, 0.0, 1.0).is_err());
        assert!(Region::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Region::new(0.0, f64::INFINITY, 0.0, 1.0).is_err());
        assert!(Region::new(-1.0, 1.0, -1.0, 1.0).is_ok());
    }

    #[test]
    fn grid_must_be_2x2() {
        assert!(GridSpec::new(1, 5).is_err());
        assert!(GridSpec::new(2, 2).is_ok());
    }

    #[test]
    fn standard_grid_hits_half_pi_lattice() {
        let g = Grid::new(Region::standard(), GridSpec::default());
        // pi/2 sits on index multiples of pi/64 from -pi
        assert_eq!(g.x(32), -PI / 2.0);
        assert!((g.x(96) - PI / 2.0).abs() < 1e-15);
        assert_eq!(g.x(64), 0.0);
        assert_eq!(g.x(0), -PI);
        assert_eq!(g.x(128), PI);
    }

    #[test]
    fn scan_order_is_row_major_x_fastest() {
        let g = Grid::new(
            Region::new(0.0, 1.0, 10.0, 11.0).unwrap(),
            GridSpec::new(3, 2).unwrap(),
        );
        assert_eq!(g.point(0), Vec2::new(0.0, 10.0));
        assert_eq!(g.point(1), Vec2::new(0.5, 10.0));
        assert_eq!(g.point(2), Vec2::new(1.0, 10.0));
        assert_eq!(g.point(3), Vec2::new(0.0, 11.0));
        assert_eq!(g.index(2, 1), 5);
    }

    #[test]
    fn sym_split_reconstructs_saddle_jacobians() {
        let m = Mat2::new(1.0, 0.75, -0.75, 1.5);
        let (s, k) = m.sym_split();
        assert_eq!(s.a12, s.a21);
        assert_eq!(k.a12, -k.a21);
        assert_eq!(s.a11 + k.a11, m.a11);
        assert_eq!(s.a12 + k.a12, m.a12);
        assert_eq!(s.a21 + k.a21, m.a21);
        assert_eq!(s.a22 + k.a22, m.a22);
    }

    #[test]
    fn min_sym_eig_matches_hand_values() {
        // Jacobian of the built-in saddle operator at the origin
        let m = Mat2::new(1.0, 1.0, -1.0, 1.0);
        assert_eq!(m.min_sym_eig(), 1.0);
        assert_eq!(m.asymmetry(), 2.0);
        let (s, k) = m.sym_split();
        assert_eq!(s, Mat2::identity());
        assert_eq!(k, Mat2::skew(1.0));

        // sym part diag(0, 2): eigenvalues straight off the diagonal
        let m = Mat2::new(0.0, 1.0, -1.0, 2.0);
        assert_eq!(m.min_sym_eig(), 0.0);

        // genuine radical path: [[0, 1], [1, 0]] has eigenvalues +/- 1
        let m = Mat2::new(0.0, 1.0, 1.0, 0.0);
        assert!((m.min_sym_eig() + 1.0).abs() < 1e-15);
        assert_eq!(m.asymmetry(), 0.0);
    }
}
