//! Scalar and vector fields on the plane.
//!
//! Scalar fields are expression-backed and evaluate to second-order jets.
//! Vector fields are built as gradients or saddle fields of scalar fields,
//! as closed forms, or by pointwise algebra (sum, scale, shift); evaluation
//! returns the value and the Jacobian together. Everything is immutable and
//! evaluation is pure, so fields can be swept concurrently without
//! synchronization.

use std::sync::Arc;

use crate::error::Result;
use crate::expr::{self, Expr};
use crate::geom::{Mat2, Vec2};
use crate::jet::Jet2;
use crate::tolerances::FD_STEP1;

/// Evaluable scalar field with exact second-order derivatives.
#[derive(Clone)]
pub struct ScalarField {
    name: String,
    expr: Expr,
}

impl ScalarField {
    pub fn from_expr(expr: Expr, name: impl Into<String>) -> Self {
        ScalarField { name: name.into(), expr }
    }

    pub fn parse(text: &str, name: impl Into<String>) -> Result<Self> {
        Ok(ScalarField::from_expr(expr::parse(text)?, name))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn jet(&self, p: Vec2) -> Result<Jet2> {
        self.expr.eval_jet(p)
    }

    /// Value and gradient without the curvature rows.
    pub fn grad(&self, p: Vec2) -> Result<crate::jet::Jet1> {
        self.expr.eval_grad(p)
    }

    pub fn value(&self, p: Vec2) -> Result<f64> {
        self.expr.eval(p)
    }
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ScalarField({} = {})", self.name, self.expr)
    }
}

type ValueFn = Arc<dyn Fn(Vec2) -> Vec2 + Send + Sync>;
type JacobianFn = Arc<dyn Fn(Vec2) -> Mat2 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Closed {
        value: ValueFn,
        jacobian: Option<JacobianFn>,
    },
    Gradient(ScalarField),
    Saddle(ScalarField),
    Sum(Box<VectorField>, Box<VectorField>),
    Scaled(Box<VectorField>, f64),
    Shifted(Box<VectorField>, Vec2),
}

/// Evaluable planar vector field with Jacobians.
#[derive(Clone)]
pub struct VectorField {
    name: String,
    kind: Kind,
}

impl VectorField {
    /// Closed-form field with a hand-coded Jacobian.
    pub fn closed_with_jacobian(
        name: impl Into<String>,
        value: impl Fn(Vec2) -> Vec2 + Send + Sync + 'static,
        jacobian: impl Fn(Vec2) -> Mat2 + Send + Sync + 'static,
    ) -> Self {
        VectorField {
            name: name.into(),
            kind: Kind::Closed {
                value: Arc::new(value),
                jacobian: Some(Arc::new(jacobian)),
            },
        }
    }

    /// Closed-form field without derivatives; Jacobians fall back to
    /// central finite differences and certificates flag the fallback.
    pub fn closed(
        name: impl Into<String>,
        value: impl Fn(Vec2) -> Vec2 + Send + Sync + 'static,
    ) -> Self {
        VectorField {
            name: name.into(),
            kind: Kind::Closed {
                value: Arc::new(value),
                jacobian: None,
            },
        }
    }

    /// The gradient field of `f`: value (f_x, f_y), Jacobian = Hessian of f
    /// (symmetric by jet construction).
    pub fn gradient(f: ScalarField) -> Self {
        VectorField {
            name: format!("gradient({})", f.name()),
            kind: Kind::Gradient(f),
        }
    }

    /// The saddle field of `f`: value (f_x, -f_y),
    /// Jacobian [[f_xx, f_xy], [-f_xy, -f_yy]].
    pub fn saddle(f: ScalarField) -> Self {
        VectorField {
            name: format!("saddle({})", f.name()),
            kind: Kind::Saddle(f),
        }
    }

    pub fn sum(a: VectorField, b: VectorField) -> Self {
        VectorField {
            name: format!("{} + {}", a.name, b.name),
            kind: Kind::Sum(Box::new(a), Box::new(b)),
        }
    }

    pub fn scale(a: VectorField, c: f64) -> Self {
        VectorField {
            name: format!("{c}*({})", a.name),
            kind: Kind::Scaled(Box::new(a), c),
        }
    }

    pub fn shift(a: VectorField, b: Vec2) -> Self {
        VectorField {
            name: format!("({}) + {b}", a.name),
            kind: Kind::Shifted(Box::new(a), b),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True when every Jacobian along the construction is exact (jets or
    /// hand-coded); false when any closed-form part lacks one.
    pub fn jacobian_exact(&self) -> bool {
        match &self.kind {
            Kind::Closed { jacobian, .. } => jacobian.is_some(),
            Kind::Gradient(_) | Kind::Saddle(_) => true,
            Kind::Sum(a, b) => a.jacobian_exact() && b.jacobian_exact(),
            Kind::Scaled(a, _) | Kind::Shifted(a, _) => a.jacobian_exact(),
        }
    }

    /// Field value only (fast path for quadrature); gradient and saddle
    /// fields evaluate a first-order jet instead of the full one.
    pub fn value(&self, p: Vec2) -> Result<Vec2> {
        match &self.kind {
            Kind::Closed { value, .. } => Ok(value(p)),
            Kind::Gradient(f) => {
                let j = f.grad(p)?;
                Ok(Vec2::new(j.gx, j.gy))
            }
            Kind::Saddle(f) => {
                let j = f.grad(p)?;
                Ok(Vec2::new(j.gx, -j.gy))
            }
            Kind::Sum(a, b) => Ok(a.value(p)? + b.value(p)?),
            Kind::Scaled(a, c) => Ok(a.value(p)? * *c),
            Kind::Shifted(a, b) => Ok(a.value(p)? + *b),
        }
    }

    /// Value and Jacobian in one pass.
    pub fn eval(&self, p: Vec2) -> Result<(Vec2, Mat2)> {
        match &self.kind {
            Kind::Closed { value, jacobian } => {
                let v = value(p);
                let j = match jacobian {
                    Some(jac) => jac(p),
                    None => fd_jacobian(|q| Ok(value(q)), p)?,
                };
                Ok((v, j))
            }
            Kind::Gradient(f) => {
                let j = f.jet(p)?;
                Ok((Vec2::new(j.gx, j.gy), j.hessian()))
            }
            Kind::Saddle(f) => {
                let j = f.jet(p)?;
                Ok((
                    Vec2::new(j.gx, -j.gy),
                    Mat2::new(j.hxx, j.hxy, -j.hxy, -j.hyy),
                ))
            }
            Kind::Sum(a, b) => {
                let (va, ja) = a.eval(p)?;
                let (vb, jb) = b.eval(p)?;
                Ok((va + vb, ja + jb))
            }
            Kind::Scaled(a, c) => {
                let (v, j) = a.eval(p)?;
                Ok((v * *c, j * *c))
            }
            Kind::Shifted(a, b) => {
                let (v, j) = a.eval(p)?;
                Ok((v + *b, j))
            }
        }
    }

    pub fn jacobian(&self, p: Vec2) -> Result<Mat2> {
        Ok(self.eval(p)?.1)
    }
}

impl std::fmt::Debug for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VectorField({})", self.name)
    }
}

/// Central-difference Jacobian with step cbrt(eps) * max(1, |coordinate|).
pub fn fd_jacobian(value: impl Fn(Vec2) -> Result<Vec2>, p: Vec2) -> Result<Mat2> {
    let hx = FD_STEP1 * p.x.abs().max(1.0);
    let hy = FD_STEP1 * p.y.abs().max(1.0);
    let fxp = value(Vec2::new(p.x + hx, p.y))?;
    let fxm = value(Vec2::new(p.x - hx, p.y))?;
    let fyp = value(Vec2::new(p.x, p.y + hy))?;
    let fym = value(Vec2::new(p.x, p.y - hy))?;
    let cx = (fxp - fxm) * (0.5 / hx);
    let cy = (fyp - fym) * (0.5 / hy);
    Ok(Mat2::new(cx.x, cy.x, cx.y, cy.y))
}
