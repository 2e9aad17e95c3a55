//! Parametrized immersions `x : D subset R^k -> R^n` with evaluation and
//! Jacobians.
//!
//! Built-in gallery maps carry hand-differentiated Jacobians; maps defined
//! through the expression DSL fall back to central finite differences. Both
//! kinds evaluate against a named-constant table so one map covers a whole
//! parameter family.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exprdsl::{self, ExprAst};
use crate::tolerances::FD_STEP;

type EvalFn = Arc<dyn Fn(&[f64], &BTreeMap<String, f64>) -> Vec<f64> + Send + Sync>;
type JacobianFn = Arc<dyn Fn(&[f64], &BTreeMap<String, f64>) -> DMatrix<f64> + Send + Sync>;

#[derive(Clone)]
enum Backend {
    Analytic {
        eval: EvalFn,
        jacobian: JacobianFn,
    },
    Dsl {
        components: Vec<ExprAst>,
        variables: Vec<String>,
        step: f64,
    },
    /// Precomposition with an affine change of parameters `u = A w + c`.
    Reparam {
        inner: Box<Immersion>,
        matrix: DMatrix<f64>,
        shift: DVector<f64>,
    },
    /// Postcomposition with an invertible ambient linear map `x -> Q x`.
    Conjugated {
        inner: Box<Immersion>,
        q: DMatrix<f64>,
    },
}

/// A parametrized map with its domain box and constant table.
#[derive(Clone)]
pub struct Immersion {
    pub name: String,
    param_count: usize,
    ambient_dim: usize,
    domain: Vec<(f64, f64)>,
    constants: BTreeMap<String, f64>,
    backend: Backend,
}

impl std::fmt::Debug for Immersion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Immersion")
            .field("name", &self.name)
            .field("param_count", &self.param_count)
            .field("ambient_dim", &self.ambient_dim)
            .field("domain", &self.domain)
            .field("constants", &self.constants)
            .finish()
    }
}

impl Immersion {
    /// Map given by closures for the components and the exact Jacobian.
    pub fn analytic(
        name: impl Into<String>,
        param_count: usize,
        ambient_dim: usize,
        domain: Vec<(f64, f64)>,
        constants: BTreeMap<String, f64>,
        eval: EvalFn,
        jacobian: JacobianFn,
    ) -> Result<Self> {
        let imm = Self {
            name: name.into(),
            param_count,
            ambient_dim,
            domain,
            constants,
            backend: Backend::Analytic { eval, jacobian },
        };
        imm.validate_shape()?;
        Ok(imm)
    }

    /// Map whose components are DSL expressions; the Jacobian uses central
    /// differences with per-axis step `step * (1 + |u_i|)`.
    pub fn from_expressions(
        name: impl Into<String>,
        variables: Vec<String>,
        expressions: &[&str],
        domain: Vec<(f64, f64)>,
        constants: BTreeMap<String, f64>,
        step: Option<f64>,
    ) -> Result<Self> {
        let constant_names: Vec<String> = constants.keys().cloned().collect();
        let mut components = Vec::with_capacity(expressions.len());
        for text in expressions {
            components.push(exprdsl::parse(text, &variables, &constant_names)?);
        }
        let imm = Self {
            name: name.into(),
            param_count: variables.len(),
            ambient_dim: components.len(),
            domain,
            constants,
            backend: Backend::Dsl {
                components,
                variables,
                step: step.unwrap_or(FD_STEP),
            },
        };
        imm.validate_shape()?;
        Ok(imm)
    }

    fn validate_shape(&self) -> Result<()> {
        if self.param_count >= self.ambient_dim {
            return Err(Error::InvalidInput(format!(
                "immersion `{}` has {} parameters but ambient dimension {}; expected k < n",
                self.name, self.param_count, self.ambient_dim
            )));
        }
        if self.domain.len() != self.param_count {
            return Err(Error::InvalidInput(format!(
                "immersion `{}` declares {} domain intervals for {} parameters",
                self.name,
                self.domain.len(),
                self.param_count
            )));
        }
        for (lo, hi) in &self.domain {
            if lo >= hi {
                return Err(Error::InvalidInput(format!(
                    "immersion `{}` has an empty domain interval [{lo}, {hi}]",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn constants(&self) -> &BTreeMap<String, f64> {
        &self.constants
    }

    /// Same map with some constants replaced.
    pub fn with_constants(&self, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let mut out = self.clone();
        for (k, v) in overrides {
            if !out.constants.contains_key(k) {
                return Err(Error::UnknownParameter(k.clone()));
            }
            out.constants.insert(k.clone(), *v);
        }
        Ok(out)
    }

    fn check_domain(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.param_count {
            return Err(Error::DimensionMismatch(format!(
                "parameter point has length {}, immersion `{}` has {} parameters",
                u.len(),
                self.name,
                self.param_count
            )));
        }
        for (i, ((lo, hi), x)) in self.domain.iter().zip(u).enumerate() {
            if x < lo || x > hi {
                return Err(Error::OutOfDomain(format!(
                    "coordinate {i} = {x} outside [{lo}, {hi}] for `{}`",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Componentwise evaluation at a domain point.
    pub fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        self.check_domain(u)?;
        self.evaluate_unchecked(u)
    }

    /// Evaluation without the domain test; finite-difference stencils poke
    /// slightly outside the box.
    fn evaluate_unchecked(&self, u: &[f64]) -> Result<DVector<f64>> {
        match &self.backend {
            Backend::Analytic { eval, .. } => {
                Ok(DVector::from_vec(eval(u, &self.constants)))
            }
            Backend::Dsl {
                components,
                variables,
                ..
            } => {
                let mut env = self.constants.clone();
                for (name, value) in variables.iter().zip(u) {
                    env.insert(name.clone(), *value);
                }
                let mut out = DVector::zeros(self.ambient_dim);
                for (i, ast) in components.iter().enumerate() {
                    out[i] = exprdsl::eval(ast, &env)?;
                }
                Ok(out)
            }
            Backend::Reparam {
                inner,
                matrix,
                shift,
            } => {
                let w = DVector::from_row_slice(u);
                let mapped = matrix * w + shift;
                inner.evaluate_unchecked(mapped.as_slice())
            }
            Backend::Conjugated { inner, q } => {
                Ok(q * inner.evaluate_unchecked(u)?)
            }
        }
    }

    /// The n x k Jacobian at an interior point.
    pub fn jacobian(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        self.check_domain(u)?;
        self.jacobian_unchecked(u)
    }

    fn jacobian_unchecked(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        match &self.backend {
            Backend::Analytic { jacobian, .. } => Ok(jacobian(u, &self.constants)),
            Backend::Dsl { step, .. } => {
                let mut jac = DMatrix::zeros(self.ambient_dim, self.param_count);
                let mut probe = u.to_vec();
                for i in 0..self.param_count {
                    let h = step * (1.0 + u[i].abs());
                    probe[i] = u[i] + h;
                    let fwd = self.evaluate_unchecked(&probe)?;
                    probe[i] = u[i] - h;
                    let bwd = self.evaluate_unchecked(&probe)?;
                    probe[i] = u[i];
                    jac.set_column(i, &((fwd - bwd) / (2.0 * h)));
                }
                Ok(jac)
            }
            Backend::Reparam {
                inner,
                matrix,
                shift,
            } => {
                let w = DVector::from_row_slice(u);
                let mapped = matrix * w + shift;
                Ok(inner.jacobian_unchecked(mapped.as_slice())? * matrix)
            }
            Backend::Conjugated { inner, q } => Ok(q * inner.jacobian_unchecked(u)?),
        }
    }

    /// Precomposes with the affine parameter change `u = A w + c`. The caller
    /// supplies the new domain box (boxes do not map to boxes in general).
    pub fn reparameterized(
        &self,
        matrix: DMatrix<f64>,
        shift: DVector<f64>,
        new_domain: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let k = self.param_count;
        if matrix.nrows() != k || matrix.ncols() != k || shift.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "affine change must be {k}x{k} with a length-{k} shift"
            )));
        }
        if matrix.clone().determinant().abs() < 1e-12 {
            return Err(Error::InvalidInput(
                "parameter change matrix is singular".into(),
            ));
        }
        let imm = Self {
            name: format!("{}~reparam", self.name),
            param_count: k,
            ambient_dim: self.ambient_dim,
            domain: new_domain,
            constants: self.constants.clone(),
            backend: Backend::Reparam {
                inner: Box::new(self.clone()),
                matrix,
                shift,
            },
        };
        imm.validate_shape()?;
        Ok(imm)
    }

    /// Postcomposes with an invertible ambient map `x -> Q x`.
    pub fn postcompose_linear(&self, q: DMatrix<f64>) -> Result<Self> {
        let n = self.ambient_dim;
        if q.nrows() != n || q.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "ambient map must be {n}x{n}"
            )));
        }
        if q.clone().determinant().abs() < 1e-12 {
            return Err(Error::InvalidInput("ambient map is singular".into()));
        }
        Ok(Self {
            name: format!("{}~conj", self.name),
            param_count: self.param_count,
            ambient_dim: n,
            domain: self.domain.clone(),
            constants: self.constants.clone(),
            backend: Backend::Conjugated {
                inner: Box::new(self.clone()),
                q,
            },
        })
    }
}
