use std::fmt;
use std::sync::Arc;

use super::chart::{same_chart, Chart};
use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};

/// A vector field `sum_i X^i d/dx^i` with symbolic components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    chart: Arc<Chart>,
    components: Vec<Expr>,
}

impl VectorField {
    pub fn new(chart: &Arc<Chart>, components: Vec<Expr>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::WrongDimension {
                expected: chart.dim(),
                found: components.len(),
            });
        }
        for c in &components {
            chart.check_expr(c)?;
        }
        Ok(VectorField {
            chart: chart.clone(),
            components,
        })
    }

    /// Parses one component string per coordinate.
    pub fn parse(chart: &Arc<Chart>, components: &[&str]) -> Result<Self> {
        let names = chart.names();
        let exprs = components
            .iter()
            .map(|s| crate::expr::parse_scalar_expr(s, &names))
            .collect::<Result<Vec<_>, _>>()?;
        VectorField::new(chart, exprs)
    }

    /// The coordinate field `d/dx^i`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        let components = (0..chart.dim())
            .map(|j| if i == j { Expr::ONE } else { Expr::ZERO })
            .collect();
        VectorField {
            chart: chart.clone(),
            components,
        }
    }

    pub fn zero(chart: &Arc<Chart>) -> Self {
        VectorField {
            chart: chart.clone(),
            components: vec![Expr::ZERO; chart.dim()],
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Expr {
        &self.components[i]
    }

    pub fn simplify(&self) -> Self {
        VectorField {
            chart: self.chart.clone(),
            components: self.components.iter().map(Expr::simplify).collect(),
        }
    }

    /// `f * X`, simplified.
    pub fn scale(&self, f: &Expr) -> Self {
        VectorField {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .map(|c| (f.clone() * c.clone()).simplify())
                .collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<Self> {
        same_chart(&self.chart, &other.chart)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| (a.clone() + b.clone()).simplify())
                .collect(),
        })
    }

    /// `a * X + b * Y`.
    pub fn combine(a: &Expr, x: &VectorField, b: &Expr, y: &VectorField) -> Result<Self> {
        x.scale(a).add(&y.scale(b))
    }

    /// Directional derivative `X(f) = sum_j X^j d_j f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut acc = Expr::ZERO;
        for (j, xj) in self.components.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            let d = f.partial_derivative(&self.chart.coord(j).name);
            if d.is_zero() {
                continue;
            }
            acc = acc + xj.clone() * d;
        }
        acc.simplify()
    }

    /// Substitutes `var := value` in every component.
    pub fn substitute(&self, var: &str, value: &Expr) -> Self {
        VectorField {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .map(|c| c.substitute(var, value).simplify())
                .collect(),
        }
    }

    pub fn eval_at(&self, point: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.components.iter().map(|c| self.chart.eval(c, point)).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Squared Euclidean norm of a component vector.
pub fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}
