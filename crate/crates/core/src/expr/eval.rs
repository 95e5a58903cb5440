use std::collections::BTreeMap;

use thiserror::Error;

use super::Expr;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    /// `path` lists child indices from the root to the offending `Div` or
    /// negative-power node, e.g. `[1, 0]`.
    #[error("division by zero at node path {path:?}")]
    DivisionByZero { path: Vec<usize> },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

/// Anything that can resolve a variable name to a value.
pub trait Bindings {
    fn lookup(&self, name: &str) -> Option<f64>;
}

/// Owned map from variable name to value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VarBinding(BTreeMap<String, f64>);

impl VarBinding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.0.insert(name.into(), value);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for VarBinding {
    fn from_iter<T: IntoIterator<Item = (S, f64)>>(iter: T) -> Self {
        VarBinding(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl Bindings for VarBinding {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name)
    }
}

impl Bindings for [(&str, f64)] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

impl<const N: usize> Bindings for [(&str, f64); N] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.as_slice().lookup(name)
    }
}

impl<B: Bindings + ?Sized> Bindings for &B {
    fn lookup(&self, name: &str) -> Option<f64> {
        (**self).lookup(name)
    }
}

fn in_child<T>(r: Result<T, EvalError>, idx: usize) -> Result<T, EvalError> {
    r.map_err(|e| match e {
        EvalError::DivisionByZero { mut path } => {
            path.insert(0, idx);
            EvalError::DivisionByZero { path }
        }
        other => other,
    })
}

impl Expr {
    pub fn evaluate(&self, b: &(impl Bindings + ?Sized)) -> Result<f64, EvalError> {
        self.eval_dyn(&b)
    }

    fn eval_dyn(&self, b: &dyn Bindings) -> Result<f64, EvalError> {
        let unary = |a: &Expr| in_child(a.eval_dyn(b), 0);
        let binary = |a: &Expr, c: &Expr| -> Result<(f64, f64), EvalError> {
            Ok((in_child(a.eval_dyn(b), 0)?, in_child(c.eval_dyn(b), 1)?))
        };
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Named(n) => n.value(),
            Expr::Var(v) => b.lookup(v).ok_or_else(|| EvalError::UnboundVariable(v.clone()))?,
            Expr::Neg(a) => -unary(a)?,
            Expr::Add(x, y) => {
                let (p, q) = binary(x, y)?;
                p + q
            }
            Expr::Sub(x, y) => {
                let (p, q) = binary(x, y)?;
                p - q
            }
            Expr::Mul(x, y) => {
                let (p, q) = binary(x, y)?;
                p * q
            }
            Expr::Div(x, y) => {
                let (p, q) = binary(x, y)?;
                if q == 0.0 {
                    return Err(EvalError::DivisionByZero { path: Vec::new() });
                }
                p / q
            }
            Expr::Pow(a, k) => {
                let base = unary(a)?;
                if *k < 0 && base == 0.0 {
                    return Err(EvalError::DivisionByZero { path: Vec::new() });
                }
                base.powi(*k)
            }
            Expr::Sin(a) => unary(a)?.sin(),
            Expr::Cos(a) => unary(a)?.cos(),
            Expr::Exp(a) => unary(a)?.exp(),
        })
    }
}
