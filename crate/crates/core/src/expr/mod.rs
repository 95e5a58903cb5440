//! Scalar symbolic expressions over named real variables.
//!
//! Every coefficient in the geometry layers (vector field components, form
//! coefficients, angle functions) is an [`Expr`]. The calculus is exact
//! symbolic differentiation followed by numeric evaluation.

mod diff;
mod eval;
mod parse;
mod print;
mod simplify;

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::ops;

pub use eval::{Bindings, EvalError, VarBinding};
pub use parse::{parse_scalar_expr, ParseError};

/// Constants that may be written by name in the expression grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::Pi => PI,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "pi" => Some(NamedConst::Pi),
            _ => None,
        }
    }
}

/// Expression tree. Equality is structural.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Named(NamedConst),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power; the exponent is always a literal.
    Pow(Box<Expr>, i32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub const ZERO: Expr = Expr::Const(0.0);
    pub const ONE: Expr = Expr::Const(1.0);

    pub fn c(value: f64) -> Expr {
        Expr::Const(value)
    }

    pub fn pi() -> Expr {
        Expr::Named(NamedConst::Pi)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn powi(self, k: i32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    /// Numeric value if the tree contains no variables and folds without error.
    pub fn constant_value(&self) -> Option<f64> {
        if !self.is_closed() {
            return None;
        }
        self.evaluate(&VarBinding::new()).ok()
    }

    /// True when the expression has no free variables.
    pub fn is_closed(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Named(_) => true,
            Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => a.is_closed(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_closed() && b.is_closed(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 1.0)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) | Expr::Named(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replaces every occurrence of `var` by `with`.
    pub fn substitute(&self, var: &str, with: &Expr) -> Expr {
        self.map_vars(&|name| (name == var).then(|| with.clone()))
    }

    /// Renames or replaces variables; `f` returns `None` to keep a variable.
    pub fn map_vars(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        let un = |a: &Expr| Box::new(a.map_vars(f));
        match self {
            Expr::Const(_) | Expr::Named(_) => self.clone(),
            Expr::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Expr::Neg(a) => Expr::Neg(un(a)),
            Expr::Add(a, b) => Expr::Add(un(a), un(b)),
            Expr::Sub(a, b) => Expr::Sub(un(a), un(b)),
            Expr::Mul(a, b) => Expr::Mul(un(a), un(b)),
            Expr::Div(a, b) => Expr::Div(un(a), un(b)),
            Expr::Pow(a, k) => Expr::Pow(un(a), *k),
            Expr::Sin(a) => Expr::Sin(un(a)),
            Expr::Cos(a) => Expr::Cos(un(a)),
            Expr::Exp(a) => Expr::Exp(un(a)),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Named(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => 1 + a.size(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl From<f64> for Expr {
    fn from(value: f64) -> Self {
        Expr::Const(value)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Free-function form of [`Expr::partial_derivative`].
pub fn partial_derivative(e: &Expr, var: &str) -> Expr {
    e.partial_derivative(var)
}

/// Free-function form of [`Expr::simplify`].
pub fn simplify(e: &Expr) -> Expr {
    e.simplify()
}

/// Free-function form of [`Expr::evaluate`].
pub fn evaluate(e: &Expr, b: &impl Bindings) -> Result<f64, EvalError> {
    e.evaluate(b)
}
