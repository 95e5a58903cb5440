use std::fmt;

use super::Expr;

// Binding strength used for parenthesization; mirrors the parser.
const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Const(c) if *c < 0.0 => ATOM,
        Expr::Const(_) | Expr::Named(_) | Expr::Var(_) => ATOM,
        Expr::Sin(_) | Expr::Cos(_) | Expr::Exp(_) => ATOM,
        Expr::Add(..) | Expr::Sub(..) => ADD,
        Expr::Mul(..) | Expr::Div(..) => MUL,
        Expr::Neg(_) => NEG,
        Expr::Pow(..) => POW,
    }
}

struct Wrapped<'a>(&'a Expr, bool);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Expr {
    fn binary(&self, f: &mut fmt::Formatter<'_>, a: &Expr, b: &Expr, op: &str, level: u8) -> fmt::Result {
        write!(
            f,
            "{} {op} {}",
            Wrapped(a, prec(a) < level),
            Wrapped(b, prec(b) <= level)
        )
    }
}

/// Prints in the parser's grammar; re-parsing yields a structurally equal tree
/// for every tree the parser can produce.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c == 0.0 => write!(f, "0"),
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{})", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Named(n) => write!(f, "{}", n.name()),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "-{}", Wrapped(a, prec(a) < NEG)),
            Expr::Add(a, b) => self.binary(f, a, b, "+", ADD),
            Expr::Sub(a, b) => self.binary(f, a, b, "-", ADD),
            Expr::Mul(a, b) => self.binary(f, a, b, "*", MUL),
            Expr::Div(a, b) => self.binary(f, a, b, "/", MUL),
            Expr::Pow(a, k) => write!(f, "{}^{k}", Wrapped(a, prec(a) < ATOM)),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}
