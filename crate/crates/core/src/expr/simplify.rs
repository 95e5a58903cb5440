//! A small terminating rewrite system: constant folding, 0/1 identities,
//! sign normalization, `e - e -> 0`, and the Pythagorean collapse.
//!
//! Rewrites are applied bottom-up and repeated until the tree stops changing,
//! which makes `simplify` idempotent.

use super::Expr;

const MAX_PASSES: usize = 64;

impl Expr {
    pub fn simplify(&self) -> Expr {
        let mut cur = self.clone();
        for _ in 0..MAX_PASSES {
            let next = cur.simplify_pass();
            if next == cur {
                return cur;
            }
            cur = next;
        }
        cur
    }

    fn simplify_pass(&self) -> Expr {
        let s = |a: &Expr| a.simplify_pass();
        match self {
            Expr::Const(_) | Expr::Named(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(a) => neg(s(a)),
            Expr::Add(a, b) => add(s(a), s(b)),
            Expr::Sub(a, b) => sub(s(a), s(b)),
            Expr::Mul(a, b) => mul(s(a), s(b)),
            Expr::Div(a, b) => div(s(a), s(b)),
            Expr::Pow(a, k) => pow(s(a), *k),
            Expr::Sin(a) => sin(s(a)),
            Expr::Cos(a) => cos(s(a)),
            Expr::Exp(a) => fold1(s(a), f64::exp, Expr::exp),
        }
    }
}

/// Constant value of a folded leaf (`Const` or named constant).
fn lit(e: &Expr) -> Option<f64> {
    match e {
        Expr::Const(c) => Some(*c),
        Expr::Named(n) => Some(n.value()),
        _ => None,
    }
}

fn fold1(a: Expr, f: fn(f64) -> f64, build: fn(Expr) -> Expr) -> Expr {
    match lit(&a) {
        Some(c) if f(c).is_finite() => Expr::Const(f(c)),
        _ => build(a),
    }
}

fn neg(a: Expr) -> Expr {
    if let Some(c) = lit(&a) {
        return Expr::Const(-c);
    }
    match a {
        Expr::Neg(x) => *x,
        Expr::Sub(x, y) => Expr::Sub(y, x),
        a => -a,
    }
}

fn is_pyth_pair(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Pow(p, 2), Expr::Pow(q, 2)) => matches!(
            (&**p, &**q),
            (Expr::Sin(u), Expr::Cos(v)) | (Expr::Cos(u), Expr::Sin(v)) if u == v
        ),
        _ => false,
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if let (Some(x), Some(y)) = (lit(&a), lit(&b)) {
        return Expr::Const(x + y);
    }
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    if is_pyth_pair(&a, &b) {
        return Expr::ONE;
    }
    // k*sin(u)^2 + k*cos(u)^2
    if let (Expr::Mul(k1, p), Expr::Mul(k2, q)) = (&a, &b) {
        if k1 == k2 && is_pyth_pair(p, q) {
            return (**k1).clone();
        }
    }
    if a == b {
        return mul(Expr::c(2.0), a);
    }
    match (a, b) {
        (a, Expr::Neg(y)) => sub(a, *y),
        (Expr::Neg(x), b) => sub(b, *x),
        (a, b) => a + b,
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if let (Some(x), Some(y)) = (lit(&a), lit(&b)) {
        return Expr::Const(x - y);
    }
    if b.is_zero() {
        return a;
    }
    if a.is_zero() {
        return neg(b);
    }
    if a == b {
        return Expr::ZERO;
    }
    match b {
        Expr::Neg(y) => add(a, *y),
        b => a - b,
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (lit(&a), lit(&b)) {
        (Some(x), Some(y)) => return Expr::Const(x * y),
        (Some(0.0), _) => return Expr::ZERO,
        (_, Some(0.0)) => return Expr::ZERO,
        (Some(1.0), _) => return b,
        (_, Some(1.0)) => return a,
        (Some(-1.0), _) => return neg(b),
        (_, Some(-1.0)) => return neg(a),
        // constants to the left
        (None, Some(_)) => return mul(b, a),
        _ => {}
    }
    if let (Some(x), Expr::Mul(k, rest)) = (lit(&a), &b) {
        if let Some(y) = lit(k) {
            return mul(Expr::Const(x * y), (**rest).clone());
        }
    }
    if a == b {
        return Expr::Pow(Box::new(a), 2);
    }
    match (a, b) {
        (Expr::Neg(x), b) => neg(mul(*x, b)),
        (a, Expr::Neg(y)) => neg(mul(a, *y)),
        (Expr::Pow(x, j), Expr::Pow(y, k)) if x == y => pow(*x, j + k),
        (Expr::Pow(x, j), b) if *x == b => pow(*x, j + 1),
        (a, Expr::Pow(y, k)) if *y == a => pow(*y, k + 1),
        (a, b) => a * b,
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if let (Some(x), Some(y)) = (lit(&a), lit(&b)) {
        if y != 0.0 {
            return Expr::Const(x / y);
        }
    }
    if a.is_zero() {
        return Expr::ZERO;
    }
    match lit(&b) {
        Some(1.0) => return a,
        Some(-1.0) => return neg(a),
        _ => {}
    }
    match (a, b) {
        (Expr::Neg(x), b) => neg(div(*x, b)),
        (a, Expr::Neg(y)) => neg(div(a, *y)),
        (a, b) => a / b,
    }
}

fn pow(a: Expr, k: i32) -> Expr {
    if k == 0 {
        return Expr::ONE;
    }
    if k == 1 {
        return a;
    }
    if let Some(c) = lit(&a) {
        if c != 0.0 || k > 0 {
            return Expr::Const(c.powi(k));
        }
    }
    match a {
        Expr::Pow(x, j) => match j.checked_mul(k) {
            Some(jk) => pow(*x, jk),
            None => Expr::Pow(Box::new(Expr::Pow(x, j)), k),
        },
        Expr::Neg(x) if k % 2 == 0 => pow(*x, k),
        a => Expr::Pow(Box::new(a), k),
    }
}

fn sin(a: Expr) -> Expr {
    match a {
        Expr::Neg(x) => neg(sin(*x)),
        a => fold1(a, f64::sin, Expr::sin),
    }
}

fn cos(a: Expr) -> Expr {
    match a {
        Expr::Neg(x) => cos(*x),
        a => fold1(a, f64::cos, Expr::cos),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_scalar_expr, VarBinding};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Expr {
        parse_scalar_expr(s, &["x", "y", "t"]).unwrap()
    }

    #[test]
    fn zero_times_anything() {
        assert_eq!(p("0*x + y").simplify(), Expr::var("y"));
    }

    #[test]
    fn pythagorean_identity() {
        assert_eq!(p("sin(t)^2 + cos(t)^2").simplify(), Expr::ONE);
        assert_eq!(p("cos(t)^2 + sin(t)^2").simplify(), Expr::ONE);
        assert_eq!(p("3*sin(t)^2 + 3*cos(t)^2").simplify(), Expr::c(3.0));
    }

    #[test]
    fn pythagorean_after_product_normalization() {
        let e = p("cos(t)*cos(t) + sin(t)*sin(t)");
        let s = e.simplify();
        assert_eq!(s, Expr::ONE);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let t: f64 = rng.gen_range(-10.0..10.0);
            let b = VarBinding::new().with("t", t);
            assert!((e.evaluate(&b).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn self_difference() {
        assert_eq!(p("sin(x*y) - sin(x*y)").simplify(), Expr::ZERO);
    }

    #[test]
    fn keeps_division_by_literal_zero() {
        let e = p("1/0").simplify();
        assert!(e.evaluate(&VarBinding::new()).is_err());
    }

    #[test]
    fn constant_folding_and_signs() {
        assert_eq!(p("2*3 + 1").simplify(), Expr::c(7.0));
        assert_eq!(p("-(-x)").simplify(), Expr::var("x"));
        assert_eq!(p("x + -y").simplify(), p("x - y"));
        assert_eq!(p("cos(-x)").simplify(), p("cos(x)"));
        assert_eq!(p("2*(3*x)").simplify(), p("6*x"));
        assert_eq!(p("x*2").simplify(), p("2*x"));
        assert_eq!(p("x^2*x").simplify(), p("x^3"));
        assert_eq!(p("cos(pi)").simplify(), Expr::c(-1.0));
    }
}
