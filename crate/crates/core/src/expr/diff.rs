use super::Expr;

impl Expr {
    /// Exact partial derivative with respect to `var`, simplified.
    pub fn partial_derivative(&self, var: &str) -> Expr {
        self.derive(var).simplify()
    }

    fn derive(&self, v: &str) -> Expr {
        match self {
            Expr::Const(_) | Expr::Named(_) => Expr::ZERO,
            Expr::Var(u) => {
                if u == v {
                    Expr::ONE
                } else {
                    Expr::ZERO
                }
            }
            Expr::Neg(a) => -a.derive(v),
            Expr::Add(a, b) => a.derive(v) + b.derive(v),
            Expr::Sub(a, b) => a.derive(v) - b.derive(v),
            Expr::Mul(a, b) => a.derive(v) * (**b).clone() + (**a).clone() * b.derive(v),
            Expr::Div(a, b) => (a.derive(v) * (**b).clone() - (**a).clone() * b.derive(v)) / (**b).clone().powi(2),
            Expr::Pow(_, 0) => Expr::ZERO,
            Expr::Pow(a, k) => Expr::c(*k as f64) * (**a).clone().powi(k - 1) * a.derive(v),
            Expr::Sin(a) => (**a).clone().cos() * a.derive(v),
            Expr::Cos(a) => -(**a).clone().sin() * a.derive(v),
            Expr::Exp(a) => (**a).clone().exp() * a.derive(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_scalar_expr, VarBinding};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_sine() {
        assert_eq!(Expr::var("z").partial_derivative("z"), Expr::ONE);
        assert_eq!(Expr::var("x").sin().partial_derivative("x"), Expr::var("x").cos());
        assert_eq!(Expr::var("x").partial_derivative("y"), Expr::ZERO);
    }

    #[test]
    fn chain_rule_against_central_differences() {
        let e = parse_scalar_expr("cos(t*(g+pi))", &["t", "g"]).unwrap();
        let d = e.partial_derivative("t");
        let closed = parse_scalar_expr("-(g+pi)*sin(t*(g+pi))", &["t", "g"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-5;
        for _ in 0..10 {
            let t: f64 = rng.gen_range(-2.0..2.0);
            let g: f64 = rng.gen_range(-2.0..2.0);
            let at = |tt: f64| VarBinding::new().with("t", tt).with("g", g);
            let sym = d.evaluate(&at(t)).unwrap();
            let fd = (e.evaluate(&at(t + h)).unwrap() - e.evaluate(&at(t - h)).unwrap()) / (2.0 * h);
            assert!((sym - fd).abs() < 1e-8, "{sym} vs {fd}");
            assert!((sym - closed.evaluate(&at(t)).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_introduces_no_variables() {
        let e = parse_scalar_expr("x*y^2/exp(z) + sin(x)", &["x", "y", "z"]).unwrap();
        for v in ["x", "y", "z", "w"] {
            assert!(e.partial_derivative(v).free_vars().is_subset(&e.free_vars()));
        }
    }
}
