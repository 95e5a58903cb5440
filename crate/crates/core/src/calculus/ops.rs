//! Lie brackets and the exterior-calculus operators.

use std::collections::BTreeMap;

use super::chart::same_chart;
use super::field::VectorField;
use super::form::{IndexSet, KForm};
use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};

/// `[X, Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    same_chart(x.chart(), y.chart())?;
    let components = x
        .components()
        .iter()
        .zip(y.components())
        .map(|(xi, yi)| (x.apply(yi) - y.apply(xi)).simplify())
        .collect();
    VectorField::new(x.chart(), components)
}

/// The bracket formula with every partial derivative replaced by a central
/// difference of step `h`. Shares no code with the symbolic path beyond
/// expression evaluation.
pub fn fd_lie_bracket(x: &VectorField, y: &VectorField, point: &[f64], h: f64) -> Result<Vec<f64>, EvalError> {
    let dim = point.len();
    let xv = x.eval_at(point)?;
    let yv = y.eval_at(point)?;
    // jac_x[j][i] = d_j X^i
    let mut jac_x = vec![vec![0.0; dim]; dim];
    let mut jac_y = vec![vec![0.0; dim]; dim];
    for j in 0..dim {
        let mut plus = point.to_vec();
        let mut minus = point.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let (xp, xm) = (x.eval_at(&plus)?, x.eval_at(&minus)?);
        let (yp, ym) = (y.eval_at(&plus)?, y.eval_at(&minus)?);
        for i in 0..dim {
            jac_x[j][i] = (xp[i] - xm[i]) / (2.0 * h);
            jac_y[j][i] = (yp[i] - ym[i]) / (2.0 * h);
        }
    }
    Ok((0..dim)
        .map(|i| (0..dim).map(|j| xv[j] * jac_y[j][i] - yv[j] * jac_x[j][i]).sum())
        .collect())
}

/// `d(sum c_J dx^J) = sum_J sum_i d_i c_J dx^i ^ dx^J`.
pub fn exterior_derivative(form: &KForm) -> Result<KForm> {
    let chart = form.chart();
    let k = form.degree();
    if k >= chart.dim() {
        return Err(Error::DegreeOverflow {
            degree: k + 1,
            dim: chart.dim(),
        });
    }
    let mut out: BTreeMap<IndexSet, Expr> = BTreeMap::new();
    for (set, coef) in form.terms() {
        for i in (0..chart.dim()).filter(|&i| !set.contains(i)) {
            let d = coef.partial_derivative(&chart.coord(i).name);
            if d.is_zero() {
                continue;
            }
            let term = if set.count_below(i) % 2 == 0 { d } else { -d };
            push(&mut out, set.with(i), term);
        }
    }
    Ok(KForm::with_coeffs(chart, k + 1, out))
}

fn push(out: &mut BTreeMap<IndexSet, Expr>, key: IndexSet, term: Expr) {
    match out.remove(&key) {
        Some(old) => out.insert(key, old + term),
        None => out.insert(key, term),
    };
}

pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    same_chart(a.chart(), b.chart())?;
    let degree = a.degree() + b.degree();
    if degree > a.chart().dim() {
        return Err(Error::DegreeOverflow {
            degree,
            dim: a.chart().dim(),
        });
    }
    let mut out = BTreeMap::new();
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            if !sa.is_disjoint(*sb) {
                continue;
            }
            let term = ca.clone() * cb.clone();
            let term = if sa.wedge_sign(*sb) < 0.0 { -term } else { term };
            push(&mut out, sa.union(*sb), term);
        }
    }
    Ok(KForm::with_coeffs(a.chart(), degree, out))
}

/// Wedge of several forms, left to right.
pub fn wedge_all(forms: &[&KForm]) -> Result<KForm> {
    let (first, rest) = forms
        .split_first()
        .ok_or_else(|| Error::Precondition("empty wedge".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, f| wedge(&acc, f))
}

/// Contraction in the first slot: `(X _| w)(v_2, ..) = w(X, v_2, ..)`.
pub fn interior_product(x: &VectorField, form: &KForm) -> Result<KForm> {
    same_chart(x.chart(), form.chart())?;
    if form.degree() == 0 {
        return Err(Error::Precondition("cannot contract a 0-form".into()));
    }
    let mut out = BTreeMap::new();
    for (set, coef) in form.terms() {
        for (pos, i) in set.indices().into_iter().enumerate() {
            let xi = x.component(i);
            if xi.is_zero() {
                continue;
            }
            let term = xi.clone() * coef.clone();
            let term = if pos % 2 == 0 { term } else { -term };
            push(&mut out, set.without(i), term);
        }
    }
    Ok(KForm::with_coeffs(form.chart(), form.degree() - 1, out))
}

/// Cartan's formula `L_X w = X _| dw + d(X _| w)`.
pub fn lie_derivative_form(x: &VectorField, form: &KForm) -> Result<KForm> {
    same_chart(x.chart(), form.chart())?;
    let dim = form.chart().dim();
    let first = if form.degree() < dim {
        interior_product(x, &exterior_derivative(form)?)?
    } else {
        KForm::zero(form.chart(), dim)?
    };
    if form.degree() == 0 {
        return Ok(first);
    }
    first.add(&exterior_derivative(&interior_product(x, form)?)?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::calculus::Chart;

    fn r3() -> Arc<Chart> {
        Chart::boxed(&["x", "y", "z"], -1.0, 1.0).unwrap()
    }

    fn r4() -> Arc<Chart> {
        Chart::boxed(&["x", "y", "z", "w"], -1.0, 1.0).unwrap()
    }

    fn vf(c: &Arc<Chart>, s: &[&str]) -> VectorField {
        VectorField::parse(c, s).unwrap()
    }

    fn form(c: &Arc<Chart>, s: &str) -> KForm {
        KForm::parse(c, s, None).unwrap()
    }

    #[test]
    fn bracket_of_field_with_itself_vanishes() {
        let c = r3();
        let x = vf(&c, &["sin(y)", "x*z", "exp(x)"]);
        let b = lie_bracket(&x, &x).unwrap();
        assert!(b.components().iter().all(Expr::is_zero));
    }

    #[test]
    fn standard_contact_bracket() {
        let c = r3();
        let b = lie_bracket(&vf(&c, &["0", "0", "1"]), &vf(&c, &["1", "z", "0"])).unwrap();
        assert_eq!(b.components(), &[Expr::ZERO, Expr::ONE, Expr::ZERO]);
    }

    #[test]
    fn standard_engel_bracket() {
        let c = r4();
        let b = lie_bracket(&vf(&c, &["0", "0", "0", "1"]), &vf(&c, &["1", "z", "w", "0"])).unwrap();
        assert_eq!(b.components(), &[Expr::ZERO, Expr::ZERO, Expr::ONE, Expr::ZERO]);
    }

    #[test]
    fn fd_bracket_matches_exact_answer() {
        let c = r3();
        let x = vf(&c, &["0", "0", "1"]);
        let y = vf(&c, &["1", "z", "0"]);
        let v = fd_lie_bracket(&x, &y, &[0.3, -0.2, 0.7], 1e-3).unwrap();
        for (a, b) in v.iter().zip([0.0, 1.0, 0.0]) {
            assert!((a - b).abs() < 1e-6);
        }
        let same = fd_lie_bracket(&y, &y, &[0.3, -0.2, 0.7], 1e-3).unwrap();
        assert!(same.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn exterior_derivatives_of_standard_forms() {
        let c = r4();
        let d = exterior_derivative(&form(&c, "dy - z*dx")).unwrap();
        assert_eq!(d.coefficient(&[0, 2]), Expr::ONE);
        assert_eq!(d.terms().count(), 1);

        let d = exterior_derivative(&form(&c, "dz - w*dx")).unwrap();
        assert_eq!(d.coefficient(&[0, 3]), Expr::ONE);
        assert_eq!(d.terms().count(), 1);

        let d = exterior_derivative(&form(&c, "3*dx - 2*dw")).unwrap();
        assert!(d.is_structurally_zero());

        assert!(matches!(
            exterior_derivative(&form(&c, "dx*dy*dz*dw")),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn wedge_sign_bookkeeping() {
        let c = r4();
        let dxdx = wedge(&form(&c, "dx"), &form(&c, "dx")).unwrap();
        assert!(dxdx.is_structurally_zero());

        let w = wedge(&form(&c, "dy - z*dx"), &form(&c, "dx*dz")).unwrap();
        assert_eq!(w.coefficient(&[0, 1, 2]), Expr::c(-1.0));

        let w = wedge_all(&[&form(&c, "dz - w*dx"), &form(&c, "dy - z*dx"), &form(&c, "dx*dw")]).unwrap();
        assert_eq!(w.coefficient(&[0, 1, 2, 3]), Expr::c(-1.0));
        // independent check: evaluate dz^dy^dx^dw on the standard basis
        let e = |i: usize| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect::<Vec<_>>();
        let v = w.apply_to(&[0.2; 4], &[e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(v, -1.0);

        assert!(matches!(
            wedge(&form(&c, "dx*dy*dz"), &form(&c, "dx*dw")),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn contractions() {
        let c = r4();
        let dw = VectorField::coordinate(&c, 3);
        let i = interior_product(&dw, &form(&c, "dx*dy*dz*dw")).unwrap();
        assert_eq!(i.coefficient(&[0, 1, 2]), Expr::c(-1.0));

        let dy = VectorField::coordinate(&c, 1);
        let i = interior_product(&dy, &form(&c, "dx*dy")).unwrap();
        assert_eq!(i.coefficient(&[0]), Expr::c(-1.0));

        let x = vf(&c, &["y", "x*z", "1", "w^2"]);
        let om = form(&c, "sin(x)*dx*dy + z*dz*dw + dy*dw");
        let ii = interior_product(&x, &interior_product(&x, &om).unwrap()).unwrap();
        for p in [[0.1, 0.2, 0.3, 0.4], [0.9, -0.3, 0.5, -0.8]] {
            assert!(ii.eval_dense(&p).unwrap()[0].abs() < 1e-14);
        }
    }

    #[test]
    fn lie_derivative_examples() {
        let c = r4();
        let dw = VectorField::coordinate(&c, 3);
        let l = lie_derivative_form(&dw, &form(&c, "dy - z*dx")).unwrap();
        assert!(l.is_structurally_zero());

        let dx = VectorField::coordinate(&c, 0);
        let g = KForm::scalar(&c, Expr::var("x") * Expr::var("y")).unwrap();
        let dg = exterior_derivative(&g).unwrap();
        let l = lie_derivative_form(&dx, &dg).unwrap();
        assert_eq!(l, form(&c, "dy"));
    }
}
