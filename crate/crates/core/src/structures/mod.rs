//! Defining conditions of contact, even-contact, and Engel structures, and
//! the derived objects (`D^2`, its annihilator, the characteristic field).

mod report;

use std::sync::Arc;

use serde::Serialize;

pub(crate) use report::per_point;
pub use report::{CheckReport, Criterion, VerificationReport};

use crate::calculus::{
    exterior_derivative, interior_product, lie_bracket, lie_derivative_form, sample_points, wedge, wedge_all, Chart,
    KForm, SamplePlan, VectorField,
};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numeric::{numerical_rank, singular_values};
use crate::tolerance::Tolerances;

/// A rank-2 plane field given by a frame `(X, Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution2 {
    x: VectorField,
    y: VectorField,
}

impl Distribution2 {
    pub fn new(x: VectorField, y: VectorField) -> Result<Self> {
        crate::calculus::same_chart(x.chart(), y.chart())?;
        Ok(Distribution2 { x, y })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.x.chart()
    }

    pub fn x(&self) -> &VectorField {
        &self.x
    }

    pub fn y(&self) -> &VectorField {
        &self.y
    }

    /// Same plane field with both generators multiplied by `f`.
    pub fn rescaled(&self, f: &Expr) -> Self {
        Distribution2 {
            x: self.x.scale(f),
            y: self.y.scale(f),
        }
    }
}

/// A pair of 1-forms on a 4-chart, in the order `(alpha, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EngelPair {
    pub alpha: KForm,
    pub beta: KForm,
}

impl EngelPair {
    pub fn new(alpha: KForm, beta: KForm) -> Result<Self> {
        crate::calculus::same_chart(alpha.chart(), beta.chart())?;
        require_dim(alpha.chart(), 4)?;
        if alpha.degree() != 1 || beta.degree() != 1 {
            return Err(Error::Precondition("an Engel pair consists of 1-forms".into()));
        }
        Ok(EngelPair { alpha, beta })
    }

    pub fn swapped(&self) -> Self {
        EngelPair {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }
}

fn require_dim(chart: &Chart, dim: usize) -> Result<()> {
    if chart.dim() == dim {
        Ok(())
    } else {
        Err(Error::WrongDimension {
            expected: dim,
            found: chart.dim(),
        })
    }
}

fn require_one_form(f: &KForm) -> Result<()> {
    if f.degree() == 1 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "expected a 1-form, got degree {}",
            f.degree()
        )))
    }
}

pub(crate) fn form_norms(f: &KForm, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    per_point(points, |p| Ok(f.norm_at(p)?))
}

pub(crate) fn max_form_norm(f: &KForm, points: &[Vec<f64>]) -> Result<f64> {
    Ok(form_norms(f, points)?.into_iter().fold(0.0, f64::max))
}

pub(crate) fn max_field_norm(x: &VectorField, points: &[Vec<f64>]) -> Result<f64> {
    let norms = per_point(points, |p| Ok(x.eval_at(p)?.iter().map(|v| v * v).sum::<f64>().sqrt()))?;
    Ok(norms.into_iter().fold(0.0, f64::max))
}

pub(crate) fn rank_check(
    name: &str,
    fields: &[&VectorField],
    expected: usize,
    points: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<CheckReport> {
    let cols = per_point(points, |p| {
        fields
            .iter()
            .map(|f| f.eval_at(p).map_err(Error::from))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(CheckReport::rank(name, cols, expected, tol.rank))
}

/// Rank of `[X(p), Y(p), X(p + P e_i), Y(p + P e_i)]` over periodic axes `i`;
/// equals 2 iff the plane field respects every period.
fn periodic_span_check(d: &Distribution2, points: &[Vec<f64>], tol: &Tolerances) -> Result<Option<CheckReport>> {
    let chart = d.chart();
    let periodic: Vec<(usize, f64)> = chart
        .coords()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.period.map(|p| (i, p)))
        .collect();
    if periodic.is_empty() {
        return Ok(None);
    }
    let ranks = per_point(points, |p| {
        let mut worst = 0;
        let mut worst_sv = Vec::new();
        for &(i, period) in &periodic {
            let mut q = p.to_vec();
            q[i] += period;
            let cols = vec![d.x.eval_at(p)?, d.y.eval_at(p)?, d.x.eval_at(&q)?, d.y.eval_at(&q)?];
            let sv = singular_values(&cols);
            let r = numerical_rank(&sv, tol.rank);
            if r >= worst {
                worst = r;
                worst_sv = sv;
            }
        }
        Ok((worst, worst_sv))
    })?;
    let values: Vec<f64> = ranks.iter().map(|(r, _)| *r as f64).collect();
    let first_failure = values.iter().position(|r| *r as usize != 2);
    Ok(Some(CheckReport {
        name: "periodic_span".into(),
        criterion: Criterion::Rank { expected: 2 },
        values,
        singular_values: ranks.into_iter().map(|(_, s)| s).collect(),
        scale: 1.0,
        threshold: tol.rank,
        passed: first_failure.is_none(),
        first_failure,
    }))
}

/// `alpha ^ d alpha` never vanishes on a 3-chart.
pub fn check_contact_3d(alpha: &KForm, plan: &SamplePlan, tol: &Tolerances) -> Result<VerificationReport> {
    require_dim(alpha.chart(), 3)?;
    require_one_form(alpha)?;
    let points = sample_points(alpha.chart(), plan);
    let top = wedge(alpha, &exterior_derivative(alpha)?)?;
    let check = CheckReport::never_vanishing("alpha^dalpha", form_norms(&top, &points)?, tol.nonvanishing);
    Ok(VerificationReport::new("contact", tol, points, vec![check]))
}

/// `beta ^ d beta` never vanishes on a 4-chart.
pub fn check_even_contact(beta: &KForm, plan: &SamplePlan, tol: &Tolerances) -> Result<VerificationReport> {
    require_dim(beta.chart(), 4)?;
    require_one_form(beta)?;
    let points = sample_points(beta.chart(), plan);
    let three = wedge(beta, &exterior_derivative(beta)?)?;
    let check = CheckReport::never_vanishing("beta^dbeta", form_norms(&three, &points)?, tol.nonvanishing);
    Ok(VerificationReport::new("even_contact", tol, points, vec![check]))
}

/// The three Engel-pair conditions, in order:
/// `alpha^beta^dalpha` never vanishes, `alpha^beta^dbeta` vanishes
/// identically, `beta^dbeta` never vanishes.
pub fn check_engel_pair(pair: &EngelPair, plan: &SamplePlan, tol: &Tolerances) -> Result<VerificationReport> {
    let points = sample_points(pair.alpha.chart(), plan);
    let da = exterior_derivative(&pair.alpha)?;
    let db = exterior_derivative(&pair.beta)?;

    let c1 = wedge_all(&[&pair.alpha, &pair.beta, &da])?;
    let c2 = wedge_all(&[&pair.alpha, &pair.beta, &db])?;
    let c3 = wedge(&pair.beta, &db)?;

    let scale2 =
        max_form_norm(&pair.alpha, &points)? * max_form_norm(&pair.beta, &points)? * max_form_norm(&db, &points)?;
    let checks = vec![
        CheckReport::never_vanishing("alpha^beta^dalpha", form_norms(&c1, &points)?, tol.nonvanishing),
        CheckReport::identically_zero("alpha^beta^dbeta", form_norms(&c2, &points)?, scale2, tol.zero),
        CheckReport::never_vanishing("beta^dbeta", form_norms(&c3, &points)?, tol.nonvanishing),
    ];
    Ok(VerificationReport::new("engel_pair", tol, points, checks))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairOrder {
    AsGiven,
    Swapped,
    Both,
    Neither,
}

/// Verdicts for both orderings of a pair; never reorders silently.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPairReport {
    pub as_given: VerificationReport,
    pub swapped: VerificationReport,
    pub satisfied_by: PairOrder,
}

pub fn check_engel_pair_auto(pair: &EngelPair, plan: &SamplePlan, tol: &Tolerances) -> Result<OrientedPairReport> {
    let as_given = check_engel_pair(pair, plan, tol)?;
    let swapped = check_engel_pair(&pair.swapped(), plan, tol)?;
    let satisfied_by = match (as_given.passed, swapped.passed) {
        (true, true) => PairOrder::Both,
        (true, false) => PairOrder::AsGiven,
        (false, true) => PairOrder::Swapped,
        (false, false) => PairOrder::Neither,
    };
    Ok(OrientedPairReport {
        as_given,
        swapped,
        satisfied_by,
    })
}

/// Growth vector check: rank `D = 2`, `D^2 = 3`, `D^3 = 4` at every sample.
pub fn check_engel_frame(d: &Distribution2, plan: &SamplePlan, tol: &Tolerances) -> Result<VerificationReport> {
    require_dim(d.chart(), 4)?;
    let points = sample_points(d.chart(), plan);
    let (x, y) = (&d.x, &d.y);
    let xy = lie_bracket(x, y)?;
    let xxy = lie_bracket(x, &xy)?;
    let yxy = lie_bracket(y, &xy)?;
    let mut checks = vec![
        rank_check("rank_D", &[x, y], 2, &points, tol)?,
        rank_check("rank_D2", &[x, y, &xy], 3, &points, tol)?,
        rank_check("rank_D3", &[x, y, &xy, &xxy, &yxy], 4, &points, tol)?,
    ];
    if let Some(c) = periodic_span_check(d, &points, tol)? {
        checks.push(c);
    }
    Ok(VerificationReport::new("engel_frame", tol, points, checks))
}

/// `(X, Y, [X, Y])`, a frame of `D^2`; errors where it is rank deficient.
pub fn derived_square(d: &Distribution2, plan: &SamplePlan, tol: &Tolerances) -> Result<[VectorField; 3]> {
    let xy = lie_bracket(&d.x, &d.y)?;
    let frame = [d.x.clone(), d.y.clone(), xy];
    let points = sample_points(d.chart(), plan);
    let check = rank_check("rank_D2", &[&frame[0], &frame[1], &frame[2]], 3, &points, tol)?;
    if let Some(i) = check.first_failure {
        return Err(Error::RankDeficient {
            expected: 3,
            found: check.values[i] as usize,
            point: points[i].clone(),
        });
    }
    Ok(frame)
}

fn det3(m: [[&Expr; 3]; 3]) -> Expr {
    let t = |a: &Expr, b: &Expr, c: &Expr| a.clone() * b.clone() * c.clone();
    let pos = t(m[0][0], m[1][1], m[2][2]) + t(m[0][1], m[1][2], m[2][0]) + t(m[0][2], m[1][0], m[2][1]);
    let neg = t(m[0][2], m[1][1], m[2][0]) + t(m[0][0], m[1][2], m[2][1]) + t(m[0][1], m[1][0], m[2][2]);
    (pos - neg).simplify()
}

/// The 1-form annihilating a rank-3 frame on a 4-chart:
/// `beta_i = (-1)^i det(minor without row i)`.
pub fn annihilator_1form(frame: &[VectorField; 3], plan: &SamplePlan, tol: &Tolerances) -> Result<KForm> {
    let chart = frame[0].chart();
    require_dim(chart, 4)?;
    crate::calculus::same_chart(chart, frame[1].chart())?;
    crate::calculus::same_chart(chart, frame[2].chart())?;
    let coeffs: Vec<Expr> = (0..4)
        .map(|skip| {
            let rows: Vec<usize> = (0..4).filter(|&r| r != skip).collect();
            let m = [0, 1, 2].map(|r| [0, 1, 2].map(|c| frame[c].component(rows[r])));
            let det = det3(m);
            if skip % 2 == 0 {
                det
            } else {
                (-det).simplify()
            }
        })
        .collect();
    let beta = KForm::one_form(chart, coeffs)?;

    let points = sample_points(chart, plan);
    let rank = rank_check("rank_frame", &[&frame[0], &frame[1], &frame[2]], 3, &points, tol)?;
    if let Some(i) = rank.first_failure {
        return Err(Error::RankDeficient {
            expected: 3,
            found: rank.values[i] as usize,
            point: points[i].clone(),
        });
    }
    let scale = max_form_norm(&beta, &points)?
        * frame
            .iter()
            .map(|f| max_field_norm(f, &points))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
    for f in frame {
        let pairing = interior_product(f, &beta)?;
        let vals = form_norms(&pairing, &points)?;
        if let Some(i) = vals.iter().position(|v| !(*v <= tol.annihilation * scale.max(1.0))) {
            return Err(Error::Precondition(format!(
                "annihilator residual {} at {:?}",
                vals[i], points[i]
            )));
        }
    }
    Ok(beta)
}

/// Solves `X0 _| omega = beta ^ d beta` for `X0`.
pub fn characteristic_vector_field(
    beta: &KForm,
    omega: &KForm,
    plan: &SamplePlan,
    tol: &Tolerances,
) -> Result<VectorField> {
    let chart = beta.chart();
    require_dim(chart, 4)?;
    require_one_form(beta)?;
    crate::calculus::same_chart(chart, omega.chart())?;
    if omega.degree() != 4 {
        return Err(Error::Precondition("the volume form must have degree 4".into()));
    }
    let points = sample_points(chart, plan);
    let rho = omega.coefficient(&[0, 1, 2, 3]);
    let rho_vals = per_point(&points, |p| Ok(chart.eval(&rho, p)?.abs()))?;
    let rho_check = CheckReport::never_vanishing("volume", rho_vals, tol.nonvanishing);
    if let Some(i) = rho_check.first_failure {
        return Err(Error::Vanishing {
            what: "volume form".into(),
            point: points[i].clone(),
        });
    }

    let sigma = wedge(beta, &exterior_derivative(beta)?)?;
    let full = crate::calculus::IndexSet::from_indices(&[0, 1, 2, 3]).expect("distinct");
    let components: Vec<Expr> = (0..4)
        .map(|i| {
            let c = sigma.coefficient_at(full.without(i));
            let signed = if i % 2 == 0 { c } else { -c };
            (signed / rho.clone()).simplify()
        })
        .collect();
    let x0 = VectorField::new(chart, components)?;

    let residual = interior_product(&x0, omega)?.sub(&sigma)?;
    let scale = max_form_norm(&sigma, &points)?.max(1.0);
    let vals = form_norms(&residual, &points)?;
    if let Some(i) = vals.iter().position(|v| !(*v <= tol.annihilation * scale)) {
        return Err(Error::Precondition(format!(
            "contraction equation residual {} at {:?}",
            vals[i], points[i]
        )));
    }
    Ok(x0)
}

/// `X0` spans a line field inside `ker beta` that preserves it:
/// `(L_X0 beta) ^ beta = 0` and `beta(X0) = 0`.
///
/// The report also carries the pointwise proportionality factor `f` with
/// `L_X0 beta = f beta` as the check named `proportionality`
/// (informational, always passes).
pub fn check_characteristic(
    x0: &VectorField,
    beta: &KForm,
    plan: &SamplePlan,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    require_one_form(beta)?;
    crate::calculus::same_chart(x0.chart(), beta.chart())?;
    let points = sample_points(beta.chart(), plan);
    let lie = lie_derivative_form(x0, beta)?;
    let preserved = wedge(&lie, beta)?;
    let pairing = interior_product(x0, beta)?;

    let beta_max = max_form_norm(beta, &points)?;
    // `|beta|` is added to the scale so that an `L_X0 beta` made of rounding
    // noise is still judged against an O(1) magnitude.
    let checks = vec![
        CheckReport::identically_zero(
            "lie_beta^beta",
            form_norms(&preserved, &points)?,
            (max_form_norm(&lie, &points)? + beta_max) * beta_max,
            tol.zero,
        ),
        CheckReport::identically_zero(
            "beta(X0)",
            form_norms(&pairing, &points)?,
            max_field_norm(x0, &points)? * beta_max,
            tol.zero,
        ),
        {
            let f = per_point(&points, |p| {
                let l = lie.eval_dense(p)?;
                let b = beta.eval_dense(p)?;
                let bb: f64 = b.iter().map(|v| v * v).sum();
                Ok(if bb > 0.0 {
                    l.iter().zip(&b).map(|(u, v)| u * v).sum::<f64>() / bb
                } else {
                    0.0
                })
            })?;
            CheckReport {
                name: "proportionality".into(),
                criterion: Criterion::IdenticallyZero,
                values: f,
                singular_values: Vec::new(),
                scale: f64::INFINITY,
                threshold: f64::INFINITY,
                passed: true,
                first_failure: None,
            }
        },
    ];
    Ok(VerificationReport::new("characteristic", tol, points, checks))
}

/// Rank of `(X0, V, [X0, V])`; equal to 3 everywhere iff the plane field
/// `span(X0, V)` satisfies the twisting condition `D + [L, D] = E`.
pub fn check_twisting_condition(
    x0: &VectorField,
    v: &VectorField,
    plan: &SamplePlan,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let bracket = lie_bracket(x0, v)?;
    let points = sample_points(x0.chart(), plan);
    rank_check("twisting_condition", &[x0, v, &bracket], 3, &points, tol)
}

#[cfg(test)]
mod tests;
