//! Prolongation of framed contact structures, deprolongation, and the
//! development mapping.

mod develop;

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

pub use develop::{AngleProfile, Development};

use crate::calculus::{lie_bracket, same_chart, sample_points, Chart, Coordinate, KForm, SamplePlan, VectorField};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::structures::{
    annihilator_1form, check_characteristic, check_contact_3d, derived_square, max_form_norm, per_point, rank_check,
    Distribution2, VerificationReport,
};
use crate::tolerance::Tolerances;

/// Name of the circle fiber coordinate of a prolongation.
pub const PROLONGATION_FIBER: &str = "theta";

/// An ordered, positively oriented frame `(V0, V1)` of a contact structure on
/// a 3-chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactFrame {
    v0: VectorField,
    v1: VectorField,
}

impl ContactFrame {
    /// Builds the frame and verifies that it spans a contact structure.
    pub fn new(v0: VectorField, v1: VectorField, plan: &SamplePlan, tol: &Tolerances) -> Result<Self> {
        let frame = ContactFrame::unchecked(v0, v1)?;
        let report = frame.verify(plan, tol)?;
        match report.first_failure() {
            None => Ok(frame),
            Some((check, point)) => Err(Error::NotContact(format!("{check} fails at {point:?}"))),
        }
    }

    pub(crate) fn unchecked(v0: VectorField, v1: VectorField) -> Result<Self> {
        same_chart(v0.chart(), v1.chart())?;
        if v0.chart().dim() != 3 {
            return Err(Error::WrongDimension {
                expected: 3,
                found: v0.chart().dim(),
            });
        }
        Ok(ContactFrame { v0, v1 })
    }

    /// Rank 2 of `(V0, V1)` and rank 3 of `(V0, V1, [V0, V1])`.
    pub fn verify(&self, plan: &SamplePlan, tol: &Tolerances) -> Result<VerificationReport> {
        let points = sample_points(self.chart(), plan);
        let bracket = lie_bracket(&self.v0, &self.v1)?;
        let checks = vec![
            rank_check("rank_frame", &[&self.v0, &self.v1], 2, &points, tol)?,
            rank_check("rank_contact", &[&self.v0, &self.v1, &bracket], 3, &points, tol)?,
        ];
        Ok(VerificationReport::new("contact_frame", tol, points, checks))
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.v0.chart()
    }

    pub fn v0(&self) -> &VectorField {
        &self.v0
    }

    pub fn v1(&self) -> &VectorField {
        &self.v1
    }

    /// `(V1, V0)`: the same plane with the opposite orientation.
    pub fn swapped(&self) -> Self {
        ContactFrame {
            v0: self.v1.clone(),
            v1: self.v0.clone(),
        }
    }

    /// `(f1 V0, f2 V0 + f3 V1)`; orientation is kept iff `f1 f3 > 0`.
    pub fn reframed(&self, f1: &Expr, f2: &Expr, f3: &Expr) -> Result<Self> {
        let v0 = self.v0.scale(f1);
        let v1 = VectorField::combine(f2, &self.v0, f3, &self.v1)?;
        ContactFrame::unchecked(v0, v1)
    }

    /// A 1-form with kernel `span(V0, V1)`: the cross product `V0 x V1`
    /// read as a covector.
    pub fn contact_form(&self) -> Result<KForm> {
        let a = self.v0.components();
        let b = self.v1.components();
        let cross = |i: usize, j: usize| (a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone()).simplify();
        KForm::one_form(self.chart(), vec![cross(1, 2), cross(2, 0), cross(0, 1)])
    }
}

/// Extends a base field by a zero fiber component.
pub(crate) fn lift(field: &VectorField, product: &Arc<Chart>) -> Result<VectorField> {
    let mut comps = field.components().to_vec();
    comps.push(Expr::ZERO);
    VectorField::new(product, comps)
}

/// `cos(h) V0 + sin(h) V1` on the product chart.
pub(crate) fn rotated(frame: &ContactFrame, angle: &Expr, product: &Arc<Chart>) -> Result<VectorField> {
    let v0 = lift(frame.v0(), product)?;
    let v1 = lift(frame.v1(), product)?;
    Ok(VectorField::combine(&angle.clone().cos(), &v0, &angle.clone().sin(), &v1)?.simplify())
}

/// The `n`-fold prolongation `{d/dtheta, cos(n theta/2) V0 + sin(n theta/2) V1}`
/// on `M x S^1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProlongedEngel {
    frame: ContactFrame,
    n: u32,
    distribution: Distribution2,
}

impl ProlongedEngel {
    pub fn chart(&self) -> &Arc<Chart> {
        self.distribution.chart()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn frame(&self) -> &ContactFrame {
        &self.frame
    }

    pub fn distribution(&self) -> &Distribution2 {
        &self.distribution
    }

    pub fn fiber_field(&self) -> VectorField {
        VectorField::coordinate(self.chart(), 3)
    }
}

pub fn prolong(frame: &ContactFrame, n: i64) -> Result<ProlongedEngel> {
    if n < 1 {
        return Err(Error::Precondition(format!(
            "covering index must be at least 1, got {n}"
        )));
    }
    let chart = frame
        .chart()
        .product(Coordinate::periodic(PROLONGATION_FIBER, 0.0, TAU))?;
    let angle = Expr::c(n as f64 / 2.0) * Expr::var(PROLONGATION_FIBER);
    let v = rotated(frame, &angle, &chart)?;
    let distribution = Distribution2::new(VectorField::coordinate(&chart, 3), v)?;
    Ok(ProlongedEngel {
        frame: frame.clone(),
        n: n as u32,
        distribution,
    })
}

/// The even-contact form `beta` with `ker beta = D^2`, after checking that
/// the fiber field spans the characteristic line field.
pub fn fiber_characteristic_form(d: &Distribution2, plan: &SamplePlan, tol: &Tolerances) -> Result<KForm> {
    let chart = d.chart();
    chart.fiber()?;
    let square = derived_square(d, plan, tol)?;
    let beta = annihilator_1form(&square, plan, tol)?;
    let points = sample_points(chart, plan);
    let scale = max_form_norm(&beta, &points)?;
    let fiber_coef = beta.coefficient(&[3]);
    let fiber_vals = per_point(&points, |p| Ok(chart.eval(&fiber_coef, p)?.abs()))?;
    if let Some(i) = fiber_vals.iter().position(|v| !(*v <= tol.zero * scale)) {
        return Err(Error::FiberNotCharacteristic(format!(
            "fiber coefficient {} of the even-contact form at {:?}",
            fiber_vals[i], points[i]
        )));
    }
    let report = check_characteristic(&VectorField::coordinate(chart, 3), &beta, plan, tol)?;
    if let Some((check, point)) = report.first_failure() {
        return Err(Error::FiberNotCharacteristic(format!("{check} fails at {point:?}")));
    }
    Ok(beta)
}

/// The contact form `pi_* D^2` on the base, read off on the section
/// `fiber = section`.
pub fn deprolong(d: &Distribution2, section: f64, plan: &SamplePlan, tol: &Tolerances) -> Result<KForm> {
    let beta = fiber_characteristic_form(d, plan, tol)?;
    let chart = d.chart();
    let fiber = chart.fiber()?.name.clone();
    let base = chart.base()?;
    let coeffs = (0..3)
        .map(|i| beta.coefficient(&[i]).substitute(&fiber, &Expr::c(section)).simplify())
        .collect();
    let alpha = KForm::one_form(&base, coeffs)?;
    let report = check_contact_3d(&alpha, plan, tol)?;
    if let Some((check, point)) = report.first_failure() {
        return Err(Error::NotContact(format!("{check} fails at {point:?}")));
    }
    Ok(alpha)
}

/// The graph function `p -> g(p) + n pi` of the developed end section.
pub fn develop_section(frame: &ContactFrame, g: &Expr, n: i64, plan: &SamplePlan) -> Result<Expr> {
    if n < 0 {
        return Err(Error::Precondition(format!("twist must be non-negative, got {n}")));
    }
    let chart = frame.chart();
    chart.check_expr(g)?;
    let points = sample_points(chart, plan);
    let values = per_point(&points, |p| Ok(chart.eval(g, p)?))?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0 && min <= PI) {
        return Err(Error::Normalization(format!("min g = {min} is outside (0, pi]")));
    }
    Ok((g.clone() + Expr::c(n as f64) * Expr::pi()).simplify())
}

#[cfg(test)]
mod tests;
