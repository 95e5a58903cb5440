//! Twisting numbers, minimal twisting numbers, and induced Legendrian
//! line fields.

use std::f64::consts::PI;

use serde::Serialize;

use crate::calculus::{same_chart, sample_points, SamplePlan};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numeric::{line_angle, projective_angle};
use crate::prolongation::{ContactFrame, Development};
use crate::structures::{per_point, Distribution2};
use crate::tolerance::Tolerances;

/// Distance to the nearest integer below which a fiber total counts as an
/// integer number of half turns.
pub const INTEGER_TOL: f64 = 1e-6;
/// Distance of `min phi` to a multiple of `pi` that triggers the boundary
/// warning.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Twisting number on `M x S^1`, in units of `pi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistReport {
    /// Degree with respect to the orientation of the given frame.
    pub signed: i64,
    pub absolute: u64,
    /// `(s(end) - s(start)) / pi` per base point.
    pub totals: Vec<f64>,
}

pub fn twisting_number(
    d: &Distribution2,
    frame: &ContactFrame,
    base_points: &[Vec<f64>],
    plan: &SamplePlan,
    tol: &Tolerances,
) -> Result<TwistReport> {
    if base_points.is_empty() {
        return Err(Error::Precondition("no base points".into()));
    }
    if !d.chart().fiber()?.is_periodic() {
        return Err(Error::Precondition("the twisting number needs a periodic fiber".into()));
    }
    let dev = Development::new(d, frame, plan, tol)?;
    let totals = per_point(base_points, |p| Ok(dev.profile(p)?.total() / PI))?;
    let mut rounded = Vec::with_capacity(totals.len());
    for (p, t) in base_points.iter().zip(&totals) {
        let r = t.round();
        if (t - r).abs() > INTEGER_TOL {
            return Err(Error::NonIntegerTwist {
                total: *t,
                point: p.clone(),
            });
        }
        rounded.push(r as i64);
    }
    if rounded.iter().any(|r| *r != rounded[0]) {
        return Err(Error::TwistDisagreement(rounded));
    }
    Ok(TwistReport {
        signed: rounded[0],
        absolute: rounded[0].unsigned_abs(),
        totals,
    })
}

/// Minimal twisting number on `M x I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalTwistReport {
    pub value: u64,
    /// `min_p phi(p, 1)`.
    pub min_angle: f64,
    /// Set when `min_angle` is within `BOUNDARY_TOL` of a multiple of `pi`.
    pub boundary_warning: bool,
    /// `phi(p, 1)` per base point.
    pub angles: Vec<f64>,
}

/// `floor(min_p phi(p, 1) / pi)`, with `phi` the development angle measured
/// from the line at the start of the fiber.
pub fn minimal_twisting_number(
    d: &Distribution2,
    frame: &ContactFrame,
    plan: &SamplePlan,
    tol: &Tolerances,
) -> Result<MinimalTwistReport> {
    if d.chart().fiber()?.is_periodic() {
        return Err(Error::Precondition(
            "the minimal twisting number needs an interval fiber".into(),
        ));
    }
    let dev = Development::new(d, frame, plan, tol)?;
    let points = sample_points(frame.chart(), plan);
    let angles = per_point(&points, |p| Ok(dev.profile(p)?.total()))?;
    if let Some(i) = angles.iter().position(|a| *a < -BOUNDARY_TOL) {
        return Err(Error::NegativeAngleChange {
            change: angles[i],
            point: points[i].clone(),
        });
    }
    let min_angle = angles.iter().copied().fold(f64::INFINITY, f64::min);
    let halfturns = min_angle / PI;
    let nearest = halfturns.round();
    let boundary_warning = (min_angle - nearest * PI).abs() <= BOUNDARY_TOL;
    let value = if boundary_warning { nearest } else { halfturns.floor() };
    Ok(MinimalTwistReport {
        value: value.max(0.0) as u64,
        min_angle,
        boundary_warning,
        angles,
    })
}

/// The line field `span(a V0 + b V1)` tangent to a framed contact structure.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendrianLineField {
    frame: ContactFrame,
    a: Expr,
    b: Expr,
}

impl LegendrianLineField {
    /// Checks `a^2 + b^2 >= nonzero_sq` at every sample.
    pub fn new(frame: &ContactFrame, a: Expr, b: Expr, plan: &SamplePlan, tol: &Tolerances) -> Result<Self> {
        let chart = frame.chart();
        chart.check_expr(&a)?;
        chart.check_expr(&b)?;
        let field = LegendrianLineField {
            frame: frame.clone(),
            a,
            b,
        };
        let points = sample_points(chart, plan);
        let norms = per_point(&points, |p| {
            let (a, b) = field.coefficients_at(p)?;
            Ok(a * a + b * b)
        })?;
        if let Some(i) = norms.iter().position(|n| !(*n >= tol.nonzero_sq)) {
            return Err(Error::Vanishing {
                what: "line field coefficients".into(),
                point: points[i].clone(),
            });
        }
        Ok(field)
    }

    /// `span(V0)`.
    pub fn first_axis(frame: &ContactFrame) -> Self {
        LegendrianLineField {
            frame: frame.clone(),
            a: Expr::ONE,
            b: Expr::ZERO,
        }
    }

    pub fn frame(&self) -> &ContactFrame {
        &self.frame
    }

    pub fn a(&self) -> &Expr {
        &self.a
    }

    pub fn b(&self) -> &Expr {
        &self.b
    }

    pub fn coefficients_at(&self, p: &[f64]) -> Result<(f64, f64)> {
        let chart = self.frame.chart();
        Ok((chart.eval(&self.a, p)?, chart.eval(&self.b, p)?))
    }

    /// `a V0 + b V1` at `p`.
    pub fn vector_at(&self, p: &[f64]) -> Result<Vec<f64>> {
        let (a, b) = self.coefficients_at(p)?;
        let v0 = self.frame.v0().eval_at(p)?;
        let v1 = self.frame.v1().eval_at(p)?;
        Ok(v0.iter().zip(&v1).map(|(x, y)| a * x + b * y).collect())
    }

    /// Angle of the line in the frame, in `[0, pi)`.
    pub fn angle_at(&self, p: &[f64]) -> Result<f64> {
        let (a, b) = self.coefficients_at(p)?;
        Ok(b.atan2(a).rem_euclid(PI) % PI)
    }
}

fn dot(u: &[Expr], v: &[Expr]) -> Expr {
    u.iter()
        .zip(v)
        .fold(Expr::ZERO, |acc, (a, b)| acc + a.clone() * b.clone())
        .simplify()
}

/// The line field cut out on the slice `fiber = t`: the fiber-free
/// generator of `D` written as `a V0 + b V1` by the normal equations.
pub fn induced_legendrian_line(
    d: &Distribution2,
    frame: &ContactFrame,
    t: f64,
    plan: &SamplePlan,
    tol: &Tolerances,
) -> Result<LegendrianLineField> {
    let dev = Development::new(d, frame, plan, tol)?;
    let fiber = d.chart().fiber()?.name.clone();
    let v: Vec<Expr> = dev
        .generator()
        .iter()
        .map(|e| e.substitute(&fiber, &Expr::c(t)).simplify())
        .collect();
    let e0 = frame.v0().components();
    let e1 = frame.v1().components();
    let (g00, g01, g11) = (dot(e0, e0), dot(e0, e1), dot(e1, e1));
    let (p0, p1) = (dot(&v, e0), dot(&v, e1));
    let det = (g00.clone() * g11.clone() - g01.clone() * g01.clone()).simplify();
    let a = ((g11 * p0.clone() - g01.clone() * p1.clone()) / det.clone()).simplify();
    let b = ((g00 * p1 - g01 * p0) / det).simplify();

    let points = sample_points(frame.chart(), plan);
    per_point(&points, |p| {
        dev.coefficients(p, t)?;
        Ok(())
    })?;
    LegendrianLineField::new(frame, a, b, plan, tol)
}

/// Largest projective angle between the coefficient pairs of two line
/// fields on the same frame, in `[0, pi/2]`.
pub fn line_angle_distance(l1: &LegendrianLineField, l2: &LegendrianLineField, plan: &SamplePlan) -> Result<f64> {
    if l1.frame != l2.frame {
        return Err(Error::Precondition(
            "line fields are expressed in different frames".into(),
        ));
    }
    let points = sample_points(l1.frame.chart(), plan);
    let d = per_point(&points, |p| {
        Ok(projective_angle(l1.coefficients_at(p)?, l2.coefficients_at(p)?))
    })?;
    Ok(d.into_iter().fold(0.0, f64::max))
}

/// Largest angle between the tangent lines of two line fields on the same
/// chart, compared as vectors in the ambient space (frames may differ).
pub fn ambient_line_distance(l1: &LegendrianLineField, l2: &LegendrianLineField, plan: &SamplePlan) -> Result<f64> {
    same_chart(l1.frame.chart(), l2.frame.chart())?;
    let points = sample_points(l1.frame.chart(), plan);
    let d = per_point(&points, |p| Ok(line_angle(&l1.vector_at(p)?, &l2.vector_at(p)?)))?;
    Ok(d.into_iter().fold(0.0, f64::max))
}
