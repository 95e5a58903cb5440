//! The extension `D(xi, F0, F1, n)` on `M x [0, 1]` and its family version.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{grid_points, lie_bracket, sample_points, Chart, Coordinate, SamplePlan, VectorField};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::invariants::{minimal_twisting_number, LegendrianLineField, MinimalTwistReport, BOUNDARY_TOL};
use crate::numeric::projective_angle;
use crate::prolongation::{lift, rotated, ContactFrame};
use crate::structures::{check_engel_frame, per_point, CheckReport, Distribution2, VerificationReport};
use crate::tolerance::Tolerances;

/// Name of the interval fiber coordinate of an extension.
pub const EXTENSION_FIBER: &str = "t";
/// Absolute residual allowed in the bracket identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Largest projective angle between `F1` and the line of a user-supplied `g`.
pub const ANGLE_MATCH_TOL: f64 = 1e-9;

/// Input of the extension: a contact frame whose first vector spans `F0`,
/// the target foliation `F1 = span(a V0 + b V1)`, and the twist `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSpec {
    pub frame: ContactFrame,
    pub a: Expr,
    pub b: Expr,
    pub n: i64,
    /// Explicit angle function; otherwise derived from `(a, b)`.
    pub g: Option<Expr>,
}

impl ExtensionSpec {
    pub fn new(frame: &ContactFrame, a: Expr, b: Expr, n: i64) -> Self {
        ExtensionSpec {
            frame: frame.clone(),
            a,
            b,
            n,
            g: None,
        }
    }

    /// `F1 = span(cos g V0 + sin g V1)` with `g` kept symbolically.
    pub fn from_angle(frame: &ContactFrame, g: Expr, n: i64) -> Self {
        ExtensionSpec {
            frame: frame.clone(),
            a: g.clone().cos(),
            b: g.clone().sin(),
            n,
            g: Some(g),
        }
    }

    pub fn with_angle(mut self, g: Expr) -> Self {
        self.g = Some(g);
        self
    }
}

/// The angle `g` of `F1` relative to `V0` on the base grid, lifted
/// continuously and normalized to `0 < min g <= pi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleFunction {
    #[serde(skip)]
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    #[serde(serialize_with = "display_opt")]
    pub symbolic: Option<Expr>,
    pub min: f64,
    pub boundary_warning: bool,
}

fn display_opt<S: serde::Serializer>(e: &Option<Expr>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match e {
        Some(e) => s.serialize_some(&e.to_string()),
        None => s.serialize_none(),
    }
}

fn grid_shape(chart: &Chart, plan: &SamplePlan) -> Vec<usize> {
    (0..chart.dim()).map(|i| plan.resolution(i)).collect()
}

fn neighbors(idx: usize, shape: &[usize], periodic: &[bool]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stride = 1;
    for axis in (0..shape.len()).rev() {
        let n = shape[axis];
        let k = (idx / stride) % n;
        if k + 1 < n {
            out.push(idx + stride);
        } else if periodic[axis] && n > 2 {
            out.push(idx - k * stride);
        }
        if k > 0 {
            out.push(idx - stride);
        } else if periodic[axis] && n > 2 {
            out.push(idx + (n - 1) * stride);
        }
        stride *= n;
    }
    out
}

/// Strips a common sign and matches `(cos u, sin u)`.
fn angle_pattern(a: &Expr, b: &Expr) -> Option<Expr> {
    match (a, b) {
        (Expr::Neg(a), Expr::Neg(b)) => angle_pattern(a, b),
        (Expr::Cos(u), Expr::Sin(v)) if u == v => Some((**u).clone()),
        _ => None,
    }
}

pub fn legendrian_angle_function(
    frame: &ContactFrame,
    a: &Expr,
    b: &Expr,
    plan: &SamplePlan,
    tol: &Tolerances,
) -> Result<AngleFunction> {
    let line = LegendrianLineField::new(frame, a.clone(), b.clone(), plan, tol)?;
    let chart = frame.chart();
    let points = grid_points(chart, plan);
    let raw = per_point(&points, |p| line.angle_at(p))?;

    let shape = grid_shape(chart, plan);
    let periodic: Vec<bool> = chart.coords().iter().map(|c| c.is_periodic()).collect();
    let mut lifted: Vec<Option<f64>> = vec![None; raw.len()];
    lifted[0] = Some(raw[0]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let gi = lifted[i].expect("visited");
        for j in neighbors(i, &shape, &periodic) {
            let gj = match lifted[j] {
                Some(g) => g,
                None => {
                    let g = raw[j] + PI * ((gi - raw[j]) / PI).round();
                    lifted[j] = Some(g);
                    queue.push_back(j);
                    g
                }
            };
            if (gj - gi).abs() > FRAC_PI_4 {
                return Err(Error::ContinuityViolation {
                    a: points[i].clone(),
                    b: points[j].clone(),
                });
            }
        }
    }
    let mut values: Vec<f64> = lifted.into_iter().map(|g| g.expect("grid is connected")).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = PI * (1.0 - min / PI).floor();
    values.iter_mut().for_each(|g| *g += shift);
    let min = min + shift;

    let symbolic = if a.is_closed() && b.is_closed() {
        Some(Expr::c(values[0]))
    } else {
        angle_pattern(a, b).and_then(|u| {
            let m = ((values[0] - chart.eval(&u, &points[0]).ok()?) / PI).round();
            let g = if m == 0.0 {
                u
            } else {
                (u + Expr::c(m) * Expr::pi()).simplify()
            };
            let fits = points
                .iter()
                .zip(&values)
                .all(|(p, v)| chart.eval(&g, p).is_ok_and(|x| (x - v).abs() <= 1e-9));
            fits.then_some(g)
        })
    };
    Ok(AngleFunction {
        points,
        values,
        symbolic,
        min,
        boundary_warning: (min - PI).abs() <= BOUNDARY_TOL,
    })
}

/// Checks a user-supplied `g` against `F1` and the normalization.
fn explicit_angle(spec: &ExtensionSpec, g: &Expr, plan: &SamplePlan, tol: &Tolerances) -> Result<AngleFunction> {
    let chart = spec.frame.chart();
    chart.check_expr(g)?;
    let line = LegendrianLineField::new(&spec.frame, spec.a.clone(), spec.b.clone(), plan, tol)?;
    let points = sample_points(chart, plan);
    let values = per_point(&points, |p| {
        let gv = chart.eval(g, p)?;
        let mismatch = projective_angle(line.coefficients_at(p)?, (gv.cos(), gv.sin()));
        if mismatch > ANGLE_MATCH_TOL {
            return Err(Error::Precondition(format!(
                "g does not describe F1 at {p:?} (angle {mismatch:e})"
            )));
        }
        Ok(gv)
    })?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0 && min <= PI) {
        return Err(Error::Normalization(format!("min g = {min} is outside (0, pi]")));
    }
    Ok(AngleFunction {
        points,
        values,
        symbolic: Some(g.clone()),
        min,
        boundary_warning: (min - PI).abs() <= BOUNDARY_TOL,
    })
}

/// The Engel structure `span(d/dt, V^n)` on `M x [0, 1]` with
/// `V^n = cos(t(g + n pi)) V0 + sin(t(g + n pi)) V1`.
#[derive(Debug, Clone)]
pub struct Extension {
    spec: ExtensionSpec,
    g: Expr,
    angle: AngleFunction,
    distribution: Distribution2,
}

impl Extension {
    pub fn spec(&self) -> &ExtensionSpec {
        &self.spec
    }

    pub fn frame(&self) -> &ContactFrame {
        &self.spec.frame
    }

    pub fn n(&self) -> i64 {
        self.spec.n
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    /// `g + n pi`.
    pub fn rate(&self) -> Expr {
        (self.g.clone() + Expr::c(self.spec.n as f64) * Expr::pi()).simplify()
    }

    pub fn angle_function(&self) -> &AngleFunction {
        &self.angle
    }

    pub fn distribution(&self) -> &Distribution2 {
        &self.distribution
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.distribution.chart()
    }

    pub fn target(&self, plan: &SamplePlan, tol: &Tolerances) -> Result<LegendrianLineField> {
        LegendrianLineField::new(&self.spec.frame, self.spec.a.clone(), self.spec.b.clone(), plan, tol)
    }
}

pub fn extend(spec: &ExtensionSpec, plan: &SamplePlan, tol: &Tolerances) -> Result<Extension> {
    if spec.n < 0 {
        return Err(Error::Precondition(format!(
            "twist must be non-negative, got {}",
            spec.n
        )));
    }
    let angle = match &spec.g {
        Some(g) => explicit_angle(spec, g, plan, tol)?,
        None => legendrian_angle_function(&spec.frame, &spec.a, &spec.b, plan, tol)?,
    };
    let g = angle.symbolic.clone().ok_or(Error::AngleNotClosedForm)?;
    let chart = spec
        .frame
        .chart()
        .product(Coordinate::interval(EXTENSION_FIBER, 0.0, 1.0))?;
    let rate = (g.clone() + Expr::c(spec.n as f64) * Expr::pi()).simplify();
    let v = rotated(&spec.frame, &(Expr::var(EXTENSION_FIBER) * rate), &chart)?;
    let distribution = Distribution2::new(VectorField::coordinate(&chart, 3), v)?;
    let report = check_engel_frame(&distribution, plan, tol)?;
    if let Some((check, point)) = report.first_failure() {
        return Err(Error::NotEngel(format!("{check} fails at {point:?}")));
    }
    Ok(Extension {
        spec: spec.clone(),
        g,
        angle,
        distribution,
    })
}

fn residual_norms(r: &VectorField, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    per_point(points, |p| Ok(r.eval_at(p)?.iter().map(|x| x * x).sum::<f64>().sqrt()))
}

/// `[d/dt, V^n] = U^n` and `[V^n, U^n] = (g + n pi) [V0, V1]`.
///
/// The second identity holds exactly only for constant `g`; otherwise the
/// two sides differ by a vector in `span(V0, V1)`, and the check
/// `bracket_V_U_transverse` compares their components normal to the
/// contact plane instead.
pub fn verify_extension_identities(ext: &Extension, plan: &SamplePlan, tol: &Tolerances) -> Result<VerificationReport> {
    let chart = ext.chart();
    let frame = ext.frame();
    let rate = ext.rate();
    let phase = Expr::var(EXTENSION_FIBER) * rate.clone();
    let v0 = lift(frame.v0(), chart)?;
    let v1 = lift(frame.v1(), chart)?;
    let dt = VectorField::coordinate(chart, 3);
    let v = ext.distribution.y();
    let u = VectorField::combine(
        &(-(rate.clone() * phase.clone().sin())),
        &v0,
        &(rate.clone() * phase.cos()),
        &v1,
    )?
    .simplify();
    let minus_one = Expr::c(-1.0);

    let points = sample_points(chart, plan);
    let r1 = VectorField::combine(&Expr::ONE, &lie_bracket(&dt, v)?, &minus_one, &u)?;
    let base_bracket = lift(&lie_bracket(frame.v0(), frame.v1())?, chart)?;
    let r2 = VectorField::combine(&Expr::ONE, &lie_bracket(v, &u)?, &minus_one, &base_bracket.scale(&rate))?;

    let mut checks = vec![CheckReport::identically_zero(
        "bracket_dt_V",
        residual_norms(&r1, &points)?,
        1.0,
        IDENTITY_TOL,
    )];
    if ext.g.free_vars().is_empty() {
        checks.push(CheckReport::identically_zero(
            "bracket_V_U",
            residual_norms(&r2, &points)?,
            1.0,
            IDENTITY_TOL,
        ));
    } else {
        let normal = frame.contact_form()?;
        let transverse = per_point(&points, |p| {
            let n = normal.eval_dense(&p[..3])?;
            let r = r2.eval_at(p)?;
            let nn = n.iter().map(|x| x * x).sum::<f64>().sqrt();
            Ok(n.iter().zip(&r).map(|(x, y)| x * y).sum::<f64>().abs() / nn)
        })?;
        checks.push(CheckReport::identically_zero(
            "bracket_V_U_transverse",
            transverse,
            1.0,
            IDENTITY_TOL,
        ));
    }
    Ok(VerificationReport::new("extension_identities", tol, points, checks))
}

/// One slice `s` of a family with its own `F1` and twist.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySlice {
    pub s: f64,
    pub a: Expr,
    pub b: Expr,
    pub g: Option<Expr>,
    pub n: i64,
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub s: f64,
    pub extension: Extension,
    pub mtw: MinimalTwistReport,
}

/// Extends every slice over a fixed frame; `n(s)` may change by at most one
/// between neighbouring slices.
pub fn extend_family(
    frame: &ContactFrame,
    slices: &[FamilySlice],
    plan: &SamplePlan,
    tol: &Tolerances,
) -> Result<Vec<FamilyMember>> {
    for (i, w) in slices.windows(2).enumerate() {
        if (w[1].n - w[0].n).abs() >= 2 {
            return Err(Error::FamilyJump {
                index: i + 1,
                from: w[0].n,
                to: w[1].n,
            });
        }
    }
    slices
        .par_iter()
        .map(|slice| {
            let spec = ExtensionSpec {
                frame: frame.clone(),
                a: slice.a.clone(),
                b: slice.b.clone(),
                n: slice.n,
                g: slice.g.clone(),
            };
            let extension = extend(&spec, plan, tol)?;
            let mtw = minimal_twisting_number(extension.distribution(), frame, plan, tol)?;
            Ok(FamilyMember {
                s: slice.s,
                extension,
                mtw,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
