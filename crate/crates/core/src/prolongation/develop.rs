use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

use serde::Serialize;

use super::{fiber_characteristic_form, ContactFrame};
use crate::calculus::{norm_sq, same_chart, Chart, SamplePlan};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numeric::{linear_fit, project_onto_pair};
use crate::structures::Distribution2;
use crate::tolerance::Tolerances;

const DEFAULT_STEPS: usize = 256;
const MAX_DEPTH: u32 = 20;

/// Unwrapped development angle along one fiber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleProfile {
    pub fiber: Vec<f64>,
    pub angle: Vec<f64>,
}

impl AngleProfile {
    /// `s(end) - s(start)`.
    pub fn total(&self) -> f64 {
        self.angle.last().unwrap_or(&0.0) - self.angle.first().unwrap_or(&0.0)
    }

    /// Least-squares `s = c0 + c1 t` with the worst residual.
    pub fn linear_fit(&self) -> (f64, f64, f64) {
        linear_fit(&self.fiber, &self.angle)
    }
}

/// The development mapping of a plane field whose characteristic direction
/// is the fiber, measured in the frame `(V0, V1)` of the base contact
/// structure.
#[derive(Debug, Clone)]
pub struct Development {
    chart: Arc<Chart>,
    frame: ContactFrame,
    generator: Vec<Expr>,
    tol: Tolerances,
    steps: usize,
}

impl Development {
    /// Verifies that the fiber field is characteristic before tracking.
    pub fn new(d: &Distribution2, frame: &ContactFrame, plan: &SamplePlan, tol: &Tolerances) -> Result<Self> {
        fiber_characteristic_form(d, plan, tol)?;
        Development::unchecked(d, frame, tol)
    }

    pub(crate) fn unchecked(d: &Distribution2, frame: &ContactFrame, tol: &Tolerances) -> Result<Self> {
        let chart = d.chart().clone();
        same_chart(&chart.base()?, frame.chart())?;
        let (x, y) = (d.x(), d.y());
        let generator = (0..3)
            .map(|i| {
                (x.component(3).clone() * y.component(i).clone() - y.component(3).clone() * x.component(i).clone())
                    .simplify()
            })
            .collect();
        Ok(Development {
            chart,
            frame: frame.clone(),
            generator,
            tol: *tol,
            steps: DEFAULT_STEPS,
        })
    }

    /// Number of uniform fiber steps before refinement.
    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps.max(2);
        self
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn frame(&self) -> &ContactFrame {
        &self.frame
    }

    /// Base components of the fiber-free generator `X_f Y - Y_f X` of `D`.
    pub fn generator(&self) -> &[Expr] {
        &self.generator
    }

    /// Coefficients `(a, b)` with `dpi(D) = span(a V0 + b V1)` at `(p, t)`.
    pub fn coefficients(&self, p: &[f64], t: f64) -> Result<(f64, f64)> {
        let mut q = p.to_vec();
        q.push(t);
        let v = self
            .generator
            .iter()
            .map(|e| self.chart.eval(e, &q))
            .collect::<Result<Vec<_>, _>>()?;
        if norm_sq(&v) < self.tol.nonzero_sq {
            return Err(Error::Vanishing {
                what: "fiber-free generator".into(),
                point: q,
            });
        }
        let e0 = self.frame.v0().eval_at(p)?;
        let e1 = self.frame.v1().eval_at(p)?;
        match project_onto_pair(&v, &e0, &e1) {
            Some((a, b, r)) if r <= self.tol.projection => Ok((a, b)),
            Some((_, _, r)) => Err(Error::ProjectionResidual { residual: r, point: q }),
            None => Err(Error::RankDeficient {
                expected: 2,
                found: 1,
                point: q,
            }),
        }
    }

    /// The angle of the line `[a V0 + b V1]`, in `[0, pi)`.
    pub fn raw_angle(&self, p: &[f64], t: f64) -> Result<f64> {
        let (a, b) = self.coefficients(p, t)?;
        Ok(b.atan2(a).rem_euclid(PI) % PI)
    }

    /// Unwrapped angle over the whole fiber, starting in `[0, pi)`.
    pub fn profile(&self, p: &[f64]) -> Result<AngleProfile> {
        let fiber = self.chart.fiber()?;
        self.track(p, fiber.lo, fiber.hi, self.steps)
    }

    /// Unwrapped angle at fiber value `t`, tracked from the fiber start.
    pub fn angle(&self, p: &[f64], t: f64) -> Result<f64> {
        let fiber = self.chart.fiber()?;
        let frac = ((t - fiber.lo) / (fiber.hi - fiber.lo)).abs();
        let steps = ((self.steps as f64 * frac).ceil() as usize).max(2);
        let profile = self.track(p, fiber.lo, t, steps)?;
        Ok(*profile.angle.last().expect("non-empty profile"))
    }

    fn track(&self, p: &[f64], t0: f64, t1: f64, steps: usize) -> Result<AngleProfile> {
        let fiber: Vec<f64> = (0..=steps).map(|k| t0 + (t1 - t0) * k as f64 / steps as f64).collect();
        let raw = fiber
            .iter()
            .map(|t| self.raw_angle(p, *t))
            .collect::<Result<Vec<_>>>()?;
        let mut angle = Vec::with_capacity(raw.len());
        angle.push(raw[0]);
        for k in 1..raw.len() {
            let step = self.step(p, (fiber[k - 1], raw[k - 1]), (fiber[k], raw[k]), 0)?;
            angle.push(angle[k - 1] + step);
        }
        Ok(AngleProfile { fiber, angle })
    }

    /// Angle change between two fiber values, bisecting until every
    /// sub-step is below `pi/4`.
    fn step(&self, p: &[f64], (ta, ra): (f64, f64), (tb, rb): (f64, f64), depth: u32) -> Result<f64> {
        let d = reduce(rb - ra);
        if d.abs() <= FRAC_PI_4 {
            return Ok(d);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::RefinementDepth {
                point: p.to_vec(),
                fiber_value: ta,
            });
        }
        let tm = 0.5 * (ta + tb);
        let rm = self.raw_angle(p, tm)?;
        Ok(self.step(p, (ta, ra), (tm, rm), depth + 1)? + self.step(p, (tm, rm), (tb, rb), depth + 1)?)
    }
}

/// Representative of `d` modulo `pi` in `[-pi/2, pi/2)`.
fn reduce(d: f64) -> f64 {
    (d + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2
}
