use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{Bindings, EvalError, Expr};

/// One chart coordinate with its sampling interval.
///
/// For a periodic coordinate the interval is exactly one period,
/// `[lo, lo + period)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coordinate {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub period: Option<f64>,
}

impl Coordinate {
    pub fn interval(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Coordinate {
            name: name.into(),
            lo,
            hi,
            period: None,
        }
    }

    pub fn periodic(name: impl Into<String>, lo: f64, period: f64) -> Self {
        Coordinate {
            name: name.into(),
            lo,
            hi: lo + period,
            period: Some(period),
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }
}

/// A product chart of dimension 3 or 4. In a 4-chart the last coordinate is
/// the fiber direction (`S^1` or an interval).
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    coords: Vec<Coordinate>,
}

impl Chart {
    pub fn new(coords: Vec<Coordinate>) -> Result<Arc<Chart>> {
        if !(3..=4).contains(&coords.len()) {
            return Err(Error::InvalidChart(format!(
                "dimension must be 3 or 4, got {}",
                coords.len()
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].iter().any(|d| d.name == c.name) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{}`", c.name)));
            }
            if c.name == "pi" {
                return Err(Error::InvalidChart("`pi` is reserved".into()));
            }
            match c.period {
                Some(p) if !(p > 0.0 && p.is_finite()) => {
                    return Err(Error::InvalidChart(format!(
                        "coordinate `{}` has non-positive period {p}",
                        c.name
                    )))
                }
                _ => {}
            }
            if !(c.lo.is_finite() && c.hi.is_finite() && c.lo < c.hi) {
                return Err(Error::InvalidChart(format!(
                    "coordinate `{}` has empty interval [{}, {}]",
                    c.name, c.lo, c.hi
                )));
            }
        }
        Ok(Arc::new(Chart { coords }))
    }

    /// Euclidean box `[lo, hi]^dim` with the given names.
    pub fn boxed(names: &[&str], lo: f64, hi: f64) -> Result<Arc<Chart>> {
        Chart::new(names.iter().map(|n| Coordinate::interval(*n, lo, hi)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Coordinate {
        &self.coords[i]
    }

    pub fn names(&self) -> Vec<&str> {
        self.coords.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }

    pub fn var(&self, i: usize) -> Expr {
        Expr::var(self.coords[i].name.clone())
    }

    /// Appends a fiber coordinate to a 3-chart.
    pub fn product(&self, fiber: Coordinate) -> Result<Arc<Chart>> {
        if self.dim() != 3 {
            return Err(Error::WrongDimension {
                expected: 3,
                found: self.dim(),
            });
        }
        let mut coords = self.coords.clone();
        coords.push(fiber);
        Chart::new(coords)
    }

    /// The 3-chart obtained by dropping the fiber coordinate of a 4-chart.
    pub fn base(&self) -> Result<Arc<Chart>> {
        if self.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                found: self.dim(),
            });
        }
        Chart::new(self.coords[..3].to_vec())
    }

    pub fn fiber(&self) -> Result<&Coordinate> {
        if self.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                found: self.dim(),
            });
        }
        Ok(&self.coords[3])
    }

    pub fn binding<'a>(&'a self, point: &'a [f64]) -> PointBinding<'a> {
        PointBinding { chart: self, point }
    }

    pub fn eval(&self, e: &Expr, point: &[f64]) -> Result<f64, EvalError> {
        e.evaluate(&self.binding(point))
    }

    /// Checks that `e` only mentions chart coordinates.
    pub fn check_expr(&self, e: &Expr) -> Result<()> {
        match e.free_vars().into_iter().find(|v| self.index_of(v).is_none()) {
            Some(v) => Err(Error::ForeignVariable(v)),
            None => Ok(()),
        }
    }

    /// Largest `|e(p + period_i e_i) - e(p)|` over the points and every
    /// periodic coordinate. Zero for charts without periodic coordinates.
    pub fn period_defect(&self, e: &Expr, points: &[Vec<f64>]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (i, c) in self.coords.iter().enumerate() {
            let Some(period) = c.period else { continue };
            for p in points {
                let mut q = p.clone();
                q[i] += period;
                worst = worst.max((self.eval(e, &q)? - self.eval(e, p)?).abs());
            }
        }
        Ok(worst)
    }
}

/// Binds chart coordinate names to the components of a point.
#[derive(Debug, Clone, Copy)]
pub struct PointBinding<'a> {
    chart: &'a Chart,
    point: &'a [f64],
}

impl Bindings for PointBinding<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.chart
            .coords
            .iter()
            .position(|c| c.name == name)
            .and_then(|i| self.point.get(i).copied())
    }
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}
