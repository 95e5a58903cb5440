use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::numeric::{numerical_rank, singular_values};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Criterion {
    /// `value >= threshold` at every point, threshold relative to the max.
    NeverVanishing,
    /// `value <= threshold` at every point.
    IdenticallyZero,
    /// Numerical rank equals `expected` at every point.
    Rank { expected: usize },
}

/// One pointwise condition evaluated over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub criterion: Criterion,
    /// Per-point witness: a norm, an absolute residual, or a rank.
    pub values: Vec<f64>,
    /// Singular values per point (rank checks only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub singular_values: Vec<Vec<f64>>,
    pub scale: f64,
    pub threshold: f64,
    pub passed: bool,
    pub first_failure: Option<usize>,
}

impl CheckReport {
    pub fn never_vanishing(name: &str, values: Vec<f64>, tau: f64) -> Self {
        let scale = values.iter().copied().fold(0.0, f64::max);
        let threshold = tau * scale;
        let first_failure = if scale > 0.0 {
            values.iter().position(|v| !(*v >= threshold))
        } else {
            (!values.is_empty()).then_some(0)
        };
        CheckReport {
            name: name.into(),
            criterion: Criterion::NeverVanishing,
            values,
            singular_values: Vec::new(),
            scale,
            threshold,
            passed: first_failure.is_none(),
            first_failure,
        }
    }

    /// `scale` is an a-priori magnitude bound for the values (for example the
    /// product of factor norms of a wedge).
    pub fn identically_zero(name: &str, values: Vec<f64>, scale: f64, tau: f64) -> Self {
        let threshold = tau * scale;
        let first_failure = values.iter().position(|v| !(*v <= threshold));
        CheckReport {
            name: name.into(),
            criterion: Criterion::IdenticallyZero,
            values,
            singular_values: Vec::new(),
            scale,
            threshold,
            passed: first_failure.is_none(),
            first_failure,
        }
    }

    /// Ranks of the column sets `cols[p]` at each point.
    pub fn rank(name: &str, cols: Vec<Vec<Vec<f64>>>, expected: usize, eps: f64) -> Self {
        let sv: Vec<Vec<f64>> = cols.iter().map(|c| singular_values(c)).collect();
        let values: Vec<f64> = sv.iter().map(|s| numerical_rank(s, eps) as f64).collect();
        let first_failure = values.iter().position(|r| *r as usize != expected);
        CheckReport {
            name: name.into(),
            criterion: Criterion::Rank { expected },
            values,
            singular_values: sv,
            scale: 1.0,
            threshold: eps,
            passed: first_failure.is_none(),
            first_failure,
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min / scale`; for never-vanishing checks this is the relative margin.
    pub fn min_relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.min() / self.scale
        } else {
            0.0
        }
    }

    /// Smallest `sigma_last / sigma_1` over points (rank checks).
    pub fn min_singular_ratio(&self) -> f64 {
        self.singular_values
            .iter()
            .map(|s| match (s.first(), s.last()) {
                (Some(a), Some(b)) if *a > 0.0 => b / a,
                _ => 0.0,
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Outcome of verifying one structure over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub kind: String,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub points: Vec<Vec<f64>>,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(kind: &str, tol: &Tolerances, points: Vec<Vec<f64>>, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        VerificationReport {
            kind: kind.into(),
            tolerances: *tol,
            points,
            checks,
            passed,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Name of the first failing check and the point where it first fails.
    pub fn first_failure(&self) -> Option<(&str, &[f64])> {
        self.checks.iter().find_map(|c| {
            c.first_failure
                .map(|i| (c.name.as_str(), self.points.get(i).map(Vec::as_slice).unwrap_or(&[])))
        })
    }
}

/// Evaluates `f` at every point in parallel, preserving point order.
pub(crate) fn per_point<T, F>(points: &[Vec<f64>], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[f64]) -> Result<T> + Sync,
{
    points.par_iter().map(|p| f(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn never_vanishing_is_relative() {
        let c = CheckReport::never_vanishing("c", vec![1.0, 2.0, 1e-7], 1e-6);
        assert!(!c.passed);
        assert_eq!(c.first_failure, Some(2));
        let c = CheckReport::never_vanishing("c", vec![1.0, 2.0, 1e-5], 1e-6);
        assert!(c.passed);
        assert!((c.min_relative() - 5e-6).abs() < 1e-18);
    }

    #[test]
    fn all_zero_never_vanishing_fails() {
        assert!(!CheckReport::never_vanishing("c", vec![0.0, 0.0], 1e-6).passed);
    }

    #[test]
    fn zero_scale_accepts_exact_zeros() {
        assert!(CheckReport::identically_zero("z", vec![0.0, 0.0], 0.0, 1e-9).passed);
        assert!(!CheckReport::identically_zero("z", vec![0.0, 1e-3], 1.0, 1e-9).passed);
        assert!(!CheckReport::identically_zero("z", vec![f64::NAN], 1.0, 1e-9).passed);
    }
}
