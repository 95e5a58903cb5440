use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chart::Chart;

/// Grid plus seeded uniform-random sampling of a chart's box.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SamplePlan {
    /// Points per axis; a single entry applies to every axis.
    pub grid: Vec<usize>,
    pub random: usize,
    pub seed: u64,
}

impl SamplePlan {
    pub fn new(grid: usize, random: usize, seed: u64) -> Self {
        SamplePlan {
            grid: vec![grid.max(2)],
            random,
            seed,
        }
    }

    pub fn per_axis(grid: Vec<usize>, random: usize, seed: u64) -> Self {
        SamplePlan {
            grid: grid.into_iter().map(|g| g.max(2)).collect(),
            random,
            seed,
        }
    }

    pub fn resolution(&self, axis: usize) -> usize {
        let r = if self.grid.len() == 1 {
            self.grid[0]
        } else {
            self.grid.get(axis).copied().unwrap_or(2)
        };
        r.max(2)
    }
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan::new(5, 200, 0)
    }
}

fn axis_values(chart: &Chart, axis: usize, n: usize) -> Vec<f64> {
    let c = chart.coord(axis);
    match c.period {
        Some(period) => (0..n).map(|k| c.lo + period * k as f64 / n as f64).collect(),
        None => (0..n)
            .map(|k| c.lo + (c.hi - c.lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Grid points in row-major order (last axis fastest), then random points.
/// Periodic coordinates are sampled over the half-open period.
pub fn sample_points(chart: &Chart, plan: &SamplePlan) -> Vec<Vec<f64>> {
    let mut points = grid_points(chart, plan);
    points.extend(random_points(chart, plan.random, plan.seed));
    points
}

/// `count` seeded uniform points in the chart's box.
pub fn random_points(chart: &Chart, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| chart.coords().iter().map(|c| rng.gen_range(c.lo..c.hi)).collect())
        .collect()
}

pub fn grid_points(chart: &Chart, plan: &SamplePlan) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = (0..chart.dim())
        .map(|a| axis_values(chart, a, plan.resolution(a)))
        .collect();
    let mut points = vec![Vec::new()];
    for values in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Coordinate;

    #[test]
    fn corners_of_unit_cube() {
        let c = Chart::boxed(&["x", "y", "z"], 0.0, 1.0).unwrap();
        let pts = sample_points(&c, &SamplePlan::new(2, 0, 0));
        assert_eq!(pts.len(), 8);
        for p in &pts {
            assert!(p.iter().all(|v| *v == 0.0 || *v == 1.0));
        }
    }

    #[test]
    fn seeded_points_repeat() {
        let c = Chart::boxed(&["x", "y", "z", "w"], -1.0, 1.0).unwrap();
        let plan = SamplePlan::new(3, 50, 42);
        assert_eq!(sample_points(&c, &plan), sample_points(&c, &plan));
        let other = SamplePlan::new(3, 50, 43);
        assert_ne!(sample_points(&c, &plan), sample_points(&c, &other));
    }

    #[test]
    fn grid_counts() {
        let c = Chart::boxed(&["x", "y", "z", "w"], -1.0, 1.0).unwrap();
        assert_eq!(sample_points(&c, &SamplePlan::new(5, 0, 0)).len(), 625);
        assert_eq!(sample_points(&c, &SamplePlan::new(5, 200, 0)).len(), 825);
    }

    #[test]
    fn periodic_axis_is_half_open() {
        let tau = std::f64::consts::TAU;
        let c = Chart::new(vec![
            Coordinate::interval("x", 0.0, 1.0),
            Coordinate::interval("y", 0.0, 1.0),
            Coordinate::periodic("z", 0.0, tau),
        ])
        .unwrap();
        let pts = sample_points(&c, &SamplePlan::new(4, 100, 1));
        assert!(pts.iter().all(|p| p[2] >= 0.0 && p[2] < tau));
        let zs: Vec<f64> = pts[..4].iter().map(|p| p[2]).collect();
        assert_eq!(zs, vec![0.0, tau / 4.0, tau / 2.0, 3.0 * tau / 4.0]);
    }
}
