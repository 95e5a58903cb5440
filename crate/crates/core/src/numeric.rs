//! Small dense linear algebra on sampled vectors.

use nalgebra::{DMatrix, Vector2, Vector3};

/// Singular values, descending, of the matrix whose columns are `cols`.
pub fn singular_values(cols: &[Vec<f64>]) -> Vec<f64> {
    if cols.is_empty() {
        return Vec::new();
    }
    let rows = cols[0].len();
    let m = DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank `r` is the number of singular values with `sigma_i / sigma_1 >= eps`.
pub fn numerical_rank(sv: &[f64], eps: f64) -> usize {
    match sv.first() {
        Some(&s1) if s1 > 0.0 => sv.iter().take_while(|&&s| s / s1 >= eps).count(),
        _ => 0,
    }
}

fn orthonormal_basis(vectors: &[Vec<f64>]) -> DMatrix<f64> {
    let rows = vectors[0].len();
    let m = DMatrix::from_fn(rows, vectors.len(), |r, c| vectors[c][r]);
    m.qr().q()
}

/// Sine of the largest principal angle between the column spans of `a` and
/// `b` (each assumed of full column rank, equal dimension).
pub fn max_principal_angle(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let qa = orthonormal_basis(a);
    let qb = orthonormal_basis(b);
    let proj = &qa * qa.transpose();
    let resid = &qb - proj * &qb;
    let s = resid.singular_values().max();
    s.clamp(0.0, 1.0).asin()
}

/// Least-squares `(a, b)` with `v ~ a*e0 + b*e1` in R^3, plus the residual
/// norm relative to `|v|` (absolute when `v = 0`).
pub fn project_onto_pair(v: &[f64], e0: &[f64], e1: &[f64]) -> Option<(f64, f64, f64)> {
    let v = Vector3::from_column_slice(v);
    let e0 = Vector3::from_column_slice(e0);
    let e1 = Vector3::from_column_slice(e1);
    let gram = nalgebra::Matrix2::new(e0.dot(&e0), e0.dot(&e1), e1.dot(&e0), e1.dot(&e1));
    let rhs = Vector2::new(e0.dot(&v), e1.dot(&v));
    let sol = gram.lu().solve(&rhs)?;
    let fitted = e0 * sol[0] + e1 * sol[1];
    let scale = v.norm();
    let resid = (v - fitted).norm();
    let rel = if scale > 0.0 { resid / scale } else { resid };
    Some((sol[0], sol[1], rel))
}

/// Angle between the lines spanned by two plane vectors, in `[0, pi/2]`.
pub fn projective_angle(a: (f64, f64), b: (f64, f64)) -> f64 {
    let cross = (a.0 * b.1 - a.1 * b.0).abs();
    let dot = (a.0 * b.0 + a.1 * b.1).abs();
    cross.atan2(dot)
}

/// Angle between the lines spanned by two vectors, in `[0, pi/2]`.
pub fn line_angle(u: &[f64], v: &[f64]) -> f64 {
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let s = if u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    let (mut diff, mut sum) = (0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        let (x, y) = (a / nu, s * b / nv);
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Least-squares line `y = c0 + c1 x`; returns `(c0, c1, max |residual|)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icept = my - slope * mx;
    let worst = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - icept - slope * x).abs())
        .fold(0.0, f64::max);
    (icept, slope, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_columns() {
        let cols = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]];
        assert_eq!(numerical_rank(&singular_values(&cols), 1e-7), 2);
        let cols = vec![
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0, 0.0],
            vec![0.0, 0.0, 3.0, 0.0],
        ];
        assert_eq!(numerical_rank(&singular_values(&cols), 1e-7), 3);
        assert_eq!(numerical_rank(&[0.0, 0.0], 1e-7), 0);
    }

    #[test]
    fn principal_angles() {
        let a = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let b = vec![vec![1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0]];
        assert!(max_principal_angle(&a, &b) < 1e-12);
        let c = vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!((max_principal_angle(&a, &c) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn projection_residuals() {
        let (a, b, r) = project_onto_pair(&[2.0, 3.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!((a, b), (2.0, 3.0));
        assert_eq!(r, 0.0);
        let (_, _, r) = project_onto_pair(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(r, 1.0);
    }

    #[test]
    fn projective_angle_ignores_orientation() {
        assert_eq!(projective_angle((1.0, 0.0), (-1.0, 0.0)), 0.0);
        assert!((projective_angle((1.0, 0.0), (0.0, 1.0)) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn line_angle_is_accurate_near_zero() {
        let u = [1.0, 0.0, 0.0];
        let v = [-1.0, 1e-12, 0.0];
        assert!((line_angle(&u, &v) - 1e-12).abs() < 1e-20);
        assert!((line_angle(&u, &[0.0, 2.0, 0.0]) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn exact_line_fit() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 + 1.5 * x).collect();
        let (c0, c1, worst) = linear_fit(&xs, &ys);
        assert!((c0 - 0.5).abs() < 1e-12 && (c1 - 1.5).abs() < 1e-12 && worst < 1e-12);
    }
}
