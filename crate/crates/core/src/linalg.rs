//! Small dense linear-algebra and summation helpers shared by every module.
//!
//! Dimensions in this crate are tiny (n <= 3 in practice), so matrices are
//! plain `nalgebra::DMatrix<f64>` and points are `&[f64]` slices.

use std::f64::consts::PI;
use std::ops::Add;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{GeoftError, Result};

pub type Mat = DMatrix<f64>;

/// Builds a matrix from row vectors, rejecting ragged input.
pub fn mat_from_rows(rows: &[Vec<f64>]) -> Result<Mat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(GeoftError::InvalidInput("ragged matrix rows".into()));
    }
    Ok(Mat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub fn to_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Inverse through partial-pivot LU.
pub fn inverse(m: &Mat) -> Result<Mat> {
    if !m.is_square() {
        return Err(GeoftError::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    m.clone().lu().try_inverse().ok_or(GeoftError::SingularMatrix)
}

pub fn det(m: &Mat) -> f64 {
    m.clone().lu().determinant()
}

pub fn mat_vec(m: &Mat, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(m.ncols(), x.len());
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// `xᵀ M y`.
pub fn quad_form(m: &Mat, x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        let mut row = 0.0;
        for j in 0..m.ncols() {
            row += m[(i, j)] * y[j];
        }
        acc += x[i] * row;
    }
    acc
}

/// Largest entry in absolute value.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Induced infinity norm (maximum absolute row sum).
pub fn inf_norm(m: &Mat) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn symmetric_part(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(m: &Mat) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Matrix exponential (scaling and squaring around a Padé core).
pub fn expm(m: &Mat) -> Mat {
    m.clone().exp()
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn scaled_identity(n: usize, s: f64) -> Mat {
    Mat::identity(n, n) * s
}

/// `e^{2πi t}` with the argument reduced to `[-1/2, 1/2]` turns first.
#[inline]
pub fn cis_turns(t: f64) -> Complex64 {
    let r = t - t.round();
    let (s, c) = (2.0 * PI * r).sin_cos();
    Complex64::new(c, s)
}

/// Deterministic pairwise (tree) summation.
///
/// The reduction tree depends only on the slice length, so results are
/// bit-identical no matter how the inputs were produced.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        let mut acc = T::default();
        for &x in xs {
            acc = acc + x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Relative L∞ distance `max|a-b| / max|b|` (absolute when `b` vanishes).
pub fn rel_linf(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let den = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// `max|a-b| / max(max|a|, max|b|)`, or the absolute gap when both vanish.
pub fn rel_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num = abs_linf(a, b);
    let den = linf(a).max(linf(b));
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

pub fn abs_linf(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn linf(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 999.0 * 1000.0 / 2.0);
    }

    #[test]
    fn pairwise_empty_is_zero() {
        let xs: [f64; 0] = [];
        assert_eq!(pairwise_sum(&xs), 0.0);
    }

    #[test]
    fn cis_reduces_large_arguments() {
        let z = cis_turns(1.0e6 + 0.25);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn expm_matches_taylor_series() {
        let x = mat_from_rows(&[vec![0.1, -0.4], vec![0.3, 0.2]]).unwrap();
        let mut term = identity(2);
        let mut sum = identity(2);
        for k in 1..40 {
            term = &term * &x / k as f64;
            sum += &term;
        }
        assert!(max_abs(&(expm(&x) - sum)) < 1e-14);
    }

    #[test]
    fn inverse_rejects_singular() {
        let m = mat_from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(inverse(&m), Err(GeoftError::SingularMatrix)));
    }
}
