//! Geometric structures (nondegenerate bilinear forms `b(x,y) = xᵀMy`),
//! their geometric pairs `(b, B)` with `⟨x,y⟩ = b(x, By)`, adjoints, the
//! automorphism group `G_b = {A : ABAᵀ = B}` and its Lie algebra
//! `g_b = {X : XB = -BXᵀ}`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeoftError, Result};
use crate::linalg::{self, Mat};

/// Relative threshold used by the nondegeneracy test `|det M| <= tol·‖M‖∞ⁿ`.
pub const SINGULARITY_RTOL: f64 = 1e-12;
/// Relative singular-value cutoff when extracting a basis of `g_b`.
pub const NULL_SPACE_RTOL: f64 = 1e-10;

/// Which argument of `b` carries the frequency (or which adjoint).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A nondegenerate real bilinear form on `R^n`, stored as its matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricStructure {
    matrix: Mat,
}

impl GeometricStructure {
    pub fn new(matrix: Mat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(GeoftError::NonSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let n = matrix.nrows();
        if n == 0 {
            return Err(GeoftError::InvalidInput("empty matrix".into()));
        }
        let det = linalg::det(&matrix);
        let tol = SINGULARITY_RTOL * linalg::inf_norm(&matrix).powi(n as i32);
        if !(det.abs() > tol) {
            return Err(GeoftError::Degenerate { det: det.abs(), tol });
        }
        Ok(Self { matrix })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(linalg::mat_from_rows(rows)?)
    }

    /// The canonical Euclidean inner product.
    pub fn euclidean(n: usize) -> Self {
        Self {
            matrix: linalg::identity(n),
        }
    }

    /// The canonical symplectic form on `R^{2k}`.
    pub fn symplectic(k: usize) -> Self {
        let n = 2 * k;
        let mut m = Mat::zeros(n, n);
        for i in 0..k {
            m[(i, k + i)] = 1.0;
            m[(k + i, i)] = -1.0;
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let n = self.dim();
        for v in [x, y] {
            if v.len() != n {
                return Err(GeoftError::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        Ok(linalg::quad_form(&self.matrix, x, y))
    }

    /// `-b`.
    pub fn negated(&self) -> Self {
        Self {
            matrix: -&self.matrix,
        }
    }
}

/// The geometric pair `(b, B)` with `B = M⁻¹` and `det b = det M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricPair {
    structure: GeometricStructure,
    b: Mat,
    det_b: f64,
    condition_estimate: f64,
}

impl GeometricPair {
    pub fn new(structure: GeometricStructure) -> Result<Self> {
        let b = linalg::inverse(structure.matrix())?;
        let det_b = linalg::det(structure.matrix());
        let condition_estimate = linalg::inf_norm(structure.matrix()) * linalg::inf_norm(&b);
        Ok(Self {
            structure,
            b,
            det_b,
            condition_estimate,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(GeometricStructure::from_rows(rows)?)
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(GeometricStructure::euclidean(n)).expect("identity is nondegenerate")
    }

    pub fn structure(&self) -> &GeometricStructure {
        &self.structure
    }

    /// The form matrix `M`.
    pub fn m(&self) -> &Mat {
        self.structure.matrix()
    }

    /// The pair matrix `B = M⁻¹`.
    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn b_t(&self) -> Mat {
        self.b.transpose()
    }

    /// `B⁻ᵀ`, which equals `Mᵀ`.
    pub fn b_inv_t(&self) -> Mat {
        self.m().transpose()
    }

    pub fn det_b(&self) -> f64 {
        self.det_b
    }

    pub fn abs_det_b(&self) -> f64 {
        self.det_b.abs()
    }

    /// `‖M‖∞·‖B‖∞`.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.structure.evaluate(x, y)
    }

    /// `b(x,y)` without dimension checks.
    #[inline]
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::quad_form(self.m(), x, y)
    }

    /// The pair of `b^op(x,y) = b(y,x)`: matrix `Mᵀ`, pair matrix `Bᵀ`.
    pub fn opposite(&self) -> Self {
        Self {
            structure: GeometricStructure {
                matrix: self.m().transpose(),
            },
            b: self.b.transpose(),
            det_b: self.det_b,
            condition_estimate: self.condition_estimate,
        }
    }

    /// The pair of `-b`: matrix `-M`, pair matrix `-B`.
    pub fn negated(&self) -> Self {
        let n = self.dim() as i32;
        Self {
            structure: self.structure.negated(),
            b: -&self.b,
            det_b: self.det_b * (-1.0_f64).powi(n),
            condition_estimate: self.condition_estimate,
        }
    }

    /// Left adjoint `BᵀAᵀB⁻ᵀ` or right adjoint `BAᵀB⁻¹`.
    pub fn adjoint(&self, a: &Mat, side: Side) -> Result<Mat> {
        self.check_square(a)?;
        Ok(match side {
            Side::Left => self.b.transpose() * a.transpose() * self.m().transpose(),
            Side::Right => &self.b * a.transpose() * self.m(),
        })
    }

    /// Tests `ABAᵀ = B`.
    pub fn in_group(&self, a: &Mat, tol: f64) -> Result<Membership> {
        self.check_square(a)?;
        let residual = linalg::max_abs(&(a * &self.b * a.transpose() - &self.b));
        Ok(Membership::new(residual, tol))
    }

    /// Tests `XB + BXᵀ = 0`.
    pub fn in_lie_algebra(&self, x: &Mat, tol: f64) -> Result<Membership> {
        self.check_square(x)?;
        let residual = linalg::max_abs(&(x * &self.b + &self.b * x.transpose()));
        Ok(Membership::new(residual, tol))
    }

    /// A basis of `g_b`, read off the null space of `X ↦ XB + BXᵀ`.
    pub fn lie_algebra_basis(&self) -> Vec<Mat> {
        let n = self.dim();
        let nn = n * n;
        let mut op = Mat::zeros(nn, nn);
        for p in 0..nn {
            let mut e = Mat::zeros(n, n);
            e[(p / n, p % n)] = 1.0;
            let img = &e * &self.b + &self.b * e.transpose();
            for q in 0..nn {
                op[(q, p)] = img[(q / n, q % n)];
            }
        }
        let svd = op.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
        let cutoff = NULL_SPACE_RTOL * smax;
        let mut basis = Vec::new();
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s <= cutoff {
                let row = v_t.row(k);
                basis.push(Mat::from_fn(n, n, |i, j| row[i * n + j]));
            }
        }
        basis
    }

    /// Draws `exp(X)` for a random `X ∈ g_b` with Frobenius norm `scale`.
    pub fn sample_group_element(&self, seed: u64, scale: f64) -> GroupSample {
        let n = self.dim();
        let basis = self.lie_algebra_basis();
        if basis.is_empty() {
            return GroupSample {
                matrix: linalg::identity(n),
                trivial_algebra: true,
            };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Mat::zeros(n, n);
        for e in &basis {
            x += e * rng.gen_range(-1.0..1.0);
        }
        let norm = x.norm();
        if norm > 0.0 {
            x *= scale / norm;
        }
        GroupSample {
            matrix: linalg::expm(&x),
            trivial_algebra: false,
        }
    }

    pub fn classify(&self) -> Classification {
        classify_matrix(self.m())
    }

    fn check_square(&self, a: &Mat) -> Result<()> {
        let n = self.dim();
        if a.nrows() != n || a.ncols() != n {
            return Err(GeoftError::DimensionMismatch {
                expected: n,
                got: if a.nrows() != n { a.nrows() } else { a.ncols() },
            });
        }
        Ok(())
    }
}

/// Result of a membership test together with the residual that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub residual: f64,
}

impl Membership {
    fn new(residual: f64, tol: f64) -> Self {
        Self {
            member: residual <= tol,
            residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSample {
    pub matrix: Mat,
    /// Set when `g_b = {0}`; the matrix is then the identity.
    pub trivial_algebra: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub symmetric: bool,
    pub skew_symmetric: bool,
    pub positive_definite: bool,
}

pub fn classify_matrix(m: &Mat) -> Classification {
    let tol = 1e-12 * linalg::max_abs(m).max(1.0);
    let mt = m.transpose();
    let symmetric = linalg::max_abs(&(m - &mt)) <= tol;
    let skew_symmetric = linalg::max_abs(&(m + &mt)) <= tol;
    let ev = linalg::sym_eigenvalues(&linalg::symmetric_part(m));
    let positive_definite = ev.first().is_some_and(|&l| l > tol);
    Classification {
        symmetric,
        skew_symmetric,
        positive_definite,
    }
}

/// Convenience for tests and the check catalog: a random nondegenerate
/// matrix `I·shift + noise` with entries of the noise in `[-spread, spread]`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, shift: f64, spread: f64) -> Mat {
    DMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { shift } else { 0.0 };
        d + rng.gen_range(-spread..spread)
    })
}
