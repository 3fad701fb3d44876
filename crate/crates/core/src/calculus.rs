//! Derivatives, left/right gradients, the b-Laplacian `Δ_b = Σ B_kl ∂_k∂_l`
//! and the identities that exchange derivatives with the geometric transforms.
//!
//! Periodic grids are differentiated spectrally; truncated grids use
//! fourth-order finite differences (one-sided near the ends).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GeoftError, Result};
use crate::fields::{GaussianFunction, GridMode, GridSpec, Orientation, PlaneWave, SampledField};
use crate::forms::{GeometricPair, Side};
use crate::linalg::{self, Mat};
use crate::poly::PolyGaussian;
use crate::spectral::{self, Transform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientKind {
    Left,
    Right,
    Classical,
}

/// Two sides of an identity evaluated at the same probes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub lhs: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
    /// Relative L∞ gap.
    pub residual: f64,
}

impl IdentityReport {
    pub fn new(lhs: Vec<Complex64>, rhs: Vec<Complex64>) -> Self {
        let residual = linalg::rel_gap(&lhs, &rhs);
        Self { lhs, rhs, residual }
    }
}

/// `∂_j^α f`.
pub fn partial_derivative(f: &SampledField, axis: usize, order: u32) -> Result<SampledField> {
    let grid = &f.grid;
    if axis >= grid.dim {
        return Err(GeoftError::AxisOutOfRange { axis, dim: grid.dim });
    }
    if order == 0 {
        return Ok(f.clone());
    }
    match grid.mode {
        GridMode::Periodic => {
            let n = grid.shape[axis];
            spectral::periodic_multiplier(f, |zeta, m| {
                // the unpaired Nyquist mode has no odd derivative
                if order % 2 == 1 && n % 2 == 0 && m[axis] == -((n / 2) as i64) {
                    return Complex64::new(0.0, 0.0);
                }
                Complex64::new(0.0, 2.0 * PI * zeta[axis]).powu(order)
            })
        }
        GridMode::Truncated => {
            let mut out = f.clone();
            for _ in 0..order {
                out = fd_first_derivative(&out, axis)?;
            }
            Ok(out)
        }
    }
}

fn fd_first_derivative(f: &SampledField, axis: usize) -> Result<SampledField> {
    let grid = &f.grid;
    let n = grid.shape[axis];
    if n < 5 {
        return Err(GeoftError::InvalidInput(
            "finite differences need at least 5 points per axis".into(),
        ));
    }
    let h = grid.spacing[axis];
    let stride: usize = grid.shape[axis + 1..].iter().product();
    let values = (0..grid.len())
        .map(|flat| {
            let k = (flat / stride) % n;
            let at = |i: usize| f.values[flat - k * stride + i * stride];
            let d = if k >= 2 && k + 2 < n {
                at(k - 2) - at(k - 1) * 8.0 + at(k + 1) * 8.0 - at(k + 2)
            } else if k < 2 {
                if k == 0 {
                    at(0) * -25.0 + at(1) * 48.0 - at(2) * 36.0 + at(3) * 16.0 - at(4) * 3.0
                } else {
                    at(0) * -3.0 - at(1) * 10.0 + at(2) * 18.0 - at(3) * 6.0 + at(4)
                }
            } else if k == n - 1 {
                at(n - 1) * 25.0 - at(n - 2) * 48.0 + at(n - 3) * 36.0 - at(n - 4) * 16.0 + at(n - 5) * 3.0
            } else {
                at(n - 1) * 3.0 + at(n - 2) * 10.0 - at(n - 3) * 18.0 + at(n - 4) * 6.0 - at(n - 5)
            };
            d / (12.0 * h)
        })
        .collect();
    SampledField::new(grid.clone(), values)
}

/// `∇f`, `Bᵀ∇f` or `B∇f`, one field per component.
pub fn gradient(f: &SampledField, pair: &GeometricPair, kind: GradientKind) -> Result<Vec<SampledField>> {
    let n = f.grid.dim;
    if pair.dim() != n {
        return Err(GeoftError::DimensionMismatch {
            expected: n,
            got: pair.dim(),
        });
    }
    let partials = (0..n)
        .map(|j| partial_derivative(f, j, 1))
        .collect::<Result<Vec<_>>>()?;
    let a: Mat = match kind {
        GradientKind::Classical => return Ok(partials),
        GradientKind::Left => pair.b_t(),
        GradientKind::Right => pair.b().clone(),
    };
    Ok(apply_matrix(&a, &partials))
}

/// Component fields of `A·v` for a vector of fields `v`.
pub fn apply_matrix(a: &Mat, v: &[SampledField]) -> Vec<SampledField> {
    (0..a.nrows())
        .map(|i| {
            let mut out = SampledField::zeros(v[0].grid.clone());
            for (j, comp) in v.iter().enumerate() {
                let aij = a[(i, j)];
                for (o, x) in out.values.iter_mut().zip(&comp.values) {
                    *o += x * aij;
                }
            }
            out
        })
        .collect()
}

/// The symbol `-4π²⟨ζ, Bζ⟩` of `Δ_b` (quadratic form of the symmetric part).
pub fn laplacian_symbol(pair: &GeometricPair, zeta: &[f64]) -> f64 {
    -4.0 * PI * PI * linalg::quad_form(pair.b(), zeta, zeta)
}

/// `Δ_b^m f`. Periodic grids apply the spectral symbol once per power.
pub fn b_laplacian(f: &SampledField, pair: &GeometricPair, m: u32) -> Result<SampledField> {
    let n = f.grid.dim;
    if pair.dim() != n {
        return Err(GeoftError::DimensionMismatch {
            expected: n,
            got: pair.dim(),
        });
    }
    let bsym = linalg::symmetric_part(pair.b());
    let mut out = f.clone();
    for _ in 0..m {
        out = match f.grid.mode {
            GridMode::Periodic => spectral::periodic_multiplier(&out, |zeta, _| {
                Complex64::new(-4.0 * PI * PI * linalg::quad_form(&bsym, zeta, zeta), 0.0)
            })?,
            GridMode::Truncated => {
                let mut acc = SampledField::zeros(f.grid.clone());
                for k in 0..n {
                    let dk = partial_derivative(&out, k, 1)?;
                    for l in 0..n {
                        let bkl = pair.b()[(k, l)];
                        if bkl == 0.0 {
                            continue;
                        }
                        let dkl = partial_derivative(&dk, l, 1)?;
                        for (a, v) in acc.values.iter_mut().zip(&dkl.values) {
                            *a += v * bkl;
                        }
                    }
                }
                acc
            }
        };
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    /// `-4π² b(ξ,ξ)`.
    pub eigenvalue: f64,
    /// `‖Δ_b w - λw‖∞ / max(1, |λ|)`.
    pub residual: f64,
}

/// Applies `Δ_b` to the sampled plane wave `e^{±2πi b(x,ξ)}` (or `b(ξ,x)`)
/// on a periodic grid and measures the departure from `-4π²b(ξ,ξ)·w`.
pub fn plane_wave_eigencheck(
    pair: &GeometricPair,
    xi: &[f64],
    orientation: Orientation,
    positive: bool,
    grid: &GridSpec,
) -> Result<EigenReport> {
    if grid.mode != GridMode::Periodic {
        return Err(GeoftError::NotPeriodic);
    }
    if xi.len() != grid.dim || pair.dim() != grid.dim {
        return Err(GeoftError::DimensionMismatch {
            expected: grid.dim,
            got: xi.len(),
        });
    }
    let wave = PlaneWave::from_form(pair, xi, orientation, positive);
    let ext = grid.extent();
    for (ax, (&k, &e)) in wave.k.iter().zip(&ext).enumerate() {
        let m = crate::fields::nearest_integer(k * e).ok_or_else(|| {
            GeoftError::IncommensurateWave(format!("axis {ax}: k·period = {} is not an integer", k * e))
        })?;
        if 2 * m.unsigned_abs() as usize >= grid.shape[ax] {
            return Err(GeoftError::IncommensurateWave(format!(
                "axis {ax}: mode {m} is not resolved by {} points",
                grid.shape[ax]
            )));
        }
    }
    let w = wave.sample(grid)?;
    let lw = b_laplacian(&w, pair, 1)?;
    let lambda = -4.0 * PI * PI * pair.form(xi, xi);
    let scaled: Vec<Complex64> = w.values.iter().map(|v| v * lambda).collect();
    let residual = linalg::abs_linf(&lw.values, &scaled) / lambda.abs().max(1.0);
    Ok(EigenReport {
        eigenvalue: lambda,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExchangeDirection {
    /// Transform of `∂_j^α f` against a polynomial factor times the transform.
    TransformOfDerivative,
    /// `∂_j^α` of the transform against the transform of a coordinate-weighted `f`.
    DerivativeOfTransform,
}

/// Checks the derivative/transform exchange rules for a Gaussian.
///
/// With `F^L f(ξ) = ∫ e^{-2πi ξᵀMx} f`, differentiation produces the factors
/// `π_j(Mᵀξ)` (left) or `π_j(Mξ)` (right) on the frequency side and
/// `π_j(Mx)` / `π_j(Mᵀx)` on the spatial side; inverses flip the sign of `i`
/// and swap the two matrices.
pub fn derivative_transform_identity(
    g: &GaussianFunction,
    pair: &GeometricPair,
    transform: Transform,
    direction: ExchangeDirection,
    axis: usize,
    order: u32,
    probes: &[Vec<f64>],
    grid: &GridSpec,
) -> Result<IdentityReport> {
    let n = g.dim();
    if pair.dim() != n || grid.dim != n {
        return Err(GeoftError::DimensionMismatch {
            expected: n,
            got: pair.dim(),
        });
    }
    if axis >= n {
        return Err(GeoftError::AxisOutOfRange { axis, dim: n });
    }
    let m = pair.m();
    let mt = m.transpose();
    // (factor matrix, sign of 2πi) for each of the eight statements
    let (mat, sign) = match (transform, direction) {
        (Transform::Forward(Side::Left), ExchangeDirection::TransformOfDerivative) => (&mt, 1.0),
        (Transform::Forward(Side::Right), ExchangeDirection::TransformOfDerivative) => (m, 1.0),
        (Transform::Inverse(Side::Left), ExchangeDirection::TransformOfDerivative) => (m, -1.0),
        (Transform::Inverse(Side::Right), ExchangeDirection::TransformOfDerivative) => (&mt, -1.0),
        (Transform::Forward(Side::Left), ExchangeDirection::DerivativeOfTransform) => (m, -1.0),
        (Transform::Forward(Side::Right), ExchangeDirection::DerivativeOfTransform) => (&mt, -1.0),
        (Transform::Inverse(Side::Left), ExchangeDirection::DerivativeOfTransform) => (&mt, 1.0),
        (Transform::Inverse(Side::Right), ExchangeDirection::DerivativeOfTransform) => (m, 1.0),
    };
    let row: Vec<f64> = (0..n).map(|l| mat[(axis, l)]).collect();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI * sign);
    match direction {
        ExchangeDirection::TransformOfDerivative => {
            let df = PolyGaussian::new(g.clone()).derivative_n(axis, order)?.sample(grid)?;
            let lhs = transform.quadrature(&df, pair, probes)?;
            let closed = transform.closed_form(g, pair);
            let rhs = probes
                .iter()
                .map(|p| (two_pi_i * linalg::dot(&row, p)).powu(order) * closed.eval_unchecked(p))
                .collect();
            Ok(IdentityReport::new(lhs, rhs))
        }
        ExchangeDirection::DerivativeOfTransform => {
            let closed = PolyGaussian::new(transform.closed_form(g, pair)).derivative_n(axis, order)?;
            let lhs = probes.iter().map(|p| closed.eval(p)).collect();
            let mut weighted = PolyGaussian::new(g.clone());
            for _ in 0..order {
                weighted = weighted.mul_linear(&row);
            }
            let rhs = transform
                .quadrature(&weighted.sample(grid)?, pair, probes)?
                .into_iter()
                .map(|v| v * Complex64::new(0.0, 2.0 * PI * sign).powu(order))
                .collect();
            Ok(IdentityReport::new(lhs, rhs))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianBackend {
    /// Analytic `Δ_b^m` of the Gaussian, quadrature transform, closed-form right side.
    Quadrature,
    /// Spectral `Δ_b^m` on a periodic grid and probes on the grid's dual lattice.
    PeriodicSpectral,
}

/// `F(Δ_b^m f)(ξ) = [-4π² b(ξ,ξ)]^m F f(ξ)` and, for inverses,
/// `F⁻¹(Δ_b^m f)(x) = [-4π² b(x,x)]^m F⁻¹ f(x)`.
///
/// For the periodic backend `probes` are integer mode vectors `m`; the probe
/// point is then `Bᵀζ` / `Bζ` (forward left/right) or `Bζ` / `Bᵀζ`
/// (inverse left/right) with `ζ_i = m_i / (N_i h_i)`, where the Riemann sum is
/// exactly diagonalised by the DFT.
pub fn laplacian_transform_identity(
    g: &GaussianFunction,
    pair: &GeometricPair,
    m: u32,
    transform: Transform,
    backend: LaplacianBackend,
    probes: &[Vec<f64>],
    grid: &GridSpec,
) -> Result<IdentityReport> {
    let factor = |p: &[f64]| Complex64::new(-4.0 * PI * PI * pair.form(p, p), 0.0).powu(m);
    match backend {
        LaplacianBackend::Quadrature => {
            let lf = PolyGaussian::new(g.clone()).b_laplacian_pow(pair, m)?.sample(grid)?;
            let lhs = transform.quadrature(&lf, pair, probes)?;
            let closed = transform.closed_form(g, pair);
            let rhs = probes.iter().map(|p| factor(p) * closed.eval_unchecked(p)).collect();
            Ok(IdentityReport::new(lhs, rhs))
        }
        LaplacianBackend::PeriodicSpectral => {
            if grid.mode != GridMode::Periodic {
                return Err(GeoftError::NotPeriodic);
            }
            let f = g.sample(grid)?;
            let lf = b_laplacian(&f, pair, m)?;
            let ext = grid.extent();
            let shear = match transform {
                Transform::Forward(Side::Left) | Transform::Inverse(Side::Right) => pair.b_t(),
                Transform::Forward(Side::Right) | Transform::Inverse(Side::Left) => pair.b().clone(),
            };
            let points: Vec<Vec<f64>> = probes
                .iter()
                .map(|mv| {
                    let zeta: Vec<f64> = mv.iter().zip(&ext).map(|(&k, &e)| k / e).collect();
                    linalg::mat_vec(&shear, &zeta)
                })
                .collect();
            let lhs = transform.quadrature(&lf, pair, &points)?;
            let plain = transform.quadrature(&f, pair, &points)?;
            let rhs = plain.iter().zip(&points).map(|(v, p)| v * factor(p)).collect();
            Ok(IdentityReport::new(lhs, rhs))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevReport {
    /// `∫ |Δ_b^m f|²`.
    pub lhs: f64,
    /// `(2π)^{4m} |det b| ∫ b(ξ,ξ)^{2m} |F f(ξ)|² dξ`.
    pub rhs: f64,
    pub relative_gap: f64,
}

/// Both sides by quadrature: the left on `grid` from the analytic `Δ_b^m f`,
/// the right on the FFT lattice of `grid` from the sampled transform of `f`.
pub fn sobolev_norm_identity(
    g: &GaussianFunction,
    pair: &GeometricPair,
    m: u32,
    side: Side,
    grid: &GridSpec,
) -> Result<SobolevReport> {
    let lf = PolyGaussian::new(g.clone()).b_laplacian_pow(pair, m)?.sample(grid)?;
    let lhs = lf.norm_sq();
    let f = g.sample(grid)?;
    let spec = spectral::geometric_ft_fft(&f, pair, side.into())?;
    let terms: Vec<f64> = spec
        .points()
        .iter()
        .zip(&spec.values)
        .map(|(xi, v)| pair.form(xi, xi).powi(2 * m as i32) * v.norm_sqr())
        .collect();
    let rhs = (2.0 * PI).powi(4 * m as i32) * pair.abs_det_b() * linalg::pairwise_sum(&terms) * spec.lattice.cell();
    let scale = lhs.abs().max(rhs.abs());
    let relative_gap = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
    Ok(SobolevReport {
        lhs,
        rhs,
        relative_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::GeometricStructure;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_gauss() -> GaussianFunction {
        GaussianFunction::new(
            linalg::mat_from_rows(&[vec![1.1, 0.2], vec![0.2, 0.8]]).unwrap(),
            vec![0.3, -0.2],
            c(1.0, 0.4),
            vec![0.2, -0.1],
        )
        .unwrap()
    }

    #[test]
    fn derivative_cases() {
        let torus = GridSpec::unit_torus(2, 16).unwrap();
        let ones = SampledField::from_fn(torus.clone(), |_| c(1.0, 0.0));
        assert!(partial_derivative(&ones, 0, 1).unwrap().max_abs() < 1e-13);

        let wave = PlaneWave::euclidean(vec![2.0, -3.0]);
        let w = wave.sample(&torus).unwrap();
        let d = partial_derivative(&w, 1, 1).unwrap();
        let want: Vec<Complex64> = w.values.iter().map(|v| v * c(0.0, -6.0 * PI)).collect();
        assert!(linalg::abs_linf(&d.values, &want) < 1e-12 * 6.0 * PI);

        assert!(matches!(
            partial_derivative(&w, 2, 1),
            Err(GeoftError::AxisOutOfRange { axis: 2, dim: 2 })
        ));
    }

    #[test]
    fn derivative_at_centre_of_symmetric_grid_vanishes() {
        let grid = GridSpec::new(vec![257], vec![-8.0], vec![16.0 / 256.0], GridMode::Truncated).unwrap();
        let g = GaussianFunction::standard(1).sample(&grid).unwrap();
        let dg = partial_derivative(&g, 0, 1).unwrap();
        assert_eq!(grid.point(128), vec![0.0]);
        assert!(dg.values[128].norm() < 1e-8);
    }

    #[test]
    fn finite_differences_match_analytic_derivative() {
        let grid = GridSpec::centered(2, 96, 5.0, GridMode::Truncated).unwrap();
        let g = sample_gauss();
        let f = g.sample(&grid).unwrap();
        let exact = PolyGaussian::new(g).derivative(0).unwrap().sample(&grid).unwrap();
        let d = partial_derivative(&f, 0, 1).unwrap();
        assert!(linalg::abs_linf(&d.values, &exact.values) < 5e-3);
    }

    #[test]
    fn gradients_of_linear_function() {
        let grid = GridSpec::centered(2, 12, 3.0, GridMode::Truncated).unwrap();
        let a = [0.7, -1.3];
        let f = SampledField::from_fn(grid.clone(), |x| c(linalg::dot(&a, x), 0.0));
        let p = GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let left = gradient(&f, &p, GradientKind::Left).unwrap();
        let want = linalg::mat_vec(&p.b_t(), &a);
        for (comp, w) in left.iter().zip(&want) {
            for v in &comp.values {
                assert!((v - c(*w, 0.0)).norm() < 1e-12);
            }
        }
        // ∇^L = BᵀB⁻¹ ∇^R
        let right = gradient(&f, &p, GradientKind::Right).unwrap();
        let conv = apply_matrix(&(p.b_t() * p.m()), &right);
        for (l, r) in left.iter().zip(&conv) {
            assert!(linalg::abs_linf(&l.values, &r.values) < 1e-10);
        }
        let e = GeometricPair::euclidean(2);
        let cl = gradient(&f, &e, GradientKind::Classical).unwrap();
        let le = gradient(&f, &e, GradientKind::Left).unwrap();
        assert_eq!(cl, le);
    }

    #[test]
    fn laplacian_cases() {
        let torus = GridSpec::unit_torus(2, 16).unwrap();
        let g = GaussianFunction::standard(2).dilate(3.0).unwrap().translate(&[-0.5, -0.5]);
        let f = g.sample(&torus).unwrap();
        let p = GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(b_laplacian(&f, &p, 0).unwrap(), f);

        let j = GeometricPair::new(GeometricStructure::symplectic(1)).unwrap();
        assert!(b_laplacian(&f, &j, 1).unwrap().max_abs() < 1e-10);

        let w = PlaneWave::euclidean(vec![1.0, 2.0]).sample(&torus).unwrap();
        let lw = b_laplacian(&w, &GeometricPair::euclidean(2), 1).unwrap();
        let lambda = -4.0 * PI * PI * 5.0;
        let want: Vec<Complex64> = w.values.iter().map(|v| v * lambda).collect();
        assert!(linalg::abs_linf(&lw.values, &want) < 1e-12 * lambda.abs());
    }

    #[test]
    fn eigencheck_cases() {
        let torus = GridSpec::unit_torus(2, 32).unwrap();
        let e = GeometricPair::euclidean(2);
        let r = plane_wave_eigencheck(&e, &[0.0, 0.0], Orientation::PointFirst, true, &torus).unwrap();
        assert_eq!(r.residual, 0.0);
        let r = plane_wave_eigencheck(&e, &[1.0, 0.0], Orientation::PointFirst, true, &torus).unwrap();
        assert!(r.residual <= 1e-10);
        let j = GeometricPair::new(GeometricStructure::symplectic(1)).unwrap();
        let r = plane_wave_eigencheck(&j, &[2.0, 1.0], Orientation::FrequencyFirst, false, &torus).unwrap();
        assert_eq!(r.eigenvalue, 0.0);
        assert!(r.residual <= 1e-10);
        assert!(matches!(
            plane_wave_eigencheck(&e, &[0.5, 0.0], Orientation::PointFirst, true, &torus),
            Err(GeoftError::IncommensurateWave(_))
        ));
        // ξ = B k makes b(x,ξ) = ⟨x,k⟩ commensurate for integer k
        let p = GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let xi = linalg::mat_vec(p.b(), &[3.0, -2.0]);
        let r = plane_wave_eigencheck(&p, &xi, Orientation::PointFirst, true, &torus).unwrap();
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn derivative_exchange_in_one_dimension() {
        let grid = GridSpec::centered(1, 256, 8.0, GridMode::Truncated).unwrap();
        let p = GeometricPair::from_rows(&[vec![2.0]]).unwrap();
        let g = GaussianFunction::standard(1);
        let probes = vec![vec![0.1], vec![0.5], vec![1.0]];
        let r = derivative_transform_identity(
            &g,
            &p,
            Transform::Forward(Side::Left),
            ExchangeDirection::TransformOfDerivative,
            0,
            1,
            &probes,
            &grid,
        )
        .unwrap();
        assert!(r.residual <= 1e-8, "{}", r.residual);
        for (p, v) in probes.iter().zip(&r.rhs) {
            let want = c(0.0, 2.0 * PI * 2.0 * p[0]) * (-4.0 * PI * p[0] * p[0]).exp();
            assert!((v - want).norm() < 1e-14);
        }
        let r0 = derivative_transform_identity(
            &g,
            &p,
            Transform::Forward(Side::Left),
            ExchangeDirection::TransformOfDerivative,
            0,
            0,
            &probes,
            &grid,
        )
        .unwrap();
        assert!(r0.residual <= 1e-12);
        let at_zero = derivative_transform_identity(
            &g,
            &p,
            Transform::Forward(Side::Left),
            ExchangeDirection::TransformOfDerivative,
            0,
            1,
            &[vec![0.0]],
            &grid,
        )
        .unwrap();
        assert!(at_zero.lhs[0].norm() < 1e-14 && at_zero.rhs[0].norm() < 1e-14);
    }

    #[test]
    fn all_eight_exchange_rules_hold() {
        let grid = GridSpec::centered(2, 96, 7.0, GridMode::Truncated).unwrap();
        let p = GeometricPair::from_rows(&[vec![1.2, 0.3], vec![-0.4, 0.9]]).unwrap();
        let g = sample_gauss();
        let probes = vec![vec![0.1, -0.3], vec![0.6, 0.2], vec![-0.5, 0.4]];
        for t in [
            Transform::Forward(Side::Left),
            Transform::Forward(Side::Right),
            Transform::Inverse(Side::Left),
            Transform::Inverse(Side::Right),
        ] {
            for d in [ExchangeDirection::TransformOfDerivative, ExchangeDirection::DerivativeOfTransform] {
                for axis in 0..2 {
                    for order in 1..=2 {
                        let r = derivative_transform_identity(&g, &p, t, d, axis, order, &probes, &grid).unwrap();
                        assert!(r.residual <= 1e-9, "{t:?} {d:?} {axis} {order}: {}", r.residual);
                    }
                }
            }
        }
    }

    #[test]
    fn laplacian_transform_identity_cases() {
        let grid = GridSpec::centered(2, 96, 7.0, GridMode::Truncated).unwrap();
        let e = GeometricPair::euclidean(2);
        let g = GaussianFunction::standard(2);
        let r = laplacian_transform_identity(
            &g,
            &e,
            1,
            Transform::Forward(Side::Left),
            LaplacianBackend::Quadrature,
            &[vec![0.0, 0.0]],
            &grid,
        )
        .unwrap();
        assert!(r.lhs[0].norm() < 1e-12 && r.rhs[0].norm() == 0.0);

        let p = GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let r = laplacian_transform_identity(
            &g,
            &p,
            1,
            Transform::Forward(Side::Left),
            LaplacianBackend::Quadrature,
            &[vec![0.3, -0.2]],
            &grid,
        )
        .unwrap();
        assert!(r.residual <= 1e-7);

        let torus = grid.with_mode(GridMode::Periodic);
        let modes = vec![vec![1.0, 0.0], vec![3.0, -2.0], vec![-5.0, 4.0]];
        for t in [
            Transform::Forward(Side::Left),
            Transform::Forward(Side::Right),
            Transform::Inverse(Side::Left),
            Transform::Inverse(Side::Right),
        ] {
            for m in 1..=2 {
                let r = laplacian_transform_identity(&sample_gauss(), &p, m, t, LaplacianBackend::PeriodicSpectral, &modes, &torus)
                    .unwrap();
                assert!(r.residual <= 1e-10, "{t:?} {m}: {}", r.residual);
            }
        }
    }

    #[test]
    fn sobolev_identity_cases() {
        let grid = GridSpec::centered(2, 96, 7.0, GridMode::Truncated).unwrap();
        let e = GeometricPair::euclidean(2);
        let g = GaussianFunction::standard(2);
        let r0 = sobolev_norm_identity(&g, &e, 0, Side::Left, &grid).unwrap();
        assert!((r0.lhs - 0.5).abs() < 1e-12 && r0.relative_gap <= 1e-10);
        let r1 = sobolev_norm_identity(&g, &e, 1, Side::Left, &grid).unwrap();
        assert!(r1.relative_gap <= 1e-6);
        let p = GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let r = sobolev_norm_identity(&sample_gauss(), &p, 1, Side::Right, &grid).unwrap();
        assert!(r.relative_gap <= 1e-6);
        let zero = sample_gauss().scaled(c(0.0, 0.0));
        let rz = sobolev_norm_identity(&zero, &p, 1, Side::Left, &grid).unwrap();
        assert_eq!((rz.lhs, rz.rhs), (0.0, 0.0));
    }
}
