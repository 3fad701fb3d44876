//! Uniform grids, sampled complex fields, plane waves and the modulated
//! Gaussian family
//!
//! ```text
//! g(x) = amp · e^{2πi⟨w,x⟩} · exp(-π (x-c)ᵀ A (x-c))
//! ```
//!
//! which is closed under the classical transform, linear changes of variable,
//! translations, modulations, dilations, conjugation and products.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoftError, Result};
use crate::forms::{GeometricPair, Side};
use crate::linalg::{self, Mat};

const INTEGRALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridMode {
    Truncated,
    Periodic,
}

/// A rectangular grid `o_i + k·h_i`, `k = 0..N_i`, flattened row-major
/// (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub shape: Vec<usize>,
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub mode: GridMode,
}

impl GridSpec {
    pub fn new(shape: Vec<usize>, origin: Vec<f64>, spacing: Vec<f64>, mode: GridMode) -> Result<Self> {
        let dim = shape.len();
        if dim == 0 {
            return Err(GeoftError::InvalidInput("grid needs at least one axis".into()));
        }
        for len in [origin.len(), spacing.len()] {
            if len != dim {
                return Err(GeoftError::DimensionMismatch { expected: dim, got: len });
            }
        }
        if shape.iter().any(|&n| n < 2) {
            return Err(GeoftError::InvalidInput("every axis needs at least 2 points".into()));
        }
        if spacing.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(GeoftError::InvalidInput("grid spacing must be positive".into()));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(GeoftError::InvalidInput("grid origin must be finite".into()));
        }
        Ok(Self {
            dim,
            shape,
            origin,
            spacing,
            mode,
        })
    }

    /// `[-half, half)` on every axis with `n` points each (spacing `2·half/n`).
    pub fn centered(dim: usize, n: usize, half: f64, mode: GridMode) -> Result<Self> {
        let h = 2.0 * half / n as f64;
        Self::new(vec![n; dim], vec![-half; dim], vec![h; dim], mode)
    }

    /// `[0, 1)ⁿ` with `n` points per axis, periodic.
    pub fn unit_torus(dim: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; dim], vec![0.0; dim], vec![1.0 / n as f64; dim], GridMode::Periodic)
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Π h_i`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for ax in (0..self.dim).rev() {
            idx[ax] = flat % self.shape[ax];
            flat /= self.shape[ax];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(ax, &k)| self.origin[ax] + k as f64 * self.spacing[ax])
            .collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Period `N_i·h_i` of each axis.
    pub fn extent(&self) -> Vec<f64> {
        self.shape
            .iter()
            .zip(&self.spacing)
            .map(|(&n, &h)| n as f64 * h)
            .collect()
    }

    /// Per-axis `o_i/h_i` when every one of them is an integer.
    pub fn origin_offsets(&self) -> Option<Vec<i64>> {
        self.origin
            .iter()
            .zip(&self.spacing)
            .map(|(&o, &h)| nearest_integer(o / h))
            .collect()
    }

    pub fn with_mode(&self, mode: GridMode) -> Self {
        Self {
            mode,
            ..self.clone()
        }
    }
}

pub(crate) fn nearest_integer(v: f64) -> Option<i64> {
    let r = v.round();
    ((v - r).abs() <= INTEGRALITY_TOL * v.abs().max(1.0)).then_some(r as i64)
}

/// Complex samples of a function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(GeoftError::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    pub fn from_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| f(&grid.point(k)))
            .collect();
        Self { grid, values }
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with<F>(&self, other: &SampledField, f: F) -> Result<Self>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn check_same_grid(&self, other: &SampledField) -> Result<()> {
        if self.grid != other.grid {
            return Err(GeoftError::GridMismatch("fields live on different grids".into()));
        }
        Ok(())
    }

    /// Quadrature of `∫ f·g` (no conjugation).
    pub fn bilinear(&self, other: &SampledField) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let terms: Vec<Complex64> = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(linalg::pairwise_sum(&terms) * self.grid.cell_volume())
    }

    /// Quadrature of `∫ f·conj(g)`.
    pub fn inner(&self, other: &SampledField) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let terms: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .collect();
        Ok(linalg::pairwise_sum(&terms) * self.grid.cell_volume())
    }

    /// Quadrature of `∫ |f|²`.
    pub fn norm_sq(&self) -> f64 {
        let terms: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        linalg::pairwise_sum(&terms) * self.grid.cell_volume()
    }

    pub fn max_abs(&self) -> f64 {
        linalg::linf(&self.values)
    }
}

/// Argument order of `b` in a plane wave `e^{±2πi b(·,·)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// `b(x, ξ)`
    PointFirst,
    /// `b(ξ, x)`
    FrequencyFirst,
}

/// `x ↦ e^{2πi⟨k,x⟩}` stored by its Euclidean wave vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub k: Vec<f64>,
}

impl PlaneWave {
    pub fn euclidean(k: Vec<f64>) -> Self {
        Self { k }
    }

    /// `x ↦ e^{±2πi b(x,ξ)}` or `x ↦ e^{±2πi b(ξ,x)}`.
    ///
    /// `b(x,ξ) = ⟨x, Mξ⟩` and `b(ξ,x) = ⟨Mᵀξ, x⟩`.
    pub fn from_form(pair: &GeometricPair, xi: &[f64], orientation: Orientation, positive: bool) -> Self {
        let mut k = match orientation {
            Orientation::PointFirst => linalg::mat_vec(pair.m(), xi),
            Orientation::FrequencyFirst => linalg::mat_vec(&pair.m().transpose(), xi),
        };
        if !positive {
            k.iter_mut().for_each(|v| *v = -*v);
        }
        Self { k }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        linalg::cis_turns(linalg::dot(&self.k, x))
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<SampledField> {
        if self.k.len() != grid.dim {
            return Err(GeoftError::DimensionMismatch {
                expected: grid.dim,
                got: self.k.len(),
            });
        }
        Ok(SampledField::from_fn(grid.clone(), |x| self.eval(x)))
    }
}

/// `amp · e^{2πi⟨w,x⟩} · exp(-π (x-c)ᵀ A (x-c))` with `A` symmetric positive definite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianFunction {
    #[serde(rename = "A", with = "mat_rows")]
    pub shape: Mat,
    #[serde(rename = "c")]
    pub center: Vec<f64>,
    #[serde(with = "complex_pair")]
    pub amp: Complex64,
    #[serde(rename = "w", default)]
    pub phase_freq: Vec<f64>,
}

impl GaussianFunction {
    pub fn new(shape: Mat, center: Vec<f64>, amp: Complex64, phase_freq: Vec<f64>) -> Result<Self> {
        let g = Self {
            shape,
            center,
            amp,
            phase_freq,
        };
        g.validate()?;
        Ok(g)
    }

    /// `e^{-π|x|²}`.
    pub fn standard(n: usize) -> Self {
        Self {
            shape: linalg::identity(n),
            center: vec![0.0; n],
            amp: Complex64::new(1.0, 0.0),
            phase_freq: vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Checks shapes, symmetry of `A` to `1e-12` and positive definiteness.
    /// A missing modulation vector is filled with zeros.
    pub fn validate(&self) -> Result<()> {
        let n = self.center.len();
        if !self.shape.is_square() {
            return Err(GeoftError::NonSquare {
                rows: self.shape.nrows(),
                cols: self.shape.ncols(),
            });
        }
        if self.shape.nrows() != n {
            return Err(GeoftError::DimensionMismatch {
                expected: n,
                got: self.shape.nrows(),
            });
        }
        if self.phase_freq.len() != n {
            return Err(GeoftError::DimensionMismatch {
                expected: n,
                got: self.phase_freq.len(),
            });
        }
        let asym = linalg::max_abs(&(&self.shape - self.shape.transpose()));
        if asym > 1e-12 * linalg::max_abs(&self.shape).max(1.0) {
            return Err(GeoftError::InvalidInput("Gaussian shape must be symmetric".into()));
        }
        if linalg::sym_eigenvalues(&self.shape)[0] <= 0.0 {
            return Err(GeoftError::NotPositiveDefinite);
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.dim() {
            return Err(GeoftError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub fn eval_unchecked(&self, x: &[f64]) -> Complex64 {
        let d: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let q = linalg::quad_form(&self.shape, &d, &d);
        self.amp * linalg::cis_turns(linalg::dot(&self.phase_freq, x)) * (-std::f64::consts::PI * q).exp()
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<SampledField> {
        if grid.dim != self.dim() {
            return Err(GeoftError::DimensionMismatch {
                expected: self.dim(),
                got: grid.dim,
            });
        }
        Ok(SampledField::from_fn(grid.clone(), |x| self.eval_unchecked(x)))
    }

    /// The classical transform `ξ ↦ ∫ e^{-2πi⟨x,ξ⟩} g(x) dx`.
    pub fn classical_ft(&self) -> Self {
        let det = linalg::det(&self.shape);
        let inv = symmetrize(&linalg::inverse(&self.shape).expect("positive definite shape"));
        let amp = self.amp * det.powf(-0.5) * linalg::cis_turns(linalg::dot(&self.center, &self.phase_freq));
        Self {
            shape: inv,
            center: self.phase_freq.clone(),
            amp,
            phase_freq: self.center.iter().map(|v| -v).collect(),
        }
    }

    /// `F^L_b g = τ_{Bᵀ}(Fg)` or `F^R_b g = τ_B(Fg)`.
    pub fn geometric_ft(&self, pair: &GeometricPair, side: Side) -> Self {
        let a = match side {
            Side::Left => pair.b_t(),
            Side::Right => pair.b().clone(),
        };
        self.classical_ft().tau(&a).expect("pair matrices are invertible")
    }

    /// `(F^L_b)⁻¹ g = |det b|·τ_{-B}(Fg)`, `(F^R_b)⁻¹ g = |det b|·τ_{-Bᵀ}(Fg)`.
    pub fn inverse_geometric_ft(&self, pair: &GeometricPair, side: Side) -> Self {
        let a = match side {
            Side::Left => -pair.b(),
            Side::Right => -pair.b_t(),
        };
        self.classical_ft()
            .tau(&a)
            .expect("pair matrices are invertible")
            .scaled(Complex64::new(pair.abs_det_b(), 0.0))
    }

    /// `τ_A g = g(A⁻¹·)`.
    pub fn tau(&self, a: &Mat) -> Result<Self> {
        let inv = linalg::inverse(a)?;
        let inv_t = inv.transpose();
        Ok(Self {
            shape: symmetrize(&(&inv_t * &self.shape * &inv)),
            center: linalg::mat_vec(a, &self.center),
            amp: self.amp,
            phase_freq: linalg::mat_vec(&inv_t, &self.phase_freq),
        })
    }

    /// `g(· + h)`.
    pub fn translate(&self, h: &[f64]) -> Self {
        Self {
            shape: self.shape.clone(),
            center: self.center.iter().zip(h).map(|(c, v)| c - v).collect(),
            amp: self.amp * linalg::cis_turns(linalg::dot(&self.phase_freq, h)),
            phase_freq: self.phase_freq.clone(),
        }
    }

    /// `g · e^{2πi⟨k,·⟩}`.
    pub fn modulate(&self, k: &[f64]) -> Self {
        Self {
            phase_freq: self.phase_freq.iter().zip(k).map(|(w, v)| w + v).collect(),
            ..self.clone()
        }
    }

    /// `g(λ·)`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if lambda == 0.0 {
            return Err(GeoftError::SingularMatrix);
        }
        self.tau(&linalg::scaled_identity(self.dim(), 1.0 / lambda))
    }

    pub fn conj(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            center: self.center.clone(),
            amp: self.amp.conj(),
            phase_freq: self.phase_freq.iter().map(|v| -v).collect(),
        }
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        Self {
            amp: self.amp * z,
            ..self.clone()
        }
    }

    /// Pointwise product, again a Gaussian.
    pub fn product(&self, other: &Self) -> Self {
        let a = &self.shape + &other.shape;
        let rhs: Vec<f64> = linalg::mat_vec(&self.shape, &self.center)
            .iter()
            .zip(linalg::mat_vec(&other.shape, &other.center))
            .map(|(u, v)| u + v)
            .collect();
        let a_inv = linalg::inverse(&a).expect("sum of positive definite shapes");
        let c = linalg::mat_vec(&a_inv, &rhs);
        let e = linalg::quad_form(&self.shape, &self.center, &self.center)
            + linalg::quad_form(&other.shape, &other.center, &other.center)
            - linalg::quad_form(&a, &c, &c);
        Self {
            shape: symmetrize(&a),
            center: c,
            amp: self.amp * other.amp * (-std::f64::consts::PI * e).exp(),
            phase_freq: self.phase_freq.iter().zip(&other.phase_freq).map(|(u, v)| u + v).collect(),
        }
    }

    /// `(f⋆g)(x) = ∫ f(y) g(x-y) dy`, computed as `F⁻¹(Ff·Fg)`.
    pub fn convolve(&self, other: &Self) -> Self {
        let prod = self.classical_ft().product(&other.classical_ft());
        // F⁻¹ = τ_{-I}∘F
        prod.classical_ft()
            .tau(&linalg::scaled_identity(self.dim(), -1.0))
            .expect("-I is invertible")
    }

    /// `∫ g`.
    pub fn integral(&self) -> Complex64 {
        self.classical_ft().eval_unchecked(&vec![0.0; self.dim()])
    }

    /// `∫ |g|² = |amp|²·2^{-n/2}·det(A)^{-1/2}`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.amp.norm_sqr() * 2f64.powf(-(self.dim() as f64) / 2.0) * linalg::det(&self.shape).powf(-0.5)
    }

    /// Half-width of a centred box outside which `|g|` is below `e^{-64π}`
    /// relative to its peak: `|c|∞ + 8/√λ_min(A)`.
    pub fn default_half_width(&self) -> f64 {
        let lmin = linalg::sym_eigenvalues(&self.shape)[0];
        let cmax = self.center.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        cmax + 8.0 / lmin.sqrt()
    }
}

fn symmetrize(m: &Mat) -> Mat {
    linalg::symmetric_part(m)
}

/// Operations applied directly to samples.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldOp {
    /// `f(· + h)` for `h` a multiple of the spacing on each axis.
    Translate(Vec<f64>),
    /// Multiplication by a plane wave.
    Modulate(PlaneWave),
    /// `f(λ·)` for integer `λ` on a periodic grid.
    Dilate(f64),
    Conjugate,
    /// `f(-·)` on grids symmetric about the origin.
    NegateArgument,
}

pub fn field_map(f: &SampledField, op: &FieldOp) -> Result<SampledField> {
    let grid = &f.grid;
    match op {
        FieldOp::Conjugate => Ok(f.map(|v| v.conj())),
        FieldOp::Modulate(wave) => {
            let w = wave.sample(grid)?;
            f.zip_with(&w, |a, b| a * b)
        }
        FieldOp::Translate(h) => {
            if h.len() != grid.dim {
                return Err(GeoftError::DimensionMismatch {
                    expected: grid.dim,
                    got: h.len(),
                });
            }
            let shifts: Vec<i64> = h
                .iter()
                .zip(&grid.spacing)
                .map(|(&v, &s)| nearest_integer(v / s))
                .collect::<Option<_>>()
                .ok_or_else(|| GeoftError::NotGridRealizable("translation is not a multiple of the spacing".into()))?;
            Ok(remap(f, |ax, k| Some(k as i64 + shifts[ax])))
        }
        FieldOp::NegateArgument => {
            // -x_k = o + (m - k)h with m = -2o/h
            let ms: Vec<i64> = grid
                .origin
                .iter()
                .zip(&grid.spacing)
                .map(|(&o, &h)| nearest_integer(-2.0 * o / h))
                .collect::<Option<_>>()
                .ok_or_else(|| GeoftError::NotGridRealizable("grid is not symmetric under x ↦ -x".into()))?;
            if grid.mode == GridMode::Truncated
                && ms.iter().zip(&grid.shape).any(|(&m, &n)| m != n as i64 - 1)
            {
                return Err(GeoftError::NotGridRealizable("truncated grid is not symmetric about 0".into()));
            }
            Ok(remap(f, |ax, k| Some(ms[ax] - k as i64)))
        }
        FieldOp::Dilate(lambda) => {
            if grid.mode != GridMode::Periodic {
                return Err(GeoftError::NotGridRealizable("dilation needs a periodic grid".into()));
            }
            let l = nearest_integer(*lambda)
                .filter(|&l| l != 0)
                .ok_or_else(|| GeoftError::NotGridRealizable("dilation factor must be a nonzero integer".into()))?;
            // λx_k = o + (λk + (λ-1)o/h)h
            let offs: Vec<i64> = grid
                .origin
                .iter()
                .zip(&grid.spacing)
                .map(|(&o, &h)| nearest_integer((l as f64 - 1.0) * o / h))
                .collect::<Option<_>>()
                .ok_or_else(|| GeoftError::NotGridRealizable("origin incompatible with dilation".into()))?;
            Ok(remap(f, |ax, k| Some(l * k as i64 + offs[ax])))
        }
    }
}

/// New field whose sample at index `k` is the old sample at `source(axis, k_axis)`
/// per axis, wrapped on periodic grids and zero outside truncated ones.
fn remap<F: Fn(usize, usize) -> Option<i64>>(f: &SampledField, source: F) -> SampledField {
    let grid = &f.grid;
    let periodic = grid.mode == GridMode::Periodic;
    let values = (0..grid.len())
        .map(|flat| {
            let idx = grid.multi_index(flat);
            let mut src = Vec::with_capacity(grid.dim);
            for (ax, &k) in idx.iter().enumerate() {
                let n = grid.shape[ax] as i64;
                let s = match source(ax, k) {
                    Some(s) => s,
                    None => return Complex64::new(0.0, 0.0),
                };
                let s = if periodic { s.rem_euclid(n) } else { s };
                if s < 0 || s >= n {
                    return Complex64::new(0.0, 0.0);
                }
                src.push(s as usize);
            }
            f.values[grid.flat_index(&src)]
        })
        .collect();
    SampledField {
        grid: grid.clone(),
        values,
    }
}

pub(crate) mod mat_rows {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::{self, Mat};

    pub fn serialize<S: Serializer>(m: &Mat, s: S) -> Result<S::Ok, S::Error> {
        linalg::to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        linalg::mat_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::GeometricStructure;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gauss1(a: f64, center: f64, w: f64) -> GaussianFunction {
        GaussianFunction::new(Mat::from_element(1, 1, a), vec![center], c(1.0, 0.0), vec![w]).unwrap()
    }

    /// Midpoint-free Riemann sum of `e^{-2πixξ} g(x)` on [-8, 8).
    fn quad_ft_1d(g: &GaussianFunction, xi: f64, n: usize) -> Complex64 {
        let h = 16.0 / n as f64;
        (0..n)
            .map(|k| {
                let x = -8.0 + k as f64 * h;
                g.eval_unchecked(&[x]) * linalg::cis_turns(-x * xi) * h
            })
            .sum()
    }

    #[test]
    fn gaussian_eval_cases() {
        let g = GaussianFunction::standard(2);
        assert_eq!(g.eval(&[0.0, 0.0]).unwrap(), c(1.0, 0.0));
        let g1 = GaussianFunction::standard(1);
        assert!((g1.eval(&[1.0]).unwrap().re - 0.043_213_918_263_772_25).abs() < 1e-15);
        let shifted = gauss1(3.0, 0.7, 0.0).scaled(c(0.0, 2.0));
        assert_eq!(shifted.eval(&[0.7]).unwrap(), c(0.0, 2.0));
        assert!(g.eval(&[0.0]).is_err());
    }

    #[test]
    fn classical_ft_cases() {
        let g = GaussianFunction::standard(2);
        assert_eq!(g.classical_ft(), g.tau(&linalg::identity(2)).unwrap());

        let g = gauss1(2.0, 0.0, 0.0);
        let ft = g.classical_ft();
        assert!((ft.amp.re - 2f64.powf(-0.5)).abs() < 1e-15);
        assert!((ft.shape[(0, 0)] - 0.5).abs() < 1e-15);
        for xi in [0.0, 0.3, 1.1] {
            let q = quad_ft_1d(&g, xi, 2048);
            assert!((q - ft.eval_unchecked(&[xi])).norm() < 1e-12);
        }

        let g = gauss1(1.0, 1.0, 0.0);
        assert!((g.classical_ft().eval_unchecked(&[0.0]) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((g.integral() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn classical_ft_of_modulated_shifted_gaussian_matches_quadrature() {
        let g = gauss1(1.3, 0.4, -0.6).scaled(c(0.5, -1.5));
        let ft = g.classical_ft();
        for xi in [-1.0, -0.2, 0.0, 0.9] {
            let q = quad_ft_1d(&g, xi, 4096);
            assert!((q - ft.eval_unchecked(&[xi])).norm() < 1e-12, "xi={xi}");
        }
    }

    #[test]
    fn twice_transformed_gaussian_is_reflected() {
        let g = GaussianFunction::new(
            linalg::mat_from_rows(&[vec![1.5, 0.2], vec![0.2, 0.8]]).unwrap(),
            vec![0.3, -0.4],
            c(0.7, 0.2),
            vec![0.5, 0.1],
        )
        .unwrap();
        let gg = g.classical_ft().classical_ft();
        assert!(linalg::max_abs(&(&gg.shape - &g.shape)) < 1e-12);
        for i in 0..2 {
            assert!((gg.center[i] + g.center[i]).abs() < 1e-12);
            assert!((gg.phase_freq[i] + g.phase_freq[i]).abs() < 1e-12);
        }
        assert!((gg.amp - g.amp).norm() < 1e-12);
    }

    #[test]
    fn geometric_ft_cases() {
        let g = GaussianFunction::standard(1);
        let p = GeometricPair::from_rows(&[vec![2.0]]).unwrap();
        let fl = g.geometric_ft(&p, Side::Left);
        for xi in [0.0, 0.25, 0.6] {
            let want = (-4.0 * PI * xi * xi).exp();
            assert!((fl.eval_unchecked(&[xi]).re - want).abs() < 1e-15);
            // direct quadrature of ∫ e^{-2πi·2ξx} e^{-πx²} dx
            let q = quad_ft_1d(&g, 2.0 * xi, 2048);
            assert!((q.re - want).abs() < 1e-12);
        }
        let e = GeometricPair::euclidean(2);
        let g2 = GaussianFunction::standard(2).translate(&[0.3, 0.1]);
        assert_eq!(g2.geometric_ft(&e, Side::Left), g2.classical_ft());

        let j = GeometricPair::new(GeometricStructure::symplectic(1)).unwrap();
        let lhs = g2.geometric_ft(&j, Side::Left);
        let rhs = g2.geometric_ft(&j.opposite(), Side::Right);
        for xi in [[0.2, -0.3], [1.0, 0.5]] {
            assert!((lhs.eval_unchecked(&xi) - rhs.eval_unchecked(&xi)).norm() < 1e-15);
        }
    }

    #[test]
    fn tau_cases() {
        let g = GaussianFunction::standard(2);
        assert_eq!(g.tau(&linalg::identity(2)).unwrap(), g);
        let t = g.tau(&linalg::scaled_identity(2, 2.0)).unwrap();
        assert!(linalg::max_abs(&(&t.shape - linalg::scaled_identity(2, 0.25))) < 1e-15);
        let x = [1.0, 0.0];
        assert!((t.eval_unchecked(&x) - g.eval_unchecked(&[0.5, 0.0])).norm() < 1e-15);
        let (s, co) = 0.9_f64.sin_cos();
        let rot = linalg::mat_from_rows(&[vec![co, -s], vec![s, co]]).unwrap();
        let r = g.tau(&rot).unwrap();
        assert!(linalg::max_abs(&(&r.shape - &g.shape)) < 1e-15);
        assert!(g.tau(&Mat::zeros(2, 2)).is_err());
    }

    #[test]
    fn tau_is_a_group_action() {
        let g = GaussianFunction::new(
            linalg::mat_from_rows(&[vec![1.2, -0.3], vec![-0.3, 0.9]]).unwrap(),
            vec![0.2, 0.5],
            c(1.0, 0.3),
            vec![-0.4, 0.7],
        )
        .unwrap();
        let a1 = linalg::mat_from_rows(&[vec![1.0, 0.5], vec![-0.2, 1.3]]).unwrap();
        let a2 = linalg::mat_from_rows(&[vec![0.7, 0.0], vec![0.4, -1.1]]).unwrap();
        let lhs = g.tau(&(&a1 * &a2)).unwrap();
        let rhs = g.tau(&a2).unwrap().tau(&a1).unwrap();
        assert!(linalg::max_abs(&(&lhs.shape - &rhs.shape)) < 1e-12);
        for i in 0..2 {
            assert!((lhs.center[i] - rhs.center[i]).abs() < 1e-12);
            assert!((lhs.phase_freq[i] - rhs.phase_freq[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_operations_match_pointwise_definitions() {
        let g = GaussianFunction::new(
            linalg::mat_from_rows(&[vec![1.2, -0.3], vec![-0.3, 0.9]]).unwrap(),
            vec![0.2, 0.5],
            c(1.0, 0.3),
            vec![-0.4, 0.7],
        )
        .unwrap();
        let other = GaussianFunction::standard(2).translate(&[0.1, -0.2]).modulate(&[0.3, 0.0]);
        let h = [0.35, -0.8];
        let k = [0.25, 1.5];
        for x in [[0.0, 0.0], [0.3, -0.7], [1.2, 0.4]] {
            let xh = [x[0] + h[0], x[1] + h[1]];
            let fx = g.eval_unchecked(&x);
            assert!((g.translate(&h).eval_unchecked(&x) - g.eval_unchecked(&xh)).norm() < 1e-14);
            let wave = linalg::cis_turns(linalg::dot(&k, &x));
            assert!((g.modulate(&k).eval_unchecked(&x) - fx * wave).norm() < 1e-14);
            assert!((g.dilate(2.0).unwrap().eval_unchecked(&x) - g.eval_unchecked(&[2.0 * x[0], 2.0 * x[1]])).norm() < 1e-14);
            assert!((g.conj().eval_unchecked(&x) - fx.conj()).norm() < 1e-14);
            assert!((g.product(&other).eval_unchecked(&x) - fx * other.eval_unchecked(&x)).norm() < 1e-14);
        }
    }

    #[test]
    fn convolution_of_standard_gaussians() {
        let g = GaussianFunction::standard(1);
        let conv = g.convolve(&g);
        assert!((conv.eval_unchecked(&[0.0]).re - 0.5f64.sqrt()).abs() < 1e-15);
        let x = 0.8;
        let want = (-PI * x * x / 2.0).exp() / 2f64.sqrt();
        assert!((conv.eval_unchecked(&[x]).re - want).abs() < 1e-15);
    }

    #[test]
    fn l2_norm_matches_quadrature() {
        let g = GaussianFunction::new(
            linalg::mat_from_rows(&[vec![1.2, -0.3], vec![-0.3, 0.9]]).unwrap(),
            vec![0.2, 0.5],
            c(1.0, 0.3),
            vec![-0.4, 0.7],
        )
        .unwrap();
        let half = g.default_half_width();
        let grid = GridSpec::centered(2, 160, half, GridMode::Truncated).unwrap();
        let q = g.sample(&grid).unwrap().norm_sq();
        assert!((q - g.l2_norm_sq()).abs() / g.l2_norm_sq() < 1e-8);
    }

    #[test]
    fn sample_cases() {
        let grid = GridSpec::new(vec![4], vec![0.0], vec![0.25], GridMode::Truncated).unwrap();
        let s = GaussianFunction::standard(1).sample(&grid).unwrap();
        let want = [1.0, (-PI / 16.0).exp(), (-PI / 4.0).exp(), (-9.0 * PI / 16.0).exp()];
        for (v, w) in s.values.iter().zip(want) {
            assert!((v.re - w).abs() < 1e-15 && v.im == 0.0);
        }
        let torus = GridSpec::unit_torus(2, 8).unwrap();
        let ones = PlaneWave::euclidean(vec![0.0, 0.0]).sample(&torus).unwrap();
        assert!(ones.values.iter().all(|&v| v == c(1.0, 0.0)));
        let wave = PlaneWave::euclidean(vec![1.0, 0.0]).sample(&torus).unwrap();
        let x = torus.point(19);
        assert!((wave.values[19] - Complex64::from_polar(1.0, 2.0 * PI * x[0])).norm() < 1e-15);
    }

    #[test]
    fn plane_wave_from_form_orientation() {
        let p = GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let xi = [0.3, -0.5];
        let x = [0.7, 0.2];
        let w = PlaneWave::from_form(&p, &xi, Orientation::PointFirst, true);
        assert!((w.eval(&x) - linalg::cis_turns(p.form(&x, &xi))).norm() < 1e-15);
        let w = PlaneWave::from_form(&p, &xi, Orientation::FrequencyFirst, false);
        assert!((w.eval(&x) - linalg::cis_turns(-p.form(&xi, &x))).norm() < 1e-15);
    }

    #[test]
    fn field_map_cases() {
        let grid = GridSpec::new(vec![9], vec![-2.0], vec![0.5], GridMode::Truncated).unwrap();
        let g = GaussianFunction::standard(1).sample(&grid).unwrap();
        assert_eq!(field_map(&g, &FieldOp::Conjugate).unwrap(), g);
        assert_eq!(field_map(&g, &FieldOp::NegateArgument).unwrap(), g);

        let odd = SampledField::from_fn(grid.clone(), |x| c(x[0], 0.0));
        let neg = field_map(&odd, &FieldOp::NegateArgument).unwrap();
        assert!(neg.values.iter().zip(&odd.values).all(|(a, b)| *a == -*b));

        let shifted = field_map(&odd, &FieldOp::Translate(vec![1.0])).unwrap();
        assert_eq!(shifted.values[0], c(-1.0, 0.0));
        assert_eq!(shifted.values[8], c(0.0, 0.0));
        assert!(matches!(
            field_map(&odd, &FieldOp::Translate(vec![0.3])),
            Err(GeoftError::NotGridRealizable(_))
        ));
        assert!(field_map(&odd, &FieldOp::Dilate(2.0)).is_err());

        let torus = GridSpec::centered(1, 16, 2.0, GridMode::Periodic).unwrap();
        let gauss = gauss1(0.7, 0.1, 0.0);
        let dil = field_map(&gauss.sample(&torus).unwrap(), &FieldOp::Dilate(2.0)).unwrap();
        let analytic = gauss.dilate(2.0).unwrap();
        for k in [3, 8, 9] {
            let x = torus.point(k);
            // inside the fundamental domain the dilated samples agree with the analytic ones
            if (2.0 * x[0]).abs() < 2.0 {
                assert!((dil.values[k] - analytic.eval_unchecked(&x)).norm() < 1e-14);
            }
        }
        let four_a = GaussianFunction::new(Mat::from_element(1, 1, 2.8), vec![0.05], c(1.0, 0.0), vec![0.0]).unwrap();
        for x in [[0.0], [0.3], [-0.45]] {
            assert!((analytic.eval_unchecked(&x) - four_a.eval_unchecked(&x)).norm() < 1e-14);
        }
    }

    #[test]
    fn gaussian_json_round_trip() {
        let g = gauss1(1.5, 0.25, -0.5).scaled(c(0.0, 1.0));
        let s = serde_json::to_string(&g).unwrap();
        let back: GaussianFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(s.contains("\"A\""));
    }
}
