//! Polynomial × Gaussian functions `P(x)·g(x)`, closed under partial
//! derivatives and multiplication by coordinates. Used to get exact
//! derivatives and `Δ_b^m` of Gaussians without finite differences.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{GeoftError, Result};
use crate::fields::{GaussianFunction, GridSpec, SampledField};
use crate::forms::GeometricPair;
use crate::linalg;

type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian {
    pub gauss: GaussianFunction,
    /// Exponent vector ↦ coefficient.
    pub poly: BTreeMap<Monomial, Complex64>,
}

impl PolyGaussian {
    pub fn new(gauss: GaussianFunction) -> Self {
        let mut poly = BTreeMap::new();
        poly.insert(vec![0; gauss.dim()], Complex64::new(1.0, 0.0));
        Self { gauss, poly }
    }

    pub fn zero(gauss: GaussianFunction) -> Self {
        Self {
            gauss,
            poly: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.gauss.dim()
    }

    fn add_term(poly: &mut BTreeMap<Monomial, Complex64>, mono: Monomial, coef: Complex64) {
        if coef == Complex64::new(0.0, 0.0) {
            return;
        }
        *poly.entry(mono).or_insert(Complex64::new(0.0, 0.0)) += coef;
    }

    /// `∂_j (P g) = (∂_j P + P·∂_j φ) g` with
    /// `∂_j φ = 2πi w_j - 2π (A(x-c))_j`.
    pub fn derivative(&self, j: usize) -> Result<Self> {
        let n = self.dim();
        if j >= n {
            return Err(GeoftError::AxisOutOfRange { axis: j, dim: n });
        }
        let a = &self.gauss.shape;
        let ac = linalg::mat_vec(a, &self.gauss.center);
        // ∂_j φ = const + Σ_l lin_l x_l
        let konst = Complex64::new(2.0 * PI * ac[j], 2.0 * PI * self.gauss.phase_freq[j]);
        let mut out = BTreeMap::new();
        for (mono, &coef) in &self.poly {
            if mono[j] > 0 {
                let mut m = mono.clone();
                m[j] -= 1;
                Self::add_term(&mut out, m, coef * mono[j] as f64);
            }
            Self::add_term(&mut out, mono.clone(), coef * konst);
            for l in 0..n {
                let lin = -2.0 * PI * a[(j, l)];
                if lin != 0.0 {
                    let mut m = mono.clone();
                    m[l] += 1;
                    Self::add_term(&mut out, m, coef * lin);
                }
            }
        }
        Ok(Self {
            gauss: self.gauss.clone(),
            poly: out,
        })
    }

    pub fn derivative_n(&self, j: usize, order: u32) -> Result<Self> {
        let mut f = self.clone();
        for _ in 0..order {
            f = f.derivative(j)?;
        }
        Ok(f)
    }

    /// Multiplication by the linear form `x ↦ ⟨v, x⟩`.
    pub fn mul_linear(&self, v: &[f64]) -> Self {
        let mut out = BTreeMap::new();
        for (mono, &coef) in &self.poly {
            for (l, &vl) in v.iter().enumerate() {
                if vl != 0.0 {
                    let mut m = mono.clone();
                    m[l] += 1;
                    Self::add_term(&mut out, m, coef * vl);
                }
            }
        }
        Self {
            gauss: self.gauss.clone(),
            poly: out,
        }
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        Self {
            gauss: self.gauss.clone(),
            poly: self.poly.iter().map(|(m, &c)| (m.clone(), c * z)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.gauss, other.gauss);
        let mut out = self.poly.clone();
        for (m, &c) in &other.poly {
            Self::add_term(&mut out, m.clone(), c);
        }
        Self {
            gauss: self.gauss.clone(),
            poly: out,
        }
    }

    /// `Δ_b = Σ B_kl ∂_k ∂_l`.
    pub fn b_laplacian(&self, pair: &GeometricPair) -> Result<Self> {
        let n = self.dim();
        if pair.dim() != n {
            return Err(GeoftError::DimensionMismatch {
                expected: n,
                got: pair.dim(),
            });
        }
        let mut acc = Self::zero(self.gauss.clone());
        for k in 0..n {
            let dk = self.derivative(k)?;
            for l in 0..n {
                let bkl = pair.b()[(k, l)];
                if bkl != 0.0 {
                    acc = acc.add(&dk.derivative(l)?.scaled(Complex64::new(bkl, 0.0)));
                }
            }
        }
        Ok(acc)
    }

    pub fn b_laplacian_pow(&self, pair: &GeometricPair, m: u32) -> Result<Self> {
        let mut f = self.clone();
        for _ in 0..m {
            f = f.b_laplacian(pair)?;
        }
        Ok(f)
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let p: Complex64 = self
            .poly
            .iter()
            .map(|(mono, &c)| {
                let mut v = c;
                for (xi, &e) in x.iter().zip(mono) {
                    v *= xi.powi(e as i32);
                }
                v
            })
            .sum();
        p * self.gauss.eval_unchecked(x)
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<SampledField> {
        if grid.dim != self.dim() {
            return Err(GeoftError::DimensionMismatch {
                expected: self.dim(),
                got: grid.dim,
            });
        }
        Ok(SampledField::from_fn(grid.clone(), |x| self.eval(x)))
    }
}
