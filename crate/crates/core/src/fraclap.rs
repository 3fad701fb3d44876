//! The fractional Laplacian `(-Δ_b)^s` of a positive definite structure,
//! `0 < s < 1`, as a Fourier multiplier on periodic grids, and its
//! property checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus;
use crate::error::{GeoftError, Result};
use crate::fields::{field_map, FieldOp, GaussianFunction, GridMode, SampledField};
use crate::forms::{GeometricPair, Side};
use crate::linalg::{self, Mat};
use crate::spectral::{self, Variant};

#[derive(Debug, Clone, PartialEq)]
pub struct FracParams {
    s: f64,
    pair: GeometricPair,
}

impl FracParams {
    pub fn new(s: f64, pair: GeometricPair) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(GeoftError::ParamOutOfRange(format!("s = {s} is not in (0,1)")));
        }
        if !pair.classify().positive_definite {
            return Err(GeoftError::NotPositiveDefinite);
        }
        Ok(Self { s, pair })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn pair(&self) -> &GeometricPair {
        &self.pair
    }

    fn with_s(&self, s: f64) -> Result<Self> {
        Self::new(s, self.pair.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FracPath {
    /// Through `F^L_b` on the `Bᵀ`-sheared lattice.
    Left,
    /// Through `F^R_b` on the `B`-sheared lattice.
    Right,
    /// `(4π²⟨ζ,Bζ⟩)^s` on the standard DFT lattice.
    Classical,
}

impl FracPath {
    pub const ALL: [FracPath; 3] = [FracPath::Left, FracPath::Right, FracPath::Classical];
}

/// `x^p` for `x ≥ 0`, with `0 ↦ 0`.
fn real_power(x: f64, p: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (p * x.ln()).exp()
    }
}

/// `(4π²·b(ξ,ξ))^s`.
pub fn multiplier(params: &FracParams, xi: &[f64]) -> f64 {
    symbol_power(params.pair.m(), params.s, xi)
}

/// `(4π²·xᵀSx)^p` with `S` the symmetric part of `q`.
fn symbol_power(q: &Mat, p: f64, x: &[f64]) -> f64 {
    let sym = linalg::symmetric_part(q);
    real_power(4.0 * PI * PI * linalg::quad_form(&sym, x, x), p)
}

/// `(-Δ_b)^s f` on a periodic grid along one of the three paths.
pub fn frac_laplacian(f: &SampledField, params: &FracParams, path: FracPath) -> Result<SampledField> {
    symbol_power_apply(f, &params.pair, params.s, path)
}

/// The multiplier `(4π²b(ξ,ξ))^p` for any real `p > 0`. With `p = 1` this is
/// `-Δ_b`; `FracParams` restricts to `0 < p < 1`.
pub fn symbol_power_apply(f: &SampledField, pair: &GeometricPair, p: f64, path: FracPath) -> Result<SampledField> {
    if f.grid.mode != GridMode::Periodic {
        return Err(GeoftError::NotPeriodic);
    }
    if pair.dim() != f.grid.dim {
        return Err(GeoftError::DimensionMismatch {
            expected: f.grid.dim,
            got: pair.dim(),
        });
    }
    match path {
        FracPath::Classical => {
            let bsym = linalg::symmetric_part(pair.b());
            spectral::periodic_multiplier(f, |zeta, _| {
                Complex64::new(real_power(4.0 * PI * PI * linalg::quad_form(&bsym, zeta, zeta), p), 0.0)
            })
        }
        FracPath::Left | FracPath::Right => {
            let variant = if path == FracPath::Left {
                Variant::Left
            } else {
                Variant::Right
            };
            let mut spec = spectral::geometric_ft_fft(f, pair, variant)?;
            let msym = linalg::symmetric_part(pair.m());
            let points = spec.points();
            spec.values
                .par_iter_mut()
                .zip(points.par_iter())
                .for_each(|(v, xi)| *v *= real_power(4.0 * PI * PI * linalg::quad_form(&msym, xi, xi), p));
            spectral::inverse_geometric_ft_fft(&spec, pair, variant, &f.grid)
        }
    }
}

/// Two sides of a property and the gap between them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FracReport {
    /// `max |lhs|` (or the scalar value).
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl FracReport {
    fn fields(lhs: &SampledField, rhs: &SampledField) -> Self {
        Self {
            lhs: lhs.max_abs(),
            rhs: rhs.max_abs(),
            residual: linalg::rel_gap(&lhs.values, &rhs.values),
        }
    }

    fn scalars(lhs: f64, rhs: f64, residual: f64) -> Self {
        Self { lhs, rhs, residual }
    }
}

/// Largest pairwise relative gap between the three paths.
pub fn path_agreement(f: &SampledField, params: &FracParams) -> Result<FracReport> {
    let outs: Vec<SampledField> = FracPath::ALL
        .iter()
        .map(|&p| frac_laplacian(f, params, p))
        .collect::<Result<_>>()?;
    let mut residual: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            residual = residual.max(linalg::rel_gap(&outs[i].values, &outs[j].values));
        }
    }
    Ok(FracReport::scalars(outs[0].max_abs(), outs[2].max_abs(), residual))
}

/// `(-Δ_b)^t (-Δ_b)^s f` against `(-Δ_b)^{s+t} f`.
pub fn semigroup_check(f: &SampledField, params: &FracParams, t: f64, path: FracPath) -> Result<FracReport> {
    if params.s + t >= 1.0 {
        return Err(GeoftError::ParamOutOfRange(format!(
            "s + t = {} must be below 1",
            params.s + t
        )));
    }
    let pt = params.with_s(t)?;
    let pst = params.with_s(params.s + t)?;
    let lhs = frac_laplacian(&frac_laplacian(f, params, path)?, &pt, path)?;
    let rhs = frac_laplacian(f, &pst, path)?;
    Ok(FracReport::fields(&lhs, &rhs))
}

/// `(-Δ_b)^s(μf + νg)` against `μ(-Δ_b)^s f + ν(-Δ_b)^s g`.
pub fn linearity_check(
    f: &SampledField,
    g: &SampledField,
    mu: Complex64,
    nu: Complex64,
    params: &FracParams,
    path: FracPath,
) -> Result<FracReport> {
    let comb = f.zip_with(g, |a, b| mu * a + nu * b)?;
    let lhs = frac_laplacian(&comb, params, path)?;
    let lf = frac_laplacian(f, params, path)?;
    let lg = frac_laplacian(g, params, path)?;
    let rhs = lf.zip_with(&lg, |a, b| mu * a + nu * b)?;
    Ok(FracReport::fields(&lhs, &rhs))
}

/// `∂_j^α (-Δ_b)^s f` against `(-Δ_b)^s ∂_j^α f`.
pub fn derivative_commute_check(
    f: &SampledField,
    params: &FracParams,
    axis: usize,
    order: u32,
    path: FracPath,
) -> Result<FracReport> {
    let lhs = calculus::partial_derivative(&frac_laplacian(f, params, path)?, axis, order)?;
    let rhs = frac_laplacian(&calculus::partial_derivative(f, axis, order)?, params, path)?;
    Ok(FracReport::fields(&lhs, &rhs))
}

fn realizable(e: GeoftError) -> GeoftError {
    match e {
        GeoftError::NotGridRealizable(msg) => GeoftError::ParamOutOfRange(msg),
        other => other,
    }
}

/// `T_h (-Δ_b)^s f` against `(-Δ_b)^s T_h f` for `h` a multiple of the spacing.
pub fn translation_check(f: &SampledField, params: &FracParams, h: &[f64], path: FracPath) -> Result<FracReport> {
    let op = FieldOp::Translate(h.to_vec());
    let lhs = field_map(&frac_laplacian(f, params, path)?, &op).map_err(realizable)?;
    let rhs = frac_laplacian(&field_map(f, &op).map_err(realizable)?, params, path)?;
    Ok(FracReport::fields(&lhs, &rhs))
}

/// `(-Δ_b)^s δ_λ f` against `λ^{2s} δ_λ (-Δ_b)^s f` for an integer `λ`.
pub fn scaling_check(f: &SampledField, params: &FracParams, lambda: f64, path: FracPath) -> Result<FracReport> {
    let op = FieldOp::Dilate(lambda);
    let lhs = frac_laplacian(&field_map(f, &op).map_err(realizable)?, params, path)?;
    let factor = real_power(lambda.abs(), 2.0 * params.s);
    let rhs = field_map(&frac_laplacian(f, params, path)?, &op)
        .map_err(realizable)?
        .map(|v| v * factor);
    Ok(FracReport::fields(&lhs, &rhs))
}

/// `multiplier(λξ)` against `λ^{2s}·multiplier(ξ)`.
pub fn homogeneity_check(params: &FracParams, xi: &[f64], lambda: f64) -> FracReport {
    let scaled: Vec<f64> = xi.iter().map(|v| v * lambda).collect();
    let lhs = multiplier(params, &scaled);
    let rhs = real_power(lambda.abs(), 2.0 * params.s) * multiplier(params, xi);
    let scale = lhs.abs().max(rhs.abs());
    let residual = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
    FracReport::scalars(lhs, rhs, residual)
}

/// `∫ ((-Δ_b)^s f)·g` against `∫ f·((-Δ_b)^s g)`, divided by `‖f‖‖g‖`.
pub fn integration_by_parts_check(
    f: &SampledField,
    g: &SampledField,
    params: &FracParams,
    path: FracPath,
) -> Result<FracReport> {
    let lhs = frac_laplacian(f, params, path)?.bilinear(g)?;
    let rhs = f.bilinear(&frac_laplacian(g, params, path)?)?;
    let scale = (f.norm_sq() * g.norm_sq()).sqrt();
    let residual = if scale > 0.0 { (lhs - rhs).norm() / scale } else { 0.0 };
    Ok(FracReport::scalars(lhs.norm(), rhs.norm(), residual))
}

/// `∫|(-Δ_b)^s f|²` on the grid against
/// `(2π)^{4s}|det b| Σ b(ξ,ξ)^{2s}|F^{L/R}_b f(ξ)|²·cell` on the sheared lattice.
pub fn l2_identity_check(f: &SampledField, params: &FracParams, side: Side) -> Result<FracReport> {
    let path = match side {
        Side::Left => FracPath::Left,
        Side::Right => FracPath::Right,
    };
    let lhs = frac_laplacian(f, params, path)?.norm_sq();
    let spec = spectral::geometric_ft_fft(f, &params.pair, side.into())?;
    let msym = linalg::symmetric_part(params.pair.m());
    let terms: Vec<f64> = spec
        .points()
        .iter()
        .zip(&spec.values)
        .map(|(xi, v)| real_power(linalg::quad_form(&msym, xi, xi), 2.0 * params.s) * v.norm_sqr())
        .collect();
    let rhs = real_power(2.0 * PI, 4.0 * params.s)
        * params.pair.abs_det_b()
        * linalg::pairwise_sum(&terms)
        * spec.lattice.cell();
    let scale = lhs.abs().max(rhs.abs());
    let residual = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
    Ok(FracReport::scalars(lhs, rhs, residual))
}

/// `Re⟨(-Δ_b)^s f, f⟩ / ‖f‖²`; nonnegative up to roundoff.
pub fn positivity_check(f: &SampledField, params: &FracParams, path: FracPath) -> Result<FracReport> {
    let q = frac_laplacian(f, params, path)?.inner(f)?.re;
    let norm = f.norm_sq();
    let ratio = if norm > 0.0 { q / norm } else { 0.0 };
    Ok(FracReport::scalars(q, norm, (-ratio).max(0.0)))
}

/// Node set for `∫_0^R φ(r) dr` by the tanh-sinh rule, which tolerates the
/// `r^{2s+n-1}` endpoint behaviour at the origin.
fn tanh_sinh_nodes(r_max: f64, step: f64, t_max: f64) -> Vec<(f64, f64)> {
    let half = (t_max / step).ceil() as i64;
    let mut out = Vec::with_capacity(2 * half as usize + 1);
    for j in -half..=half {
        let t = j as f64 * step;
        let u = 0.5 * PI * t.sinh();
        let w = 0.5 * PI * t.cosh() / u.cosh().powi(2);
        // r = R(1 + tanh u)/2, without cancellation for u ≪ 0
        let one_plus_x = if u < 0.0 {
            let e = (2.0 * u).exp();
            2.0 * e / (1.0 + e)
        } else {
            1.0 + u.tanh()
        };
        let r = 0.5 * r_max * one_plus_x;
        let weight = 0.5 * r_max * w * step;
        if r > 0.0 && weight > 0.0 && weight.is_finite() {
            out.push((r, weight));
        }
    }
    out
}

/// Quadrature settings for [`gaussian_symbol_power`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarQuadrature {
    /// Points on the circle (n = 2).
    pub angles: usize,
    /// Tanh-sinh step in the radial variable.
    pub step: f64,
}

impl Default for PolarQuadrature {
    fn default() -> Self {
        Self {
            angles: 192,
            step: 1.0 / 48.0,
        }
    }
}

/// `((-Δ_b)^p g)(x)` for a Gaussian `g` on `Rⁿ`, `n ∈ {1, 2}`:
/// `∫ (4π²⟨ζ,Bζ⟩)^p (Fg)(ζ) e^{2πi⟨x,ζ⟩} dζ` in polar coordinates about the
/// origin, where the symbol is not smooth.
pub fn gaussian_symbol_power(
    g: &GaussianFunction,
    pair: &GeometricPair,
    p: f64,
    points: &[Vec<f64>],
    quad: PolarQuadrature,
) -> Result<Vec<Complex64>> {
    let n = g.dim();
    if pair.dim() != n {
        return Err(GeoftError::DimensionMismatch {
            expected: n,
            got: pair.dim(),
        });
    }
    if n > 2 {
        return Err(GeoftError::UnsupportedMode(format!(
            "polar quadrature is implemented for n ≤ 2, got n = {n}"
        )));
    }
    if !pair.classify().positive_definite {
        return Err(GeoftError::NotPositiveDefinite);
    }
    let fg = g.classical_ft();
    // |Fg(ζ)| ≤ |amp|·exp(-πλ_min(|ζ| - |w|)²); stop where that is below 1e-40
    let lmin = linalg::sym_eigenvalues(&fg.shape)[0];
    let r_max = linalg::norm2(&fg.center) + (40.0 * 10f64.ln() / (PI * lmin)).sqrt() + 1.0;
    let radial = tanh_sinh_nodes(r_max, quad.step, 3.5);
    let directions: Vec<(Vec<f64>, f64)> = if n == 1 {
        vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)]
    } else {
        let m = quad.angles;
        (0..m)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / m as f64;
                (vec![phi.cos(), phi.sin()], 2.0 * PI / m as f64)
            })
            .collect()
    };
    let bsym = linalg::symmetric_part(pair.b());
    let out = points
        .par_iter()
        .map(|x| {
            if x.len() != n {
                return Err(GeoftError::DimensionMismatch {
                    expected: n,
                    got: x.len(),
                });
            }
            let per_dir: Vec<Complex64> = directions
                .iter()
                .map(|(theta, wt)| {
                    let ang = real_power(4.0 * PI * PI * linalg::quad_form(&bsym, theta, theta), p);
                    let terms: Vec<Complex64> = radial
                        .iter()
                        .map(|&(r, wr)| {
                            let zeta: Vec<f64> = theta.iter().map(|t| t * r).collect();
                            let jac = real_power(r, 2.0 * p + (n - 1) as f64);
                            fg.eval_unchecked(&zeta) * linalg::cis_turns(linalg::dot(x, &zeta)) * (jac * wr)
                        })
                        .collect();
                    linalg::pairwise_sum(&terms) * (ang * wt)
                })
                .collect();
            Ok(linalg::pairwise_sum(&per_dir))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(out)
}

/// `(-Δ_b)^s(τ_A g)` against `τ_A((-Δ_b)^s g)` at `points`, both through
/// [`gaussian_symbol_power`]; `A` should lie in `G_b`.
pub fn equivariance_check(
    g: &GaussianFunction,
    params: &FracParams,
    a: &Mat,
    points: &[Vec<f64>],
    quad: PolarQuadrature,
) -> Result<FracReport> {
    let tg = g.tau(a)?;
    let lhs = gaussian_symbol_power(&tg, &params.pair, params.s, points, quad)?;
    let a_inv = linalg::inverse(a)?;
    let pulled: Vec<Vec<f64>> = points.iter().map(|x| linalg::mat_vec(&a_inv, x)).collect();
    let rhs = gaussian_symbol_power(g, &params.pair, params.s, &pulled, quad)?;
    Ok(FracReport::scalars(
        linalg::linf(&lhs),
        linalg::linf(&rhs),
        linalg::rel_gap(&lhs, &rhs),
    ))
}
