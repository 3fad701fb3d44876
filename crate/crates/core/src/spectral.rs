//! Discrete classical and geometric Fourier transforms.
//!
//! Two evaluation routes share one quadrature rule (Riemann sum over the grid
//! with weight `Π h_i`):
//!
//! * a direct sum at arbitrary frequencies, `O(N_out · N_in)`;
//! * an FFT on the sheared lattice `ξ = Bᵀζ` (left) or `ξ = Bζ` (right), where
//!   `ζ` runs over the ordinary DFT frequencies of the grid. On that lattice
//!   `b(ξ,x) = ⟨ζ,x⟩` (resp. `b(x,ξ) = ⟨x,ζ⟩`), so a plain FFT suffices.
//!
//! Every reduction goes through [`linalg::pairwise_sum`], and parallel loops only
//! split over output points, so results do not depend on the thread count.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{GeoftError, Result};
use crate::fields::{GaussianFunction, GridMode, GridSpec, SampledField};
use crate::forms::{GeometricPair, Side};
use crate::linalg::{self, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Fft,
}

/// Which transform a lattice or kernel belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Classical,
    Left,
    Right,
}

impl From<Side> for Variant {
    fn from(side: Side) -> Self {
        match side {
            Side::Left => Variant::Left,
            Side::Right => Variant::Right,
        }
    }
}

/// Points `generator · m` with `m_i` running over the centred range
/// `-⌊N_i/2⌋ ..= N_i - ⌊N_i/2⌋ - 1`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyLattice {
    #[serde(with = "crate::fields::mat_rows")]
    pub generator: Mat,
    pub counts: Vec<usize>,
}

impl FrequencyLattice {
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume of one lattice cell, the quadrature weight of a node.
    pub fn cell(&self) -> f64 {
        linalg::det(&self.generator).abs()
    }

    /// Centred integer coordinates of node `flat`.
    pub fn index(&self, mut flat: usize) -> Vec<i64> {
        let n = self.counts.len();
        let mut m = vec![0; n];
        for ax in (0..n).rev() {
            let c = self.counts[ax];
            m[ax] = (flat % c) as i64 - (c / 2) as i64;
            flat /= c;
        }
        m
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let m: Vec<f64> = self.index(flat).iter().map(|&v| v as f64).collect();
        linalg::mat_vec(&self.generator, &m)
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// The DFT frequency step `diag(1/(N_i h_i))` of a grid.
    pub fn reciprocal_step(grid: &GridSpec) -> Mat {
        let ext = grid.extent();
        Mat::from_fn(grid.dim, grid.dim, |i, j| if i == j { 1.0 / ext[i] } else { 0.0 })
    }

    /// The lattice on which the FFT path evaluates a transform of a field on `grid`.
    pub fn for_grid(grid: &GridSpec, pair: &GeometricPair, variant: Variant) -> Self {
        let d = Self::reciprocal_step(grid);
        let generator = match variant {
            Variant::Classical => d,
            Variant::Left => pair.b_t() * d,
            Variant::Right => pair.b() * d,
        };
        Self {
            generator,
            counts: grid.shape.clone(),
        }
    }

    /// A rectangular frequency box `[-half, half)ⁿ` with `n` points per axis.
    pub fn centered_box(dim: usize, n: usize, half: f64) -> Self {
        let h = 2.0 * half / n as f64;
        Self {
            generator: linalg::scaled_identity(dim, h),
            counts: vec![n; dim],
        }
    }
}

/// Transform values on a frequency lattice, remembering the spatial grid they
/// came from (if any).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub lattice: FrequencyLattice,
    pub values: Vec<Complex64>,
    pub source: Option<GridSpec>,
}

impl Spectrum {
    pub fn new(lattice: FrequencyLattice, values: Vec<Complex64>, source: Option<GridSpec>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(GeoftError::DimensionMismatch {
                expected: lattice.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            lattice,
            values,
            source,
        })
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.lattice.points()
    }
}

/// One of the four geometric transforms, usable both on samples (quadrature)
/// and on Gaussians (closed form).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Forward(Side),
    Inverse(Side),
}

impl Transform {
    pub fn quadrature(self, f: &SampledField, pair: &GeometricPair, probes: &[Vec<f64>]) -> Result<Vec<Complex64>> {
        match self {
            Transform::Forward(side) => geometric_ft(f, pair, side, probes),
            Transform::Inverse(side) => inverse_geometric_ft_field(f, pair, side, probes),
        }
    }

    pub fn closed_form(self, g: &GaussianFunction, pair: &GeometricPair) -> GaussianFunction {
        match self {
            Transform::Forward(side) => g.geometric_ft(pair, side),
            Transform::Inverse(side) => g.inverse_geometric_ft(pair, side),
        }
    }
}

/// The kernel matrix `K` such that the exponent is `±2πi⟨probe, K·node⟩`.
fn kernel(pair: &GeometricPair, variant: Variant, direction: Direction) -> Mat {
    match (variant, direction) {
        (Variant::Classical, _) => linalg::identity(pair.dim()),
        // b(ξ,x) = ⟨ξ, Mx⟩ with probe ξ
        (Variant::Left, Direction::Forward) => pair.m().clone(),
        // b(x,ξ) = ⟨ξ, Mᵀx⟩
        (Variant::Right, Direction::Forward) => pair.m().transpose(),
        // b(ξ,x) = ⟨x, Mᵀξ⟩ with probe x
        (Variant::Left, Direction::Inverse) => pair.m().transpose(),
        // b(x,ξ) = ⟨x, Mξ⟩
        (Variant::Right, Direction::Inverse) => pair.m().clone(),
    }
}

/// `weight · cell · Σ_k values_k · e^{sign·2πi⟨probe, K·node_k⟩}` for every probe.
fn kernel_sum(
    nodes: &[Vec<f64>],
    values: &[Complex64],
    cell: f64,
    probes: &[Vec<f64>],
    k: &Mat,
    sign: f64,
    weight: f64,
) -> Result<Vec<Complex64>> {
    if probes.is_empty() {
        return Err(GeoftError::EmptyFrequencyList);
    }
    let n = k.nrows();
    if let Some(bad) = probes.iter().find(|p| p.len() != n) {
        return Err(GeoftError::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    let kt = k.transpose();
    Ok(probes
        .par_iter()
        .map(|p| {
            let q = linalg::mat_vec(&kt, p);
            let terms: Vec<Complex64> = nodes
                .iter()
                .zip(values)
                .map(|(x, &v)| v * linalg::cis_turns(sign * linalg::dot(&q, x)))
                .collect();
            linalg::pairwise_sum(&terms) * (weight * cell)
        })
        .collect())
}

/// `weight · Σ_x f(x) e^{∓2πi⟨x,ξ⟩} · Π h_i` at each frequency.
pub fn dft_direct(f: &SampledField, freqs: &[Vec<f64>], direction: Direction, weight: f64) -> Result<Vec<Complex64>> {
    let id = linalg::identity(f.grid.dim);
    kernel_sum(
        &f.grid.points(),
        &f.values,
        f.grid.cell_volume(),
        freqs,
        &id,
        direction.sign(),
        weight,
    )
}

/// `F^L_b f` or `F^R_b f` at arbitrary frequencies by direct quadrature.
pub fn geometric_ft(f: &SampledField, pair: &GeometricPair, side: Side, freqs: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    check_dim(pair.dim(), f.grid.dim)?;
    let k = kernel(pair, side.into(), Direction::Forward);
    kernel_sum(&f.grid.points(), &f.values, f.grid.cell_volume(), freqs, &k, -1.0, 1.0)
}

/// `(F^L_b)⁻¹` or `(F^R_b)⁻¹` of samples given at `nodes` with cell weight `cell`,
/// evaluated at `points`:
/// `|det b| · Σ e^{2πi b(ξ,x)} F(ξ) · cell` (left) or with `b(x,ξ)` (right).
pub fn inverse_geometric_ft(
    nodes: &[Vec<f64>],
    values: &[Complex64],
    cell: f64,
    pair: &GeometricPair,
    side: Side,
    points: &[Vec<f64>],
) -> Result<Vec<Complex64>> {
    if nodes.len() != values.len() {
        return Err(GeoftError::DimensionMismatch {
            expected: nodes.len(),
            got: values.len(),
        });
    }
    let k = kernel(pair, side.into(), Direction::Inverse);
    kernel_sum(nodes, values, cell, points, &k, 1.0, pair.abs_det_b())
}

/// Inverse transform of a field whose grid is read as frequency space.
pub fn inverse_geometric_ft_field(
    f: &SampledField,
    pair: &GeometricPair,
    side: Side,
    points: &[Vec<f64>],
) -> Result<Vec<Complex64>> {
    check_dim(pair.dim(), f.grid.dim)?;
    inverse_geometric_ft(&f.grid.points(), &f.values, f.grid.cell_volume(), pair, side, points)
}

/// Direct inverse of a spectrum.
pub fn inverse_geometric_ft_spectrum(
    s: &Spectrum,
    pair: &GeometricPair,
    side: Side,
    points: &[Vec<f64>],
) -> Result<Vec<Complex64>> {
    inverse_geometric_ft(&s.points(), &s.values, s.lattice.cell(), pair, side, points)
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(GeoftError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Forward transform on the sheared FFT lattice of the field's grid.
pub fn geometric_ft_fft(f: &SampledField, pair: &GeometricPair, variant: Variant) -> Result<Spectrum> {
    let grid = &f.grid;
    check_dim(pair.dim(), grid.dim)?;
    let mut data = f.values.clone();
    fft_nd(&mut data, &grid.shape, false);
    let lattice = FrequencyLattice::for_grid(grid, pair, variant);
    let ext = grid.extent();
    let cell = grid.cell_volume();
    let values = (0..lattice.len())
        .map(|flat| {
            let m = lattice.index(flat);
            let turns: f64 = m
                .iter()
                .zip(&grid.origin)
                .zip(&ext)
                .map(|((&mi, &o), &e)| mi as f64 * o / e)
                .sum();
            data[fft_position(&m, &grid.shape)] * linalg::cis_turns(-turns) * cell
        })
        .collect();
    Ok(Spectrum {
        lattice,
        values,
        source: Some(grid.clone()),
    })
}

/// Inverse transform from the FFT lattice of `grid` back onto `grid`.
pub fn inverse_geometric_ft_fft(
    s: &Spectrum,
    pair: &GeometricPair,
    variant: Variant,
    grid: &GridSpec,
) -> Result<SampledField> {
    check_dim(pair.dim(), grid.dim)?;
    let expected = FrequencyLattice::for_grid(grid, pair, variant);
    let scale = linalg::max_abs(&expected.generator).max(f64::MIN_POSITIVE);
    if s.lattice.counts != expected.counts
        || linalg::max_abs(&(&s.lattice.generator - &expected.generator)) > 1e-12 * scale
    {
        return Err(GeoftError::GridMismatch(
            "spectrum is not on the FFT lattice of the target grid".into(),
        ));
    }
    let ext = grid.extent();
    let mut data = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (flat, &v) in s.values.iter().enumerate() {
        let m = s.lattice.index(flat);
        let turns: f64 = m
            .iter()
            .zip(&grid.origin)
            .zip(&ext)
            .map(|((&mi, &o), &e)| mi as f64 * o / e)
            .sum();
        data[fft_position(&m, &grid.shape)] = v * linalg::cis_turns(turns);
    }
    fft_nd(&mut data, &grid.shape, true);
    let weight = match variant {
        Variant::Classical => 1.0,
        _ => pair.abs_det_b(),
    } * s.lattice.cell();
    data.iter_mut().for_each(|v| *v *= weight);
    SampledField::new(grid.clone(), data)
}

/// Flat FFT-array position of centred index `m`.
fn fft_position(m: &[i64], shape: &[usize]) -> usize {
    m.iter()
        .zip(shape)
        .fold(0, |acc, (&mi, &n)| acc * n + mi.rem_euclid(n as i64) as usize)
}

/// Centred index of FFT position `j` on an axis of length `n`.
pub(crate) fn centered_index(j: usize, n: usize) -> i64 {
    if j < n - n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Unnormalised multidimensional FFT over a row-major array;
/// `inverse` selects the `e^{+2πi}` kernel.
pub(crate) fn fft_nd(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let total: usize = shape.iter().product();
    let mut stride = total;
    for &n in shape {
        stride /= n;
        let plan: Arc<dyn Fft<f64>> = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let block = n * stride;
        for outer in 0..total / block {
            for inner in 0..stride {
                let base = outer * block + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                plan.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

/// Applies a Fourier multiplier to a periodic field: each DFT mode with
/// frequency `ζ` (cycles per unit length) is scaled by `symbol(ζ, m)`.
pub fn periodic_multiplier<F>(f: &SampledField, symbol: F) -> Result<SampledField>
where
    F: Fn(&[f64], &[i64]) -> Complex64,
{
    let grid = &f.grid;
    if grid.mode != GridMode::Periodic {
        return Err(GeoftError::NotPeriodic);
    }
    let mut data = f.values.clone();
    fft_nd(&mut data, &grid.shape, false);
    let ext = grid.extent();
    for (flat, v) in data.iter_mut().enumerate() {
        let pos = grid.multi_index(flat);
        let m: Vec<i64> = pos.iter().zip(&grid.shape).map(|(&j, &n)| centered_index(j, n)).collect();
        let zeta: Vec<f64> = m.iter().zip(&ext).map(|(&mi, &e)| mi as f64 / e).collect();
        *v *= symbol(&zeta, &m);
    }
    fft_nd(&mut data, &grid.shape, true);
    let norm = 1.0 / grid.len() as f64;
    data.iter_mut().for_each(|v| *v *= norm);
    SampledField::new(grid.clone(), data)
}

/// Quadrature of `(f⋆g)(x) = ∫ f(y) g(x-y) dy` on the common grid.
///
/// Truncated grids use zero-padded linear convolution, periodic grids circular
/// convolution. Needs `o_i/h_i` integral so that `x - y` is again a node.
pub fn convolve(f: &SampledField, g: &SampledField) -> Result<SampledField> {
    f.check_same_grid(g)?;
    let grid = &f.grid;
    let offsets = grid
        .origin_offsets()
        .ok_or_else(|| GeoftError::GridMismatch("grid origin is not a multiple of the spacing".into()))?;
    let periodic = grid.mode == GridMode::Periodic;
    let padded: Vec<usize> = if periodic {
        grid.shape.clone()
    } else {
        grid.shape.iter().map(|&n| 2 * n).collect()
    };
    let total: usize = padded.iter().product();
    let embed = |src: &SampledField| {
        let mut out = vec![Complex64::new(0.0, 0.0); total];
        for (flat, &v) in src.values.iter().enumerate() {
            let idx = grid.multi_index(flat);
            let pos = idx.iter().zip(&padded).fold(0, |acc, (&i, &p)| acc * p + i);
            out[pos] = v;
        }
        out
    };
    let mut a = embed(f);
    let mut b = embed(g);
    fft_nd(&mut a, &padded, false);
    fft_nd(&mut b, &padded, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    fft_nd(&mut a, &padded, true);
    let scale = grid.cell_volume() / total as f64;
    let values = (0..grid.len())
        .map(|flat| {
            let idx = grid.multi_index(flat);
            let mut pos = 0usize;
            for ax in 0..grid.dim {
                // output node k needs linear index q = k - o/h
                let q = idx[ax] as i64 - offsets[ax];
                let p = padded[ax] as i64;
                let q = if periodic {
                    q.rem_euclid(p)
                } else if q < 0 || q > 2 * grid.shape[ax] as i64 - 2 {
                    return Complex64::new(0.0, 0.0);
                } else {
                    q
                };
                pos = pos * padded[ax] + q as usize;
            }
            a[pos] * scale
        })
        .collect();
    SampledField::new(grid.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::GeometricPair;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gauss_grid_1d(n: usize) -> SampledField {
        let grid = GridSpec::centered(1, n, 8.0, GridMode::Truncated).unwrap();
        GaussianFunction::standard(1).sample(&grid).unwrap()
    }

    #[test]
    fn dft_direct_cases() {
        let f = gauss_grid_1d(256);
        let v = dft_direct(&f, &[vec![0.0], vec![0.5]], Direction::Forward, 1.0).unwrap();
        assert!((v[0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((v[1] - c((-PI * 0.25).exp(), 0.0)).norm() < 1e-10);
        assert!((v[1].re - 0.455_938_127_765_996_2).abs() < 1e-10);
        let z = SampledField::zeros(f.grid.clone());
        let v = dft_direct(&z, &[vec![0.3]], Direction::Forward, 1.0).unwrap();
        assert_eq!(v[0], c(0.0, 0.0));
        assert!(matches!(
            dft_direct(&f, &[], Direction::Forward, 1.0),
            Err(GeoftError::EmptyFrequencyList)
        ));
    }

    #[test]
    fn geometric_ft_cases() {
        let f = gauss_grid_1d(256);
        let p = GeometricPair::from_rows(&[vec![2.0]]).unwrap();
        let v = geometric_ft(&f, &p, Side::Left, &[vec![0.25]]).unwrap();
        assert!((v[0].re - (-PI / 4.0).exp()).abs() < 1e-10);

        let e = GeometricPair::euclidean(1);
        let freqs = vec![vec![-0.4], vec![0.7]];
        let a = geometric_ft(&f, &e, Side::Left, &freqs).unwrap();
        let b = dft_direct(&f, &freqs, Direction::Forward, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn left_on_b_equals_right_on_opposite() {
        let grid = GridSpec::centered(2, 32, 6.0, GridMode::Truncated).unwrap();
        let g = GaussianFunction::standard(2).translate(&[0.2, -0.1]);
        let f = g.sample(&grid).unwrap();
        let p = GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let freqs = vec![vec![0.1, 0.2], vec![-0.5, 0.3]];
        let a = geometric_ft(&f, &p, Side::Left, &freqs).unwrap();
        let b = geometric_ft(&f, &p.opposite(), Side::Right, &freqs).unwrap();
        assert!(linalg::abs_linf(&a, &b) < 1e-14);
    }

    #[test]
    fn fft_path_matches_direct_on_its_lattice() {
        let grid = GridSpec::new(vec![16, 12], vec![-3.9, -3.3], vec![0.5, 0.55], GridMode::Truncated).unwrap();
        let g = GaussianFunction::standard(2).translate(&[0.3, -0.2]).modulate(&[0.4, 0.1]);
        let f = g.sample(&grid).unwrap();
        let p = GeometricPair::from_rows(&[vec![1.3, 0.4], vec![-0.2, 0.9]]).unwrap();
        for side in [Side::Left, Side::Right] {
            let s = geometric_ft_fft(&f, &p, side.into()).unwrap();
            let direct = geometric_ft(&f, &p, side, &s.points()).unwrap();
            assert!(linalg::rel_linf(&s.values, &direct) < 1e-12);
        }
        let s = geometric_ft_fft(&f, &p, Variant::Classical).unwrap();
        let direct = dft_direct(&f, &s.points(), Direction::Forward, 1.0).unwrap();
        assert!(linalg::rel_linf(&s.values, &direct) < 1e-12);
    }

    #[test]
    fn fft_round_trip_reproduces_field() {
        let grid = GridSpec::centered(2, 32, 7.0, GridMode::Truncated).unwrap();
        let g = GaussianFunction::standard(2).translate(&[0.3, -0.2]);
        let f = g.sample(&grid).unwrap();
        let p = GeometricPair::from_rows(&[vec![1.3, 0.4], vec![-0.2, 0.9]]).unwrap();
        for v in [Variant::Left, Variant::Right, Variant::Classical] {
            let s = geometric_ft_fft(&f, &p, v).unwrap();
            let back = inverse_geometric_ft_fft(&s, &p, v, &grid).unwrap();
            assert!(linalg::abs_linf(&back.values, &f.values) < 1e-13);
        }
        let other = GridSpec::centered(2, 32, 6.0, GridMode::Truncated).unwrap();
        let s = geometric_ft_fft(&f, &p, Variant::Left).unwrap();
        assert!(inverse_geometric_ft_fft(&s, &p, Variant::Left, &other).is_err());
    }

    #[test]
    fn direct_round_trip_on_frequency_box() {
        // n = 1, M = [2]: transform onto the box [-8, 8) in ζ = Mᵀξ, i.e. ξ = Bᵀζ,
        // then invert at the grid points
        let f = gauss_grid_1d(256);
        let p = GeometricPair::from_rows(&[vec![2.0]]).unwrap();
        let mut lat = FrequencyLattice::centered_box(1, 256, 8.0);
        lat.generator = p.b_t() * &lat.generator;
        let spec = geometric_ft(&f, &p, Side::Left, &lat.points()).unwrap();
        let pts: Vec<Vec<f64>> = (0..256).step_by(7).map(|k| f.grid.point(k)).collect();
        let back = inverse_geometric_ft(&lat.points(), &spec, lat.cell(), &p, Side::Left, &pts).unwrap();
        let want: Vec<Complex64> = (0..256).step_by(7).map(|k| f.values[k]).collect();
        assert!(linalg::abs_linf(&back, &want) < 1e-8);
        let zeros = vec![c(0.0, 0.0); lat.len()];
        let z = inverse_geometric_ft(&lat.points(), &zeros, lat.cell(), &p, Side::Right, &pts).unwrap();
        assert!(z.iter().all(|v| *v == c(0.0, 0.0)));
    }

    #[test]
    fn convolution_cases() {
        let grid = GridSpec::centered(1, 256, 8.0, GridMode::Truncated).unwrap();
        let g = GaussianFunction::standard(1);
        let f = g.sample(&grid).unwrap();
        let conv = convolve(&f, &f).unwrap();
        let zero_idx = 128;
        assert_eq!(grid.point(zero_idx), vec![0.0]);
        assert!((conv.values[zero_idx].re - 0.5f64.sqrt()).abs() < 1e-7);
        let closed = g.convolve(&g).sample(&grid).unwrap();
        assert!(linalg::abs_linf(&conv.values, &closed.values) < 1e-7);

        let mut delta = SampledField::zeros(grid.clone());
        delta.values[zero_idx] = c(1.0 / grid.cell_volume(), 0.0);
        let id = convolve(&f, &delta).unwrap();
        assert!(linalg::abs_linf(&id.values, &f.values) < 1e-14);

        let z = convolve(&SampledField::zeros(grid.clone()), &f).unwrap();
        assert!(z.max_abs() < 1e-300);

        let other = GridSpec::centered(1, 128, 8.0, GridMode::Truncated).unwrap();
        assert!(matches!(
            convolve(&f, &SampledField::zeros(other)),
            Err(GeoftError::GridMismatch(_))
        ));
    }

    #[test]
    fn periodic_convolution_matches_closed_form() {
        let grid = GridSpec::centered(2, 128, 8.0, GridMode::Periodic).unwrap();
        let a = GaussianFunction::standard(2).translate(&[0.5, 0.0]);
        let b = GaussianFunction::standard(2).dilate(1.3).unwrap();
        let conv = convolve(&a.sample(&grid).unwrap(), &b.sample(&grid).unwrap()).unwrap();
        let closed = a.convolve(&b).sample(&grid).unwrap();
        assert!(linalg::abs_linf(&conv.values, &closed.values) < 1e-12);
    }

    #[test]
    fn periodic_multiplier_differentiates_plane_waves() {
        let grid = GridSpec::unit_torus(1, 16).unwrap();
        let f = SampledField::from_fn(grid.clone(), |x| linalg::cis_turns(3.0 * x[0]));
        let d = periodic_multiplier(&f, |z, _| c(0.0, 2.0 * PI * z[0])).unwrap();
        for (u, v) in d.values.iter().zip(&f.values) {
            assert!((u - v * c(0.0, 6.0 * PI)).norm() < 1e-12);
        }
        let t = GridSpec::centered(1, 16, 1.0, GridMode::Truncated).unwrap();
        assert!(matches!(
            periodic_multiplier(&SampledField::zeros(t), |_, _| c(1.0, 0.0)),
            Err(GeoftError::NotPeriodic)
        ));
    }

    #[test]
    fn centred_indices() {
        assert_eq!((0..4).map(|j| centered_index(j, 4)).collect::<Vec<_>>(), vec![0, 1, -2, -1]);
        assert_eq!((0..5).map(|j| centered_index(j, 5)).collect::<Vec<_>>(), vec![0, 1, 2, -2, -1]);
        let lat = FrequencyLattice::centered_box(1, 4, 1.0);
        assert_eq!(lat.points(), vec![vec![-1.0], vec![-0.5], vec![0.0], vec![0.5]]);
    }
}
