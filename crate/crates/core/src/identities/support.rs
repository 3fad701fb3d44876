//! Random inputs and small helpers shared by the check runners.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fields::{GaussianFunction, GridMode, GridSpec, PlaneWave, SampledField};
use crate::forms::{random_matrix, GeometricPair, GeometricStructure, Side};
use crate::linalg::{self, Mat};
use crate::spectral::Transform;

pub type Rand = ChaCha8Rng;

pub const TRANSFORMS: [Transform; 4] = [
    Transform::Forward(Side::Left),
    Transform::Forward(Side::Right),
    Transform::Inverse(Side::Left),
    Transform::Inverse(Side::Right),
];

pub const SIDES: [Side; 2] = [Side::Left, Side::Right];

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Singular values of `m`, ascending.
fn singular_values(m: &Mat) -> Vec<f64> {
    linalg::sym_eigenvalues(&(m.transpose() * m))
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect()
}

fn pair_of(m: Mat) -> Result<GeometricPair> {
    GeometricPair::new(GeometricStructure::new(m)?)
}

/// A pair whose `M` has singular values in `[0.6, 1.6]`, so transformed
/// Gaussians stay resolvable on the default grids.
pub fn pair(rng: &mut Rand, n: usize) -> Result<GeometricPair> {
    loop {
        let m = random_matrix(rng, n, 1.0, 0.4);
        let sv = singular_values(&m);
        if sv[0] >= 0.6 && sv[n - 1] <= 1.6 {
            return pair_of(m);
        }
    }
}

/// A random pair with a positive definite symmetric part.
pub fn pd_pair(rng: &mut Rand, n: usize) -> Result<GeometricPair> {
    loop {
        let p = pair(rng, n)?;
        let ev = linalg::sym_eigenvalues(&linalg::symmetric_part(p.m()));
        if ev[0] >= 0.4 {
            return Ok(p);
        }
    }
}

/// A random symmetric pair, definite or not.
pub fn sym_pair(rng: &mut Rand, n: usize) -> Result<GeometricPair> {
    loop {
        let m = random_matrix(rng, n, 0.0, 1.0);
        let s = linalg::symmetric_part(&m);
        let ev = linalg::sym_eigenvalues(&s);
        if ev.iter().all(|v| v.abs() >= 0.6 && v.abs() <= 1.6) {
            return pair_of(s);
        }
    }
}

/// `a·J` on `R²`.
pub fn skew_pair(rng: &mut Rand) -> Result<GeometricPair> {
    let a = rng.gen_range(0.7..1.4);
    pair_of(linalg::mat_from_rows(&[vec![0.0, a], vec![-a, 0.0]])?)
}

pub fn uniform_vec(rng: &mut Rand, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-r..r)).collect()
}

/// A Gaussian with shape eigenvalues in `[0.6, 1.5]`, small centre and
/// modulation, amplitude of modulus in `[0.5, 1.5]`.
pub fn gaussian(rng: &mut Rand, n: usize) -> GaussianFunction {
    let mut g = gaussian_unmodulated(rng, n);
    g.phase_freq = uniform_vec(rng, n, 0.2);
    g
}

pub fn gaussian_unmodulated(rng: &mut Rand, n: usize) -> GaussianFunction {
    let shape = loop {
        let s = linalg::symmetric_part(&random_matrix(rng, n, 1.0, 0.3));
        let ev = linalg::sym_eigenvalues(&s);
        if ev[0] >= 0.6 && ev[n - 1] <= 1.5 {
            break s;
        }
    };
    let center = uniform_vec(rng, n, 0.3);
    let amp = Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(-3.0..3.0));
    GaussianFunction::new(shape, center, amp, vec![0.0; n]).expect("valid random Gaussian")
}

/// `[-8, 8)ⁿ` with step `1/16` (n = 1) or `1/8` (n ≥ 2).
pub fn grid(n: usize, mode: GridMode) -> GridSpec {
    let points = if n == 1 { 256 } else { 128 };
    GridSpec::centered(n, points, 8.0, mode).expect("valid grid")
}

/// Probe points whose effective classical frequency `ζ` lies in
/// `[-r, r]ⁿ`: `Bᵀζ` / `Bζ` for forward left/right, `Bζ` / `Bᵀζ` for the
/// inverse left/right kernels.
pub fn probes(rng: &mut Rand, pair: &GeometricPair, t: Transform, count: usize, r: f64) -> Vec<Vec<f64>> {
    let shear = match t {
        Transform::Forward(Side::Left) | Transform::Inverse(Side::Right) => pair.b_t(),
        Transform::Forward(Side::Right) | Transform::Inverse(Side::Left) => pair.b().clone(),
    };
    (0..count)
        .map(|_| linalg::mat_vec(&shear, &uniform_vec(rng, pair.dim(), r)))
        .collect()
}

/// An element of `G_b` near the identity; `-I` when the Lie algebra is trivial.
pub fn group_element(rng: &mut Rand, pair: &GeometricPair) -> Mat {
    let s = pair.sample_group_element(rng.gen(), 0.5);
    if s.trivial_algebra {
        linalg::scaled_identity(pair.dim(), -1.0)
    } else {
        s.matrix
    }
}

/// A trigonometric polynomial with integer modes `|m_i| ≤ 3` on `grid`,
/// whose extent is `1` on every axis.
pub fn band_limited(rng: &mut Rand, grid: &GridSpec) -> SampledField {
    let n = grid.dim;
    let ext = grid.extent();
    let modes: Vec<(PlaneWave, Complex64)> = (0..if n == 1 { 6 } else { 10 })
        .map(|_| {
            let k = (0..n)
                .map(|ax| rng.gen_range(-3i32..=3) as f64 / ext[ax])
                .collect();
            let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (PlaneWave::euclidean(k), a)
        })
        .collect();
    SampledField::from_fn(grid.clone(), |x| modes.iter().map(|(w, a)| a * w.eval(x)).sum())
}

/// Unit torus with 32 (n = 1) or 16 points per axis.
pub fn unit_torus(n: usize) -> GridSpec {
    GridSpec::unit_torus(n, if n == 1 { 32 } else { 16 }).expect("valid torus")
}

/// Flat indices of up to `count` random nodes of `grid` within radius `r`.
pub fn inner_nodes(rng: &mut Rand, grid: &GridSpec, r: f64, count: usize) -> Vec<usize> {
    let candidates: Vec<usize> = (0..grid.len())
        .filter(|&k| linalg::norm2(&grid.point(k)) <= r)
        .collect();
    (0..count)
        .map(|_| candidates[rng.gen_range(0..candidates.len())])
        .collect()
}

/// Largest pairwise relative gap among several evaluations of one quantity.
pub fn max_pairwise_gap(sides: &[Vec<Complex64>]) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..sides.len() {
        for j in i + 1..sides.len() {
            r = r.max(linalg::rel_gap(&sides[i], &sides[j]));
        }
    }
    r
}
