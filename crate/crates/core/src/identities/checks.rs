//! Runners for the catalog. Each draws its own random cases from the context
//! and records the two sides of every case; the context keeps the worst.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::support::{self, c, Rand, SIDES, TRANSFORMS};
use crate::calculus::{self, ExchangeDirection, GradientKind, LaplacianBackend};
use crate::error::Result;
use crate::fields::{GaussianFunction, GridMode, GridSpec, Orientation, SampledField};
use crate::forms::{random_matrix, GeometricPair, GeometricStructure, Side};
use crate::fraclap::{self, FracParams, FracPath, PolarQuadrature};
use crate::lattice::{self, Lattice, PoissonForm, Radii};
use crate::linalg;
use crate::poly::PolyGaussian;
use crate::spectral::{self, Spectrum, Transform};

pub struct Ctx {
    pub rng: Rand,
    pub cases: usize,
    pub dims: &'static [usize],
    worst: Option<(f64, f64, f64)>,
}

impl Ctx {
    pub fn new(rng: Rand, cases: usize, dims: &'static [usize]) -> Self {
        Self {
            rng,
            cases,
            dims,
            worst: None,
        }
    }

    /// Dimension used by case `k`.
    pub fn dim(&self, k: usize) -> usize {
        self.dims[k % self.dims.len()]
    }

    pub fn record(&mut self, lhs: f64, rhs: f64, residual: f64) {
        let r = if residual.is_nan() { f64::INFINITY } else { residual };
        match self.worst {
            Some((_, _, w)) if w >= r => {}
            _ => self.worst = Some((lhs, rhs, r)),
        }
    }

    pub fn record_vecs(&mut self, lhs: &[Complex64], rhs: &[Complex64]) {
        self.record(linalg::linf(lhs), linalg::linf(rhs), linalg::rel_gap(lhs, rhs));
    }

    pub fn record_report(&mut self, r: &calculus::IdentityReport) {
        self.record(linalg::linf(&r.lhs), linalg::linf(&r.rhs), r.residual);
    }

    pub fn record_frac(&mut self, r: &fraclap::FracReport) {
        self.record(r.lhs, r.rhs, r.residual);
    }

    pub fn worst(&self) -> (f64, f64, f64) {
        self.worst.unwrap_or((0.0, 0.0, 0.0))
    }
}

pub type Runner = fn(&mut Ctx) -> Result<()>;

fn eval_at(g: &GaussianFunction, pts: &[Vec<f64>]) -> Vec<Complex64> {
    pts.iter().map(|p| g.eval_unchecked(p)).collect()
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| -x).collect()
}

fn add(u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

fn scale(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

fn truncated(n: usize) -> GridSpec {
    support::grid(n, GridMode::Truncated)
}

fn periodic(n: usize) -> GridSpec {
    support::grid(n, GridMode::Periodic)
}

// ---------------------------------------------------------------- forms

pub fn relb_pair(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let m = loop {
            let m = random_matrix(&mut ctx.rng, n, 0.0, 1.0);
            if linalg::det(&m).abs() > 0.1 {
                break m;
            }
        };
        let pair = GeometricPair::new(GeometricStructure::new(m)?)?;
        let b = pair.b();
        let mut r: f64 = 0.0;
        for i in 0..n {
            let ei: Vec<f64> = (0..n).map(|l| if l == i { 1.0 } else { 0.0 }).collect();
            for j in 0..n {
                let bj: Vec<f64> = (0..n).map(|l| b[(l, j)]).collect();
                let delta = if i == j { 1.0 } else { 0.0 };
                r = r.max((pair.form(&ei, &bj) - delta).abs());
            }
        }
        let prod = pair.det_b() * linalg::det(b);
        r = r.max((prod - 1.0).abs());
        ctx.record(prod, 1.0, r);
    }
    Ok(())
}

pub fn adjoint_lr(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pair(&mut ctx.rng, n)?;
        let a = random_matrix(&mut ctx.rng, n, 0.0, 1.0);
        let x = support::uniform_vec(&mut ctx.rng, n, 1.0);
        let y = support::uniform_vec(&mut ctx.rng, n, 1.0);
        let al = pair.adjoint(&a, Side::Left)?;
        let ar = pair.adjoint(&a, Side::Right)?;
        // b(x, Ay) = b(A^L x, y) and b(Ax, y) = b(x, A^R y)
        let l1 = pair.form(&x, &linalg::mat_vec(&a, &y));
        let r1 = pair.form(&linalg::mat_vec(&al, &x), &y);
        let l2 = pair.form(&linalg::mat_vec(&a, &x), &y);
        let r2 = pair.form(&x, &linalg::mat_vec(&ar, &y));
        let res = ((l1 - r1).abs() / l1.abs().max(1.0)).max((l2 - r2).abs() / l2.abs().max(1.0));
        ctx.record(l1, r1, res);
    }
    Ok(())
}

/// Random, symmetric indefinite, symplectic and three-dimensional pairs in turn.
fn mixed_pair(rng: &mut Rand, k: usize) -> Result<GeometricPair> {
    match k % 4 {
        0 => support::pair(rng, 2),
        1 => GeometricPair::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]),
        2 => GeometricPair::new(GeometricStructure::symplectic(1)),
        _ => support::pair(rng, 3),
    }
}

pub fn gb_group(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let pair = mixed_pair(&mut ctx.rng, k)?;
        let a = support::group_element(&mut ctx.rng, &pair);
        let mem = pair.in_group(&a, 1e-10)?;
        let d = linalg::det(&a).abs();
        ctx.record(d, 1.0, mem.residual.max((d - 1.0).abs()));
    }
    Ok(())
}

pub fn gb_lie(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let pair = mixed_pair(&mut ctx.rng, k)?;
        let basis = pair.lie_algebra_basis();
        let mut r: f64 = 0.0;
        for x in &basis {
            r = r.max(pair.in_lie_algebra(x, 1e-10)?.residual);
        }
        ctx.record(basis.len() as f64, basis.len() as f64, r);
    }
    Ok(())
}

pub fn gradient_lr(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pair(&mut ctx.rng, n)?;
        let f = support::gaussian(&mut ctx.rng, n).sample(&periodic(n))?;
        let gl = calculus::gradient(&f, &pair, GradientKind::Left)?;
        let gr = calculus::gradient(&f, &pair, GradientKind::Right)?;
        // ∇^L = BᵀB⁻¹∇^R
        let moved = calculus::apply_matrix(&(pair.b_t() * pair.m()), &gr);
        let lhs: Vec<Complex64> = gl.iter().flat_map(|f| f.values.clone()).collect();
        let rhs: Vec<Complex64> = moved.iter().flat_map(|f| f.values.clone()).collect();
        ctx.record_vecs(&lhs, &rhs);
    }
    Ok(())
}

pub fn deltaa_skew(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = if n == 2 {
            support::skew_pair(&mut ctx.rng)?
        } else {
            loop {
                let r = random_matrix(&mut ctx.rng, n, 0.0, 1.0);
                let s = &r - r.transpose();
                if linalg::det(&s).abs() > 0.05 {
                    break GeometricPair::new(GeometricStructure::new(s)?)?;
                }
            }
        };
        let grid = if n == 2 {
            support::unit_torus(2)
        } else {
            GridSpec::unit_torus(n, 8)?
        };
        let f = support::band_limited(&mut ctx.rng, &grid);
        let lf = calculus::b_laplacian(&f, &pair, 1)?;
        ctx.record(lf.max_abs(), 0.0, lf.max_abs() / f.max_abs());
    }
    Ok(())
}

pub fn deltaa_operator(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let m = 1 + (k / ctx.dims.len()) as u32 % 2;
        let pair = support::pair(&mut ctx.rng, n)?;
        let g = support::gaussian(&mut ctx.rng, n);
        let grid = periodic(n);
        let lhs = calculus::b_laplacian(&g.sample(&grid)?, &pair, m)?;
        let rhs = PolyGaussian::new(g).b_laplacian_pow(&pair, m)?.sample(&grid)?;
        ctx.record_vecs(&lhs.values, &rhs.values);
    }
    Ok(())
}

pub fn timpor_equivariance(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let m = 1 + (k / ctx.dims.len()) as u32 % 2;
        let pair = support::pair(&mut ctx.rng, n)?;
        let g = support::gaussian(&mut ctx.rng, n);
        let a = support::group_element(&mut ctx.rng, &pair);
        let a_inv = linalg::inverse(&a)?;
        let moved = PolyGaussian::new(g.tau(&a)?).b_laplacian_pow(&pair, m)?;
        let plain = PolyGaussian::new(g).b_laplacian_pow(&pair, m)?;
        let pts: Vec<Vec<f64>> = (0..20).map(|_| support::uniform_vec(&mut ctx.rng, n, 1.5)).collect();
        let lhs: Vec<Complex64> = pts.iter().map(|x| moved.eval(x)).collect();
        let rhs: Vec<Complex64> = pts.iter().map(|x| plain.eval(&linalg::mat_vec(&a_inv, x))).collect();
        ctx.record_vecs(&lhs, &rhs);
    }
    Ok(())
}

// ---------------------------------------------------------------- transforms

/// Random pair, Gaussian and its samples on the truncated grid.
fn setup(ctx: &mut Ctx, k: usize) -> Result<(GeometricPair, GaussianFunction, SampledField)> {
    let n = ctx.dim(k);
    let pair = support::pair(&mut ctx.rng, n)?;
    let g = support::gaussian(&mut ctx.rng, n);
    let f = g.sample(&truncated(n))?;
    Ok((pair, g, f))
}

fn shear_check(ctx: &mut Ctx, side: Side) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, f) = setup(ctx, k)?;
        let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(side), 10, 1.2);
        let lhs = spectral::geometric_ft(&f, &pair, side, &probes)?;
        let a = match side {
            Side::Left => pair.b_t(),
            Side::Right => pair.b().clone(),
        };
        let rhs = eval_at(&g.classical_ft().tau(&a)?, &probes);
        ctx.record_vecs(&lhs, &rhs);
    }
    Ok(())
}

pub fn teo2_i(ctx: &mut Ctx) -> Result<()> {
    shear_check(ctx, Side::Left)
}

pub fn teo2_ii(ctx: &mut Ctx) -> Result<()> {
    shear_check(ctx, Side::Right)
}

/// FFT against the direct sum over the whole sheared lattice, random samples
/// on a grid with a random origin and spacing.
fn fft_vs_direct(ctx: &mut Ctx, side: Side) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pair(&mut ctx.rng, n)?;
        let shape: Vec<usize> = if n == 1 { vec![64] } else { vec![24, 32] };
        let spacing: Vec<f64> = (0..n).map(|_| ctx.rng.gen_range(0.1..0.3)).collect();
        let origin: Vec<f64> = shape
            .iter()
            .zip(&spacing)
            .map(|(&m, &h)| -(m as f64) * h / 2.0 + ctx.rng.gen_range(-0.5..0.5))
            .collect();
        let grid = GridSpec::new(shape, origin, spacing, GridMode::Truncated)?;
        let values = (0..grid.len())
            .map(|_| Complex64::new(ctx.rng.gen_range(-1.0..1.0), ctx.rng.gen_range(-1.0..1.0)))
            .collect();
        let f = SampledField::new(grid, values)?;
        let spec = spectral::geometric_ft_fft(&f, &pair, side.into())?;
        let direct = spectral::geometric_ft(&f, &pair, side, &spec.points())?;
        ctx.record(
            linalg::linf(&spec.values),
            linalg::linf(&direct),
            linalg::rel_linf(&spec.values, &direct),
        );
    }
    Ok(())
}

pub fn teo2_i_fft(ctx: &mut Ctx) -> Result<()> {
    fft_vs_direct(ctx, Side::Left)
}

pub fn teo2_ii_fft(ctx: &mut Ctx) -> Result<()> {
    fft_vs_direct(ctx, Side::Right)
}

pub fn teo2_iii(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, f) = setup(ctx, k)?;
        let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(Side::Right), 10, 1.2);
        let lhs = spectral::geometric_ft(&f, &pair, Side::Right, &probes)?;
        // τ_{BB⁻ᵀ}F^L at ξ is F^L(BᵀB⁻¹ξ)
        let c = pair.b_t() * pair.m();
        let moved: Vec<Vec<f64>> = probes.iter().map(|p| linalg::mat_vec(&c, p)).collect();
        let rhs = spectral::geometric_ft(&f, &pair, Side::Left, &moved)?;
        ctx.record_vecs(&lhs, &rhs);
    }
    Ok(())
}

pub fn teo2_iv(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, f) = setup(ctx, k)?;
        for side in SIDES {
            let spec = spectral::geometric_ft_fft(&f, &pair, side.into())?;
            let back = spectral::inverse_geometric_ft_fft(&spec, &pair, side.into(), &f.grid)?;
            ctx.record_vecs(&back.values, &f.values);
        }
    }
    Ok(())
}

/// The quadrature inverse against four closed-form expressions for it.
fn inverse_expressions(ctx: &mut Ctx, side: Side) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, f) = setup(ctx, k)?;
        let n = pair.dim();
        let probes = support::probes(&mut ctx.rng, &pair, Transform::Inverse(side), 10, 1.2);
        let det = c(pair.abs_det_b());
        let minus_i = linalg::scaled_identity(n, -1.0);
        let quad = spectral::inverse_geometric_ft_field(&f, &pair, side, &probes)?;
        // (F^L)⁻¹: F∘τ_{-Mᵀ}, |det b|τ_{-B}F, τ_{Mᵀ}F^Lτ_{-Mᵀ}, |det b|τ_{-I}F^R;
        // (F^R)⁻¹ swaps Mᵀ ↔ M, B ↔ Bᵀ and L ↔ R.
        let (c0, b0) = match side {
            Side::Left => (pair.m().transpose(), pair.b().clone()),
            Side::Right => (pair.m().clone(), pair.b_t()),
        };
        let e1 = g.tau(&-&c0)?.classical_ft();
        let e2 = g.classical_ft().tau(&-&b0)?.scaled(det);
        let e3 = g.tau(&-&c0)?.geometric_ft(&pair, side).tau(&c0)?;
        let e4 = g.geometric_ft(&pair, side.flip()).tau(&minus_i)?.scaled(det);
        let sides = vec![
            quad,
            eval_at(&e1, &probes),
            eval_at(&e2, &probes),
            eval_at(&e3, &probes),
            eval_at(&e4, &probes),
        ];
        let r = support::max_pairwise_gap(&sides);
        ctx.record(linalg::linf(&sides[0]), linalg::linf(&sides[4]), r);
    }
    Ok(())
}

pub fn teo2_v(ctx: &mut Ctx) -> Result<()> {
    inverse_expressions(ctx, Side::Left)
}

pub fn teo2_vi(ctx: &mut Ctx) -> Result<()> {
    inverse_expressions(ctx, Side::Right)
}

pub fn teo2_vii(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, f) = setup(ctx, k)?;
        let n = pair.dim();
        for side in SIDES {
            let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(side), 10, 1.2);
            let negated = spectral::geometric_ft(&f, &pair.negated(), side, &probes)?;
            let flipped = eval_at(
                &g.geometric_ft(&pair, side).tau(&linalg::scaled_identity(n, -1.0))?,
                &probes,
            );
            let inv: Vec<Complex64> = spectral::inverse_geometric_ft_field(&f, &pair, side.flip(), &probes)?
                .into_iter()
                .map(|v| v / pair.abs_det_b())
                .collect();
            let sides = vec![negated, flipped, inv];
            let r = support::max_pairwise_gap(&sides);
            ctx.record(linalg::linf(&sides[0]), linalg::linf(&sides[2]), r);
        }
    }
    Ok(())
}

/// Forward by FFT (or by the direct sum in one dimension) onto the sheared
/// lattice, back by the direct inverse sum at random grid nodes.
fn round_trip(ctx: &mut Ctx, side: Side) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, f) = setup(ctx, k)?;
        let n = pair.dim();
        let spec = if n == 1 {
            let lattice = spectral::FrequencyLattice::for_grid(&f.grid, &pair, side.into());
            let values = spectral::geometric_ft(&f, &pair, side, &lattice.points())?;
            Spectrum::new(lattice, values, Some(f.grid.clone()))?
        } else {
            spectral::geometric_ft_fft(&f, &pair, side.into())?
        };
        let nodes = support::inner_nodes(&mut ctx.rng, &f.grid, 2.0, 20);
        let pts: Vec<Vec<f64>> = nodes.iter().map(|&j| f.grid.point(j)).collect();
        let back = spectral::inverse_geometric_ft_spectrum(&spec, &pair, side, &pts)?;
        let orig: Vec<Complex64> = nodes.iter().map(|&j| f.values[j]).collect();
        ctx.record_vecs(&back, &orig);
    }
    Ok(())
}

pub fn invftt_left(ctx: &mut Ctx) -> Result<()> {
    round_trip(ctx, Side::Left)
}

pub fn invftt_right(ctx: &mut Ctx) -> Result<()> {
    round_trip(ctx, Side::Right)
}

fn full_lattice(ctx: &mut Ctx, side: Side) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pair(&mut ctx.rng, n)?;
        let g = support::gaussian_unmodulated(&mut ctx.rng, n);
        let f = g.sample(&GridSpec::centered(n, 128, 8.0, GridMode::Truncated)?)?;
        let spec = spectral::geometric_ft_fft(&f, &pair, side.into())?;
        let a = match side {
            Side::Left => pair.m().transpose(),
            Side::Right => pair.m().clone(),
        };
        let fg = g.classical_ft();
        let rhs: Vec<Complex64> = spec
            .points()
            .iter()
            .map(|p| fg.eval_unchecked(&linalg::mat_vec(&a, p)))
            .collect();
        ctx.record(
            linalg::linf(&spec.values),
            linalg::linf(&rhs),
            linalg::rel_linf(&spec.values, &rhs),
        );
    }
    Ok(())
}

pub fn proplr_left(ctx: &mut Ctx) -> Result<()> {
    full_lattice(ctx, Side::Left)
}

pub fn proplr_right(ctx: &mut Ctx) -> Result<()> {
    full_lattice(ctx, Side::Right)
}

// ---------------------------------------------------------------- opposite, symmetric, skew

pub fn fop_i(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, f) = setup(ctx, k)?;
        let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(Side::Left), 10, 1.2);
        let lhs = spectral::geometric_ft(&f, &pair, Side::Left, &probes)?;
        let rhs = spectral::geometric_ft(&f, &pair.opposite(), Side::Right, &probes)?;
        ctx.record_vecs(&lhs, &rhs);
    }
    Ok(())
}

pub fn fop_ii(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::sym_pair(&mut ctx.rng, n)?;
        let f = support::gaussian(&mut ctx.rng, n).sample(&truncated(n))?;
        let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(Side::Left), 10, 1.2);
        let l = spectral::geometric_ft(&f, &pair, Side::Left, &probes)?;
        let r = spectral::geometric_ft(&f, &pair, Side::Right, &probes)?;
        let e = spectral::geometric_ft(&f, &GeometricPair::euclidean(n), Side::Left, &probes)?;
        let classical = spectral::dft_direct(&f, &probes, spectral::Direction::Forward, 1.0)?;
        let res = linalg::rel_gap(&l, &r).max(linalg::rel_gap(&e, &classical));
        ctx.record(linalg::linf(&l), linalg::linf(&r), res);
    }
    Ok(())
}

pub fn fop_iii(ctx: &mut Ctx) -> Result<()> {
    for _ in 0..ctx.cases {
        let pair = support::skew_pair(&mut ctx.rng)?;
        let f = support::gaussian(&mut ctx.rng, 2).sample(&truncated(2))?;
        let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(Side::Left), 10, 1.2);
        let lhs = spectral::geometric_ft(&f, &pair, Side::Left, &probes)?;
        let rhs = spectral::geometric_ft(&f, &pair.negated(), Side::Right, &probes)?;
        ctx.record_vecs(&lhs, &rhs);
    }
    Ok(())
}

pub fn sym_i(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::sym_pair(&mut ctx.rng, n)?;
        let f = support::gaussian(&mut ctx.rng, n).sample(&truncated(n))?;
        let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(Side::Left), 10, 1.2);
        let l = spectral::geometric_ft(&f, &pair, Side::Left, &probes)?;
        let r = spectral::geometric_ft(&f, &pair, Side::Right, &probes)?;
        ctx.record_vecs(&l, &r);
    }
    Ok(())
}

fn witness_pair() -> Result<GeometricPair> {
    GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]])
}

fn witness_probes(pair: &GeometricPair) -> Vec<Vec<f64>> {
    let bt = pair.b_t();
    [[0.5, 0.0], [0.0, 0.5], [0.4, -0.3], [-0.2, 0.6]]
        .iter()
        .map(|z| linalg::mat_vec(&bt, z))
        .collect()
}

/// `1e-3 / gap`: at most one exactly when the two sides differ by at least `1e-3`.
fn record_witness(ctx: &mut Ctx, a: &[Complex64], b: &[Complex64]) {
    let gap = linalg::abs_linf(a, b);
    ctx.record(gap, 1e-3, 1e-3 / gap);
}

pub fn sym_i_witness(ctx: &mut Ctx) -> Result<()> {
    let pair = witness_pair()?;
    let f = GaussianFunction::standard(2).sample(&truncated(2))?;
    let probes = witness_probes(&pair);
    let l = spectral::geometric_ft(&f, &pair, Side::Left, &probes)?;
    let r = spectral::geometric_ft(&f, &pair, Side::Right, &probes)?;
    record_witness(ctx, &l, &r);
    Ok(())
}

pub fn sym_ii(ctx: &mut Ctx) -> Result<()> {
    for _ in 0..ctx.cases {
        let pair = support::skew_pair(&mut ctx.rng)?;
        let f = support::gaussian(&mut ctx.rng, 2).sample(&truncated(2))?;
        for side in SIDES {
            let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(side), 10, 1.2);
            let fwd = spectral::geometric_ft(&f, &pair, side, &probes)?;
            let inv: Vec<Complex64> = spectral::inverse_geometric_ft_field(&f, &pair, side, &probes)?
                .into_iter()
                .map(|v| v / pair.abs_det_b())
                .collect();
            ctx.record_vecs(&fwd, &inv);
        }
    }
    Ok(())
}

pub fn sym_ii_witness(ctx: &mut Ctx) -> Result<()> {
    let pair = witness_pair()?;
    let f = GaussianFunction::standard(2).sample(&truncated(2))?;
    let probes = witness_probes(&pair);
    let fwd = spectral::geometric_ft(&f, &pair, Side::Left, &probes)?;
    let inv: Vec<Complex64> = spectral::inverse_geometric_ft_field(&f, &pair, Side::Left, &probes)?
        .into_iter()
        .map(|v| v / pair.abs_det_b())
        .collect();
    record_witness(ctx, &fwd, &inv);
    Ok(())
}

pub fn sym_iii(ctx: &mut Ctx) -> Result<()> {
    for _ in 0..ctx.cases {
        let pair = support::skew_pair(&mut ctx.rng)?;
        let f = support::gaussian(&mut ctx.rng, 2).sample(&truncated(2))?;
        for side in SIDES {
            let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(side), 10, 1.2);
            let lhs = spectral::geometric_ft(&f, &pair, side, &probes)?;
            let rhs = spectral::geometric_ft(&f, &pair.negated(), side.flip(), &probes)?;
            ctx.record_vecs(&lhs, &rhs);
        }
    }
    Ok(())
}

pub fn sym_iii_witness(ctx: &mut Ctx) -> Result<()> {
    let pair = witness_pair()?;
    let f = GaussianFunction::standard(2).sample(&truncated(2))?;
    let probes = witness_probes(&pair);
    let lhs = spectral::geometric_ft(&f, &pair, Side::Left, &probes)?;
    let rhs = spectral::geometric_ft(&f, &pair.negated(), Side::Right, &probes)?;
    record_witness(ctx, &lhs, &rhs);
    Ok(())
}

// ---------------------------------------------------------------- group invariance, conjugation

fn equivariance(ctx: &mut Ctx, forward: bool) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, _) = setup(ctx, k)?;
        let n = pair.dim();
        let a = support::group_element(&mut ctx.rng, &pair);
        let moved = g.tau(&a)?.sample(&truncated(n))?;
        for side in SIDES {
            let t = if forward {
                Transform::Forward(side)
            } else {
                Transform::Inverse(side)
            };
            let probes = support::probes(&mut ctx.rng, &pair, t, 10, 1.0);
            let lhs = t.quadrature(&moved, &pair, &probes)?;
            let rhs = eval_at(&t.closed_form(&g, &pair).tau(&a)?, &probes);
            ctx.record_vecs(&lhs, &rhs);
        }
    }
    Ok(())
}

pub fn ginvft_forward(ctx: &mut Ctx) -> Result<()> {
    equivariance(ctx, true)
}

pub fn ginvft_inverse(ctx: &mut Ctx) -> Result<()> {
    equivariance(ctx, false)
}

pub fn ginvft_invariant(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pd_pair(&mut ctx.rng, n)?;
        // exp(-π b(x,x))
        let shape = linalg::symmetric_part(pair.m());
        let f = GaussianFunction::new(shape, vec![0.0; n], c(1.0), vec![0.0; n])?.sample(&truncated(n))?;
        let a = support::group_element(&mut ctx.rng, &pair);
        let a_inv = linalg::inverse(&a)?;
        for t in TRANSFORMS {
            let probes = support::probes(&mut ctx.rng, &pair, t, 10, 1.0);
            let pulled: Vec<Vec<f64>> = probes.iter().map(|p| linalg::mat_vec(&a_inv, p)).collect();
            let lhs = t.quadrature(&f, &pair, &probes)?;
            let rhs = t.quadrature(&f, &pair, &pulled)?;
            ctx.record_vecs(&lhs, &rhs);
        }
    }
    Ok(())
}

pub fn complex_conj(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, f) = setup(ctx, k)?;
        let fc = f.map(|v| v.conj());
        for side in SIDES {
            let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(side), 10, 1.2);
            let reflected: Vec<Vec<f64>> = probes.iter().map(|p| neg(p)).collect();
            let a: Vec<Complex64> = spectral::geometric_ft(&f, &pair, side, &probes)?
                .into_iter()
                .map(|v| v.conj())
                .collect();
            let b = spectral::geometric_ft(&fc, &pair, side, &reflected)?;
            let cc = spectral::geometric_ft(&fc, &pair.negated(), side, &probes)?;
            let sides = vec![a, b, cc];
            let r = support::max_pairwise_gap(&sides);
            ctx.record(linalg::linf(&sides[0]), linalg::linf(&sides[1]), r);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- L² identities

/// `(F^L_b)⁻¹ = |det b|·F^R_{-b}` (and `L ↔ R`), so an inverse on a whole
/// lattice is one FFT on the lattice of the negated pair.
fn inverse_on_lattice(f: &SampledField, pair: &GeometricPair, side: Side) -> Result<Spectrum> {
    let mut s = spectral::geometric_ft_fft(f, &pair.negated(), side.flip().into())?;
    let d = pair.abs_det_b();
    s.values.iter_mut().for_each(|v| *v *= d);
    Ok(s)
}

/// `Σ s(ξ)·g(ξ)·cell` over the lattice of `s`.
fn pair_with(s: &Spectrum, g: &GaussianFunction) -> Complex64 {
    let terms: Vec<Complex64> = s
        .points()
        .iter()
        .zip(&s.values)
        .map(|(p, v)| v * g.eval_unchecked(p))
        .collect();
    linalg::pairwise_sum(&terms) * s.lattice.cell()
}

fn spectrum_inner(a: &Spectrum, b: &Spectrum) -> Complex64 {
    let terms: Vec<Complex64> = a.values.iter().zip(&b.values).map(|(x, y)| x * y.conj()).collect();
    linalg::pairwise_sum(&terms) * a.lattice.cell()
}

fn record_scalar(ctx: &mut Ctx, lhs: Complex64, rhs: Complex64, scale: f64) {
    ctx.record(lhs.norm(), rhs.norm(), (lhs - rhs).norm() / scale);
}

/// Two Gaussians and their samples; gap measured against `‖f‖‖g‖`.
fn l2_setup(ctx: &mut Ctx, k: usize) -> Result<(GeometricPair, [GaussianFunction; 2], [SampledField; 2], f64)> {
    let n = ctx.dim(k);
    let pair = support::pair(&mut ctx.rng, n)?;
    let g0 = support::gaussian(&mut ctx.rng, n);
    let g1 = support::gaussian(&mut ctx.rng, n);
    let grid = truncated(n);
    let s = [g0.sample(&grid)?, g1.sample(&grid)?];
    let norm = (g0.l2_norm_sq() * g1.l2_norm_sq()).sqrt();
    Ok((pair, [g0, g1], s, norm))
}

pub fn l2_duality(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, s, norm) = l2_setup(ctx, k)?;
        // |⟨F f, g⟩| ≤ |det b|^{-1/2}‖f‖‖g‖
        let bound = norm / pair.abs_det_b().sqrt();
        for side in SIDES {
            let lhs = pair_with(&spectral::geometric_ft_fft(&s[0], &pair, side.into())?, &g[1]);
            let rhs = pair_with(&spectral::geometric_ft_fft(&s[1], &pair, side.flip().into())?, &g[0]);
            record_scalar(ctx, lhs, rhs, bound);
        }
    }
    Ok(())
}

pub fn l2_parseval(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, s, norm) = l2_setup(ctx, k)?;
        let lhs = s[0].inner(&s[1])?;
        for side in SIDES {
            let a = spectral::geometric_ft_fft(&s[0], &pair, side.into())?;
            let b = spectral::geometric_ft_fft(&s[1], &pair, side.into())?;
            let rhs = spectrum_inner(&a, &b) * pair.abs_det_b();
            record_scalar(ctx, lhs, rhs, norm);
        }
    }
    Ok(())
}

pub fn l2_plancherel(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, s, _) = l2_setup(ctx, k)?;
        let lhs = s[0].norm_sq();
        for side in SIDES {
            let a = spectral::geometric_ft_fft(&s[0], &pair, side.into())?;
            let rhs = spectrum_inner(&a, &a).re * pair.abs_det_b();
            ctx.record(lhs, rhs, (lhs - rhs).abs() / lhs);
        }
    }
    Ok(())
}

pub fn l2_inverse_duality(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, s, norm) = l2_setup(ctx, k)?;
        let bound = norm * pair.abs_det_b().sqrt();
        for side in SIDES {
            let lhs = pair_with(&inverse_on_lattice(&s[0], &pair, side)?, &g[1]);
            let rhs = pair_with(&inverse_on_lattice(&s[1], &pair, side.flip())?, &g[0]);
            record_scalar(ctx, lhs, rhs, bound);
        }
    }
    Ok(())
}

pub fn l2_inverse_parseval(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, s, norm) = l2_setup(ctx, k)?;
        let lhs = s[0].inner(&s[1])?;
        for side in SIDES {
            let a = inverse_on_lattice(&s[0], &pair, side)?;
            let b = inverse_on_lattice(&s[1], &pair, side)?;
            let rhs = spectrum_inner(&a, &b) / pair.abs_det_b();
            record_scalar(ctx, lhs, rhs, norm);
        }
    }
    Ok(())
}

pub fn l2_inverse_plancherel(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, _, s, _) = l2_setup(ctx, k)?;
        let lhs = s[0].norm_sq();
        for side in SIDES {
            let a = inverse_on_lattice(&s[0], &pair, side)?;
            let rhs = spectrum_inner(&a, &a).re / pair.abs_det_b();
            ctx.record(lhs, rhs, (lhs - rhs).abs() / lhs);
        }
    }
    Ok(())
}

pub fn l2_norm(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, s, _) = l2_setup(ctx, k)?;
        let rhs = g[0].l2_norm_sq() / pair.abs_det_b();
        for side in SIDES {
            let a = spectral::geometric_ft_fft(&s[0], &pair, side.into())?;
            let lhs = spectrum_inner(&a, &a).re;
            ctx.record(lhs, rhs, (lhs - rhs).abs() / rhs);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- products and convolutions

pub fn staft_i(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, s, _) = l2_setup(ctx, k)?;
        let conv = spectral::convolve(&s[0], &s[1])?;
        for side in SIDES {
            let probes = support::probes(&mut ctx.rng, &pair, Transform::Forward(side), 10, 1.2);
            let lhs = spectral::geometric_ft(&conv, &pair, side, &probes)?;
            let (a, b) = (g[0].geometric_ft(&pair, side), g[1].geometric_ft(&pair, side));
            let rhs: Vec<Complex64> = probes.iter().map(|p| a.eval_unchecked(p) * b.eval_unchecked(p)).collect();
            ctx.record_vecs(&lhs, &rhs);
        }
    }
    Ok(())
}

pub fn staft_ii(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, s, _) = l2_setup(ctx, k)?;
        let prod = s[0].zip_with(&s[1], |a, b| a * b)?;
        let grid = prod.grid.clone();
        for side in SIDES {
            let fa = g[0].geometric_ft(&pair, side).sample(&grid)?;
            let fb = g[1].geometric_ft(&pair, side).sample(&grid)?;
            let conv = spectral::convolve(&fa, &fb)?;
            let nodes = support::inner_nodes(&mut ctx.rng, &grid, 1.5, 10);
            let pts: Vec<Vec<f64>> = nodes.iter().map(|&j| grid.point(j)).collect();
            let lhs = spectral::geometric_ft(&prod, &pair, side, &pts)?;
            let rhs: Vec<Complex64> = nodes.iter().map(|&j| conv.values[j] * pair.abs_det_b()).collect();
            ctx.record_vecs(&lhs, &rhs);
        }
    }
    Ok(())
}

pub fn stafti_i(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, s, _) = l2_setup(ctx, k)?;
        let conv = spectral::convolve(&s[0], &s[1])?;
        for side in SIDES {
            let probes = support::probes(&mut ctx.rng, &pair, Transform::Inverse(side), 10, 1.2);
            let lhs = spectral::inverse_geometric_ft_field(&conv, &pair, side, &probes)?;
            let a = g[0].inverse_geometric_ft(&pair, side);
            let b = g[1].inverse_geometric_ft(&pair, side);
            let rhs: Vec<Complex64> = probes
                .iter()
                .map(|p| a.eval_unchecked(p) * b.eval_unchecked(p) / pair.abs_det_b())
                .collect();
            ctx.record_vecs(&lhs, &rhs);
        }
    }
    Ok(())
}

pub fn stafti_ii(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, s, _) = l2_setup(ctx, k)?;
        let prod = s[0].zip_with(&s[1], |a, b| a * b)?;
        let grid = prod.grid.clone();
        for side in SIDES {
            let ia = g[0].inverse_geometric_ft(&pair, side).sample(&grid)?;
            let ib = g[1].inverse_geometric_ft(&pair, side).sample(&grid)?;
            let conv = spectral::convolve(&ia, &ib)?;
            let nodes = support::inner_nodes(&mut ctx.rng, &grid, 1.5, 10);
            let pts: Vec<Vec<f64>> = nodes.iter().map(|&j| grid.point(j)).collect();
            let lhs = spectral::inverse_geometric_ft_field(&prod, &pair, side, &pts)?;
            let rhs: Vec<Complex64> = nodes.iter().map(|&j| conv.values[j]).collect();
            ctx.record_vecs(&lhs, &rhs);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- translation, modulation, dilation

/// Transform of samples of `x ↦ modify(g, x)` against `closed(p)` at probes.
fn modified_check<M, R>(ctx: &mut Ctx, t: Transform, modify: M, rhs: R) -> Result<()>
where
    M: Fn(&GaussianFunction, &GeometricPair, &[f64], &[f64], f64) -> Complex64 + Sync,
    R: Fn(&GaussianFunction, &GeometricPair, &[f64], &[f64], f64) -> Complex64,
{
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pair(&mut ctx.rng, n)?;
        let g = support::gaussian(&mut ctx.rng, n);
        let h = support::uniform_vec(&mut ctx.rng, n, 0.5);
        let lambda = ctx.rng.gen_range(0.8..1.25);
        let f = SampledField::from_fn(truncated(n), |x| modify(&g, &pair, x, &h, lambda));
        let probes = support::probes(&mut ctx.rng, &pair, t, 10, 1.0);
        let lhs = t.quadrature(&f, &pair, &probes)?;
        let rhs: Vec<Complex64> = probes.iter().map(|p| rhs(&g, &pair, p, &h, lambda)).collect();
        ctx.record_vecs(&lhs, &rhs);
    }
    Ok(())
}

fn cis(t: f64) -> Complex64 {
    linalg::cis_turns(t)
}

const FL: Transform = Transform::Forward(Side::Left);
const FR: Transform = Transform::Forward(Side::Right);
const IL: Transform = Transform::Inverse(Side::Left);
const IR: Transform = Transform::Inverse(Side::Right);

fn closed(t: Transform, g: &GaussianFunction, pair: &GeometricPair, p: &[f64]) -> Complex64 {
    t.closed_form(g, pair).eval_unchecked(p)
}

pub fn transf_i(ctx: &mut Ctx) -> Result<()> {
    modified_check(
        ctx,
        FL,
        |g, _, x, h, _| g.eval_unchecked(&add(x, h)),
        |g, b, p, h, _| closed(FL, g, b, p) * cis(b.form(p, h)),
    )
}

pub fn transf_ii(ctx: &mut Ctx) -> Result<()> {
    modified_check(
        ctx,
        FR,
        |g, _, x, h, _| g.eval_unchecked(&add(x, h)),
        |g, b, p, h, _| closed(FR, g, b, p) * cis(b.form(h, p)),
    )
}

pub fn transf_iii(ctx: &mut Ctx) -> Result<()> {
    modified_check(
        ctx,
        FL,
        |g, b, x, h, _| g.eval_unchecked(x) * cis(-b.form(h, x)),
        |g, b, p, h, _| closed(FL, g, b, &add(p, h)),
    )
}

pub fn transf_iv(ctx: &mut Ctx) -> Result<()> {
    modified_check(
        ctx,
        FR,
        |g, b, x, h, _| g.eval_unchecked(x) * cis(-b.form(x, h)),
        |g, b, p, h, _| closed(FR, g, b, &add(p, h)),
    )
}

fn dilation(ctx: &mut Ctx, t: Transform) -> Result<()> {
    modified_check(
        ctx,
        t,
        |g, _, x, _, l| g.eval_unchecked(&scale(x, l)),
        move |g, b, p, _, l| closed(t, g, b, &scale(p, 1.0 / l)) * l.powi(-(p.len() as i32)),
    )
}

pub fn transf_v(ctx: &mut Ctx) -> Result<()> {
    dilation(ctx, FL)?;
    dilation(ctx, FR)
}

pub fn transfi_i(ctx: &mut Ctx) -> Result<()> {
    modified_check(
        ctx,
        IR,
        |g, _, x, h, _| g.eval_unchecked(&add(x, h)),
        |g, b, p, h, _| closed(IR, g, b, p) * cis(-b.form(p, h)),
    )
}

pub fn transfi_ii(ctx: &mut Ctx) -> Result<()> {
    modified_check(
        ctx,
        IL,
        |g, _, x, h, _| g.eval_unchecked(&add(x, h)),
        |g, b, p, h, _| closed(IL, g, b, p) * cis(-b.form(h, p)),
    )
}

pub fn transfi_iii(ctx: &mut Ctx) -> Result<()> {
    modified_check(
        ctx,
        IR,
        |g, b, x, h, _| g.eval_unchecked(x) * cis(b.form(h, x)),
        |g, b, p, h, _| closed(IR, g, b, &add(p, h)),
    )
}

pub fn transfi_iv(ctx: &mut Ctx) -> Result<()> {
    modified_check(
        ctx,
        IL,
        |g, b, x, h, _| g.eval_unchecked(x) * cis(b.form(x, h)),
        |g, b, p, h, _| closed(IL, g, b, &add(p, h)),
    )
}

pub fn transfi_v(ctx: &mut Ctx) -> Result<()> {
    dilation(ctx, IL)?;
    dilation(ctx, IR)
}

// ---------------------------------------------------------------- derivatives and Laplacians

fn exchange(ctx: &mut Ctx, t: Transform, direction: ExchangeDirection) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, _) = setup(ctx, k)?;
        let n = pair.dim();
        let grid = truncated(n);
        let probes = support::probes(&mut ctx.rng, &pair, t, 10, 1.2);
        for axis in 0..n {
            for order in 1..=2 {
                let r = calculus::derivative_transform_identity(&g, &pair, t, direction, axis, order, &probes, &grid)?;
                ctx.record_report(&r);
            }
        }
    }
    Ok(())
}

pub fn simpor_i(ctx: &mut Ctx) -> Result<()> {
    exchange(ctx, FL, ExchangeDirection::TransformOfDerivative)
}
pub fn simpor_ii(ctx: &mut Ctx) -> Result<()> {
    exchange(ctx, FR, ExchangeDirection::TransformOfDerivative)
}
pub fn simpor_iii(ctx: &mut Ctx) -> Result<()> {
    exchange(ctx, IL, ExchangeDirection::TransformOfDerivative)
}
pub fn simpor_iv(ctx: &mut Ctx) -> Result<()> {
    exchange(ctx, IR, ExchangeDirection::TransformOfDerivative)
}
pub fn simpor_v(ctx: &mut Ctx) -> Result<()> {
    exchange(ctx, FL, ExchangeDirection::DerivativeOfTransform)
}
pub fn simpor_vi(ctx: &mut Ctx) -> Result<()> {
    exchange(ctx, FR, ExchangeDirection::DerivativeOfTransform)
}
pub fn simpor_vii(ctx: &mut Ctx) -> Result<()> {
    exchange(ctx, IL, ExchangeDirection::DerivativeOfTransform)
}
pub fn simpor_viii(ctx: &mut Ctx) -> Result<()> {
    exchange(ctx, IR, ExchangeDirection::DerivativeOfTransform)
}

pub fn plane_eigen(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pair(&mut ctx.rng, n)?;
        let grid = support::unit_torus(n);
        let modes: Vec<f64> = (0..n).map(|_| ctx.rng.gen_range(-3i32..=3) as f64).collect();
        for orientation in [Orientation::PointFirst, Orientation::FrequencyFirst] {
            // the wave vector Mξ (or Mᵀξ) is the integer mode vector
            let xi = match orientation {
                Orientation::PointFirst => linalg::mat_vec(pair.b(), &modes),
                Orientation::FrequencyFirst => linalg::mat_vec(&pair.b_t(), &modes),
            };
            for positive in [true, false] {
                let r = calculus::plane_wave_eigencheck(&pair, &xi, orientation, positive, &grid)?;
                ctx.record(r.eigenvalue, r.eigenvalue, r.residual);
            }
        }
    }
    Ok(())
}

fn laplacian_periodic(ctx: &mut Ctx, forward: bool) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pair(&mut ctx.rng, n)?;
        let g = support::gaussian(&mut ctx.rng, n);
        let grid = periodic(n);
        let modes: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..n).map(|_| ctx.rng.gen_range(-12i32..=12) as f64).collect())
            .collect();
        for side in SIDES {
            let t = if forward {
                Transform::Forward(side)
            } else {
                Transform::Inverse(side)
            };
            for m in 1..=2 {
                let r = calculus::laplacian_transform_identity(
                    &g,
                    &pair,
                    m,
                    t,
                    LaplacianBackend::PeriodicSpectral,
                    &modes,
                    &grid,
                )?;
                ctx.record_report(&r);
            }
        }
    }
    Ok(())
}

pub fn mlap_forward(ctx: &mut Ctx) -> Result<()> {
    laplacian_periodic(ctx, true)
}

pub fn mlap_inverse(ctx: &mut Ctx) -> Result<()> {
    laplacian_periodic(ctx, false)
}

pub fn mlap_quadrature(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, _) = setup(ctx, k)?;
        let grid = truncated(pair.dim());
        for t in TRANSFORMS {
            let probes = support::probes(&mut ctx.rng, &pair, t, 10, 1.0);
            for m in 1..=2 {
                let r = calculus::laplacian_transform_identity(&g, &pair, m, t, LaplacianBackend::Quadrature, &probes, &grid)?;
                ctx.record_report(&r);
            }
        }
    }
    Ok(())
}

/// `F^{±1}[Δ_b^m(τ_A f)] = [-4π² b(p,p)]^m τ_A(F^{±1} f)` for `A ∈ G_b`.
pub fn mlap_group(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, _) = setup(ctx, k)?;
        let n = pair.dim();
        let a = support::group_element(&mut ctx.rng, &pair);
        let a_inv = linalg::inverse(&a)?;
        let grid = truncated(n);
        for t in TRANSFORMS {
            let probes = support::probes(&mut ctx.rng, &pair, t, 10, 1.0);
            for m in 1..=2u32 {
                let lf = PolyGaussian::new(g.tau(&a)?).b_laplacian_pow(&pair, m)?.sample(&grid)?;
                let lhs = t.quadrature(&lf, &pair, &probes)?;
                let closed = t.closed_form(&g, &pair);
                let rhs: Vec<Complex64> = probes
                    .iter()
                    .map(|p| {
                        let factor = c(-4.0 * PI * PI * pair.form(p, p)).powu(m);
                        factor * closed.eval_unchecked(&linalg::mat_vec(&a_inv, p))
                    })
                    .collect();
                ctx.record_vecs(&lhs, &rhs);
            }
        }
    }
    Ok(())
}

fn sobolev(ctx: &mut Ctx, m: u32) -> Result<()> {
    for k in 0..ctx.cases {
        let (pair, g, _) = setup(ctx, k)?;
        let grid = truncated(pair.dim());
        for side in SIDES {
            let r = calculus::sobolev_norm_identity(&g, &pair, m, side, &grid)?;
            ctx.record(r.lhs, r.rhs, r.relative_gap);
        }
    }
    Ok(())
}

pub fn rtr_m0(ctx: &mut Ctx) -> Result<()> {
    sobolev(ctx, 0)
}

pub fn rtr_m1(ctx: &mut Ctx) -> Result<()> {
    sobolev(ctx, 1)
}

// ---------------------------------------------------------------- Poisson summation

fn random_lattice(rng: &mut Rand, n: usize) -> Result<Lattice> {
    loop {
        let g = random_matrix(rng, n, 1.0, 0.4);
        if linalg::det(&g).abs() >= 0.4 {
            return Lattice::new(g);
        }
    }
}

fn poisson(ctx: &mut Ctx, form: PoissonForm) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let l = random_lattice(&mut ctx.rng, n)?;
        let g = support::gaussian(&mut ctx.rng, n);
        let x = support::uniform_vec(&mut ctx.rng, n, 1.0);
        let r = lattice::poisson_check(&g, &l, &x, form, Radii::default(), lattice::DEFAULT_TAIL_TOL)?;
        ctx.record(r.lhs.norm(), r.rhs.norm(), r.abs_gap);
    }
    Ok(())
}

pub fn poisson_classical(ctx: &mut Ctx) -> Result<()> {
    poisson(ctx, PoissonForm::Classical)
}
pub fn poisson_left_b(ctx: &mut Ctx) -> Result<()> {
    poisson(ctx, PoissonForm::LeftB)
}
pub fn poisson_right_opposite(ctx: &mut Ctx) -> Result<()> {
    poisson(ctx, PoissonForm::RightOpposite)
}
pub fn poisson_lattice_left(ctx: &mut Ctx) -> Result<()> {
    poisson(ctx, PoissonForm::LatticeLeft)
}
pub fn poisson_lattice_right(ctx: &mut Ctx) -> Result<()> {
    poisson(ctx, PoissonForm::LatticeRight)
}
pub fn poisson_inverse_left(ctx: &mut Ctx) -> Result<()> {
    poisson(ctx, PoissonForm::InverseLeft)
}
pub fn poisson_inverse_right(ctx: &mut Ctx) -> Result<()> {
    poisson(ctx, PoissonForm::InverseRight)
}

pub fn poisson_dual(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let l = random_lattice(&mut ctx.rng, n)?;
        let d = l.dual();
        // ⟨g_i, g*_j⟩ = δ_ij and det L · det L* = 1
        let gram = l.generator().transpose() * d.generator();
        let r = linalg::max_abs(&(gram - linalg::identity(n))).max((l.det() * d.det() - 1.0).abs());
        ctx.record(l.det() * d.det(), 1.0, r);
    }
    Ok(())
}

// ---------------------------------------------------------------- fractional powers

const S_VALUES: [f64; 3] = [0.25, 0.5, 0.75];

/// Positive definite pair, `s`, torus samples of a band-limited field.
fn frac_setup(ctx: &mut Ctx, k: usize) -> Result<(FracParams, SampledField)> {
    let n = ctx.dim(k);
    let pair = support::pd_pair(&mut ctx.rng, n)?;
    let s = S_VALUES[(k / ctx.dims.len()) % 3];
    let f = support::band_limited(&mut ctx.rng, &support::unit_torus(n));
    Ok((FracParams::new(s, pair)?, f))
}

pub fn frac_paths(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        ctx.record_frac(&fraclap::path_agreement(&f, &p)?);
    }
    Ok(())
}

/// Plane waves `e^{2πi⟨m,x⟩}` are eigenfunctions with eigenvalue
/// `(4π²⟨m,Bm⟩)^s`, computed here from the symmetric part of `B` directly.
pub fn frac_plane(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pd_pair(&mut ctx.rng, n)?;
        let s = S_VALUES[(k / ctx.dims.len()) % 3];
        let p = FracParams::new(s, pair.clone())?;
        let modes: Vec<f64> = (0..n).map(|_| ctx.rng.gen_range(-3i32..=3) as f64).collect();
        let grid = support::unit_torus(n);
        let w = SampledField::from_fn(grid, |x| linalg::cis_turns(linalg::dot(&modes, x)));
        let q = linalg::quad_form(&linalg::symmetric_part(pair.b()), &modes, &modes);
        let lambda = (4.0 * PI * PI * q).powf(s);
        let rhs = w.map(|v| v * lambda);
        for path in FracPath::ALL {
            let lhs = fraclap::frac_laplacian(&w, &p, path)?;
            ctx.record_vecs(&lhs.values, &rhs.values);
        }
    }
    Ok(())
}

/// Two half powers compose to `-Δ_b`.
pub fn frac_integer(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        let half = FracParams::new(0.5, p.pair().clone())?;
        let rhs = calculus::b_laplacian(&f, p.pair(), 1)?.map(|v| -v);
        for path in FracPath::ALL {
            let lhs = fraclap::frac_laplacian(&fraclap::frac_laplacian(&f, &half, path)?, &half, path)?;
            ctx.record_vecs(&lhs.values, &rhs.values);
        }
    }
    Ok(())
}

pub fn frac_semigroup(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        let t = 0.9 * (1.0 - p.s()) * ctx.rng.gen_range(0.1..1.0);
        for path in FracPath::ALL {
            ctx.record_frac(&fraclap::semigroup_check(&f, &p, t, path)?);
        }
    }
    Ok(())
}

pub fn frac_linearity(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        let g = support::band_limited(&mut ctx.rng, &f.grid);
        let mu = Complex64::new(ctx.rng.gen_range(-2.0..2.0), ctx.rng.gen_range(-2.0..2.0));
        let nu = Complex64::new(ctx.rng.gen_range(-2.0..2.0), ctx.rng.gen_range(-2.0..2.0));
        for path in FracPath::ALL {
            ctx.record_frac(&fraclap::linearity_check(&f, &g, mu, nu, &p, path)?);
        }
    }
    Ok(())
}

pub fn frac_derivative(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        let n = f.grid.dim;
        for path in FracPath::ALL {
            for axis in 0..n {
                for order in 1..=2 {
                    ctx.record_frac(&fraclap::derivative_commute_check(&f, &p, axis, order, path)?);
                }
            }
        }
    }
    Ok(())
}

pub fn frac_translation(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        let h: Vec<f64> = f
            .grid
            .spacing
            .iter()
            .map(|&dx| ctx.rng.gen_range(-4i32..=4) as f64 * dx)
            .collect();
        for path in FracPath::ALL {
            ctx.record_frac(&fraclap::translation_check(&f, &p, &h, path)?);
        }
    }
    Ok(())
}

pub fn frac_scaling(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        // integer dilations map the torus onto itself
        let lambda = if k % 2 == 0 { 2.0 } else { -1.0 };
        for path in FracPath::ALL {
            ctx.record_frac(&fraclap::scaling_check(&f, &p, lambda, path)?);
        }
    }
    Ok(())
}

pub fn frac_homogeneity(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, _) = frac_setup(ctx, k)?;
        let n = p.pair().dim();
        let xi = support::uniform_vec(&mut ctx.rng, n, 3.0);
        let lambda = ctx.rng.gen_range(-4.0..4.0);
        ctx.record_frac(&fraclap::homogeneity_check(&p, &xi, lambda));
    }
    Ok(())
}

pub fn frac_ibp(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        let g = support::band_limited(&mut ctx.rng, &f.grid);
        for path in FracPath::ALL {
            ctx.record_frac(&fraclap::integration_by_parts_check(&f, &g, &p, path)?);
        }
    }
    Ok(())
}

pub fn frac_l2(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        for side in SIDES {
            ctx.record_frac(&fraclap::l2_identity_check(&f, &p, side)?);
        }
    }
    Ok(())
}

pub fn frac_psd(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let (p, f) = frac_setup(ctx, k)?;
        for path in FracPath::ALL {
            ctx.record_frac(&fraclap::positivity_check(&f, &p, path)?);
        }
    }
    Ok(())
}

pub fn frac_equivariance(ctx: &mut Ctx) -> Result<()> {
    for k in 0..ctx.cases {
        let n = ctx.dim(k);
        let pair = support::pd_pair(&mut ctx.rng, n)?;
        let s = S_VALUES[(k / ctx.dims.len()) % 3];
        let p = FracParams::new(s, pair.clone())?;
        let g = support::gaussian(&mut ctx.rng, n);
        let a = support::group_element(&mut ctx.rng, &pair);
        let pts: Vec<Vec<f64>> = (0..6).map(|_| support::uniform_vec(&mut ctx.rng, n, 1.0)).collect();
        ctx.record_frac(&fraclap::equivariance_check(&g, &p, &a, &pts, PolarQuadrature::default())?);
    }
    Ok(())
}
