//! Full lattices `G(Zⁿ)`, their duals, and Poisson summation over them in the
//! classical form and in the left/right geometric forms.
//!
//! Infinite sums are truncated to balls whose radii are certified by a
//! Gaussian tail bound.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoftError, Result};
use crate::fields::GaussianFunction;
use crate::forms::{GeometricPair, GeometricStructure, Side};
use crate::linalg::{self, Mat};

/// Upper limit on the number of enumerated points.
pub const POINT_CAP: usize = 10_000_000;
/// Default truncation tolerance for certified radii.
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    generator: Mat,
    det: f64,
}

impl Lattice {
    pub fn new(generator: Mat) -> Result<Self> {
        if !generator.is_square() {
            return Err(GeoftError::NonSquare {
                rows: generator.nrows(),
                cols: generator.ncols(),
            });
        }
        let det = linalg::det(&generator).abs();
        let n = generator.nrows() as i32;
        if !(det > 1e-12 * linalg::inf_norm(&generator).powi(n)) {
            return Err(GeoftError::SingularMatrix);
        }
        Ok(Self { generator, det })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(linalg::mat_from_rows(rows)?)
    }

    /// `Zⁿ`.
    pub fn integer(n: usize) -> Self {
        Self {
            generator: linalg::identity(n),
            det: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    pub fn generator(&self) -> &Mat {
        &self.generator
    }

    /// `|det G|`, the covolume.
    pub fn det(&self) -> f64 {
        self.det
    }

    /// `G⁻ᵀ(Zⁿ)`.
    pub fn dual(&self) -> Self {
        let g = linalg::inverse(&self.generator)
            .expect("lattice generator is invertible")
            .transpose();
        Self::new(g).expect("dual of a full lattice is full")
    }

    /// Sum of the column norms of `G`; every fundamental cell fits in a ball
    /// of this diameter around its base point.
    fn cell_diameter(&self) -> f64 {
        (0..self.dim()).map(|j| self.generator.column(j).norm()).sum()
    }
}

/// The structure `b(x,y) = ⟨x, G⁻¹y⟩`, i.e. `M = G⁻¹` and `B = G`.
pub fn structure_from_lattice(g: &Mat) -> Result<GeometricPair> {
    let m = linalg::inverse(g)?;
    GeometricPair::new(GeometricStructure::new(m)?)
}

/// `(B(Zⁿ), Bᵀ(Zⁿ))`.
pub fn lattices_from_structure(pair: &GeometricPair) -> (Lattice, Lattice) {
    let left = Lattice::new(pair.b().clone()).expect("B is invertible");
    let right = Lattice::new(pair.b_t()).expect("Bᵀ is invertible");
    (left, right)
}

/// Lattice points `Gk` with `‖Gk‖ ≤ radius`, in lexicographic order of `k`.
pub fn enumerate_points(l: &Lattice, radius: f64) -> Result<Vec<Vec<f64>>> {
    Ok(enumerate_shifted(l, radius, &vec![0.0; l.dim()])?
        .into_iter()
        .map(|(_, p)| p)
        .collect())
}

/// Pairs `(k, Gk)` with `‖Gk + shift‖ ≤ radius`, lexicographic in `k`.
pub fn enumerate_shifted(l: &Lattice, radius: f64, shift: &[f64]) -> Result<Vec<(Vec<i64>, Vec<f64>)>> {
    let n = l.dim();
    if shift.len() != n {
        return Err(GeoftError::DimensionMismatch {
            expected: n,
            got: shift.len(),
        });
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(GeoftError::InvalidInput("radius must be non-negative".into()));
    }
    let ginv = linalg::inverse(&l.generator)?;
    let a = linalg::mat_vec(&ginv, shift);
    // k = G⁻¹(v - shift) with ‖v‖ ≤ R gives |k_i + a_i| ≤ R·‖row_i(G⁻¹)‖
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    let mut count: f64 = 1.0;
    for i in 0..n {
        let r = radius * ginv.row(i).norm();
        let l_i = (-a[i] - r).floor() as i64;
        let h_i = (-a[i] + r).ceil() as i64;
        count *= (h_i - l_i + 1) as f64;
        lo.push(l_i);
        hi.push(h_i);
    }
    if count > POINT_CAP as f64 {
        return Err(GeoftError::RadiusTooLarge { cap: POINT_CAP });
    }
    let mut out = Vec::new();
    let mut k = lo.clone();
    loop {
        let kf: Vec<f64> = k.iter().map(|&v| v as f64).collect();
        let p = linalg::mat_vec(&l.generator, &kf);
        let shifted: Vec<f64> = p.iter().zip(shift).map(|(u, v)| u + v).collect();
        if linalg::norm2(&shifted) <= radius {
            out.push((k.clone(), p));
        }
        // odometer, last axis fastest
        let mut ax = n;
        loop {
            if ax == 0 {
                return Ok(out);
            }
            ax -= 1;
            if k[ax] < hi[ax] {
                k[ax] += 1;
                for (kj, &lj) in k[ax + 1..].iter_mut().zip(&lo[ax + 1..]) {
                    *kj = lj;
                }
                break;
            }
        }
    }
}

/// Bound on `Σ_{v ∈ Λ + s, ‖v‖ > R} |g(v)|` for a Gaussian `g`, using
/// `|g(v)| ≤ |amp|·exp(-πλ_min(‖v‖ - ‖c‖)²)` and the shell count
/// `#{v : ‖v‖ < ρ} ≤ vol(B(ρ + d)) / det Λ`.
pub fn gaussian_tail_bound(g: &GaussianFunction, lattice: &Lattice, radius: f64) -> f64 {
    let n = g.dim() as i32;
    let lmin = linalg::sym_eigenvalues(&g.shape)[0];
    let cnorm = linalg::norm2(&g.center);
    if radius <= cnorm {
        return f64::INFINITY;
    }
    let d = lattice.cell_diameter();
    let unit_ball = PI.powf(n as f64 / 2.0) / gamma_half_integer(n as u32 + 2);
    let mut total = 0.0;
    for j in 0..100_000 {
        let rho = radius + j as f64;
        let count = unit_ball * (rho + 1.0 + d).powi(n) / lattice.det();
        let term = g.amp.norm() * count * (-PI * lmin * (rho - cnorm).powi(2)).exp();
        total += term;
        if term < 1e-30 * total.max(1e-300) || term == 0.0 {
            break;
        }
    }
    total
}

/// `Γ(k/2)` for positive integers `k`.
fn gamma_half_integer(k: u32) -> f64 {
    match k {
        1 => PI.sqrt(),
        2 => 1.0,
        _ => (k as f64 / 2.0 - 1.0) * gamma_half_integer(k - 2),
    }
}

/// Smallest radius on a 1/8 grid above `‖c‖` whose tail bound is below `tol`.
pub fn certified_radius(g: &GaussianFunction, lattice: &Lattice, tol: f64) -> f64 {
    let start = linalg::norm2(&g.center);
    let mut r = (start * 8.0).ceil() / 8.0 + 0.125;
    while gaussian_tail_bound(g, lattice, r) > tol {
        r += 0.125;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoissonForm {
    /// `(1/det L)·Σ_{m∈L*} Ff(m)·e^{2πi⟨x,m⟩}`.
    Classical,
    /// `|det b|·Σ_{ξ∈Zⁿ} F^L_b f(ξ)·e^{2πi b(ξ,x)}` with `B = G`.
    LeftB,
    /// `|det b^op|·Σ_{ξ∈Zⁿ} F^R_{b^op} f(ξ)·e^{2πi b^op(x,ξ)}` with `B = G`.
    RightOpposite,
    /// Sum over `B(Zⁿ)`, right side as `LeftB`, for the structure with `B = G`.
    LatticeLeft,
    /// Sum over `Bᵀ(Zⁿ)`: `|det b|·Σ F^R_b f(ξ)·e^{2πi b(x,ξ)}` with `Bᵀ = G`.
    LatticeRight,
    /// `Σ_{x∈Zⁿ} [(F^L_{b^op})⁻¹f](x)·e^{-2πi b^op(ξ,x)}` with `B = G`.
    InverseLeft,
    /// `Σ_{x∈Zⁿ} [(F^R_b)⁻¹f](x)·e^{-2πi b(x,ξ)}` with `B = G`.
    InverseRight,
}

impl PoissonForm {
    pub const ALL: [PoissonForm; 7] = [
        PoissonForm::Classical,
        PoissonForm::LeftB,
        PoissonForm::RightOpposite,
        PoissonForm::LatticeLeft,
        PoissonForm::LatticeRight,
        PoissonForm::InverseLeft,
        PoissonForm::InverseRight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PoissonForm::Classical => "classical",
            PoissonForm::LeftB => "left-b",
            PoissonForm::RightOpposite => "right-opposite",
            PoissonForm::LatticeLeft => "lattice-left",
            PoissonForm::LatticeRight => "lattice-right",
            PoissonForm::InverseLeft => "inverse-left",
            PoissonForm::InverseRight => "inverse-right",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GeoftError::InvalidInput(format!("unknown Poisson form `{s}`")))
    }
}

/// Truncation radii; `None` means "certify automatically".
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Radii {
    pub space: Option<f64>,
    pub frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonReport {
    pub form: String,
    #[serde(with = "crate::fields::complex_pair")]
    pub lhs: Complex64,
    #[serde(with = "crate::fields::complex_pair")]
    pub rhs: Complex64,
    pub abs_gap: f64,
    /// `[space, frequency]`.
    pub radii: [f64; 2],
    pub point_counts: [usize; 2],
    pub tail_bounds: [f64; 2],
}

/// The frequency-side sum `weight · Σ_{v ∈ P(Zⁿ)} T(v) · e^{2πi·phase(v)}`.
struct DualSum {
    lattice: Lattice,
    summand: GaussianFunction,
    weight: f64,
    phase: Box<dyn Fn(&[f64]) -> f64 + Sync>,
}

/// Both sides of the chosen Poisson identity for the Gaussian `f`, lattice
/// `L = G(Zⁿ)` and shift `x`. Radii not supplied are certified so that each
/// discarded tail is below `tol`; supplied radii whose tail bound exceeds
/// `tol` are rejected.
pub fn poisson_check(
    f: &GaussianFunction,
    l: &Lattice,
    x: &[f64],
    form: PoissonForm,
    radii: Radii,
    tol: f64,
) -> Result<PoissonReport> {
    let n = l.dim();
    if f.dim() != n || x.len() != n {
        return Err(GeoftError::DimensionMismatch {
            expected: n,
            got: if f.dim() != n { f.dim() } else { x.len() },
        });
    }
    let g = l.generator().clone();
    let xv = x.to_vec();
    let integers = Lattice::integer(n);

    let (space_lattice, dual) = match form {
        PoissonForm::Classical => {
            let dual = l.dual();
            let xv = xv.clone();
            (
                l.clone(),
                DualSum {
                    lattice: dual,
                    summand: f.classical_ft(),
                    weight: 1.0 / l.det(),
                    phase: Box::new(move |m| linalg::dot(&xv, m)),
                },
            )
        }
        PoissonForm::LeftB | PoissonForm::LatticeLeft => {
            let pair = structure_from_lattice(&g)?;
            let space = if form == PoissonForm::LatticeLeft {
                lattices_from_structure(&pair).0
            } else {
                l.clone()
            };
            let summand = f.geometric_ft(&pair, Side::Left);
            let weight = pair.abs_det_b();
            (
                space,
                DualSum {
                    lattice: integers,
                    summand,
                    weight,
                    phase: Box::new(move |k| pair.form(k, &xv)),
                },
            )
        }
        PoissonForm::RightOpposite => {
            let op = structure_from_lattice(&g)?.opposite();
            let summand = f.geometric_ft(&op, Side::Right);
            let weight = op.abs_det_b();
            (
                l.clone(),
                DualSum {
                    lattice: integers,
                    summand,
                    weight,
                    phase: Box::new(move |k| op.form(&xv, k)),
                },
            )
        }
        PoissonForm::LatticeRight => {
            let pair = structure_from_lattice(&g.transpose())?;
            let space = lattices_from_structure(&pair).1;
            let summand = f.geometric_ft(&pair, Side::Right);
            let weight = pair.abs_det_b();
            (
                space,
                DualSum {
                    lattice: integers,
                    summand,
                    weight,
                    phase: Box::new(move |k| pair.form(&xv, k)),
                },
            )
        }
        PoissonForm::InverseLeft => {
            let op = structure_from_lattice(&g)?.opposite();
            let summand = f.inverse_geometric_ft(&op, Side::Left);
            (
                l.clone(),
                DualSum {
                    lattice: integers,
                    summand,
                    weight: 1.0,
                    phase: Box::new(move |k| -op.form(&xv, k)),
                },
            )
        }
        PoissonForm::InverseRight => {
            let pair = structure_from_lattice(&g)?;
            let summand = f.inverse_geometric_ft(&pair, Side::Right);
            (
                l.clone(),
                DualSum {
                    lattice: integers,
                    summand,
                    weight: 1.0,
                    phase: Box::new(move |k| -pair.form(k, &xv)),
                },
            )
        }
    };

    let (rs, tail_s) = resolve_radius(f, &space_lattice, radii.space, tol)?;
    let (rf, tail_f) = resolve_radius(&dual.summand, &dual.lattice, radii.frequency, tol)?;

    let space_pts = enumerate_shifted(&space_lattice, rs, x)?;
    let lhs_terms: Vec<Complex64> = space_pts
        .par_iter()
        .map(|(_, p)| {
            let v: Vec<f64> = p.iter().zip(x).map(|(a, b)| a + b).collect();
            f.eval_unchecked(&v)
        })
        .collect();
    let lhs = linalg::pairwise_sum(&lhs_terms);

    let freq_pts = enumerate_shifted(&dual.lattice, rf, &vec![0.0; n])?;
    let rhs_terms: Vec<Complex64> = freq_pts
        .par_iter()
        .map(|(_, v)| dual.summand.eval_unchecked(v) * linalg::cis_turns((dual.phase)(v)))
        .collect();
    let rhs = linalg::pairwise_sum(&rhs_terms) * dual.weight;

    Ok(PoissonReport {
        form: form.name().to_string(),
        lhs,
        rhs,
        abs_gap: (lhs - rhs).norm(),
        radii: [rs, rf],
        point_counts: [space_pts.len(), freq_pts.len()],
        tail_bounds: [tail_s, tail_f],
    })
}

fn resolve_radius(g: &GaussianFunction, lattice: &Lattice, given: Option<f64>, tol: f64) -> Result<(f64, f64)> {
    match given {
        Some(r) => {
            let bound = gaussian_tail_bound(g, lattice, r);
            if bound > tol {
                return Err(GeoftError::TailBoundViolated { bound, tol });
            }
            Ok((r, bound))
        }
        None => {
            let r = certified_radius(g, lattice, tol);
            Ok((r, gaussian_tail_bound(g, lattice, r)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_from_lattice_cases() {
        let p = structure_from_lattice(&linalg::identity(2)).unwrap();
        assert_eq!(p.m(), &linalg::identity(2));
        let p = structure_from_lattice(&Mat::from_element(1, 1, 2.0)).unwrap();
        assert_eq!(p.m()[(0, 0)], 0.5);
        assert_eq!(p.det_b(), 0.5);
        let g = linalg::mat_from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let p = structure_from_lattice(&g).unwrap();
        let want = linalg::mat_from_rows(&[vec![1.0, -1.0], vec![0.0, 1.0]]).unwrap();
        assert!(linalg::max_abs(&(p.m() - &want)) < 1e-15);
        assert!(linalg::max_abs(&(p.m() * &g - linalg::identity(2))) < 1e-15);
        assert!(structure_from_lattice(&Mat::zeros(2, 2)).is_err());
    }

    #[test]
    fn lattices_from_structure_cases() {
        let sym = GeometricPair::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let (l, r) = lattices_from_structure(&sym);
        assert!(linalg::max_abs(&(l.generator() - r.generator())) < 1e-15);
        let j = GeometricPair::new(GeometricStructure::symplectic(1)).unwrap();
        let (l, r) = lattices_from_structure(&j);
        // Bᵀ = -B spans the same lattice
        assert_eq!(l.generator(), &(-r.generator()));
        let p = GeometricPair::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let (l, r) = lattices_from_structure(&p);
        let b = linalg::mat_from_rows(&[vec![0.5, -0.5], vec![0.0, 1.0]]).unwrap();
        assert!(linalg::max_abs(&(l.generator() - &b)) < 1e-15);
        assert_eq!(r.generator(), &l.generator().transpose());
        assert!((l.det() - 1.0 / p.abs_det_b()).abs() < 1e-15);
    }

    #[test]
    fn enumeration_cases() {
        let z = Lattice::integer(1);
        let pts = enumerate_points(&z, 2.5).unwrap();
        assert_eq!(pts, vec![vec![-2.0], vec![-1.0], vec![0.0], vec![1.0], vec![2.0]]);
        let two = Lattice::from_rows(&[vec![2.0]]).unwrap();
        assert_eq!(enumerate_points(&two, 3.0).unwrap(), vec![vec![-2.0], vec![0.0], vec![2.0]]);

        let g = Lattice::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let pts = enumerate_points(&g, 1.1).unwrap();
        let mut brute = Vec::new();
        for k0 in -5i64..=5 {
            for k1 in -5i64..=5 {
                let p = vec![(k0 + k1) as f64, k1 as f64];
                if linalg::norm2(&p) <= 1.1 {
                    brute.push(p);
                }
            }
        }
        assert_eq!(pts, brute);
        assert_eq!(pts.len(), 5);

        assert!(matches!(
            enumerate_points(&Lattice::integer(3), 1000.0),
            Err(GeoftError::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn dual_determinant() {
        let g = Lattice::from_rows(&[vec![1.3, 0.2], vec![-0.4, 0.7]]).unwrap();
        assert!((g.dual().det() * g.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        let f = GaussianFunction::standard(1);
        let z = Lattice::integer(1);
        let r = 2.5;
        let actual: f64 = (3..60).map(|k| 2.0 * (-PI * (k * k) as f64).exp()).sum();
        assert!(gaussian_tail_bound(&f, &z, r) >= actual);
        let rc = certified_radius(&f, &z, 1e-14);
        assert!(gaussian_tail_bound(&f, &z, rc) <= 1e-14);
        assert!(rc < 6.0);
    }

    #[test]
    fn theta_value_at_zero() {
        let f = GaussianFunction::standard(1);
        let z = Lattice::integer(1);
        let r = poisson_check(&f, &z, &[0.0], PoissonForm::Classical, Radii::default(), 1e-14).unwrap();
        assert!((r.lhs.re - 1.086_434_811_213_308).abs() < 1e-12);
        assert!(r.abs_gap <= 1e-12);
        let fixed = Radii {
            space: Some(6.0),
            frequency: Some(6.0),
        };
        let r6 = poisson_check(&f, &z, &[0.0], PoissonForm::Classical, fixed, 1e-14).unwrap();
        assert!(r6.abs_gap <= 1e-12);
    }

    #[test]
    fn half_shift_gives_alternating_sum() {
        let f = GaussianFunction::standard(1);
        let z = Lattice::integer(1);
        let r = poisson_check(&f, &z, &[0.5], PoissonForm::Classical, Radii::default(), 1e-14).unwrap();
        let lhs: f64 = (-10i32..=10).map(|k| (-PI * (k as f64 + 0.5).powi(2)).exp()).sum();
        let rhs: f64 = (-10i32..=10)
            .map(|m| if m % 2 == 0 { 1.0 } else { -1.0 } * (-PI * (m * m) as f64).exp())
            .sum();
        assert!((r.lhs.re - lhs).abs() < 1e-14);
        assert!((r.rhs.re - rhs).abs() < 1e-14);
        assert!(r.abs_gap <= 1e-12);
    }

    #[test]
    fn sparse_lattice_is_dominated_by_the_nearest_point() {
        let f = GaussianFunction::standard(1);
        let l = Lattice::from_rows(&[vec![10.0]]).unwrap();
        let x = [0.3];
        for form in PoissonForm::ALL {
            let r = poisson_check(&f, &l, &x, form, Radii::default(), 1e-14).unwrap();
            assert!(r.abs_gap <= 1e-12, "{form:?}");
            assert!((r.lhs.re - (-PI * 0.09_f64).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn classical_on_integers_is_bitwise_left_form() {
        let f = GaussianFunction::new(
            linalg::mat_from_rows(&[vec![1.1, 0.2], vec![0.2, 0.8]]).unwrap(),
            vec![0.3, -0.2],
            Complex64::new(1.0, 0.4),
            vec![0.2, -0.1],
        )
        .unwrap();
        let z = Lattice::integer(2);
        let x = [0.37, -0.81];
        let a = poisson_check(&f, &z, &x, PoissonForm::Classical, Radii::default(), 1e-14).unwrap();
        let b = poisson_check(&f, &z, &x, PoissonForm::LeftB, Radii::default(), 1e-14).unwrap();
        assert_eq!(a.lhs.re.to_bits(), b.lhs.re.to_bits());
        assert_eq!(a.rhs.re.to_bits(), b.rhs.re.to_bits());
        assert_eq!(a.rhs.im.to_bits(), b.rhs.im.to_bits());
    }

    #[test]
    fn all_forms_on_a_sheared_lattice() {
        let f = GaussianFunction::new(
            linalg::mat_from_rows(&[vec![1.1, 0.2], vec![0.2, 0.8]]).unwrap(),
            vec![0.3, -0.2],
            Complex64::new(1.0, 0.4),
            vec![0.2, -0.1],
        )
        .unwrap();
        let l = Lattice::from_rows(&[vec![1.2, 0.5], vec![-0.3, 0.9]]).unwrap();
        for x in [[0.0, 0.0], [0.41, -0.17]] {
            for form in PoissonForm::ALL {
                let r = poisson_check(&f, &l, &x, form, Radii::default(), 1e-14).unwrap();
                assert!(r.abs_gap <= 1e-10, "{form:?}: {}", r.abs_gap);
            }
        }
    }

    #[test]
    fn insufficient_radius_is_rejected() {
        let f = GaussianFunction::standard(1);
        let z = Lattice::integer(1);
        let small = Radii {
            space: Some(1.0),
            frequency: None,
        };
        assert!(matches!(
            poisson_check(&f, &z, &[0.0], PoissonForm::Classical, small, 1e-14),
            Err(GeoftError::TailBoundViolated { .. })
        ));
    }
}
