//! A catalog of named numerical checks, one per identity, each comparing two
//! independently computed sides on seeded random inputs.

mod checks;
mod support;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeoftError, Result};
use checks::{Ctx, Runner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Closed forms and exact algebra.
    Analytic,
    /// Direct sums or FFTs on truncated grids and lattices.
    Quadrature,
    /// Spectral operators on periodic grids.
    PeriodicSpectral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub id: String,
    /// The identity being checked, in symbols.
    pub formula: String,
    /// Description of the random inputs: case count and dimensions.
    pub inputs: serde_json::Value,
    pub tolerance: f64,
    pub backend: Backend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    /// `max |lhs|` for the worst case (or the scalar value).
    pub lhs_summary: f64,
    pub rhs_summary: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest residual per id prefix (the part before the first dot).
    pub max_residual_by_prefix: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

struct Entry {
    id: &'static str,
    formula: &'static str,
    tolerance: f64,
    backend: Backend,
    cases: usize,
    dims: &'static [usize],
    run: Runner,
}

impl Entry {
    fn spec(&self) -> CheckSpec {
        CheckSpec {
            id: self.id.into(),
            formula: self.formula.into(),
            inputs: serde_json::json!({ "cases": self.cases, "dims": self.dims }),
            tolerance: self.tolerance,
            backend: self.backend,
        }
    }
}

use Backend::{Analytic as A, PeriodicSpectral as P, Quadrature as Q};

const D2: &[usize] = &[2];
const D12: &[usize] = &[1, 2];
const D123: &[usize] = &[1, 2, 3];
const D24: &[usize] = &[2, 4];

macro_rules! entry {
    ($id:expr, $formula:expr, $tol:expr, $backend:expr, $cases:expr, $dims:expr, $run:path) => {
        Entry {
            id: $id,
            formula: $formula,
            tolerance: $tol,
            backend: $backend,
            cases: $cases,
            dims: $dims,
            run: $run,
        }
    };
}

static CATALOG: &[Entry] = &[
    entry!("relb.pair", "b(e_i, B e_j) = δ_ij, det b · det B = 1", 1e-12, A, 50, D123, checks::relb_pair),
    entry!("adjoint.lr", "b(x, Ay) = b(A^L x, y), b(Ax, y) = b(x, A^R y)", 1e-12, A, 30, D123, checks::adjoint_lr),
    entry!("gb.group", "A B Aᵀ = B, |det A| = 1 for A ∈ G_b", 1e-10, A, 20, D2, checks::gb_group),
    entry!("gb.lie", "X B + B Xᵀ = 0 for X in the computed basis of g_b", 1e-10, A, 8, D2, checks::gb_lie),
    entry!("gradient.lr", "∇^L = Bᵀ B⁻¹ ∇^R", 1e-10, P, 6, D12, checks::gradient_lr),
    entry!("deltaa.skew", "Δ_b = 0 for skew b", 1e-10, P, 6, D24, checks::deltaa_skew),
    entry!("deltaa.operator", "Δ_b^m spectral = Δ_b^m analytic", 1e-8, P, 6, D12, checks::deltaa_operator),
    entry!("timpor.equivariance", "Δ_b^m(τ_A f) = τ_A(Δ_b^m f), A ∈ G_b", 1e-7, A, 12, D123, checks::timpor_equivariance),
    entry!("teo2.i", "F^L_b = τ_{Bᵀ} F", 1e-9, Q, 6, D12, checks::teo2_i),
    entry!("teo2.ii", "F^R_b = τ_B F", 1e-9, Q, 6, D12, checks::teo2_ii),
    entry!("teo2.i.fft", "F^L_b by FFT on Bᵀ-sheared lattice = direct sum", 1e-10, Q, 20, D12, checks::teo2_i_fft),
    entry!("teo2.ii.fft", "F^R_b by FFT on B-sheared lattice = direct sum", 1e-10, Q, 20, D12, checks::teo2_ii_fft),
    entry!("teo2.iii", "F^R_b = τ_{B B⁻ᵀ} F^L_b", 1e-9, Q, 6, D12, checks::teo2_iii),
    entry!("teo2.iv", "(F^{L/R}_b)⁻¹ F^{L/R}_b f = f", 1e-8, Q, 6, D12, checks::teo2_iv),
    entry!(
        "teo2.v",
        "(F^L)⁻¹ = F τ_{-B⁻ᵀ} = |det b| τ_{-B} F = τ_{B⁻ᵀ} F^L τ_{-B⁻ᵀ} = |det b| τ_{-I} F^R",
        1e-9, Q, 6, D12, checks::teo2_v
    ),
    entry!(
        "teo2.vi",
        "(F^R)⁻¹ = F τ_{-B⁻¹} = |det b| τ_{-Bᵀ} F = τ_{B⁻¹} F^R τ_{-B⁻¹} = |det b| τ_{-I} F^L",
        1e-9, Q, 6, D12, checks::teo2_vi
    ),
    entry!("teo2.vii", "F^{L/R}_{-b} = τ_{-I} F^{L/R}_b = |det b|⁻¹ (F^{R/L}_b)⁻¹", 1e-9, Q, 6, D12, checks::teo2_vii),
    entry!("invFTT.left", "(F^L_b)⁻¹ F^L_b f = f, direct inverse sum", 1e-8, Q, 4, D12, checks::invftt_left),
    entry!("invFTT.right", "(F^R_b)⁻¹ F^R_b f = f, direct inverse sum", 1e-8, Q, 4, D12, checks::invftt_right),
    entry!("proplr.left", "F^L_b f(ξ) = F f(Mᵀ ξ) on the whole lattice", 1e-8, Q, 6, D12, checks::proplr_left),
    entry!("proplr.right", "F^R_b f(ξ) = F f(M ξ) on the whole lattice", 1e-8, Q, 6, D12, checks::proplr_right),
    entry!("fop.i", "F^L_b = F^R_{b^op}", 1e-12, Q, 6, D12, checks::fop_i),
    entry!("fop.ii", "b symmetric: F^L_b = F^R_b; b Euclidean: F^L_b = F", 1e-12, Q, 6, D12, checks::fop_ii),
    entry!("fop.iii", "b skew: F^L_b = F^R_{-b}", 1e-12, Q, 4, D2, checks::fop_iii),
    entry!("sym.i", "b symmetric ⇒ F^L_b = F^R_b", 1e-10, Q, 6, D12, checks::sym_i),
    entry!("sym.i.witness", "b not symmetric ⇒ F^L_b ≠ F^R_b (gap ≥ 1e-3)", 1.0, Q, 1, D2, checks::sym_i_witness),
    entry!("sym.ii", "b skew ⇒ F^{L/R}_b = |det b|⁻¹ (F^{L/R}_b)⁻¹", 1e-10, Q, 4, D2, checks::sym_ii),
    entry!("sym.ii.witness", "b not skew ⇒ F^L_b ≠ |det b|⁻¹ (F^L_b)⁻¹ (gap ≥ 1e-3)", 1.0, Q, 1, D2, checks::sym_ii_witness),
    entry!("sym.iii", "b skew ⇒ F^{L/R}_b = F^{R/L}_{-b}", 1e-10, Q, 4, D2, checks::sym_iii),
    entry!("sym.iii.witness", "b not skew ⇒ F^L_b ≠ F^R_{-b} (gap ≥ 1e-3)", 1.0, Q, 1, D2, checks::sym_iii_witness),
    entry!("ginvFT.forward", "F^{L/R}_b τ_A = τ_A F^{L/R}_b, A ∈ G_b", 1e-8, Q, 6, D12, checks::ginvft_forward),
    entry!("ginvFT.inverse", "(F^{L/R}_b)⁻¹ τ_A = τ_A (F^{L/R}_b)⁻¹, A ∈ G_b", 1e-8, Q, 6, D12, checks::ginvft_inverse),
    entry!("ginvFT.invariant", "f = e^{-π b(x,x)} ⇒ F^{±1} f is G_b-invariant", 1e-8, Q, 4, D12, checks::ginvft_invariant),
    entry!("complex.conj", "conj(F^{L/R}_b f) = τ_{-I} F^{L/R}_b conj f = F^{L/R}_{-b} conj f", 1e-9, Q, 6, D12, checks::complex_conj),
    entry!("L2.duality", "⟨F^{L/R} f, g⟩ = ⟨f, F^{R/L} g⟩", 1e-7, Q, 4, D12, checks::l2_duality),
    entry!("L2.parseval", "(f, g) = |det b| (F^{L/R} f, F^{L/R} g)", 1e-7, Q, 4, D12, checks::l2_parseval),
    entry!("L2.plancherel", "‖f‖² = |det b| ‖F^{L/R} f‖²", 1e-7, Q, 4, D12, checks::l2_plancherel),
    entry!("L2.inverse-duality", "⟨(F^{L/R})⁻¹ f, g⟩ = ⟨f, (F^{R/L})⁻¹ g⟩", 1e-7, Q, 4, D12, checks::l2_inverse_duality),
    entry!("L2.inverse-parseval", "(f, g) = |det b|⁻¹ ((F^{L/R})⁻¹ f, (F^{L/R})⁻¹ g)", 1e-7, Q, 4, D12, checks::l2_inverse_parseval),
    entry!("L2.inverse-plancherel", "‖f‖² = |det b|⁻¹ ‖(F^{L/R})⁻¹ f‖²", 1e-7, Q, 4, D12, checks::l2_inverse_plancherel),
    entry!("L2.norm", "‖F^{L/R} f‖² = |det b|⁻¹ ‖f‖², right side exact", 1e-7, Q, 4, D12, checks::l2_norm),
    entry!("staFT.i", "F^{L/R}(f ⋆ g) = F^{L/R} f · F^{L/R} g", 1e-6, Q, 4, D12, checks::staft_i),
    entry!("staFT.ii", "F^{L/R}(f g) = |det b| F^{L/R} f ⋆ F^{L/R} g", 1e-6, Q, 4, D12, checks::staft_ii),
    entry!("staFTI.i", "(F^{L/R})⁻¹(f ⋆ g) = |det b|⁻¹ (F^{L/R})⁻¹ f · (F^{L/R})⁻¹ g", 1e-6, Q, 4, D12, checks::stafti_i),
    entry!("staFTI.ii", "(F^{L/R})⁻¹(f g) = (F^{L/R})⁻¹ f ⋆ (F^{L/R})⁻¹ g", 1e-6, Q, 4, D12, checks::stafti_ii),
    entry!("transF.i", "F^L[f(·+h)](ξ) = F^L f(ξ) e^{2πi b(ξ,h)}", 1e-8, Q, 6, D12, checks::transf_i),
    entry!("transF.ii", "F^R[f(·+h)](ξ) = F^R f(ξ) e^{2πi b(h,ξ)}", 1e-8, Q, 6, D12, checks::transf_ii),
    entry!("transF.iii", "F^L[f e^{-2πi b(h,·)}](ξ) = F^L f(ξ+h)", 1e-8, Q, 6, D12, checks::transf_iii),
    entry!("transF.iv", "F^R[f e^{-2πi b(·,h)}](ξ) = F^R f(ξ+h)", 1e-8, Q, 6, D12, checks::transf_iv),
    entry!("transF.v", "F^{L/R}[f(λ·)](ξ) = λ^{-n} F^{L/R} f(ξ/λ)", 1e-8, Q, 6, D12, checks::transf_v),
    entry!("transFI.i", "(F^R)⁻¹[f(·+h)](x) = (F^R)⁻¹ f(x) e^{-2πi b(x,h)}", 1e-8, Q, 6, D12, checks::transfi_i),
    entry!("transFI.ii", "(F^L)⁻¹[f(·+h)](x) = (F^L)⁻¹ f(x) e^{-2πi b(h,x)}", 1e-8, Q, 6, D12, checks::transfi_ii),
    entry!("transFI.iii", "(F^R)⁻¹[f e^{2πi b(h,·)}](x) = (F^R)⁻¹ f(x+h)", 1e-8, Q, 6, D12, checks::transfi_iii),
    entry!("transFI.iv", "(F^L)⁻¹[f e^{2πi b(·,h)}](x) = (F^L)⁻¹ f(x+h)", 1e-8, Q, 6, D12, checks::transfi_iv),
    entry!("transFI.v", "(F^{L/R})⁻¹[f(λ·)](x) = λ^{-n} (F^{L/R})⁻¹ f(x/λ)", 1e-8, Q, 6, D12, checks::transfi_v),
    entry!("simpor.i", "F^L(∂_j^α f)(ξ) = (2πi (Mᵀξ)_j)^α F^L f(ξ)", 1e-8, Q, 4, D12, checks::simpor_i),
    entry!("simpor.ii", "F^R(∂_j^α f)(ξ) = (2πi (Mξ)_j)^α F^R f(ξ)", 1e-8, Q, 4, D12, checks::simpor_ii),
    entry!("simpor.iii", "(F^L)⁻¹(∂_j^α f)(x) = (-2πi (Mx)_j)^α (F^L)⁻¹ f(x)", 1e-8, Q, 4, D12, checks::simpor_iii),
    entry!("simpor.iv", "(F^R)⁻¹(∂_j^α f)(x) = (-2πi (Mᵀx)_j)^α (F^R)⁻¹ f(x)", 1e-8, Q, 4, D12, checks::simpor_iv),
    entry!("simpor.v", "∂_j^α F^L f = F^L((-2πi (Mx)_j)^α f)", 1e-8, Q, 4, D12, checks::simpor_v),
    entry!("simpor.vi", "∂_j^α F^R f = F^R((-2πi (Mᵀx)_j)^α f)", 1e-8, Q, 4, D12, checks::simpor_vi),
    entry!("simpor.vii", "∂_j^α (F^L)⁻¹ f = (F^L)⁻¹((2πi (Mᵀξ)_j)^α f)", 1e-8, Q, 4, D12, checks::simpor_vii),
    entry!("simpor.viii", "∂_j^α (F^R)⁻¹ f = (F^R)⁻¹((2πi (Mξ)_j)^α f)", 1e-8, Q, 4, D12, checks::simpor_viii),
    entry!("plane.eigen", "Δ_b e^{±2πi b(x,ξ)} = -4π² b(ξ,ξ) e^{±2πi b(x,ξ)}", 1e-10, P, 10, D12, checks::plane_eigen),
    entry!("mLap.forward", "F^{L/R}(Δ_b^m f)(ξ) = [-4π² b(ξ,ξ)]^m F^{L/R} f(ξ)", 1e-10, P, 6, D12, checks::mlap_forward),
    entry!("mLap.inverse", "(F^{L/R})⁻¹(Δ_b^m f)(x) = [-4π² b(x,x)]^m (F^{L/R})⁻¹ f(x)", 1e-10, P, 6, D12, checks::mlap_inverse),
    entry!("mLap.quadrature", "F^{±1}(Δ_b^m f) = [-4π² b(p,p)]^m F^{±1} f, analytic Δ_b^m", 1e-7, Q, 4, D12, checks::mlap_quadrature),
    entry!("mLap.group", "F^{±1}(Δ_b^m τ_A f) = [-4π² b(p,p)]^m τ_A F^{±1} f, A ∈ G_b", 1e-7, Q, 4, D12, checks::mlap_group),
    entry!("RTR.m0", "∫|f|² = |det b| ∫|F^{L/R} f|²", 1e-6, Q, 4, D12, checks::rtr_m0),
    entry!("RTR.m1", "∫|Δ_b f|² = (2π)⁴ |det b| ∫ b(ξ,ξ)² |F^{L/R} f|²", 1e-6, Q, 4, D12, checks::rtr_m1),
    entry!("poisson.classical", "Σ_{L} f(x+λ) = |det L|⁻¹ Σ_{L*} F f(m) e^{2πi⟨x,m⟩}", 1e-10, Q, 20, D123, checks::poisson_classical),
    entry!("poisson.PoiL", "Σ_{L} f(x+λ) = |det b| Σ_{Zⁿ} F^L_b f(ξ) e^{2πi b(ξ,x)}, B = G", 1e-10, Q, 20, D123, checks::poisson_left_b),
    entry!("poisson.PoiR", "Σ_{L} f(x+λ) = |det b^op| Σ_{Zⁿ} F^R_{b^op} f(ξ) e^{2πi b^op(x,ξ)}", 1e-10, Q, 20, D123, checks::poisson_right_opposite),
    entry!("poisson.PL", "Σ_{B Zⁿ} f(x+λ) = |det b| Σ_{Zⁿ} F^L_b f(ξ) e^{2πi b(ξ,x)}", 1e-10, Q, 20, D123, checks::poisson_lattice_left),
    entry!("poisson.PR", "Σ_{Bᵀ Zⁿ} f(x+λ) = |det b| Σ_{Zⁿ} F^R_b f(ξ) e^{2πi b(x,ξ)}", 1e-10, Q, 20, D123, checks::poisson_lattice_right),
    entry!("poisson.inverse-left", "Σ_{L} f(ξ+λ) = Σ_{Zⁿ} (F^L_{b^op})⁻¹ f(x) e^{-2πi b^op(ξ,x)}", 1e-10, Q, 20, D123, checks::poisson_inverse_left),
    entry!("poisson.inverse-right", "Σ_{L} f(ξ+λ) = Σ_{Zⁿ} (F^R_b)⁻¹ f(x) e^{-2πi b(x,ξ)}", 1e-10, Q, 20, D123, checks::poisson_inverse_right),
    entry!("poisson.dual", "Gᵀ G* = I, det L · det L* = 1", 1e-12, A, 20, D123, checks::poisson_dual),
    entry!("frac.leqr", "(-Δ_b)^s f: left = right = classical path", 1e-12, P, 12, D12, checks::frac_paths),
    entry!("frac.clasfl", "(-Δ_b)^s e^{2πi⟨m,x⟩} = (4π²⟨m,Bm⟩)^s e^{2πi⟨m,x⟩}", 1e-12, P, 12, D12, checks::frac_plane),
    entry!("frac.integer", "(-Δ_b)^{1/2} (-Δ_b)^{1/2} f = -Δ_b f", 1e-12, P, 6, D12, checks::frac_integer),
    entry!("frac.semigroup", "(-Δ_b)^t (-Δ_b)^s = (-Δ_b)^{s+t}", 1e-12, P, 6, D12, checks::frac_semigroup),
    entry!("frac.linearity", "(-Δ_b)^s(μf + νg) = μ(-Δ_b)^s f + ν(-Δ_b)^s g", 1e-13, P, 6, D12, checks::frac_linearity),
    entry!("frac.derivative", "∂_j^α (-Δ_b)^s = (-Δ_b)^s ∂_j^α", 1e-12, P, 6, D12, checks::frac_derivative),
    entry!("frac.translation", "(-Δ_b)^s T_h = T_h (-Δ_b)^s", 1e-12, P, 6, D12, checks::frac_translation),
    entry!("frac.scaling", "(-Δ_b)^s δ_λ = λ^{2s} δ_λ (-Δ_b)^s", 1e-12, P, 6, D12, checks::frac_scaling),
    entry!("frac.homogeneity", "m_s(λξ) = |λ|^{2s} m_s(ξ)", 1e-13, A, 30, D12, checks::frac_homogeneity),
    entry!("frac.ibp", "∫ ((-Δ_b)^s f) g = ∫ f (-Δ_b)^s g", 1e-11, P, 6, D12, checks::frac_ibp),
    entry!("frac.l2", "‖(-Δ_b)^s f‖² = (2π)^{4s} |det b| ∫ b(ξ,ξ)^{2s} |F^{L/R} f|²", 1e-8, P, 6, D12, checks::frac_l2),
    entry!("frac.psd", "Re ⟨(-Δ_b)^s f, f⟩ ≥ 0", 1e-12, P, 6, D12, checks::frac_psd),
    entry!("frac.equivariance", "(-Δ_b)^s τ_A = τ_A (-Δ_b)^s, A ∈ G_b", 1e-7, Q, 4, D12, checks::frac_equivariance),
];

/// The full catalog, in a fixed order.
pub fn catalog() -> Vec<CheckSpec> {
    CATALOG.iter().map(Entry::spec).collect()
}

/// FNV-1a, so that each check draws from its own stream.
fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn run_entry(e: &Entry, seed: u64, timings: bool) -> Result<CheckReport> {
    let rng = support::Rand::seed_from_u64(seed ^ fnv1a(e.id));
    let mut ctx = Ctx::new(rng, e.cases, e.dims);
    let start = Instant::now();
    (e.run)(&mut ctx).map_err(|err| GeoftError::PreconditionFailed {
        id: e.id.into(),
        source: Box::new(err),
    })?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let (lhs, rhs, residual) = ctx.worst();
    Ok(CheckReport {
        id: e.id.into(),
        lhs_summary: lhs,
        rhs_summary: rhs,
        residual,
        tolerance: e.tolerance,
        passed: residual <= e.tolerance,
        runtime_ms: timings.then_some(elapsed),
        error: None,
        seed,
    })
}

fn find(id: &str) -> Result<&'static Entry> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| GeoftError::UnknownCheck(id.into()))
}

/// Runs one check. Failures of the underlying computation are reported as
/// `PreconditionFailed` carrying the check id.
pub fn run_check(spec: &CheckSpec, seed: u64) -> Result<CheckReport> {
    let e = find(&spec.id)?;
    let mut r = run_entry(e, seed, false)?;
    // a caller-supplied tolerance decides the verdict
    r.tolerance = spec.tolerance;
    r.passed = r.residual <= spec.tolerance;
    Ok(r)
}

fn prefix(id: &str) -> &str {
    id.split('.').next().unwrap_or(id)
}

/// Whether `id` is selected by `filter`: an exact id, or a prefix ending at
/// a dot boundary (`teo2` selects `teo2.i` but not `teo20.x`).
fn selected(id: &str, filter: &[String]) -> bool {
    filter.is_empty()
        || filter.iter().any(|f| {
            id == f || (id.starts_with(f.as_str()) && (f.ends_with('.') || id[f.len()..].starts_with('.')))
        })
}

/// Runs every selected check (all when `filter` is empty). A filter that
/// matches nothing yields an empty, successful report. Computation errors
/// become failed reports rather than aborting the suite.
pub fn run_suite(filter: &[String], seed: u64, timings: bool) -> SuiteReport {
    let chosen: Vec<&Entry> = CATALOG.iter().filter(|e| selected(e.id, filter)).collect();
    let reports: Vec<CheckReport> = chosen
        .par_iter()
        .map(|e| {
            run_entry(e, seed, timings).unwrap_or_else(|err| CheckReport {
                id: e.id.into(),
                lhs_summary: f64::NAN,
                rhs_summary: f64::NAN,
                residual: f64::INFINITY,
                tolerance: e.tolerance,
                passed: false,
                runtime_ms: None,
                error: Some(err.to_string()),
                seed,
            })
        })
        .collect();
    let mut by_prefix: BTreeMap<String, f64> = BTreeMap::new();
    for r in &reports {
        let slot = by_prefix.entry(prefix(&r.id).to_string()).or_insert(0.0);
        *slot = slot.max(r.residual);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    SuiteReport {
        summary: Summary {
            total: reports.len(),
            passed,
            failed: reports.len() - passed,
            max_residual_by_prefix: by_prefix,
        },
        reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn catalog_is_well_formed() {
        let specs = catalog();
        let mut ids = HashSet::new();
        for s in &specs {
            assert!(ids.insert(s.id.clone()), "duplicate id {}", s.id);
            assert!(!s.formula.trim().is_empty(), "{}", s.id);
            assert!(s.tolerance > 0.0, "{}", s.id);
        }
    }

    #[test]
    fn filter_matches_on_dot_boundaries() {
        let f = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert!(selected("teo2.i", &f(&["teo2"])));
        assert!(selected("teo2.i.fft", &f(&["teo2.i"])));
        assert!(!selected("teo2.ii", &f(&["teo2.i"])));
        assert!(selected("anything", &[]));
        assert!(!selected("fop.i", &f(&["frac"])));
    }

    #[test]
    fn unknown_check_and_empty_filter() {
        let spec = CheckSpec {
            id: "nope".into(),
            formula: "x".into(),
            inputs: serde_json::Value::Null,
            tolerance: 1.0,
            backend: Backend::Analytic,
        };
        assert!(matches!(run_check(&spec, 0), Err(GeoftError::UnknownCheck(_))));
        let r = run_suite(&["no-such-prefix".to_string()], 1, false);
        assert_eq!(r.summary.total, 0);
        assert!(r.all_passed());
    }

    #[test]
    fn single_check_is_deterministic() {
        let spec = catalog().into_iter().find(|s| s.id == "relb.pair").unwrap();
        let a = run_check(&spec, 7).unwrap();
        let b = run_check(&spec, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.passed);
    }
}
