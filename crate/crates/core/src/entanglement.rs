//! Entanglement of the reduced two-qubit state.
//!
//! Negativity here is `2·max(0, −Σ negative eigenvalues of ρ^{T₂})`, which
//! equals 1 for a Bell state. Concurrence follows Wootters.
//!
//! Starting from the vacuum, the dynamics never leave
//! span{|a,b,0⟩, |b,b,2⟩, |b,a,0⟩}, and tracing out the phonons leaves an
//! X-state with zero |aa⟩ population and a single |ab⟩↔|ba⟩ coherence.
//! That gives a 3-dimensional oracle for the full-space pipeline.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{partial_transpose, Ion, Level, SpaceLayout};
use crate::model::ModelParams;
use crate::numerics::{hermitian_eigen, ComplexMatrix, HermitianEigenDecomposition, ZERO};

/// PT eigenvalues in (−NEGATIVE_EIGEN_THRESHOLD, 0) count as zero; so do concurrences below it.
pub const NEGATIVE_EIGEN_THRESHOLD: f64 = 1e-12;
pub const STATE_TOLERANCE: f64 = 1e-8;

/// One time sample of the reduced dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementRecord {
    pub scaled_time: f64,
    pub negativity: f64,
    pub concurrence: f64,
    /// Tr(ρ_a²) of the reduced two-qubit state.
    pub purity: f64,
    /// |Tr ρ(t) − 1| of the full state.
    pub trace_error: f64,
}

/// Checks that ρ is a 4×4 density matrix and returns its spectrum.
fn validate_two_qubit(rho4: &ComplexMatrix) -> Result<HermitianEigenDecomposition> {
    if rho4.rows() != 4 || rho4.cols() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho4.rows() });
    }
    if !rho4.is_finite() {
        return Err(Error::InvalidState("non-finite entries".into()));
    }
    let defect = rho4.hermiticity_defect();
    if defect > STATE_TOLERANCE {
        return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
    }
    let tr = rho4.trace().re;
    if (tr - 1.0).abs() > STATE_TOLERANCE {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let eigen = hermitian_eigen(rho4)?;
    let min = eigen.eigenvalues[0];
    if min < -STATE_TOLERANCE {
        return Err(Error::InvalidState(format!("smallest eigenvalue {min:.3e} is negative")));
    }
    Ok(eigen)
}

/// Eigenvalues of the partial transpose over qubit 2, ascending.
pub fn partial_transpose_spectrum(rho4: &ComplexMatrix) -> Result<Vec<f64>> {
    let pt = partial_transpose(rho4, Ion::Second)?;
    Ok(hermitian_eigen(&pt)?.eigenvalues)
}

pub fn negativity(rho4: &ComplexMatrix) -> Result<f64> {
    validate_two_qubit(rho4)?;
    let spectrum = partial_transpose_spectrum(rho4)?;
    Ok(negativity_from_spectrum(&spectrum))
}

fn negativity_from_spectrum(spectrum: &[f64]) -> f64 {
    let negative: f64 = spectrum.iter().filter(|&&e| e < -NEGATIVE_EIGEN_THRESHOLD).sum();
    (2.0 * (-negative).max(0.0)).min(1.0)
}

/// Wootters concurrence max(0, μ₁ − μ₂ − μ₃ − μ₄).
///
/// The μᵢ are the singular values of τ = W†(σy⊗σy)W*, where ρ = WW† with
/// W = V·diag(√λ) from the spectrum of ρ; they equal the square roots of the
/// eigenvalues of ρρ̃. Reading them off the Hermitian dilation
/// [[0, τ], [τ†, 0]] (eigenvalues ±μᵢ) keeps full absolute precision for the
/// small μᵢ, which a square root of the eigenvalues of √ρ ρ̃ √ρ would not.
/// Values at or below [`NEGATIVE_EIGEN_THRESHOLD`] are reported as 0.
pub fn concurrence(rho4: &ComplexMatrix) -> Result<f64> {
    let eigen = validate_two_qubit(rho4)?;
    let roots: Vec<f64> = eigen.eigenvalues.iter().map(|e| e.max(0.0).sqrt()).collect();
    let w = eigen.eigenvectors.map(|_, j, z| z * roots[j]);
    let tau = &w.adjoint() * &spin_flip_vectors(&w.conj());
    let dilation = ComplexMatrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
        (true, false) => tau[(i, j - 4)],
        (false, true) => tau[(j, i - 4)].conj(),
        _ => ZERO,
    });
    let spectrum = hermitian_eigen(&dilation)?.eigenvalues;
    let mu: Vec<f64> = spectrum.iter().rev().take(4).map(|m| m.max(0.0)).collect();
    // same round-off floor as the negativity, so separable states report a clean zero
    let c = mu[0] - mu[1] - mu[2] - mu[3];
    Ok(if c <= NEGATIVE_EIGEN_THRESHOLD { 0.0 } else { c.min(1.0) })
}

/// (σy⊗σy) applied to each column.
fn spin_flip_vectors(m: &ComplexMatrix) -> ComplexMatrix {
    // σy⊗σy is the real anti-diagonal (−1, 1, 1, −1).
    let sign = [-1.0, 1.0, 1.0, -1.0];
    ComplexMatrix::from_fn(4, m.cols(), |i, j| m[(3 - i, j)] * sign[i])
}

/// Tr ρ².
pub fn purity(rho: &ComplexMatrix) -> f64 {
    // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
    rho.frobenius_norm().powi(2)
}

/// Negativity of an X-state with populations (aa, ab, ba, bb) and a single
/// coherence `c = ⟨ab|ρ|ba⟩`.
///
/// The partial transpose moves `c` into the {aa, bb} block, whose smaller
/// eigenvalue is `(ρ_aa + ρ_bb)/2 − √(((ρ_aa − ρ_bb)/2)² + |c|²)`. With
/// ρ_aa = 0 this gives `√(ρ_bb² + 4|c|²) − ρ_bb`.
pub fn xstate_negativity(populations: [f64; 4], coherence: Complex64) -> Result<f64> {
    let [aa, ab, ba, bb] = populations;
    if populations.iter().any(|p| !p.is_finite() || *p < -STATE_TOLERANCE) {
        return Err(Error::InvalidState(format!("populations {populations:?} are not a distribution")));
    }
    let total: f64 = populations.iter().sum();
    if (total - 1.0).abs() > STATE_TOLERANCE {
        return Err(Error::InvalidState(format!("populations sum to {total}")));
    }
    let c2 = coherence.norm_sqr();
    if c2 > ab * ba + 1e-12 {
        return Err(Error::InvalidState(format!("|c|² = {c2:.3e} exceeds ρ_ab·ρ_ba = {:.3e}", ab * ba)));
    }
    let lowest = 0.5 * (aa + bb) - (0.25 * (aa - bb).powi(2) + c2).sqrt();
    Ok(negativity_from_spectrum(&[lowest, ab, ba]))
}

/// Assembles the 4×4 X-state used by [`xstate_negativity`].
pub fn xstate_matrix(populations: [f64; 4], coherence: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::from_real_diagonal(&populations);
    m[(1, 2)] = coherence;
    m[(2, 1)] = coherence.conj();
    m
}

/// Full-space indices of the invariant basis (|a,b,0⟩, |b,b,2⟩, |b,a,0⟩).
pub fn subspace_basis(layout: SpaceLayout) -> [usize; 3] {
    [layout.index(Level::A, Level::B, 0), layout.index(Level::B, Level::B, 2), layout.index(Level::B, Level::A, 0)]
}

/// The effective Hamiltonian restricted to span{|a,b,0⟩, |b,b,2⟩, |b,a,0⟩}.
pub fn subspace_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let s2 = 2f64.sqrt();
    let g1 = Complex64::new(s2 * p.zeta1, 0.0);
    let g2 = Complex64::from_polar(s2 * p.zeta2, -p.phi);
    #[rustfmt::skip]
    let entries = vec![
        ZERO, g1,                                  ZERO,
        g1,   Complex64::new(4.0 * p.beta1, 0.0), g2,
        ZERO, g2.conj(),                           ZERO,
    ];
    ComplexMatrix::from_row_major(3, 3, entries)
}

/// A density matrix on the three-state invariant subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceState(pub ComplexMatrix);

impl SubspaceState {
    /// Populations (aa, ab, ba, bb) and the ab↔ba coherence after tracing out the phonons.
    pub fn reduced_xstate(&self) -> ([f64; 4], Complex64) {
        let m = &self.0;
        ([0.0, m[(0, 0)].re, m[(2, 2)].re, m[(1, 1)].re], m[(0, 2)])
    }
}

/// Negativity series from the three-state closed form.
pub fn oracle_negativity_series(p: &ModelParams, scaled_times: &[f64]) -> Result<Vec<(f64, f64)>> {
    if p.n0 != 0 {
        return Err(Error::UnsupportedInitialState(p.n0));
    }
    let h = subspace_hamiltonian(p);
    let prop = crate::evolution::Propagator::new(&h, p.gamma)?;
    let (s, c) = p.theta.sin_cos();
    let components = [(c * c, 0usize), (s * s, 2usize)];
    let initial: Vec<(f64, ComplexMatrix)> = components
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|&(w, k)| {
            let mut e = ComplexMatrix::zeros(3, 3);
            e[(k, k)] = Complex64::new(1.0, 0.0);
            Ok((w, prop.to_energy_basis(&e)?))
        })
        .collect::<Result<_>>()?;

    scaled_times
        .iter()
        .map(|&st| {
            let t = p.model_time(st);
            let mut rho = ComplexMatrix::zeros(3, 3);
            for (w, rho_tilde) in &initial {
                rho = &rho + &prop.propagate_energy_basis(rho_tilde, t)?.scale_real(*w);
            }
            let (pops, coh) = SubspaceState(rho).reduced_xstate();
            Ok((st, xstate_negativity(pops, coh)?))
        })
        .collect()
}
