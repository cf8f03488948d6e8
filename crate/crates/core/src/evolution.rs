//! Propagation under the intrinsic-decoherence master equation
//!
//! ```text
//! dρ/dt = −i[H, ρ] − (γ/2)[H, [H, ρ]]
//! ```
//!
//! Two independent routes are provided.
//!
//! The production path is the spectral closed form. In the eigenbasis of
//! H (H|j⟩ = E_j|j⟩) the Kraus sum
//!
//! ```text
//! ρ(t) = Σ_m (γt)^m/m! · H^m e^{−iHt} e^{−γtH²/2} ρ(0) e^{−γtH²/2} e^{iHt} H^m
//! ```
//!
//! acts entrywise: the (j, k) element picks up
//! `e^{−i(E_j−E_k)t} · e^{−γt(E_j²+E_k²)/2} · Σ_m (γt E_j E_k)^m/m!`,
//! and the last sum is `e^{γt E_j E_k}`. Collecting exponents gives
//!
//! ```text
//! ρ̃_jk(t) = e^{−i(E_j−E_k)t} · e^{−γt(E_j−E_k)²/2} · ρ̃_jk(0).
//! ```
//!
//! Populations in the energy basis never change, and coherences between
//! distinct energies decay as Gaussians in the gap. The superoperator form
//! `e^{−iHt}e^{−γtH²/2}{e^{S t}ρ(0)}e^{−γtH²/2}e^{iHt}` with `Sρ = HρH` is the
//! same series written compactly and is not implemented separately.
//!
//! The second route sums the Kraus series term by term without any
//! eigendecomposition and serves as a cross-check.

use num_complex::Complex64;

use crate::entanglement::{concurrence, negativity, purity, EntanglementRecord};
use crate::error::{Error, Result};
use crate::hilbert::partial_trace_fock;
use crate::model::{build_effective_hamiltonian, initial_density, ModelParams};
use crate::numerics::{
    from_eigenbasis, hermitian_eigen, to_eigenbasis, ComplexMatrix, HermitianEigenDecomposition, ZERO,
};

pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 200;

/// Largest Poisson rate γδ·B² allowed in a single Kraus sub-step.
///
/// Within a step the leading factor damps the top of the spectrum by up to
/// e^{−rate} and the series restores it by e^{+rate}, so rounding between the
/// two is amplified by e^{rate}. Keeping the rate near 1 trades more steps
/// for that amplification.
const STEP_RATE: f64 = 1.0;

/// Eigendecomposition of H together with the decoherence rate.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigen: HermitianEigenDecomposition,
    gamma: f64,
    gaps: Vec<f64>,
}

impl Propagator {
    pub fn new(hamiltonian: &ComplexMatrix, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParams {
                name: "gamma",
                reason: format!("{gamma} is not a finite nonnegative rate"),
            });
        }
        let eigen = hermitian_eigen(hamiltonian)?;
        let e = &eigen.eigenvalues;
        let n = e.len();
        let mut gaps = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                gaps.push(e[j] - e[k]);
            }
        }
        Ok(Self { eigen, gamma, gaps })
    }

    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eigen(&self) -> &HermitianEigenDecomposition {
        &self.eigen
    }

    /// E_j − E_k.
    pub fn gap(&self, j: usize, k: usize) -> f64 {
        self.gaps[j * self.dim() + k]
    }

    pub fn to_energy_basis(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        to_eigenbasis(rho, &self.eigen.eigenvectors)
    }

    /// Evolves a state already expressed in the energy basis; the result is in the original basis.
    pub fn propagate_energy_basis(&self, rho_tilde: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        let evolved = self.evolve_coefficients(rho_tilde, t)?;
        let rho = from_eigenbasis(&evolved, &self.eigen.eigenvectors)?;
        Ok(hermitian_part(&rho))
    }

    /// ρ̃(t) in the energy basis.
    pub fn evolve_coefficients(&self, rho_tilde: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        let n = self.dim();
        if rho_tilde.rows() != n || rho_tilde.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rho_tilde.rows() });
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidParams { name: "time", reason: format!("{t} is negative") });
        }
        if t == 0.0 {
            return Ok(rho_tilde.clone());
        }
        Ok(rho_tilde.map(|j, k, z| {
            if j == k || z == ZERO {
                return z;
            }
            let gap = self.gap(j, k);
            let decay = (-0.5 * self.gamma * t * gap * gap).exp();
            z * Complex64::from_polar(decay, -gap * t)
        }))
    }
}

/// Closed-form solution of the master equation at model time `t`.
pub fn propagate_closed_form(rho0: &ComplexMatrix, prop: &Propagator, t: f64) -> Result<ComplexMatrix> {
    let rho_tilde = prop.to_energy_basis(rho0)?;
    prop.propagate_energy_basis(&rho_tilde, t)
}

/// Sums the Kraus series directly.
///
/// The state is first compressed onto the smallest coordinate subspace that
/// contains its support and is invariant under H (found from the sparsity
/// pattern), which is exact. H is then shifted by the centre of its
/// Gershgorin interval; both commutators in the master equation are blind to
/// multiples of the identity, so the shifted Kraus family describes the same
/// channel with a smaller spectral radius B. The Poisson weights in the series peak near
/// m ≈ γtE², so when γt·B² is large (B a Gershgorin bound on the compressed
/// H) the interval is split into equal sub-steps and the series is applied
/// once per step; the channel is a semigroup, so this is the same map. Each
/// sub-step stops once m exceeds its Poisson rate bound and the added term's
/// Frobenius norm is below `tol / steps`. No renormalization is applied.
pub fn propagate_kraus_series(
    rho0: &ComplexMatrix,
    h: &ComplexMatrix,
    gamma: f64,
    t: f64,
    tol: f64,
    max_terms: usize,
) -> Result<ComplexMatrix> {
    let n = h.rows();
    if !h.is_square() {
        return Err(Error::DimensionMismatch { expected: h.rows(), found: h.cols() });
    }
    if rho0.rows() != n || rho0.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rho0.rows() });
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParams { name: "time", reason: format!("{t} is negative") });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParams { name: "tol", reason: format!("{tol} is not positive") });
    }
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParams { name: "gamma", reason: format!("{gamma} is negative") });
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }

    let support = invariant_support(h, rho0);
    if support.is_empty() {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let (centre, bound) = gershgorin_interval(&h.submatrix(&support));
    let hs = h.submatrix(&support).map(|i, j, z| if i == j { z - centre } else { z });
    let mut rho = rho0.submatrix(&support);

    let total_rate = gamma * t * bound * bound;
    let steps = if total_rate > STEP_RATE { (total_rate / STEP_RATE).ceil() as usize } else { 1 };
    let dt = t / steps as f64;
    let step_rate = gamma * dt * bound * bound;
    let step_tol = tol / steps as f64;

    // exp(−iH dt) exp(−γ dt H²/2); the two factors commute.
    let h2 = &hs * &hs;
    let generator = &hs.scale(Complex64::new(0.0, -dt)) + &h2.scale_real(-0.5 * gamma * dt);
    let kraus0 = expm(&generator);
    let kraus0_dag = kraus0.adjoint();

    for _ in 0..steps {
        let sigma = &(&kraus0 * &rho) * &kraus0_dag;
        rho = sum_series(&sigma, &hs, gamma * dt, step_rate, step_tol, max_terms)?;
    }
    Ok(rho.embed(&support, n))
}

/// Σ_m (γt)^m/m! H^m σ H^m.
fn sum_series(
    sigma: &ComplexMatrix,
    h: &ComplexMatrix,
    gamma_t: f64,
    rate_bound: f64,
    tol: f64,
    max_terms: usize,
) -> Result<ComplexMatrix> {
    let mut acc = sigma.clone();
    if gamma_t == 0.0 {
        return Ok(acc);
    }
    let mut term = sigma.clone();
    let mut last_norm = term.frobenius_norm();
    for m in 1..max_terms {
        term = (&(h * &term) * h).scale_real(gamma_t / m as f64);
        acc = &acc + &term;
        last_norm = term.frobenius_norm();
        if last_norm < tol && m as f64 > rate_bound {
            return Ok(acc);
        }
    }
    Err(Error::SeriesNotConverged { terms: max_terms, last_norm })
}

/// Indices reachable from the support of ρ through the nonzero pattern of H.
fn invariant_support(h: &ComplexMatrix, rho: &ComplexMatrix) -> Vec<usize> {
    let n = h.rows();
    let mut inside = vec![false; n];
    let mut stack = Vec::new();
    for i in 0..n {
        if (0..n).any(|j| rho[(i, j)] != ZERO || rho[(j, i)] != ZERO) {
            inside[i] = true;
            stack.push(i);
        }
    }
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !inside[j] && (h[(i, j)] != ZERO || h[(j, i)] != ZERO) {
                inside[j] = true;
                stack.push(j);
            }
        }
    }
    (0..n).filter(|&i| inside[i]).collect()
}

/// Centre and half-width of the union of Gershgorin discs on the real axis;
/// every eigenvalue of the Hermitian `h` lies within half-width of the centre.
fn gershgorin_interval(h: &ComplexMatrix) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..h.rows() {
        let radius: f64 = (0..h.cols()).filter(|&j| j != i).map(|j| h[(i, j)].norm()).sum();
        lo = lo.min(h[(i, i)].re - radius);
        hi = hi.max(h[(i, i)].re + radius);
    }
    (0.5 * (lo + hi), 0.5 * (hi - lo))
}

/// Matrix exponential by scaling and squaring of a Taylor series.
fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let norm1 = (0..n).map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale_real(0.5f64.powi(squarings));
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..40 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        result = &result + &term;
        if term.frobenius_norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|i, j, z| 0.5 * (z + m[(j, i)].conj()))
}

fn check_times(times: &[f64]) -> Result<()> {
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::InvalidParams { name: "time", reason: format!("{t} is not a finite nonnegative time") });
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams { name: "time", reason: "times must be ascending".into() });
    }
    Ok(())
}

/// Full-space states ρ(t) at the given scaled times, from one eigendecomposition.
pub fn evolve_states(p: &ModelParams, scaled_times: &[f64]) -> Result<Vec<ComplexMatrix>> {
    p.validate()?;
    check_times(scaled_times)?;
    let prop = Propagator::new(&build_effective_hamiltonian(p), p.gamma)?;
    let rho_tilde = prop.to_energy_basis(&initial_density(p))?;
    scaled_times.iter().map(|&s| prop.propagate_energy_basis(&rho_tilde, p.model_time(s))).collect()
}

/// Entanglement records at the given scaled times λt.
pub fn evolve_series(p: &ModelParams, scaled_times: &[f64]) -> Result<Vec<EntanglementRecord>> {
    let layout = p.layout();
    let states = evolve_states(p, scaled_times)?;
    scaled_times
        .iter()
        .zip(states)
        .map(|(&scaled_time, rho)| {
            let trace_error = (rho.trace().re - 1.0).abs();
            let reduced = partial_trace_fock(&rho, layout)?;
            Ok(EntanglementRecord {
                scaled_time,
                negativity: negativity(&reduced)?,
                concurrence: concurrence(&reduced)?,
                purity: purity(&reduced),
                trace_error,
            })
        })
        .collect()
}
