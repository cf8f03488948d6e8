//! Effective two-ion Hamiltonian with intensity-dependent Stark shifts and
//! the θ-parameterized initial state.
//!
//! Energies are in units of the coupling λ (ℏ = 1). Time is reported as
//! the scaled time λt with λ = ζ₁.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{annihilation_op, ion_op, number_op, Ion, Level, SpaceLayout};
use crate::numerics::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Stark shift multiplying â†â·S_bb on each ion.
    pub beta1: f64,
    /// Stark shift multiplying â†â·S_aa on each ion.
    pub beta2: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    /// Laser phase on the second ion, radians.
    pub phi: f64,
    /// Intrinsic decoherence rate.
    pub gamma: f64,
    /// Mixing angle of the initial ionic state.
    pub theta: f64,
    pub n_max: usize,
    /// Initial phonon number.
    pub n0: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { beta1: 0.0, beta2: 0.0, zeta1: 1.0, zeta2: 1.0, phi: 0.0, gamma: 0.0, theta: 0.0, n_max: 6, n0: 0 }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("zeta1", self.zeta1),
            ("zeta2", self.zeta2),
            ("phi", self.phi),
            ("gamma", self.gamma),
            ("theta", self.theta),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::InvalidParams { name, reason: format!("{value} is not finite") });
            }
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParams { name: "gamma", reason: format!("{} is negative", self.gamma) });
        }
        if self.n_max < self.n0 + 4 {
            return Err(Error::InvalidParams {
                name: "nmax",
                reason: format!("{} is below n0 + 4 = {}", self.n_max, self.n0 + 4),
            });
        }
        Ok(())
    }

    pub fn layout(&self) -> SpaceLayout {
        SpaceLayout::new(self.n_max)
    }

    /// λ used to scale time: ζ₁, or 1 when ζ₁ vanishes.
    pub fn time_scale(&self) -> f64 {
        if self.zeta1 != 0.0 {
            self.zeta1.abs()
        } else {
            1.0
        }
    }

    /// Converts scaled time λt to model time t.
    pub fn model_time(&self, scaled_time: f64) -> f64 {
        scaled_time / self.time_scale()
    }
}

/// Ĥ = Σᵢ â†â(β₁S_bb⁽ⁱ⁾ + β₂S_aa⁽ⁱ⁾) + ζ₁(S_ab⁽¹⁾â² + h.c.) + ζ₂(e^{iφ}S_ab⁽²⁾â² + h.c.)
pub fn build_effective_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let layout = p.layout();
    let a = annihilation_op(layout);
    let a2 = layout.embed_fock(&(&a * &a));
    let a2_dag = a2.adjoint();
    let n = layout.embed_fock(&number_op(layout));

    let mut h = ComplexMatrix::zeros(layout.dim_total(), layout.dim_total());
    for ion in [Ion::First, Ion::Second] {
        let stark = &ion_op(Level::B, Level::B, ion, layout).scale_real(p.beta1)
            + &ion_op(Level::A, Level::A, ion, layout).scale_real(p.beta2);
        h = &h + &(&n * &stark);
    }
    let couplings = [(Ion::First, Complex64::new(p.zeta1, 0.0)), (Ion::Second, Complex64::from_polar(p.zeta2, p.phi))];
    for (ion, g) in couplings {
        let lower = &ion_op(Level::A, Level::B, ion, layout) * &a2;
        let raise = &ion_op(Level::B, Level::A, ion, layout) * &a2_dag;
        h = &h + &(&lower.scale(g) + &raise.scale(g.conj()));
    }
    h
}

/// N = â†â + 2(S_aa⁽¹⁾ + S_aa⁽²⁾), conserved by the effective Hamiltonian.
pub fn excitation_operator(layout: SpaceLayout) -> ComplexMatrix {
    let n = layout.embed_fock(&number_op(layout));
    let aa = &ion_op(Level::A, Level::A, Ion::First, layout) + &ion_op(Level::A, Level::A, Ion::Second, layout);
    &n + &aa.scale_real(2.0)
}

/// (cos²θ |a,b⟩⟨a,b| + sin²θ |b,a⟩⟨b,a|) ⊗ |n0⟩⟨n0|.
pub fn initial_density(p: &ModelParams) -> ComplexMatrix {
    let layout = p.layout();
    let mut rho = ComplexMatrix::zeros(layout.dim_total(), layout.dim_total());
    let (s, c) = p.theta.sin_cos();
    let ab = layout.index(Level::A, Level::B, p.n0);
    let ba = layout.index(Level::B, Level::A, p.n0);
    rho[(ab, ab)] = Complex64::new(c * c, 0.0);
    rho[(ba, ba)] = Complex64::new(s * s, 0.0);
    rho
}

/// Stark shift ζ²/Δ from the effective coupling and the detuning.
pub fn stark_from_physical(zeta: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    Ok(zeta * zeta / delta)
}
