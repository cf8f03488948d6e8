//! Entanglement dynamics of two trapped ions coupled to a vibrational mode
//! through a two-phonon interaction with ac-Stark shifts, under intrinsic
//! (Milburn) decoherence.
//!
//! The pipeline is: build the effective Hamiltonian ([`model`]), propagate
//! the density operator with the spectral closed form ([`evolution`]),
//! trace out the phonons and measure negativity and concurrence
//! ([`entanglement`]), and sweep parameter grids ([`sweeper`]).

// `!(x >= 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod hilbert;
pub mod model;
pub mod numerics;
pub mod sweeper;

pub use entanglement::{concurrence, negativity, EntanglementRecord};
pub use error::{Error, Result};
pub use evolution::{evolve_series, propagate_closed_form, propagate_kraus_series, Propagator};
pub use model::ModelParams;
pub use numerics::ComplexMatrix;
pub use sweeper::{run_sweep, Preset, SweepGrid, SweepResult};
