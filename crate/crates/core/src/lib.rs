//! Floquet–Lyapunov analysis of `N` coupled, periodically driven quantum
//! harmonic oscillators, and closed-form statistics of the Fock, coherent
//! (intelligent) and photon-added coherent states built on top of it.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and parallel grid evaluation live in the companion
//! `floquet-pacs` crate.
//!
//! Conventions used throughout:
//!
//! * natural units, `ħ = 1`;
//! * the phase-space vector is `x = (q₁…q_N, p₁…p_N)`;
//! * the Hamiltonian is `H = ½ xᵀ S(t) x` with a symmetric `S(t)` and the
//!   classical flow is `ẋ = Π(t) x` with `Π = J S`;
//! * the integrals of motion are ordered as `Î = (Â†₁…Â†_N, Â₁…Â_N)`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod floquet;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod phase_space;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use floquet::{build_flt, monodromy_and_exponents, FloquetDecomposition, FloquetSpectrum, MonodromyAnalysis};
pub use model::{FourierMatrix, Harmonic, PeriodicConfiguration, SBlocks};
pub use phase_space::{Axis, PhaseSpaceGrid};
pub use special::MultiIndex;
pub use states::{CovarianceReport, Frame, StateFamily, StateSpec};

/// Complex scalar used by every complex-valued quantity in the crate.
pub type C64 = nalgebra::Complex<f64>;
