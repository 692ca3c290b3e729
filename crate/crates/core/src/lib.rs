//! Dnoidal periodic standing waves of the cubic-quintic nonlinear Schrödinger
//! equation `i u_t + u_xx + |u|² u + |u|⁴ u = 0`.
//!
//! The crate builds the explicit positive even waves `u = e^{iωt} φ(x)` with a
//! prescribed period `L`, and checks the chain of facts that makes them
//! orbitally stable among even perturbations:
//!
//! * [`elliptic`]: complete integrals `K`, `E` and the Jacobi functions.
//! * [`wavecons`]: period map, root solve for the amplitude, profile sampling.
//! * [`curve`]: the fixed-period branch `ω ↦ φ_ω`, derivative signs and `d''(ω)`.
//! * [`hill`]: spectra of the linearized operators and the Floquet constant `θ`.
//! * [`evolve`]: split-step Fourier integration and orbital distance.

pub mod curve;
pub mod eigen;
pub mod elliptic;
pub mod error;
pub mod evolve;
pub mod hill;
pub mod spectral;
pub mod wavecons;

pub use error::{Result, WaveError};

/// Grid size used when an operation needs profiles but takes no explicit `N`.
pub const DEFAULT_GRID: usize = 256;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
