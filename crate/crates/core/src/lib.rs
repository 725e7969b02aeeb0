//! Gaussian-state dynamics of two coupled, asymmetric harmonic oscillators
//! damped by a thermal bath.
//!
//! The state is tracked entirely through its 4×4 covariance matrix in the
//! phase-space ordering `(x1, p1, x2, p2)`, normalized so that the vacuum
//! covariance is the identity. Natural units are used throughout
//! (`hbar = m = k_B = 1`).
//!
//! * [`model`] holds the parameter set and the initial two-mode squeezed vacuum.
//! * [`dynamics`] builds the drift and diffusion matrices, propagates the
//!   covariance matrix in closed form, solves for the steady state and
//!   provides a Runge-Kutta cross-check.
//! * [`measures`] computes symplectic invariants, purity, logarithmic
//!   negativity and Gaussian discord.
//! * [`sweep`] evolves trajectories, sweeps parameters, detects entanglement
//!   sudden death and carries the figure presets.

pub mod dynamics;
pub mod error;
pub mod measures;
pub mod model;
pub mod sweep;

pub use error::{Error, Result};
pub use measures::{CorrelationReport, LogBase, MeasureOptions, SymplecticData, ZetaBranch};
pub use model::{CovMatrix, SystemParams, ValidationReport};
