//! Truncated Fock-space toolkit for non-Gaussian two-mode entangled resources.
//!
//! A single-mode non-Gaussian state (a photon-added coherent state or an odd
//! cat state) is mixed with vacuum on a 50:50 beam splitter and then photons
//! are subtracted locally. The crate builds these resources two independent
//! ways (operator circuit and closed form) and evaluates three entanglement
//! characteristics on them:
//!
//! * degree of entanglement (von Neumann entropy of a reduced state),
//! * second-order EPR total variance,
//! * continuous-variable teleportation fidelity for coherent inputs.
//!
//! Every closed-form expression has a Fock-space numerical counterpart so the
//! two can be cross-checked.
//!
//! Beam-splitter convention: `B† a B = (a + b)/√2`, `B† b B = (b − a)/√2`, so
//! that `B (a†|0,0⟩) = (|1,0⟩ − |0,1⟩)/√2` and `B |α,0⟩ = |α/√2, −α/√2⟩`.
//! The opposite sign convention differs by the local unitary `b → −b`.

pub mod entanglement;
pub mod epr;
pub mod error;
pub mod fock;
pub mod optimize;
pub mod resources;
pub mod sweep;
pub mod table;
pub mod teleport;
pub mod validate;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default photon-number cutoff per mode.
pub const DEFAULT_CUTOFF: usize = 40;

/// Cutoff increment used to verify convergence of a reported metric.
pub const CONVERGENCE_CUTOFF_STEP: usize = 10;

/// Maximum change of a metric between `cutoff` and `cutoff + 10`.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-9;

/// Default tolerance on probability mass dropped at the truncation boundary.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;
