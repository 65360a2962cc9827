//! Flying spin qubits scattering off static spin qubits.
//!
//! A flying electron crossing a one-dimensional channel interacts with each
//! static spin through a Heisenberg exchange delta potential `J σ_f·σ_s`.
//! The transmission probability depends on the static spins' state (for two
//! qubits, on `⟨σ₁·σ₂⟩`), which makes transmission a readout channel: with a
//! handful of single- and two-qubit gates, or with polarized injection or
//! detection, the full density matrix can be reconstructed from transmission
//! counts alone.
//!
//! Modules:
//!
//! - [`qmat`]: dense complex matrices, Pauli bases, density matrices.
//! - [`scatter`]: scattering blocks for frozen spins and qubit impurities,
//!   cascade composition, transmission probabilities and closed forms.
//! - [`gates`]: gates, gate sequences, Schrödinger/Heisenberg conjugation.
//! - [`tomo`]: measurement settings, shot sampling, design matrices and
//!   reconstruction (single qubit, two qubit, pure state).
//! - [`engine`]: the reflection-channel heat-engine cycle.
//! - [`cli`]: the file-based front end used by the `flyqubit` binary.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`.

pub mod cli;
pub mod engine;
mod error;
pub mod gates;
pub mod qmat;
pub mod scatter;
pub mod tomo;
pub mod validate;

pub use error::{Error, Result};
