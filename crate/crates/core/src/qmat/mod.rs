//! Complex linear algebra, Pauli machinery and density matrices.
//!
//! Basis ordering is fixed crate-wide: tensor factors left to right, with
//! `|0⟩` the +z (spin-up) state, so a two-qubit register is ordered
//! `|00⟩, |01⟩, |10⟩, |11⟩`.

mod cmatrix;
mod density;
pub mod linalg;
mod pauli;
pub mod random;

pub use cmatrix::CMatrix;
pub use density::{
    assemble, assemble_matrix, bloch, decompose, decompose_matrix, fidelity, free_indices,
    nats_to_bits, partial_trace, project_psd, trace_distance, von_neumann_entropy, BlochVector,
    DensityMatrix, Keep, PauliCoeffs, Tolerances, HERMITIAN_TOL, PSD_TOL, TRACE_TOL,
};
pub use linalg::{eigh, inverse, Eigen};
pub use pauli::{exchange_operator, kron, n_dot_sigma, on_qubit, pauli, pauli2, spin_projector};
pub(crate) use pauli::sigma;

pub(crate) use cmatrix::{I, ONE};
