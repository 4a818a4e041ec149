//! Complex linear algebra and state utilities for one and two qubits.
//!
//! Two-qubit operators act on control ⊗ target with composite basis index
//! `2·control + target`. Entropies are in bits.

mod density;
mod entropy;
mod matrix;
mod stokes;

pub use density::{
    partial_trace, BlochAngles, DensityMatrix, Subsystem, DENSITY_HERMITIAN_TOL, PSD_TOL, TRACE_TOL,
};
pub use entropy::{binary_entropy, spectrum_entropy, von_neumann_entropy};
pub use matrix::{
    eig_hermitian, pauli, paulis, tensor, ComplexMatrix, Spectrum, C64, HERMITIAN_TOL,
};
pub use stokes::{density_from_stokes, stokes_from_density, StokesVector, STOKES_NORM_TOL};

pub(crate) use density::partial_trace_matrix;
pub(crate) use matrix::{eig_hermitian_unchecked, eigenvalues_by_invariants, kron2};
pub(crate) use stokes::density_from_stokes_trusted;
