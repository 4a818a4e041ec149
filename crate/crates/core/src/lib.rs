//! Simulation of two noisy qubit channels placed in a quantum switch.
//!
//! The crate is organised bottom-up:
//!
//! * [`qmath`]: dense 2x2 / 4x4 complex matrices, density matrices, Stokes
//!   vectors and entropies.
//! * [`channels`]: depolarising, amplitude- and phase-damping channels as
//!   Kraus sets, plus definite-order composition.
//! * [`switch`]: the switched channel, its Pauli-pair expansion and control
//!   observables.
//! * [`capacity`]: Holevo capacity of the switch, the definite-order baseline
//!   and the minimum-output-entropy search.
//! * [`experiment`]: measured control coherences, visibility model, prism
//!   hardware model and Monte Carlo error bands.

// Negated comparisons are how NaN inputs get rejected; by-reference
// arithmetic avoids copying 256-byte matrices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::op_ref)]

pub mod capacity;
pub mod channels;
mod error;
pub mod experiment;
pub mod qmath;
pub mod switch;

pub use capacity::{
    entropy_race, holevo_classical, holevo_from_branches, holevo_switch, min_output_entropy,
    BranchCoherences, CapacityResult, MinEntropy, SearchGrid,
};
pub use channels::{
    amplitude_damping_kraus, apply_channel, compose_definite, depolarizing_kraus,
    depolarizing_mixture, phase_damping_kraus, validate_cptp, ChannelFamily, CptpReport,
    KrausChannel, PauliMixture,
};
pub use error::{Error, Result};
pub use experiment::{
    load_measurements, monte_carlo_band, prism_unitary, reconstruct_capacity,
    verify_hardware_settings, visibility_band, MeasurementRecord, MeasurementSet, VisibilityModel,
};
pub use qmath::{BlochAngles, ComplexMatrix, DensityMatrix, StokesVector, Subsystem};
pub use switch::{
    apply_switch, control_marginal_stokes, control_s2, depolarizing_switch_mixture,
    pauli_pair_switch, project_control, switch_kraus, SwitchInput,
};
