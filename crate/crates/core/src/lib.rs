//! Simulation of classical and quantum communication between two parties
//! that share no reference frame.
//!
//! A missing frame is modelled as an unknown SU(2) rotation applied
//! identically to every transmitted qubit. Averaging over that rotation gives
//! the collective twirl channel in [`twirl`]; its block structure comes from
//! the irrep decomposition in [`irrep`]. The [`protocols`] module builds the
//! codes that survive the twirl, and [`optics`] simulates the two-photon
//! linear-optics version of the one-bit protocol.

pub mod error;
pub mod irrep;
pub mod optics;
pub mod protocols;
pub mod quantum;
pub mod rng;
pub mod twirl;

pub use error::{Error, Result};
pub use irrep::{
    block_projector, clebsch_gordan, decompose, enumerate_paths, multiplicity,
    total_irrep_count, CouplingPath, HalfInteger, IrrepBlock, IrrepDecomposition,
};
pub use quantum::{
    collective_rotation, fidelity, haar_random_su2, partial_trace, tensor, trace_distance,
    CMatrix, CVector, DensityOperator, GroupElement, StateVector,
};
pub use rng::RandomSource;
