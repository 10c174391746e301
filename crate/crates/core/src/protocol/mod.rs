//! Branch configuration, relative phases and the entanglement witness of the
//! photonic protocol.

mod feasibility;
mod params;
mod phase;
mod witness;

use thiserror::Error;

use crate::field::FieldError;
use crate::quadrature::QuadError;

pub use feasibility::{kappa_from_power, photon_number};
pub use params::{branch_offsets, BranchLabel, ExperimentParams, Source, Warning};
pub use phase::{
    action_integrand, branch_phase, relative_phase, relative_phase_density, RelativePair, SelfTerms,
};
pub use witness::{
    state_phases, state_phases_with_tol, witness_expectation, PhaseSet, WitnessResult,
    PHASE_CONSISTENCY_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("invalid experiment parameters: {0}")]
    InvalidParams(String),
    #[error("inconsistent branch phases: phi_RR = {phi_rr} differs from phi_LL = {phi_ll}")]
    InconsistentPhases { phi_ll: f64, phi_rr: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}
