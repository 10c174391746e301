//! Linearized-gravity field of counter-propagating light pulses and the
//! branch phases of the photonic gravity-mediated entanglement protocol.
//!
//! The crate is split into four layers:
//!
//! * [`field`]: causal zone logic and the closed-form metric amplitude
//!   `h` of one or two pulses, plus a brute-force retarded-integral oracle.
//! * [`quadrature`]: deterministic adaptive Gauss–Kronrod integration in one
//!   and two dimensions, with caller-supplied kink curves.
//! * [`protocol`]: branch offsets, the action integrand, relative phases,
//!   the entanglement witness and SI feasibility formulas.
//! * [`constants`] / [`units`]: physical constants and the natural/SI switch.

pub mod constants;
pub mod field;
pub mod protocol;
pub mod quadrature;
pub mod units;

pub use constants::PhysicalConstants;
pub use field::{
    aux_bounds, h_single, h_single_oracle, h_two_pulse, integration_bounds, retarded_time, zeta,
    AuxBound, CausalBounds, Direction, FieldError, PulseGeometry, SpacetimePoint, Zone,
};
pub use protocol::{
    action_integrand, branch_offsets, kappa_from_power, photon_number, relative_phase,
    state_phases, witness_expectation, BranchLabel, ExperimentParams, PhaseSet, ProtocolError,
    RelativePair, SelfTerms, Source, WitnessResult,
};
pub use quadrature::{integrate_1d, integrate_2d, KinkCurve, QuadError, QuadResult, QuadSettings, Rect};
pub use units::{UnitMode, UnitSystem};
