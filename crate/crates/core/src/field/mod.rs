//! Metric perturbation `h` sourced by finite light pulses.
//!
//! A pulse of length `L` is emitted at `z = 0` at `t = 0`, travels in `+z` and
//! is absorbed at `z = D`. The only non-vanishing metric components are
//! `h₀₀ = h_zz = −h₀z`, all equal to the scalar amplitude computed here.
//! Pulses travelling in `−z` reuse the same kernel at the mirrored coordinate
//! `D − z`.

mod causal;
mod metric;

pub use causal::{
    aux_bounds, integration_bounds, integration_bounds_bracketed, local_bounds,
    local_bounds_bracketed, retarded_time, zeta, zeta_local, AuxBound, CausalBounds,
    DenominatorSign, Zone,
};
pub use metric::{h_single, h_single_oracle, h_two_pulse, local_log_ratio};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    /// The query point sits on the pulse axis inside the causal wake, where
    /// the amplitude diverges logarithmically.
    #[error("query point on pulse axis (rho = {rho:e} < rho_min = {rho_min:e}) inside causal wake")]
    SingularOnAxis { rho: f64, rho_min: f64 },
    #[error("invalid pulse geometry: {0}")]
    InvalidGeometry(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    PlusZ,
    MinusZ,
}

/// World-sheet parameters of one pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseGeometry {
    /// Distance `D` between the emission and absorption planes.
    pub travel: f64,
    /// Pulse length `L`.
    pub length: f64,
    pub direction: Direction,
    pub x_off: f64,
    pub y_off: f64,
    /// Relative energy-density scale multiplying the unit prefactor.
    pub amplitude: f64,
    /// Transverse distance below which an in-wake query is rejected as
    /// on-axis. Defaults to `1e-6·D`.
    pub rho_min: f64,
}

impl PulseGeometry {
    pub fn new(travel: f64, length: f64, direction: Direction) -> Result<Self, FieldError> {
        if !(travel.is_finite() && travel > 0.0) {
            return Err(FieldError::InvalidGeometry(format!("D must be > 0, got {travel}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(FieldError::InvalidGeometry(format!("L must be > 0, got {length}")));
        }
        if length >= travel {
            return Err(FieldError::InvalidGeometry(format!(
                "L must be < D, got L = {length}, D = {travel}"
            )));
        }
        Ok(Self {
            travel,
            length,
            direction,
            x_off: 0.0,
            y_off: 0.0,
            amplitude: 1.0,
            rho_min: 1e-6 * travel,
        })
    }

    pub fn with_offset(mut self, x_off: f64, y_off: f64) -> Self {
        self.x_off = x_off;
        self.y_off = y_off;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_rho_min(mut self, rho_min: f64) -> Self {
        self.rho_min = rho_min;
        self
    }

    /// Maps a world point to the pulse frame: transverse distance from the
    /// pulse axis, longitudinal coordinate along the direction of travel and
    /// `c·t`.
    pub fn local(&self, p: &SpacetimePoint, c: f64) -> LocalPoint {
        let rho = (p.x - self.x_off).hypot(p.y - self.y_off);
        let z = match self.direction {
            Direction::PlusZ => p.z,
            Direction::MinusZ => self.travel - p.z,
        };
        LocalPoint { rho, z, s: c * p.t }
    }
}

/// A query point in the pulse frame. `s = c·t` carries time in length units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalPoint {
    pub rho: f64,
    pub z: f64,
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }
}
