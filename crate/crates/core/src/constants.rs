//! CODATA 2018 values in SI units.

/// Physical constants used by the SI feasibility formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Newtonian gravitational constant, m³·kg⁻¹·s⁻².
    pub g: f64,
    /// Speed of light, m·s⁻¹.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Planck constant, J·s.
    pub h_planck: f64,
    /// Vacuum permittivity, F·m⁻¹.
    pub epsilon0: f64,
    /// Vacuum permeability, H·m⁻¹.
    pub mu0: f64,
}

impl PhysicalConstants {
    pub const CODATA2018: PhysicalConstants = PhysicalConstants {
        g: 6.674_30e-11,
        c: 299_792_458.0,
        hbar: 1.054_571_817e-34,
        h_planck: 6.626_070_15e-34,
        epsilon0: 8.854_187_812_8e-12,
        mu0: 1.256_637_062_12e-6,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA2018
    }
}
