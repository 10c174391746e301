//! Natural vs SI unit handling for the metric amplitude.

use crate::constants::PhysicalConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitMode {
    /// `4GAu₀/c⁴ = c = 1`, used for the field and integrand grids.
    Natural,
    /// SI units, used for feasibility estimates.
    Si,
}

/// Resolved unit system: the dimensionless metric prefactor `4GAu₀/c⁴` and
/// the speed of light in active units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub mode: UnitMode,
    pub kappa0: f64,
    pub c_value: f64,
}

impl UnitSystem {
    pub fn natural() -> Self {
        Self {
            mode: UnitMode::Natural,
            kappa0: 1.0,
            c_value: 1.0,
        }
    }

    /// Natural length/time units (`c = 1`) with an arbitrary amplitude.
    pub fn natural_scaled(kappa0: f64) -> Self {
        Self {
            mode: UnitMode::Natural,
            kappa0,
            c_value: 1.0,
        }
    }

    /// SI units for a pulse of power `power` (W), using `Au₀ = P/c`.
    pub fn si_from_power(power: f64, k: &PhysicalConstants) -> Self {
        Self {
            mode: UnitMode::Si,
            kappa0: 4.0 * k.g * power / k.c.powi(5),
            c_value: k.c,
        }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}
