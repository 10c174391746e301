use crate::constants::PhysicalConstants;

/// Action prefactor `κ = 4GA²u₀²/c⁴ = 4GP²/c⁶` in newtons.
pub fn kappa_from_power(power: f64, k: &PhysicalConstants) -> f64 {
    4.0 * k.g * power * power / k.c.powi(6)
}

/// Mean photon number `N = PLλ/(hc²)` of a pulse.
pub fn photon_number(power: f64, length: f64, wavelength: f64, k: &PhysicalConstants) -> f64 {
    power * length * wavelength / (k.h_planck * k.c * k.c)
}
