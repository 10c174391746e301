use crate::constants::PhysicalConstants;
use crate::units::UnitSystem;

use super::ProtocolError;

/// Amplitude of the pulses: laser power in SI mode, or the dimensionless
/// metric prefactor `4GAu₀/c⁴` directly in natural mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    PowerW(f64),
    Kappa0(f64),
}

/// Configuration of the two-interferometer protocol.
///
/// Lengths are metres in SI mode and arbitrary length units (with `c = 1`)
/// in natural mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentParams {
    /// Interferometer length `D`.
    pub travel: f64,
    /// Pulse length `L`.
    pub pulse_length: f64,
    /// Transverse separation `d` of the interferometer centres.
    pub separation: f64,
    /// Splitting distance `Δx`.
    pub delta_x: f64,
    pub wavelength: Option<f64>,
    pub source: Source,
    /// Interaction time; `None` means `2D/c`.
    pub tau: Option<f64>,
    /// Fibre loops. `0` is a single pass; `l ≥ 1` scales phases by `2l`.
    pub loops: u32,
    pub constants: PhysicalConstants,
}

/// Non-fatal departures from the validity regime of the model.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// `d − Δx` is below ten wavelengths, where beam overlap and diffraction
    /// can no longer be neglected.
    BeamOverlap { gap: f64, wavelength: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::BeamOverlap { gap, wavelength } => write!(
                f,
                "d - delta_x = {gap:e} is below 10 wavelengths ({:e}); overlap and diffraction are not modelled",
                10.0 * wavelength
            ),
        }
    }
}

impl ExperimentParams {
    /// Natural units with the given metric prefactor.
    pub fn natural(travel: f64, pulse_length: f64, separation: f64, delta_x: f64, kappa0: f64) -> Self {
        Self {
            travel,
            pulse_length,
            separation,
            delta_x,
            wavelength: None,
            source: Source::Kappa0(kappa0),
            tau: None,
            loops: 0,
            constants: PhysicalConstants::default(),
        }
    }

    /// SI units driven by laser power `power` in watts.
    pub fn si(
        travel: f64,
        pulse_length: f64,
        separation: f64,
        delta_x: f64,
        wavelength: f64,
        power: f64,
    ) -> Self {
        Self {
            travel,
            pulse_length,
            separation,
            delta_x,
            wavelength: Some(wavelength),
            source: Source::PowerW(power),
            tau: None,
            loops: 0,
            constants: PhysicalConstants::default(),
        }
    }

    /// The headline feasibility configuration: λ = 1 μm, L = 0.3 m,
    /// Δx = 1 cm, d = Δx + 10λ, D = 3 m, P = 1 PW.
    pub fn headline() -> Self {
        let wavelength = 1e-6;
        let delta_x = 1e-2;
        Self::si(3.0, 0.3, delta_x + 10.0 * wavelength, delta_x, wavelength, 1e15)
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_loops(mut self, loops: u32) -> Self {
        self.loops = loops;
        self
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }

    pub fn units(&self) -> UnitSystem {
        match self.source {
            Source::PowerW(p) => UnitSystem::si_from_power(p, &self.constants),
            Source::Kappa0(k) => UnitSystem::natural_scaled(k),
        }
    }

    pub fn c(&self) -> f64 {
        self.units().c_value
    }

    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or(2.0 * self.travel / self.c())
    }

    /// Half-width of the longitudinal integration window. Equals `D + L` for
    /// the default `τ = 2D/c` and grows with `cτ − D` beyond that.
    pub fn z_half_width(&self) -> f64 {
        (self.c() * self.tau() - self.travel).max(self.travel) + self.pulse_length
    }

    /// Phase multiplier for fibre loops.
    pub fn loop_factor(&self) -> f64 {
        if self.loops == 0 {
            1.0
        } else {
            2.0 * f64::from(self.loops)
        }
    }

    /// `Au₀/ħ`, converting `∬ Σh dz dt` into radians. Uses `Au₀ = P/c` in
    /// SI and is `1` in natural units.
    pub fn action_scale(&self) -> f64 {
        match self.source {
            Source::PowerW(p) => {
                let k = &self.constants;
                p / (k.hbar * k.c)
            }
            Source::Kappa0(_) => 1.0,
        }
    }

    pub fn validate(&self) -> Result<Vec<Warning>, ProtocolError> {
        let bad = |msg: String| Err(ProtocolError::InvalidParams(msg));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.travel) {
            return bad(format!("D must be > 0, got {}", self.travel));
        }
        if !positive(self.pulse_length) {
            return bad(format!("L must be > 0, got {}", self.pulse_length));
        }
        if self.pulse_length >= self.travel {
            return bad(format!(
                "L must be < D, got L = {}, D = {}",
                self.pulse_length, self.travel
            ));
        }
        if !(self.delta_x.is_finite() && self.delta_x >= 0.0) {
            return bad(format!("delta_x must be >= 0, got {}", self.delta_x));
        }
        if !self.separation.is_finite() || self.separation - self.delta_x <= 0.0 {
            return bad(format!(
                "d - delta_x must be > 0 (branches overlap), got d = {}, delta_x = {}",
                self.separation, self.delta_x
            ));
        }
        match self.source {
            Source::PowerW(p) if !(p.is_finite() && p >= 0.0) => {
                return bad(format!("power must be >= 0, got {p}"))
            }
            Source::Kappa0(k) if !k.is_finite() => return bad(format!("kappa0 must be finite, got {k}")),
            _ => {}
        }
        if let Some(tau) = self.tau {
            if !positive(tau) {
                return bad(format!("tau must be > 0, got {tau}"));
            }
        }
        let mut warnings = Vec::new();
        if let Some(lambda) = self.wavelength {
            if !positive(lambda) {
                return bad(format!("lambda must be > 0, got {lambda}"));
            }
            let gap = self.separation - self.delta_x;
            if gap < 10.0 * lambda * (1.0 - 1e-9) {
                warnings.push(Warning::BeamOverlap { gap, wavelength: lambda });
            }
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchLabel {
    LL,
    LR,
    RL,
    RR,
}

impl BranchLabel {
    pub const ALL: [BranchLabel; 4] = [BranchLabel::LL, BranchLabel::LR, BranchLabel::RL, BranchLabel::RR];
}

/// Transverse pulse positions `(x₁, x₂)` of a branch.
pub fn branch_offsets(b: BranchLabel, p: &ExperimentParams) -> (f64, f64) {
    let (d, dx) = (p.separation, p.delta_x);
    match b {
        BranchLabel::LL => (0.0, d),
        BranchLabel::LR => (0.0, d + dx),
        BranchLabel::RL => (dx, d),
        BranchLabel::RR => (dx, d + dx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_offsets() {
        let p = ExperimentParams::natural(5.0, 1.0, 2.0, 1.0, 1.0);
        assert_eq!(branch_offsets(BranchLabel::RL, &p), (1.0, 2.0));
        assert_eq!(branch_offsets(BranchLabel::LL, &p), (0.0, 2.0));
        assert_eq!(branch_offsets(BranchLabel::RR, &p), (1.0, 3.0));
        assert_eq!(branch_offsets(BranchLabel::LR, &p), (0.0, 3.0));
        let q = ExperimentParams::natural(5.0, 1.0, 7.5, 0.25, 1.0);
        assert_eq!(branch_offsets(BranchLabel::LL, &q), (0.0, 7.5));
    }

    #[test]
    fn overlapping_branches_are_rejected() {
        let p = ExperimentParams::natural(5.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(p.validate(), Err(ProtocolError::InvalidParams(_))));
        let p = ExperimentParams::natural(5.0, 1.0, 2.0, 1.0, 1.0).with_tau(0.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn headline_sits_on_the_overlap_threshold_without_warning() {
        let p = ExperimentParams::headline();
        assert_eq!(p.validate().unwrap(), vec![]);
        let mut q = p;
        q.separation = q.delta_x + 5.0 * 1e-6;
        assert_eq!(q.validate().unwrap().len(), 1);
    }

    #[test]
    fn default_window_matches_tau() {
        let p = ExperimentParams::natural(5.0, 1.0, 2.0, 1.0, 1.0);
        assert_eq!(p.tau(), 10.0);
        assert_eq!(p.z_half_width(), 6.0);
        assert_eq!(p.with_tau(20.0).z_half_width(), 16.0);
        let si = ExperimentParams::headline();
        assert!((si.tau() * si.constants.c - 6.0).abs() < 1e-12);
        assert!((si.z_half_width() - 3.3).abs() < 1e-12);
    }

    #[test]
    fn loop_factor() {
        let p = ExperimentParams::natural(5.0, 1.0, 2.0, 1.0, 1.0);
        assert_eq!(p.loop_factor(), 1.0);
        assert_eq!(p.with_loops(1).loop_factor(), 2.0);
        assert_eq!(p.with_loops(5).loop_factor(), 10.0);
    }
}
