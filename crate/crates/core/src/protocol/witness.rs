use super::params::BranchLabel;
use super::ProtocolError;

/// Relative phases of the entangled two-qubit state, referenced to the LL
/// branch (the global phase is dropped and `φ_RR = φ_LL`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSet {
    pub dphi_lr: f64,
    pub dphi_rl: f64,
    pub reference: BranchLabel,
}

impl PhaseSet {
    pub fn new(dphi_lr: f64, dphi_rl: f64) -> Self {
        Self {
            dphi_lr,
            dphi_rl,
            reference: BranchLabel::LL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResult {
    pub expectation: f64,
    pub entangled: bool,
}

pub const PHASE_CONSISTENCY_TOL: f64 = 1e-9;

/// Relative phases from the four branch phases. `φ_RR` must equal `φ_LL`.
pub fn state_phases(phi_ll: f64, phi_lr: f64, phi_rl: f64, phi_rr: f64) -> Result<PhaseSet, ProtocolError> {
    state_phases_with_tol(phi_ll, phi_lr, phi_rl, phi_rr, PHASE_CONSISTENCY_TOL)
}

pub fn state_phases_with_tol(
    phi_ll: f64,
    phi_lr: f64,
    phi_rl: f64,
    phi_rr: f64,
    tol: f64,
) -> Result<PhaseSet, ProtocolError> {
    let mismatch = (phi_rr - phi_ll).abs();
    if !(mismatch <= tol * phi_ll.abs().max(1.0)) {
        return Err(ProtocolError::InconsistentPhases { phi_ll, phi_rr });
    }
    Ok(PhaseSet::new(phi_lr - phi_ll, phi_rl - phi_ll))
}

/// `⟨W⟩` for `W = 𝟙⊗𝟙 − X⊗X − Z⊗Y − Y⊗Z` on the noiseless state.
pub fn witness_expectation(ps: &PhaseSet) -> WitnessResult {
    let (a, b) = (ps.dphi_lr, ps.dphi_rl);
    let expectation = 1.0 - (a.sin() + b.sin()) - 0.5 * (1.0 + (a - b).cos());
    WitnessResult {
        expectation,
        entangled: expectation < 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn state_phase_examples() {
        let p = state_phases(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!((p.dphi_lr, p.dphi_rl), (0.0, 0.0));
        let p = state_phases(1.0, 1.3, 1.2, 1.0).unwrap();
        assert!((p.dphi_lr - 0.3).abs() < 1e-15);
        assert!((p.dphi_rl - 0.2).abs() < 1e-15);
        assert!(matches!(
            state_phases(0.0, 0.0, 0.0, 0.5),
            Err(ProtocolError::InconsistentPhases { .. })
        ));
    }

    #[test]
    fn witness_examples() {
        let w = witness_expectation(&PhaseSet::new(0.0, 0.0));
        assert_eq!(w.expectation, 0.0);
        assert!(!w.entangled);
        let w = witness_expectation(&PhaseSet::new(FRAC_PI_2, FRAC_PI_2));
        assert_eq!(w.expectation, -2.0);
        assert!(w.entangled);
    }

    #[test]
    fn small_equal_phases_are_first_order_negative() {
        let phi = 1e-3;
        let w = witness_expectation(&PhaseSet::new(phi, phi));
        assert!(w.entangled);
        // 1 − 2 sin φ − 1 = −2φ + O(φ³).
        assert!((w.expectation + 2.0 * phi).abs() < 1e-9);
    }
}
