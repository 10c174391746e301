//! Action integrand of the two-pulse configuration and the branch phases
//! obtained by integrating it over the restricted spacetime window.

use crate::field::{local_log_ratio, FieldError, LocalPoint};
use crate::quadrature::{integrate_2d, KinkCurve, QuadError, QuadResult, QuadSettings, Rect};

use super::params::{branch_offsets, BranchLabel, ExperimentParams};
use super::ProtocolError;

/// Treatment of the on-axis self-interaction terms of the action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelfTerms {
    /// Drop them. They are branch independent and only add a global phase.
    Exclude,
    /// Add them, evaluated at transverse distance `rho_self` from the axis.
    Include { rho_self: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelativePair {
    LR,
    RL,
}

impl RelativePair {
    pub fn branch(self) -> BranchLabel {
        match self {
            RelativePair::LR => BranchLabel::LR,
            RelativePair::RL => BranchLabel::RL,
        }
    }
}

/// Pulse-pair kernel with units resolved once.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairKernel {
    travel: f64,
    length: f64,
    kappa0: f64,
    c: f64,
    rho_min: f64,
}

impl PairKernel {
    pub fn new(p: &ExperimentParams) -> Self {
        let u = p.units();
        Self {
            travel: p.travel,
            length: p.pulse_length,
            kappa0: u.kappa0,
            c: u.c_value,
            rho_min: 1e-6 * p.travel,
        }
    }

    /// `(h₀[ρ, 0, D − z, t] + h₀[ρ, 0, z, t]) / κ₀` with `s = c·t`.
    pub fn pair(&self, rho: f64, z: f64, s: f64) -> Result<f64, FieldError> {
        let fwd = local_log_ratio(LocalPoint { rho, z, s }, self.travel, self.length, self.rho_min)?;
        let back = local_log_ratio(
            LocalPoint { rho, z: self.travel - z, s },
            self.travel,
            self.length,
            self.rho_min,
        )?;
        Ok(fwd + back)
    }

    /// Zone boundaries of both orientations at transverse distance `rho`,
    /// as curves `z = g(s)`, plus the breaks in `s` where they appear or
    /// leave the window.
    fn kinks(&self, rho: f64, z_half: f64, s_max: f64, out: &mut Vec<KinkCurve>) {
        let (d, l) = (self.travel, self.length);
        let corners = [(0.0, 0.0), (0.0, l), (d, d), (d, d + l)];
        for mirrored in [false, true] {
            // Local window edges in this orientation.
            let (lo, hi) = if mirrored { (d - z_half, d + z_half) } else { (-z_half, z_half) };
            for &(zk, sk) in &corners {
                let start = sk + rho;
                if start >= s_max {
                    continue;
                }
                out.push(KinkCurve::Horizontal(sk));
                out.push(KinkCurve::Horizontal(start));
                for edge in [lo, hi] {
                    out.push(KinkCurve::Horizontal(sk + rho.hypot(edge - zk)));
                }
                for sign in [-1.0, 1.0] {
                    out.push(KinkCurve::graph(start, s_max, move |s: f64| {
                        let reach = ((s - sk) * (s - sk) - rho * rho).max(0.0).sqrt();
                        let zl = zk + sign * reach;
                        if mirrored {
                            d - zl
                        } else {
                            zl
                        }
                    }));
                }
            }
        }
    }
}

/// Cross terms of the action integrand at `(z, t)` for pulses at `x1`, `x2`,
/// in units of the metric amplitude. With [`SelfTerms::Include`] the two
/// on-axis self terms are added at the regularizing distance.
pub fn action_integrand(
    z: f64,
    t: f64,
    x1: f64,
    x2: f64,
    p: &ExperimentParams,
    self_terms: SelfTerms,
) -> Result<f64, FieldError> {
    let k = PairKernel::new(p);
    let s = k.c * t;
    let mut total = k.pair((x1 - x2).abs(), z, s)?;
    if let SelfTerms::Include { rho_self } = self_terms {
        total += k.pair(rho_self, z, s)?;
    }
    Ok(k.kappa0 * total)
}

/// Integrates the log sum `f(z, s)` over the protocol window and converts
/// to radians. The integrand carries no unit prefactor so that the absolute
/// tolerance keeps its meaning in SI mode.
fn phase_integral<F>(
    p: &ExperimentParams,
    s: &QuadSettings,
    rhos: &[f64],
    integrand: F,
) -> Result<QuadResult, ProtocolError>
where
    F: Fn(f64, f64) -> Result<f64, FieldError> + Sync,
{
    let k = PairKernel::new(p);
    let z_half = p.z_half_width();
    let s_max = k.c * p.tau();
    let mut hints = vec![KinkCurve::Vertical(0.0), KinkCurve::Vertical(p.travel)];
    for &rho in rhos {
        k.kinks(rho, z_half, s_max, &mut hints);
    }

    // Field errors cannot be returned through the quadrature callback; the
    // first one is recorded and reported after integration.
    let failure = std::sync::Mutex::new(None::<FieldError>);
    let eval = |z: f64, sv: f64| match integrand(z, sv) {
        Ok(v) => v,
        Err(e) => {
            failure.lock().unwrap().get_or_insert(e);
            0.0
        }
    };
    let result = integrate_2d(eval, Rect::new(-z_half, z_half, 0.0, s_max), s, &hints);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e.into());
    }
    // The loop factor goes last so that it multiplies the single-pass phase
    // exactly.
    let scale = p.action_scale() * k.kappa0 / k.c;
    let loops = p.loop_factor();
    let scaled = |r: QuadResult| QuadResult {
        value: loops * (scale * r.value),
        error_estimate: loops * (scale.abs() * r.error_estimate),
        ..r
    };
    match result {
        Ok(r) => Ok(scaled(r)),
        Err(QuadError::NotConverged { best }) => {
            Err(QuadError::NotConverged { best: scaled(best) }.into())
        }
        Err(e) => Err(e.into()),
    }
}

/// Phase `φ_σ` of one branch from the cross terms only.
pub fn branch_phase(
    b: BranchLabel,
    p: &ExperimentParams,
    s: &QuadSettings,
) -> Result<QuadResult, ProtocolError> {
    p.validate()?;
    let (x1, x2) = branch_offsets(b, p);
    let rho = (x1 - x2).abs();
    let k = PairKernel::new(p);
    phase_integral(p, s, &[rho], |z, sv| k.pair(rho, z, sv))
}

/// Relative phase `Δφ_σ = φ_σ − φ_LL` in radians, integrated directly from
/// the difference integrand so that the large common part cancels
/// pointwise.
pub fn relative_phase(
    pair: RelativePair,
    p: &ExperimentParams,
    s: &QuadSettings,
) -> Result<QuadResult, ProtocolError> {
    p.validate()?;
    let (x1, x2) = branch_offsets(pair.branch(), p);
    let (r1, r2) = branch_offsets(BranchLabel::LL, p);
    let near = (x1 - x2).abs();
    let reference = (r1 - r2).abs();
    if near == reference {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            n_evals: 0,
            converged: true,
        });
    }
    let k = PairKernel::new(p);
    phase_integral(p, s, &[near, reference], |z, sv| {
        Ok(k.pair(near, z, sv)? - k.pair(reference, z, sv)?)
    })
}

/// The integrand of `Δφ_σ` at `(z, t)` in radians per unit `dz dt`.
pub fn relative_phase_density(
    pair: RelativePair,
    z: f64,
    t: f64,
    p: &ExperimentParams,
) -> Result<f64, FieldError> {
    let (x1, x2) = branch_offsets(pair.branch(), p);
    let (r1, r2) = branch_offsets(BranchLabel::LL, p);
    let (near, reference) = ((x1 - x2).abs(), (r1 - r2).abs());
    if near == reference {
        return Ok(0.0);
    }
    let k = PairKernel::new(p);
    let s = k.c * t;
    let v = k.pair(near, z, s)? - k.pair(reference, z, s)?;
    Ok(p.loop_factor() * (p.action_scale() * k.kappa0 * v))
}
