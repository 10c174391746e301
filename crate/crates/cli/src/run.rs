//! One runner per mode. Each returns the CSV text; rows may be computed in
//! parallel but are always emitted in a fixed order.

use std::fmt::Write as _;

use gme_core::protocol::relative_phase_density;
use gme_core::{
    h_two_pulse, kappa_from_power, photon_number, relative_phase, witness_expectation, Direction,
    ExperimentParams, FieldError, PhaseSet, ProtocolError, PulseGeometry, QuadError, QuadResult,
    QuadSettings, RelativePair, Source, SpacetimePoint,
};
use rayon::prelude::*;

use crate::config::{apply_sweep, num, Grid, Mode, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub csv: String,
    /// Human-readable report, printed to stderr by the binary.
    pub summary: Option<String>,
    /// `false` if any quadrature stopped short of its tolerance.
    pub converged: bool,
}

impl RunOutput {
    fn csv(csv: String, converged: bool) -> Self {
        Self {
            csv,
            summary: None,
            converged,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    match cfg.mode {
        Mode::FieldGrid => run_field_grid(cfg),
        Mode::IntegrandGrid => run_integrand_grid(cfg),
        Mode::Phase => run_phase(cfg),
        Mode::Witness => run_witness(cfg),
        Mode::Sweep => run_sweep(cfg),
        Mode::Estimate => run_estimate(cfg),
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * (i as f64 / last) })
        .collect()
}

fn grid_of(cfg: &RunConfig) -> Result<&Grid, CliError> {
    cfg.grid
        .as_ref()
        .ok_or_else(|| CliError::Validation(format!("{} mode needs a grid", cfg.mode.name())))
}

/// Total field `h` of the two pulses on an `x × z` grid for each requested
/// `t`. Pulse 1 travels in `+z` at `x = Δx`, pulse 2 in `−z` at `x = d`
/// (the RL branch). On-axis points inside the wake are flagged and left
/// empty.
pub fn run_field_grid(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let g = grid_of(cfg)?;
    let p = &cfg.params;
    let (Some((x0, x1)), Some((z0, z1)), Some(ts)) = (g.x_range, g.z_range, g.t_values.as_ref()) else {
        return Err(CliError::Validation("field-grid needs x and z ranges and t_values".into()));
    };
    let geom = |dir| PulseGeometry::new(p.travel, p.pulse_length, dir).map_err(|e| CliError::Validation(e.to_string()));
    let pulse1 = geom(Direction::PlusZ)?.with_offset(p.delta_x, 0.0);
    let pulse2 = geom(Direction::MinusZ)?.with_offset(p.separation, 0.0);
    let units = p.units();
    let xs = linspace(x0, x1, g.n_points);
    let zs = linspace(z0, z1, g.n_points);

    let rows: Vec<(f64, f64)> = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).collect();
    let blocks: Vec<String> = rows
        .par_iter()
        .map(|&(t, x)| {
            let mut block = String::new();
            for &z in &zs {
                let pt = SpacetimePoint::new(t, x, 0.0, z);
                let (h, singular) = match h_two_pulse(&pt, &pulse1, &pulse2, &units) {
                    Ok(h) => (num(h), false),
                    Err(FieldError::SingularOnAxis { .. }) => (String::new(), true),
                    Err(e) => unreachable!("geometry validated: {e}"),
                };
                let _ = writeln!(block, "{},{},{},{},{}", num(x), num(z), num(t), h, flag(singular));
            }
            block
        })
        .collect();
    let mut csv = String::from("x,z,t,h,singular\n");
    csv.extend(blocks);
    Ok(RunOutput::csv(csv, true))
}

/// Integrand of `Δφ_RL` on a `z × t` grid over the protocol window.
pub fn run_integrand_grid(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let g = grid_of(cfg)?;
    let p = &cfg.params;
    let half = p.z_half_width();
    let (z0, z1) = g.z_range.unwrap_or((-half, half));
    let zs = linspace(z0, z1, g.n_points);
    let ts = match &g.t_values {
        Some(ts) => ts.clone(),
        None => linspace(0.0, p.tau(), g.n_points),
    };
    let rows: Vec<Result<String, CliError>> = ts
        .par_iter()
        .map(|&t| {
            let mut block = String::new();
            for &z in &zs {
                let v = relative_phase_density(RelativePair::RL, z, t, p).map_err(|e| CliError::Validation(e.to_string()))?;
                let _ = writeln!(block, "{},{},{}", num(z), num(t), num(v));
            }
            Ok(block)
        })
        .collect();
    let mut csv = String::from("z,t,value\n");
    for r in rows {
        csv.push_str(&r?);
    }
    Ok(RunOutput::csv(csv, true))
}

/// A relative phase, with a convergence failure downgraded to its best
/// estimate.
fn phase_or_best(pair: RelativePair, p: &ExperimentParams, s: &QuadSettings) -> Result<QuadResult, CliError> {
    match relative_phase(pair, p, s) {
        Ok(r) => Ok(r),
        Err(ProtocolError::Quad(QuadError::NotConverged { best })) => Ok(best),
        Err(e) => Err(CliError::from_protocol(e)),
    }
}

struct Phases {
    lr: QuadResult,
    rl: QuadResult,
}

impl Phases {
    fn compute(p: &ExperimentParams, s: &QuadSettings) -> Result<Self, CliError> {
        Ok(Self {
            lr: phase_or_best(RelativePair::LR, p, s)?,
            rl: phase_or_best(RelativePair::RL, p, s)?,
        })
    }

    fn converged(&self) -> bool {
        self.lr.converged && self.rl.converged
    }

    fn witness(&self) -> f64 {
        witness_expectation(&PhaseSet::new(self.lr.value, self.rl.value)).expectation
    }
}

pub fn run_phase(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let ph = Phases::compute(&cfg.params, &cfg.quad)?;
    let csv = format!(
        "dphi_LR,dphi_LR_error,dphi_RL,dphi_RL_error,n_evals,converged\n{},{},{},{},{},{}\n",
        num(ph.lr.value),
        num(ph.lr.error_estimate),
        num(ph.rl.value),
        num(ph.rl.error_estimate),
        ph.lr.n_evals + ph.rl.n_evals,
        flag(ph.converged()),
    );
    Ok(RunOutput::csv(csv, ph.converged()))
}

pub fn run_witness(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let ph = Phases::compute(&cfg.params, &cfg.quad)?;
    let w = witness_expectation(&PhaseSet::new(ph.lr.value, ph.rl.value));
    let csv = format!(
        "dphi_LR,dphi_RL,witness,entangled,converged\n{},{},{},{},{}\n",
        num(ph.lr.value),
        num(ph.rl.value),
        num(w.expectation),
        flag(w.entangled),
        flag(ph.converged()),
    );
    Ok(RunOutput::csv(csv, ph.converged()))
}

/// One row per sweep point in ascending order. A point that fails to
/// converge is written with its best estimate and flagged.
pub fn run_sweep(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let sw = cfg
        .sweep
        .ok_or_else(|| CliError::Validation("sweep mode needs sweep_var/min/max/steps".into()))?;
    let rows: Vec<Result<(f64, Phases), CliError>> = sw
        .points()
        .into_par_iter()
        .map(|v| Ok((v, Phases::compute(&apply_sweep(&cfg.params, sw.var, v), &cfg.quad)?)))
        .collect();
    let mut csv = format!("{},dphi_RL,witness,converged\n", sw.var.name());
    let mut all = true;
    for r in rows {
        let (v, ph) = r?;
        all &= ph.converged();
        let _ = writeln!(csv, "{},{},{},{}", num(v), num(ph.rl.value), num(ph.witness()), flag(ph.converged()));
    }
    Ok(RunOutput::csv(csv, all))
}

/// Feasibility report in SI units.
pub fn run_estimate(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let p = &cfg.params;
    let (Source::PowerW(power), Some(lambda)) = (p.source, p.wavelength) else {
        return Err(CliError::Validation("estimate mode needs power_W and lambda_m".into()));
    };
    let ph = Phases::compute(p, &cfg.quad)?;
    let kappa = kappa_from_power(power, &p.constants);
    let photons = photon_number(power, p.pulse_length, lambda, &p.constants);
    let gap = p.separation - p.delta_x;
    let regime_ok = p.validate().map_err(CliError::from_protocol)?.is_empty();
    let w = ph.witness();
    let csv = format!(
        "power_W,dphi_LR,dphi_RL,witness,kappa_N,photon_number,gap_m,min_gap_m,regime_ok,converged\n{},{},{},{},{},{},{},{},{},{}\n",
        num(power),
        num(ph.lr.value),
        num(ph.rl.value),
        num(w),
        num(kappa),
        num(photons),
        num(gap),
        num(10.0 * lambda),
        flag(regime_ok),
        flag(ph.converged()),
    );
    let mut summary = String::new();
    let _ = writeln!(summary, "P            = {power:.4e} W");
    let _ = writeln!(summary, "dphi_RL      = {:.6e} rad (± {:.1e})", ph.rl.value, ph.rl.error_estimate);
    let _ = writeln!(summary, "dphi_LR      = {:.6e} rad (± {:.1e})", ph.lr.value, ph.lr.error_estimate);
    let _ = writeln!(summary, "witness      = {w:.6e}{}", if w < 0.0 { " (entangled)" } else { "" });
    let _ = writeln!(summary, "kappa        = {kappa:.4e} N");
    let _ = writeln!(summary, "photons N    = {photons:.4e}");
    let _ = writeln!(
        summary,
        "d - delta_x  = {gap:.4e} m vs 10 lambda = {:.4e} m: {}",
        10.0 * lambda,
        if regime_ok { "ok" } else { "outside validity regime" }
    );
    if p.loops > 0 {
        let _ = writeln!(summary, "loops        = {} (phase x{})", p.loops, p.loop_factor());
    }
    Ok(RunOutput {
        csv,
        summary: Some(summary),
        converged: ph.converged(),
    })
}
