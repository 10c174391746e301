use rayon::prelude::*;

use super::rule::{WG, WGK, XGK};
use super::{finish, pieces, QuadError, QuadResult, QuadSettings};

const MAX_PANELS: usize = 1 << 20;
const PAR_THRESHOLD: usize = 8;
/// Panels whose error is within this multiple of `ε·∫|f|` are round-off
/// limited and are not split further.
const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

/// Integrand value at one node, carrying the error and cost of any nested
/// integration that produced it. Nested errors are folded into the panel
/// error, so convergence is judged on the total.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    pub value: f64,
    pub error: f64,
    pub evals: u64,
}

impl Sample {
    pub fn point(value: f64) -> Self {
        Self {
            value,
            error: 0.0,
            evals: 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    depth: u32,
    value: f64,
    error: f64,
    /// Kronrod–Gauss difference alone, without nested errors. Splitting a
    /// panel only reduces this part.
    rule_error: f64,
    /// `∫|f|` on the panel, for the round-off floor.
    abs_value: f64,
    evals: u64,
}

fn gk15<F: Fn(f64) -> Sample>(f: &F, lo: f64, hi: f64, depth: u32) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc.value * WGK[7];
    let mut res_g = fc.value * WG[3];
    let mut res_abs = fc.value.abs() * WGK[7];
    let mut nested = fc.error * WGK[7];
    let mut evals = fc.evals;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1.value + f2.value;
        res_k += w * pair;
        if j % 2 == 1 {
            res_g += WG[j / 2] * pair;
        }
        res_abs += w * (f1.value.abs() + f2.value.abs());
        nested += w * (f1.error + f2.error);
        evals += f1.evals + f2.evals;
    }
    let rule_error = ((res_k - res_g) * half).abs();
    Panel {
        lo,
        hi,
        depth,
        value: res_k * half,
        error: rule_error + nested * half.abs(),
        rule_error,
        abs_value: res_abs * half.abs(),
        evals,
    }
}

fn eval_all<F>(f: &F, cells: &[(f64, f64, u32)], parallel: bool) -> Vec<Panel>
where
    F: Fn(f64) -> Sample + Sync,
{
    if parallel && cells.len() >= PAR_THRESHOLD {
        cells.par_iter().map(|&(lo, hi, d)| gk15(f, lo, hi, d)).collect()
    } else {
        cells.iter().map(|&(lo, hi, d)| gk15(f, lo, hi, d)).collect()
    }
}

/// Round-synchronous adaptive refinement over the given initial pieces.
pub(crate) fn adapt<F>(f: &F, initial: Vec<(f64, f64)>, s: &QuadSettings, parallel: bool) -> QuadResult
where
    F: Fn(f64) -> Sample + Sync,
{
    let (Some(first), Some(last)) = (initial.first(), initial.last()) else {
        return QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            n_evals: 0,
            converged: true,
        };
    };
    let min_width = s.min_cell * (last.1 - first.0);
    let cells: Vec<_> = initial.iter().map(|&(lo, hi)| (lo, hi, 0)).collect();
    let mut panels = eval_all(f, &cells, parallel);
    let mut n_evals: u64 = panels.iter().map(|p| p.evals).sum();

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = s.target(value);
        let done = |converged| QuadResult {
            value,
            error_estimate: error,
            n_evals,
            converged,
        };
        if error <= target {
            return done(true);
        }
        if panels.len() >= MAX_PANELS || n_evals >= s.max_evals {
            return done(false);
        }

        let threshold = target / panels.len() as f64;
        let splittable = |p: &Panel| {
            p.error > threshold
                && p.rule_error > ROUNDOFF * p.abs_value
                && p.rule_error >= 0.1 * p.error
                && p.depth < s.max_depth
                && (p.hi - p.lo) > min_width
        };
        let mut children = Vec::new();
        for p in panels.iter().filter(|p| splittable(p)) {
            let mid = 0.5 * (p.lo + p.hi);
            if mid <= p.lo || mid >= p.hi {
                continue;
            }
            children.push((p.lo, mid, p.depth + 1));
            children.push((mid, p.hi, p.depth + 1));
        }
        if children.is_empty() {
            return done(false);
        }

        let fresh = eval_all(f, &children, parallel);
        n_evals += fresh.iter().map(|p| p.evals).sum::<u64>();
        let mut fresh = fresh.into_iter();
        let mut next = Vec::with_capacity(panels.len() + children.len() / 2);
        for p in panels {
            let mid = 0.5 * (p.lo + p.hi);
            if splittable(&p) && mid > p.lo && mid < p.hi {
                next.extend(fresh.by_ref().take(2));
            } else {
                next.push(p);
            }
        }
        panels = next;
    }
}

/// Adaptive integral of `f` over `[lo, hi]`.
pub fn integrate_1d<F>(f: F, lo: f64, hi: f64, s: &QuadSettings) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_1d_with_breaks(f, lo, hi, &[], s)
}

/// Adaptive integral of `f` over `[lo, hi]` with the initial panels cut at
/// `breaks` (points outside the interval are ignored).
pub fn integrate_1d_with_breaks<F>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    s: &QuadSettings,
) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64 + Sync,
{
    s.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(QuadError::InvalidDomain(format!("[{lo}, {hi}]")));
    }
    let r = adapt(&|x| Sample::point(f(x)), pieces(lo, hi, breaks.to_vec()), s, true);
    finish(r)
}
