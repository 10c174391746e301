//! Deterministic adaptive quadrature for piecewise-smooth integrands.
//!
//! Every panel is integrated with the nested Gauss–Kronrod 7/15 pair and the
//! panel error is the difference of the two rules. Refinement proceeds in
//! rounds: each round splits every panel whose error exceeds its share of the
//! tolerance, new panels may be evaluated on the rayon pool, and totals are
//! always summed in left-to-right panel order. The result therefore does not
//! depend on the number of worker threads.
//!
//! Two-dimensional integrals are iterated: an adaptive outer integral over
//! `y` whose integrand is an adaptive inner integral over `x`. Kink curves
//! `x = g(y)` supplied by the caller become inner breakpoints on every slice.

mod adaptive;
mod rule;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use adaptive::{integrate_1d, integrate_1d_with_breaks};

use adaptive::{adapt, Sample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections of an initial panel.
    pub max_depth: u32,
    /// Smallest panel width, as a fraction of the integration range.
    pub min_cell: f64,
    /// Integrand evaluations after which refinement stops and the best
    /// estimate is reported as not converged.
    pub max_evals: u64,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            max_depth: 40,
            min_cell: 1e-9,
            max_evals: 50_000_000,
        }
    }
}

impl QuadSettings {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0) {
            return Err(QuadError::InvalidSettings(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(QuadError::InvalidSettings(format!("abs_tol must be >= 0, got {}", self.abs_tol)));
        }
        if self.max_depth < 1 {
            return Err(QuadError::InvalidSettings("max_depth must be >= 1".into()));
        }
        if self.max_evals < 15 {
            return Err(QuadError::InvalidSettings("max_evals must allow one panel (>= 15)".into()));
        }
        if !(self.min_cell >= 0.0 && self.min_cell < 1.0) {
            return Err(QuadError::InvalidSettings(format!("min_cell must be in [0, 1), got {}", self.min_cell)));
        }
        Ok(())
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub n_evals: u64,
    pub converged: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integration did not converge: value {} ± {}", best.value, best.error_estimate)]
    NotConverged { best: QuadResult },
    #[error("invalid integration domain: {0}")]
    InvalidDomain(String),
    #[error("invalid quadrature settings: {0}")]
    InvalidSettings(String),
}

impl QuadError {
    /// The best available estimate, if the failure was a convergence failure.
    pub fn best(&self) -> Option<&QuadResult> {
        match self {
            QuadError::NotConverged { best } => Some(best),
            _ => None,
        }
    }
}

/// Axis-aligned rectangle; `x` is the inner and `y` the outer variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }
}

/// A curve along which the integrand may have a kink or a steep layer.
#[derive(Clone)]
pub enum KinkCurve {
    /// The line `x = c` for all `y`.
    Vertical(f64),
    /// The line `y = c`.
    Horizontal(f64),
    /// The graph `x = g(y)` for `y ∈ [y_lo, y_hi]`.
    Graph {
        y_lo: f64,
        y_hi: f64,
        x_of_y: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl KinkCurve {
    pub fn graph(y_lo: f64, y_hi: f64, x_of_y: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        KinkCurve::Graph {
            y_lo,
            y_hi,
            x_of_y: Arc::new(x_of_y),
        }
    }
}

impl fmt::Debug for KinkCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KinkCurve::Vertical(x) => write!(f, "Vertical({x})"),
            KinkCurve::Horizontal(y) => write!(f, "Horizontal({y})"),
            KinkCurve::Graph { y_lo, y_hi, .. } => write!(f, "Graph([{y_lo}, {y_hi}])"),
        }
    }
}

/// Adaptive integral of `f(x, y)` over `rect`.
pub fn integrate_2d<F>(
    f: F,
    rect: Rect,
    s: &QuadSettings,
    kink_hints: &[KinkCurve],
) -> Result<QuadResult, QuadError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    s.validate()?;
    let Rect { x0, x1, y0, y1 } = rect;
    if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) || !(x0 < x1 && y0 < y1) {
        return Err(QuadError::InvalidDomain(format!(
            "rectangle [{x0}, {x1}] × [{y0}, {y1}] is degenerate"
        )));
    }

    let mut x_fixed = Vec::new();
    let mut y_breaks = vec![y0, y1];
    for k in kink_hints {
        match k {
            KinkCurve::Vertical(x) => x_fixed.push(*x),
            KinkCurve::Horizontal(y) => y_breaks.push(*y),
            KinkCurve::Graph { y_lo, y_hi, .. } => {
                y_breaks.push(*y_lo);
                y_breaks.push(*y_hi);
            }
        }
    }
    let y_pieces = pieces(y0, y1, y_breaks);

    // A single slice gets a small share of the budget: a slice that cannot
    // converge reports its error, which then steers the outer refinement.
    let inner = QuadSettings {
        rel_tol: 0.1 * s.rel_tol,
        abs_tol: 0.1 * s.abs_tol / (y1 - y0),
        max_evals: (s.max_evals / 1000).max(15),
        ..*s
    };
    let slice = |y: f64| -> Sample {
        let mut breaks = Vec::with_capacity(x_fixed.len() + kink_hints.len() + 2);
        breaks.push(x0);
        breaks.push(x1);
        breaks.extend_from_slice(&x_fixed);
        for k in kink_hints {
            if let KinkCurve::Graph { y_lo, y_hi, x_of_y } = k {
                if y >= *y_lo && y <= *y_hi {
                    breaks.push(x_of_y(y));
                }
            }
        }
        let r = adapt(&|x: f64| Sample::point(f(x, y)), pieces(x0, x1, breaks), &inner, false);
        Sample {
            value: r.value,
            error: r.error_estimate,
            evals: r.n_evals,
        }
    };
    finish(adapt(&slice, y_pieces, s, true))
}

/// Sorted, deduplicated sub-intervals of `[lo, hi]` cut at `breaks`.
pub(crate) fn pieces(lo: f64, hi: f64, mut breaks: Vec<f64>) -> Vec<(f64, f64)> {
    breaks.retain(|b| b.is_finite() && *b >= lo && *b <= hi);
    breaks.push(lo);
    breaks.push(hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks.windows(2).map(|w| (w[0], w[1])).filter(|(a, b)| b > a).collect()
}

pub(crate) fn finish(r: QuadResult) -> Result<QuadResult, QuadError> {
    if r.converged {
        Ok(r)
    } else {
        Err(QuadError::NotConverged { best: r })
    }
}
