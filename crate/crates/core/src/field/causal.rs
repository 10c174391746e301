//! Intersection of an observer's past light cone with a pulse world sheet.
//!
//! For an observer at transverse distance `ρ`, longitudinal position `z` and
//! `s = c·t`, a source point `z'` on the pulse axis contributes iff
//!
//! ```text
//! z' ∈ [0, D]   and   s − r(z') − L ≤ z' ≤ s − r(z'),   r(z') = √(ρ² + (z − z')²)
//! ```
//!
//! `φ(z') = s − r(z') − z'` is non-increasing, so the support is an interval
//! `[ā, b̄] ∩ [0, D]` with `φ(ā) = L` and `φ(b̄) = 0`.

use super::{LocalPoint, PulseGeometry, SpacetimePoint};

/// Zone of a query point relative to the pulse world sheet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Zone {
    /// Past cone has not yet reached the emission of the front.
    IMinus,
    /// Past cone has moved beyond the absorbed tail.
    IPlus,
    /// Emission only: `[0, b̄]`.
    II,
    /// Free passage: `[ā, b̄]`.
    III,
    /// Absorption only: `[ā, D]`.
    IV,
    /// Emission and absorption: `[0, D]`.
    V,
}

impl Zone {
    pub fn is_disconnected(self) -> bool {
        matches!(self, Zone::IMinus | Zone::IPlus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorSign {
    Negative,
    Zero,
    Positive,
}

/// One auxiliary bound. `value` is `None` exactly when the denominator
/// vanishes (query point on a light front).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxBound {
    pub value: Option<f64>,
    pub denominator: DenominatorSign,
}

impl AuxBound {
    fn from_front(z: f64, w: f64, rho: f64) -> Self {
        if w == 0.0 {
            return Self {
                value: None,
                denominator: DenominatorSign::Zero,
            };
        }
        let denominator = if w > 0.0 {
            DenominatorSign::Positive
        } else {
            DenominatorSign::Negative
        };
        Self {
            value: Some(z + (w * w - rho * rho) / (2.0 * w)),
            denominator,
        }
    }

    /// The bound on the causal side of the light cone, if any.
    fn causal(&self) -> Option<f64> {
        match self.denominator {
            DenominatorSign::Positive => self.value,
            _ => None,
        }
    }
}

/// Effective source interval `[a, b]` for one query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalBounds {
    pub zone: Zone,
    pub a: f64,
    pub b: f64,
    pub abar: Option<f64>,
    pub bbar: Option<f64>,
}

impl CausalBounds {
    pub fn is_empty(&self) -> bool {
        self.zone.is_disconnected()
    }

    fn empty(zone: Zone, abar: Option<f64>, bbar: Option<f64>) -> Self {
        Self {
            zone,
            a: 0.0,
            b: 0.0,
            abar,
            bbar,
        }
    }
}

/// `ζ = (z' − z) + √(ρ² + (z' − z)²)` with `ρ = √(x² + y²)`.
pub fn zeta(x: f64, y: f64, z: f64, zprime: f64) -> f64 {
    zeta_local(x.hypot(y), zprime - z)
}

/// `ζ` in terms of `ρ` and `u = z' − z`. The `u < 0` branch is rationalized
/// so that it keeps full relative precision when `ρ ≪ |u|`.
pub fn zeta_local(rho: f64, u: f64) -> f64 {
    let r = rho.hypot(u);
    if u >= 0.0 {
        u + r
    } else {
        rho * rho / (r - u)
    }
}

/// `t − |x − x'| / c`.
pub fn retarded_time(p: &SpacetimePoint, xprime: [f64; 3], c: f64) -> f64 {
    let dx = p.x - xprime[0];
    let dy = p.y - xprime[1];
    let dz = p.z - xprime[2];
    p.t - (dx * dx + dy * dy + dz * dz).sqrt() / c
}

/// Auxiliary bounds `(ā, b̄)` for a `+z` pulse of length `length`.
pub fn aux_bounds(x: f64, y: f64, z: f64, t: f64, length: f64, c: f64) -> (AuxBound, AuxBound) {
    let rho = x.hypot(y);
    let s = c * t;
    (
        AuxBound::from_front(z, s - length - z, rho),
        AuxBound::from_front(z, s - z, rho),
    )
}

/// Causal bounds of `geom` for a world-frame query point.
pub fn integration_bounds(p: &SpacetimePoint, geom: &PulseGeometry, c: f64) -> CausalBounds {
    local_bounds(geom.local(p, c), geom.travel, geom.length)
}

/// Same as [`integration_bounds`] but always resolved by bracketing the
/// division-free predicate.
pub fn integration_bounds_bracketed(
    p: &SpacetimePoint,
    geom: &PulseGeometry,
    c: f64,
) -> CausalBounds {
    local_bounds_bracketed(geom.local(p, c), geom.travel, geom.length)
}

/// Causal bounds in the pulse frame. Uses the closed-form auxiliary bounds
/// unless a light-front denominator is within rounding of zero, in which case
/// the predicate is bracketed instead.
pub fn local_bounds(q: LocalPoint, travel: f64, length: f64) -> CausalBounds {
    let LocalPoint { rho, z, s } = q;
    let w_b = s - z;
    let w_a = w_b - length;
    let scale = z.abs().max(s.abs()).max(travel).max(rho);
    let eps = 64.0 * f64::EPSILON * scale;
    if w_b.abs() <= eps || w_a.abs() <= eps {
        return local_bounds_bracketed(q, travel, length);
    }

    let abar = AuxBound::from_front(z, w_a, rho).causal();
    let bbar = AuxBound::from_front(z, w_b, rho).causal();
    let lower = abar.unwrap_or(f64::NEG_INFINITY);
    let upper = match bbar {
        Some(b) => b,
        None => return CausalBounds::empty(Zone::IMinus, abar, bbar),
    };
    classify(lower, upper, travel, abar, bbar)
}

fn classify(
    lower: f64,
    upper: f64,
    travel: f64,
    abar: Option<f64>,
    bbar: Option<f64>,
) -> CausalBounds {
    if upper < 0.0 {
        return CausalBounds::empty(Zone::IMinus, abar, bbar);
    }
    if lower > travel {
        return CausalBounds::empty(Zone::IPlus, abar, bbar);
    }
    let emits = lower <= 0.0;
    let absorbs = upper >= travel;
    let zone = match (emits, absorbs) {
        (true, false) => Zone::II,
        (false, false) => Zone::III,
        (false, true) => Zone::IV,
        (true, true) => Zone::V,
    };
    CausalBounds {
        zone,
        a: lower.max(0.0),
        b: upper.min(travel),
        abar,
        bbar,
    }
}

/// `s − r(z') − z'`, the light-front coordinate `c·t_r − z'` seen from `q`.
#[inline]
fn front_offset(q: LocalPoint, zp: f64) -> f64 {
    q.s - q.rho.hypot(q.z - zp) - zp
}

/// Causal bounds from the predicate `0 ≤ φ(z') ≤ L` alone: no division, with
/// interior endpoints located by bisection over `[0, D]`.
pub fn local_bounds_bracketed(q: LocalPoint, travel: f64, length: f64) -> CausalBounds {
    let at_start = front_offset(q, 0.0);
    let at_end = front_offset(q, travel);
    if at_start < 0.0 {
        return CausalBounds::empty(Zone::IMinus, None, None);
    }
    if at_end > length {
        return CausalBounds::empty(Zone::IPlus, None, None);
    }
    let abar = (at_start > length).then(|| last_above(q, length, 0.0, travel));
    let bbar = (at_end < 0.0).then(|| last_above(q, 0.0, 0.0, travel));
    let lower = abar.unwrap_or(0.0);
    let upper = bbar.unwrap_or(travel);
    let mut out = classify(
        if abar.is_some() { lower } else { f64::NEG_INFINITY },
        if bbar.is_some() { upper } else { f64::INFINITY },
        travel,
        abar,
        bbar,
    );
    out.a = lower;
    out.b = upper;
    out
}

/// Boundary of `{z' : φ(z') ≥ level}` inside `[lo, hi]`, assuming
/// `φ(lo) ≥ level > φ(hi)`.
fn last_above(q: LocalPoint, level: f64, mut lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return 0.5 * (lo + hi);
        }
        if front_offset(q, mid) >= level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}
