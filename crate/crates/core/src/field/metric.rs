//! Closed-form metric amplitude and its brute-force retarded-integral oracle.

use super::causal::{local_bounds, zeta_local};
use super::{FieldError, LocalPoint, PulseGeometry, SpacetimePoint};
use crate::units::UnitSystem;

/// `ln(ζ(b)/ζ(a))` in the pulse frame, without the unit prefactor.
///
/// Returns exactly `0.0` for causally disconnected points.
pub fn local_log_ratio(
    q: LocalPoint,
    travel: f64,
    length: f64,
    rho_min: f64,
) -> Result<f64, FieldError> {
    let cb = local_bounds(q, travel, length);
    if cb.is_empty() {
        return Ok(0.0);
    }
    if q.rho < rho_min && cb.a <= q.z {
        return Err(FieldError::SingularOnAxis { rho: q.rho, rho_min });
    }
    let za = zeta_local(q.rho, cb.a - q.z);
    let zb = zeta_local(q.rho, cb.b - q.z);
    if za <= 0.0 || zb <= 0.0 {
        return Err(FieldError::SingularOnAxis { rho: q.rho, rho_min });
    }
    Ok((zb / za).ln())
}

/// Metric amplitude of a single pulse at a world-frame point.
pub fn h_single(
    p: &SpacetimePoint,
    geom: &PulseGeometry,
    units: &UnitSystem,
) -> Result<f64, FieldError> {
    let q = geom.local(p, units.c_value);
    let ratio = local_log_ratio(q, geom.travel, geom.length, geom.rho_min)?;
    if ratio == 0.0 {
        return Ok(0.0);
    }
    Ok(units.kappa0 * geom.amplitude * ratio)
}

/// Brute-force evaluation of the reduced retarded integral
/// `κ₀ ∫₀ᴰ dz' 𝟙[s − r − L ≤ z' ≤ s − r] / r` on `n_steps` uniform cells.
///
/// Support edges inside a cell are located by bisecting the indicator, and
/// each covered piece uses the midpoint rule. None of the closed-form bounds
/// or `ζ` are used.
pub fn h_single_oracle(
    p: &SpacetimePoint,
    geom: &PulseGeometry,
    units: &UnitSystem,
    n_steps: usize,
) -> f64 {
    assert!(n_steps >= 1000, "oracle needs at least 1000 steps, got {n_steps}");
    let q = geom.local(p, units.c_value);
    let (travel, length) = (geom.travel, geom.length);
    let inside = |zp: f64| {
        let front = q.s - q.rho.hypot(q.z - zp);
        front - length <= zp && zp <= front
    };
    let kernel = |zp: f64| 1.0 / q.rho.hypot(q.z - zp);
    let step = travel / n_steps as f64;

    let mut total = 0.0;
    let mut left_in = inside(0.0);
    for i in 0..n_steps {
        let lo = i as f64 * step;
        let hi = if i + 1 == n_steps { travel } else { (i + 1) as f64 * step };
        let right_in = inside(hi);
        let (from, to) = match (left_in, right_in) {
            (true, true) => (lo, hi),
            (true, false) => (lo, edge(&inside, lo, hi)),
            (false, true) => (edge(&inside, hi, lo), hi),
            (false, false) => {
                left_in = right_in;
                continue;
            }
        };
        if to > from {
            total += (to - from) * kernel(0.5 * (from + to));
        }
        left_in = right_in;
    }
    units.kappa0 * geom.amplitude * total
}

/// Bisects between a point inside the support and one outside it.
fn edge(inside: &impl Fn(f64) -> bool, mut inner: f64, mut outer: f64) -> f64 {
    loop {
        let mid = 0.5 * (inner + outer);
        if mid == inner || mid == outer {
            return inner;
        }
        if inside(mid) {
            inner = mid;
        } else {
            outer = mid;
        }
    }
}

/// Linear superposition of two pulses.
pub fn h_two_pulse(
    p: &SpacetimePoint,
    pulse1: &PulseGeometry,
    pulse2: &PulseGeometry,
    units: &UnitSystem,
) -> Result<f64, FieldError> {
    Ok(h_single(p, pulse1, units)? + h_single(p, pulse2, units)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Direction;
    use std::f64::consts::LN_2;

    fn plus() -> PulseGeometry {
        PulseGeometry::new(5.0, 1.0, Direction::PlusZ).unwrap()
    }

    #[test]
    fn ln_two_point() {
        let u = UnitSystem::natural();
        let p = SpacetimePoint::new(4.0, 1.0, 0.0, 2.0);
        let h = h_single(&p, &plus(), &u).unwrap();
        assert!((h - LN_2).abs() < 1e-15);
        let o = h_single_oracle(&p, &plus(), &u, 1_000_000);
        assert!((o - h).abs() < 1e-6, "oracle {o} vs {h}");
    }

    #[test]
    fn disconnected_points_are_exactly_zero() {
        let u = UnitSystem::natural();
        let p = SpacetimePoint::new(0.1, 1.0, 0.0, 10.0);
        assert_eq!(h_single(&p, &plus(), &u).unwrap(), 0.0);
        for n in [1000, 10_000] {
            assert_eq!(h_single_oracle(&p, &plus(), &u, n), 0.0);
        }
    }

    #[test]
    fn on_axis_in_wake_is_an_error() {
        let u = UnitSystem::natural();
        let p = SpacetimePoint::new(4.0, 0.0, 0.0, 3.5);
        assert!(matches!(
            h_single(&p, &plus(), &u),
            Err(FieldError::SingularOnAxis { .. })
        ));
        let p = SpacetimePoint::new(4.0, 1e-7, 0.0, 3.5);
        assert!(h_single(&p, &plus(), &u).is_err());
        // Below the default guard but with a looser custom guard.
        let g = plus().with_rho_min(1e-9);
        assert!(h_single(&p, &g, &u).unwrap().is_finite());
    }

    #[test]
    fn on_axis_behind_the_pulse_is_finite() {
        // Every source point lies ahead of the observer: ζ(a) = 2(a − z) > 0.
        let u = UnitSystem::natural();
        let p = SpacetimePoint::new(4.0, 0.0, 0.0, 2.0);
        let h = h_single(&p, &plus(), &u).unwrap();
        assert!(h.is_finite() && h > 0.0);
    }

    #[test]
    fn amplitude_zero_second_pulse_reduces_to_single() {
        let u = UnitSystem::natural();
        let p1 = plus().with_offset(1.0, 0.0);
        let p2 = PulseGeometry::new(5.0, 1.0, Direction::MinusZ)
            .unwrap()
            .with_offset(2.0, 0.0)
            .with_amplitude(0.0);
        let p = SpacetimePoint::new(3.0, 0.3, 0.2, 2.4);
        assert_eq!(
            h_two_pulse(&p, &p1, &p2, &u).unwrap(),
            h_single(&p, &p1, &u).unwrap()
        );
    }

    #[test]
    fn oracle_error_shrinks_with_step() {
        let u = UnitSystem::natural();
        for p in [
            SpacetimePoint::new(4.0, 1.0, 0.0, 2.0),
            SpacetimePoint::new(3.3, 0.7, 0.4, 1.1),
            SpacetimePoint::new(7.0, 1.5, 0.0, 3.0),
        ] {
            let h = h_single(&p, &plus(), &u).unwrap();
            let mut last = f64::INFINITY;
            for n in [1000, 2000, 4000, 8000, 16000] {
                let err = (h_single_oracle(&p, &plus(), &u, n) - h).abs();
                assert!(err < last, "n = {n}: {err} !< {last}");
                last = err;
            }
        }
    }
}
