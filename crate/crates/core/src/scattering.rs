//! Reflection from the left end of the chain when it is wired between two semi-infinite leads.
//!
//! Each lead is a uniform chain of half-bandwidth `W` ([`LatticeParams::lead_half_bandwidth`],
//! `J` by default) coupled to the device with its own hopping `W/2`. The
//! device Green function is available both as a dense inverse of a finite
//! chain and in closed form for a semi-infinite one; inside the bulk gap the
//! two agree exponentially fast in `L`.
//!
//! Closed form. Writing `a = Ep - P1`, `b = Ep + P1` for the on-site
//! terms of the two sublattices and `t1`, `t2` for the hoppings, the
//! semi-infinite chain seen from its first site has inverse surface Green
//! function `x` satisfying `b x^2 - S x + a t2^2 = 0` with
//! `S = a b + t2^2 - t1^2`. The decaying root is `x = (S - sqrt(D)) / (2b)`,
//! `D = S^2 - 4 a b t2^2`, which factorises as
//! `D = [Ep^2 - (t1+t2)^2 - P1^2] [Ep^2 - (t2-t1)^2 - P1^2]`. Then
//! `G11 = 1/(x - Sigma_L)` and, with `m1 = -2 b (x - E/2)`, `m2 = b sqrt(W^2 - E^2)`,
//! `G11 = -2b / (m1 - i m2)` and `r = -(m1 + i m2) / (m1 - i m2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{chain_matrix, LatticeParams};
use crate::linalg::{inverse_element, ComplexMatrix};
use crate::winding::{trace_winding, ReflectionTrace};
use crate::C64;

pub const DEFAULT_PUMP_SAMPLES: usize = 257;

/// Retarded self-energies `(Sigma_L, Sigma_R)` of the two leads at energy `e`.
///
/// The leads are mirror images of each other, so both equal `(E - i sqrt(W^2 - E^2))/2`.
pub fn lead_self_energy(e: f64, half_bandwidth: f64) -> Result<(C64, C64)> {
    let v = lead_velocity(e, half_bandwidth)?;
    let sigma = C64::new(0.5 * e, -0.5 * v);
    Ok((sigma, sigma))
}

/// `sqrt(W^2 - E^2)`, the lead group velocity factor entering the Fisher-Lee relation.
pub fn lead_velocity(e: f64, half_bandwidth: f64) -> Result<f64> {
    if !e.is_finite() || !(e.abs() < half_bandwidth) {
        return Err(Error::EvanescentLead { energy: e, bandwidth: half_bandwidth });
    }
    Ok((half_bandwidth * half_bandwidth - e * e).sqrt())
}

fn open_device(p: &LatticeParams, e: f64) -> Result<ComplexMatrix> {
    p.validate()?;
    let (sl, sr) = lead_self_energy(e, p.lead_half_bandwidth())?;
    let n = p.sites;
    let mut a = chain_matrix(p, p.theta, true).scaled(C64::new(-1.0, 0.0)).shifted(C64::new(e, 0.0));
    a.add_to(0, 0, -sl);
    a.add_to(n - 1, n - 1, -sr);
    Ok(a)
}

/// `[G_D]_11` of the finite chain (detuning included) with both leads attached.
pub fn device_green_11_numeric(p: &LatticeParams, e: f64) -> Result<C64> {
    inverse_element(&open_device(p, e)?, 0, 0)
}

/// `[G_D]_{L,1}`, the propagator across the whole device.
pub fn device_green_l1_numeric(p: &LatticeParams, e: f64) -> Result<C64> {
    let a = open_device(p, e)?;
    inverse_element(&a, p.sites - 1, 0)
}

/// `r = -1 + i sqrt(W^2 - E^2) [G_D]_11`.
pub fn reflection_fisher_lee(p: &LatticeParams, e: f64) -> Result<C64> {
    let v = lead_velocity(e, p.lead_half_bandwidth())?;
    Ok(C64::new(-1.0, 0.0) + C64::new(0.0, v) * device_green_11_numeric(p, e)?)
}

/// `t = i sqrt(W^2 - E^2) [G_D]_{L,1}`.
pub fn transmission_fisher_lee(p: &LatticeParams, e: f64) -> Result<C64> {
    let v = lead_velocity(e, p.lead_half_bandwidth())?;
    Ok(C64::new(0.0, v) * device_green_l1_numeric(p, e)?)
}

/// Ingredients of the closed-form reflection at one angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedFormParts {
    pub m1: f64,
    pub m2: f64,
    /// `Je cos(theta)`.
    pub p1: f64,
    /// `Je sin(theta)`, sign-flipped for the negated-coupling variant.
    pub p2: f64,
    /// `[G_D]_11`.
    pub green_11: C64,
    pub reflection: C64,
}

/// The two factors whose product sits under the square root; both are negative inside the gap.
pub fn gap_brackets(p: &LatticeParams, ep: f64, theta: f64) -> (f64, f64) {
    let (t1, t2) = (p.intra_hop(theta), p.inter_hop(theta));
    let p1 = p.stagger(theta);
    let q = ep * ep - p1 * p1;
    (q - (t1 + t2).powi(2), q - (t2 - t1).powi(2))
}

/// Closed-form `[G_D]_11` and `r` for a semi-infinite device at in-gap energy `ep = E - DeltaC`.
pub fn closed_form(p: &LatticeParams, ep: f64, theta: f64) -> Result<ClosedFormParts> {
    p.validate()?;
    let e = ep + p.delta_c;
    let v = lead_velocity(e, p.lead_half_bandwidth())?;
    let (u1, u2) = gap_brackets(p, ep, theta);
    if !(u1 < 0.0 && u2 < 0.0) {
        return Err(Error::NotInGap { ep, theta });
    }
    let (t1, t2) = (p.intra_hop(theta), p.inter_hop(theta));
    let p1 = p.stagger(theta);
    let (a, b) = (ep - p1, ep + p1);
    let s = a * b + t2 * t2 - t1 * t1;
    let root = (u1 * u2).sqrt();

    // decaying root of b x^2 - S x + a t2^2 = 0, in the form free of cancellation
    let x = if s > 0.0 {
        2.0 * a * t2 * t2 / (s + root)
    } else {
        (s - root) / (2.0 * b)
    };
    let m1 = t1 * t1 - t2 * t2 + b * (p.delta_c + p1) + root;
    let m2 = b * v;
    let (green_11, reflection) = if x.is_finite() {
        let mu = x - 0.5 * e;
        let den = C64::new(mu, 0.5 * v);
        (den.inv(), -C64::new(mu, -0.5 * v) / den)
    } else {
        (C64::new(0.0, 0.0), C64::new(-1.0, 0.0))
    };
    Ok(ClosedFormParts {
        m1,
        m2,
        p1,
        p2: p.je * p.mixing_sin(theta),
        green_11,
        reflection,
    })
}

/// Closed-form `[G_D]_11` at `p.theta`.
pub fn device_green_11_closed(p: &LatticeParams, ep: f64) -> Result<C64> {
    Ok(closed_form(p, ep, p.theta)?.green_11)
}

/// Closed-form reflection `-(m1 + i m2)/(m1 - i m2)` at `p.theta`; unimodular by construction.
pub fn reflection_closed(p: &LatticeParams, ep: f64) -> Result<C64> {
    Ok(closed_form(p, ep, p.theta)?.reflection)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PumpResult {
    /// Charge pumped per cycle.
    pub q: i64,
    pub ep: f64,
    pub trace: ReflectionTrace,
}

/// Winding of the closed-form reflection phase over one cycle of `theta`.
pub fn pumped_charge(p: &LatticeParams, ep: f64, samples: usize) -> Result<PumpResult> {
    p.validate()?;
    if crate::bloch::is_gapless(p) {
        return Err(Error::Gapless);
    }
    let trace = trace_winding(|theta| Ok(closed_form(p, ep, theta)?.reflection), samples)?;
    Ok(PumpResult { q: trace.winding, ep, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn chain(delta: f64, sites: usize) -> LatticeParams {
        LatticeParams::new(1.0, delta, 1.0, sites)
    }

    #[test]
    fn self_energy_examples() {
        let (l, r) = lead_self_energy(0.0, 1.0).unwrap();
        assert_eq!(l, C64::new(0.0, -0.5));
        assert_eq!(r, l);
        let (l, _) = lead_self_energy(0.6, 1.0).unwrap();
        assert!((l - C64::new(0.3, -0.4)).norm() < 1e-15);
        let (l, _) = lead_self_energy(1.0 - 1e-12, 1.0).unwrap();
        assert!((l.re - 0.5).abs() < 1e-9 && l.im.abs() < 1e-5);
        assert!(matches!(lead_self_energy(1.0, 1.0), Err(Error::EvanescentLead { .. })));
        assert!(matches!(lead_self_energy(-1.5, 1.0), Err(Error::EvanescentLead { .. })));
    }

    #[test]
    fn transparent_when_device_matches_lead() {
        // uniform chain with hopping J and a lead of hopping J: one infinite wire
        let mut p = chain(0.0, 10);
        p.je = 0.0;
        p.lead_hopping = Some(2.0);
        let g = device_green_11_numeric(&p, 0.0).unwrap();
        assert!((g - C64::new(0.0, -0.5)).norm() < 1e-14);
        assert!(reflection_fisher_lee(&p, 0.0).unwrap().norm() < 1e-14);
        let e = 0.7;
        let t = transmission_fisher_lee(&p, e).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flux_conserved_at_any_energy() {
        let p = chain(0.2, 12).with_theta(0.9).with_detuning(0.1);
        for e in [-0.9, -0.4, 0.0, 0.35, 0.8] {
            let r = reflection_fisher_lee(&p, e).unwrap();
            let t = transmission_fisher_lee(&p, e).unwrap();
            assert!((r.norm_sqr() + t.norm_sqr() - 1.0).abs() < 1e-12, "E={e}");
        }
    }

    #[test]
    fn closed_form_at_zero_angle() {
        let c = closed_form(&chain(0.0, 10), 0.0, 0.0).unwrap();
        let m1 = 1.0 + 5f64.sqrt();
        assert!((c.m1 - m1).abs() < 1e-14);
        assert!((c.m2 - 1.0).abs() < 1e-14);
        let r = -C64::new(m1, 1.0) / C64::new(m1, -1.0);
        assert!((c.reflection - r).norm() < 1e-14);
        assert!((c.green_11 - C64::new(-2.0, 0.0) / C64::new(m1, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn left_edge_resonance_reflects_in_phase() {
        // Ep + P1 = 0 with a left edge state at zero energy: the surface Green function diverges
        let c = closed_form(&chain(0.0, 10), 0.0, FRAC_PI_2).unwrap();
        assert!(c.m2.abs() < 1e-15);
        assert!((c.reflection - C64::new(1.0, 0.0)).norm() < 1e-12);
        let numeric = reflection_fisher_lee(&chain(0.0, 60).with_theta(FRAC_PI_2), 0.0).unwrap();
        assert!((numeric - c.reflection).norm() < 1e-6);
    }

    #[test]
    fn no_edge_state_reflects_out_of_phase() {
        // at theta = 3 pi/2, t1 = 1.5 > t2 = 0.5, no left edge state: the surface element vanishes
        let c = closed_form(&chain(0.0, 10), 0.0, 1.5 * PI).unwrap();
        assert!(c.m2.abs() < 1e-15);
        assert!(c.green_11.norm() < 1e-15);
        assert!((c.reflection + 1.0).norm() < 1e-12);
    }

    #[test]
    fn closed_form_is_unimodular() {
        let p = chain(0.1, 10).with_detuning(0.05);
        for k in 0..64 {
            let r = closed_form(&p, 0.1, k as f64 * PI / 32.0).unwrap().reflection;
            assert!((r.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_long_finite_chain() {
        for k in 0..16 {
            let theta = k as f64 * PI / 8.0;
            let p = chain(0.0, 60).with_theta(theta);
            let closed = device_green_11_closed(&p, 0.0).unwrap();
            let numeric = device_green_11_numeric(&p, 0.0).unwrap();
            assert!((closed - numeric).norm() < 1e-6, "theta={theta}");
        }
    }

    #[test]
    fn boundary_insensitive_in_gap() {
        let p = chain(0.0, 20).with_theta(PI);
        let g20 = device_green_11_numeric(&p, 0.2).unwrap();
        let g40 = device_green_11_numeric(&p.with_sites(40), 0.2).unwrap();
        assert!((g20 - g40).norm() < 1e-8);
    }

    #[test]
    fn out_of_gap_energy_rejected() {
        // Ep = 1.5 lies above the upper band edge at theta = pi/2 yet inside a wide lead band
        let mut p = chain(0.0, 10);
        p.lead_hopping = Some(3.0);
        assert!(matches!(closed_form(&p, 1.5, FRAC_PI_2), Err(Error::NotInGap { .. })));
        assert!(matches!(closed_form(&p, 3.5, FRAC_PI_2), Err(Error::EvanescentLead { .. })));
    }

    #[test]
    fn pumped_charge_examples() {
        for (delta, q) in [(0.0, 1), (0.6, 0), (-0.6, 0)] {
            let r = pumped_charge(&chain(delta, 10), 0.0, DEFAULT_PUMP_SAMPLES).unwrap();
            assert_eq!(r.q, q, "delta={delta}");
            assert!(r.trace.residual.abs() < 1e-3);
        }
        assert!(matches!(pumped_charge(&chain(0.5, 10), 0.0, 257), Err(Error::Gapless)));
    }
}
