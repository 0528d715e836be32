//! Two-band momentum-space picture of the chain and its Chern number.
//!
//! The mixing angle `theta` plays the role of a second quasi-momentum, so
//! `h(kx, theta) . sigma` is a Chern-insulator Hamiltonian on the torus
//! `kx in [0, pi)`, `theta in [0, 2 pi)`. Because `h(kx + pi) = sigma_z h(kx) sigma_z`
//! the `kx` circle closes with the `sigma_z` transition function.
//!
//! Three independent routes to the invariant are provided: the closed
//! window condition, a midpoint quadrature of the solid-angle density with
//! analytic derivatives, and the lattice gauge-link (plaquette) method.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticeParams;

const MIN_QUADRATURE_GRID: usize = 32;
const MIN_LINK_GRID: usize = 8;
const MIN_GAP_GRID: usize = 16;
const LINK_NORM_FLOOR: f64 = 1e-12;
const GAPLESS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochVector {
    pub h0: f64,
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.hx * self.hx + self.hy * self.hy + self.hz * self.hz).sqrt()
    }

    fn xyz(&self) -> [f64; 3] {
        [self.hx, self.hy, self.hz]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChernResult {
    pub value: f64,
    pub rounded: i64,
    pub quantization_error: f64,
    pub grid: (usize, usize),
}

impl ChernResult {
    fn from_value(value: f64, grid: (usize, usize)) -> Self {
        let rounded = value.round();
        Self {
            value,
            rounded: rounded as i64,
            quantization_error: (value - rounded).abs(),
            grid,
        }
    }
}

/// Range of `kx` covered by a quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KxDomain {
    /// `[0, pi)`, the torus used for the invariant.
    Half,
    /// `[0, 2 pi)`, covering the sphere twice.
    Full,
}

impl KxDomain {
    fn length(self) -> f64 {
        match self {
            KxDomain::Half => PI,
            KxDomain::Full => 2.0 * PI,
        }
    }
}

pub fn bloch_field(p: &LatticeParams, kx: f64, theta: f64) -> BlochVector {
    let (s, c) = kx.sin_cos();
    BlochVector {
        h0: p.delta_c,
        hx: 2.0 * p.j * c,
        hy: (2.0 * p.delta - p.je * p.mixing_sin(theta)) * s,
        hz: p.je * theta.cos(),
    }
}

pub fn band_energies(h: &BlochVector) -> (f64, f64) {
    let n = h.norm();
    (h.h0 - n, h.h0 + n)
}

/// Bulk band edges at fixed `theta`: `(max_kx E-, min_kx E+)`.
///
/// `|h|^2 = 4J^2 cos^2 kx + A^2 sin^2 kx + (Je cos theta)^2` is linear in
/// `cos^2 kx`, so its minimum over `kx` sits at `kx = 0` or `kx = pi/2`.
pub fn band_edges(p: &LatticeParams, theta: f64) -> (f64, f64) {
    let a = 2.0 * p.delta - p.je * p.mixing_sin(theta);
    let hz = p.je * theta.cos();
    let half_gap = ((4.0 * p.j * p.j).min(a * a) + hz * hz).sqrt();
    (p.delta_c - half_gap, p.delta_c + half_gap)
}

/// Minimum of `2|h|` over a `(kx, theta)` grid with `kx in [0, pi]` and `theta in [0, 2 pi)`.
pub fn bulk_gap(p: &LatticeParams, nk: usize, ntheta: usize) -> Result<f64> {
    if nk < MIN_GAP_GRID || ntheta < MIN_GAP_GRID {
        return Err(Error::InvalidGrid(format!(
            "gap grid must be at least {MIN_GAP_GRID} per axis, got {nk}x{ntheta}"
        )));
    }
    let gap = (0..ntheta)
        .into_par_iter()
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / ntheta as f64;
            (0..nk)
                .map(|i| {
                    let kx = PI * i as f64 / (nk - 1) as f64;
                    2.0 * bloch_field(p, kx, theta).norm()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(gap)
}

/// True when the bulk gap closes somewhere on the torus.
///
/// `|h| = 0` needs `cos theta = 0` and then `min(4J^2, (2 delta -+ Je)^2) = 0`.
pub fn is_gapless(p: &LatticeParams) -> bool {
    let scale = p.je.abs().max(p.j.abs()).max(p.delta.abs()).max(1.0);
    p.j.abs() <= GAPLESS_TOL * scale
        || ((2.0 * p.delta).abs() - p.je.abs()).abs() <= GAPLESS_TOL * scale
}

/// Closed window condition: `C = 1` for `|2 delta| < Je`, otherwise `0`.
///
/// The sign is reversed when `g2` is negated.
pub fn chern_analytic(p: &LatticeParams) -> Result<i64> {
    if !(p.je > 0.0) {
        return Err(Error::InvalidParams("Je must be positive".into()));
    }
    if is_gapless(p) {
        return Err(Error::Gapless);
    }
    let inside = (2.0 * p.delta).abs() < p.je;
    let orientation = if p.g2_negated { -1 } else { 1 };
    Ok(if inside { orientation } else { 0 })
}

/// Solid-angle density `h . (d_kx h x d_theta h) / |h|^3` with analytic derivatives.
pub fn solid_angle_density(p: &LatticeParams, kx: f64, theta: f64) -> f64 {
    let h = bloch_field(p, kx, theta).xyz();
    let (sk, ck) = kx.sin_cos();
    let (st, ct) = theta.sin_cos();
    let sign = if p.g2_negated { -1.0 } else { 1.0 };
    let a = 2.0 * p.delta - p.je * sign * st;
    let dk = [-2.0 * p.j * sk, a * ck, 0.0];
    let dt = [0.0, -p.je * sign * ct * sk, -p.je * st];
    let cross = [
        dk[1] * dt[2] - dk[2] * dt[1],
        dk[2] * dt[0] - dk[0] * dt[2],
        dk[0] * dt[1] - dk[1] * dt[0],
    ];
    let n = (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt();
    (h[0] * cross[0] + h[1] * cross[1] + h[2] * cross[2]) / (n * n * n)
}

/// Berry curvature of the ground band in the solid-angle orientation; integrates to `2 pi C`.
pub fn berry_curvature(p: &LatticeParams, kx: f64, theta: f64) -> f64 {
    0.5 * solid_angle_density(p, kx, theta)
}

/// Midpoint-rule value of `(1/4 pi) * integral of the solid-angle density` over the chosen `kx` range.
pub fn solid_angle_integral(p: &LatticeParams, nk: usize, ntheta: usize, domain: KxDomain) -> Result<f64> {
    if nk < MIN_QUADRATURE_GRID || ntheta < MIN_QUADRATURE_GRID {
        return Err(Error::InvalidGrid(format!(
            "quadrature grid must be at least {MIN_QUADRATURE_GRID} per axis, got {nk}x{ntheta}"
        )));
    }
    if is_gapless(p) {
        return Err(Error::Gapless);
    }
    let dk = domain.length() / nk as f64;
    let dt = 2.0 * PI / ntheta as f64;
    let rows: Vec<f64> = (0..nk)
        .into_par_iter()
        .map(|i| {
            let kx = (i as f64 + 0.5) * dk;
            neumaier_sum((0..ntheta).map(|j| solid_angle_density(p, kx, (j as f64 + 0.5) * dt)))
        })
        .collect();
    Ok(neumaier_sum(rows) * dk * dt / (4.0 * PI))
}

pub fn chern_solid_angle(p: &LatticeParams, nk: usize, ntheta: usize) -> Result<ChernResult> {
    let value = solid_angle_integral(p, nk, ntheta, KxDomain::Half)?;
    Ok(ChernResult::from_value(value, (nk, ntheta)))
}

/// Unit lower-band eigenvector of `h . sigma`, from whichever of the two
/// closed-form null vectors is better conditioned.
fn lower_eigenvector(h: &BlochVector) -> [C64; 2] {
    let n = h.norm();
    let a = [C64::new(h.hx, -h.hy), C64::new(-(n + h.hz), 0.0)];
    let b = [C64::new(h.hz - n, 0.0), C64::new(h.hx, h.hy)];
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    let (v, norm) = if na >= nb { (a, na) } else { (b, nb) };
    [v[0] / norm, v[1] / norm]
}

fn overlap(u: &[C64; 2], v: &[C64; 2]) -> C64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// Plaquette (gauge-link) Chern number on an `nk x ntheta` grid.
///
/// Links are normalised to unit modulus; the `kx = pi` column is the
/// `sigma_z` image of the `kx = 0` column. Plaquettes are traversed so
/// that the orientation agrees with the solid-angle integral.
pub fn chern_gauge_link(p: &LatticeParams, nk: usize, ntheta: usize) -> Result<ChernResult> {
    if nk < MIN_LINK_GRID || ntheta < MIN_LINK_GRID {
        return Err(Error::InvalidGrid(format!(
            "gauge-link grid must be at least {MIN_LINK_GRID} per axis, got {nk}x{ntheta}"
        )));
    }
    if is_gapless(p) {
        return Err(Error::Gapless);
    }
    let mut states: Vec<Vec<[C64; 2]>> = (0..nk)
        .into_par_iter()
        .map(|i| {
            let kx = PI * i as f64 / nk as f64;
            (0..ntheta)
                .map(|j| {
                    let theta = 2.0 * PI * j as f64 / ntheta as f64;
                    lower_eigenvector(&bloch_field(p, kx, theta))
                })
                .collect()
        })
        .collect();
    let closure: Vec<[C64; 2]> = states[0].iter().map(|u| [u[0], -u[1]]).collect();
    states.push(closure);

    let link = |u: &[C64; 2], v: &[C64; 2], ik: usize, it: usize| -> Result<C64> {
        let z = overlap(u, v);
        let r = z.norm();
        if r < LINK_NORM_FLOOR {
            return Err(Error::GridRefinement { ik, itheta: it });
        }
        Ok(z / r)
    };

    let rows: Vec<Result<f64>> = (0..nk)
        .into_par_iter()
        .map(|i| {
            let mut flux = Vec::with_capacity(ntheta);
            for j in 0..ntheta {
                let jn = (j + 1) % ntheta;
                let u00 = &states[i][j];
                let u10 = &states[i + 1][j];
                let u11 = &states[i + 1][jn];
                let u01 = &states[i][jn];
                let w = link(u00, u01, i, j)?
                    * link(u01, u11, i, jn)?
                    * link(u11, u10, i + 1, jn)?
                    * link(u10, u00, i + 1, j)?;
                flux.push(w.arg());
            }
            Ok(neumaier_sum(flux))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<f64>>>()?;
    let value = neumaier_sum(rows) / (2.0 * PI);
    Ok(ChernResult::from_value(value, (nk, ntheta)))
}

/// One point of a band/curvature map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandSample {
    pub kx: f64,
    pub theta: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub berry_curvature: f64,
}

/// Bands and curvature on the midpoint grid used by the solid-angle quadrature.
pub fn band_map(p: &LatticeParams, nk: usize, ntheta: usize) -> Vec<BandSample> {
    let dk = PI / nk as f64;
    let dt = 2.0 * PI / ntheta as f64;
    (0..nk)
        .into_par_iter()
        .flat_map_iter(|i| {
            let kx = (i as f64 + 0.5) * dk;
            (0..ntheta).map(move |j| {
                let theta = (j as f64 + 0.5) * dt;
                let (e_minus, e_plus) = band_energies(&bloch_field(p, kx, theta));
                BandSample {
                    kx,
                    theta,
                    e_minus,
                    e_plus,
                    berry_curvature: berry_curvature(p, kx, theta),
                }
            })
        })
        .collect()
}

/// Compensated (Kahan-Babuska-Neumaier) summation.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn p(delta: f64) -> LatticeParams {
        LatticeParams::new(1.0, delta, 1.0, 10)
    }

    fn close(a: BlochVector, b: [f64; 4]) -> bool {
        let got = [a.h0, a.hx, a.hy, a.hz];
        got.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn field_components() {
        assert!(close(bloch_field(&p(0.0), 0.0, 0.0), [0.0, 2.0, 0.0, 1.0]));
        assert!(close(bloch_field(&p(0.0), FRAC_PI_2, FRAC_PI_2), [0.0, 0.0, -1.0, 0.0]));
        assert!(close(bloch_field(&p(0.6), FRAC_PI_2, 0.0), [0.0, 0.0, 1.2, 1.0]));
    }

    #[test]
    fn energies() {
        let (lo, hi) = band_energies(&BlochVector { h0: 0.0, hx: 2.0, hy: 0.0, hz: 1.0 });
        assert!((lo + 5f64.sqrt()).abs() < 1e-15 && (hi - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(band_energies(&BlochVector { h0: 1.0, hx: 0.0, hy: 0.0, hz: 0.0 }), (1.0, 1.0));
        assert_eq!(band_energies(&BlochVector { h0: 0.0, hx: 0.0, hy: -1.0, hz: 0.0 }), (-1.0, 1.0));
    }

    #[test]
    fn analytic_window() {
        assert_eq!(chern_analytic(&p(0.0)).unwrap(), 1);
        assert_eq!(chern_analytic(&p(0.6)).unwrap(), 0);
        assert_eq!(chern_analytic(&p(-0.3)).unwrap(), 1);
        assert!(matches!(chern_analytic(&p(0.5)), Err(Error::Gapless)));
        assert!(matches!(chern_analytic(&p(-0.5)), Err(Error::Gapless)));
    }

    #[test]
    fn gap_at_center_of_topological_phase() {
        // grid includes kx = pi/2 and theta = pi/2
        let g = bulk_gap(&p(0.0), 65, 64).unwrap();
        assert!((g - 2.0).abs() < 1e-12, "{g}");
    }

    #[test]
    fn uniform_chain_is_gapless() {
        let mut q = p(0.0);
        q.je = 0.0;
        assert!(bulk_gap(&q, 65, 64).unwrap() < 1e-12);
    }

    #[test]
    fn band_edges_match_grid_minimum() {
        for &(d, theta) in &[(0.0, 0.3), (0.3, 1.9), (0.7, 4.0), (-0.8, 5.5)] {
            let q = p(d);
            let (lo, hi) = band_edges(&q, theta);
            let grid_min = (0..=20_000)
                .map(|i| bloch_field(&q, PI * i as f64 / 20_000.0, theta).norm())
                .fold(f64::INFINITY, f64::min);
            assert!((hi - grid_min).abs() < 1e-9);
            assert!((lo + grid_min).abs() < 1e-9);
        }
    }

    #[test]
    fn solid_angle_orientation() {
        let c = chern_solid_angle(&p(0.0), 256, 256).unwrap();
        assert_eq!(c.rounded, 1);
        assert!(c.quantization_error < 1e-3);
        assert_eq!(chern_solid_angle(&p(0.6), 64, 64).unwrap().rounded, 0);
        let mut neg = p(0.0);
        neg.g2_negated = true;
        assert_eq!(chern_solid_angle(&neg, 64, 64).unwrap().rounded, -1);
        assert_eq!(chern_gauge_link(&neg, 16, 16).unwrap().rounded, -1);
        assert_eq!(chern_analytic(&neg).unwrap(), -1);
    }

    #[test]
    fn gauge_link_examples() {
        let c = chern_gauge_link(&p(0.0), 32, 32).unwrap();
        assert_eq!(c.rounded, 1);
        assert!(c.quantization_error < 1e-12);
        assert_eq!(chern_gauge_link(&p(0.6), 32, 32).unwrap().rounded, 0);
    }

    #[test]
    fn gauge_link_steps_at_transition() {
        for (d, want) in [(0.45, 1), (0.49, 1), (0.51, 0), (0.55, 0)] {
            assert_eq!(chern_gauge_link(&p(d), 48, 48).unwrap().rounded, want, "delta={d}");
        }
    }

    #[test]
    fn grids_are_validated() {
        assert!(matches!(chern_gauge_link(&p(0.0), 4, 32), Err(Error::InvalidGrid(_))));
        assert!(matches!(chern_solid_angle(&p(0.0), 16, 256), Err(Error::InvalidGrid(_))));
        assert!(matches!(bulk_gap(&p(0.0), 8, 8), Err(Error::InvalidGrid(_))));
        assert!(matches!(chern_gauge_link(&p(0.5), 32, 32), Err(Error::Gapless)));
    }

    #[test]
    fn compensated_sum() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(xs), 2.0);
    }
}
