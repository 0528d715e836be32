//! Open-chain spectra as a function of the mixing angle, and the edge states inside the bulk gap.
//!
//! "In-gap" is judged against the exact Bloch band edges at each `theta`,
//! not against the finite-chain spectrum. Energies are measured in the
//! cavity frame, so the detuning `DeltaC` is left out.

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::band_edges;
use crate::error::{Error, Result};
use crate::lattice::{chain_matrix, LatticeParams};
use crate::linalg::{hermitian_eig, ComplexMatrix, ComplexVector};
use crate::winding::cycle_grid;

/// Relative safety margin (in units of `Je`) applied to the gap bounds.
pub const EDGE_MARGIN: f64 = 1e-9;
pub const DEFAULT_THETA_POINTS: usize = 201;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeSpectrum {
    pub theta_grid: Vec<f64>,
    /// Ascending eigenvalues at each angle.
    pub energies: Vec<Vec<f64>>,
    pub edge_flags: Vec<Vec<bool>>,
    pub gap_bounds: Vec<(f64, f64)>,
}

impl EdgeSpectrum {
    pub fn edge_count(&self, itheta: usize) -> usize {
        self.edge_flags[itheta].iter().filter(|&&f| f).count()
    }

    /// Indices of angles with at least one in-gap level.
    pub fn edge_thetas(&self) -> Vec<usize> {
        (0..self.theta_grid.len())
            .filter(|&i| self.edge_count(i) > 0)
            .collect()
    }

    pub fn has_edge_states(&self) -> bool {
        self.edge_flags.iter().flatten().any(|&f| f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityProfile {
    pub site_probabilities: Vec<f64>,
}

impl DensityProfile {
    /// Inverse participation ratio `sum_j p_j^2`.
    pub fn ipr(&self) -> f64 {
        self.site_probabilities.iter().map(|p| p * p).sum()
    }

    pub fn left_weight(&self, sites: usize) -> f64 {
        self.site_probabilities.iter().take(sites).sum()
    }

    pub fn right_weight(&self, sites: usize) -> f64 {
        self.site_probabilities.iter().rev().take(sites).sum()
    }

    /// Mean site index.
    pub fn center(&self) -> f64 {
        self.site_probabilities
            .iter()
            .enumerate()
            .map(|(j, p)| j as f64 * p)
            .sum()
    }
}

pub fn density_profile(v: &ComplexVector) -> Result<DensityProfile> {
    let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if !(norm_sqr > 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(DensityProfile {
        site_probabilities: v.iter().map(|z| z.norm_sqr() / norm_sqr).collect(),
    })
}

fn in_gap_flags(energies: &[f64], (lower, upper): (f64, f64), margin: f64) -> Vec<bool> {
    energies
        .iter()
        .map(|&e| e > lower + margin && e < upper - margin)
        .collect()
}

fn cavity_frame(p: &LatticeParams) -> LatticeParams {
    p.with_detuning(0.0)
}

pub fn default_theta_grid() -> Vec<f64> {
    cycle_grid(DEFAULT_THETA_POINTS)
}

pub fn open_spectrum(p: &LatticeParams, theta_grid: &[f64]) -> Result<EdgeSpectrum> {
    p.validate()?;
    let frame = cavity_frame(p);
    let margin = EDGE_MARGIN * p.je.max(f64::MIN_POSITIVE);
    let rows = theta_grid
        .par_iter()
        .map(|&theta| {
            let eig = hermitian_eig(&chain_matrix(&frame, theta, false))?;
            let bounds = band_edges(&frame, theta);
            let flags = in_gap_flags(&eig.values, bounds, margin);
            Ok((eig.values, flags, bounds))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut spectrum = EdgeSpectrum {
        theta_grid: theta_grid.to_vec(),
        energies: Vec::with_capacity(rows.len()),
        edge_flags: Vec::with_capacity(rows.len()),
        gap_bounds: Vec::with_capacity(rows.len()),
    };
    for (e, f, b) in rows {
        spectrum.energies.push(e);
        spectrum.edge_flags.push(f);
        spectrum.gap_bounds.push(b);
    }
    Ok(spectrum)
}

/// In-gap states at one angle, ordered from the left edge to the right edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeStates {
    pub theta: f64,
    /// Positions of the in-gap levels in the ascending open-chain spectrum.
    pub indices: Vec<usize>,
    /// Energy expectation of each edge-resolved state.
    pub energies: Vec<f64>,
    pub profiles: Vec<DensityProfile>,
    /// Inverse participation ratio of each state.
    pub localization: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<ComplexVector>,
}

/// Finds the in-gap levels at `theta` and resolves them into edge-localised states.
///
/// A finite chain hybridises the left and right edge modes into bonding and
/// antibonding pairs wherever their energies meet. The in-gap subspace is
/// therefore re-diagonalised with the site-position operator, which splits
/// it into states localised at either end; each state's energy is its
/// Hamiltonian expectation value.
pub fn identify_edge_states(p: &LatticeParams, theta: f64) -> Result<EdgeStates> {
    p.validate()?;
    let frame = cavity_frame(p);
    let h = chain_matrix(&frame, theta, false);
    let eig = hermitian_eig(&h)?;
    let margin = EDGE_MARGIN * p.je.max(f64::MIN_POSITIVE);
    let flags = in_gap_flags(&eig.values, band_edges(&frame, theta), margin);
    let indices: Vec<usize> = flags
        .iter()
        .enumerate()
        .filter_map(|(i, &f)| f.then_some(i))
        .collect();
    if indices.is_empty() {
        return Err(Error::NoInGapState { theta });
    }

    let n = p.sites;
    let m = indices.len();
    let basis: Vec<ComplexVector> = indices.iter().map(|&k| eig.vector(k)).collect();
    let mut position = ComplexMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            let mut acc = crate::C64::new(0.0, 0.0);
            for site in 0..n {
                acc += basis[a].get(site).conj() * basis[b].get(site) * site as f64;
            }
            position.set(a, b, acc);
        }
    }
    let rotation = hermitian_eig(&position)?;

    let mut vectors = Vec::with_capacity(m);
    let mut energies = Vec::with_capacity(m);
    for col in 0..m {
        let mut v = ComplexVector::zeros(n);
        let mut energy = 0.0;
        for (a, b) in basis.iter().enumerate() {
            let w = rotation.vectors.get(a, col);
            v = v.add(&b.scaled(w));
            energy += w.norm_sqr() * eig.values[indices[a]];
        }
        vectors.push(v);
        energies.push(energy);
    }
    let profiles = vectors
        .iter()
        .map(density_profile)
        .collect::<Result<Vec<_>>>()?;
    let localization = profiles.iter().map(DensityProfile::ipr).collect();
    Ok(EdgeStates {
        theta,
        indices,
        energies,
        profiles,
        localization,
        vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn chain(delta: f64, sites: usize) -> LatticeParams {
        LatticeParams::new(1.0, delta, 1.0, sites)
    }

    #[test]
    fn profile_examples() {
        let e0 = density_profile(&ComplexVector::basis(4, 0)).unwrap();
        assert_eq!(e0.site_probabilities, vec![1.0, 0.0, 0.0, 0.0]);
        let u = density_profile(&ComplexVector::from_real(&[1.0; 4])).unwrap();
        assert_eq!(u.site_probabilities, vec![0.25; 4]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phase = density_profile(&ComplexVector::from_slice(&[C64::new(s, 0.0), C64::new(0.0, s)])).unwrap();
        for q in phase.site_probabilities {
            assert!((q - 0.5).abs() < 1e-15);
        }
        assert!(matches!(density_profile(&ComplexVector::zeros(3)), Err(Error::ZeroVector)));
    }

    #[test]
    fn topological_chain_has_edge_pair_in_upper_half_cycle() {
        let s = open_spectrum(&chain(0.0, 10), &default_theta_grid()).unwrap();
        let thetas = s.edge_thetas();
        assert!(!thetas.is_empty());
        for &i in &thetas {
            assert_eq!(s.edge_count(i), 2);
            let t = s.theta_grid[i];
            assert!(t > 0.0 && t < PI, "edge state at theta={t}");
        }
        let mid = s.theta_grid.iter().position(|&t| (t - FRAC_PI_2).abs() < 1e-12).unwrap();
        assert_eq!(s.edge_count(mid), 2);
    }

    #[test]
    fn trivial_chain_has_no_edge_states() {
        let s = open_spectrum(&chain(0.6, 10), &default_theta_grid()).unwrap();
        assert!(!s.has_edge_states());
    }

    #[test]
    fn uniform_chain_flags_nothing() {
        let mut p = chain(0.0, 10);
        p.je = 0.0;
        let s = open_spectrum(&p, &default_theta_grid()).unwrap();
        assert!(!s.has_edge_states());
        for &(lo, hi) in &s.gap_bounds {
            assert_eq!(lo, hi);
        }
    }

    #[test]
    fn spectrum_sorted_and_detuning_ignored() {
        let grid = cycle_grid(17);
        let a = open_spectrum(&chain(0.2, 8), &grid).unwrap();
        let b = open_spectrum(&chain(0.2, 8).with_detuning(3.0), &grid).unwrap();
        assert_eq!(a, b);
        for e in &a.energies {
            assert!(e.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn edge_states_split_left_and_right() {
        let e = identify_edge_states(&chain(0.0, 10), FRAC_PI_2).unwrap();
        assert_eq!(e.indices.len(), 2);
        let (left, right) = (&e.profiles[0], &e.profiles[1]);
        assert!(left.left_weight(2) > 0.5);
        assert!(right.right_weight(2) > 0.5);
        for ipr in &e.localization {
            assert!(*ipr > 0.2);
        }
        for en in &e.energies {
            assert!(en.abs() < 0.05);
        }
    }

    #[test]
    fn edge_states_away_from_crossing() {
        let e = identify_edge_states(&chain(0.0, 10), 1.0).unwrap();
        assert_eq!(e.indices.len(), 2);
        // left state sits on a-sites at +Je cos(theta), right state at -Je cos(theta)
        assert!((e.energies[0] - 1f64.cos()).abs() < 1e-3);
        assert!((e.energies[1] + 1f64.cos()).abs() < 1e-3);
    }

    #[test]
    fn left_state_approaches_semi_infinite_profile() {
        // semi-infinite chain: amplitudes on a-sites fall off as (-t1/t2)^n, so
        // the first site carries 1 - (t1/t2)^2 = 8/9 at delta = 0, theta = pi/2
        let limit = 1.0 - (0.5f64 / 1.5).powi(2);
        let errors: Vec<f64> = [10, 20, 40]
            .iter()
            .map(|&l| {
                let e = identify_edge_states(&chain(0.0, l), FRAC_PI_2).unwrap();
                (e.profiles[0].site_probabilities[0] - limit).abs()
            })
            .collect();
        assert!(errors[0] < 1e-3);
        assert!(errors[1] < errors[0] && errors[2] <= errors[1].max(1e-14), "{errors:?}");
    }

    #[test]
    fn trivial_chain_reports_no_state() {
        assert!(matches!(
            identify_edge_states(&chain(0.6, 10), FRAC_PI_2),
            Err(Error::NoInGapState { .. })
        ));
    }
}
