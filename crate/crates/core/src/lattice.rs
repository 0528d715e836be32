//! Physical parameters of the resonator chain and its open-boundary Hamiltonian.
//!
//! Sites are ordered `a1, b1, a2, b2, ...`; index 0 is the leftmost resonator,
//! which is the one driven and probed. Energies are in units of the
//! qubit-assisted rate `Je` unless the caller chooses otherwise.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const QUBIT_CONSISTENCY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeParams {
    /// Mean capacitive hopping `(J1 + J2) / 2`.
    #[serde(rename = "J")]
    pub j: f64,
    /// Hopping imbalance `(J1 - J2) / 2`.
    pub delta: f64,
    /// Qubit-assisted rate `g0^2 / DeltaQ`.
    #[serde(rename = "Je")]
    pub je: f64,
    /// Cavity detuning from the drive.
    #[serde(rename = "DeltaC", default)]
    pub delta_c: f64,
    /// Uniform cavity decay rate.
    #[serde(default)]
    pub kappa: f64,
    /// Mixing angle of the two qubit couplings.
    #[serde(default)]
    pub theta: f64,
    /// Number of resonators.
    #[serde(rename = "L")]
    pub sites: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<f64>,
    #[serde(rename = "DeltaQ", default, skip_serializing_if = "Option::is_none")]
    pub delta_q: Option<f64>,
    /// Use `g2 = -g0 cos(theta/2)`; reverses the orientation of the pump.
    #[serde(default)]
    pub g2_negated: bool,
    /// Half-bandwidth of the semi-infinite scattering leads; defaults to `J`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lead_hopping: Option<f64>,
}

impl Default for LatticeParams {
    fn default() -> Self {
        Self {
            j: 1.0,
            delta: 0.0,
            je: 1.0,
            delta_c: 0.0,
            kappa: 0.1,
            theta: std::f64::consts::FRAC_PI_2,
            sites: 10,
            g0: None,
            delta_q: None,
            g2_negated: false,
            lead_hopping: None,
        }
    }
}

impl LatticeParams {
    pub fn new(j: f64, delta: f64, je: f64, sites: usize) -> Self {
        Self {
            j,
            delta,
            je,
            sites,
            ..Self::default()
        }
    }

    /// Parameters whose `Je` is derived from the composite coupling and the qubit detuning.
    pub fn from_qubit(j: f64, delta: f64, g0: f64, delta_q: f64, sites: usize) -> Result<Self> {
        if delta_q == 0.0 {
            return Err(Error::InvalidParams("qubit detuning DeltaQ must be nonzero".into()));
        }
        let p = Self {
            g0: Some(g0),
            delta_q: Some(delta_q),
            ..Self::new(j, delta, g0 * g0 / delta_q, sites)
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self { theta, ..self.clone() }
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        Self { delta, ..self.clone() }
    }

    pub fn with_sites(&self, sites: usize) -> Self {
        Self { sites, ..self.clone() }
    }

    pub fn with_detuning(&self, delta_c: f64) -> Self {
        Self { delta_c, ..self.clone() }
    }

    pub fn with_kappa(&self, kappa: f64) -> Self {
        Self { kappa, ..self.clone() }
    }

    pub fn j1(&self) -> f64 {
        self.j + self.delta
    }

    pub fn j2(&self) -> f64 {
        self.j - self.delta
    }

    pub fn lead_half_bandwidth(&self) -> f64 {
        self.lead_hopping.unwrap_or(self.j)
    }

    /// `sin(theta)` as it enters the qubit-assisted hopping, including the sign of `g1 g2`.
    pub fn mixing_sin(&self, theta: f64) -> f64 {
        if self.g2_negated {
            -theta.sin()
        } else {
            theta.sin()
        }
    }

    /// Intra-cell hopping `J1 - (Je/2) sin(theta)`.
    pub fn intra_hop(&self, theta: f64) -> f64 {
        self.j1() - 0.5 * self.je * self.mixing_sin(theta)
    }

    /// Inter-cell hopping `J2 + (Je/2) sin(theta)`.
    pub fn inter_hop(&self, theta: f64) -> f64 {
        self.j2() + 0.5 * self.je * self.mixing_sin(theta)
    }

    /// Sublattice potential `Je cos(theta)` (added on a-sites, subtracted on b-sites).
    pub fn stagger(&self, theta: f64) -> f64 {
        self.je * theta.cos()
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.j, self.delta, self.je, self.delta_c, self.kappa, self.theta];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("all physical values must be finite".into()));
        }
        if self.sites < 4 || self.sites % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "L must be even and at least 4, got {}",
                self.sites
            )));
        }
        if !(self.j > 0.0) {
            return Err(Error::InvalidParams(format!("J must be positive, got {}", self.j)));
        }
        if !(self.je >= 0.0) {
            return Err(Error::InvalidParams(format!("Je must be non-negative, got {}", self.je)));
        }
        if self.kappa < 0.0 {
            return Err(Error::InvalidParams(format!(
                "kappa must be non-negative, got {}",
                self.kappa
            )));
        }
        if let Some(t) = self.lead_hopping {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidParams(format!("lead hopping must be positive, got {t}")));
            }
        }
        match (self.g0, self.delta_q) {
            (Some(g0), Some(dq)) => {
                if !(g0 >= 0.0) || !g0.is_finite() || !dq.is_finite() || dq == 0.0 {
                    return Err(Error::InvalidParams(
                        "g0 must be non-negative and DeltaQ nonzero".into(),
                    ));
                }
                let implied = g0 * g0 / dq;
                if (implied - self.je).abs() > QUBIT_CONSISTENCY_TOL * self.je.abs() {
                    return Err(Error::InvalidParams(format!(
                        "Je = {} disagrees with g0^2/DeltaQ = {implied}",
                        self.je
                    )));
                }
            }
            (None, None) => {}
            _ => {
                return Err(Error::InvalidParams(
                    "g0 and DeltaQ must be supplied together".into(),
                ))
            }
        }
        Ok(())
    }
}

/// Qubit-resonator couplings `(g1, g2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingPair {
    pub g1: f64,
    pub g2: f64,
}

impl CouplingPair {
    pub fn composite(&self) -> f64 {
        self.g1.hypot(self.g2)
    }

    /// `2 arctan(g1/g2)`, defined modulo `2 pi`.
    pub fn mixing_angle(&self) -> f64 {
        2.0 * (self.g1 / self.g2).atan()
    }
}

pub fn couplings_from_angle(g0: f64, theta: f64) -> CouplingPair {
    let half = 0.5 * theta;
    CouplingPair {
        g1: g0 * half.sin(),
        g2: g0 * half.cos(),
    }
}

/// Couplings produced by the flux-tunable junction loops, `g = 2 beta E_J cos(f) dpsi0`.
pub fn couplings_from_flux(beta_ej: f64, dpsi0: f64, f3: f64, f5: f64) -> CouplingPair {
    let scale = 2.0 * beta_ej * dpsi0;
    CouplingPair {
        g1: scale * f3.cos(),
        g2: scale * f5.cos(),
    }
}

/// Loop fluxes `(f3, f5)` that realise mixing angle `theta`.
pub fn flux_for_angle(theta: f64) -> (f64, f64) {
    (0.5 * (std::f64::consts::PI - theta), 0.5 * theta)
}

/// Open-boundary chain Hamiltonian at the mixing angle stored in `p`.
///
/// Real symmetric and tridiagonal. With `include_detuning` the uniform
/// cavity detuning `DeltaC` is added to the diagonal.
pub fn build_hamiltonian(p: &LatticeParams, include_detuning: bool) -> Result<ComplexMatrix> {
    p.validate()?;
    Ok(chain_matrix(p, p.theta, include_detuning))
}

pub(crate) fn chain_matrix(p: &LatticeParams, theta: f64, include_detuning: bool) -> ComplexMatrix {
    let n = p.sites;
    let shift = if include_detuning { p.delta_c } else { 0.0 };
    let stagger = p.stagger(theta);
    let intra = p.intra_hop(theta);
    let inter = p.inter_hop(theta);
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let onsite = if i % 2 == 0 { shift + stagger } else { shift - stagger };
        m.set(i, i, C64::new(onsite, 0.0));
        if i + 1 < n {
            let hop = if i % 2 == 0 { intra } else { inter };
            m.set(i, i + 1, C64::new(hop, 0.0));
            m.set(i + 1, i, C64::new(hop, 0.0));
        }
    }
    m
}
