//! Coherently driven, uniformly damped resonator chain: first moments, steady state and port reflection.
//!
//! The field amplitudes obey
//! `d<a>/dt = -i (DeltaC + T) <a> - (kappa/2) <a> - i Omega`,
//! whose fixed point is `<a> = -(DeltaC + T - i kappa/2)^-1 Omega`.
//! Every operation has a `*_with` kernel that takes the coupling matrix
//! directly, so single-mode and hand-built chains can be handled too.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{chain_matrix, LatticeParams};
use crate::linalg::{inverse_element, solve_linear, ComplexMatrix, ComplexVector};
use crate::winding::{trace_winding, ReflectionTrace};
use crate::C64;

/// Probe detuning used for reflection windings unless overridden.
pub const DEFAULT_PROBE_DETUNING: f64 = 0.5;
/// Fewest angles accepted by [`reflection_trace`].
pub const MIN_TRACE_SAMPLES: usize = 64;
/// `dt * (|T|_F + kappa + |DeltaC|)` must stay below this.
pub const STEP_SAFETY: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct DriveConfig {
    /// Drive strength on each site.
    pub amplitudes: ComplexVector,
    pub kappa: f64,
    pub delta_c: f64,
}

impl DriveConfig {
    pub fn new(amplitudes: ComplexVector, kappa: f64, delta_c: f64) -> Self {
        Self { amplitudes, kappa, delta_c }
    }

    /// Drive of strength `omega` on a single site, with `kappa` and `DeltaC` taken from `p`.
    pub fn single_site(p: &LatticeParams, site: usize, omega: C64) -> Self {
        let mut amplitudes = ComplexVector::zeros(p.sites);
        amplitudes.set(site, omega);
        Self::new(amplitudes, p.kappa, p.delta_c)
    }

    fn validate(&self, sites: usize) -> Result<()> {
        if self.amplitudes.len() != sites {
            return Err(Error::DimensionMismatch { expected: sites, found: self.amplitudes.len() });
        }
        if !self.kappa.is_finite() || self.kappa < 0.0 || !self.delta_c.is_finite() {
            return Err(Error::InvalidParams(format!(
                "kappa must be finite and non-negative and DeltaC finite, got kappa={}, DeltaC={}",
                self.kappa, self.delta_c
            )));
        }
        if self.amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParams("drive amplitudes must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SteadyState {
    #[serde(skip)]
    pub amplitudes: ComplexVector,
    pub photon_numbers: Vec<f64>,
}

impl SteadyState {
    fn from_amplitudes(amplitudes: ComplexVector) -> Self {
        let photon_numbers = amplitudes.iter().map(|z| z.norm_sqr()).collect();
        Self { amplitudes, photon_numbers }
    }

    pub fn total(&self) -> f64 {
        self.photon_numbers.iter().sum()
    }

    /// Site with the largest photon number (first one on ties).
    pub fn brightest_site(&self) -> usize {
        let mut best = 0;
        for (j, &n) in self.photon_numbers.iter().enumerate() {
            if n > self.photon_numbers[best] {
                best = j;
            }
        }
        best
    }
}

/// Sampled first-moment trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ComplexVector>,
}

impl Trajectory {
    pub fn last(&self) -> &ComplexVector {
        self.states.last().expect("trajectory always holds the initial state")
    }
}

/// The real symmetric coupling matrix `T` at `p.theta`, without the detuning.
pub fn build_t_matrix(p: &LatticeParams) -> Result<ComplexMatrix> {
    p.validate()?;
    Ok(chain_matrix(p, p.theta, false))
}

/// Angle at which the left edge mode (energy `Je cos(theta)`) is resonant with a drive at detuning `DeltaC`.
///
/// Falls back to `pi/2` when `|DeltaC| >= Je`, where no edge mode can be resonant.
pub fn edge_resonant_theta(p: &LatticeParams, delta_c: f64) -> f64 {
    if p.je > 0.0 && delta_c.abs() < p.je {
        (-delta_c / p.je).acos()
    } else {
        std::f64::consts::FRAC_PI_2
    }
}

fn resolvent_matrix(t: &ComplexMatrix, kappa: f64, delta_c: f64) -> ComplexMatrix {
    t.shifted(C64::new(delta_c, -0.5 * kappa))
}

pub fn steady_state_with(t: &ComplexMatrix, d: &DriveConfig) -> Result<SteadyState> {
    d.validate(t.rows())?;
    let a = resolvent_matrix(t, d.kappa, d.delta_c);
    let rhs = d.amplitudes.scaled(C64::new(-1.0, 0.0));
    match solve_linear(&a, &rhs) {
        Ok(x) => Ok(SteadyState::from_amplitudes(x)),
        Err(Error::Singular { .. }) if d.kappa == 0.0 => Err(Error::UndampedResonance),
        Err(e) => Err(e),
    }
}

/// Steady-state field amplitudes and photon numbers `|<a_j>|^2`.
pub fn steady_state(p: &LatticeParams, d: &DriveConfig) -> Result<SteadyState> {
    steady_state_with(&build_t_matrix(p)?, d)
}

/// Largest time step accepted for a given coupling matrix and drive.
pub fn max_time_step(t: &ComplexMatrix, d: &DriveConfig) -> f64 {
    STEP_SAFETY / (t.frobenius_norm() + d.kappa + d.delta_c.abs())
}

/// Fourth-order Runge-Kutta integration from the vacuum, keeping every `stride`-th step plus the last.
pub fn evolve_with(
    t: &ComplexMatrix,
    d: &DriveConfig,
    t_final: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory> {
    d.validate(t.rows())?;
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidParams(format!("t_final must be finite and non-negative, got {t_final}")));
    }
    let max = max_time_step(t, d);
    if !(dt > 0.0) || dt >= max {
        return Err(Error::StepTooLarge { dt, max });
    }
    let stride = stride.max(1);
    let steps = (t_final / dt).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { t_final / steps as f64 };

    // d<a>/dt = M <a> + c, with M = -i (DeltaC + T - i kappa/2) and c = -i Omega
    let m = resolvent_matrix(t, d.kappa, d.delta_c).scaled(C64::new(0.0, -1.0));
    let c = d.amplitudes.scaled(C64::new(0.0, -1.0));
    let rhs = |a: &ComplexVector| -> Result<ComplexVector> { Ok(m.mul_vec(a)?.add(&c)) };

    let mut a = ComplexVector::zeros(t.rows());
    let mut times = vec![0.0];
    let mut states = vec![a.clone()];
    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    for step in 1..=steps {
        let k1 = rhs(&a)?;
        let k2 = rhs(&a.add(&k1.scaled(half)))?;
        let k3 = rhs(&a.add(&k2.scaled(half)))?;
        let k4 = rhs(&a.add(&k3.scaled(full)))?;
        let incr = k1.add(&k2.scaled(two)).add(&k3.scaled(two)).add(&k4);
        a = a.add(&incr.scaled(sixth));
        if step % stride == 0 || step == steps {
            times.push(step as f64 * h);
            states.push(a.clone());
        }
    }
    Ok(Trajectory { times, states })
}

/// Integrates the first-moment equations and returns every step.
pub fn evolve_expectations(p: &LatticeParams, d: &DriveConfig, t_final: f64, dt: f64) -> Result<Trajectory> {
    evolve_with(&build_t_matrix(p)?, d, t_final, dt, 1)
}

pub fn reflection_with(t: &ComplexMatrix, kappa: f64, delta_c: f64) -> Result<C64> {
    if !(kappa > 0.0) || !kappa.is_finite() || !delta_c.is_finite() {
        return Err(Error::InvalidParams(format!(
            "reflection needs a finite kappa > 0 and finite DeltaC, got kappa={kappa}, DeltaC={delta_c}"
        )));
    }
    let g = inverse_element(&resolvent_matrix(t, kappa, delta_c), 0, 0)?;
    Ok(C64::new(1.0, 0.0) + C64::new(0.0, kappa) * g)
}

/// Reflection `1 + i kappa [(DeltaC + T - i kappa/2)^-1]_11` of a probe at the left resonator.
pub fn reflection_dissipative(p: &LatticeParams, kappa: f64, delta_c: f64) -> Result<C64> {
    reflection_with(&build_t_matrix(p)?, kappa, delta_c)
}

/// Dissipative reflection sampled over one cycle of `theta`, with its winding number.
pub fn reflection_trace(p: &LatticeParams, kappa: f64, delta_c: f64, samples: usize) -> Result<ReflectionTrace> {
    p.validate()?;
    if samples < MIN_TRACE_SAMPLES {
        return Err(Error::InvalidGrid(format!(
            "need at least {MIN_TRACE_SAMPLES} angles, got {samples}"
        )));
    }
    trace_winding(|theta| reflection_with(&chain_matrix(p, theta, false), kappa, delta_c), samples)
}
