//! Sampling a complex amplitude over one pump cycle and counting how often it winds around the origin.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest number of grid intervals the adaptive sampler will use.
pub const MAX_INTERVALS: usize = 4096;
/// Adjacent phase steps above this are treated as under-sampling.
pub const MAX_PHASE_STEP: f64 = FRAC_PI_2;
const AMPLITUDE_FLOOR: f64 = 1e-12;

/// Complex reflection amplitude sampled over `theta in [0, 2 pi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReflectionTrace {
    pub theta_grid: Vec<f64>,
    #[serde(skip)]
    pub r_values: Vec<C64>,
    pub unwrapped_phase: Vec<f64>,
    pub winding: i64,
    /// `(phase_end - phase_start) / 2 pi - winding`.
    pub residual: f64,
    pub max_step: f64,
}

impl ReflectionTrace {
    pub fn samples(&self) -> usize {
        self.theta_grid.len()
    }
}

/// `n` uniformly spaced angles including both `0` and `2 pi`.
pub fn cycle_grid(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { TAU } else { TAU * i as f64 / last })
        .collect()
}

/// Continuous phase of `values` plus the largest adjacent principal-value step.
pub fn unwrap_phase(values: &[C64]) -> (Vec<f64>, f64) {
    let mut out = Vec::with_capacity(values.len());
    let mut max_step = 0.0_f64;
    let mut prev: Option<(f64, f64)> = None;
    for z in values {
        let arg = z.arg();
        let next = match prev {
            None => arg,
            Some((last_arg, last_unwrapped)) => {
                let step = principal(arg - last_arg);
                max_step = max_step.max(step.abs());
                last_unwrapped + step
            }
        };
        out.push(next);
        prev = Some((arg, next));
    }
    (out, max_step)
}

fn principal(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Samples `amplitude` on a cycle grid of `samples` points, doubling the
/// resolution until every adjacent phase step is below [`MAX_PHASE_STEP`].
pub fn trace_winding<F>(amplitude: F, samples: usize) -> Result<ReflectionTrace>
where
    F: Fn(f64) -> Result<C64> + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 samples, got {samples}")));
    }
    let mut n = samples;
    loop {
        let theta_grid = cycle_grid(n);
        let r_values = theta_grid
            .par_iter()
            .map(|&t| {
                let r = amplitude(t)?;
                if !(r.norm() > AMPLITUDE_FLOOR) {
                    return Err(Error::VanishingAmplitude { theta: t });
                }
                Ok(r)
            })
            .collect::<Result<Vec<C64>>>()?;
        let (unwrapped_phase, max_step) = unwrap_phase(&r_values);
        if max_step <= MAX_PHASE_STEP {
            let turns = (unwrapped_phase[n - 1] - unwrapped_phase[0]) / TAU;
            let winding = turns.round();
            return Ok(ReflectionTrace {
                theta_grid,
                r_values,
                unwrapped_phase,
                winding: winding as i64,
                residual: turns - winding,
                max_step,
            });
        }
        if n - 1 >= MAX_INTERVALS {
            return Err(Error::UnderSampled { max_step, samples: n });
        }
        n = (2 * (n - 1)).min(MAX_INTERVALS) + 1;
    }
}
