#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topochain::linalg::ComplexMatrix;
use topochain::{LatticeParams, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, C64::new(rng.random_range(-1.0..1.0), 0.0));
        for j in 0..i {
            let z = random_complex(rng);
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// Diagonally dominant, hence comfortably invertible.
pub fn random_well_conditioned(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, random_complex(rng));
        }
        m.add_to(i, i, C64::new(2.0 * n as f64, 0.0));
    }
    m
}

/// Smallest bulk gap over the cycle, `min_theta sqrt(min(4J^2, A^2) + (Je cos theta)^2)`, on a fine grid.
pub fn min_half_gap(p: &LatticeParams) -> f64 {
    (0..4000)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / 4000.0;
            let a = 2.0 * p.delta - p.je * p.mixing_sin(theta);
            ((4.0 * p.j * p.j).min(a * a) + (p.je * theta.cos()).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Random gapped chain with `Je = 1`, `J` in `[0.5, 2]` and `| |2 delta| - 1 | > 0.1`.
pub fn random_gapped(rng: &mut ChaCha8Rng, sites: usize, topological: Option<bool>) -> LatticeParams {
    loop {
        let delta: f64 = match topological {
            Some(true) => rng.random_range(-0.4..0.4),
            Some(false) => {
                let d: f64 = rng.random_range(0.6..1.5);
                if rng.random_bool(0.5) { d } else { -d }
            }
            None => rng.random_range(-1.5..1.5),
        };
        if ((2.0 * delta).abs() - 1.0).abs() > 0.1 {
            let j = rng.random_range(0.5..2.0);
            return LatticeParams::new(j, delta, 1.0, sites);
        }
    }
}
