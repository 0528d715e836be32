// Reflection of a finite chain between two leads, computed from the dense
// device Green function, against the closed form for a semi-infinite chain.
// Inside the gap the difference dies off exponentially with the length.
//
// Run with `cargo run --release --example green_function_check`.

use std::f64::consts::TAU;

use topochain::scattering::{reflection_closed, reflection_fisher_lee};
use topochain::{LatticeParams, Result};

/// Largest deviation over 64 angles for each chain length.
pub fn run() -> Result<Vec<(usize, f64)>> {
    let mut rows = Vec::new();
    for sites in [10, 20, 40, 60] {
        let mut worst = 0.0_f64;
        for k in 0..64 {
            let p = LatticeParams::new(1.0, 0.0, 1.0, sites).with_theta(TAU * k as f64 / 64.0);
            let d = (reflection_closed(&p, 0.0)? - reflection_fisher_lee(&p, 0.0)?).norm();
            worst = worst.max(d);
        }
        rows.push((sites, worst));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for (l, d) in run()? {
        println!("L = {l:>2}   max |r_closed - r_numeric| = {d:.3e}");
    }
    Ok(())
}
