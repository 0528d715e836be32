// Charge pumped per cycle, read off from the winding of the closed-form
// reflection phase of a semi-infinite chain, for several probe energies.
//
// Run with `cargo run --release --example laughlin_pump`.

use topochain::bloch::chern_analytic;
use topochain::scattering::{pumped_charge, DEFAULT_PUMP_SAMPLES};
use topochain::{LatticeParams, Result};

/// `(delta, Ep, pumped charge, Chern number)`.
pub fn run() -> Result<Vec<(f64, f64, i64, i64)>> {
    let mut rows = Vec::new();
    for delta in [-0.6, 0.0, 0.3, 0.6] {
        let p = LatticeParams::new(1.0, delta, 1.0, 10);
        for ep in [-0.15, 0.0, 0.15] {
            let q = pumped_charge(&p, ep, DEFAULT_PUMP_SAMPLES)?.q;
            rows.push((delta, ep, q, chern_analytic(&p)?));
        }
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!("{:>6} {:>6} {:>3} {:>3}", "delta", "Ep", "Q", "C");
    for (d, ep, q, c) in run()? {
        println!("{d:>6.2} {ep:>6.2} {q:>3} {c:>3}");
    }
    Ok(())
}
