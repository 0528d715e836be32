// Winding of the reflection coefficient measured through a damped port on
// the first resonator while the mixing angle goes round one cycle.
//
// Run with `cargo run --release --example dissipative_winding`.

use topochain::driven::{reflection_trace, DEFAULT_PROBE_DETUNING};
use topochain::{LatticeParams, Result};

/// `(L, delta, kappa, winding)` for each configuration.
pub fn run() -> Result<Vec<(usize, f64, f64, i64)>> {
    let mut rows = Vec::new();
    for (sites, delta) in [(10, 0.0), (10, 0.6), (4, 0.0)] {
        for kappa in [0.1, 0.7, 1.5] {
            let p = LatticeParams::new(1.0, delta, 1.0, sites);
            let trace = reflection_trace(&p, kappa, DEFAULT_PROBE_DETUNING, 257)?;
            rows.push((sites, delta, kappa, trace.winding));
        }
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!("{:>3} {:>6} {:>6} {:>8}", "L", "delta", "kappa", "winding");
    for (l, d, k, w) in run()? {
        println!("{l:>3} {d:>6.2} {k:>6.2} {w:>8}");
    }
    Ok(())
}
