// Chern number of the lower band across the dimerization sweep, from the
// gap condition, the solid-angle integral and the gauge-link lattice sum.
//
// Run with `cargo run --release --example chern_phase_diagram`.

use topochain::bloch::{chern_analytic, chern_gauge_link, chern_solid_angle};
use topochain::{LatticeParams, Result};

/// One row of the sweep: `(delta, analytic, solid-angle value, gauge-link value)`.
pub type PhaseRow = (f64, i64, f64, i64);

pub fn run() -> Result<Vec<PhaseRow>> {
    let mut rows = Vec::new();
    for i in 0..=20 {
        let delta = -1.0 + 0.1 * i as f64;
        let p = LatticeParams::new(1.0, delta, 1.0, 10);
        if topochain::bloch::is_gapless(&p) {
            continue;
        }
        let analytic = chern_analytic(&p)?;
        let solid = chern_solid_angle(&p, 128, 128)?;
        let link = chern_gauge_link(&p, 32, 32)?;
        rows.push((delta, analytic, solid.value, link.rounded));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!("{:>7} {:>9} {:>12} {:>11}", "delta", "analytic", "solid-angle", "gauge-link");
    for (delta, a, s, g) in run()? {
        println!("{delta:>7.2} {a:>9} {s:>12.6} {g:>11}");
    }
    Ok(())
}
