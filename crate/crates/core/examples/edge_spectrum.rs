// Open-chain spectrum over one cycle of the mixing angle. In the topological
// phase two levels cross the gap; at the crossing they are resolved into a
// left and a right edge state.
//
// Run with `cargo run --release --example edge_spectrum`.

use std::f64::consts::FRAC_PI_2;

use topochain::spectrum::{default_theta_grid, identify_edge_states, open_spectrum};
use topochain::{LatticeParams, Result};

/// Number of angles carrying in-gap levels for `delta = 0` and `delta = 0.6`.
pub fn run() -> Result<(usize, usize)> {
    let grid = default_theta_grid();
    let topological = LatticeParams::new(1.0, 0.0, 1.0, 10);
    let trivial = LatticeParams::new(1.0, 0.6, 1.0, 10);
    let a = open_spectrum(&topological, &grid)?.edge_thetas().len();
    let b = open_spectrum(&trivial, &grid)?.edge_thetas().len();
    Ok((a, b))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let (a, b) = run()?;
    println!("angles with in-gap levels: delta=0 -> {a}, delta=0.6 -> {b} (of {})", default_theta_grid().len());

    let states = identify_edge_states(&LatticeParams::new(1.0, 0.0, 1.0, 10), FRAC_PI_2)?;
    for (k, prof) in states.profiles.iter().enumerate() {
        let bars: Vec<String> = prof.site_probabilities.iter().map(|q| format!("{q:.3}")).collect();
        println!("state {k}  E={:+.2e}  IPR={:.3}  [{}]", states.energies[k], states.localization[k], bars.join(" "));
    }
    Ok(())
}
