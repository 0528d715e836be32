// From a mixing angle to the loop fluxes that realise it, and back: the
// flux-tunable couplings reproduce the requested angle and the exchange
// strength `Je = g0^2 / DeltaQ`.
//
// Run with `cargo run --release --example flux_couplings`.

use topochain::lattice::{couplings_from_angle, couplings_from_flux, flux_for_angle};
use topochain::{LatticeParams, Result};

/// `(requested theta, recovered theta)` over half a cycle.
pub fn run() -> Result<Vec<(f64, f64)>> {
    let (beta_ej, dpsi0) = (0.05, 1.0);
    let mut rows = Vec::new();
    for k in 0..8 {
        let theta = 0.1 + 0.4 * k as f64;
        let (f3, f5) = flux_for_angle(theta);
        let pair = couplings_from_flux(beta_ej, dpsi0, f3, f5);
        rows.push((theta, pair.mixing_angle()));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    for (want, got) in run()? {
        println!("theta {want:.3} -> fluxes -> theta {got:.3}");
    }
    let pair = couplings_from_angle(0.2, 1.0);
    println!("g0 = 0.2, theta = 1: g1 = {:.4}, g2 = {:.4}, |g| = {:.4}", pair.g1, pair.g2, pair.composite());
    let p = LatticeParams::from_qubit(1.0, 0.0, 0.2, 0.04, 10)?;
    println!("Je from g0^2/DeltaQ = {}", p.je);
    Ok(())
}
