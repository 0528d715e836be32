// Photon numbers of the coherently driven, damped chain. A drive on the
// first resonator, tuned to the left edge mode, stays at the edge; the same
// drive on a middle resonator barely excites the chain; a drive inside the
// bulk band spreads over the whole chain.
//
// Run with `cargo run --release --example steady_state_occupation`.

use topochain::driven::{edge_resonant_theta, steady_state, DriveConfig};
use topochain::{LatticeParams, Result, C64};

pub struct Occupations {
    pub edge_drive: Vec<f64>,
    /// Total photon number with the middle site driven, relative to the edge-driven total.
    pub middle_ratio: f64,
    /// Largest single-site share of the photons when driving inside the bulk band.
    pub bulk_max_share: f64,
}

fn occupation(p: &LatticeParams, site: usize) -> Result<Vec<f64>> {
    Ok(steady_state(p, &DriveConfig::single_site(p, site, C64::new(0.1, 0.0)))?.photon_numbers)
}

pub fn run() -> Result<Occupations> {
    let base = LatticeParams::new(1.0, 0.0, 1.0, 10).with_kappa(0.1);
    let theta = edge_resonant_theta(&base, 0.5);
    let edge = base.with_detuning(0.5).with_theta(theta);
    let edge_drive = occupation(&edge, 0)?;
    let middle: f64 = occupation(&edge, base.sites / 2)?.iter().sum();
    let bulk = occupation(&edge.with_detuning(1.2), 0)?;
    let bulk_total: f64 = bulk.iter().sum();
    Ok(Occupations {
        middle_ratio: middle / edge_drive.iter().sum::<f64>(),
        bulk_max_share: bulk.iter().fold(0.0_f64, |m, &n| m.max(n)) / bulk_total,
        edge_drive,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let o = run()?;
    let total: f64 = o.edge_drive.iter().sum();
    for (j, n) in o.edge_drive.iter().enumerate() {
        println!("site {j:>2}  {:<40} {:.4}", "#".repeat((40.0 * n / total).round() as usize), n / total);
    }
    println!("middle drive / edge drive total: {:.4}", o.middle_ratio);
    println!("bulk drive, largest site share:  {:.4}", o.bulk_max_share);
    Ok(())
}
