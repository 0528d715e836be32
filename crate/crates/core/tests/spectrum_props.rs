mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use topochain::bloch::chern_analytic;
use topochain::linalg::hermitian_eig;
use topochain::lattice::build_hamiltonian;
use topochain::spectrum::{default_theta_grid, open_spectrum};
use topochain::LatticeParams;

fn eigenvalues(p: &LatticeParams) -> Vec<f64> {
    hermitian_eig(&build_hamiltonian(p, false).unwrap()).unwrap().values
}

proptest! {
    #[test]
    fn spectrum_is_symmetric_about_zero(j in 0.3f64..2.0, d in -1.0f64..1.0, half in 2usize..10, theta in 0.0f64..6.3) {
        let p = LatticeParams::new(j, d, 1.0, 2 * half).with_theta(theta);
        let e = eigenvalues(&p);
        let n = e.len();
        for k in 0..n {
            prop_assert!((e[k] + e[n - 1 - k]).abs() < 1e-10);
        }
    }

    #[test]
    fn spectrum_repeats_under_reflection_of_the_angle(j in 0.3f64..2.0, d in -1.0f64..1.0, half in 2usize..10, theta in 0.0f64..6.3) {
        let p = LatticeParams::new(j, d, 1.0, 2 * half);
        let a = eigenvalues(&p.with_theta(theta));
        let b = eigenvalues(&p.with_theta(PI - theta));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}

/// Angles carrying in-gap levels, out of the default grid.
fn in_gap_angles(p: &LatticeParams) -> (usize, usize) {
    let grid = default_theta_grid();
    (open_spectrum(p, &grid).unwrap().edge_thetas().len(), grid.len())
}

#[test]
fn bulk_edge_correspondence() {
    let mut rng = common::rng(21);
    for topological in [true, false] {
        for _ in 0..16 {
            let p = common::random_gapped(&mut rng, 10, Some(topological));
            assert_eq!(chern_analytic(&p).unwrap(), i64::from(topological));
            let (with_levels, total) = in_gap_angles(&p);
            if topological {
                // edge branches leave one band and join the other
                assert!(with_levels > 0 && with_levels < total, "{p:?}");
            } else if p.delta > 0.0 {
                assert_eq!(with_levels, 0, "{p:?}");
            } else {
                // an edge level present over the whole cycle never meets a band: no spectral flow
                assert_eq!(with_levels, total, "{p:?}");
            }
        }
    }
}

#[test]
fn edge_splitting_shrinks_with_length_only_when_topological() {
    let splitting = |delta: f64, sites: usize| {
        let s = open_spectrum(&LatticeParams::new(1.0, delta, 1.0, sites), &[FRAC_PI_2]).unwrap();
        let in_gap: Vec<f64> = s.energies[0].iter().zip(&s.edge_flags[0]).filter(|(_, &f)| f).map(|(&e, _)| e).collect();
        in_gap.iter().fold(None, |m: Option<f64>, &e| Some(m.map_or(e.abs(), |m| m.max(e.abs()))))
    };
    let s10 = splitting(0.0, 10).unwrap();
    let s20 = splitting(0.0, 20).unwrap();
    assert!(s20 < s10 * 1e-2, "{s10} {s20}");
    assert_eq!(splitting(0.6, 10), None);
    assert_eq!(splitting(0.6, 20), None);
}
