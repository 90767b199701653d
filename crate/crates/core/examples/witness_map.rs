//! Decompose the quarter-period map and evaluate both witnesses at the
//! deepest point of the Werner family.

use std::f64::consts::{FRAC_PI_2, PI};

use qdynmap::dynmap::{canonical_decompose, Classification};
use qdynmap::linalg::pauli;
use qdynmap::qubitpair::{amap, InitParams};
use qdynmap::scenarios::ScenarioSpec;
use qdynmap::witness;

fn main() {
    let params = InitParams::new(0.0, 2.0 / 3.0).unwrap();
    let map = amap(&params, FRAC_PI_2);
    let d = canonical_decompose(&map, &pauli::normalized_basis()).unwrap();
    assert_eq!(d.classification(), Classification::Ncp);
    println!(
        "map at omega_t = pi/2, |a| = 2/3: {} with spectrum {:?}",
        d.classification(),
        d.eigenvalues()
    );

    let family = ScenarioSpec::Werner { x: 0.0 }.reduced_family().unwrap();
    let s = witness::rel_entropy_difference(&family, FRAC_PI_2, PI);
    let g = witness::fidelity_difference(&family, FRAC_PI_2, PI);
    println!("Werner x = 0 at (omega_t, omega_tau) = (pi/2, pi): S = {s}, G = {g}");
    assert!((g + 1.0).abs() < 1e-9);
}
