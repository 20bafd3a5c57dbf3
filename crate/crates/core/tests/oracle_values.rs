//! Values frozen from the mpmath scripts in `tests/oracles/`.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use bogo_gas::bogoliubov::{bog_correction, BogoliubovModel};
use bogo_gas::condensate::{bec_model, f_bec, upsilon};
use bogo_gas::ideal_gas::{beta_c, f0_bec, f0_plus, solve_kappa, zeta_3_2};
use bogo_gas::numerics::special::{CUBIC_INV_N4, CUBIC_INV_N6};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn lattice_constants() {
    assert!(rel(CUBIC_INV_N4, 16.532315959761669643797221912) < 1e-15);
    assert!(rel(CUBIC_INV_N6, 8.40192397482753999189774631062) < 1e-15);
    assert!(rel(zeta_3_2(), 2.61237534868548834334856756792) < 1e-14);
}

#[test]
fn ideal_gas_at_kappa_two() {
    let s = solve_kappa(2.0, 1e4).unwrap();
    assert!(rel(s.beta, 0.000650394983586732658824183) < 1e-13);
    assert!(rel(2.0 * beta_c(1e4), s.beta) < 1e-15);
    assert!(rel(s.mu0, -0.2256094268710371378033293) < 1e-10);
    assert!(rel(s.n0, 6814.495534077038712735885) < 1e-10);
    assert!(rel(f0_bec(&s).unwrap(), -15109.09668111698603592839) < 1e-10);
    assert!(rel(f0_plus(&s).unwrap(), -2782395.899050406233369584) < 1e-11);
}

#[test]
fn bogoliubov_at_kappa_two() {
    let s = solve_kappa(2.0, 1e4).unwrap();
    // P_B is empty at the default δ for this N; δ = 1/3 gives 11 shells.
    let m = BogoliubovModel::from_ideal(&s, 1.0, 1.0 / 3.0).unwrap();
    assert!(rel(m.coupling(), 34.25339057244300695273624) < 1e-10);
    assert!(rel(m.e0_ground(), -55.84986642721239291419499) < 1e-10);
    let b = m.bog_correction().unwrap();
    assert!(rel(b.value, -3845.332717693960936975765) < 1e-10);
    let b = bog_correction(1.0, 0.3).unwrap();
    assert!(rel(b.value, -0.008764914480116952098586735) < 1e-12);
    assert!(b.tail_bound <= 1e-12 * b.value.abs());
}

#[test]
fn condensate_free_energy() {
    let a_n = 1.0 / (4.0 * PI);
    assert!(rel(f_bec(1.0, 3.0, a_n).unwrap(), 8.427646103597041700375333) < 1e-12);
    let m = bec_model(1.0, 3.0, a_n).unwrap();
    assert!(rel(m.mu, 5.999930358156452149866599) < 1e-13);
    assert!(rel(upsilon(-3.0, 5.0).unwrap(), 0.1518768445016172124848921) < 1e-13);
}
