use std::f64::consts::PI;

use floquet_pacs_core::floquet::{fundamental_matrix, propagator};
use floquet_pacs_core::linalg::{complexify, max_abs, max_abs_diff, symplectic_form, CMat, RMat};
use floquet_pacs_core::model::{FourierMatrix, SBlocks};
use floquet_pacs_core::{build_flt, monodromy_and_exponents, Error, PeriodicConfiguration, C64};
use nalgebra::ComplexField;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mathieu() -> PeriodicConfiguration {
    PeriodicConfiguration::mathieu_pair(1.1, 0.9, 0.05, 0.1, 2.0 * PI).unwrap()
}

/// Single driven mode with position-momentum coupling and sine terms, so it
/// has no time-reversal symmetry.
fn skewed_drive() -> PeriodicConfiguration {
    let m = |x: f64| RMat::from_element(1, 1, x);
    let blocks = SBlocks {
        k_qq: FourierMatrix::constant(m(1.3)).with_harmonic(1, m(0.1), m(0.07)),
        k_pp: FourierMatrix::constant(m(0.9)).with_harmonic(2, m(0.0), m(0.05)),
        k_qp: FourierMatrix::constant(m(0.2)).with_harmonic(1, m(0.03), m(0.0)),
    };
    PeriodicConfiguration::new(1, 2.3, blocks, 4096).unwrap()
}

#[test]
fn fundamental_matrix_is_symplectic_on_the_grid() {
    let c = mathieu();
    let j = symplectic_form(2);
    for phi in fundamental_matrix(&c).unwrap() {
        assert!(max_abs_diff(&(phi.transpose() * &j * &phi), &j) < 1e-9);
    }
}

#[test]
fn monodromy_converges_under_refinement() {
    let c = mathieu();
    let coarse = fundamental_matrix(&c).unwrap().pop().unwrap();
    let fine = fundamental_matrix(&c.with_steps_per_period(4 * 4096).unwrap())
        .unwrap()
        .pop()
        .unwrap();
    assert!(max_abs_diff(&coarse, &fine) < 1e-8);

    let a = monodromy_and_exponents(&c).unwrap();
    let b = monodromy_and_exponents(&c.with_steps_per_period(2 * 4096).unwrap()).unwrap();
    for (x, y) in a.exponents.iter().zip(&b.exponents) {
        assert!((x - y).abs() < 1e-8);
    }
}

#[test]
fn mathieu_pair_exponents_match_fine_monodromy_eigenvalues() {
    let c = mathieu();
    let s = monodromy_and_exponents(&c).unwrap();
    assert!(s.stable && s.stability_margin < 1e-6);
    assert_eq!(s.exponents.len(), 2);
    assert!((s.exponents[0] - s.exponents[1]).abs() > 1e-3);

    let fine = fundamental_matrix(&c.with_steps_per_period(4 * 4096).unwrap())
        .unwrap()
        .pop()
        .unwrap();
    let eig = fine.schur().complex_eigenvalues();
    for &w in &s.exponents {
        let target = C64::new(0.0, w * c.period()).exp();
        let nearest = eig.iter().map(|l| (l - target).modulus()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-8, "exponent {w}");
    }
}

#[test]
fn mathieu_tongue_is_unstable() {
    let c = PeriodicConfiguration::mathieu_pair(0.1, 0.1, 0.3, 0.0, 2.0 * PI).unwrap();
    match monodromy_and_exponents(&c) {
        Err(Error::Unstable { margin }) => assert!(margin > 1e-3),
        other => panic!("expected instability, got {other:?}"),
    }
    assert!(matches!(build_flt(&c), Err(Error::Unstable { .. })));
}

#[test]
fn canonical_structure_of_mathieu_flt() {
    let d = build_flt(&mathieu()).unwrap();
    assert!(d.canonical_condition_residual() < 1e-10);
    assert!(d.periodicity_residual() < 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let steps = d.config().steps_per_period();
    for _ in 0..32 {
        let k = rng.gen_range(0..=steps);
        let t = k as f64 * d.period() / steps as f64;
        assert!(d.symplectic_residual(t) < 1e-9);
        assert!(d.determinant_residual(t) < 1e-9);
        let f = d.flt_at(t);
        for j in 0..2 {
            let conj: Vec<C64> = f.column(j).iter().map(|z| z.conj()).collect();
            let other: Vec<C64> = f.column(j + 2).iter().cloned().collect();
            assert_eq!(conj, other);
        }
    }
}

#[test]
fn broken_time_reversal_keeps_canonicity() {
    let d = build_flt(&skewed_drive()).unwrap();
    for &t in &[0.0, 0.37, 1.9] {
        assert!(d.symplectic_residual(t) < 1e-9);
        assert!(d.determinant_residual(t) < 1e-9);
    }
    // VᵀU = i/2 needs time-reversal symmetry and fails here
    assert!(d.canonical_condition_residual() > 1e-3);
    let f = d.flt_at(0.0);
    let vu = f[(1, 0)] * f[(0, 0)];
    assert!((vu.argument() - PI / 2.0).abs() < 1e-12);
}

#[test]
fn off_grid_interpolation_matches_reintegration() {
    let d = build_flt(&mathieu()).unwrap();
    let t = 0.3 * d.period() + 1e-4;
    let interp = d.flt_at(t);
    let direct = d.flt_reintegrated(t).unwrap();
    assert!(max_abs_diff(&interp, &direct) < 1e-7);
}

#[test]
fn integrals_of_motion_invert_the_propagated_flt() {
    let d = build_flt(&mathieu()).unwrap();
    for &t in &[0.0, 1.234, 5.0] {
        let (a, adag) = d.integrals_of_motion_coefficients(t);
        let mut stacked = CMat::zeros(4, 4);
        stacked.view_mut((0, 0), (2, 4)).copy_from(&adag);
        stacked.view_mut((2, 0), (2, 4)).copy_from(&a);
        let product = stacked * d.propagated(t);
        assert!(max_abs_diff(&product, &CMat::identity(4, 4)) < 1e-9);
    }
}

#[test]
fn unit_oscillator_annihilator_row() {
    let d = build_flt(&PeriodicConfiguration::stationary(&[1.0], 1.0).unwrap()).unwrap();
    let (a, _) = d.integrals_of_motion_coefficients(0.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((a[(0, 0)] - C64::new(r, 0.0)).modulus() < 1e-10);
    assert!((a[(0, 1)] - C64::new(0.0, r)).modulus() < 1e-10);
}

#[test]
fn integrals_of_motion_are_conserved() {
    let c = mathieu();
    let d = build_flt(&c).unwrap();
    let t = d.period() / 2.0;
    let h = 1e-5 * d.period();
    let (plus, _) = d.integrals_of_motion_coefficients(t + h);
    let (minus, _) = d.integrals_of_motion_coefficients(t - h);
    let derivative = (plus - minus) / C64::new(2.0 * h, 0.0);
    let (a, _) = d.integrals_of_motion_coefficients(t);
    let flow = a * complexify(&c.evaluate_pi(t));
    let residual = max_abs(&(derivative + flow));
    assert!(residual < 2e-6, "{residual}");
}

#[test]
fn propagator_agrees_with_grid() {
    let c = mathieu();
    let grid = fundamental_matrix(&c).unwrap();
    let k = 1024;
    let t = k as f64 * c.period() / 4096.0;
    assert!(max_abs_diff(&propagator(&c, t).unwrap(), &grid[k]) < 1e-12);
}

fn random_config(seed: u64) -> PeriodicConfiguration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let mut sym = |scale: f64| {
        let m = RMat::from_fn(n, n, |_, _| rng.gen_range(-scale..scale));
        (&m + m.transpose()) * 0.5
    };
    let k_qq = FourierMatrix::constant(sym(2.0)).with_harmonic(1, sym(1.0), sym(1.0));
    let k_pp = FourierMatrix::constant(sym(2.0)).with_harmonic(3, sym(1.0), sym(1.0));
    let k_qp = FourierMatrix::constant(sym(1.0)).with_harmonic(2, sym(1.0), sym(1.0));
    PeriodicConfiguration::new(n, 1.7, SBlocks { k_qq, k_pp, k_qp }, 64).unwrap()
}

proptest! {
    #[test]
    fn pi_is_a_hamiltonian_vector_field(seed in any::<u64>(), t in -50.0f64..50.0) {
        let c = random_config(seed);
        let pi = c.evaluate_pi(t);
        let j = symplectic_form(c.n_modes());
        let scale = max_abs(&pi).max(1.0);
        prop_assert!(max_abs(&(pi.transpose() * &j + &j * &pi)) <= 1e-12 * scale);
    }

    #[test]
    fn pi_is_periodic(seed in any::<u64>(), t in 0.0f64..1.7, k in -20i32..20) {
        let c = random_config(seed);
        let a = c.evaluate_pi(t);
        let b = c.evaluate_pi(t + k as f64 * c.period());
        prop_assert!(max_abs_diff(&a, &b) <= 1e-12 * max_abs(&a).max(1.0));
    }
}
