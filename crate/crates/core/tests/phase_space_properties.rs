use std::f64::consts::PI;

use floquet_pacs_core::floquet::FloquetDecomposition;
use floquet_pacs_core::linalg::RMat;
use floquet_pacs_core::model::{FourierMatrix, SBlocks};
use floquet_pacs_core::phase_space::{WavefunctionEvaluator, WignerEvaluator};
use floquet_pacs_core::states::{covariance_quadrature, mean_quadratures};
use floquet_pacs_core::{build_flt, PeriodicConfiguration, StateSpec, C64};
use nalgebra::ComplexField;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn driven_mode() -> FloquetDecomposition {
    let m = |x: f64| RMat::from_element(1, 1, x);
    let blocks = SBlocks {
        k_qq: FourierMatrix::constant(m(1.2)).with_harmonic(1, m(0.15), m(0.0)),
        k_pp: FourierMatrix::constant(m(0.8)),
        k_qp: FourierMatrix::zeros(1),
    };
    build_flt(&PeriodicConfiguration::new(1, 2.0, blocks, 4096).unwrap()).unwrap()
}

fn mathieu() -> FloquetDecomposition {
    build_flt(&PeriodicConfiguration::mathieu_pair(1.1, 0.9, 0.05, 0.1, 2.0 * PI).unwrap()).unwrap()
}

/// Trapezoid-weighted moments `(∫W, ∫W x, ∫W x xᵀ)/(2π)^N` on a cube lattice.
fn wigner_moments(w: &WignerEvaluator, n: usize, lim: f64, count: usize) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    let h = 2.0 * lim / (count - 1) as f64;
    let dim = 2 * n;
    let total = count.pow(dim as u32);
    let mut mass = 0.0;
    let mut first = vec![0.0; dim];
    let mut second = vec![vec![0.0; dim]; dim];
    let mut x = vec![0.0; dim];
    for flat in 0..total {
        let mut rest = flat;
        let mut weight = 1.0;
        for xi in x.iter_mut() {
            let i = rest % count;
            rest /= count;
            *xi = -lim + h * i as f64;
            if i == 0 || i == count - 1 {
                weight *= 0.5;
            }
        }
        let v = weight * w.evaluate(&x);
        mass += v;
        for i in 0..dim {
            first[i] += v * x[i];
            for j in 0..dim {
                second[i][j] += v * x[i] * x[j];
            }
        }
    }
    let scale = h.powi(dim as i32) / (2.0 * PI).powi(n as i32);
    mass *= scale;
    first.iter_mut().for_each(|v| *v *= scale);
    second.iter_mut().flatten().for_each(|v| *v *= scale);
    (mass, first, second)
}

fn check_moments(d: &FloquetDecomposition, t: f64, spec: &StateSpec, lim: f64, count: usize, tol: f64) {
    let n = spec.n_modes();
    let w = WignerEvaluator::new(d, t, spec).unwrap();
    let (mass, first, second) = wigner_moments(&w, n, lim, count);
    assert!((mass - 1.0).abs() < tol, "mass {mass}");
    let mean = mean_quadratures(d, t, spec).unwrap();
    let sigma = covariance_quadrature(d, t, spec).unwrap().sigma;
    for i in 0..2 * n {
        assert!((first[i] - mean[i]).abs() < tol, "mean {i}");
        for j in 0..2 * n {
            let cov = second[i][j] - first[i] * first[j];
            assert!(
                (cov - sigma[(i, j)]).abs() < tol,
                "cov {i}{j}: {cov} vs {}",
                sigma[(i, j)]
            );
        }
    }
}

#[test]
fn single_mode_wigner_moments_match_closed_forms() {
    let d = driven_mode();
    for spec in [
        StateSpec::pacs(vec![c(0.7, -0.4)], vec![2]).unwrap(),
        StateSpec::fock(vec![3]).unwrap(),
        StateSpec::coherent(vec![c(-1.0, 0.5)]).unwrap(),
    ] {
        check_moments(&d, 0.77, &spec, 9.0, 361, 1e-9);
    }
}

#[test]
fn two_mode_wigner_moments_match_closed_forms() {
    let d = mathieu();
    let spec = StateSpec::pacs(vec![c(0.5, 0.0), c(0.0, 0.3)], vec![1, 0]).unwrap();
    check_moments(&d, 1.3, &spec, 7.2, 37, 1e-6);
}

#[test]
fn wigner_normalization_converges_with_refinement() {
    let d = driven_mode();
    let spec = StateSpec::pacs(vec![c(0.6, 0.2)], vec![1]).unwrap();
    let w = WignerEvaluator::new(&d, 0.3, &spec).unwrap();
    let errors: Vec<f64> = [17usize, 33, 65, 129]
        .iter()
        .map(|&count| (wigner_moments(&w, 1, 10.0, count).0 - 1.0).abs())
        .collect();
    for pair in errors.windows(2) {
        assert!(pair[1] <= pair[0] / 3.9 || pair[1] < 1e-12, "{errors:?}");
    }
}

#[test]
fn wavefunction_is_normalized_for_driven_states() {
    let d = mathieu();
    let spec = StateSpec::pacs(vec![c(0.4, 0.1), c(-0.3, 0.2)], vec![1, 2]).unwrap();
    let psi = WavefunctionEvaluator::new(&d, 2.2, &spec).unwrap();
    let h = 0.1;
    let mut total = 0.0;
    for i in 0..161 {
        for j in 0..161 {
            let q = [-8.0 + h * i as f64, -8.0 + h * j as f64];
            total += psi.evaluate(&q).unwrap().norm_sqr();
        }
    }
    assert!((total * h * h - 1.0).abs() < 1e-9, "{}", total * h * h);
}

#[test]
fn wavefunction_and_wigner_agree() {
    let d = driven_mode();
    for spec in [
        StateSpec::pacs(vec![c(0.5, 0.3)], vec![1]).unwrap(),
        StateSpec::fock(vec![2]).unwrap(),
    ] {
        let t = 0.9;
        let psi = WavefunctionEvaluator::new(&d, t, &spec).unwrap();
        let w = WignerEvaluator::new(&d, t, &spec).unwrap();
        // ψ sampled on a 0.1 lattice so that q ± y/2 stays on it for y on a 0.2 lattice
        let h = 0.1;
        let lattice: Vec<C64> = (0..=400)
            .map(|i| psi.evaluate(&[-20.0 + h * i as f64]).unwrap())
            .collect();
        let at = |x: f64| lattice[((x + 20.0) / h).round() as usize];
        let mut worst: f64 = 0.0;
        for qi in (0..=80).step_by(8) {
            let q = -4.0 + h * qi as f64;
            for &p in &[-1.5, -0.2, 0.0, 0.9, 2.1] {
                let mut s = c(0.0, 0.0);
                for k in -100i32..=100 {
                    let y = 2.0 * h * k as f64;
                    if (q + y / 2.0).abs() > 20.0 || (q - y / 2.0).abs() > 20.0 {
                        continue;
                    }
                    s += at(q + y / 2.0).conj() * at(q - y / 2.0) * c(0.0, p * y).exp();
                }
                let from_psi = (s * (2.0 * h)).re;
                worst = worst.max((from_psi - w.evaluate(&[q, p])).abs());
            }
        }
        assert!(worst < 1e-8, "{worst}");
    }
}
