//! Wavefunctions and Wigner functions of photon-added coherent states.
//!
//! With `Ũ = U(t) e^{iΩt}`, `Ṽ = V(t) e^{iΩt}`, `S = Ũ^{−T} Ṽᵀ` and
//! `M = Ũ† Ũ^{−T}` the position-space wavefunction is
//!
//! ```text
//! ψ(q) = N_{α,m} N₀ e^{−|α|²/2} exp(½ i qᵀSq − ½ αᵀMα + αᵀŨ^{−1}q) H_m^M(Ũ^{−*}q − α)
//! ```
//!
//! and the Wigner function, normalized to `∫W d^Nq d^Np = (2π)^N`, is
//!
//! ```text
//! W = 2^N exp(−2|A − α|²) Π_k (−1)^{m_k} L_{m_k}(|2A_k − α_k|²) / L_{m_k}(−|α_k|²)
//! ```
//!
//! where `A = A(q, p, t)` is the classical counterpart of `Â(t)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::floquet::FloquetDecomposition;
use crate::linalg::{CMat, I};
use crate::special::{hermite_multidim, laguerre};
use crate::states::StateSpec;
use crate::C64;

/// Upper bound on the number of points of one Wigner grid.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// One phase-space coordinate, either swept or held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Free { min: f64, max: f64, count: usize },
    Pinned(f64),
}

impl Axis {
    pub fn is_free(&self) -> bool {
        matches!(self, Axis::Free { .. })
    }

    fn len(&self) -> usize {
        match *self {
            Axis::Free { count, .. } => count,
            Axis::Pinned(_) => 1,
        }
    }

    fn value(&self, i: usize) -> f64 {
        match *self {
            Axis::Free { min, max, count } => min + (max - min) * i as f64 / (count - 1) as f64,
            Axis::Pinned(v) => v,
        }
    }

    pub fn spacing(&self) -> Option<f64> {
        match *self {
            Axis::Free { min, max, count } => Some((max - min) / (count - 1) as f64),
            Axis::Pinned(_) => None,
        }
    }
}

/// Lattice over `(q₁…q_N, p₁…p_N)` with samples in row-major order: the
/// first axis varies slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    axes: Vec<Axis>,
    samples: Vec<f64>,
}

impl PhaseSpaceGrid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || !axes.len().is_multiple_of(2) {
            return Err(Error::InvalidGrid("a phase-space grid needs 2N axes"));
        }
        for axis in &axes {
            match *axis {
                Axis::Free { min, max, count } => {
                    if count < 2 {
                        return Err(Error::InvalidGrid("free axes need at least two points"));
                    }
                    if !(min.is_finite() && max.is_finite() && min < max) {
                        return Err(Error::InvalidGrid("free axes need finite bounds with min < max"));
                    }
                }
                Axis::Pinned(v) if !v.is_finite() => {
                    return Err(Error::InvalidGrid("pinned coordinates must be finite"));
                }
                Axis::Pinned(_) => {}
            }
        }
        let mut points: usize = 1;
        for axis in &axes {
            points = points.saturating_mul(axis.len());
        }
        if points > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge {
                points,
                limit: MAX_GRID_POINTS,
            });
        }
        Ok(Self {
            axes,
            samples: Vec::new(),
        })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn n_modes(&self) -> usize {
        self.axes.len() / 2
    }

    pub fn n_points(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    /// Coordinates `(q, p)` of the point with row-major index `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.axes.len()];
        let mut rest = flat;
        for (k, axis) in self.axes.iter().enumerate().rev() {
            let len = axis.len();
            out[k] = axis.value(rest % len);
            rest /= len;
        }
        out
    }

    /// Product of the spacings of the free axes.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().filter_map(Axis::spacing).product()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn with_samples(mut self, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != self.n_points() {
            return Err(Error::DimensionMismatch {
                what: "grid samples",
                expected: self.n_points(),
                found: samples.len(),
            });
        }
        self.samples = samples;
        Ok(self)
    }
}

/// `A(q, p, t) = e^{iΩt}(−i Vᵀ q + i Uᵀ p)`.
pub fn classical_mode(decomp: &FloquetDecomposition, t: f64, q: &[f64], p: &[f64]) -> Vec<C64> {
    let (a, _) = decomp.integrals_of_motion_coefficients(t);
    apply_coefficients(&a, q, p)
}

fn apply_coefficients(a: &CMat, q: &[f64], p: &[f64]) -> Vec<C64> {
    let n = a.nrows();
    (0..n)
        .map(|k| {
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                s += a[(k, j)] * q[j] + a[(k, j + n)] * p[j];
            }
            s
        })
        .collect()
}

fn check_modes(decomp: &FloquetDecomposition, spec: &StateSpec) -> Result<()> {
    if decomp.n_modes() != spec.n_modes() {
        return Err(Error::DimensionMismatch {
            what: "state modes",
            expected: decomp.n_modes(),
            found: spec.n_modes(),
        });
    }
    Ok(())
}

/// Pointwise Wigner function of a state at a fixed time.
#[derive(Debug, Clone)]
pub struct WignerEvaluator {
    coefficients: CMat,
    alpha: Vec<C64>,
    excitations: Vec<u32>,
    denominators: Vec<f64>,
}

impl WignerEvaluator {
    pub fn new(decomp: &FloquetDecomposition, t: f64, spec: &StateSpec) -> Result<Self> {
        check_modes(decomp, spec)?;
        let (coefficients, _) = decomp.integrals_of_motion_coefficients(t);
        let excitations = spec.excitations().entries().to_vec();
        let denominators = spec
            .alpha()
            .iter()
            .zip(&excitations)
            .map(|(a, &m)| laguerre(m, 0, -a.norm_sqr()))
            .collect();
        Ok(Self {
            coefficients,
            alpha: spec.alpha().to_vec(),
            excitations,
            denominators,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.alpha.len()
    }

    /// `W` at `x = (q, p)`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let n = self.n_modes();
        let a = apply_coefficients(&self.coefficients, &x[..n], &x[n..]);
        let mut value = 2f64.powi(n as i32);
        let mut exponent = 0.0;
        for (k, &ak) in a.iter().enumerate() {
            exponent += (ak - self.alpha[k]).norm_sqr();
            let m = self.excitations[k];
            if m > 0 {
                let arg = (ak * 2.0 - self.alpha[k]).norm_sqr();
                let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
                value *= sign * laguerre(m, 0, arg) / self.denominators[k];
            }
        }
        value * (-2.0 * exponent).exp()
    }
}

/// Samples the Wigner function on every point of `grid`.
pub fn wigner_pacs(
    decomp: &FloquetDecomposition,
    t: f64,
    spec: &StateSpec,
    grid: &PhaseSpaceGrid,
) -> Result<PhaseSpaceGrid> {
    if grid.n_modes() != decomp.n_modes() {
        return Err(Error::DimensionMismatch {
            what: "grid axes",
            expected: 2 * decomp.n_modes(),
            found: grid.axes().len(),
        });
    }
    let evaluator = WignerEvaluator::new(decomp, t, spec)?;
    let samples = (0..grid.n_points())
        .map(|i| evaluator.evaluate(&grid.point(i)))
        .collect();
    grid.clone().with_samples(samples)
}

fn invert(m: &CMat) -> Result<CMat> {
    let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.modulus()));
    let lu = m.clone().lu();
    if lu.determinant().modulus() <= 1e-14 * scale.powi(m.nrows() as i32) {
        return Err(Error::SingularU);
    }
    lu.try_inverse().ok_or(Error::SingularU)
}

/// Pointwise position-space wavefunction of a state at a fixed time.
#[derive(Debug, Clone)]
pub struct WavefunctionEvaluator {
    /// `S = Ũ^{−T} Ṽᵀ`.
    s: CMat,
    /// `M = Ũ† Ũ^{−T}`.
    m: CMat,
    /// `Ũ^{−1}`.
    u_inv: CMat,
    /// `(Ũ*)^{−1}`.
    u_conj_inv: CMat,
    alpha: Vec<C64>,
    spec: StateSpec,
    /// `N_{α,m} N₀ e^{−|α|²/2} e^{−½αᵀMα}`.
    prefactor: C64,
}

impl WavefunctionEvaluator {
    pub fn new(decomp: &FloquetDecomposition, t: f64, spec: &StateSpec) -> Result<Self> {
        check_modes(decomp, spec)?;
        let n = decomp.n_modes();
        let g = decomp.propagated(t);
        let u = g.view((0, 0), (n, n)).into_owned();
        let v = g.view((n, 0), (n, n)).into_owned();
        let u_inv = invert(&u)?;
        let u_inv_t = u_inv.transpose();
        let s = &u_inv_t * v.transpose();
        let m = u.adjoint() * &u_inv_t;
        let m = (&m + m.transpose()) * C64::new(0.5, 0.0);
        let u_conj_inv = u_inv.map(|z| z.conj());

        let im_s = s.map(|z| z.im);
        let im_s = (&im_s + im_s.transpose()) * 0.5;
        let det_im_s = im_s.lu().determinant();
        if det_im_s <= 0.0 {
            return Err(Error::SingularU);
        }
        let n0 = (det_im_s / PI.powi(n as i32)).powf(0.25);
        let alpha: Vec<C64> = spec.alpha().to_vec();
        let alpha_vec = nalgebra::DVector::from_column_slice(&alpha);
        let quad = (alpha_vec.transpose() * &m * &alpha_vec)[(0, 0)];
        let norm_alpha: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
        let prefactor = (-quad * 0.5).exp() * (n0 * (-0.5 * norm_alpha).exp() / spec.normalization().sqrt());
        Ok(Self {
            s,
            m,
            u_inv,
            u_conj_inv,
            alpha,
            spec: spec.clone(),
            prefactor,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.alpha.len()
    }

    pub fn evaluate(&self, q: &[f64]) -> Result<C64> {
        let n = self.n_modes();
        if q.len() != n {
            return Err(Error::DimensionMismatch {
                what: "position vector",
                expected: n,
                found: q.len(),
            });
        }
        let mut quad = C64::new(0.0, 0.0);
        let mut linear = C64::new(0.0, 0.0);
        let mut z = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut sq = C64::new(0.0, 0.0);
            let mut uq = C64::new(0.0, 0.0);
            let mut wq = C64::new(0.0, 0.0);
            for (j, &qj) in q.iter().enumerate() {
                sq += self.s[(i, j)] * qj;
                uq += self.u_inv[(i, j)] * qj;
                wq += self.u_conj_inv[(i, j)] * qj;
            }
            quad += sq * q[i];
            linear += self.alpha[i] * uq;
            z[i] = wq - self.alpha[i];
        }
        let gaussian = (I * quad * 0.5 + linear).exp();
        let hermite = if self.spec.excitations().is_zero() {
            C64::new(1.0, 0.0)
        } else {
            hermite_multidim(&self.m, self.spec.excitations(), &z)?
        };
        Ok(self.prefactor * gaussian * hermite)
    }
}

pub fn wavefunction_pacs(decomp: &FloquetDecomposition, t: f64, spec: &StateSpec, q: &[f64]) -> Result<C64> {
    WavefunctionEvaluator::new(decomp, t, spec)?.evaluate(q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityStats {
    pub min_value: f64,
    pub min_location: Vec<f64>,
    /// `Σ_{W<0} |W| · cell_volume / (2π)^N`.
    pub negative_mass: f64,
}

pub fn negativity_scan(grid: &PhaseSpaceGrid, cell_volume: f64) -> Result<NegativityStats> {
    let samples = grid.samples();
    if samples.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut min_index = 0;
    let mut negative = 0.0;
    for (i, &w) in samples.iter().enumerate() {
        if w < samples[min_index] {
            min_index = i;
        }
        if w < 0.0 {
            negative -= w;
        }
    }
    let norm = (2.0 * PI).powi(grid.n_modes() as i32);
    Ok(NegativityStats {
        min_value: samples[min_index],
        min_location: grid.point(min_index),
        negative_mass: negative * cell_volume / norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::build_flt;
    use crate::model::PeriodicConfiguration;

    fn unit() -> FloquetDecomposition {
        build_flt(&PeriodicConfiguration::stationary(&[1.0], 1.0).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn square(lim: f64, count: usize) -> PhaseSpaceGrid {
        let axis = Axis::Free {
            min: -lim,
            max: lim,
            count,
        };
        PhaseSpaceGrid::new(vec![axis, axis]).unwrap()
    }

    #[test]
    fn classical_mode_examples() {
        let d = unit();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(classical_mode(&d, 0.0, &[0.0], &[0.0])[0], c(0.0, 0.0));
        assert!((classical_mode(&d, 0.0, &[1.0], &[0.0])[0] - c(r, 0.0)).modulus() < 1e-10);
        assert!((classical_mode(&d, 0.0, &[0.0], &[1.0])[0] - c(0.0, r)).modulus() < 1e-10);
    }

    #[test]
    fn wigner_origin_values() {
        let d = unit();
        let ground = WignerEvaluator::new(&d, 0.0, &StateSpec::coherent(vec![c(0.0, 0.0)]).unwrap()).unwrap();
        assert!((ground.evaluate(&[0.0, 0.0]) - 2.0).abs() < 1e-12);
        let one = WignerEvaluator::new(&d, 0.0, &StateSpec::pacs(vec![c(0.0, 0.0)], vec![1]).unwrap()).unwrap();
        assert!((one.evaluate(&[0.0, 0.0]) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_layout_and_guards() {
        let g = PhaseSpaceGrid::new(vec![
            Axis::Free {
                min: 0.0,
                max: 1.0,
                count: 3,
            },
            Axis::Pinned(0.5),
        ])
        .unwrap();
        assert_eq!(g.n_points(), 3);
        assert_eq!(g.point(2), vec![1.0, 0.5]);
        assert!(PhaseSpaceGrid::new(vec![Axis::Pinned(0.0)]).is_err());
        let big = Axis::Free {
            min: 0.0,
            max: 1.0,
            count: 4000,
        };
        assert!(matches!(
            PhaseSpaceGrid::new(vec![big, big]),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn fock_one_negativity_on_grid() {
        let d = unit();
        let spec = StateSpec::pacs(vec![c(0.0, 0.0)], vec![1]).unwrap();
        let grid = wigner_pacs(&d, 0.0, &spec, &square(4.0, 201)).unwrap();
        let stats = negativity_scan(&grid, grid.cell_volume()).unwrap();
        assert!((stats.min_value + 2.0).abs() < 1e-12);
        assert!(stats.min_location.iter().all(|x| x.abs() < 1e-12));
        assert!(stats.negative_mass > 0.0);

        let coherent = StateSpec::coherent(vec![c(0.5, -0.2)]).unwrap();
        let grid = wigner_pacs(&d, 0.3, &coherent, &square(4.0, 41)).unwrap();
        let stats = negativity_scan(&grid, grid.cell_volume()).unwrap();
        assert!(stats.min_value >= 0.0 && stats.negative_mass == 0.0);

        let zeros = square(10.0, 11);
        let zeros = zeros.clone().with_samples(vec![0.0; zeros.n_points()]).unwrap();
        let stats = negativity_scan(&zeros, zeros.cell_volume()).unwrap();
        assert_eq!((stats.min_value, stats.negative_mass), (0.0, 0.0));
        assert_eq!(negativity_scan(&square(1.0, 2), 1.0), Err(Error::EmptyGrid));
    }

    fn integrate_density(psi: &WavefunctionEvaluator, lim: f64, count: usize) -> f64 {
        let h = 2.0 * lim / (count - 1) as f64;
        (0..count)
            .map(|i| psi.evaluate(&[-lim + h * i as f64]).unwrap().norm_sqr() * h)
            .sum()
    }

    #[test]
    fn gaussian_wavefunction_is_normalized() {
        let single = build_flt(&PeriodicConfiguration::stationary(&[1.6], 1.0).unwrap()).unwrap();
        for spec in [
            StateSpec::coherent(vec![c(0.8, -0.4)]).unwrap(),
            StateSpec::pacs(vec![c(0.8, -0.4)], vec![2]).unwrap(),
        ] {
            let psi = WavefunctionEvaluator::new(&single, 0.37, &spec).unwrap();
            assert!((integrate_density(&psi, 10.0, 4001) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn first_excited_oscillator_state() {
        let psi =
            WavefunctionEvaluator::new(&unit(), 0.0, &StateSpec::pacs(vec![c(0.0, 0.0)], vec![1]).unwrap()).unwrap();
        for &q in &[-1.3, 0.0, 0.4, 2.2] {
            let rho = psi.evaluate(&[q]).unwrap().norm_sqr();
            let expected = 2.0 / PI.sqrt() * q * q * (-q * q).exp();
            assert!((rho - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn uncoupled_pair_factorizes() {
        let pair = build_flt(&PeriodicConfiguration::stationary(&[1.0, 1.4], 1.0).unwrap()).unwrap();
        let one = build_flt(&PeriodicConfiguration::stationary(&[1.0], 1.0).unwrap()).unwrap();
        let two = build_flt(&PeriodicConfiguration::stationary(&[1.4], 1.0).unwrap()).unwrap();
        let spec = StateSpec::pacs(vec![c(0.3, 0.2), c(-0.5, 0.1)], vec![1, 2]).unwrap();
        let s1 = StateSpec::pacs(vec![c(0.3, 0.2)], vec![1]).unwrap();
        let s2 = StateSpec::pacs(vec![c(-0.5, 0.1)], vec![2]).unwrap();
        let t = 0.21;
        for &(q1, q2) in &[(0.1, -0.7), (1.2, 0.3), (-0.6, 0.9)] {
            let joint = wavefunction_pacs(&pair, t, &spec, &[q1, q2]).unwrap();
            let product =
                wavefunction_pacs(&one, t, &s1, &[q1]).unwrap() * wavefunction_pacs(&two, t, &s2, &[q2]).unwrap();
            assert!((joint - product).modulus() < 1e-10);
        }
    }

    #[test]
    fn wigner_after_one_period() {
        let d = build_flt(&PeriodicConfiguration::mathieu_pair(1.1, 0.9, 0.05, 0.1, 2.0 * PI).unwrap()).unwrap();
        let t = 0.4 * d.period();
        let points = [[0.1, -0.3, 0.5, 0.2], [1.0, 0.4, -0.2, -0.8]];
        // undisplaced states repeat exactly
        let fock = StateSpec::fock(vec![1, 2]).unwrap();
        let a = WignerEvaluator::new(&d, t, &fock).unwrap();
        let b = WignerEvaluator::new(&d, t + d.period(), &fock).unwrap();
        for x in points {
            assert!((a.evaluate(&x) - b.evaluate(&x)).abs() < 1e-8);
        }
        // displaced states repeat with α_k rotated by e^{iω_k T}
        let alpha = [c(0.8, 0.0), c(0.5, 0.0)];
        let spec = StateSpec::pacs(alpha.to_vec(), vec![0, 1]).unwrap();
        let rotated: Vec<C64> = alpha
            .iter()
            .zip(d.exponents())
            .map(|(a, w)| a * C64::new(0.0, w * d.period()).exp())
            .collect();
        let later = StateSpec::pacs(rotated, vec![0, 1]).unwrap();
        let a = WignerEvaluator::new(&d, t, &spec).unwrap();
        let b = WignerEvaluator::new(&d, t + d.period(), &later).unwrap();
        for x in points {
            assert!((a.evaluate(&x) - b.evaluate(&x)).abs() < 1e-8);
        }
    }
}
