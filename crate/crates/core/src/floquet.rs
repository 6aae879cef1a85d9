//! Monodromy matrix, Floquet exponents and the canonical Floquet–Lyapunov
//! transformation (FLT).
//!
//! The fundamental matrix `Φ(t)` of `ẋ = Π(t) x` is integrated with a
//! fixed-step classical Runge–Kutta scheme on the grid `t_k = kT/steps`.
//! The FLT is
//!
//! ```text
//! F(t) = Φ(t) F(0) exp(−iWt),      F = [[U, U*], [V, V*]],   W = diag(Ω, −Ω)
//! ```
//!
//! where the columns of `F(0)` are monodromy eigenvectors normalized so that
//! `F J Fᵀ = −iJ`. Each column `u_j` is the eigenvector of positive
//! symplectic signature (`−i u†Ju > 0`) and its exponent `ω_j` is the
//! argument of the matching multiplier `e^{iω_j T}`, taken in `(0, 2π/T)`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use nalgebra::{ComplexField, DVector};

use crate::error::{Error, Result};
use crate::linalg::{
    column_echelon, complexify, det_complex, floquet_phases, max_abs, null_space, symplectic_form, CMat, RMat, I,
};
use crate::model::PeriodicConfiguration;
use crate::C64;

/// `| |λ| − 1 |` above which a multiplier counts as off the unit circle.
pub const STABILITY_TOLERANCE: f64 = 1e-6;
/// Multipliers closer than this are treated as one repeated multiplier.
const CLUSTER_TOLERANCE: f64 = 1e-6;
/// Relative singular-value threshold for eigenspace extraction.
const NULL_SPACE_TOLERANCE: f64 = 1e-7;
/// Smallest admissible symplectic norm `|−i u†Ju|` of an eigenvector.
const SIGNATURE_TOLERANCE: f64 = 1e-9;
/// Exponents closer than this are considered tied when ordering modes.
const TIE_TOLERANCE: f64 = 1e-9;

/// One classical Runge–Kutta step of `Φ̇ = Π(t) Φ`.
fn rk4_step(config: &PeriodicConfiguration, t: f64, h: f64, phi: &RMat) -> RMat {
    let pi0 = config.evaluate_pi(t);
    let pi_mid = config.evaluate_pi(t + 0.5 * h);
    let pi1 = config.evaluate_pi(t + h);
    let k1 = &pi0 * phi;
    let k2 = &pi_mid * (phi + &k1 * (0.5 * h));
    let k3 = &pi_mid * (phi + &k2 * (0.5 * h));
    let k4 = &pi1 * (phi + &k3 * h);
    phi + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
}

/// Fundamental matrix `Φ(t_k)` on the grid `t_k = kT/steps`,
/// `k = 0 … steps`. `Φ(t_0)` is the identity.
pub fn fundamental_matrix(config: &PeriodicConfiguration) -> Result<Vec<RMat>> {
    let n2 = 2 * config.n_modes();
    let steps = config.steps_per_period();
    let period = config.period();
    let h = period / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(RMat::identity(n2, n2));
    for k in 0..steps {
        let t = k as f64 * period / steps as f64;
        let next = rk4_step(config, t, h, &out[k]);
        if next.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { step: k + 1 });
        }
        out.push(next);
    }
    Ok(out)
}

/// `Φ(t)` for arbitrary `t` by direct integration from zero, with a step no
/// longer than the configuration's grid step.
pub fn propagator(config: &PeriodicConfiguration, t: f64) -> Result<RMat> {
    let n2 = 2 * config.n_modes();
    let grid_h = config.period() / config.steps_per_period() as f64;
    let steps = ComplexField::ceil(t.abs() / grid_h).max(1.0) as usize;
    let h = t / steps as f64;
    let mut phi = RMat::identity(n2, n2);
    for k in 0..steps {
        phi = rk4_step(config, k as f64 * h, h, &phi);
        if phi.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { step: k + 1 });
        }
    }
    Ok(phi)
}

/// Monodromy matrix and multipliers, without any verdict-dependent errors.
#[derive(Debug, Clone)]
pub struct MonodromyAnalysis {
    pub monodromy: RMat,
    pub multipliers: Vec<C64>,
    /// `max_j | |λ_j| − 1 |`.
    pub stability_margin: f64,
    pub stable: bool,
}

impl MonodromyAnalysis {
    pub fn from_monodromy(monodromy: RMat) -> Self {
        let mut multipliers: Vec<C64> = monodromy
            .clone()
            .schur()
            .complex_eigenvalues()
            .iter()
            .cloned()
            .collect();
        multipliers.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        let stability_margin = multipliers
            .iter()
            .map(|l| (l.modulus() - 1.0).abs())
            .fold(0.0, f64::max);
        Self {
            monodromy,
            multipliers,
            stability_margin,
            stable: stability_margin <= STABILITY_TOLERANCE,
        }
    }
}

pub fn analyze_monodromy(config: &PeriodicConfiguration) -> Result<MonodromyAnalysis> {
    let phi = fundamental_matrix(config)?;
    Ok(MonodromyAnalysis::from_monodromy(
        phi[config.steps_per_period()].clone(),
    ))
}

/// Floquet exponents together with the canonical eigenvectors that form the
/// left half of `F(0)`.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    pub monodromy: RMat,
    pub multipliers: Vec<C64>,
    /// `ω_j ∈ (0, 2π/T)`, ascending.
    pub exponents: Vec<f64>,
    /// `2N × N`; column `j` is `(U_{·j}, V_{·j})` at `t = 0`.
    pub modes: CMat,
    pub stability_margin: f64,
    pub stable: bool,
}

/// Monodromy, exponents and stability verdict. Fails with
/// [`Error::Unstable`] when a multiplier leaves the unit circle and with
/// [`Error::Degenerate`] for a unit multiplier or a defective eigenspace.
pub fn monodromy_and_exponents(config: &PeriodicConfiguration) -> Result<FloquetSpectrum> {
    let analysis = analyze_monodromy(config)?;
    spectrum_from_analysis(analysis, config.period())
}

fn spectrum_from_analysis(analysis: MonodromyAnalysis, period: f64) -> Result<FloquetSpectrum> {
    if !analysis.stable {
        return Err(Error::Unstable {
            margin: analysis.stability_margin,
        });
    }
    let n2 = analysis.monodromy.nrows();
    let (exponents, modes) = canonical_modes(&analysis.monodromy, &analysis.multipliers, period)?;
    debug_assert_eq!(modes.nrows(), n2);
    Ok(FloquetSpectrum {
        monodromy: analysis.monodromy,
        multipliers: analysis.multipliers,
        exponents,
        modes,
        stability_margin: analysis.stability_margin,
        stable: true,
    })
}

struct Mode {
    omega: f64,
    vector: DVector<C64>,
}

/// Hermitian symplectic product `g(u, w) = −i u† J w`.
fn signature_product(j: &CMat, u: &DVector<C64>, w: &DVector<C64>) -> C64 {
    -I * (u.adjoint() * j * w)[(0, 0)]
}

fn exponent_of(multiplier: C64, period: f64) -> f64 {
    let mut arg = multiplier.argument();
    if arg <= 0.0 {
        arg += 2.0 * PI;
    }
    arg / period
}

/// Gram–Schmidt with respect to the positive-definite form `g`.
fn signature_gram_schmidt(j: &CMat, vectors: Vec<DVector<C64>>, first_mode: usize) -> Result<Vec<DVector<C64>>> {
    let mut out: Vec<DVector<C64>> = Vec::with_capacity(vectors.len());
    for (idx, mut v) in vectors.into_iter().enumerate() {
        for e in &out {
            let proj = signature_product(j, e, &v);
            v -= e * proj;
        }
        let norm = signature_product(j, &v, &v).re;
        if norm <= SIGNATURE_TOLERANCE {
            return Err(Error::NormalizationSingular { mode: first_mode + idx });
        }
        out.push(v / C64::new(norm.sqrt(), 0.0));
    }
    Ok(out)
}

/// Positive-signature modes of the eigenspace of a multiplier `λ` in the
/// open upper half plane. Negative-signature directions are conjugated and
/// become positive modes of `λ*`.
fn modes_for_complex_cluster(
    monodromy: &CMat,
    j: &CMat,
    lambda: C64,
    multiplicity: usize,
    period: f64,
    first_mode: usize,
) -> Result<Vec<Mode>> {
    let n2 = monodromy.nrows();
    let shifted = monodromy - CMat::identity(n2, n2) * lambda;
    let basis = null_space(&shifted, multiplicity, NULL_SPACE_TOLERANCE)
        .ok_or(Error::Degenerate("repeated multiplier with defective eigenspace"))?;
    let basis = column_echelon(&basis, 1e-8);
    let gram = (basis.adjoint() * j * &basis) * (-I);
    let gram = (&gram + gram.adjoint()) * C64::new(0.5, 0.0);
    let eig = gram.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|d| d.abs() <= SIGNATURE_TOLERANCE) {
        return Err(Error::NormalizationSingular { mode: first_mode });
    }
    let columns: Vec<DVector<C64>> = (0..basis.ncols()).map(|c| basis.column(c).into_owned()).collect();
    let omega_plus = exponent_of(lambda, period);
    let omega_minus = exponent_of(lambda.conj(), period);

    if eig.eigenvalues.iter().all(|&d| d > 0.0) {
        let vs = signature_gram_schmidt(j, columns, first_mode)?;
        return Ok(vs
            .into_iter()
            .map(|vector| Mode {
                omega: omega_plus,
                vector,
            })
            .collect());
    }
    if eig.eigenvalues.iter().all(|&d| d < 0.0) {
        let conj: Vec<DVector<C64>> = columns.iter().map(|c| c.map(|z| z.conj())).collect();
        let vs = signature_gram_schmidt(j, conj, first_mode)?;
        return Ok(vs
            .into_iter()
            .map(|vector| Mode {
                omega: omega_minus,
                vector,
            })
            .collect());
    }
    // Mixed signature inside one eigenspace: split along the eigenvectors of g.
    let mut out = Vec::with_capacity(multiplicity);
    for (k, &d) in eig.eigenvalues.iter().enumerate() {
        let v = &basis * eig.eigenvectors.column(k) / C64::new(d.abs().sqrt(), 0.0);
        if d > 0.0 {
            out.push(Mode {
                omega: omega_plus,
                vector: v,
            });
        } else {
            out.push(Mode {
                omega: omega_minus,
                vector: v.map(|z| z.conj()),
            });
        }
    }
    Ok(out)
}

/// Modes of a multiplier `−1` (exponent `π/T`). The eigenspace is real; a
/// symplectic basis `(e_k, f_k)` with `e_kᵀ J f_k = 1` yields the modes
/// `(e_k + i f_k)/√2`.
fn modes_for_minus_one(
    monodromy: &CMat,
    j_real: &RMat,
    multiplicity: usize,
    period: f64,
    first_mode: usize,
) -> Result<Vec<Mode>> {
    if !multiplicity.is_multiple_of(2) {
        return Err(Error::Degenerate("odd multiplicity of the multiplier -1"));
    }
    let n2 = monodromy.nrows();
    let shifted = monodromy + CMat::identity(n2, n2);
    let basis = null_space(&shifted, multiplicity, NULL_SPACE_TOLERANCE)
        .ok_or(Error::Degenerate("multiplier -1 with defective eigenspace"))?;
    let mut stacked = RMat::zeros(n2, 2 * multiplicity);
    for c in 0..multiplicity {
        for r in 0..n2 {
            stacked[(r, c)] = basis[(r, c)].re;
            stacked[(r, c + multiplicity)] = basis[(r, c)].im;
        }
    }
    let svd = stacked.svd(true, false);
    let left = svd.u.ok_or(Error::Degenerate("eigenspace extraction failed"))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut real_basis = CMat::zeros(n2, multiplicity);
    for (slot, &idx) in order.iter().take(multiplicity).enumerate() {
        real_basis.set_column(slot, &left.column(idx).map(|x| C64::new(x, 0.0)));
    }
    let real_basis = column_echelon(&real_basis, 1e-8);
    let mut pool: Vec<DVector<f64>> = (0..multiplicity).map(|c| real_basis.column(c).map(|z| z.re)).collect();
    let omega = PI / period;
    let form = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * j_real * b)[(0, 0)];
    let mut out = Vec::with_capacity(multiplicity / 2);
    while !pool.is_empty() {
        let e = pool.remove(0);
        let (best, value) = pool
            .iter()
            .enumerate()
            .map(|(k, x)| (k, form(&e, x)))
            .fold((0, 0.0), |acc, cur| if cur.1.abs() > acc.1.abs() { cur } else { acc });
        if value.abs() <= SIGNATURE_TOLERANCE {
            return Err(Error::NormalizationSingular {
                mode: first_mode + out.len(),
            });
        }
        let f = pool.remove(best) / value;
        for x in pool.iter_mut() {
            let xf = form(x, &f);
            let xe = form(x, &e);
            *x = &*x - &e * xf + &f * xe;
        }
        let scale = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let vector = e.zip_map(&f, C64::new) * scale;
        out.push(Mode { omega, vector });
    }
    Ok(out)
}

/// Fix the free phase of a canonical mode: rotate so that `v·u` (bilinear
/// product of the momentum and position parts) is positive imaginary, then
/// choose the sign that makes the largest-magnitude entry have a positive
/// real part. When `v·u` vanishes the largest entry is made real positive.
fn fix_phase(vector: &mut DVector<C64>, n_modes: usize) {
    let q = vector.rows(0, n_modes);
    let p = vector.rows(n_modes, n_modes);
    let vu: C64 = p.iter().zip(q.iter()).map(|(a, b)| a * b).sum();
    let largest = |v: &DVector<C64>| {
        let mut best = 0;
        for k in 1..v.len() {
            if v[k].modulus() > v[best].modulus() * (1.0 + 1e-12) {
                best = k;
            }
        }
        best
    };
    if vu.modulus() > 1e-12 {
        let target = C64::new(0.0, vu.modulus());
        let rot = (target / vu).sqrt();
        *vector *= rot;
        let k = largest(vector);
        let z = vector[k];
        let flip = if z.re.abs() > 1e-12 * z.modulus() {
            z.re < 0.0
        } else {
            z.im < 0.0
        };
        if flip {
            *vector = -vector.clone();
        }
    } else {
        let k = largest(vector);
        let z = vector[k];
        let rot = z.conj() / C64::new(z.modulus(), 0.0);
        *vector *= rot;
    }
}

fn compare_modes(a: &Mode, b: &Mode) -> Ordering {
    if (a.omega - b.omega).abs() > TIE_TOLERANCE {
        return a.omega.total_cmp(&b.omega);
    }
    // ties: larger leading |entries| first
    for (x, y) in a.vector.iter().zip(b.vector.iter()) {
        let (x, y) = (x.modulus(), y.modulus());
        if (x - y).abs() > 1e-9 {
            return y.total_cmp(&x);
        }
    }
    Ordering::Equal
}

fn canonical_modes(monodromy: &RMat, multipliers: &[C64], period: f64) -> Result<(Vec<f64>, CMat)> {
    let n2 = monodromy.nrows();
    let n = n2 / 2;
    let j_real = symplectic_form(n);
    let j = complexify(&j_real);
    let m = complexify(monodromy);

    let mut remaining: Vec<C64> = multipliers.to_vec();
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    while let Some(seed) = remaining.first().cloned() {
        let (members, rest): (Vec<C64>, Vec<C64>) = remaining
            .into_iter()
            .partition(|z| (z - seed).modulus() <= CLUSTER_TOLERANCE);
        let mean = members.iter().sum::<C64>() / C64::new(members.len() as f64, 0.0);
        clusters.push((mean, members.len()));
        remaining = rest;
    }

    let mut modes: Vec<Mode> = Vec::with_capacity(n);
    for &(lambda, count) in &clusters {
        if (lambda - C64::new(1.0, 0.0)).modulus() <= CLUSTER_TOLERANCE {
            return Err(Error::Degenerate("unit multiplier (zero Floquet exponent)"));
        }
        if (lambda + C64::new(1.0, 0.0)).modulus() <= CLUSTER_TOLERANCE {
            let found = modes_for_minus_one(&m, &j_real, count, period, modes.len())?;
            modes.extend(found);
        } else if lambda.im > 0.0 {
            let found = modes_for_complex_cluster(&m, &j, lambda, count, period, modes.len())?;
            modes.extend(found);
        }
    }
    if modes.len() != n {
        return Err(Error::Degenerate("multipliers do not form N conjugate pairs"));
    }
    for mode in modes.iter_mut() {
        fix_phase(&mut mode.vector, n);
    }
    modes.sort_by(compare_modes);
    let mut f0 = CMat::zeros(n2, n);
    let mut exponents = vec![0.0; n];
    for (k, mode) in modes.iter().enumerate() {
        f0.set_column(k, &mode.vector);
        exponents[k] = mode.omega;
    }
    Ok((exponents, f0))
}

/// The sampled canonical Floquet–Lyapunov transformation of a stable
/// configuration. Immutable after [`build_flt`].
#[derive(Debug, Clone)]
pub struct FloquetDecomposition {
    config: PeriodicConfiguration,
    monodromy: RMat,
    multipliers: Vec<C64>,
    exponents: Vec<f64>,
    flt_samples: Vec<CMat>,
    stable: bool,
    stability_margin: f64,
}

/// Integrates one period, extracts the canonical modes and samples
/// `F(t_k) = Φ(t_k) F(0) exp(−iW t_k)` on the integration grid.
pub fn build_flt(config: &PeriodicConfiguration) -> Result<FloquetDecomposition> {
    let phi = fundamental_matrix(config)?;
    let steps = config.steps_per_period();
    let analysis = MonodromyAnalysis::from_monodromy(phi[steps].clone());
    let spectrum = spectrum_from_analysis(analysis, config.period())?;
    let n = config.n_modes();
    let mut f0 = CMat::zeros(2 * n, 2 * n);
    f0.view_mut((0, 0), (2 * n, n)).copy_from(&spectrum.modes);
    f0.view_mut((0, n), (2 * n, n))
        .copy_from(&spectrum.modes.map(|z| z.conj()));

    let period = config.period();
    let flt_samples = phi
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let t = k as f64 * period / steps as f64;
            if k == 0 {
                f0.clone()
            } else {
                complexify(p) * &f0 * floquet_phases(&spectrum.exponents, -t)
            }
        })
        .collect();
    Ok(FloquetDecomposition {
        config: config.clone(),
        monodromy: spectrum.monodromy,
        multipliers: spectrum.multipliers,
        exponents: spectrum.exponents,
        flt_samples,
        stable: true,
        stability_margin: spectrum.stability_margin,
    })
}

impl FloquetDecomposition {
    pub fn config(&self) -> &PeriodicConfiguration {
        &self.config
    }

    pub fn n_modes(&self) -> usize {
        self.config.n_modes()
    }

    pub fn period(&self) -> f64 {
        self.config.period()
    }

    pub fn monodromy(&self) -> &RMat {
        &self.monodromy
    }

    pub fn multipliers(&self) -> &[C64] {
        &self.multipliers
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn flt_samples(&self) -> &[CMat] {
        &self.flt_samples
    }

    pub fn stable(&self) -> bool {
        self.stable
    }

    pub fn stability_margin(&self) -> f64 {
        self.stability_margin
    }

    /// `F(t)`. On-grid times return the stored sample; other times reduce
    /// `t` modulo `T` and interpolate with a periodic four-point cubic.
    pub fn flt_at(&self, t: f64) -> CMat {
        let steps = self.config.steps_per_period();
        let period = self.period();
        let mut tau = t % period;
        if tau < 0.0 {
            tau += period;
        }
        let s = tau / period * steps as f64;
        let nearest = ComplexField::round(s);
        if (s - nearest).abs() < 1e-9 {
            return self.flt_samples[nearest as usize % steps].clone();
        }
        let k = ComplexField::floor(s) as isize;
        let x = s - k as f64;
        let weights = [
            -x * (x - 1.0) * (x - 2.0) / 6.0,
            (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0,
            -(x + 1.0) * x * (x - 2.0) / 2.0,
            (x + 1.0) * x * (x - 1.0) / 6.0,
        ];
        let mut out = CMat::zeros(self.flt_samples[0].nrows(), self.flt_samples[0].ncols());
        for (offset, w) in weights.iter().enumerate() {
            let idx = (k - 1 + offset as isize).rem_euclid(steps as isize) as usize;
            out += &self.flt_samples[idx] * C64::new(*w, 0.0);
        }
        out
    }

    /// `F(t)` by integrating `Φ` from zero to `t` instead of interpolating.
    pub fn flt_reintegrated(&self, t: f64) -> Result<CMat> {
        let phi = propagator(&self.config, t)?;
        Ok(complexify(&phi) * &self.flt_samples[0] * floquet_phases(&self.exponents, -t))
    }

    /// `G(t) = F(t) exp(iWt)`; its columns are classical solutions and
    /// `x̂ = G(t) Î(t)`.
    pub fn propagated(&self, t: f64) -> CMat {
        self.flt_at(t) * floquet_phases(&self.exponents, t)
    }

    /// `(U(t), V(t))` blocks of `F(t)`.
    pub fn blocks_at(&self, t: f64) -> (CMat, CMat) {
        let n = self.n_modes();
        let f = self.flt_at(t);
        (f.view((0, 0), (n, n)).into_owned(), f.view((n, 0), (n, n)).into_owned())
    }

    /// Coefficients of the integrals of motion in terms of the
    /// time-independent `x̂ = (q̂, p̂)`:
    ///
    /// ```text
    /// Â(t)  = e^{iΩt}(−i Vᵀ q̂ + i Uᵀ p̂)
    /// Â†(t) = e^{−iΩt}( i V† q̂ − i U† p̂)
    /// ```
    ///
    /// Returns the `N × 2N` matrices for `Â` and `Â†`. Stacked as
    /// `[Â†; Â]` they equal `(F(t) e^{iWt})⁻¹`.
    pub fn integrals_of_motion_coefficients(&self, t: f64) -> (CMat, CMat) {
        let n = self.n_modes();
        let (u, v) = self.blocks_at(t);
        let mut a = CMat::zeros(n, 2 * n);
        let mut adag = CMat::zeros(n, 2 * n);
        for (row, &w) in self.exponents.iter().enumerate() {
            let (s, c) = (w * t).sin_cos();
            let ph = C64::new(c, s);
            for col in 0..n {
                a[(row, col)] = -I * ph * v[(col, row)];
                a[(row, col + n)] = I * ph * u[(col, row)];
                adag[(row, col)] = I * ph.conj() * v[(col, row)].conj();
                adag[(row, col + n)] = -I * ph.conj() * u[(col, row)].conj();
            }
        }
        (a, adag)
    }

    /// `max |Vᵀ(0) U(0) − (i/2) I|`.
    pub fn canonical_condition_residual(&self) -> f64 {
        let n = self.n_modes();
        let f0 = &self.flt_samples[0];
        let u = f0.view((0, 0), (n, n));
        let v = f0.view((n, 0), (n, n));
        let target = CMat::identity(n, n) * C64::new(0.0, 0.5);
        max_abs(&(v.transpose() * u - target))
    }

    /// `max |F J Fᵀ + iJ|` at time `t`.
    pub fn symplectic_residual(&self, t: f64) -> f64 {
        let j = complexify(&symplectic_form(self.n_modes()));
        let f = self.flt_at(t);
        max_abs(&(&f * &j * f.transpose() + &j * I))
    }

    /// `|det F(t) − (−i)^N|`.
    pub fn determinant_residual(&self, t: f64) -> f64 {
        let target = (0..self.n_modes()).fold(C64::new(1.0, 0.0), |acc, _| acc * (-I));
        (det_complex(&self.flt_at(t)) - target).modulus()
    }

    /// `max |F(T) − F(0)|` over the stored end points.
    pub fn periodicity_residual(&self) -> f64 {
        max_abs(&(&self.flt_samples[self.flt_samples.len() - 1] - &self.flt_samples[0]))
    }

    /// Test hook: multiplies the `U` block of every sample by `factor`,
    /// breaking canonicity on purpose.
    #[doc(hidden)]
    pub fn scale_u_block(&mut self, factor: f64) {
        let n = self.n_modes();
        for f in self.flt_samples.iter_mut() {
            let mut top = f.view_mut((0, 0), (n, 2 * n));
            top *= C64::new(factor, 0.0);
        }
    }
}
