//! Means and covariance matrices of Fock, coherent and photon-added
//! coherent states (PACS).
//!
//! Every family is handled as a PACS `Π_k (Â_k†)^{m_k} |α⟩`: Fock states
//! are `α = 0` and coherent states are `m = 0`. The moments depend on the
//! Laguerre ratios `r_n = L^n_m(−|α|²) / L_m(−|α|²)` and on
//! `P^n = r_n − r_1²`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::floquet::FloquetDecomposition;
use crate::linalg::{det_real, max_imag, real_part, CMat, RMat};
use crate::special::{laguerre, MultiIndex, MAX_EXCITATION};
use crate::C64;

/// Largest imaginary part tolerated when a physically real quantity is
/// assembled from complex FLT blocks.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;
/// `|det σ − 2^{−2N}|` below which a state is reported as intelligent.
pub const INTELLIGENCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateFamily {
    Fock,
    Coherent,
    Pacs,
}

impl StateFamily {
    pub fn name(self) -> &'static str {
        match self {
            StateFamily::Fock => "fock",
            StateFamily::Coherent => "coherent",
            StateFamily::Pacs => "pacs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    family: StateFamily,
    alpha: Vec<C64>,
    excitations: MultiIndex,
}

impl StateSpec {
    pub fn new(family: StateFamily, alpha: Vec<C64>, excitations: MultiIndex) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidSpec("a state needs at least one mode"));
        }
        if alpha.len() != excitations.len() {
            return Err(Error::DimensionMismatch {
                what: "excitation multi-index",
                expected: alpha.len(),
                found: excitations.len(),
            });
        }
        if alpha.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidSpec("displacements must be finite"));
        }
        if let Some(&big) = excitations.entries().iter().find(|&&m| m > MAX_EXCITATION) {
            return Err(Error::ExcitationTooLarge(big));
        }
        match family {
            StateFamily::Fock if alpha.iter().any(|a| *a != C64::new(0.0, 0.0)) => {
                Err(Error::InvalidSpec("Fock states have zero displacement"))
            }
            StateFamily::Coherent if !excitations.is_zero() => {
                Err(Error::InvalidSpec("coherent states carry no added photons"))
            }
            _ => Ok(Self {
                family,
                alpha,
                excitations,
            }),
        }
    }

    pub fn fock(n: Vec<u32>) -> Result<Self> {
        let alpha = alloc::vec![C64::new(0.0, 0.0); n.len()];
        Self::new(StateFamily::Fock, alpha, MultiIndex::new(n))
    }

    pub fn coherent(alpha: Vec<C64>) -> Result<Self> {
        let m = MultiIndex::zeros(alpha.len());
        Self::new(StateFamily::Coherent, alpha, m)
    }

    pub fn pacs(alpha: Vec<C64>, m: Vec<u32>) -> Result<Self> {
        Self::new(StateFamily::Pacs, alpha, MultiIndex::new(m))
    }

    pub fn family(&self) -> StateFamily {
        self.family
    }

    pub fn alpha(&self) -> &[C64] {
        &self.alpha
    }

    pub fn excitations(&self) -> &MultiIndex {
        &self.excitations
    }

    pub fn n_modes(&self) -> usize {
        self.alpha.len()
    }

    /// `r_n = L^n_m(−|α|²) / L_m(−|α|²)` for mode `k`.
    pub fn laguerre_ratio(&self, k: usize, n: u32) -> f64 {
        let x = -self.alpha[k].norm_sqr();
        let m = self.excitations.get(k);
        laguerre(m, n, x) / laguerre(m, 0, x)
    }

    /// `P^n_{m_k} = r_n − r_1²` for `n ∈ {1, 2}`.
    pub fn p_ratio(&self, k: usize, n: u32) -> f64 {
        let r1 = self.laguerre_ratio(k, 1);
        self.laguerre_ratio(k, n) - r1 * r1
    }

    /// `Π_k m_k! L_{m_k}(−|α_k|²)`, the squared norm of the unnormalized PACS.
    pub fn normalization(&self) -> f64 {
        (0..self.n_modes())
            .map(|k| {
                let m = self.excitations.get(k);
                let fact: f64 = (1..=m).map(|j| j as f64).product();
                fact * laguerre(m, 0, -self.alpha[k].norm_sqr())
            })
            .product()
    }
}

/// First and diagonal second moments of the integrals of motion.
#[derive(Debug, Clone, PartialEq)]
pub struct PacsMoments {
    pub mean_a: Vec<C64>,
    pub mean_adag: Vec<C64>,
    pub aa_diag: Vec<C64>,
    pub adagadag_diag: Vec<C64>,
    pub adaga_diag: Vec<f64>,
}

impl PacsMoments {
    pub fn n_modes(&self) -> usize {
        self.mean_a.len()
    }

    /// `⟨Â_i Â_j⟩`; off-diagonal entries factorize.
    pub fn aa(&self) -> CMat {
        let n = self.n_modes();
        CMat::from_fn(n, n, |i, j| {
            if i == j {
                self.aa_diag[i]
            } else {
                self.mean_a[i] * self.mean_a[j]
            }
        })
    }

    /// `⟨Â_i† Â_j⟩`.
    pub fn adag_a(&self) -> CMat {
        let n = self.n_modes();
        CMat::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(self.adaga_diag[i], 0.0)
            } else {
                self.mean_adag[i] * self.mean_a[j]
            }
        })
    }

    /// `⟨Â_i Â_j†⟩ = δ_ij + ⟨Â_j† Â_i⟩`.
    pub fn a_adag(&self) -> CMat {
        let n = self.n_modes();
        let adag_a = self.adag_a();
        CMat::from_fn(n, n, |i, j| {
            adag_a[(j, i)] + if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        })
    }

    /// `⟨Â_i† Â_j†⟩`.
    pub fn adag_adag(&self) -> CMat {
        self.aa().map(|z| z.conj())
    }
}

pub fn pacs_moments(spec: &StateSpec) -> PacsMoments {
    let n = spec.n_modes();
    let mut out = PacsMoments {
        mean_a: Vec::with_capacity(n),
        mean_adag: Vec::with_capacity(n),
        aa_diag: Vec::with_capacity(n),
        adagadag_diag: Vec::with_capacity(n),
        adaga_diag: Vec::with_capacity(n),
    };
    for k in 0..n {
        let a = spec.alpha()[k];
        let r1 = spec.laguerre_ratio(k, 1);
        let r2 = spec.laguerre_ratio(k, 2);
        let mean = a * r1;
        let aa = a * a * r2;
        out.mean_a.push(mean);
        out.mean_adag.push(mean.conj());
        out.aa_diag.push(aa);
        out.adagadag_diag.push(aa.conj());
        out.adaga_diag
            .push(a.norm_sqr() * r1 + spec.excitations().get(k) as f64);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Quadrature,
    IntegralsOfMotion,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Quadrature => "quadrature",
            Frame::IntegralsOfMotion => "integrals_of_motion",
        }
    }
}

/// Covariance matrix with Robertson diagnostics. `T` is `f64` in the
/// quadrature frame and [`C64`] in the integrals-of-motion frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport<T: nalgebra::Scalar> {
    pub frame: Frame,
    pub n_modes: usize,
    pub t: Option<f64>,
    pub sigma: DMatrix<T>,
    /// `det σ` in the quadrature frame, `|det σ|` in the integrals-of-motion frame.
    pub determinant: f64,
    /// `2^{−2N}`.
    pub robertson_bound: f64,
    pub gap: f64,
    pub intelligent: bool,
}

fn robertson_bound(n_modes: usize) -> f64 {
    0.25f64.powi(n_modes as i32)
}

/// Per-mode entries `(σ(A†,A†), σ(A,A), σ(A†,A))`.
fn iom_entries(spec: &StateSpec, k: usize) -> (C64, C64, f64) {
    let a = spec.alpha()[k];
    let p1 = spec.p_ratio(k, 1);
    let p2 = spec.p_ratio(k, 2);
    let cross = a.norm_sqr() * p1 + spec.excitations().get(k) as f64 + 0.5;
    (a.conj() * a.conj() * p2, a * a * p2, cross)
}

/// Covariance of `Î = (Â†₁…Â†_N, Â₁…Â_N)`. Time independent.
pub fn covariance_iom(spec: &StateSpec) -> CovarianceReport<C64> {
    let n = spec.n_modes();
    let mut sigma = CMat::zeros(2 * n, 2 * n);
    let mut det = 1.0;
    for k in 0..n {
        let (dd, aa, cross) = iom_entries(spec, k);
        sigma[(k, k)] = dd;
        sigma[(k + n, k + n)] = aa;
        sigma[(k, k + n)] = C64::new(cross, 0.0);
        sigma[(k + n, k)] = C64::new(cross, 0.0);
        det *= (dd * aa).re - cross * cross;
    }
    let determinant = det.abs();
    let bound = robertson_bound(n);
    CovarianceReport {
        frame: Frame::IntegralsOfMotion,
        n_modes: n,
        t: None,
        sigma,
        determinant,
        robertson_bound: bound,
        gap: determinant - bound,
        intelligent: (determinant - bound).abs() <= INTELLIGENCE_TOLERANCE,
    }
}

fn real_checked(m: &CMat) -> Result<RMat> {
    let residue = max_imag(m);
    if residue > IMAGINARY_TOLERANCE {
        return Err(Error::ImaginaryResidue {
            residue,
            tolerance: IMAGINARY_TOLERANCE,
        });
    }
    Ok(real_part(m))
}

fn symmetrized(m: RMat) -> RMat {
    (&m + m.transpose()) * 0.5
}

/// `σ(x) = F(t) e^{iWt} σ(Î) e^{iWt} Fᵀ(t)`.
pub fn transform_covariance(decomp: &FloquetDecomposition, t: f64, sigma_iom: &CMat) -> Result<RMat> {
    let n2 = 2 * decomp.n_modes();
    if sigma_iom.nrows() != n2 || sigma_iom.ncols() != n2 {
        return Err(Error::DimensionMismatch {
            what: "integrals-of-motion covariance",
            expected: n2,
            found: sigma_iom.nrows(),
        });
    }
    let g = decomp.propagated(t);
    Ok(symmetrized(real_checked(&(&g * sigma_iom * g.transpose()))?))
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

/// Classical Floquet mode amplitudes `χ(t)`, `χ_k(0) = α_k*` for `k < N`
/// and `α_k` for the second half.
fn classical_amplitudes(decomp: &FloquetDecomposition, t: f64, spec: &StateSpec) -> Vec<C64> {
    let n = spec.n_modes();
    let mut chi = Vec::with_capacity(2 * n);
    for (k, &w) in decomp.exponents().iter().enumerate() {
        let (s, c) = (w * t).sin_cos();
        chi.push(spec.alpha()[k].conj() * C64::new(c, s));
    }
    for (k, &w) in decomp.exponents().iter().enumerate() {
        let (s, c) = (w * t).sin_cos();
        chi.push(spec.alpha()[k] * C64::new(c, -s));
    }
    chi
}

/// Quadrature covariance from the closed-form expression in terms of the
/// FLT columns and the classical mode amplitudes.
pub fn covariance_quadrature(decomp: &FloquetDecomposition, t: f64, spec: &StateSpec) -> Result<CovarianceReport<f64>> {
    check_modes(decomp, spec)?;
    let n = spec.n_modes();
    let f = decomp.flt_at(t);
    let chi = classical_amplitudes(decomp, t, spec);
    let p2: Vec<f64> = (0..n).map(|k| spec.p_ratio(k, 2)).collect();
    let cross: Vec<f64> = (0..n).map(|k| iom_entries(spec, k).2).collect();
    let sigma = CMat::from_fn(2 * n, 2 * n, |i, j| {
        let mut s = C64::new(0.0, 0.0);
        for k in 0..2 * n {
            s += f[(i, k)] * f[(j, k)] * chi[k] * chi[k] * p2[k % n];
        }
        for k in 0..n {
            s += (f[(i, k)] * f[(j, k + n)] + f[(i, k + n)] * f[(j, k)]) * cross[k];
        }
        s
    });
    let sigma = symmetrized(real_checked(&sigma)?);
    let mut report = robertson_report(&sigma, n)?;
    report.t = Some(t);
    Ok(report)
}

/// `⟨x̂⟩ = Σ_j F_ij(t) χ_j(t) r₁(m_j)`.
pub fn mean_quadratures(decomp: &FloquetDecomposition, t: f64, spec: &StateSpec) -> Result<DVector<f64>> {
    check_modes(decomp, spec)?;
    let n = spec.n_modes();
    let f = decomp.flt_at(t);
    let chi = classical_amplitudes(decomp, t, spec);
    let ratio: Vec<f64> = (0..n).map(|k| spec.laguerre_ratio(k, 1)).collect();
    let scaled = DVector::from_iterator(2 * n, chi.iter().enumerate().map(|(k, c)| c * ratio[k % n]));
    let mean = f * scaled;
    let residue = mean.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    if residue > IMAGINARY_TOLERANCE {
        return Err(Error::ImaginaryResidue {
            residue,
            tolerance: IMAGINARY_TOLERANCE,
        });
    }
    Ok(mean.map(|z| z.re))
}

/// Robertson diagnostics of a quadrature covariance: `det σ ≥ 2^{−2N}`.
pub fn robertson_report(sigma: &RMat, n_modes: usize) -> Result<CovarianceReport<f64>> {
    if sigma.nrows() != 2 * n_modes || sigma.ncols() != 2 * n_modes {
        return Err(Error::DimensionMismatch {
            what: "quadrature covariance",
            expected: 2 * n_modes,
            found: sigma.nrows(),
        });
    }
    let asymmetry = crate::linalg::relative_asymmetry(sigma);
    if asymmetry > 1e-10 {
        return Err(Error::NonSymmetric {
            what: "quadrature covariance",
            asymmetry,
        });
    }
    let determinant = det_real(sigma);
    let bound = robertson_bound(n_modes);
    let gap = determinant - bound;
    Ok(CovarianceReport {
        frame: Frame::Quadrature,
        n_modes,
        t: None,
        sigma: sigma.clone(),
        determinant,
        robertson_bound: bound,
        gap,
        intelligent: gap.abs() <= INTELLIGENCE_TOLERANCE,
    })
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_eigenvalue(sigma: &RMat) -> f64 {
    sigma
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::build_flt;
    use crate::linalg::max_abs_diff;
    use crate::model::PeriodicConfiguration;
    use nalgebra::ComplexField;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn spec_validation() {
        assert!(StateSpec::new(
            StateFamily::Fock,
            alloc::vec![c(1.0, 0.0)],
            MultiIndex::new(alloc::vec![1])
        )
        .is_err());
        assert!(StateSpec::new(
            StateFamily::Coherent,
            alloc::vec![c(1.0, 0.0)],
            MultiIndex::new(alloc::vec![1])
        )
        .is_err());
        assert!(StateSpec::pacs(alloc::vec![c(1.0, 0.0)], alloc::vec![1, 2]).is_err());
        assert!(StateSpec::pacs(alloc::vec![c(f64::NAN, 0.0)], alloc::vec![1]).is_err());
        assert_eq!(
            StateSpec::pacs(alloc::vec![c(0.0, 0.0)], alloc::vec![65]),
            Err(Error::ExcitationTooLarge(65))
        );
        assert!(StateSpec::pacs(alloc::vec![c(0.0, 0.0)], alloc::vec![2]).is_ok());
    }

    #[test]
    fn pacs_moment_examples() {
        let m = pacs_moments(&StateSpec::pacs(alloc::vec![c(1.0, 0.0)], alloc::vec![0]).unwrap());
        assert!((m.mean_a[0] - c(1.0, 0.0)).modulus() < 1e-15);
        let m = pacs_moments(&StateSpec::pacs(alloc::vec![c(1.0, 0.0)], alloc::vec![1]).unwrap());
        assert!((m.mean_a[0] - c(1.5, 0.0)).modulus() < 1e-15);
        assert!((m.adaga_diag[0] - 2.5).abs() < 1e-15);
        let m = pacs_moments(&StateSpec::pacs(alloc::vec![c(0.0, 0.0)], alloc::vec![2]).unwrap());
        assert_eq!(m.mean_a[0], c(0.0, 0.0));
        assert!((m.adaga_diag[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn iom_covariance_examples() {
        let coh = covariance_iom(&StateSpec::coherent(alloc::vec![c(0.3, -1.2), c(2.0, 0.5)]).unwrap());
        assert!((coh.determinant - 1.0 / 16.0).abs() < 1e-15);
        for k in 0..2 {
            assert_eq!(coh.sigma[(k, k + 2)], c(0.5, 0.0));
            assert_eq!(coh.sigma[(k, k)].modulus(), 0.0);
        }
        let fock = covariance_iom(&StateSpec::fock(alloc::vec![1, 0]).unwrap());
        assert_eq!(fock.sigma[(0, 2)], c(1.5, 0.0));
        assert_eq!(fock.sigma[(1, 3)], c(0.5, 0.0));
        let pacs = covariance_iom(&StateSpec::pacs(alloc::vec![c(1.0, 0.0)], alloc::vec![1]).unwrap());
        assert!((pacs.sigma[(0, 1)].re - 0.75).abs() < 1e-15);
        assert!((pacs.sigma[(1, 1)].re + 0.25).abs() < 1e-15);
    }

    #[test]
    fn limits_reduce_to_coherent_and_fock() {
        let alpha = alloc::vec![c(0.7, 0.2), c(-0.4, 1.1)];
        let a = covariance_iom(&StateSpec::pacs(alpha.clone(), alloc::vec![0, 0]).unwrap());
        let b = covariance_iom(&StateSpec::coherent(alpha).unwrap());
        assert!(max_abs_diff(&a.sigma, &b.sigma) < 1e-12);
        let a = covariance_iom(&StateSpec::pacs(alloc::vec![c(0.0, 0.0); 2], alloc::vec![2, 3]).unwrap());
        let b = covariance_iom(&StateSpec::fock(alloc::vec![2, 3]).unwrap());
        assert!(max_abs_diff(&a.sigma, &b.sigma) < 1e-12);
    }

    #[test]
    fn stationary_oscillator_coherent_variances() {
        let w = 1.7;
        let d = build_flt(&PeriodicConfiguration::stationary(&[w], 1.0).unwrap()).unwrap();
        let spec = StateSpec::coherent(alloc::vec![c(0.4, 0.9)]).unwrap();
        for &t in &[0.0, 0.3, 0.77] {
            let r = covariance_quadrature(&d, t, &spec).unwrap();
            assert!((r.sigma[(0, 0)] - 0.5 / w).abs() < 1e-9);
            assert!((r.sigma[(1, 1)] - 0.5 * w).abs() < 1e-9);
            assert!(r.sigma[(0, 1)].abs() < 1e-9);
            assert!(r.intelligent);
        }
    }

    #[test]
    fn means_of_unit_oscillator() {
        let d = build_flt(&PeriodicConfiguration::stationary(&[1.0], 1.0).unwrap()).unwrap();
        let mean = mean_quadratures(&d, 0.0, &StateSpec::coherent(alloc::vec![c(1.0, 0.0)]).unwrap()).unwrap();
        assert!((mean[0] - 2f64.sqrt()).abs() < 1e-10 && mean[1].abs() < 1e-10);
        let mean = mean_quadratures(
            &d,
            0.0,
            &StateSpec::pacs(alloc::vec![c(1.0, 0.0)], alloc::vec![1]).unwrap(),
        )
        .unwrap();
        assert!((mean[0] - 1.5 * 2f64.sqrt()).abs() < 1e-10 && mean[1].abs() < 1e-10);
        let mean = mean_quadratures(&d, 0.4, &StateSpec::fock(alloc::vec![3]).unwrap()).unwrap();
        assert_eq!(mean.amax(), 0.0);
    }

    #[test]
    fn robertson_examples() {
        let r = robertson_report(&(RMat::identity(2, 2) * 0.5), 1).unwrap();
        assert!(r.intelligent && r.gap.abs() < 1e-15 && (r.determinant - 0.25).abs() < 1e-15);
        let r = robertson_report(&(RMat::identity(2, 2) * 1.5), 1).unwrap();
        assert!(!r.intelligent && (r.gap - 2.0).abs() < 1e-14);
        let bad = RMat::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 1.0]);
        assert!(matches!(robertson_report(&bad, 1), Err(Error::NonSymmetric { .. })));
    }

    #[test]
    fn imaginary_residue_is_rejected() {
        let d = build_flt(&PeriodicConfiguration::stationary(&[1.0], 1.0).unwrap()).unwrap();
        let mut sigma = covariance_iom(&StateSpec::coherent(alloc::vec![c(0.0, 0.0)]).unwrap()).sigma;
        sigma[(0, 0)] = c(0.0, 0.1);
        sigma[(1, 1)] = c(0.0, 0.1);
        assert!(matches!(
            transform_covariance(&d, 0.0, &sigma),
            Err(Error::ImaginaryResidue { .. })
        ));
    }
}
