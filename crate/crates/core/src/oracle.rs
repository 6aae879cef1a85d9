//! Brute-force reference in a truncated Fock space.
//!
//! Works in the stationary frame where the integrals of motion are the
//! ordinary ladder operators. States are built by explicit operator algebra
//! and moments are taken by vector contractions, independently of the
//! closed forms in [`crate::states`].

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use nalgebra::{ComplexField, DVector};

use crate::error::{Error, Result};
use crate::linalg::{CMat, RMat, I};
use crate::states::StateSpec;
use crate::C64;

/// Largest admissible Hilbert-space dimension `D^N`.
pub const MAX_HILBERT_DIM: usize = 1_000_000;
/// Top-shell population above which an oracle state is flagged as truncated.
pub const TRUNCATION_WARNING: f64 = 1e-12;

/// Real sparse matrix in coordinate form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            entries: (0..dim).map(|i| (i, i, 1.0)).collect(),
        }
    }

    /// Single-mode annihilator `a|n⟩ = √n |n−1⟩`.
    pub fn annihilator(dim: usize) -> Self {
        Self {
            dim,
            entries: (1..dim).map(|n| (n - 1, n, (n as f64).sqrt())).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for &(r1, c1, v1) in &self.entries {
            for &(r2, c2, v2) in &other.entries {
                entries.push((r1 * other.dim + r2, c1 * other.dim + c2, v1 * v2));
            }
        }
        Self {
            dim: self.dim * other.dim,
            entries,
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect(),
        }
    }

    pub fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        for &(r, c, v) in &self.entries {
            out[r] += x[c] * v;
        }
        out
    }

    pub fn to_dense(&self) -> RMat {
        let mut m = RMat::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }
}

/// Ladder operators of `N` modes truncated at `D` levels each. Mode 1 is
/// the slowest-varying Kronecker factor.
#[derive(Debug, Clone)]
pub struct TruncatedLadder {
    n_modes: usize,
    dim: usize,
    annihilators: Vec<SparseMatrix>,
    creators: Vec<SparseMatrix>,
}

pub fn build_truncated_ladder(n_modes: usize, dim: usize) -> Result<TruncatedLadder> {
    if n_modes == 0 {
        return Err(Error::InvalidSpec("the oracle needs at least one mode"));
    }
    if dim < 2 {
        return Err(Error::InvalidSpec("truncation dimension must be at least 2"));
    }
    let total = (0..n_modes).try_fold(1usize, |acc, _| acc.checked_mul(dim));
    if total.is_none_or(|t| t > MAX_HILBERT_DIM) {
        return Err(Error::DimensionGuard {
            dim,
            n_modes,
            limit: MAX_HILBERT_DIM,
        });
    }
    let a = SparseMatrix::annihilator(dim);
    let eye = SparseMatrix::identity(dim);
    let annihilators: Vec<SparseMatrix> = (0..n_modes)
        .map(|mode| {
            (1..n_modes).fold(if mode == 0 { a.clone() } else { eye.clone() }, |acc, k| {
                acc.kron(if k == mode { &a } else { &eye })
            })
        })
        .collect();
    let creators = annihilators.iter().map(SparseMatrix::transpose).collect();
    Ok(TruncatedLadder {
        n_modes,
        dim,
        annihilators,
        creators,
    })
}

impl TruncatedLadder {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hilbert_dim(&self) -> usize {
        self.dim.pow(self.n_modes as u32)
    }

    pub fn annihilator(&self, mode: usize) -> &SparseMatrix {
        &self.annihilators[mode]
    }

    pub fn creator(&self, mode: usize) -> &SparseMatrix {
        &self.creators[mode]
    }

    /// Occupation numbers of basis state `index`.
    pub fn occupations(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n_modes];
        let mut rest = index;
        for k in (0..self.n_modes).rev() {
            out[k] = rest % self.dim;
            rest /= self.dim;
        }
        out
    }
}

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA_13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|c| a.column(c).iter().map(|z| z.modulus()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > THETA_13 {
        ComplexField::ceil(ComplexField::log2(norm1 / THETA_13)) as u32
    } else {
        0
    };
    let a = a * C64::new(0.5f64.powi(squarings as i32), 0.0);
    let b = |k: usize| C64::new(PADE_13[k], 0.0);
    let eye = CMat::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9));
    let u = &a * (inner_u + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &eye * b(1));
    let inner_v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8));
    let v = inner_v + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &eye * b(0);
    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .expect("Padé denominator is invertible");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// A normalized oracle state together with its construction diagnostics.
#[derive(Debug, Clone)]
pub struct OracleState {
    pub vector: DVector<C64>,
    /// `‖Π(a_k†)^{m_k}|α⟩‖²` before renormalization.
    pub norm_sq_before: f64,
    /// Population of basis states with some `n_k = D − 1`.
    pub top_shell_population: f64,
    pub truncation_warning: bool,
}

/// `Π_k (a_k†)^{m_k} D(α)|0⟩`, renormalized. The displacement is the
/// product of single-mode exponentials `exp(α_k a_k† − α_k* a_k)`.
pub fn oracle_state(ladder: &TruncatedLadder, spec: &StateSpec) -> Result<OracleState> {
    if spec.n_modes() != ladder.n_modes() {
        return Err(Error::DimensionMismatch {
            what: "state modes",
            expected: ladder.n_modes(),
            found: spec.n_modes(),
        });
    }
    let d = ladder.dim();
    let a = SparseMatrix::annihilator(d).to_dense().map(|x| C64::new(x, 0.0));
    let mut state = DVector::from_element(1, C64::new(1.0, 0.0));
    for &alpha in spec.alpha() {
        let generator = a.transpose() * alpha - &a * alpha.conj();
        let displaced = expm(&generator).column(0).into_owned();
        state = state.kronecker(&displaced);
    }
    for (k, &m) in spec.excitations().entries().iter().enumerate() {
        for _ in 0..m {
            state = ladder.creator(k).apply(&state);
        }
    }
    let norm_sq_before = state.norm_squared();
    state /= C64::new(norm_sq_before.sqrt(), 0.0);
    let top_shell_population = (0..state.len())
        .filter(|&i| ladder.occupations(i).iter().any(|&n| n == d - 1))
        .map(|i| state[i].norm_sqr())
        .sum();
    Ok(OracleState {
        vector: state,
        norm_sq_before,
        top_shell_population,
        truncation_warning: top_shell_population > TRUNCATION_WARNING,
    })
}

/// First and second moments of the ladder operators and quadratures.
#[derive(Debug, Clone)]
pub struct OracleMoments {
    pub mean_a: Vec<C64>,
    /// `⟨a_i a_j⟩`.
    pub a_a: CMat,
    /// `⟨a_i† a_j⟩`.
    pub adag_a: CMat,
    /// `⟨a_i a_j†⟩`.
    pub a_adag: CMat,
    /// `⟨(q, p)⟩` with `q = (a + a†)/√2`, `p = i(a† − a)/√2`.
    pub mean_quadratures: DVector<f64>,
    /// Symmetrized quadrature covariance.
    pub covariance: RMat,
}

fn inner(bra: &DVector<C64>, ket: &DVector<C64>) -> C64 {
    bra.dotc(ket)
}

/// Mean and symmetrized covariance of `c = (a†₁…a†_N, a₁…a_N)`.
fn ladder_moments(mean_a: &[C64], a_a: &CMat, adag_a: &CMat, a_adag: &CMat) -> (DVector<C64>, CMat) {
    let n = mean_a.len();
    let mut mean_c = DVector::zeros(2 * n);
    let mut second = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        mean_c[i] = mean_a[i].conj();
        mean_c[i + n] = mean_a[i];
        for j in 0..n {
            second[(i, j)] = a_a[(j, i)].conj();
            second[(i, j + n)] = adag_a[(i, j)];
            second[(i + n, j)] = a_adag[(i, j)];
            second[(i + n, j + n)] = a_a[(i, j)];
        }
    }
    let sigma_c = (&second + second.transpose()) * C64::new(0.5, 0.0) - &mean_c * mean_c.transpose();
    (mean_c, sigma_c)
}

impl OracleMoments {
    /// Symmetrized covariance of `(a†₁…a†_N, a₁…a_N)`, laid out like the
    /// integrals-of-motion covariance.
    pub fn ladder_covariance(&self) -> CMat {
        ladder_moments(&self.mean_a, &self.a_a, &self.adag_a, &self.a_adag).1
    }
}

pub fn oracle_moments(ladder: &TruncatedLadder, state: &DVector<C64>) -> OracleMoments {
    let n = ladder.n_modes();
    let a_psi: Vec<DVector<C64>> = (0..n).map(|k| ladder.annihilator(k).apply(state)).collect();
    let adag_psi: Vec<DVector<C64>> = (0..n).map(|k| ladder.creator(k).apply(state)).collect();
    let mean_a: Vec<C64> = a_psi.iter().map(|v| inner(state, v)).collect();
    let a_a = CMat::from_fn(n, n, |i, j| inner(&adag_psi[i], &a_psi[j]));
    let adag_a = CMat::from_fn(n, n, |i, j| inner(&a_psi[i], &a_psi[j]));
    let a_adag = CMat::from_fn(n, n, |i, j| inner(&adag_psi[i], &adag_psi[j]));

    let (mean_c, sigma_c) = ladder_moments(&mean_a, &a_a, &adag_a, &a_adag);
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut l = CMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        l[(k, k)] = r;
        l[(k, k + n)] = r;
        l[(k + n, k)] = I * r;
        l[(k + n, k + n)] = -I * r;
    }
    let mean_x = (&l * mean_c).map(|z| z.re);
    let sigma_x = (&l * sigma_c * l.transpose()).map(|z| z.re);
    OracleMoments {
        mean_a,
        a_a,
        adag_a,
        a_adag,
        mean_quadratures: mean_x,
        covariance: (&sigma_x + sigma_x.transpose()) * 0.5,
    }
}

/// `⟨(a†)^s a^r⟩` of a single-mode PACS from the double series over the
/// coherent-state expansion `|α⟩ = e^{−|α|²/2} Σ_k α^k/√k! |k⟩`, with
/// `k ≤ terms`.
pub fn series_expectation(alpha: C64, m: u32, s: u32, r: u32, terms: usize) -> C64 {
    let m = m as usize;
    let (s, r) = (s as usize, r as usize);
    let spec_norm: f64 = {
        let fact: f64 = (1..=m).map(|j| j as f64).product();
        fact * crate::special::laguerre(m as u32, 0, -alpha.norm_sqr())
    };
    // amplitudes c_n of the normalized PACS on |n⟩, n = k + m
    let mut coeff = vec![C64::new(0.0, 0.0); terms + m + 1];
    let mut power = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    let mut fact_sqrt = 1.0f64;
    for k in 0..=terms {
        if k > 0 {
            power *= alpha;
            fact_sqrt *= (k as f64).sqrt();
        }
        let raise: f64 = ((k + 1)..=(k + m)).map(|j| (j as f64).sqrt()).product();
        coeff[k + m] = power / fact_sqrt * raise / spec_norm.sqrt();
    }
    let falling = |n: usize, p: usize| -> f64 { (0..p).map(|j| ((n - j) as f64).sqrt()).product() };
    let mut sum = C64::new(0.0, 0.0);
    for (l, &cl) in coeff.iter().enumerate() {
        if l < r {
            continue;
        }
        let target = l - r + s;
        if target >= coeff.len() {
            continue;
        }
        // ⟨target| (a†)^s a^r |l⟩
        let element = falling(l, r) * falling(target, s);
        sum += coeff[target].conj() * cl * element;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ladder_matrices() {
        let l = build_truncated_ladder(1, 3).unwrap();
        let a = l.annihilator(0).to_dense();
        let expected = RMat::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 2f64.sqrt(), 0.0, 0.0, 0.0]);
        assert_eq!(a, expected);
        let l2 = build_truncated_ladder(2, 2).unwrap();
        let a = SparseMatrix::annihilator(2);
        let eye = SparseMatrix::identity(2);
        assert_eq!(l2.annihilator(0).to_dense(), a.kron(&eye).to_dense());
        assert_eq!(l2.annihilator(1).to_dense(), eye.kron(&a).to_dense());
    }

    #[test]
    fn commutator_defect_is_confined_to_top_shell() {
        let d = 5;
        let l = build_truncated_ladder(1, d).unwrap();
        let a = l.annihilator(0).to_dense();
        let comm = &a * a.transpose() - a.transpose() * &a;
        let mut expected = RMat::identity(d, d);
        expected[(d - 1, d - 1)] = 1.0 - d as f64;
        assert!((comm - expected).amax() < 1e-14);
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            build_truncated_ladder(4, 40),
            Err(Error::DimensionGuard { .. })
        ));
        assert!(build_truncated_ladder(1, 1).is_err());
    }

    #[test]
    fn expm_of_rotation_generator() {
        let theta = 7.3;
        let g = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(theta, 0.0), c(-theta, 0.0), c(0.0, 0.0)]);
        let e = expm(&g);
        assert!((e[(0, 0)].re - theta.cos()).abs() < 1e-13);
        assert!((e[(0, 1)].re - theta.sin()).abs() < 1e-13);
        let zero = expm(&CMat::zeros(3, 3));
        assert_eq!(zero, CMat::identity(3, 3));
    }

    #[test]
    fn oracle_state_examples() {
        let l = build_truncated_ladder(1, 40).unwrap();
        let vac = oracle_state(&l, &StateSpec::coherent(vec![c(0.0, 0.0)]).unwrap()).unwrap();
        assert!((vac.vector[0] - c(1.0, 0.0)).modulus() < 1e-15);
        let coh = oracle_state(&l, &StateSpec::coherent(vec![c(1.0, 0.0)]).unwrap()).unwrap();
        assert!((oracle_moments(&l, &coh.vector).mean_a[0] - c(1.0, 0.0)).modulus() < 1e-10);
        let pacs = oracle_state(&l, &StateSpec::pacs(vec![c(1.0, 0.0)], vec![1]).unwrap()).unwrap();
        assert!((pacs.norm_sq_before - 2.0).abs() < 1e-8);
        assert!(!pacs.truncation_warning);
        let m = oracle_moments(&l, &pacs.vector);
        assert!((m.mean_a[0] - c(1.5, 0.0)).modulus() < 1e-9);
        assert!((m.adag_a[(0, 0)].re - 2.5).abs() < 1e-9);
    }

    #[test]
    fn oracle_moment_examples() {
        let l = build_truncated_ladder(1, 12).unwrap();
        let vac = oracle_state(&l, &StateSpec::fock(vec![0]).unwrap()).unwrap();
        let m = oracle_moments(&l, &vac.vector);
        assert!((m.covariance[(0, 0)] - 0.5).abs() < 1e-15 && (m.covariance[(1, 1)] - 0.5).abs() < 1e-15);
        assert!(m.covariance[(0, 1)].abs() < 1e-15);
        let two = oracle_state(&l, &StateSpec::fock(vec![2]).unwrap()).unwrap();
        let m = oracle_moments(&l, &two.vector);
        assert_eq!(m.mean_a[0], c(0.0, 0.0));
        assert!((m.adag_a[(0, 0)].re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn small_truncation_raises_warning() {
        let l = build_truncated_ladder(1, 6).unwrap();
        let s = oracle_state(&l, &StateSpec::coherent(vec![c(1.5, 0.0)]).unwrap()).unwrap();
        assert!(s.truncation_warning);
    }

    #[test]
    fn double_series_matches_contraction() {
        let l = build_truncated_ladder(1, 40).unwrap();
        for &(alpha, m) in &[(c(1.0, 0.0), 1u32), (c(0.6, -0.8), 2), (c(-0.3, 1.1), 3)] {
            let state = oracle_state(&l, &StateSpec::pacs(vec![alpha], vec![m]).unwrap()).unwrap();
            let mom = oracle_moments(&l, &state.vector);
            let mean = series_expectation(alpha, m, 0, 1, 25);
            assert!((mean - mom.mean_a[0]).modulus() < 1e-6);
            let aa = series_expectation(alpha, m, 0, 2, 25);
            assert!((aa - mom.a_a[(0, 0)]).modulus() < 1e-6);
            let n = series_expectation(alpha, m, 1, 1, 25);
            assert!((n.re - mom.adag_a[(0, 0)].re).abs() < 1e-6);
            let norm = series_expectation(alpha, m, 0, 0, 25);
            assert!((norm.re - 1.0).abs() < 1e-6);
        }
    }
}
