//! Special functions behind the closed-form state formulas.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::C64;

/// Largest excitation number accepted per mode.
pub const MAX_EXCITATION: u32 = 64;

/// Associated Laguerre polynomial `L_m^a(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+a−x) L_k − (k+a) L_{k−1}`.
pub fn laguerre(m: u32, a: u32, x: f64) -> f64 {
    laguerre_generic(m, a, x)
}

/// [`laguerre`] over any real or complex scalar.
pub fn laguerre_generic<T: ComplexField<RealField = f64>>(m: u32, a: u32, x: T) -> T {
    let a = a as f64;
    let one = T::one();
    if m == 0 {
        return one;
    }
    let mut prev = one.clone();
    let mut cur = T::from_real(1.0 + a) - x.clone();
    for k in 1..m {
        let k = k as f64;
        let next = ((T::from_real(2.0 * k + 1.0 + a) - x.clone()) * cur.clone() - prev * T::from_real(k + a))
            * T::from_real(1.0 / (k + 1.0));
        prev = cur;
        cur = next;
    }
    cur
}

/// Value of a Pochhammer symbol, exact while it fits in `2^53`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pochhammer {
    Exact(u64),
    Float(f64),
}

impl Pochhammer {
    pub fn value(self) -> f64 {
        match self {
            Pochhammer::Exact(v) => v as f64,
            Pochhammer::Float(v) => v,
        }
    }
}

const EXACT_LIMIT: u64 = 1 << 53;

/// Rising factorial `(a)_n = a (a+1) … (a+n−1)`.
pub fn pochhammer(a: u64, n: u32) -> Result<Pochhammer> {
    let mut exact: u64 = 1;
    let mut k = 0u32;
    while k < n {
        let factor = a + k as u64;
        match exact.checked_mul(factor) {
            Some(v) if v <= EXACT_LIMIT => exact = v,
            _ => break,
        }
        k += 1;
    }
    if k == n {
        return Ok(Pochhammer::Exact(exact));
    }
    let mut value = exact as f64;
    for j in k..n {
        value *= (a + j as u64) as f64;
        if !value.is_finite() {
            return Err(Error::Overflow);
        }
    }
    Ok(Pochhammer::Float(value))
}

const MAX_SERIES_TERMS: usize = 1_000_000;

/// Kummer's confluent hypergeometric function `₁F₁(a; c; x)` by direct
/// summation. Terminates exactly when `a` is a non-positive integer.
pub fn confluent_1f1(a: f64, c: f64, x: f64) -> Result<f64> {
    if c <= 0.0 && c == ComplexField::round(c) {
        return Err(Error::PoleInDenominator(c));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        let k = k as f64;
        term *= (a + k) / (c + k) * x / (k + 1.0);
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // terms shrink monotonically once k exceeds |a| and |x|
        if k > a.abs() && k > x.abs() && term.abs() <= 1e-16 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConverged {
        terms: MAX_SERIES_TERMS,
    })
}

/// Excitation multi-index `(m₁, …, m_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|m| = Σ m_k`.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&m| m as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0[k]
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// Multidimensional Hermite polynomial
/// `H_m^M(z) = (−1)^{|m|} e^{½zᵀMz} ∂^m e^{−½zᵀMz}`, evaluated with
/// `H_{m+e_k} = (Mz)_k H_m − Σ_l M_{kl} m_l H_{m−e_l}` over the lattice
/// of indices below `m`.
pub fn hermite_multidim(m_matrix: &CMat, m: &MultiIndex, z: &[C64]) -> Result<C64> {
    let n = m.len();
    if m_matrix.nrows() != n || m_matrix.ncols() != n {
        return Err(Error::DimensionMismatch {
            what: "Hermite matrix argument",
            expected: n,
            found: m_matrix.nrows(),
        });
    }
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            what: "Hermite point",
            expected: n,
            found: z.len(),
        });
    }
    if let Some(&big) = m.entries().iter().find(|&&k| k > MAX_EXCITATION) {
        return Err(Error::ExcitationTooLarge(big));
    }
    let scale = m_matrix.iter().fold(1.0f64, |acc, v| acc.max(v.modulus()));
    let asym = (m_matrix - m_matrix.transpose())
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.modulus()))
        / scale;
    if asym > 1e-12 {
        return Err(Error::NonSymmetric {
            what: "Hermite matrix argument",
            asymmetry: asym,
        });
    }
    let mz: Vec<C64> = (0..n).map(|k| (0..n).map(|l| m_matrix[(k, l)] * z[l]).sum()).collect();

    // mixed-radix lattice, mode 0 fastest
    let radix: Vec<usize> = m.entries().iter().map(|&k| k as usize + 1).collect();
    let mut stride = vec![1usize; n];
    for k in 1..n {
        stride[k] = stride[k - 1] * radix[k - 1];
    }
    let size: usize = radix.iter().product();
    let mut table = vec![C64::new(0.0, 0.0); size];
    table[0] = C64::new(1.0, 0.0);
    let mut idx = vec![0usize; n];
    for flat in 1..size {
        // increment the mixed-radix counter
        for k in 0..n {
            idx[k] += 1;
            if idx[k] < radix[k] {
                break;
            }
            idx[k] = 0;
        }
        let k = idx.iter().position(|&v| v > 0).expect("non-zero lattice point");
        let parent = flat - stride[k];
        let mut value = mz[k] * table[parent];
        for l in 0..n {
            let p_l = if l == k { idx[l] - 1 } else { idx[l] };
            if p_l > 0 {
                value -= m_matrix[(k, l)] * C64::new(p_l as f64, 0.0) * table[parent - stride[l]];
            }
        }
        table[flat] = value;
    }
    Ok(table[size - 1])
}

/// Both sides of `H_{(m,m)}^{σx}(z₁, z₂) = (−1)^m m! L_m(z₁ z₂)`, where
/// `σx = [[0, 1], [1, 0]]`.
pub fn hermite_pair_to_laguerre_check(m: u32, z1: C64, z2: C64) -> Result<(C64, C64)> {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let sigma_x = CMat::from_row_slice(2, 2, &[zero, one, one, zero]);
    let hermite = hermite_multidim(&sigma_x, &MultiIndex::new(vec![m, m]), &[z1, z2])?;
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let laguerre_side = laguerre_generic(m, 0, z1 * z2) * (sign * factorial);
    Ok((hermite, laguerre_side))
}
