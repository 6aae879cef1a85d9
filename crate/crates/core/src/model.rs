//! Time-periodic quadratic Hamiltonians.
//!
//! The Hamiltonian is `H(t) = ½ xᵀ S(t) x` with
//!
//! ```text
//! S(t) = [[k_qq(t),  k_qp(t)],
//!         [k_qpᵀ(t), k_pp(t)]]
//! ```
//!
//! and every block is a finite Fourier series in `2π t / T`, so `S(t + T)`
//! equals `S(t)` by construction. The classical flow is `ẋ = Π(t) x` with
//! `Π = J S`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::linalg::{relative_asymmetry, symplectic_form, RMat};

pub const DEFAULT_STEPS_PER_PERIOD: usize = 4096;

/// Tolerance on `max|A - Aᵀ| / max(1, max|A|)` for blocks that must be symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Harmonic {
    /// Positive harmonic index `k` of `cos(2πkt/T)` and `sin(2πkt/T)`.
    pub index: u32,
    pub cos: RMat,
    pub sin: RMat,
}

/// Matrix-valued truncated Fourier series
/// `A(t) = A₀ + Σ_k (C_k cos(2πkt/T) + S_k sin(2πkt/T))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMatrix {
    pub constant: RMat,
    pub harmonics: Vec<Harmonic>,
}

impl FourierMatrix {
    pub fn constant(m: RMat) -> Self {
        Self {
            constant: m,
            harmonics: Vec::new(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(RMat::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(RMat::identity(n, n))
    }

    pub fn with_harmonic(mut self, index: u32, cos: RMat, sin: RMat) -> Self {
        self.harmonics.push(Harmonic { index, cos, sin });
        self
    }

    /// Value at time `t` for period `period`. The phase is reduced modulo one
    /// period before the trigonometric evaluation.
    pub fn evaluate(&self, t: f64, period: f64) -> RMat {
        let phase = reduced_phase(t, period);
        let mut out = self.constant.clone();
        for h in &self.harmonics {
            let (s, c) = (phase * h.index as f64).sin_cos();
            out += &h.cos * c + &h.sin * s;
        }
        out
    }

    fn matrices(&self) -> impl Iterator<Item = &RMat> {
        core::iter::once(&self.constant).chain(self.harmonics.iter().flat_map(|h| [&h.cos, &h.sin]))
    }

    fn validate(&self, n: usize, what: &'static str, symmetric: bool) -> Result<Self> {
        for m in self.matrices() {
            if m.nrows() != n {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: n,
                    found: m.nrows(),
                });
            }
            if m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: n,
                    found: m.ncols(),
                });
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidConfiguration("Fourier data must be finite"));
            }
            if symmetric {
                let asymmetry = relative_asymmetry(m);
                if asymmetry > SYMMETRY_TOLERANCE {
                    return Err(Error::NonSymmetric { what, asymmetry });
                }
            }
        }
        let mut seen: Vec<u32> = self.harmonics.iter().map(|h| h.index).collect();
        if seen.contains(&0) {
            return Err(Error::InvalidConfiguration("harmonic indices must be positive"));
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfiguration("harmonic indices must be distinct"));
        }
        let symmetrize = |m: &RMat| {
            if symmetric {
                (m + m.transpose()) * 0.5
            } else {
                m.clone()
            }
        };
        Ok(Self {
            constant: symmetrize(&self.constant),
            harmonics: self
                .harmonics
                .iter()
                .map(|h| Harmonic {
                    index: h.index,
                    cos: symmetrize(&h.cos),
                    sin: symmetrize(&h.sin),
                })
                .collect(),
        })
    }

    pub fn is_even_in_time(&self) -> bool {
        self.harmonics.iter().all(|h| h.sin.iter().all(|&x| x == 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.matrices().all(|m| m.iter().all(|&x| x == 0.0))
    }
}

/// `2π (t mod T) / T`.
fn reduced_phase(t: f64, period: f64) -> f64 {
    let mut r = t % period;
    if r < 0.0 {
        r += period;
    }
    2.0 * PI * r / period
}

/// The three Fourier-series blocks of `S(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SBlocks {
    pub k_qq: FourierMatrix,
    pub k_pp: FourierMatrix,
    pub k_qp: FourierMatrix,
}

/// A validated, immutable periodic configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicConfiguration {
    n_modes: usize,
    period: f64,
    steps_per_period: usize,
    blocks: SBlocks,
}

impl PeriodicConfiguration {
    /// Validates and stores a configuration. `k_qq` and `k_pp` are
    /// symmetrized after checking that their asymmetry is within
    /// [`SYMMETRY_TOLERANCE`].
    pub fn new(n_modes: usize, period: f64, blocks: SBlocks, steps_per_period: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidConfiguration("n_modes must be at least 1"));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::NonPositivePeriod(period));
        }
        if steps_per_period == 0 {
            return Err(Error::InvalidConfiguration("steps_per_period must be positive"));
        }
        let blocks = SBlocks {
            k_qq: blocks.k_qq.validate(n_modes, "k_qq", true)?,
            k_pp: blocks.k_pp.validate(n_modes, "k_pp", true)?,
            k_qp: blocks.k_qp.validate(n_modes, "k_qp", false)?,
        };
        Ok(Self {
            n_modes,
            period,
            steps_per_period,
            blocks,
        })
    }

    /// Two oscillators with `k_qq(t) = diag(a1, a2) − 2 q cos(2πt/T) I + c σ_x`,
    /// `k_pp = I` and `k_qp = 0`: a pair of coupled Mathieu equations.
    pub fn mathieu_pair(a1: f64, a2: f64, q_drive: f64, coupling: f64, period: f64) -> Result<Self> {
        let constant = RMat::from_row_slice(2, 2, &[a1, coupling, coupling, a2]);
        let k_qq = FourierMatrix::constant(constant).with_harmonic(
            1,
            RMat::identity(2, 2) * (-2.0 * q_drive),
            RMat::zeros(2, 2),
        );
        let blocks = SBlocks {
            k_qq,
            k_pp: FourierMatrix::identity(2),
            k_qp: FourierMatrix::zeros(2),
        };
        Self::new(2, period, blocks, DEFAULT_STEPS_PER_PERIOD)
    }

    /// Uncoupled stationary oscillators with unit mass and the given angular
    /// frequencies.
    pub fn stationary(frequencies: &[f64], period: f64) -> Result<Self> {
        let n = frequencies.len();
        let k_qq = RMat::from_diagonal(&nalgebra::DVector::from_iterator(n, frequencies.iter().map(|w| w * w)));
        let blocks = SBlocks {
            k_qq: FourierMatrix::constant(k_qq),
            k_pp: FourierMatrix::identity(n),
            k_qp: FourierMatrix::zeros(n),
        };
        Self::new(n, period, blocks, DEFAULT_STEPS_PER_PERIOD)
    }

    pub fn with_steps_per_period(&self, steps: usize) -> Result<Self> {
        Self::new(self.n_modes, self.period, self.blocks.clone(), steps)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn steps_per_period(&self) -> usize {
        self.steps_per_period
    }

    pub fn blocks(&self) -> &SBlocks {
        &self.blocks
    }

    /// `true` when `S(−t) = S(t)` and `k_qp ≡ 0`, i.e. the flow is
    /// symmetric under `(q, p, t) → (q, −p, −t)`.
    pub fn is_time_reversal_symmetric(&self) -> bool {
        self.blocks.k_qp.is_zero() && self.blocks.k_qq.is_even_in_time() && self.blocks.k_pp.is_even_in_time()
    }

    /// Symmetric Hamiltonian matrix `S(t)`.
    pub fn evaluate_s(&self, t: f64) -> RMat {
        let n = self.n_modes;
        let kqq = self.blocks.k_qq.evaluate(t, self.period);
        let kpp = self.blocks.k_pp.evaluate(t, self.period);
        let kqp = self.blocks.k_qp.evaluate(t, self.period);
        let mut s = RMat::zeros(2 * n, 2 * n);
        s.view_mut((0, 0), (n, n)).copy_from(&kqq);
        s.view_mut((0, n), (n, n)).copy_from(&kqp);
        s.view_mut((n, 0), (n, n)).copy_from(&kqp.transpose());
        s.view_mut((n, n), (n, n)).copy_from(&kpp);
        s
    }

    /// Dynamical matrix `Π(t) = J S(t)` of `ẋ = Π(t) x`.
    pub fn evaluate_pi(&self, t: f64) -> RMat {
        symplectic_form(self.n_modes) * self.evaluate_s(t)
    }
}
