//! Small dense linear-algebra helpers shared by the physics modules.

use alloc::vec::Vec;
use nalgebra::{ComplexField, DMatrix, DVector};

use crate::C64;

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

/// The `2N × 2N` symplectic form `J = [[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> RMat {
    let mut j = RMat::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        j[(k, k + n_modes)] = 1.0;
        j[(k + n_modes, k)] = -1.0;
    }
    j
}

pub fn complexify(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// Largest entry modulus, `0` for an empty matrix.
pub fn max_abs<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.clone().modulus()))
}

pub fn max_abs_diff<T: ComplexField<RealField = f64>>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    max_abs(&(a - b))
}

pub fn max_imag(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

/// Diagonal matrix `exp(i W t)` with `W = diag(Ω, -Ω)`.
pub fn floquet_phases(exponents: &[f64], t: f64) -> CMat {
    let n = exponents.len();
    let mut d = CMat::zeros(2 * n, 2 * n);
    for (k, &w) in exponents.iter().enumerate() {
        let (s, c) = (w * t).sin_cos();
        d[(k, k)] = C64::new(c, s);
        d[(k + n, k + n)] = C64::new(c, -s);
    }
    d
}

/// Relative asymmetry `max|A - Aᵀ| / max(1, max|A|)`.
pub fn relative_asymmetry(m: &RMat) -> f64 {
    let scale = max_abs(m).max(1.0);
    max_abs(&(m - m.transpose())) / scale
}

/// Orthonormal basis (columns) of the numerical null space of a square
/// matrix, taken from the `count` smallest singular values. Returns `None`
/// when fewer than `count` singular values fall below `rel_tol · σ_max`.
pub fn null_space(a: &CMat, count: usize, rel_tol: f64) -> Option<CMat> {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    if count > order.len() {
        return None;
    }
    let mut basis = CMat::zeros(n, count);
    for (slot, &idx) in order.iter().take(count).enumerate() {
        if svd.singular_values[idx] > rel_tol * sigma_max {
            return None;
        }
        let row = v_t.row(idx).adjoint();
        basis.set_column(slot, &row);
    }
    Some(basis)
}

/// Reduced column-echelon form of a basis: columns are recombined so that
/// each has a unit entry at a distinct pivot coordinate and zeros at the
/// pivots of the other columns. Makes the basis independent of whatever
/// unitary mixing the eigensolver produced.
pub fn column_echelon(basis: &CMat, rel_tol: f64) -> CMat {
    let mut rows: Vec<DVector<C64>> = (0..basis.ncols()).map(|j| basis.column(j).into_owned()).collect();
    let dim = basis.nrows();
    let scale = max_abs(basis).max(f64::MIN_POSITIVE);
    let mut next = 0;
    for coord in 0..dim {
        if next == rows.len() {
            break;
        }
        let (best, best_abs) = (next..rows.len())
            .map(|r| (r, rows[r][coord].modulus()))
            .fold((next, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_abs <= rel_tol * scale {
            continue;
        }
        rows.swap(next, best);
        let pivot = rows[next][coord];
        rows[next] /= pivot;
        for r in 0..rows.len() {
            if r != next {
                let factor = rows[r][coord];
                if factor != C64::new(0.0, 0.0) {
                    let pivot_row = rows[next].clone();
                    rows[r] -= pivot_row * factor;
                }
            }
        }
        next += 1;
    }
    let mut out = CMat::zeros(dim, rows.len());
    for (j, r) in rows.iter().enumerate() {
        out.set_column(j, r);
    }
    out
}

pub fn det_real(m: &RMat) -> f64 {
    m.clone().lu().determinant()
}

pub fn det_complex(m: &CMat) -> C64 {
    m.clone().lu().determinant()
}
