//! Small dense-matrix helpers for Hermitian validation.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance on Σ|c|² − 1, unit diagonals and unit trace.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Lowest eigenvalue accepted as "positive semidefinite".
pub const PSD_TOLERANCE: f64 = -1e-10;

/// Largest |m_jk − m_kj*| accepted as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Largest entrywise deviation from Hermiticity.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for k in j..n {
            let d = (m[(j, k)] - m[(k, j)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the lower triangle is read.
pub fn eigenvalues_ascending(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigenvalues_ascending(m).first().copied().unwrap_or(0.0)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    (0..m.nrows()).map(|j| m[(j, j)]).sum()
}
