//! Quanton states: path amplitudes, which-path detector overlaps, the reduced
//! density matrix obtained by tracing out the detectors, and its l1-norm
//! coherence.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_deviation, min_eigenvalue, trace, CMatrix, HERMITIAN_TOLERANCE, NORM_TOLERANCE,
    PSD_TOLERANCE,
};

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::BetaOutOfRange { beta });
    }
    Ok(())
}

fn check_path_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewPaths { n, min: 2 });
    }
    Ok(())
}

/// Amplitudes and phases of the n interfering paths.
///
/// Path indices are zero-based. `pi_path` marks the one path that carries an
/// extra π on top of its phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PathConfiguration {
    amplitudes: Vec<Complex64>,
    phases: Vec<f64>,
    pi_path: Option<usize>,
}

impl PathConfiguration {
    pub fn new(amplitudes: Vec<Complex64>, phases: Vec<f64>, pi_path: Option<usize>) -> Result<Self> {
        let n = amplitudes.len();
        check_path_count(n)?;
        if phases.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: phases.len() });
        }
        let norm_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        if let Some(&bad) = phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidValue { name: "phase", value: bad });
        }
        if let Some(index) = pi_path {
            if index >= n {
                return Err(Error::PiPathOutOfRange { index, n });
            }
        }
        Ok(Self { amplitudes, phases, pi_path })
    }

    /// Real non-negative amplitudes, zero phases, no π path.
    pub fn from_magnitudes(magnitudes: &[f64]) -> Result<Self> {
        let amplitudes = magnitudes.iter().map(|&m| Complex64::new(m, 0.0)).collect();
        Self::new(amplitudes, vec![0.0; magnitudes.len()], None)
    }

    /// The maximally coherent superposition c_j = 1/√n.
    pub fn equal(n: usize) -> Result<Self> {
        check_path_count(n)?;
        let c = 1.0 / (n as f64).sqrt();
        Self::from_magnitudes(&vec![c; n])
    }

    /// Equal amplitudes with the π phase on the last path.
    pub fn one_path_knowledge(n: usize) -> Result<Self> {
        Self::equal(n)?.with_pi_path(n - 1)
    }

    pub fn with_pi_path(mut self, index: usize) -> Result<Self> {
        if index >= self.n() {
            return Err(Error::PiPathOutOfRange { index, n: self.n() });
        }
        self.pi_path = Some(index);
        Ok(self)
    }

    pub fn without_pi(mut self) -> Self {
        self.pi_path = None;
        self
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn pi_path(&self) -> Option<usize> {
        self.pi_path
    }

    pub fn magnitude(&self, j: usize) -> f64 {
        self.amplitudes[j].norm()
    }

    /// Static phase of path `j` including the π flag.
    pub fn total_phase(&self, j: usize) -> f64 {
        if self.pi_path == Some(j) {
            self.phases[j] + PI
        } else {
            self.phases[j]
        }
    }
}

/// Gram matrix of detector states, `O_jk = ⟨χ_k|χ_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorOverlapMatrix {
    entries: CMatrix,
}

impl DetectorOverlapMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: entries.ncols() });
        }
        check_path_count(n)?;
        let deviation = hermitian_deviation(&entries);
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        for j in 0..n {
            let d = entries[(j, j)];
            if (d - Complex64::new(1.0, 0.0)).norm() > NORM_TOLERANCE {
                return Err(Error::NonUnitDiagonal { index: j, value: d.re });
            }
            for k in 0..n {
                let modulus = entries[(j, k)].norm();
                if modulus > 1.0 + NORM_TOLERANCE {
                    return Err(Error::OverlapTooLarge { row: j, col: k, modulus });
                }
            }
        }
        let min_eigenvalue = min_eigenvalue(&entries);
        if min_eigenvalue < PSD_TOLERANCE {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { entries })
    }

    /// Builds the Gram matrix of the given detector states.
    ///
    /// Each state must have unit norm.
    pub fn from_ancilla_states(states: &[Vec<Complex64>]) -> Result<Self> {
        let n = states.len();
        check_path_count(n)?;
        let dim = states[0].len();
        for s in states {
            if s.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.len() });
            }
            let norm_sq: f64 = s.iter().map(|z| z.norm_sqr()).sum();
            if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::NotNormalized { norm_sq });
            }
        }
        let entries = CMatrix::from_fn(n, n, |j, k| {
            states[k].iter().zip(&states[j]).map(|(a, b)| a.conj() * b).sum()
        });
        Self::new(entries)
    }

    /// Orthogonal detector states: full which-path information.
    pub fn distinguishable(n: usize) -> Result<Self> {
        check_path_count(n)?;
        Ok(Self { entries: CMatrix::identity(n, n) })
    }

    /// Identical detector states: no which-path information.
    pub fn indistinguishable(n: usize) -> Result<Self> {
        check_path_count(n)?;
        Ok(Self { entries: CMatrix::from_element(n, n, Complex64::new(1.0, 0.0)) })
    }

    /// The first n−1 detector states coincide; the last overlaps each of
    /// them by `beta`.
    pub fn one_path_knowledge(n: usize, beta: f64) -> Result<Self> {
        check_path_count(n)?;
        check_beta(beta)?;
        let last = n - 1;
        let entries = CMatrix::from_fn(n, n, |j, k| {
            if j != k && (j == last || k == last) {
                Complex64::new(beta, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[(j, k)]
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }
}

/// n×n quanton state after tracing out the detectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    entries: CMatrix,
}

impl ReducedDensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: entries.ncols() });
        }
        check_path_count(n)?;
        let deviation = hermitian_deviation(&entries);
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = trace(&entries);
        if (tr - Complex64::new(1.0, 0.0)).norm() > NORM_TOLERANCE {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let min_eigenvalue = min_eigenvalue(&entries);
        if min_eigenvalue < PSD_TOLERANCE {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[(j, k)]
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// `U ρ U†` with `U = diag(e^{iφ_1}, …, e^{iφ_n})`.
    pub fn rephased(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: phases.len() });
        }
        let entries = CMatrix::from_fn(self.n(), self.n(), |j, k| {
            self.entries[(j, k)] * Complex64::from_polar(1.0, phases[j] - phases[k])
        });
        Self::new(entries)
    }
}

/// `ρ_jk = c_j c_k* e^{i(θ_j − θ_k)} ⟨χ_k|χ_j⟩`, with the π flag folded into θ.
pub fn build_reduced_density(
    paths: &PathConfiguration,
    overlaps: &DetectorOverlapMatrix,
) -> Result<ReducedDensityMatrix> {
    let n = paths.n();
    if overlaps.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: overlaps.n() });
    }
    let c = paths.amplitudes();
    let entries = CMatrix::from_fn(n, n, |j, k| {
        let phase = Complex64::from_polar(1.0, paths.total_phase(j) - paths.total_phase(k));
        c[j] * c[k].conj() * phase * overlaps.get(j, k)
    });
    ReducedDensityMatrix::new(entries)
}

/// The signed one-path-knowledge state: all entries 1/n except the last
/// row and column, which carry −β/n off the diagonal.
pub fn one_path_knowledge_state(n: usize, beta: f64) -> Result<ReducedDensityMatrix> {
    check_path_count(n)?;
    check_beta(beta)?;
    let inv_n = 1.0 / n as f64;
    let last = n - 1;
    let entries = CMatrix::from_fn(n, n, |j, k| {
        let v = if j != k && (j == last || k == last) { -beta * inv_n } else { inv_n };
        Complex64::new(v, 0.0)
    });
    ReducedDensityMatrix::new(entries)
}

/// l1-norm coherence of an arbitrary square matrix, `(1/(n−1)) Σ_{j≠k} |m_jk|`.
///
/// No density-matrix invariants are checked; use [`l1_coherence`] for
/// validated states.
pub fn l1_norm_coherence(m: &CMatrix) -> Result<f64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    check_path_count(n)?;
    let mut sum = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                sum += m[(j, k)].norm();
            }
        }
    }
    Ok(sum / (n - 1) as f64)
}

pub fn l1_coherence(rho: &ReducedDensityMatrix) -> f64 {
    // Dimension is already validated.
    l1_norm_coherence(rho.entries()).unwrap_or(0.0)
}

/// `(n − 2 + 2β)/n`.
pub fn coherence_closed_form(n: usize, beta: f64) -> Result<f64> {
    check_path_count(n)?;
    check_beta(beta)?;
    let n = n as f64;
    Ok((n - 2.0 + 2.0 * beta) / n)
}
