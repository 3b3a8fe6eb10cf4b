//! Output-channel intensity of the detector-overlap model as a function of
//! the common phase θ, where path k picks up the phase kθ.
//!
//! The channel overlap |α|² is normalized to 1 throughout.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fringe::{scan_periodic, FringeScan, DEFAULT_SAMPLES};
use crate::quanton::{coherence_closed_form, DetectorOverlapMatrix, PathConfiguration};

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::BetaOutOfRange { beta });
    }
    Ok(())
}

/// `I/|α|² = Σ_jk Re[c_j c_k* O_jk e^{i(θ_j − θ_k)}]` with `θ_k = kθ + φ_k`,
/// where `φ_k` is the static phase of path k (π flag included).
///
/// For real amplitudes this is `1 + Σ_{j≠k} |c_j||c_k| Re[O_jk e^{i(θ_j−θ_k)}]`.
pub fn channel_intensity(
    paths: &PathConfiguration,
    overlaps: &DetectorOverlapMatrix,
    theta: f64,
) -> Result<f64> {
    let n = paths.n();
    if overlaps.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: overlaps.n() });
    }
    Ok(intensity_unchecked(paths, overlaps, theta))
}

fn intensity_unchecked(paths: &PathConfiguration, overlaps: &DetectorOverlapMatrix, theta: f64) -> f64 {
    let n = paths.n();
    let c = paths.amplitudes();
    let phase = |j: usize| paths.total_phase(j) + (j + 1) as f64 * theta;
    let mut total = 0.0;
    for j in 0..n {
        total += c[j].norm_sqr();
        for k in (j + 1)..n {
            // The (k, j) term is the conjugate of (j, k).
            let z = c[j] * c[k].conj() * overlaps.get(j, k);
            let (s, co) = (phase(j) - phase(k)).sin_cos();
            total += 2.0 * (z.re * co - z.im * s);
        }
    }
    total
}

/// Three paths, π on path 3: `1 + (2(1−β)/3) cos θ − (2β/3) cos 2θ`.
pub fn intensity_n3(beta: f64, theta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(1.0 + 2.0 * (1.0 - beta) / 3.0 * theta.cos() - 2.0 * beta / 3.0 * (2.0 * theta).cos())
}

/// Four paths, π on path 4:
/// `1 + ((2−β)/2) cos θ + ((1−β)/2) cos 2θ − (β/2) cos 3θ`.
pub fn intensity_n4(beta: f64, theta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(1.0 + (2.0 - beta) / 2.0 * theta.cos() + (1.0 - beta) / 2.0 * (2.0 * theta).cos()
        - beta / 2.0 * (3.0 * theta).cos())
}

/// `Σ_{d=1}^{m} cos(dθ) = cos((m+1)θ/2) sin(mθ/2) / sin(θ/2)`.
fn cosine_series(m: usize, theta: f64) -> f64 {
    let half = 0.5 * theta;
    let denom = half.sin();
    if denom.abs() < 1e-6 {
        // Removable singularity; the plain sum is well conditioned here.
        return (1..=m).map(|d| (d as f64 * theta).cos()).sum();
    }
    let m = m as f64;
    ((m + 1.0) * half).cos() * (m * half).sin() / denom
}

/// General-n closed form for the one-path-knowledge configuration:
///
/// `1 + (2/n) Σ_{d=1}^{n−2} (n−1−d) cos dθ − (2β/n) cos (n−1)θ − (2β/n) Σ_{d=1}^{n−2} cos dθ`.
///
/// The coherent block (paths 1..n−1) carries the weight 2/n; without it the
/// expression does not reduce to the three- and four-path forms.
pub fn closed_form_intensity(n: usize, beta: f64, theta: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::TooFewPaths { n, min: 3 });
    }
    check_beta(beta)?;
    let nf = n as f64;
    let coherent: f64 = (1..=n - 2).map(|d| (nf - 1.0 - d as f64) * (d as f64 * theta).cos()).sum();
    let last = ((nf - 1.0) * theta).cos();
    Ok(1.0 + 2.0 / nf * coherent - 2.0 * beta / nf * last - 2.0 * beta / nf * cosine_series(n - 2, theta))
}

/// Phase scan of an arbitrary configuration.
pub fn scan_configuration(
    paths: &PathConfiguration,
    overlaps: &DetectorOverlapMatrix,
    samples: usize,
) -> Result<FringeScan> {
    if overlaps.n() != paths.n() {
        return Err(Error::DimensionMismatch { expected: paths.n(), found: overlaps.n() });
    }
    scan_periodic(|theta| intensity_unchecked(paths, overlaps, theta), samples)
}

/// Phase scan of the n-path one-path-knowledge configuration (π on path n).
pub fn scan_phase(n: usize, beta: f64, samples: usize) -> Result<FringeScan> {
    let paths = PathConfiguration::one_path_knowledge(n)?;
    let overlaps = DetectorOverlapMatrix::one_path_knowledge(n, beta)?;
    scan_configuration(&paths, &overlaps, samples)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSweepRow {
    pub beta: f64,
    pub one_path_knowledge: f64,
    pub visibility: f64,
    pub coherence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaSweepTable {
    pub n: usize,
    pub rows: Vec<BetaSweepRow>,
}

/// Uniform grid of `points` values over `[0, 1]`, endpoints exact.
pub fn unit_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![0.0],
        _ => (0..points)
            .map(|i| if i + 1 == points { 1.0 } else { i as f64 / (points - 1) as f64 })
            .collect(),
    }
}

pub(crate) fn check_increasing(grid: &[f64]) -> Result<()> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::GridNotIncreasing);
    }
    Ok(())
}

pub fn sweep_beta(n: usize, grid: &[f64]) -> Result<BetaSweepTable> {
    sweep_beta_sampled(n, grid, DEFAULT_SAMPLES)
}

/// Visibility and coherence for each β of a strictly increasing grid in [0, 1].
pub fn sweep_beta_sampled(n: usize, grid: &[f64], samples: usize) -> Result<BetaSweepTable> {
    for &beta in grid {
        check_beta(beta)?;
    }
    check_increasing(grid)?;
    let rows = grid
        .iter()
        .map(|&beta| {
            Ok(BetaSweepRow {
                beta,
                one_path_knowledge: 1.0 - beta,
                visibility: scan_phase(n, beta, samples)?.visibility,
                coherence: coherence_closed_form(n, beta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BetaSweepTable { n, rows })
}
