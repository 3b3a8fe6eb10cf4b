//! Measuring coherence from interference data.
//!
//! Two protocols are provided. The peak-ratio protocol compares the principal
//! maximum with all paths indistinguishable against the same point with all
//! paths distinguishable; it assumes the phases are free to line up and is
//! refused when a path carries a constrained π phase. The pairwise protocol
//! averages two-path visibilities over every pair of paths and works
//! regardless of phase constraints.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::bath::{last_path_damping, maxcoherent_bracket};
use crate::error::{Error, Result};
use crate::fringe::{periodic_argmax, scan_periodic, DEFAULT_SAMPLES};
use crate::interference::{channel_intensity, check_increasing};
use crate::linalg::{CMatrix, NORM_TOLERANCE};
use crate::quanton::{DetectorOverlapMatrix, PathConfiguration};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolMethod {
    PeakRatio,
    Pairwise,
}

impl ProtocolMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PeakRatio => "peak-ratio",
            Self::Pairwise => "pairwise",
        }
    }
}

/// A measured coherence together with the raw numbers it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub method: ProtocolMethod,
    pub value: f64,
    /// Peak-ratio: `[I∥max, I⊥max]`. Pairwise: the pair visibilities
    /// (times damping) in (j, k) order with j < k.
    pub inputs: Vec<f64>,
}

/// `(1/(n−1)) (I∥max − I⊥max) / I⊥max`.
pub fn peak_ratio_coherence(i_parallel_max: f64, i_perp_max: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewPaths { n, min: 2 });
    }
    if !(i_perp_max > 0.0 && i_perp_max.is_finite()) {
        return Err(Error::NonPositiveReference { value: i_perp_max });
    }
    Ok((i_parallel_max - i_perp_max) / (i_perp_max * (n - 1) as f64))
}

/// Simulates the peak-ratio protocol on the state prepared by `paths` and
/// `overlaps`: the principal maximum of the channel intensity is located,
/// then compared with the intensity at the same phase once the protocol's
/// detector makes every path distinguishable.
pub fn run_peak_ratio_protocol(
    paths: &PathConfiguration,
    overlaps: &DetectorOverlapMatrix,
    samples: usize,
) -> Result<ProtocolResult> {
    if paths.pi_path().is_some() {
        return Err(Error::PhaseConstrained);
    }
    if overlaps.n() != paths.n() {
        return Err(Error::DimensionMismatch { expected: paths.n(), found: overlaps.n() });
    }
    let (theta, i_par) = periodic_argmax(|t| channel_intensity(paths, overlaps, t).unwrap_or(f64::NAN), samples)?;
    let distinguishable = DetectorOverlapMatrix::distinguishable(paths.n())?;
    let i_perp = channel_intensity(paths, &distinguishable, theta)?;
    Ok(ProtocolResult {
        method: ProtocolMethod::PeakRatio,
        value: peak_ratio_coherence(i_par, i_perp, paths.n())?,
        inputs: alloc::vec![i_par, i_perp],
    })
}

fn check_magnitudes(magnitudes: &[f64], damping: &[f64]) -> Result<usize> {
    let n = magnitudes.len();
    if n < 2 {
        return Err(Error::TooFewPaths { n, min: 2 });
    }
    if damping.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, found: damping.len() });
    }
    let norm_sq: f64 = magnitudes.iter().map(|c| c * c).sum();
    if (norm_sq - 1.0).abs() > NORM_TOLERANCE || magnitudes.iter().any(|&c| c < 0.0) {
        return Err(Error::NotNormalized { norm_sq });
    }
    if let Some(&bad) = damping.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
        return Err(Error::InvalidValue { name: "damping", value: bad });
    }
    Ok(n)
}

/// Two-path visibility `2|c_j||c_k|/(|c_j|²+|c_k|²)` with only j and k open.
fn pair_visibility(a: f64, b: f64) -> f64 {
    let denom = a * a + b * b;
    if denom == 0.0 {
        0.0
    } else {
        2.0 * a * b / denom
    }
}

/// Pair visibilities for every unordered pair (j < k); pairs with the last
/// path are multiplied by `damping[j] = f_jn`.
pub fn pair_visibilities(magnitudes: &[f64], damping: &[f64]) -> Result<Vec<((usize, usize), f64)>> {
    let n = check_magnitudes(magnitudes, damping)?;
    let last = n - 1;
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        for k in (j + 1)..n {
            let mut v = pair_visibility(magnitudes[j], magnitudes[k]);
            if k == last {
                v *= damping[j];
            }
            out.push(((j, k), v));
        }
    }
    Ok(out)
}

/// Average of the n(n−1)/2 pair visibilities, the last path's pairs damped
/// by `f_jn`.
pub fn pairwise_visibility_coherence(magnitudes: &[f64], damping: &[f64]) -> Result<f64> {
    let pairs = pair_visibilities(magnitudes, damping)?;
    let n = magnitudes.len() as f64;
    Ok(2.0 / (n * (n - 1.0)) * pairs.iter().map(|(_, v)| v).sum::<f64>())
}

pub fn run_pairwise_protocol(magnitudes: &[f64], damping: &[f64]) -> Result<ProtocolResult> {
    let pairs = pair_visibilities(magnitudes, damping)?;
    let n = magnitudes.len() as f64;
    let inputs: Vec<f64> = pairs.iter().map(|(_, v)| *v).collect();
    Ok(ProtocolResult {
        method: ProtocolMethod::Pairwise,
        value: 2.0 / (n * (n - 1.0)) * inputs.iter().sum::<f64>(),
        inputs,
    })
}

fn check_ratio(t_over_tau: f64) -> Result<()> {
    if t_over_tau.is_nan() || t_over_tau < 0.0 {
        return Err(Error::NegativeTime { t: t_over_tau });
    }
    Ok(())
}

/// Coherence of the maximally coherent state when only the last path
/// decoheres: `(n−2)/n + (2/(n(n−1))) Σ_{j<n} e^{−(n−j)² t/τ_d}`.
pub fn coherence_decay(n: usize, t_over_tau: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewPaths { n, min: 2 });
    }
    check_ratio(t_over_tau)?;
    let nf = n as f64;
    let tail: f64 = last_path_damping(n, t_over_tau).iter().sum();
    Ok((nf - 2.0) / nf + 2.0 / (nf * (nf - 1.0)) * tail)
}

/// `1/n` everywhere, with the (j, n) and (n, j) entries damped by `f_jn`.
///
/// This is not a valid density matrix in general (it can have small negative
/// eigenvalues) but its l1 norm is what the decay law measures.
pub fn selectively_damped_matrix(n: usize, t_over_tau: f64) -> Result<CMatrix> {
    if n < 2 {
        return Err(Error::TooFewPaths { n, min: 2 });
    }
    check_ratio(t_over_tau)?;
    let damping = last_path_damping(n, t_over_tau);
    let last = n - 1;
    let inv_n = 1.0 / n as f64;
    Ok(CMatrix::from_fn(n, n, |j, k| {
        let f = match (j == last, k == last) {
            (true, false) => damping[k],
            (false, true) => damping[j],
            _ => 1.0,
        };
        Complex64::new(inv_n * f, 0.0)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeRow {
    pub t_over_tau: f64,
    pub visibility: f64,
    pub coherence: f64,
}

/// Fringe visibility of the maximally coherent selective-decoherence pattern
/// (envelope removed, one fringe period) at scaled time `t/τ_d`.
pub fn pattern_visibility(n: usize, t_over_tau: f64, samples: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewPaths { n, min: 2 });
    }
    check_ratio(t_over_tau)?;
    Ok(scan_periodic(|phi| maxcoherent_bracket(n, t_over_tau, phi), samples)?.visibility)
}

pub fn visibility_vs_time(n: usize, grid: &[f64]) -> Result<Vec<TimeRow>> {
    visibility_vs_time_sampled(n, grid, DEFAULT_SAMPLES)
}

pub fn visibility_vs_time_sampled(n: usize, grid: &[f64], samples: usize) -> Result<Vec<TimeRow>> {
    for &t in grid {
        check_ratio(t)?;
    }
    check_increasing(grid)?;
    grid.iter()
        .map(|&t_over_tau| {
            Ok(TimeRow {
                t_over_tau,
                visibility: pattern_visibility(n, t_over_tau, samples)?,
                coherence: coherence_decay(n, t_over_tau)?,
            })
        })
        .collect()
}
