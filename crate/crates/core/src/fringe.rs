//! Fringe scans and Michelson visibility.
//!
//! Periodic patterns are sampled on a uniform grid over one period; every
//! promising grid extremum is then polished with a golden-section search so
//! that the visibility is limited by floating point, not by the grid.

use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 256;
pub const DEFAULT_SAMPLES: usize = 4096;

/// Absolute slack below zero tolerated on dimensionless intensities.
pub const NEGATIVE_SLACK: f64 = 1e-12;

/// How many of the best grid extrema get refined.
const REFINED_CANDIDATES: usize = 8;
const GOLDEN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    /// Abscissa is a phase in radians.
    Phase,
    /// Abscissa is a screen position in metres.
    Screen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub axis: ScanAxis,
    /// `(abscissa, intensity)` pairs in scan order.
    pub samples: Vec<(f64, f64)>,
    pub i_max: f64,
    pub i_min: f64,
    pub visibility: f64,
}

/// `(I_max − I_min)/(I_max + I_min)`; zero for a dark pattern.
pub fn michelson_visibility(i_max: f64, i_min: f64) -> f64 {
    let i_min = i_min.max(0.0);
    let denom = i_max + i_min;
    if denom <= 0.0 {
        return 0.0;
    }
    ((i_max - i_min) / denom).clamp(0.0, 1.0)
}

impl FringeScan {
    /// Extrema straight from the samples, without refinement.
    ///
    /// The negative-intensity slack is scaled by the peak so that the same
    /// check works for probability densities with units.
    pub fn from_samples(axis: ScanAxis, samples: Vec<(f64, f64)>) -> Result<Self> {
        let (i_min, i_max) = samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
        let slack = NEGATIVE_SLACK * i_max.abs().max(1.0);
        if let Some(&(at, value)) = samples.iter().find(|(_, v)| *v < -slack || !v.is_finite()) {
            return Err(Error::NegativeIntensity { value, at });
        }
        let i_min = i_min.max(0.0);
        Ok(Self { axis, samples, i_max, i_min, visibility: michelson_visibility(i_max, i_min) })
    }

    /// Rescales the abscissa, e.g. from phase to screen position.
    pub fn with_axis(mut self, axis: ScanAxis, scale: f64) -> Self {
        self.axis = axis;
        for s in &mut self.samples {
            s.0 *= scale;
        }
        self
    }
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > GOLDEN_TOLERANCE {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Refines the largest local maxima of `values` (sampled at `grid`) and
/// returns the best value found.
fn refined_max<F: Fn(f64) -> f64>(f: &F, grid: &[f64], values: &[f64], step: f64) -> f64 {
    let m = values.len();
    let mut candidates: Vec<usize> = (0..m)
        .filter(|&i| {
            let prev = values[(i + m - 1) % m];
            let next = values[(i + 1) % m];
            values[i] > prev && values[i] >= next
        })
        .collect();
    candidates.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    candidates.truncate(REFINED_CANDIDATES);

    let mut best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for i in candidates {
        let (_, v) = golden_max(f, grid[i] - step, grid[i] + step);
        best = best.max(v);
    }
    best
}

/// Location and value of the global maximum of a 2π-periodic function.
pub fn periodic_argmax<F: Fn(f64) -> f64>(f: F, samples: usize) -> Result<(f64, f64)> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { samples, min: MIN_SAMPLES });
    }
    let step = TAU / samples as f64;
    let values: Vec<f64> = (0..samples).map(|i| f(i as f64 * step)).collect();
    let m = values.len();
    let first = (0..m).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    let (mut best_x, mut best) = (first as f64 * step, values[first]);
    for i in 0..m {
        let prev = values[(i + m - 1) % m];
        let next = values[(i + 1) % m];
        if values[i] > prev && values[i] >= next {
            let centre = i as f64 * step;
            let (x, v) = golden_max(&f, centre - step, centre + step);
            let (x, v) = if values[i] > v { (centre, values[i]) } else { (x, v) };
            if v > best {
                best = v;
                best_x = x;
            }
        }
    }
    Ok((best_x, best))
}

/// Samples a 2π-periodic pattern over `[0, 2π)` and extracts refined extrema.
pub fn scan_periodic<F: Fn(f64) -> f64>(f: F, samples: usize) -> Result<FringeScan> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { samples, min: MIN_SAMPLES });
    }
    let step = TAU / samples as f64;
    let grid: Vec<f64> = (0..samples).map(|i| i as f64 * step).collect();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();

    let mut scan = FringeScan::from_samples(ScanAxis::Phase, grid.iter().copied().zip(values.iter().copied()).collect())?;

    let i_max = refined_max(&f, &grid, &values, step);
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    let i_min = -refined_max(&|x| -f(x), &grid, &negated, step);
    if i_min < -NEGATIVE_SLACK {
        return Err(Error::NegativeIntensity { value: i_min, at: f64::NAN });
    }
    scan.i_max = i_max;
    scan.i_min = i_min.max(0.0);
    scan.visibility = michelson_visibility(scan.i_max, scan.i_min);
    Ok(scan)
}
