//! Harmonic-oscillator environment acting on the quanton between the slits
//! and the screen, and the resulting screen probability density.
//!
//! Slit k (zero-based index i, k = i + 1) is centred at `kℓ` and emits a
//! Gaussian packet of width ε. The environment enters through the spreading
//! width α(t) and through one damping factor per pair of slits,
//! `f_jk(t) = exp(−D (j−k)² ℓ² t / 12ħ²)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::{BOLTZMANN, HBAR, PLANCK};
use crate::error::{Error, Result};
use crate::fringe::{scan_periodic, FringeScan, ScanAxis};
use crate::quanton::{DetectorOverlapMatrix, PathConfiguration};

/// Evaluators that drop the per-slit envelope offsets require
/// `ε ℓ / (λ L)` below this.
pub const FRAUNHOFER_LIMIT: f64 = 0.1;

/// Below this value of γt the spreading width uses its Taylor series.
pub const SERIES_SWITCH: f64 = 1e-3;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

fn non_negative_time(t: f64) -> Result<f64> {
    if t >= 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::NegativeTime { t })
    }
}

/// Friction, temperature and particle mass of the bath model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParameters {
    gamma: f64,
    temperature: f64,
    mass: f64,
    diffusion: f64,
}

impl BathParameters {
    /// `gamma` in 1/s, `temperature` in K, `mass` in kg; all strictly positive.
    pub fn new(gamma: f64, temperature: f64, mass: f64) -> Result<Self> {
        positive("gamma", gamma)?;
        positive("temperature", temperature)?;
        positive("mass", mass)?;
        Ok(Self { gamma, temperature, mass, diffusion: 2.0 * mass * gamma * BOLTZMANN * temperature })
    }

    /// The decoupled limit γ → 0, D → 0.
    pub fn isolated(mass: f64) -> Result<Self> {
        positive("mass", mass)?;
        Ok(Self { gamma: 0.0, temperature: 0.0, mass, diffusion: 0.0 })
    }

    /// Chooses γ so that a flight of duration `flight_time` lasts
    /// `t_over_tau` nearest-neighbour decoherence times, i.e.
    /// `D = 12ħ² (t/τ_d) / (t ℓ²)` and `γ = D / (2 m k_B T)`.
    pub fn for_decoherence_ratio(
        t_over_tau: f64,
        flight_time: f64,
        temperature: f64,
        mass: f64,
        ell: f64,
    ) -> Result<Self> {
        if !(t_over_tau >= 0.0 && t_over_tau.is_finite()) {
            return Err(Error::InvalidValue { name: "t_over_tau", value: t_over_tau });
        }
        positive("flight_time", flight_time)?;
        positive("ell", ell)?;
        if t_over_tau == 0.0 {
            return Self::isolated(mass);
        }
        let d = 12.0 * HBAR * HBAR * t_over_tau / (flight_time * ell * ell);
        let gamma = d / (2.0 * mass * BOLTZMANN * positive("temperature", temperature)?);
        Self::new(gamma, temperature, mass)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `D = 2 m γ k_B T`, kg² m² / s³.
    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }
}

pub fn diffusion_coefficient(bath: &BathParameters) -> f64 {
    2.0 * bath.mass * bath.gamma * BOLTZMANN * bath.temperature
}

/// n slits of width ε spaced by ℓ, de Broglie wavelength λ, screen at L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry {
    pub n: usize,
    pub ell: f64,
    pub eps: f64,
    pub lambda: f64,
    pub distance: f64,
}

impl SlitGeometry {
    pub fn new(n: usize, ell: f64, eps: f64, lambda: f64, distance: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::TooFewPaths { n, min: 1 });
        }
        positive("ell", ell)?;
        positive("eps", eps)?;
        positive("lambda", lambda)?;
        positive("distance", distance)?;
        Ok(Self { n, ell, eps, lambda, distance })
    }

    /// `ε ℓ / (λ L)`.
    pub fn fraunhofer_ratio(&self) -> f64 {
        self.eps * self.ell / (self.lambda * self.distance)
    }

    pub fn check_fraunhofer(&self) -> Result<()> {
        let ratio = self.fraunhofer_ratio();
        if ratio < FRAUNHOFER_LIMIT {
            Ok(())
        } else {
            Err(Error::FraunhoferViolated { ratio, limit: FRAUNHOFER_LIMIT })
        }
    }

    /// Fringe period `λL/ℓ` on the screen, m.
    pub fn fringe_period(&self) -> f64 {
        self.lambda * self.distance / self.ell
    }

    /// Nearest-neighbour fringe phase `2πℓx/(λL)` at screen position x.
    pub fn screen_phase(&self, x: f64) -> f64 {
        2.0 * PI * self.ell * x / (self.lambda * self.distance)
    }

    /// `λL/π`, the scale of the far-field Gaussian envelopes.
    fn envelope_scale(&self) -> f64 {
        self.lambda * self.distance / PI
    }

    /// `exp(−2ε²x²/(λL/π)²)`.
    pub fn fraunhofer_envelope(&self, x: f64) -> f64 {
        let w = self.envelope_scale();
        (-2.0 * self.eps * self.eps * x * x / (w * w)).exp()
    }

    /// Slit-to-screen time of flight `L m λ / h` at the de Broglie velocity.
    pub fn flight_time(&self, mass: f64) -> f64 {
        self.distance * mass * self.lambda / PLANCK
    }

    /// Centre of slit `index` (zero-based), m.
    fn slit_position(&self, index: usize) -> f64 {
        (index + 1) as f64 * self.ell
    }
}

/// `τ_d^{(jk)} = 12ħ² / (D (j−k)² ℓ²)`.
pub fn decoherence_time(diffusion: f64, ell: f64, j: usize, k: usize) -> Result<f64> {
    if j == k {
        return Err(Error::SamePath { index: j });
    }
    positive("diffusion", diffusion)?;
    positive("ell", ell)?;
    let sep = j.abs_diff(k) as f64;
    Ok(12.0 * HBAR * HBAR / (diffusion * sep * sep * ell * ell))
}

/// `exp(−D (j−k)² ℓ² t / 12ħ²)`; exactly 1 on the diagonal.
pub fn pair_decoherence_factor(diffusion: f64, ell: f64, t: f64, j: usize, k: usize) -> Result<f64> {
    non_negative_time(t)?;
    if !(diffusion >= 0.0 && diffusion.is_finite()) {
        return Err(Error::InvalidValue { name: "diffusion", value: diffusion });
    }
    positive("ell", ell)?;
    if j == k {
        return Ok(1.0);
    }
    let sep = j.abs_diff(k) as f64;
    Ok((-diffusion * sep * sep * ell * ell * t / (12.0 * HBAR * HBAR)).exp())
}

/// `t / τ_d` for the nearest-neighbour time `τ_d = 12ħ²/(Dℓ²)`.
pub fn decoherence_ratio(diffusion: f64, ell: f64, t: f64) -> f64 {
    diffusion * ell * ell * t / (12.0 * HBAR * HBAR)
}

/// Which pairs of paths the environment damps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingScope {
    /// Every pair (j, k) decays with its own time scale.
    AllPairs,
    /// Only pairs that involve the given (zero-based) path decay.
    SinglePath(usize),
}

/// Pair damping factors `f_jk(t)` for n paths.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceSchedule {
    n: usize,
    factors: Vec<f64>,
}

impl DecoherenceSchedule {
    /// Factors `exp(−(j−k)² t/τ_d)` from the scaled time `t/τ_d`.
    pub fn from_ratio(n: usize, t_over_tau: f64, scope: DampingScope) -> Result<Self> {
        non_negative_time(t_over_tau)?;
        if let DampingScope::SinglePath(p) = scope {
            if p >= n {
                return Err(Error::PiPathOutOfRange { index: p, n });
            }
        }
        let mut factors = vec![1.0; n * n];
        for j in 0..n {
            for k in 0..n {
                let damped = j != k
                    && match scope {
                        DampingScope::AllPairs => true,
                        DampingScope::SinglePath(p) => j == p || k == p,
                    };
                if damped {
                    let sep = j.abs_diff(k) as f64;
                    factors[j * n + k] = (-sep * sep * t_over_tau).exp();
                }
            }
        }
        Ok(Self { n, factors })
    }

    pub fn new(n: usize, diffusion: f64, ell: f64, t: f64, scope: DampingScope) -> Result<Self> {
        non_negative_time(t)?;
        positive("ell", ell)?;
        Self::from_ratio(n, decoherence_ratio(diffusion, ell, t), scope)
    }

    pub fn undamped(n: usize) -> Self {
        Self { n, factors: vec![1.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factor(&self, j: usize, k: usize) -> f64 {
        self.factors[j * self.n + k]
    }
}

/// All n(n−1)/2 pair decoherence times, ordered by (j, k) with j < k.
pub fn pair_decoherence_times(diffusion: f64, ell: f64, n: usize) -> Result<Vec<((usize, usize), f64)>> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 0..n {
        for k in (j + 1)..n {
            out.push(((j, k), decoherence_time(diffusion, ell, j, k)?));
        }
    }
    Ok(out)
}

/// Coefficients of `4x + 4e^{−2x} − e^{−4x} − 3 = Σ_{k≥3} a_k x^k`.
const DIFFUSION_BRACKET_TERMS: usize = 12;

/// `(4γt + 4e^{−2γt} − e^{−4γt} − 3) / γ³` evaluated without cancellation
/// for small γt.
fn diffusion_bracket_over_gamma3(gamma: f64, t: f64) -> f64 {
    let x = gamma * t;
    if x < SERIES_SWITCH {
        // a_k = (4(−2)^k − (−4)^k)/k!; the bracket starts at x³.
        let mut sum = 0.0;
        let mut pow2 = -8.0; // (−2)^3
        let mut pow4 = -64.0; // (−4)^3
        let mut fact = 6.0;
        let mut xp = 1.0;
        for k in 3..3 + DIFFUSION_BRACKET_TERMS {
            sum += (4.0 * pow2 - pow4) / fact * xp;
            pow2 *= -2.0;
            pow4 *= -4.0;
            fact *= (k + 1) as f64;
            xp *= x;
        }
        t * t * t * sum
    } else {
        diffusion_bracket_direct(gamma, t)
    }
}

/// Closed form, written as `4(x + expm1(−2x)) − expm1(−4x)` so that the
/// constant terms cancel exactly.
fn diffusion_bracket_direct(gamma: f64, t: f64) -> f64 {
    let x = gamma * t;
    (4.0 * (x + (-2.0 * x).exp_m1()) - (-4.0 * x).exp_m1()) / (gamma * gamma * gamma)
}

/// Spreading width α(t) of each packet at the screen, m²:
///
/// `α = ε² + ħ²(1−e^{−2γt})²/(ε²m²γ²) + D[4γt + 4e^{−2γt} − e^{−4γt} − 3]/(8m²γ³)`.
///
/// For small γt this tends to `ε² + 4ħ²t²/(ε²m²) + 2Dt³/(3m²)`.
pub fn spreading_width(bath: &BathParameters, geom: &SlitGeometry, t: f64) -> Result<f64> {
    non_negative_time(t)?;
    let (g, m, eps) = (bath.gamma, bath.mass, geom.eps);
    // (1 − e^{−2γt})/γ, stable as γ → 0.
    let drift = if g == 0.0 { 2.0 * t } else { -(-2.0 * g * t).exp_m1() / g };
    let kinetic = HBAR * HBAR * drift * drift / (eps * eps * m * m);
    let diffusive = if bath.diffusion == 0.0 {
        0.0
    } else {
        bath.diffusion * diffusion_bracket_over_gamma3(g, t) / (8.0 * m * m)
    };
    Ok(eps * eps + kinetic + diffusive)
}

fn check_paths(geom: &SlitGeometry, paths: &PathConfiguration, overlaps: &DetectorOverlapMatrix) -> Result<()> {
    if paths.n() != geom.n {
        return Err(Error::DimensionMismatch { expected: geom.n, found: paths.n() });
    }
    if overlaps.n() != geom.n {
        return Err(Error::DimensionMismatch { expected: geom.n, found: overlaps.n() });
    }
    Ok(())
}

fn prefactor(bath: &BathParameters, geom: &SlitGeometry, t: f64) -> Result<f64> {
    let alpha = spreading_width(bath, geom, t)?;
    Ok(1.0 / (PI * alpha / 2.0).sqrt())
}

/// Screen density `ρ(x,x,t)` with per-slit Gaussian envelopes and the full
/// pairwise phase `2πℓ(k−j)(x − ℓ(k+j)/2)/(λL)`, every pair damped.
///
/// Off-diagonal overlaps enter through their modulus.
pub fn screen_density_exact(
    geom: &SlitGeometry,
    paths: &PathConfiguration,
    overlaps: &DetectorOverlapMatrix,
    bath: &BathParameters,
    t: f64,
    x: f64,
) -> Result<f64> {
    check_paths(geom, paths, overlaps)?;
    let pre = prefactor(bath, geom, t)?;
    let schedule = DecoherenceSchedule::new(geom.n, bath.diffusion, geom.ell, t, DampingScope::AllPairs)?;
    let w = geom.envelope_scale();
    let e2 = geom.eps * geom.eps / (w * w);
    let lam_l = geom.lambda * geom.distance;
    let mut total = 0.0;
    for j in 0..geom.n {
        let dj = x - geom.slit_position(j);
        total += paths.amplitudes()[j].norm_sqr() * (-2.0 * e2 * dj * dj).exp();
        for k in (j + 1)..geom.n {
            let dk = x - geom.slit_position(k);
            let envelope = (-e2 * (dj * dj + dk * dk)).exp();
            let centre = 0.5 * (geom.slit_position(j) + geom.slit_position(k));
            let arg = 2.0 * PI * (geom.slit_position(k) - geom.slit_position(j)) * (x - centre) / lam_l
                + paths.total_phase(k)
                - paths.total_phase(j);
            total += 2.0
                * paths.magnitude(j)
                * paths.magnitude(k)
                * overlaps.get(j, k).norm()
                * envelope
                * schedule.factor(j, k)
                * arg.cos();
        }
    }
    Ok(pre * total)
}

/// Far-field bracket `1 + Σ_{j≠k} |c_j||c_k||O_jk| f_jk cos{(k−j)φ + θ_k − θ_j}`
/// at nearest-neighbour fringe phase φ.
pub fn fraunhofer_bracket(
    paths: &PathConfiguration,
    overlaps: &DetectorOverlapMatrix,
    schedule: &DecoherenceSchedule,
    phi: f64,
) -> f64 {
    let n = paths.n();
    let mut total = 1.0;
    for j in 0..n {
        for k in (j + 1)..n {
            let arg = (k - j) as f64 * phi + paths.total_phase(k) - paths.total_phase(j);
            total += 2.0
                * paths.magnitude(j)
                * paths.magnitude(k)
                * overlaps.get(j, k).norm()
                * schedule.factor(j, k)
                * arg.cos();
        }
    }
    total
}

/// Far-field screen density with every pair damped.
pub fn screen_density_fraunhofer(
    geom: &SlitGeometry,
    paths: &PathConfiguration,
    overlaps: &DetectorOverlapMatrix,
    bath: &BathParameters,
    t: f64,
    x: f64,
) -> Result<f64> {
    check_paths(geom, paths, overlaps)?;
    geom.check_fraunhofer()?;
    let pre = prefactor(bath, geom, t)?;
    let schedule = DecoherenceSchedule::new(geom.n, bath.diffusion, geom.ell, t, DampingScope::AllPairs)?;
    Ok(pre * geom.fraunhofer_envelope(x) * fraunhofer_bracket(paths, overlaps, &schedule, geom.screen_phase(x)))
}

/// Bracket with the environment (and the π phase) on the last path only:
///
/// `1 + Σ_{j≠k<n} |c_j||c_k| cos((k−j)φ) − 2 Σ_{j<n} |c_j||c_n| f_jn cos((n−j)φ)`.
///
/// `damping[j]` is `f_jn` for j = 0..n−2.
pub fn selective_bracket(magnitudes: &[f64], damping: &[f64], phi: f64) -> f64 {
    let n = magnitudes.len();
    let last = n - 1;
    let mut total = 1.0;
    for j in 0..last {
        for k in (j + 1)..last {
            total += 2.0 * magnitudes[j] * magnitudes[k] * ((k - j) as f64 * phi).cos();
        }
        total -= 2.0 * magnitudes[j] * magnitudes[last] * damping[j] * ((last - j) as f64 * phi).cos();
    }
    total
}

/// Maximally coherent bracket:
/// `1 + (1/n) Σ_{j≠k<n} cos((k−j)φ) − (2/n) Σ_{j<n} e^{−(n−j)² t/τ_d} cos((n−j)φ)`.
pub fn maxcoherent_bracket(n: usize, t_over_tau: f64, phi: f64) -> f64 {
    let inv_n = 1.0 / n as f64;
    let mut total = 1.0;
    for sep in 1..n.saturating_sub(1) {
        // n−1−sep ordered-pair partners at this separation, counted twice.
        total += 2.0 * inv_n * (n - 1 - sep) as f64 * (sep as f64 * phi).cos();
    }
    for sep in 1..n {
        let s = sep as f64;
        total -= 2.0 * inv_n * (-s * s * t_over_tau).exp() * (s * phi).cos();
    }
    total
}

/// `f_jn(t)` for the paths j < n relative to the last path.
pub fn last_path_damping(n: usize, t_over_tau: f64) -> Vec<f64> {
    (0..n.saturating_sub(1))
        .map(|j| {
            let sep = (n - 1 - j) as f64;
            (-sep * sep * t_over_tau).exp()
        })
        .collect()
}

/// Screen density with decoherence and the π phase on the last path only;
/// all detector overlaps are 1.
pub fn screen_density_selective(
    geom: &SlitGeometry,
    magnitudes: &[f64],
    bath: &BathParameters,
    t: f64,
    x: f64,
) -> Result<f64> {
    if magnitudes.len() != geom.n {
        return Err(Error::DimensionMismatch { expected: geom.n, found: magnitudes.len() });
    }
    if geom.n < 2 {
        return Err(Error::TooFewPaths { n: geom.n, min: 2 });
    }
    // Validates normalization.
    PathConfiguration::from_magnitudes(magnitudes)?;
    geom.check_fraunhofer()?;
    let pre = prefactor(bath, geom, t)?;
    let ratio = decoherence_ratio(bath.diffusion, geom.ell, t);
    let damping = last_path_damping(geom.n, ratio);
    Ok(pre * geom.fraunhofer_envelope(x) * selective_bracket(magnitudes, &damping, geom.screen_phase(x)))
}

/// [`screen_density_selective`] for the maximally coherent input `c_j = 1/√n`.
pub fn screen_density_maxcoherent(geom: &SlitGeometry, bath: &BathParameters, t: f64, x: f64) -> Result<f64> {
    if geom.n < 2 {
        return Err(Error::TooFewPaths { n: geom.n, min: 2 });
    }
    geom.check_fraunhofer()?;
    let pre = prefactor(bath, geom, t)?;
    let ratio = decoherence_ratio(bath.diffusion, geom.ell, t);
    Ok(pre * geom.fraunhofer_envelope(x) * maxcoherent_bracket(geom.n, ratio, geom.screen_phase(x)))
}

/// Fringe contrast of the maximally coherent pattern over one fringe period
/// `x ∈ [0, λL/ℓ)`, with the prefactor and Gaussian envelope divided out.
pub fn scan_screen_maxcoherent(
    geom: &SlitGeometry,
    bath: &BathParameters,
    t: f64,
    samples: usize,
) -> Result<FringeScan> {
    geom.check_fraunhofer()?;
    let pre = prefactor(bath, geom, t)?;
    let to_x = geom.fringe_period() / TAU;
    let scan = scan_periodic(
        |phi| {
            let x = phi * to_x;
            screen_density_maxcoherent(geom, bath, t, x).map_or(f64::NAN, |rho| rho / (pre * geom.fraunhofer_envelope(x)))
        },
        samples,
    )?;
    Ok(scan.with_axis(ScanAxis::Screen, to_x))
}
