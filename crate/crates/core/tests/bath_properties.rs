use std::f64::consts::PI;

use multipath_core::bath::{
    decoherence_ratio, fraunhofer_bracket, maxcoherent_bracket, screen_density_exact,
    screen_density_fraunhofer, screen_density_maxcoherent, screen_density_selective,
    selective_bracket, spreading_width, BathParameters, DampingScope, DecoherenceSchedule,
    SlitGeometry,
};
use multipath_core::interference::{channel_intensity, intensity_n4};
use multipath_core::quanton::{DetectorOverlapMatrix, PathConfiguration};
use proptest::prelude::*;

const NEON_MASS: f64 = 3.349e-26;
const NEON_T: f64 = 2.5e-3;
const PATTERN_TIMES: [f64; 5] = [0.0, 1.0 / 12.0, 0.25, 0.5, 2.0];

fn neon(n: usize) -> SlitGeometry {
    SlitGeometry::new(n, 6e-6, 2e-6, 0.018e-6, 37e-3).unwrap()
}

fn neon_bath(geom: &SlitGeometry, t_over_tau: f64) -> (BathParameters, f64) {
    let t = geom.flight_time(NEON_MASS);
    (BathParameters::for_decoherence_ratio(t_over_tau, t, NEON_T, NEON_MASS, geom.ell).unwrap(), t)
}

/// α(t) evaluated with 50-digit arithmetic (mpmath) from the closed form,
/// frozen here: (eps, mass, temperature, t, γt, α).
#[allow(clippy::excessive_precision)]
const SPREADING_ORACLE: [(f64, f64, f64, f64, f64, f64); 7] = [
    (2e-6, 3.349e-26, 2.5e-3, 0.0336614909120246, 1e-6, 1.2796469424324886027e-8),
    (2e-6, 3.349e-26, 2.5e-3, 0.0336614909120246, 1e-3, 1.5659730020643865195e-6),
    (2e-6, 3.349e-26, 2.5e-3, 0.0336614909120246, 0.5, 3.9260415181552294002e-4),
    (2e-6, 3.349e-26, 2.5e-3, 0.0336614909120246, 3.0, 2.9227603265897075174e-4),
    (1e-7, 1e-25, 300.0, 1e-3, 1e-6, 5.5670734958325253095e-8),
    (1e-7, 1e-25, 300.0, 1e-3, 1e-3, 5.5143642291177234743e-5),
    (1e-7, 1e-25, 300.0, 1e-3, 0.5, 1.3924500382669935338e-2),
];

#[test]
fn spreading_width_matches_high_precision_oracle() {
    for (eps, mass, temp, t, gt, expected) in SPREADING_ORACLE {
        let geom = SlitGeometry::new(4, 6e-6, eps, 0.018e-6, 37e-3).unwrap();
        let bath = BathParameters::new(gt / t, temp, mass).unwrap();
        let got = spreading_width(&bath, &geom, t).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-9, "γt={gt}: {got} vs {expected}");
    }
}

#[test]
fn spreading_width_is_continuous_across_series_switch() {
    let geom = neon(4);
    let t = 0.03;
    let below = BathParameters::new(1e-3 * (1.0 - 1e-9) / t, NEON_T, NEON_MASS).unwrap();
    let above = BathParameters::new(1e-3 * (1.0 + 1e-9) / t, NEON_T, NEON_MASS).unwrap();
    let a = spreading_width(&below, &geom, t).unwrap();
    let b = spreading_width(&above, &geom, t).unwrap();
    assert!(((a - b) / a).abs() < 1e-8);
}

fn scenario() -> impl Strategy<Value = (usize, f64, f64, f64, bool)> {
    (2usize..7, 0.0..=1.0f64, 0.0..3.0f64, -3e-4..3e-4f64, any::<bool>())
}

proptest! {
    #[test]
    fn densities_are_non_negative((n, beta, tt, x, pi) in scenario()) {
        let geom = neon(n);
        let (bath, t) = neon_bath(&geom, tt);
        let p = PathConfiguration::one_path_knowledge(n).unwrap();
        let p = if pi { p } else { p.without_pi() };
        let o = DetectorOverlapMatrix::one_path_knowledge(n, beta).unwrap();
        // Peak scale: the constructive maximum of the far-field pattern.
        let alpha = spreading_width(&bath, &geom, t).unwrap();
        let peak = n as f64 / (PI * alpha / 2.0).sqrt();
        for rho in [
            screen_density_exact(&geom, &p, &o, &bath, t, x).unwrap(),
            screen_density_fraunhofer(&geom, &p, &o, &bath, t, x).unwrap(),
            screen_density_maxcoherent(&geom, &bath, t, x).unwrap(),
        ] {
            prop_assert!(rho >= -1e-12 * peak);
        }
    }

    #[test]
    fn maxcoherent_pattern_is_even(n in 2usize..7, tt in 0.0..3.0f64, x in 0.0..3e-4f64) {
        let geom = neon(n);
        let (bath, t) = neon_bath(&geom, tt);
        let a = screen_density_maxcoherent(&geom, &bath, t, x).unwrap();
        let b = screen_density_maxcoherent(&geom, &bath, t, -x).unwrap();
        let peak = n as f64 / (PI * spreading_width(&bath, &geom, t).unwrap() / 2.0).sqrt();
        prop_assert!((a - b).abs() <= 1e-12 * peak);
    }

    #[test]
    fn bracket_is_sum_of_two_slit_terms(
        n in 2usize..7,
        tt in 0.0..2.0f64,
        phi in -7.0..7.0f64,
        beta in 0.0..=1.0f64,
    ) {
        let p = PathConfiguration::one_path_knowledge(n).unwrap();
        let o = DetectorOverlapMatrix::one_path_knowledge(n, beta).unwrap();
        let s = DecoherenceSchedule::from_ratio(n, tt, DampingScope::AllPairs).unwrap();
        let mut pairs = 1.0;
        for j in 0..n {
            for k in (j + 1)..n {
                // Two-slit pattern of pair (j, k) alone, minus its incoherent part.
                let sep = (k - j) as f64;
                let phase = sep * phi + p.total_phase(k) - p.total_phase(j);
                pairs += 2.0 / n as f64 * o.get(j, k).norm() * (-sep * sep * tt).exp() * phase.cos();
            }
        }
        prop_assert!((fraunhofer_bracket(&p, &o, &s, phi) - pairs).abs() < 1e-12);
    }
}

#[test]
fn isolated_far_field_pattern_only_spreads() {
    let geom = neon(4);
    let bath = BathParameters::isolated(NEON_MASS).unwrap();
    let p = PathConfiguration::one_path_knowledge(4).unwrap();
    let o = DetectorOverlapMatrix::one_path_knowledge(4, 0.6).unwrap();
    for x in [-1e-4, -3e-5, 0.0, 2e-5, 7e-5] {
        let shape = |t: f64| {
            let alpha = spreading_width(&bath, &geom, t).unwrap();
            screen_density_fraunhofer(&geom, &p, &o, &bath, t, x).unwrap() * (PI * alpha / 2.0).sqrt()
                / geom.fraunhofer_envelope(x)
        };
        let a = shape(0.01);
        let b = shape(0.05);
        assert!((a - b).abs() < 1e-12);
        // And it is the detector-model intensity at θ = 2πℓx/(λL).
        let i = channel_intensity(&p, &o, geom.screen_phase(x)).unwrap();
        assert!((a - i).abs() < 1e-12);
    }
}

#[test]
fn long_times_erase_all_fringes() {
    let p = PathConfiguration::equal(5).unwrap();
    let o = DetectorOverlapMatrix::indistinguishable(5).unwrap();
    let s = DecoherenceSchedule::from_ratio(5, 60.0, DampingScope::AllPairs).unwrap();
    for i in 0..50 {
        assert!((fraunhofer_bracket(&p, &o, &s, 0.13 * i as f64) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn selective_pattern_at_t0_is_the_overlap_one_phase_pattern() {
    let geom = neon(4);
    let (bath, _) = neon_bath(&geom, 0.0);
    let alpha = spreading_width(&bath, &geom, 0.0).unwrap();
    let pre = 1.0 / (PI * alpha / 2.0).sqrt();
    for i in 0..200 {
        let x = -3e-4 + 3e-6 * i as f64;
        let rho = screen_density_maxcoherent(&geom, &bath, 0.0, x).unwrap();
        let bracket = rho / (pre * geom.fraunhofer_envelope(x));
        let expected = intensity_n4(1.0, geom.screen_phase(x)).unwrap();
        assert!((bracket - expected).abs() < 1e-9, "x={x}");
    }
}

#[test]
fn selective_pattern_at_long_times_keeps_three_coherent_paths() {
    for i in 0..100 {
        let phi = 0.0629 * i as f64;
        let expected = 1.0 + phi.cos() + 0.5 * (2.0 * phi).cos();
        assert!((maxcoherent_bracket(4, 80.0, phi) - expected).abs() < 1e-12);
    }
}

#[test]
fn maxcoherent_equals_selective_with_equal_amplitudes() {
    for n in 2..=6 {
        let geom = neon(n);
        let amps = vec![1.0 / (n as f64).sqrt(); n];
        for tt in PATTERN_TIMES {
            let (bath, t) = neon_bath(&geom, tt);
            let peak = n as f64 / (PI * spreading_width(&bath, &geom, t).unwrap() / 2.0).sqrt();
            for i in 0..40 {
                let x = -2e-4 + 1e-5 * i as f64;
                let a = screen_density_maxcoherent(&geom, &bath, t, x).unwrap();
                let b = screen_density_selective(&geom, &amps, &bath, t, x).unwrap();
                assert!((a - b).abs() <= 1e-12 * peak, "n={n} tt={tt} x={x}");
            }
        }
    }
}

#[test]
fn selective_damping_uses_separation_squared() {
    let geom = neon(4);
    let (bath, t) = neon_bath(&geom, 1.0);
    assert!((decoherence_ratio(bath.diffusion(), geom.ell, t) - 1.0).abs() < 1e-12);
    let amps = [0.5; 4];
    // Recover f_j4 from the bracket by isolating cos((4−j)φ) components.
    let m = 4096;
    let bracket: Vec<f64> = (0..m)
        .map(|i| selective_bracket(&amps, &multipath_core::bath::last_path_damping(4, 1.0), 2.0 * PI * i as f64 / m as f64))
        .collect();
    let coef = |h: usize| -> f64 {
        bracket.iter().enumerate().map(|(i, v)| v * (h as f64 * 2.0 * PI * i as f64 / m as f64).cos()).sum::<f64>()
            * 2.0
            / m as f64
    };
    // cos 3φ: only pair (1,4) contributes −2·(1/4)·f_14.
    assert!((coef(3) + 0.5 * (-9.0_f64).exp()).abs() < 1e-12);
    // cos 2φ: pair (1,3) +2/4, pair (2,4) −2/4·f_24.
    assert!((coef(2) - 0.5 + 0.5 * (-4.0_f64).exp()).abs() < 1e-12);
    // cos φ: pairs (1,2),(2,3) +2/4 each, pair (3,4) −2/4·f_34.
    assert!((coef(1) - 1.0 + 0.5 * (-1.0_f64).exp()).abs() < 1e-12);
}

#[test]
fn pair_damping_cannot_be_factored_out() {
    // n=4, all pairs damped, t = τ_d/2. Fit a single g in 1 + g·S(φ), where
    // S is the undamped oscillating part, by least squares.
    let p = PathConfiguration::equal(4).unwrap();
    let o = DetectorOverlapMatrix::indistinguishable(4).unwrap();
    let damped = DecoherenceSchedule::from_ratio(4, 0.5, DampingScope::AllPairs).unwrap();
    let free = DecoherenceSchedule::undamped(4);
    let m = 2048;
    let phis: Vec<f64> = (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect();
    let target: Vec<f64> = phis.iter().map(|&f| fraunhofer_bracket(&p, &o, &damped, f) - 1.0).collect();
    let basis: Vec<f64> = phis.iter().map(|&f| fraunhofer_bracket(&p, &o, &free, f) - 1.0).collect();
    let g = target.iter().zip(&basis).map(|(a, b)| a * b).sum::<f64>() / basis.iter().map(|b| b * b).sum::<f64>();
    let residual = target.iter().zip(&basis).map(|(a, b)| (a - g * b).abs()).fold(0.0, f64::max);
    assert!(residual > 1e-3, "residual {residual}");
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut sum = f(a) + f(b);
    for i in 1..m {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// ∫ρ dx in closed form: the envelope exp(−2x²/w²) with w = λL/(πε) turns
/// each cos(sφ) term into w√(π/2)·exp(−s²ℓ²/(2ε²)).
fn maxcoherent_mass(geom: &SlitGeometry, alpha: f64, tt: f64) -> f64 {
    let n = geom.n;
    let w = geom.lambda * geom.distance / (PI * geom.eps);
    let mut bracket = 1.0;
    for s in 1..n {
        let sf = s as f64;
        let coef = 2.0 / n as f64 * ((n - 1 - s) as f64 - (-sf * sf * tt).exp());
        bracket += coef * (-sf * sf * geom.ell * geom.ell / (2.0 * geom.eps * geom.eps)).exp();
    }
    w / alpha.sqrt() * bracket
}

#[test]
fn far_field_mass_matches_envelope_oracle() {
    let geom = neon(4);
    let w = geom.lambda * geom.distance / (PI * geom.eps);
    for tt in PATTERN_TIMES {
        let (bath, t) = neon_bath(&geom, tt);
        let alpha = spreading_width(&bath, &geom, t).unwrap();
        let f = |x: f64| screen_density_maxcoherent(&geom, &bath, t, x).unwrap();
        let integral = simpson(f, -12.0 * w, 12.0 * w, 20_000);
        let expected = maxcoherent_mass(&geom, alpha, tt);
        assert!((integral - expected).abs() < 1e-9 * expected, "t/τ={tt}: {integral} vs {expected}");
    }
}

#[test]
fn far_field_pattern_is_normalized_while_decoherence_is_weak() {
    // The envelope width is fixed by the geometry while the prefactor follows
    // the bath-widened α(t), so unit mass only holds until α outgrows w².
    let geom = neon(4);
    let w = geom.lambda * geom.distance / (PI * geom.eps);
    for tt in [0.0, 1.0 / 12.0] {
        let (bath, t) = neon_bath(&geom, tt);
        let f = |x: f64| screen_density_maxcoherent(&geom, &bath, t, x).unwrap();
        let integral = simpson(f, -12.0 * w, 12.0 * w, 20_000);
        assert!((integral - 1.0).abs() < 0.02, "t/τ={tt}: {integral}");
    }
}

#[test]
fn screen_scan_at_t0_matches_phase_scan() {
    use multipath_core::bath::scan_screen_maxcoherent;
    use multipath_core::fringe::ScanAxis;
    use multipath_core::interference::scan_phase;
    for n in 2..=6 {
        let geom = neon(n);
        let (bath, _) = neon_bath(&geom, 0.0);
        let screen = scan_screen_maxcoherent(&geom, &bath, 0.0, 4096).unwrap();
        assert_eq!(screen.axis, ScanAxis::Screen);
        let last = screen.samples.last().unwrap().0;
        assert!(last < geom.fringe_period() && last > 0.99 * geom.fringe_period());
        let phase = scan_phase(n, 1.0, 4096).unwrap();
        assert!((screen.visibility - phase.visibility).abs() < 1e-9, "n={n}");
    }
}
