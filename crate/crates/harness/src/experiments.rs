//! The figure reproductions and ad-hoc sweeps behind each subcommand.

use multipath_core::bath::{
    decoherence_ratio, last_path_damping, screen_density_exact, screen_density_fraunhofer,
    screen_density_selective, selective_bracket, spreading_width, BathParameters, SlitGeometry,
};
use multipath_core::constants::{BOLTZMANN, HBAR, PLANCK};
use multipath_core::fringe::{scan_periodic, DEFAULT_SAMPLES};
use multipath_core::interference::{scan_configuration, sweep_beta_sampled, unit_grid};
use multipath_core::metrology::{coherence_decay, pairwise_visibility_coherence, visibility_vs_time_sampled};
use multipath_core::quanton::{build_reduced_density, l1_coherence, DetectorOverlapMatrix, PathConfiguration};
use serde_json::{json, Map, Value};

use crate::config::{ScreenModel, Settings};
use crate::error::{core, HarnessError, Result};
use crate::table::{num, nums, Check, Table};

pub const FIG4_TIMES: [f64; 5] = [0.0, 1.0 / 12.0, 0.25, 0.5, 2.0];
pub const FIG4_SAMPLES: usize = 2048;
pub const FIGURE_N: [usize; 4] = [3, 4, 5, 6];
pub const BETA_POINTS: usize = 101;
pub const TIME_POINTS: usize = 121;
pub const TIME_MAX: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Scan,
    Screen,
    Decay,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Scan => "scan",
            Self::Screen => "screen",
            Self::Decay => "decay",
        }
    }
}

/// The tables of one run plus metadata shared by all of them.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub experiment: Experiment,
    pub meta: Map<String, Value>,
    pub tables: Vec<Table>,
}

pub fn run(experiment: Experiment, settings: &Settings) -> Result<RunOutput> {
    let tables = match experiment {
        Experiment::Fig2 | Experiment::Fig3 => beta_sweeps(experiment.name(), settings)?,
        Experiment::Fig4 => fig4(settings)?,
        Experiment::Fig5 => fig5(settings)?,
        Experiment::Scan => vec![phase_scan(settings)?],
        Experiment::Screen => vec![screen_scan(settings)?],
        Experiment::Decay => decay(settings)?,
    };
    Ok(RunOutput { experiment, meta: shared_meta(experiment, settings), tables })
}

fn shared_meta(experiment: Experiment, s: &Settings) -> Map<String, Value> {
    let opt = |v: Option<f64>| v.map_or(Value::Null, num);
    let config = json!({
        "geometry": { "ell": num(s.ell), "eps": num(s.eps), "lambda": num(s.lambda), "distance": num(s.distance) },
        "bath": {
            "temperature": num(s.temperature),
            "mass": num(s.mass),
            "gamma": opt(s.gamma),
            "t": opt(s.flight_time),
            "t_over_tau": s.t_over_tau.as_deref().map_or(Value::Null, nums),
        },
        "paths": {
            "n": s.n.clone().map_or(Value::Null, Value::from),
            "beta": opt(s.beta),
            "pi_path": s.pi_path.map_or(Value::Null, |p| Value::from(p.map_or(0, |i| i + 1))),
            "amplitudes": s.amplitudes.as_deref().map_or(Value::Null, nums),
        },
        "sweep": {
            "samples": s.samples.map_or(Value::Null, Value::from),
            "points": s.points.map_or(Value::Null, Value::from),
            "t_max": opt(s.t_max),
            "x_periods": num(s.x_periods),
            "model": s.model.as_str(),
        },
    });
    let mut meta = Map::new();
    meta.insert("command".into(), experiment.name().into());
    meta.insert("config".into(), config);
    meta.insert(
        "constants".into(),
        json!({ "hbar": num(HBAR), "planck": num(PLANCK), "boltzmann": num(BOLTZMANN) }),
    );
    meta
}

/// `points` values from `a` to `b` inclusive, endpoints exact.
pub fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    unit_grid(points).into_iter().map(|u| if u == 1.0 { b } else { a + (b - a) * u }).collect()
}

fn time_grid(s: &Settings) -> Result<Vec<f64>> {
    let grid = match &s.t_over_tau {
        Some(list) => list.clone(),
        None => linspace(0.0, s.t_max.unwrap_or(TIME_MAX), s.points.unwrap_or(TIME_POINTS)),
    };
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HarnessError::validation("bath.t_over_tau", "time grid must be strictly increasing"));
    }
    Ok(grid)
}

fn reject_gamma(s: &Settings, command: &str) -> Result<()> {
    if s.gamma.is_some() {
        return Err(HarnessError::validation("bath.gamma", format!("{command} is parameterized by t_over_tau")));
    }
    Ok(())
}

fn geometry(s: &Settings, n: usize) -> Result<SlitGeometry> {
    SlitGeometry::new(n, s.ell, s.eps, s.lambda, s.distance).map_err(core("geometry"))
}

fn magnitudes(s: &Settings, n: usize) -> Vec<f64> {
    s.amplitudes.clone().unwrap_or_else(|| vec![1.0 / (n as f64).sqrt(); n])
}

/// Path configuration from the settings: given or equal magnitudes, π on
/// the last path unless configured otherwise.
fn paths(s: &Settings, n: usize) -> Result<PathConfiguration> {
    let p = PathConfiguration::from_magnitudes(&magnitudes(s, n)).map_err(core("paths.amplitudes"))?;
    match s.pi_path.unwrap_or(Some(n - 1)) {
        Some(i) => p.with_pi_path(i).map_err(core("paths.pi_path")),
        None => Ok(p),
    }
}

fn beta_sweeps(name: &str, s: &Settings) -> Result<Vec<Table>> {
    let ns = s.n.clone().unwrap_or_else(|| FIGURE_N.to_vec());
    let grid = unit_grid(s.points.unwrap_or(BETA_POINTS));
    let samples = s.samples.unwrap_or(DEFAULT_SAMPLES);
    ns.iter()
        .map(|&n| {
            let sweep = sweep_beta_sampled(n, &grid, samples).map_err(core("beta sweep"))?;
            let mut t = Table::new(
                format!("{name}_n{n}"),
                vec![("one_path_knowledge", Check::Unit), ("visibility", Check::Unit), ("coherence", Check::Unit)],
            );
            for row in sweep.rows.iter().rev() {
                t.push(vec![row.one_path_knowledge, row.visibility, row.coherence]);
            }
            t.meta.insert("n".into(), n.into());
            t.meta.insert("samples".into(), samples.into());
            Ok(t)
        })
        .collect()
}

struct ScreenSetup {
    geom: SlitGeometry,
    flight_time: f64,
    xs: Vec<f64>,
}

fn screen_setup(s: &Settings, n: usize, check_far_field: bool) -> Result<ScreenSetup> {
    let geom = geometry(s, n)?;
    if check_far_field {
        geom.check_fraunhofer().map_err(core("geometry"))?;
    }
    let flight_time = s.flight_time.unwrap_or_else(|| geom.flight_time(s.mass));
    let half = s.x_periods * geom.fringe_period();
    let xs = linspace(-half, half, s.samples.unwrap_or(FIG4_SAMPLES));
    Ok(ScreenSetup { geom, flight_time, xs })
}

fn bath_for_ratio(s: &Settings, setup: &ScreenSetup, t_over_tau: f64) -> Result<BathParameters> {
    BathParameters::for_decoherence_ratio(t_over_tau, setup.flight_time, s.temperature, s.mass, s.ell)
        .map_err(core("bath"))
}

fn bath_meta(t: &mut Table, bath: &BathParameters, setup: &ScreenSetup) -> Result<()> {
    let alpha = spreading_width(bath, &setup.geom, setup.flight_time).map_err(core("spreading width"))?;
    t.meta.insert("gamma".into(), num(bath.gamma()));
    t.meta.insert("diffusion".into(), num(bath.diffusion()));
    t.meta.insert("flight_time".into(), num(setup.flight_time));
    t.meta.insert("spreading_width".into(), num(alpha));
    Ok(())
}

fn fig4(s: &Settings) -> Result<Vec<Table>> {
    reject_gamma(s, "fig4")?;
    let n = s.single_n(4)?;
    let times = s.t_over_tau.clone().unwrap_or_else(|| FIG4_TIMES.to_vec());
    let setup = screen_setup(s, n, true)?;
    let mags = magnitudes(s, n);
    let density = |bath: &BathParameters, x: f64| {
        screen_density_selective(&setup.geom, &mags, bath, setup.flight_time, x).map_err(core("screen density"))
    };
    let reference = density(&bath_for_ratio(s, &setup, 0.0)?, 0.0)?;
    if reference.is_nan() || reference <= 0.0 {
        return Err(HarnessError::validation("geometry", format!("reference density ρ(0,0,0) = {reference}")));
    }

    let samples = s.samples.unwrap_or(FIG4_SAMPLES);
    let mut tables = Vec::new();
    let mut summary = Table::new("fig4_visibility", vec![("t_over_tau", Check::Finite), ("visibility", Check::Unit)]);
    for &tt in &times {
        let bath = bath_for_ratio(s, &setup, tt)?;
        let rho: Vec<f64> = setup.xs.iter().map(|&x| density(&bath, x)).collect::<Result<_>>()?;
        let peak = rho.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut t = Table::new(
            format!("fig4_tt{tt:.6}"),
            vec![
                ("x", Check::Finite),
                ("density", Check::NonNegative),
                ("ratio", Check::NonNegative),
                ("normalized", Check::NonNegative),
            ],
        );
        for (&x, &r) in setup.xs.iter().zip(&rho) {
            t.push(vec![x, r, r / reference, r / peak]);
        }
        let ratio = decoherence_ratio(bath.diffusion(), s.ell, setup.flight_time);
        let damping = last_path_damping(n, ratio);
        let visibility = scan_periodic(|phi| selective_bracket(&mags, &damping, phi), DEFAULT_SAMPLES)
            .map_err(core("fringe scan"))?
            .visibility;
        t.meta.insert("n".into(), n.into());
        t.meta.insert("t_over_tau".into(), num(tt));
        t.meta.insert("visibility".into(), num(visibility));
        t.meta.insert("reference_density".into(), num(reference));
        t.meta.insert("x_range".into(), nums(&[setup.xs[0], setup.xs[setup.xs.len() - 1]]));
        t.meta.insert("samples".into(), samples.into());
        bath_meta(&mut t, &bath, &setup)?;
        summary.push(vec![tt, visibility]);
        tables.push(t);
    }
    summary.meta.insert("n".into(), n.into());
    tables.push(summary);
    Ok(tables)
}

fn fig5(s: &Settings) -> Result<Vec<Table>> {
    reject_gamma(s, "fig5")?;
    let ns = s.n.clone().unwrap_or_else(|| FIGURE_N.to_vec());
    let grid = time_grid(s)?;
    let samples = s.samples.unwrap_or(DEFAULT_SAMPLES);
    ns.iter()
        .map(|&n| {
            let rows = visibility_vs_time_sampled(n, &grid, samples).map_err(core("visibility vs time"))?;
            let mut t = Table::new(
                format!("fig5_n{n}"),
                vec![("t_over_tau", Check::Finite), ("visibility", Check::Unit), ("coherence", Check::Unit)],
            );
            for r in rows {
                t.push(vec![r.t_over_tau, r.visibility, r.coherence]);
            }
            t.meta.insert("n".into(), n.into());
            t.meta.insert("samples".into(), samples.into());
            Ok(t)
        })
        .collect()
}

fn phase_scan(s: &Settings) -> Result<Table> {
    let n = s.single_n(4)?;
    let beta = s.beta.unwrap_or(1.0);
    let samples = s.samples.unwrap_or(DEFAULT_SAMPLES);
    let p = paths(s, n)?;
    let o = DetectorOverlapMatrix::one_path_knowledge(n, beta).map_err(core("paths.beta"))?;
    let scan = scan_configuration(&p, &o, samples).map_err(core("phase scan"))?;
    let coherence = l1_coherence(&build_reduced_density(&p, &o).map_err(core("reduced density"))?);
    let mut t = Table::new("scan", vec![("theta", Check::Finite), ("intensity", Check::NonNegative)]);
    for &(theta, i) in &scan.samples {
        t.push(vec![theta, i]);
    }
    t.meta.insert("n".into(), n.into());
    t.meta.insert("beta".into(), num(beta));
    t.meta.insert("pi_path".into(), p.pi_path().map_or(0, |i| i + 1).into());
    t.meta.insert("i_max".into(), num(scan.i_max));
    t.meta.insert("i_min".into(), num(scan.i_min));
    t.meta.insert("visibility".into(), num(scan.visibility));
    t.meta.insert("coherence".into(), num(coherence));
    Ok(t)
}

fn screen_scan(s: &Settings) -> Result<Table> {
    let n = s.single_n(4)?;
    let setup = screen_setup(s, n, s.model != ScreenModel::Exact)?;
    let bath = match (s.gamma, s.single_t_over_tau()?) {
        (Some(gamma), None) => BathParameters::new(gamma, s.temperature, s.mass).map_err(core("bath"))?,
        (None, tt) => bath_for_ratio(s, &setup, tt.unwrap_or(0.0))?,
        (Some(_), Some(_)) => return Err(HarnessError::validation("bath", "give either gamma or t_over_tau, not both")),
    };
    let t_flight = setup.flight_time;
    let beta = s.beta.unwrap_or(1.0);
    let rho: Vec<f64> = match s.model {
        ScreenModel::Selective => {
            let mags = magnitudes(s, n);
            setup
                .xs
                .iter()
                .map(|&x| screen_density_selective(&setup.geom, &mags, &bath, t_flight, x))
                .collect::<std::result::Result<_, _>>()
        }
        ScreenModel::Fraunhofer | ScreenModel::Exact => {
            let p = paths(s, n)?;
            let o = DetectorOverlapMatrix::one_path_knowledge(n, beta).map_err(core("paths.beta"))?;
            let f = if s.model == ScreenModel::Exact { screen_density_exact } else { screen_density_fraunhofer };
            setup.xs.iter().map(|&x| f(&setup.geom, &p, &o, &bath, t_flight, x)).collect()
        }
    }
    .map_err(core("screen density"))?;

    let mut t = Table::new("screen", vec![("x", Check::Finite), ("density", Check::NonNegative)]);
    for (&x, &r) in setup.xs.iter().zip(&rho) {
        t.push(vec![x, r]);
    }
    t.meta.insert("n".into(), n.into());
    t.meta.insert("model".into(), s.model.as_str().into());
    if s.model != ScreenModel::Selective {
        t.meta.insert("beta".into(), num(beta));
    }
    t.meta.insert("t_over_tau".into(), num(decoherence_ratio(bath.diffusion(), s.ell, t_flight)));
    t.meta.insert("fraunhofer_ratio".into(), num(setup.geom.fraunhofer_ratio()));
    bath_meta(&mut t, &bath, &setup)?;
    Ok(t)
}

fn decay(s: &Settings) -> Result<Vec<Table>> {
    reject_gamma(s, "decay")?;
    let ns = s.n.clone().unwrap_or_else(|| FIGURE_N.to_vec());
    let grid = time_grid(s)?;
    ns.iter()
        .map(|&n| {
            let mags = magnitudes(s, n);
            let mut t = Table::new(
                format!("decay_n{n}"),
                vec![("t_over_tau", Check::Finite), ("coherence", Check::Unit), ("pairwise", Check::Unit)],
            );
            for &tt in &grid {
                let c = coherence_decay(n, tt).map_err(core("coherence decay"))?;
                let p = pairwise_visibility_coherence(&mags, &last_path_damping(n, tt)).map_err(core("pairwise protocol"))?;
                t.push(vec![tt, c, p]);
            }
            t.meta.insert("n".into(), n.into());
            Ok(t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{FileConfig, Overrides};

    fn settings(text: &str) -> Settings {
        Settings::resolve(FileConfig::parse(text).unwrap(), Overrides::default()).unwrap()
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-3.0, 3.0, 7);
        assert_eq!(g, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn fig2_endpoints() {
        let out = run(Experiment::Fig2, &settings("[paths]\nn = [3, 4]\n[sweep]\npoints = 11\n")).unwrap();
        let n3 = &out.tables[0];
        let v = n3.column("visibility").unwrap();
        assert!((v[0] - 2.0 / 3.0).abs() < 1e-6 && (v[10] - 2.0 / 3.0).abs() < 1e-6);
        let k = n3.column("one_path_knowledge").unwrap();
        assert_eq!((k[0], k[10]), (0.0, 1.0));
        let c = out.tables[1].column("coherence").unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12 && (c[10] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phase_scan_shape() {
        let t = phase_scan(&settings("[paths]\nn = 5\nbeta = 0.4\n")).unwrap();
        assert_eq!(t.rows.len(), 4096);
        assert_eq!(t.meta["pi_path"], 5);
    }

    #[test]
    fn fig4_reference_and_enhancement() {
        let out = run(Experiment::Fig4, &settings("[sweep]\nsamples = 512\n")).unwrap();
        assert_eq!(out.tables.len(), 6);
        let first = &out.tables[0];
        let normalized = first.column("normalized").unwrap();
        assert_eq!(normalized.iter().copied().fold(0.0, f64::max), 1.0);
        let vis = out.tables[5].column("visibility").unwrap();
        assert!(vis[4] > vis[0]);
    }

    #[test]
    fn gamma_and_ratio_modes_agree() {
        let ratio_mode = screen_scan(&settings("[bath]\nt_over_tau = 0.5\n[sweep]\nsamples = 256\n")).unwrap();
        let gamma = ratio_mode.meta["gamma"].as_f64().unwrap();
        let direct = screen_scan(&settings(&format!("[bath]\ngamma = {gamma:e}\n[sweep]\nsamples = 256\n"))).unwrap();
        for (a, b) in ratio_mode.rows.iter().zip(&direct.rows) {
            assert_eq!(a[0], b[0]);
            assert!((a[1] - b[1]).abs() <= 1e-12 * a[1].abs().max(1.0));
        }
    }

    #[test]
    fn far_field_violation_is_reported() {
        let s = settings("[geometry]\neps = 1e-4\nell = 1e-4\n");
        let err = screen_scan(&s).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        // The exact model needs no far-field approximation.
        let s = settings("[geometry]\neps = 1e-4\nell = 1e-4\n[sweep]\nmodel = \"exact\"\nsamples = 256\n");
        assert!(screen_scan(&s).is_ok());
    }
}
