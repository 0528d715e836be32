//! The `topochain` command line front end.
//!
//! Every command resolves its configuration (JSON file first, flags on top),
//! validates it, computes all results in memory and only then writes its
//! files, each through an atomic rename. A JSON summary is written next to
//! the data files and echoed on stdout. Failures are reported on stderr as a
//! one-line JSON object and mapped to an exit status: 2 for invalid input,
//! 3 for numerical failures, 4 for I/O.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use crate::bloch::{chern_analytic, chern_gauge_link, chern_solid_angle};
use crate::driven::{edge_resonant_theta, reflection_trace, steady_state, DriveConfig, DEFAULT_PROBE_DETUNING};
use crate::error::{Error, ErrorKind, Result};
use crate::lattice::LatticeParams;
use crate::output::{json_f64_array, write_atomic, Cell, CsvTable, JsonReport};
use crate::scattering::{closed_form, pumped_charge, reflection_fisher_lee, DEFAULT_PUMP_SAMPLES};
use crate::spectrum::{default_theta_grid, identify_edge_states, open_spectrum};
use crate::winding::{cycle_grid, ReflectionTrace};
use crate::C64;

/// Upper bound on any grid axis.
pub const MAX_GRID: usize = 4096;
pub const THREADS_ENV: &str = "TOPOCHAIN_THREADS";

const DEFAULT_SOLID_ANGLE_GRID: Grid = Grid { first: 256, second: 256 };
const DEFAULT_LINK_GRID: Grid = Grid { first: 64, second: 64 };
const DEFAULT_WIND_SAMPLES: usize = 257;
const DEFAULT_GREEN_THETAS: usize = 64;
const DEFAULT_GREEN_LENGTHS: [usize; 3] = [20, 40, 60];
const DEFAULT_DRIVE: f64 = 0.1;
/// Deviations below this are treated as converged when checking monotone decay in `L`.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

#[derive(Parser, Debug, Clone)]
#[command(name = "topochain", version, about = "Photonic Chern insulator in a resonator chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Open-chain spectrum over one cycle of theta, plus edge-state profiles.
    Spectrum(Options),
    /// Chern number from the gap condition, the solid angle and gauge links.
    Chern(Options),
    /// Steady-state photon numbers under a single-site drive.
    Steady(Options),
    /// Winding of the dissipative reflection coefficient.
    Wind(Options),
    /// Charge pumped per cycle from the closed-form reflection phase.
    Pump(Options),
    /// Closed-form versus finite-chain reflection as the chain grows.
    #[command(name = "green-verify")]
    GreenVerify(Options),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Chern(_) => "chern",
            Command::Steady(_) => "steady",
            Command::Wind(_) => "wind",
            Command::Pump(_) => "pump",
            Command::GreenVerify(_) => "green-verify",
        }
    }

    pub fn options(&self) -> &Options {
        match self {
            Command::Spectrum(o)
            | Command::Chern(o)
            | Command::Steady(o)
            | Command::Wind(o)
            | Command::Pump(o)
            | Command::GreenVerify(o) => o,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    /// Energies in units of Je (Je is fixed to 1).
    Je,
    /// Energies in absolute units.
    Raw,
}

/// `N` or `NxM`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub first: usize,
    pub second: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| -> std::result::Result<usize, String> {
            let n: usize = t.trim().parse().map_err(|_| format!("bad grid size '{t}'"))?;
            if n == 0 || n > MAX_GRID {
                return Err(format!("grid size {n} outside 1..={MAX_GRID}"));
            }
            Ok(n)
        };
        match s.split_once(['x', 'X']) {
            Some((a, b)) => Ok(Grid { first: parse(a)?, second: parse(b)? }),
            None => {
                let n = parse(s)?;
                Ok(Grid { first: n, second: n })
            }
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct Options {
    /// Flat JSON file with parameter values; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long = "J", allow_negative_numbers = true)]
    pub j: Option<f64>,
    #[arg(long = "Je", allow_negative_numbers = true)]
    pub je: Option<f64>,
    /// Number of resonators (even, at least 4).
    #[arg(long = "L")]
    pub sites: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long = "delta-c", allow_negative_numbers = true)]
    pub delta_c: Option<f64>,
    /// Probe energy inside the gap, measured from the cavity frequency.
    #[arg(long, allow_negative_numbers = true)]
    pub ep: Option<f64>,
    /// Grid size, `N` or `NxM`.
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Output directory (default: current directory).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub unit: Option<Unit>,
    /// Driven site for `steady`.
    #[arg(long)]
    pub drive_site: Option<usize>,
    /// Drive amplitude for `steady`.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
}

/// Contents of a `--config` file. Keys mirror the parameter names.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "J")]
    pub j: Option<f64>,
    pub delta: Option<f64>,
    #[serde(rename = "Je")]
    pub je: Option<f64>,
    #[serde(rename = "DeltaC")]
    pub delta_c: Option<f64>,
    pub kappa: Option<f64>,
    pub theta: Option<f64>,
    #[serde(rename = "L")]
    pub sites: Option<usize>,
    pub g0: Option<f64>,
    #[serde(rename = "DeltaQ")]
    pub delta_q: Option<f64>,
    pub g2_negated: Option<bool>,
    pub lead_hopping: Option<f64>,
    #[serde(rename = "Ep")]
    pub ep: Option<f64>,
    pub grid: Option<String>,
    pub drive_site: Option<usize>,
    pub omega: Option<f64>,
    pub unit: Option<Unit>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings for one command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: LatticeParams,
    /// Whether `theta` and `DeltaC` were given explicitly; some commands pick their own defaults otherwise.
    pub theta_given: bool,
    pub delta_c_given: bool,
    pub ep: f64,
    pub grid: Option<Grid>,
    pub out: PathBuf,
    pub unit: Unit,
    pub drive_site: usize,
    pub omega: f64,
}

impl RunConfig {
    pub fn resolve(opts: &Options) -> Result<Self> {
        let file = match &opts.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let pick = |flag: Option<f64>, file: Option<f64>| flag.or(file);
        let unit = opts.unit.or(file.unit).unwrap_or(Unit::Je);
        let mut p = LatticeParams::default();
        let theta = pick(opts.theta, file.theta);
        let delta_c = pick(opts.delta_c, file.delta_c);
        let je = pick(opts.je, file.je);

        if let Some(v) = pick(opts.j, file.j) {
            p.j = v;
        }
        if let Some(v) = pick(opts.delta, file.delta) {
            p.delta = v;
        }
        if let Some(v) = pick(opts.kappa, file.kappa) {
            p.kappa = v;
        }
        if let Some(v) = theta {
            p.theta = v;
        }
        if let Some(v) = delta_c {
            p.delta_c = v;
        }
        if let Some(v) = opts.sites.or(file.sites) {
            p.sites = v;
        }
        p.g0 = file.g0;
        p.delta_q = file.delta_q;
        p.g2_negated = file.g2_negated.unwrap_or(false);
        p.lead_hopping = file.lead_hopping;
        p.je = match (je, file.g0, file.delta_q) {
            (Some(v), _, _) => v,
            (None, Some(g0), Some(dq)) if dq != 0.0 => g0 * g0 / dq,
            _ => p.je,
        };
        if unit == Unit::Je && p.je != 1.0 {
            return Err(Error::Config(format!(
                "with --unit je every energy is measured in Je, so Je must be 1 (got {}); pass --unit raw",
                p.je
            )));
        }
        p.validate()?;

        let grid = match (opts.grid, &file.grid) {
            (Some(g), _) => Some(g),
            (None, Some(s)) => Some(s.parse::<Grid>().map_err(Error::InvalidGrid)?),
            (None, None) => None,
        };
        let ep = pick(opts.ep, file.ep).unwrap_or(0.0);
        let omega = pick(opts.omega, file.omega).unwrap_or(DEFAULT_DRIVE);
        let drive_site = opts.drive_site.or(file.drive_site).unwrap_or(0);
        if !ep.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidParams("Ep and omega must be finite".into()));
        }
        if drive_site >= p.sites {
            return Err(Error::InvalidParams(format!(
                "drive site {drive_site} outside a chain of {} sites",
                p.sites
            )));
        }
        Ok(Self {
            params: p,
            theta_given: theta.is_some(),
            delta_c_given: delta_c.is_some(),
            ep,
            grid,
            out: opts.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            unit,
            drive_site,
            omega,
        })
    }

    fn samples(&self, default: usize) -> usize {
        self.grid.map_or(default, |g| g.first)
    }
}

/// Everything a command produces, before anything touches the disk.
#[derive(Clone, Debug)]
pub struct Outcome {
    /// `(file name, contents)` pairs written into the output directory.
    pub files: Vec<(String, String)>,
    pub summary: JsonReport,
}

impl Outcome {
    pub fn write(&self, dir: &Path) -> Result<()> {
        for (name, contents) in &self.files {
            write_atomic(&dir.join(name), contents.as_bytes())?;
        }
        Ok(())
    }
}

fn base_summary(command: &str, cfg: &RunConfig) -> JsonReport {
    let p = &cfg.params;
    JsonReport::new()
        .value("command", command)
        .value("unit", if cfg.unit == Unit::Je { "je" } else { "raw" })
        .float("J", p.j)
        .float("delta", p.delta)
        .float("Je", p.je)
        .value("L", p.sites)
}

fn finish(command: &str, summary: JsonReport, mut files: Vec<(String, String)>) -> Outcome {
    let stem = command.replace('-', "_");
    files.push((format!("{stem}.json"), summary.render()));
    Outcome { files, summary }
}

fn trace_table(trace: &ReflectionTrace) -> CsvTable {
    let mut t = CsvTable::new(&["theta", "re_r", "im_r", "phase_unwrapped"]);
    for ((&theta, r), &phase) in trace.theta_grid.iter().zip(&trace.r_values).zip(&trace.unwrapped_phase) {
        t.push(&[Cell::Float(theta), Cell::Float(r.re), Cell::Float(r.im), Cell::Float(phase)]);
    }
    t
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.params;
    let grid = match cfg.grid {
        Some(g) if g.first < 2 => return Err(Error::InvalidGrid("spectrum needs at least 2 angles".into())),
        Some(g) => cycle_grid(g.first),
        None => default_theta_grid(),
    };
    let spec = open_spectrum(p, &grid)?;
    let mut table = CsvTable::new(&["theta", "level", "energy", "in_gap"]);
    for (i, &theta) in spec.theta_grid.iter().enumerate() {
        for (k, (&e, &flag)) in spec.energies[i].iter().zip(&spec.edge_flags[i]).enumerate() {
            table.push(&[Cell::Float(theta), Cell::Int(k as i64), Cell::Float(e), Cell::Flag(flag)]);
        }
    }

    let profile_theta = if cfg.theta_given { p.theta } else { FRAC_PI_2 };
    let mut profile = CsvTable::new(&["state", "energy", "site", "probability"]);
    let mut state_energies = Vec::new();
    match identify_edge_states(p, profile_theta) {
        Ok(states) => {
            for (s, (prof, &e)) in states.profiles.iter().zip(&states.energies).enumerate() {
                state_energies.push(e);
                for (site, &q) in prof.site_probabilities.iter().enumerate() {
                    profile.push(&[Cell::Int(s as i64), Cell::Float(e), Cell::Int(site as i64), Cell::Float(q)]);
                }
            }
        }
        Err(Error::NoInGapState { .. }) => {}
        Err(e) => return Err(e),
    }

    let counts: Vec<usize> = (0..grid.len()).map(|i| spec.edge_count(i)).collect();
    let summary = base_summary("spectrum", cfg)
        .value("theta_points", grid.len())
        .value("angles_with_in_gap_levels", counts.iter().filter(|&&c| c > 0).count())
        .value("max_in_gap_levels", counts.iter().copied().max().unwrap_or(0))
        .float("profile_theta", profile_theta)
        .floats("edge_state_energies", &state_energies);
    Ok(finish(
        "spectrum",
        summary,
        vec![
            ("spectrum.csv".into(), table.render()),
            ("edge_profile.csv".into(), profile.render()),
        ],
    ))
}

pub fn cmd_chern(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.params;
    let analytic = chern_analytic(p)?;
    let (sa_grid, link_grid) = match cfg.grid {
        Some(g) => (g, g),
        None => (DEFAULT_SOLID_ANGLE_GRID, DEFAULT_LINK_GRID),
    };
    let solid = chern_solid_angle(p, sa_grid.first, sa_grid.second)?;
    let link = chern_gauge_link(p, link_grid.first, link_grid.second)?;
    let agreement = solid.rounded == analytic && link.rounded == analytic;
    let summary = base_summary("chern", cfg)
        .value("analytic", analytic)
        .value("solid_angle", solid.rounded)
        .float("solid_angle_value", solid.value)
        .float("solid_angle_error", solid.quantization_error)
        .value("solid_angle_grid", vec![sa_grid.first, sa_grid.second])
        .value("gauge_link", link.rounded)
        .float("gauge_link_value", link.value)
        .value("gauge_link_grid", vec![link_grid.first, link_grid.second])
        .value("agreement", agreement);
    Ok(finish("chern", summary, Vec::new()))
}

pub fn cmd_steady(cfg: &RunConfig) -> Result<Outcome> {
    let delta_c = if cfg.delta_c_given { cfg.params.delta_c } else { DEFAULT_PROBE_DETUNING };
    let theta = if cfg.theta_given { cfg.params.theta } else { edge_resonant_theta(&cfg.params, delta_c) };
    let p = cfg.params.with_detuning(delta_c).with_theta(theta);
    let drive = DriveConfig::single_site(&p, cfg.drive_site, C64::new(cfg.omega, 0.0));
    let s = steady_state(&p, &drive)?;
    let mut table = CsvTable::new(&["site", "photon_number", "re_a", "im_a"]);
    for (j, (&n, a)) in s.photon_numbers.iter().zip(s.amplitudes.iter()).enumerate() {
        table.push(&[Cell::Int(j as i64), Cell::Float(n), Cell::Float(a.re), Cell::Float(a.im)]);
    }
    let summary = base_summary("steady", cfg)
        .float("DeltaC", delta_c)
        .float("theta", theta)
        .float("kappa", p.kappa)
        .value("drive_site", cfg.drive_site)
        .float("omega", cfg.omega)
        .float("total", s.total())
        .value("brightest_site", s.brightest_site());
    Ok(finish("steady", summary, vec![("steady.csv".into(), table.render())]))
}

pub fn cmd_wind(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.params;
    let delta_c = if cfg.delta_c_given { p.delta_c } else { DEFAULT_PROBE_DETUNING };
    let requested = cfg.samples(DEFAULT_WIND_SAMPLES);
    let trace = reflection_trace(p, p.kappa, delta_c, requested)?;
    let summary = base_summary("wind", cfg)
        .float("kappa", p.kappa)
        .float("DeltaC", delta_c)
        .value("winding", trace.winding)
        .float("residual", trace.residual)
        .float("max_step", trace.max_step)
        .value("grid", trace.samples())
        .value("requested_grid", requested);
    Ok(finish("wind", summary, vec![("wind_trace.csv".into(), trace_table(&trace).render())]))
}

pub fn cmd_pump(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.params;
    let chern = chern_analytic(p)?;
    let pump = pumped_charge(p, cfg.ep, cfg.samples(DEFAULT_PUMP_SAMPLES))?;
    let summary = base_summary("pump", cfg)
        .float("DeltaC", p.delta_c)
        .float("Ep", cfg.ep)
        .value("Q", pump.q)
        .value("chern", chern)
        .value("equal", pump.q == chern)
        .float("residual", pump.trace.residual)
        .value("grid", pump.trace.samples());
    Ok(finish("pump", summary, vec![("pump_trace.csv".into(), trace_table(&pump.trace).render())]))
}

/// Chain lengths compared by `green-verify`: the default sweep, or three even lengths up to `L`.
fn green_lengths(cfg: &RunConfig, sites_given: bool) -> Vec<usize> {
    if !sites_given {
        return DEFAULT_GREEN_LENGTHS.to_vec();
    }
    let l = cfg.params.sites;
    let even_up = |n: usize| (n.div_ceil(2) * 2).max(4);
    let mut v = vec![even_up(l.div_ceil(3)), even_up((2 * l).div_ceil(3)), l];
    v.dedup();
    v
}

pub fn cmd_green_verify(cfg: &RunConfig, sites_given: bool) -> Result<Outcome> {
    let p = &cfg.params;
    let n = cfg.samples(DEFAULT_GREEN_THETAS);
    let thetas: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let closed: Vec<C64> = thetas
        .iter()
        .map(|&t| closed_form(p, cfg.ep, t).map(|c| c.reflection))
        .collect::<Result<_>>()?;
    let unimodularity = closed.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    let e = cfg.ep + p.delta_c;

    let lengths = green_lengths(cfg, sites_given);
    let mut deviations = Vec::with_capacity(lengths.len());
    let mut last_numeric = Vec::new();
    for &l in &lengths {
        let numeric: Vec<C64> = thetas
            .iter()
            .map(|&t| reflection_fisher_lee(&p.with_sites(l).with_theta(t), e))
            .collect::<Result<_>>()?;
        let dev = numeric.iter().zip(&closed).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        deviations.push(dev);
        last_numeric = numeric;
    }
    let monotone = deviations.windows(2).all(|w| w[1] <= w[0] || w[1] <= ROUNDOFF_FLOOR);

    let mut table = CsvTable::new(&["theta", "re_closed", "im_closed", "re_fisher_lee", "im_fisher_lee", "deviation"]);
    for ((&t, c), f) in thetas.iter().zip(&closed).zip(&last_numeric) {
        table.push(&[
            Cell::Float(t),
            Cell::Float(c.re),
            Cell::Float(c.im),
            Cell::Float(f.re),
            Cell::Float(f.im),
            Cell::Float((c - f).norm()),
        ]);
    }
    let summary = base_summary("green-verify", cfg)
        .float("DeltaC", p.delta_c)
        .float("Ep", cfg.ep)
        .value("theta_points", n)
        .value("lengths", lengths.clone())
        .value("max_deviation", json_f64_array(&deviations))
        .value("monotone", monotone)
        .float("max_unimodularity_error", unimodularity);
    Ok(finish("green-verify", summary, vec![("green_trace.csv".into(), table.render())]))
}

/// Resolves the configuration and runs a command without writing anything.
pub fn execute(command: &Command) -> Result<Outcome> {
    let opts = command.options();
    let cfg = RunConfig::resolve(opts)?;
    match command {
        Command::Spectrum(_) => cmd_spectrum(&cfg),
        Command::Chern(_) => cmd_chern(&cfg),
        Command::Steady(_) => cmd_steady(&cfg),
        Command::Wind(_) => cmd_wind(&cfg),
        Command::Pump(_) => cmd_pump(&cfg),
        Command::GreenVerify(_) => {
            let file_sites = match &opts.config {
                Some(path) => ConfigFile::load(path)?.sites.is_some(),
                None => false,
            };
            cmd_green_verify(&cfg, opts.sites.is_some() || file_sites)
        }
    }
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Validation => 2,
        ErrorKind::Numerical => 3,
        ErrorKind::Io => 4,
    }
}

/// One-line JSON description of an error, as printed on stderr.
pub fn error_report(e: &Error) -> String {
    let kind = match e.kind() {
        ErrorKind::Validation => "validation",
        ErrorKind::Numerical => "numerical",
        ErrorKind::Io => "io",
    };
    let v: Value = serde_json::json!({ "error": e.code(), "kind": kind, "message": e.to_string() });
    v.to_string()
}

/// Sizes the global worker pool from `TOPOCHAIN_THREADS`, if set.
pub fn configure_threads_from_env() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot size the thread pool: {e}")))
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = configure_threads_from_env().and_then(|()| {
        let outcome = execute(&cli.command)?;
        let dir = RunConfig::resolve(cli.command.options())?.out;
        outcome.write(&dir)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary.render());
            0
        }
        Err(e) => {
            eprintln!("{}", error_report(&e));
            exit_code(e.kind())
        }
    }
}
