//! Command implementations behind the `visector` binary.
//!
//! Each command returns an exit code on success and a [`CliError`] carrying
//! the exit code on failure, so the commands can be driven from tests
//! without spawning processes.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use visector_core::antenna::{
    design_search, side_lobe_level, write_cut_csv, write_grid_csv, ArrayModel, Cut, GainPattern, SearchLattice,
};
use visector_core::traffic::{write_events, write_flows_csv, write_kpis_csv, write_summary_csv, RunOutput, Scenario};
use visector_core::units::{fmt_sig9, linear_to_db};
use visector_core::{ArrayDesign, Deployment, Error, RadioMode, ScenarioConfig, Steering};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_SLL_VIOLATION: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn config(e: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }

    fn runtime(e: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_RUNTIME,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult = Result<u8, CliError>;

/// Loads `path`, or the built-in reference scenario when absent.
pub fn load_config(path: Option<&Path>) -> Result<ScenarioConfig, CliError> {
    match path {
        Some(p) => ScenarioConfig::load(p).map_err(CliError::config),
        None => Ok(ScenarioConfig::paper()),
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", path.display())))
}

fn write_file(dir: &Path, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> visector_core::Result<()>) -> Result<(), CliError> {
    let mut w = create(dir, name)?;
    f(&mut w).map_err(CliError::runtime)?;
    w.flush()
        .map_err(|e| CliError::runtime(format!("writing {name}: {e}")))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))
}

#[derive(Debug, Clone, Args)]
pub struct AntennaArgs {
    /// Scenario file providing the default array design.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub n_x: Option<usize>,
    #[arg(long)]
    pub n_z: Option<usize>,
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long)]
    pub dz: Option<f64>,
    #[arg(long)]
    pub taper_x: Option<f64>,
    #[arg(long)]
    pub taper_z: Option<f64>,
    /// Downward beam tilt from the horizon, degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub vertical_tilt: f64,
    /// Beam azimuth offset from boresight, degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub horizontal_tilt: f64,
    /// Side-lobe constraint, dB relative to the peak.
    #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
    pub sll_max: f64,
    /// Search the taper ratios for the highest-gain design meeting the
    /// constraint over the full steering envelope, then report that design.
    #[arg(long)]
    pub search: bool,
}

fn antenna_design(args: &AntennaArgs, cfg: &ScenarioConfig) -> visector_core::Result<ArrayDesign> {
    let a = &cfg.array;
    ArrayDesign::new(
        args.n_x.unwrap_or(a.n_x),
        args.n_z.unwrap_or(a.n_z),
        args.dx.unwrap_or(a.dx_over_lambda),
        args.dz.unwrap_or(a.dz_over_lambda),
        args.taper_x.unwrap_or(a.taper_ratio_x),
        args.taper_z.unwrap_or(a.taper_ratio_z),
    )
}

/// Pattern cuts, full grid and side-lobe report. Exit 2 when the side-lobe
/// constraint is violated.
pub fn cmd_antenna(args: &AntennaArgs) -> CliResult {
    let cfg = load_config(args.config.as_deref())?;
    if args.sll_max > 0.0 {
        return Err(CliError::config(format!("--sll-max {} must be <= 0 dB", args.sll_max)));
    }
    let mut design = antenna_design(args, &cfg).map_err(CliError::config)?;
    let grid = cfg.array.grid().map_err(CliError::config)?;
    let steering =
        Steering::from_tilts_deg(args.vertical_tilt, args.horizontal_tilt).map_err(CliError::config)?;
    let mut report = Vec::new();

    if args.search {
        let envelope = Deployment::verified_envelope();
        let lattice = SearchLattice::tapers_only(&design, &SearchLattice::DEFAULT_TAPERS);
        match design_search(&design, &envelope, args.sll_max, &lattice, &grid) {
            Ok(found) => {
                design = found.best.design;
                report.push(format!("search_evaluated = {}", found.evaluated));
                report.push(format!("search_feasible = {}", found.feasible));
                report.push(format!("search_corner_sll_db = {}", fmt_sig9(found.best.sll_db)));
            }
            Err(Error::Infeasible(msg)) => {
                println!("no design meets {} dB: {msg}", args.sll_max);
                return Ok(EXIT_SLL_VIOLATION);
            }
            Err(e) => return Err(CliError::runtime(e)),
        }
    }

    let pattern = GainPattern::compute(&design, &steering, &grid).map_err(CliError::runtime)?;
    let sll = side_lobe_level(&pattern);
    let model = ArrayModel::new(design, steering).map_err(CliError::runtime)?;
    ensure_dir(&args.out)?;
    write_file(&args.out, "pattern_grid.csv", |w| write_grid_csv(&pattern, w))?;
    write_file(&args.out, "cut_e_plane.csv", |w| write_cut_csv(&model, pattern.g0, Cut::EPlane, 0.1, w))?;
    write_file(&args.out, "cut_h_plane.csv", |w| write_cut_csv(&model, pattern.g0, Cut::HPlane, 0.1, w))?;

    let pass = sll <= args.sll_max;
    let mut lines = vec![
        format!("n_x = {}", design.n_x),
        format!("n_z = {}", design.n_z),
        format!("dx_over_lambda = {}", fmt_sig9(design.dx_over_lambda)),
        format!("dz_over_lambda = {}", fmt_sig9(design.dz_over_lambda)),
        format!("taper_ratio_x = {}", fmt_sig9(design.taper_ratio_x)),
        format!("taper_ratio_z = {}", fmt_sig9(design.taper_ratio_z)),
        format!("theta_e_deg = {}", fmt_sig9(steering.theta_e.to_degrees())),
        format!("phi_e_deg = {}", fmt_sig9(steering.phi_e.to_degrees())),
        format!("g0_dbi = {}", fmt_sig9(linear_to_db(pattern.g0))),
        format!("sll_db = {}", fmt_sig9(sll)),
        format!("sll_constraint_db = {}", fmt_sig9(args.sll_max)),
        format!("pass = {pass}"),
    ];
    lines.append(&mut report);
    write_file(&args.out, "antenna_report.txt", |w| {
        for l in &lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    })?;
    for l in &lines {
        println!("{l}");
    }
    Ok(if pass { EXIT_OK } else { EXIT_SLL_VIOLATION })
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; defaults to the scenario's.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pixel size in metres; defaults to the scenario's.
    #[arg(long)]
    pub resolution: Option<f64>,
}

/// Serving-cell raster as CSV and PGM.
pub fn cmd_map(args: &MapArgs) -> CliResult {
    let cfg = load_config(args.config.as_deref())?;
    let out = args.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    let resolution = args.resolution.unwrap_or(cfg.map.resolution_m);
    if !(resolution > 0.0) {
        return Err(CliError::config(format!("--resolution {resolution} must be positive")));
    }
    let scenario = Scenario::build(&cfg).map_err(CliError::config)?;
    let map = scenario.serving_map(resolution).map_err(CliError::runtime)?;
    ensure_dir(&out)?;
    write_file(&out, "serving_map.csv", |w| map.write_csv(w))?;
    write_file(&out, "serving_map.pgm", |w| map.write_pgm(w))?;
    println!(
        "{} x {} pixels, {} serving cells",
        map.nx,
        map.ny,
        map.distinct().len()
    );
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Baseline,
    Reuse1,
    Sharing,
    All,
}

impl ModeArg {
    pub fn modes(self) -> Vec<RadioMode> {
        match self {
            ModeArg::Baseline => vec![RadioMode::Baseline],
            ModeArg::Reuse1 => vec![RadioMode::ReuseOne],
            ModeArg::Sharing => vec![RadioMode::BandwidthSharing],
            ModeArg::All => RadioMode::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Modes to simulate; defaults to the scenario's list.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Simulated time in seconds; defaults to the scenario's.
    #[arg(long)]
    pub duration: Option<f64>,
}

/// Applies command-line overrides to the scenario and validates it.
pub fn resolve_run_config(args: &RunArgs) -> Result<ScenarioConfig, CliError> {
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(m) = args.mode {
        cfg.modes = m.modes();
    }
    if let Some(o) = &args.out {
        cfg.output_dir = o.clone();
    }
    if let Some(d) = args.duration {
        cfg.duration_s = d;
    }
    cfg.validate().map_err(CliError::config)?;
    Ok(cfg)
}

/// Runs every requested mode with the same seed and writes per-mode KPI and
/// flow tables, a summary and a manifest of the files written.
pub fn cmd_run(args: &RunArgs) -> CliResult {
    let cfg = resolve_run_config(args)?;
    let scenario = Scenario::build(&cfg).map_err(CliError::config)?;
    let results: Vec<(RadioMode, visector_core::Result<RunOutput>)> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .modes
            .iter()
            .map(|&m| {
                let scenario = &scenario;
                let seed = cfg.seed;
                (m, s.spawn(move || scenario.run(m, seed)))
            })
            .collect();
        handles
            .into_iter()
            .map(|(m, h)| (m, h.join().expect("simulation thread panicked")))
            .collect()
    });

    let out = &cfg.output_dir;
    ensure_dir(out)?;
    let mut manifest = Vec::new();
    let mut summary = Vec::new();
    for (mode, result) in results {
        let run = result.map_err(|e| CliError::runtime(format!("{mode}: {e}")))?;
        let kpis = format!("kpis_{mode}.csv");
        write_file(out, &kpis, |w| write_kpis_csv(&run.kpis, w))?;
        manifest.push(kpis);
        let flows = format!("flows_{mode}.csv");
        write_file(out, &flows, |w| write_flows_csv(&run.flows, w))?;
        manifest.push(flows);
        if let Some(events) = &run.events {
            let name = format!("events_{mode}.log");
            write_file(out, &name, |w| write_events(events, w))?;
            manifest.push(name);
        }
        summary.push((mode, run.kpis.summary()));
        println!(
            "{mode}: {} arrivals, {} completed, {} active at end",
            run.stats.arrivals, run.stats.departures, run.stats.active_at_end
        );
    }
    write_file(out, "summary.csv", |w| write_summary_csv(&summary, w))?;
    manifest.push("summary.csv".into());
    let resolved = cfg.to_toml_string().map_err(CliError::runtime)?;
    write_file(out, "scenario.toml", |w| Ok(w.write_all(resolved.as_bytes())?))?;
    manifest.push("scenario.toml".into());
    write_file(out, "manifest.txt", |w| {
        for m in &manifest {
            writeln!(w, "{m}")?;
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}
