//! Command-line harness: point cloud generation, exponent and spectrum
//! estimation, closed forms, comparison reports and plots.

pub mod config;
pub mod csvio;
pub mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kleinian_spectra::empirical::{
    estimate_box_dimension, estimate_spectrum, measure_spectrum_sweep, CenterStrategy, CoveringMethod,
    EstimatorConfig, SpectrumSide,
};
use kleinian_spectra::formulas::{
    closed_form_profile, lattice_spectrum, Source, SpectralParameters, SpectrumKind, SpectrumProfile,
};
use kleinian_spectra::group::{enumerate_orbit, presets, GroupPresentation, OrbitPoint};
use kleinian_spectra::hyperbolic::{Model, ModelPoint};
use kleinian_spectra::measure::{CuspGeometry, MeasureModel};
use kleinian_spectra::poincare::{default_threshold_grid, estimate_delta, orbit_counting_curve};
use kleinian_spectra::sampler::{
    sample_limit_set, sample_limit_set_adaptive, synth_inverted_lattice, synth_reciprocal_set, PointCloud,
    DEFAULT_ADAPTIVE_CAP,
};
use kleinian_spectra::Error;

use config::{parse_theta_grid, Settings};
use csvio::fmt_num;

/// Failure with its exit code: 1 for a failed comparison, 2 for invalid
/// input, 3 for estimator or data errors.
#[derive(Debug)]
pub enum CliError {
    CompareFailed(String),
    Validation(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CompareFailed(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::CompareFailed(m) => write!(f, "comparison failed: {m}"),
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Data(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Contract(_) | Error::Validation(_) => CliError::Validation(e.to_string()),
            Error::CapExceeded { .. } | Error::Geometry(_) | Error::Estimator(_) => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "kleinian-spectra", version, about = "Dimension spectra of limit sets and Patterson-Sullivan measures")]
struct Cli {
    /// Worker threads for parallel stages (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Settings file of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a point cloud for a preset group or reference set.
    Gen(GenArgs),
    /// Estimate the critical exponent of a preset group.
    Delta(DeltaArgs),
    /// Estimate a spectrum from a cloud, or a measure spectrum from a cusp geometry.
    Spectrum(SpectrumArgs),
    /// Evaluate a closed-form profile.
    Formula(FormulaArgs),
    /// Compare an empirical profile against a closed form.
    Compare(CompareArgs),
    /// Plot profiles as SVG.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Default)]
struct PresetArgs {
    /// identity, cyclic-parabolic, two-parabolic, schottky, reciprocal, inverted-lattice
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Translation length of the Schottky generators.
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    max_word_len: Option<usize>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    preset: PresetArgs,
    /// Truncation of the reference sets.
    #[arg(long)]
    n: Option<usize>,
    /// Lattice rank of the inverted lattice.
    #[arg(long)]
    k: Option<usize>,
    /// Stop subdividing cylinders narrower than this (adaptive sampling).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DeltaArgs {
    #[command(flatten)]
    preset: PresetArgs,
    /// Number of counting thresholds on [0, T_sat].
    #[arg(long)]
    grid_points: Option<usize>,
    /// CSV file to append the estimate to.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, conflicts_with = "geometry")]
    cloud: Option<PathBuf>,
    /// Synthetic cusp geometry; gives measure spectra.
    #[arg(long)]
    geometry: Option<PathBuf>,
    /// assouad, lower, or box (clouds only)
    #[arg(long)]
    kind: Option<String>,
    /// `a,b,c`, `start:stop:step` or `default`
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    scales_per_decade: Option<usize>,
    /// `all` or the maximal number of centres per scale
    #[arg(long)]
    centers: Option<String>,
    /// grid, exact, or auto (exact on the line)
    #[arg(long)]
    method: Option<String>,
    /// Exponent of the measure model (geometry only).
    #[arg(long)]
    delta: Option<f64>,
    /// Times `T` of the measure sweep, comma separated (geometry only).
    #[arg(long)]
    times: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct FormulaParams {
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    k_min: Option<u32>,
    #[arg(long)]
    k_max: Option<u32>,
    /// Boundary dimension; defaults to max(k_max, ⌈δ⌉).
    #[arg(long)]
    d: Option<u32>,
    /// Lattice rank for the `lattice` target.
    #[arg(long)]
    k: Option<u32>,
    /// set-assouad, set-lower, mu-assouad, mu-lower, mu-box, set-box, lattice
    #[arg(long)]
    target: Option<String>,
}

#[derive(Args, Debug)]
struct FormulaArgs {
    #[command(flatten)]
    params: FormulaParams,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Empirical profile CSV.
    #[arg(long)]
    profile: PathBuf,
    #[command(flatten)]
    params: FormulaParams,
    /// θ grid the comparison is meant for; must match the profile's.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Profile CSVs, one polyline each.
    #[arg(required = true)]
    profiles: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let settings = match &cli.config {
        Some(p) => Settings::from_file_text(&read_text(p)?)?,
        None => Settings::default(),
    };
    let work = move || match cli.command {
        Command::Gen(a) => cmd_gen(a, settings),
        Command::Delta(a) => cmd_delta(a, settings),
        Command::Spectrum(a) => cmd_spectrum(a, settings),
        Command::Formula(a) => cmd_formula(a, settings),
        Command::Compare(a) => cmd_compare(a, settings),
        Command::Plot(a) => cmd_plot(a),
    };
    match cli.threads {
        Some(0) => Err(CliError::Validation("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Data(format!("cannot start thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn group_preset(a: &PresetArgs, s: &mut Settings, name: &str) -> Result<GroupPresentation, CliError> {
    Ok(match name {
        "identity" => presets::identity(),
        "cyclic-parabolic" => presets::cyclic_parabolic(),
        "two-parabolic" => {
            let l = s.f64("lambda", a.lambda, Some(4.0))?.unwrap();
            let c = s.f64("c", a.c, Some(4.0))?.unwrap();
            presets::two_parabolic(l, c)?
        }
        "schottky" => {
            let ell = s.f64("ell", a.ell, Some(3.0))?.unwrap();
            presets::schottky(ell)?
        }
        other => return Err(CliError::Validation(format!("unknown group preset '{other}'"))),
    })
}

fn cmd_gen(a: GenArgs, mut s: Settings) -> Result<(), CliError> {
    let preset = s
        .string("preset", a.preset.preset.clone(), None)?
        .ok_or_else(|| CliError::Validation("--preset is required".into()))?;
    let cloud: PointCloud = match preset.as_str() {
        "reciprocal" => synth_reciprocal_set(s.usize("n", a.n, Some(1000))?.unwrap())?,
        "inverted-lattice" => {
            let k = s.usize("k", a.k, Some(1))?.unwrap();
            synth_inverted_lattice(k, s.usize("n", a.n, Some(100))?.unwrap())?
        }
        name => {
            let g = group_preset(&a.preset, &mut s, name)?;
            match s.f64("eps", a.eps, None)? {
                Some(eps) => sample_limit_set_adaptive(&g, eps, DEFAULT_ADAPTIVE_CAP)?,
                None => sample_limit_set(&g, s.usize("max-word-len", a.preset.max_word_len, Some(8))?.unwrap())?,
            }
        }
    };
    emit(&a.out, &csvio::write_cloud(&cloud, &s.echo()))
}

const DELTA_COLUMNS: &str = "preset,max_word_len,delta,stderr,t_sat,points_used";

fn cmd_delta(a: DeltaArgs, mut s: Settings) -> Result<(), CliError> {
    let preset = s
        .string("preset", a.preset.preset.clone(), None)?
        .ok_or_else(|| CliError::Validation("--preset is required".into()))?;
    let g = group_preset(&a.preset, &mut s, &preset)?;
    let default_len = if g.generators().len() == 1 { 200 } else { 12 };
    let max_len = s.usize("max-word-len", a.preset.max_word_len, Some(default_len))?.unwrap();
    let points = s.usize("grid-points", a.grid_points, Some(64))?.unwrap();
    let base = OrbitPoint::Interior(ModelPoint::origin(Model::HalfSpace, g.dim()));
    let sample = enumerate_orbit(&g, base, max_len)?;
    let curve = orbit_counting_curve(&sample, &default_threshold_grid(&sample, points))?;
    let est = estimate_delta(&curve)?;
    if let Some(w) = &est.warning {
        eprintln!("warning: {w}");
    }
    println!(
        "delta = {} stderr = {} (T_sat = {}, {} thresholds)",
        fmt_num(est.delta),
        fmt_num(est.stderr),
        fmt_num(curve.t_sat),
        est.points_used
    );
    if let Some(path) = &a.out {
        let mut text = if path.exists() { read_text(path)? } else { format!("{DELTA_COLUMNS}\n") };
        let _ = writeln!(
            text,
            "{preset},{max_len},{},{},{},{}",
            fmt_num(est.delta),
            fmt_num(est.stderr),
            fmt_num(curve.t_sat),
            est.points_used
        );
        emit(&a.out, &text)?;
    }
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs, mut s: Settings) -> Result<(), CliError> {
    let kind = s.string("kind", a.kind.clone(), Some("assouad"))?.unwrap();
    let side = match kind.as_str() {
        "assouad" => Some(SpectrumSide::Assouad),
        "lower" => Some(SpectrumSide::Lower),
        "box" => None,
        other => return Err(CliError::Validation(format!("unknown spectrum kind '{other}'"))),
    };
    let grid = parse_theta_grid(&s.string("theta", a.theta.clone(), Some("0.1:0.9:0.1"))?.unwrap())?;
    if let Some(path) = &a.geometry {
        let side = side.ok_or_else(|| CliError::Validation("measure spectra are assouad or lower".into()))?;
        s.note("geometry", path.display().to_string());
        return measure_spectrum(&a, s, side, &grid, path);
    }
    let path = a.cloud.as_ref().ok_or_else(|| CliError::Validation("--cloud or --geometry is required".into()))?;
    s.note("cloud", path.display().to_string());
    let cloud = csvio::read_cloud(&read_text(path)?)?;
    let r_min = s.f64("r-min", a.r_min, Some(10.0 * cloud.resolution()))?.unwrap();
    let r_max = s.f64("r-max", a.r_max, Some(1e-2))?.unwrap();
    let per_decade = s.usize("scales-per-decade", a.scales_per_decade, Some(4))?.unwrap();
    let centers = match s.string("centers", a.centers.clone(), Some("20000"))?.unwrap().as_str() {
        "all" => CenterStrategy::All,
        n => CenterStrategy::Stratified(
            n.parse().map_err(|_| CliError::Validation(format!("--centers must be 'all' or a count, got '{n}'")))?,
        ),
    };
    let method = match s.string("method", a.method.clone(), Some("auto"))?.unwrap().as_str() {
        "grid" => CoveringMethod::GridBoxes,
        "exact" => CoveringMethod::Exact1d,
        "auto" if cloud.dim() == 1 => CoveringMethod::Exact1d,
        "auto" => CoveringMethod::GridBoxes,
        other => return Err(CliError::Validation(format!("unknown covering method '{other}'"))),
    };
    let config = EstimatorConfig { theta_grid: grid.clone(), r_min, r_max, scales_per_decade: per_decade, centers, method };
    let profile = match side {
        None => {
            let (v, e) = estimate_box_dimension(&cloud, &config)?;
            SpectrumProfile {
                theta: vec![None],
                values: vec![v],
                stderr: vec![Some(e)],
                kind: SpectrumKind::SetBox,
                source: Source::Empirical,
            }
        }
        Some(side) => {
            config.validate(&cloud)?;
            let mut p = SpectrumProfile {
                theta: vec![],
                values: vec![],
                stderr: vec![],
                kind: if side == SpectrumSide::Assouad { SpectrumKind::SetAssouad } else { SpectrumKind::SetLower },
                source: Source::Empirical,
            };
            for &t in &grid {
                let e = estimate_spectrum(&cloud, side, t, &config)?;
                p.theta.push(Some(t));
                p.values.push(e.value);
                p.stderr.push(Some(e.stderr));
            }
            p
        }
    };
    emit(&a.out, &csvio::write_profile(&profile, &s.echo()))
}

fn measure_spectrum(
    a: &SpectrumArgs,
    mut s: Settings,
    side: SpectrumSide,
    grid: &[f64],
    path: &Path,
) -> Result<(), CliError> {
    let geo = csvio::read_geometry(&read_text(path)?)?;
    if geo.points.is_empty() {
        return Err(CliError::Validation("geometry file has no sweep points".into()));
    }
    let delta = s.f64("delta", a.delta, None)?.ok_or_else(|| CliError::Validation("--delta is required".into()))?;
    let times_raw = s.string("times", a.times.clone(), Some("40"))?.unwrap();
    let times: Vec<f64> = times_raw
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Validation(format!("bad time '{t}'"))))
        .collect::<Result<_, _>>()?;
    let model = MeasureModel::new(delta, CuspGeometry::new(geo.dim, geo.horoballs)?)?;
    let mut p = SpectrumProfile {
        theta: vec![],
        values: vec![],
        stderr: vec![],
        kind: if side == SpectrumSide::Assouad { SpectrumKind::MuAssouad } else { SpectrumKind::MuLower },
        source: Source::Empirical,
    };
    for &t in grid {
        let sweep = measure_spectrum_sweep(&model, &geo.points, &times, t)?;
        p.theta.push(Some(t));
        p.values.push(if side == SpectrumSide::Assouad { sweep.sup } else { sweep.inf });
        p.stderr.push(None);
    }
    emit(&a.out, &csvio::write_profile(&p, &s.echo()))
}

fn formula_profile(f: &FormulaParams, s: &mut Settings, grid: &[f64]) -> Result<SpectrumProfile, CliError> {
    let target: SpectrumKind = s
        .string("target", f.target.clone(), None)?
        .ok_or_else(|| CliError::Validation("--target is required".into()))?
        .parse()?;
    if target == SpectrumKind::Lattice {
        let k = s.usize("k", f.k.map(|v| v as usize), None)?.ok_or_else(|| CliError::Validation("--k is required".into()))?;
        let values = grid.iter().map(|&t| lattice_spectrum(k as u32, t)).collect::<Result<Vec<_>, _>>()?;
        return Ok(SpectrumProfile {
            theta: grid.iter().map(|&t| Some(t)).collect(),
            stderr: vec![None; values.len()],
            values,
            kind: target,
            source: Source::ClosedForm,
        });
    }
    let missing = |n: &str| CliError::Validation(format!("--{n} is required"));
    let delta = s.f64("delta", f.delta, None)?.ok_or_else(|| missing("delta"))?;
    let k_min = s.usize("k-min", f.k_min.map(|v| v as usize), None)?.ok_or_else(|| missing("k-min"))? as u32;
    let k_max = s.usize("k-max", f.k_max.map(|v| v as usize), None)?.ok_or_else(|| missing("k-max"))? as u32;
    let d_default = k_max.max(delta.ceil().max(1.0) as u32) as usize;
    let d = s.usize("d", f.d.map(|v| v as usize), Some(d_default))?.unwrap() as u32;
    let p = SpectralParameters::new(delta, k_min, k_max, d)?;
    Ok(closed_form_profile(&p, target, grid)?)
}

fn cmd_formula(a: FormulaArgs, mut s: Settings) -> Result<(), CliError> {
    let grid = parse_theta_grid(&s.string("theta", a.theta.clone(), Some("default"))?.unwrap())?;
    let p = formula_profile(&a.params, &mut s, &grid)?;
    emit(&a.out, &csvio::write_profile(&p, &s.echo()))
}

fn cmd_compare(a: CompareArgs, mut s: Settings) -> Result<(), CliError> {
    s.note("profile", a.profile.display().to_string());
    let emp = csvio::read_profile(&read_text(&a.profile)?)?;
    let grid: Vec<f64> = emp
        .theta
        .iter()
        .map(|t| t.ok_or_else(|| CliError::Validation("only θ-dependent profiles can be compared".into())))
        .collect::<Result<_, _>>()?;
    if let Some(raw) = s.string("theta", a.theta.clone(), None)? {
        let wanted = parse_theta_grid(&raw)?;
        let aligned = wanted.len() == grid.len() && wanted.iter().zip(&grid).all(|(x, y)| (x - y).abs() < 1e-9);
        if !aligned {
            return Err(CliError::Validation("θ grid of the profile does not match --theta".into()));
        }
    }
    let tol = s.f64("tolerance", a.tolerance, Some(0.1))?.unwrap();
    let closed = formula_profile(&a.params, &mut s, &grid)?;
    let mut text = format!("{}\n{}\n", csvio::REPORT_HEADER, csvio::REPORT_COLUMNS);
    let mut worst = 0.0f64;
    for i in 0..grid.len() {
        let dev = (closed.values[i] - emp.values[i]).abs();
        worst = worst.max(dev);
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            fmt_num(grid[i]),
            fmt_num(closed.values[i]),
            fmt_num(emp.values[i]),
            emp.stderr[i].map(fmt_num).unwrap_or_default(),
            fmt_num(dev)
        );
    }
    let pass = worst <= tol;
    let _ = writeln!(text, "# max_deviation: {}", fmt_num(worst));
    let _ = writeln!(text, "# tolerance: {}", fmt_num(tol));
    let _ = writeln!(text, "# result: {}", if pass { "pass" } else { "fail" });
    text.push_str(&csvio::config_footer(&s.echo()));
    emit(&a.out, &text)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::CompareFailed(format!("max deviation {} exceeds tolerance {}", fmt_num(worst), fmt_num(tol))))
    }
}

fn cmd_plot(a: PlotArgs) -> Result<(), CliError> {
    let mut profiles = Vec::new();
    for path in &a.profiles {
        let p = csvio::read_profile(&read_text(path)?)?;
        p.validate(u32::MAX / 4)?;
        profiles.push((format!("{} ({})", p.kind, p.source), p));
    }
    emit(&a.out, &svg::render(&profiles))
}
