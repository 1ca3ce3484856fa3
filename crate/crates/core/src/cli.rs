//! The `zigzag` command-line front end.
//!
//! Every command takes long flags only. `--manifest FILE` reads `key = value`
//! lines (with `#` comments) whose values override the flags.

use crate::atomic::{ground_state, hopping_rho, spectral_gap, AtomicWell, WellShape};
use crate::continuum::{run_study, StudyConfig, StudyReport};
use crate::lattice::spectral_window;
use crate::tightbinding::{band_sweep_with, flat_band_state, linspace, write_band_csv, Truncation};
use crate::verify::{run_suite, CheckResult, Suite};
use crate::zak::{write_zak_csv, zak_phase, DEFAULT_NPOINTS};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn numerical<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numerical(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "zigzag", version, about = "Zigzag edge states of honeycomb structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tight-binding band sweep over kpar (CSV).
    Bands(BandsArgs),
    /// Flat-band edge state amplitudes at one kpar (CSV).
    EdgeState(EdgeStateArgs),
    /// Zak phase of the lower bulk band over kpar (CSV).
    Zak(ZakArgs),
    /// Atomic ground state and hopping coefficient per lambda (JSON).
    Atomic(AtomicArgs),
    /// Continuum spectra on the truncated cylinder (JSON, optional CSV table).
    Continuum(ContinuumArgs),
    /// Lambda sweep with monotonicity verdicts (JSON).
    Converge(ConvergeArgs),
    /// Run the verification suites (JSON summary).
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[arg(long, default_value = "0")]
    pub kpar_min: String,
    #[arg(long, default_value = "2pi")]
    pub kpar_max: String,
    #[arg(long, default_value_t = 241)]
    pub kpar_steps: usize,
    #[arg(long, default_value_t = 200)]
    pub ncells: usize,
    /// `a` ends the chain on an A site (default), `b` keeps both sites of every cell.
    #[arg(long, default_value = "a")]
    pub truncation: String,
    /// Output path; `-` or empty writes to standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EdgeStateArgs {
    #[arg(long, default_value = "5pi/6")]
    pub kpar: String,
    #[arg(long, default_value_t = 40)]
    pub ncells: usize,
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZakArgs {
    #[arg(long, default_value_t = 241)]
    pub kpar_steps: usize,
    #[arg(long, default_value_t = DEFAULT_NPOINTS)]
    pub npoints: usize,
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AtomicArgs {
    /// Comma-separated lambda values.
    #[arg(long, default_value = "10,15,20,25")]
    pub lambda: String,
    /// `disc` or `bump`.
    #[arg(long, default_value = "disc")]
    pub shape: String,
    #[arg(long, default_value_t = 0.18)]
    pub r0: f64,
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct StudyArgs {
    #[arg(long, default_value = "8,12,16")]
    pub lambda: String,
    /// Comma-separated kpar values; accepts forms like `5pi/6`.
    #[arg(long, default_value = "5pi/6,pi,0.3")]
    pub kpar: String,
    #[arg(long, default_value_t = 10)]
    pub ncells: usize,
    /// Mesh points per unit cell edge (a multiple of 3).
    #[arg(long, default_value_t = 36)]
    pub resolution: usize,
    #[arg(long, default_value = "disc")]
    pub shape: String,
    #[arg(long, default_value_t = 0.15)]
    pub r0: f64,
    #[arg(long, default_value_t = 2)]
    pub pad_left: usize,
    #[arg(long, default_value_t = 2)]
    pub pad_right: usize,
    /// Eigenpairs per solve; 0 means one per site.
    #[arg(long, default_value_t = 0)]
    pub nev: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContinuumArgs {
    #[command(flatten)]
    pub study: StudyArgs,
    /// Also write the scaled spectra as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub study: StudyArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// Parses `0.3`, `pi`, `-pi/2`, `5pi/6`, `5*pi/6`, `2pi`.
pub fn parse_angle(s: &str) -> Result<f64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || invalid(format!("cannot parse angle '{s}'"));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.to_string(), b.parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        c * PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let v = value / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    let v: Vec<T> = s.split(',').filter(|x| !x.trim().is_empty()).map(|x| f(x.trim())).collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(invalid("empty list"));
    }
    Ok(v)
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| invalid(format!("bad value for {key}: '{s}'")))
}

fn parse_shape(s: &str) -> Result<WellShape, CliError> {
    match s {
        "disc" | "DiscWell" => Ok(WellShape::DiscWell),
        "bump" | "SmoothBump" => Ok(WellShape::SmoothBump),
        _ => Err(invalid(format!("unknown well shape '{s}' (disc, bump)"))),
    }
}

fn shape_name(s: WellShape) -> &'static str {
    match s {
        WellShape::DiscWell => "disc",
        WellShape::SmoothBump => "bump",
    }
}

/// `key = value` lines; `#` starts a comment. Keys may use `-` or `_`.
pub fn parse_manifest(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("manifest line {}: expected key = value", i + 1)))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

fn load_manifest(path: &Option<PathBuf>) -> Result<BTreeMap<String, String>, CliError> {
    match path {
        None => Ok(BTreeMap::new()),
        Some(p) => parse_manifest(&std::fs::read_to_string(p)?),
    }
}

/// Applies manifest entries to named string slots; unknown keys are rejected.
fn overlay(map: BTreeMap<String, String>, slots: &mut [(&str, &mut String)]) -> Result<(), CliError> {
    for (k, v) in map {
        match slots.iter_mut().find(|(name, _)| *name == k) {
            Some((_, slot)) => **slot = v,
            None => return Err(invalid(format!("unknown manifest key '{k}'"))),
        }
    }
    Ok(())
}

fn open_out(out: &str) -> Result<Box<dyn Write>, CliError> {
    if out.is_empty() || out == "-" {
        Ok(Box::new(std::io::stdout().lock()))
    } else {
        Ok(Box::new(std::io::BufWriter::new(std::fs::File::create(Path::new(out))?)))
    }
}

fn write_header(w: &mut dyn Write, command: &str, params: &[(&str, String)]) -> std::io::Result<()> {
    writeln!(w, "# zigzag {} {}", command, env!("CARGO_PKG_VERSION"))?;
    for (k, v) in params {
        writeln!(w, "# {k} = {v}")?;
    }
    Ok(())
}

fn write_json<T: Serialize>(out: &str, value: &T) -> Result<(), CliError> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io(e.into()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandsConfig {
    pub kpar_min: f64,
    pub kpar_max: f64,
    pub kpar_steps: usize,
    pub ncells: usize,
    pub truncation: Truncation,
    pub out: String,
}

pub fn bands_config(a: &BandsArgs) -> Result<BandsConfig, CliError> {
    let mut kmin = a.kpar_min.clone();
    let mut kmax = a.kpar_max.clone();
    let mut steps = a.kpar_steps.to_string();
    let mut ncells = a.ncells.to_string();
    let mut trunc = a.truncation.clone();
    let mut out = a.out.clone();
    overlay(
        load_manifest(&a.manifest)?,
        &mut [
            ("kpar_min", &mut kmin),
            ("kpar_max", &mut kmax),
            ("kpar_steps", &mut steps),
            ("ncells", &mut ncells),
            ("truncation", &mut trunc),
            ("out", &mut out),
        ],
    )?;
    let kpar_min = parse_angle(&kmin)?;
    let kpar_max = parse_angle(&kmax)?;
    let kpar_steps: usize = parse_num("kpar_steps", &steps)?;
    let ncells: usize = parse_num("ncells", &ncells)?;
    // a single point is allowed when the range is degenerate
    if kpar_steps < 2 && !(kpar_steps == 1 && kpar_min == kpar_max) {
        return Err(invalid("kpar_steps must be at least 2"));
    }
    if kpar_max < kpar_min {
        return Err(invalid("kpar_max must not be below kpar_min"));
    }
    if ncells < 2 {
        return Err(invalid("ncells must be at least 2"));
    }
    let truncation = match trunc.as_str() {
        "a" | "A" => Truncation::EndOnA,
        "b" | "B" => Truncation::EndOnB,
        t => return Err(invalid(format!("unknown truncation '{t}' (a, b)"))),
    };
    Ok(BandsConfig {
        kpar_min,
        kpar_max,
        kpar_steps,
        ncells,
        truncation,
        out,
    })
}

pub fn cmd_bands(a: &BandsArgs) -> Result<(), CliError> {
    let c = bands_config(a)?;
    let grid = if c.kpar_steps == 1 {
        vec![c.kpar_min]
    } else {
        linspace(c.kpar_min, c.kpar_max, c.kpar_steps)
    };
    let rows = band_sweep_with(&grid, c.ncells, c.truncation).map_err(numerical)?;
    let mut w = open_out(&c.out)?;
    write_header(
        &mut *w,
        "bands",
        &[
            ("kpar_min", format!("{:.12}", c.kpar_min)),
            ("kpar_max", format!("{:.12}", c.kpar_max)),
            ("kpar_steps", c.kpar_steps.to_string()),
            ("ncells", c.ncells.to_string()),
            ("truncation", format!("{:?}", c.truncation)),
        ],
    )?;
    write_band_csv(&mut w, &rows)?;
    w.flush()?;
    Ok(())
}

pub fn cmd_edge_state(a: &EdgeStateArgs) -> Result<(), CliError> {
    let mut kpar = a.kpar.clone();
    let mut ncells = a.ncells.to_string();
    let mut out = a.out.clone();
    overlay(
        load_manifest(&a.manifest)?,
        &mut [("kpar", &mut kpar), ("ncells", &mut ncells), ("out", &mut out)],
    )?;
    let k = parse_angle(&kpar)?;
    let n: usize = parse_num("ncells", &ncells)?;
    if n < 1 {
        return Err(invalid("ncells must be positive"));
    }
    let state = flat_band_state(&spectral_window(k), n).map_err(numerical)?;
    let mut w = open_out(&out)?;
    write_header(
        &mut *w,
        "edge-state",
        &[
            ("kpar", format!("{k:.12}")),
            ("ncells", n.to_string()),
            ("zeta", format!("{:.15e}{:+.15e}i", state.window.zeta.re, state.window.zeta.im)),
            ("norm", format!("{:.15e}", state.norm)),
        ],
    )?;
    writeln!(w, "cell,a_re,a_im,b_re,b_im")?;
    for (i, c) in state.amplitudes.iter().enumerate() {
        writeln!(w, "{},{:.15e},{:.15e},{:.15e},{:.15e}", i, c[0].re, c[0].im, c[1].re, c[1].im)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_zak(a: &ZakArgs) -> Result<(), CliError> {
    let mut steps = a.kpar_steps.to_string();
    let mut npoints = a.npoints.to_string();
    let mut out = a.out.clone();
    overlay(
        load_manifest(&a.manifest)?,
        &mut [("kpar_steps", &mut steps), ("npoints", &mut npoints), ("out", &mut out)],
    )?;
    let steps: usize = parse_num("kpar_steps", &steps)?;
    let npoints: usize = parse_num("npoints", &npoints)?;
    if steps < 2 {
        return Err(invalid("kpar_steps must be at least 2"));
    }
    // The Dirac points are excluded; the grid is cell-centred on [0, 2π).
    let rows = (0..steps)
        .map(|i| 2.0 * PI * (i as f64 + 0.5) / steps as f64)
        .filter(|k| spectral_window(*k).dgap > 1e-6)
        .map(|k| zak_phase(&spectral_window(k), npoints))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| match e {
            crate::zak::ZakError::InvalidSampling(n) => invalid(format!("npoints {n} is below 64")),
            e => numerical(e),
        })?;
    let mut w = open_out(&out)?;
    write_header(
        &mut *w,
        "zak",
        &[("kpar_steps", steps.to_string()), ("npoints", npoints.to_string()), ("grid", "cell-centred on [0, 2pi)".into())],
    )?;
    write_zak_csv(&mut w, &rows)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct AtomicRecord {
    lambda: f64,
    e0: f64,
    e0_over_lambda2: f64,
    gap: f64,
    rho: f64,
    rho_error_estimate: f64,
    decay_length: f64,
    residual: f64,
}

#[derive(Debug, Serialize)]
struct AtomicReport {
    well: AtomicWell,
    records: Vec<AtomicRecord>,
}

pub fn cmd_atomic(a: &AtomicArgs) -> Result<(), CliError> {
    let mut lambda = a.lambda.clone();
    let mut shape = a.shape.clone();
    let mut r0 = a.r0.to_string();
    let mut out = a.out.clone();
    overlay(
        load_manifest(&a.manifest)?,
        &mut [("lambda", &mut lambda), ("shape", &mut shape), ("r0", &mut r0), ("out", &mut out)],
    )?;
    let lambdas = parse_list(&lambda, |s| parse_num::<f64>("lambda", s))?;
    let well = AtomicWell::new(parse_shape(&shape)?, parse_num("r0", &r0)?).map_err(|e| invalid(e.to_string()))?;
    let mut records = Vec::new();
    for l in lambdas {
        if !(l > 0.0 && l.is_finite()) {
            return Err(invalid(format!("lambda must be positive, got {l}")));
        }
        let gs = ground_state(&well, l).map_err(numerical)?;
        let h = hopping_rho(&gs, &well);
        records.push(AtomicRecord {
            lambda: l,
            e0: gs.e0,
            e0_over_lambda2: gs.e0 / (l * l),
            gap: spectral_gap(&well, l).map_err(numerical)?,
            rho: h.rho,
            rho_error_estimate: h.quadrature_error_estimate,
            decay_length: gs.decay_length(),
            residual: gs.residual,
        });
    }
    write_json(&out, &AtomicReport { well, records })
}

pub fn study_config(a: &StudyArgs) -> Result<(StudyConfig, String), CliError> {
    let mut s = [
        a.lambda.clone(),
        a.kpar.clone(),
        a.ncells.to_string(),
        a.resolution.to_string(),
        a.shape.clone(),
        a.r0.to_string(),
        a.pad_left.to_string(),
        a.pad_right.to_string(),
        a.nev.to_string(),
        a.tol.to_string(),
        a.out.clone(),
    ];
    {
        let [lambda, kpar, ncells, resolution, shape, r0, pl, pr, nev, tol, out] = &mut s;
        overlay(
            load_manifest(&a.manifest)?,
            &mut [
                ("lambda", lambda),
                ("kpar", kpar),
                ("ncells", ncells),
                ("resolution", resolution),
                ("shape", shape),
                ("r0", r0),
                ("pad_left", pl),
                ("pad_right", pr),
                ("nev", nev),
                ("tol", tol),
                ("out", out),
            ],
        )?;
    }
    let [lambda, kpar, ncells, resolution, shape, r0, pl, pr, nev, tol, out] = s;
    let well = AtomicWell::new(parse_shape(&shape)?, parse_num("r0", &r0)?).map_err(|e| invalid(e.to_string()))?;
    let lambdas = parse_list(&lambda, |x| parse_num::<f64>("lambda", x))?;
    if lambdas.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        return Err(invalid("lambda values must be positive"));
    }
    let cfg = StudyConfig {
        well,
        lambdas,
        kpars: parse_list(&kpar, parse_angle)?,
        ncells: parse_num("ncells", &ncells)?,
        resolution: parse_num("resolution", &resolution)?,
        pad_left: parse_num("pad_left", &pl)?,
        pad_right: parse_num("pad_right", &pr)?,
        nev: parse_num("nev", &nev)?,
        tol: parse_num("tol", &tol)?,
    };
    if cfg.ncells < 2 {
        return Err(invalid("ncells must be at least 2"));
    }
    if cfg.resolution == 0 || cfg.resolution % 3 != 0 {
        return Err(invalid("resolution must be a positive multiple of 3"));
    }
    if !(cfg.tol > 0.0 && cfg.tol < 1.0) {
        return Err(invalid("tol must lie in (0, 1)"));
    }
    Ok((cfg, out))
}

fn study(cfg: &StudyConfig) -> Result<StudyReport, CliError> {
    run_study(cfg).map_err(|e| match e {
        crate::continuum::ContinuumError::InvalidParameter(_)
        | crate::continuum::ContinuumError::GridTooSmall(_)
        | crate::continuum::ContinuumError::GridTooLarge { .. }
        | crate::continuum::ContinuumError::SiteOffGrid(_)
        | crate::continuum::ContinuumError::InvalidNev { .. } => invalid(e.to_string()),
        e => numerical(e),
    })
}

pub fn write_continuum_csv<W: Write>(w: &mut W, report: &StudyReport) -> std::io::Result<()> {
    writeln!(w, "# well = {} r0 = {}", shape_name(report.config.well.shape), report.config.well.r0)?;
    writeln!(
        w,
        "# ncells = {} resolution = {} pad_left = {} pad_right = {} nev = {} tol = {:e}",
        report.config.ncells,
        report.config.resolution,
        report.config.pad_left,
        report.config.pad_right,
        report.config.effective_nev(),
        report.config.tol
    )?;
    writeln!(w, "lambda,kpar,index,omega_tilde,edge_flag,left_mass_fraction")?;
    for r in &report.records {
        for p in &r.points {
            for i in 0..p.omega_tilde.len() {
                writeln!(
                    w,
                    "{},{:.12},{},{:.15e},{},{:.6}",
                    r.lambda, p.kpar, i, p.omega_tilde[i], p.flags[i], p.left_mass[i]
                )?;
            }
        }
    }
    Ok(())
}

pub fn cmd_continuum(a: &ContinuumArgs) -> Result<(), CliError> {
    let (cfg, out) = study_config(&a.study)?;
    let report = study(&cfg)?;
    write_json(&out, &report)?;
    if let Some(p) = &a.csv {
        let mut w = std::io::BufWriter::new(std::fs::File::create(p)?);
        write_continuum_csv(&mut w, &report)?;
        w.flush()?;
    }
    if report.failed() {
        return Err(CliError::Numerical("some sweep points failed; see the report".into()));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct KparVerdict {
    pub kpar: f64,
    pub edge_state_found: Vec<bool>,
    pub edge_omega_tilde: Vec<Option<f64>>,
    pub ansatz_overlap: Vec<Option<f64>>,
    pub distance: Vec<Option<f64>>,
    pub omega_decreasing: bool,
    pub overlap_increasing: bool,
    pub distance_decreasing: bool,
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ConvergeReport {
    pub report: StudyReport,
    pub verdicts: Vec<KparVerdict>,
}

fn increasing(x: &[Option<f64>]) -> bool {
    x.len() >= 2 && x.iter().all(Option::is_some) && x.windows(2).all(|w| w[1] > w[0])
}

fn decreasing(x: &[Option<f64>]) -> bool {
    x.len() >= 2 && x.iter().all(Option::is_some) && x.windows(2).all(|w| w[1] < w[0])
}

pub fn converge_verdicts(report: &StudyReport) -> Vec<KparVerdict> {
    report
        .config
        .kpars
        .iter()
        .map(|&k| {
            let pts: Vec<_> = report.records.iter().map(|r| r.points.iter().find(|p| p.kpar == k)).collect();
            let found: Vec<bool> = pts.iter().map(|p| p.is_some_and(|p| p.edge.is_some())).collect();
            let om: Vec<Option<f64>> = pts.iter().map(|p| p.and_then(|p| p.edge.as_ref()).map(|e| e.omega_tilde.abs())).collect();
            let ov: Vec<Option<f64>> =
                pts.iter().map(|p| p.and_then(|p| p.edge.as_ref()).map(|e| e.ansatz_overlap)).collect();
            let dist: Vec<Option<f64>> = pts.iter().map(|p| p.map(|p| p.distance)).collect();
            let note = if pts.iter().all(|p| p.is_some()) && found.iter().all(|f| !f) {
                Some("no edge state at this kpar".to_string())
            } else {
                None
            };
            KparVerdict {
                kpar: k,
                omega_decreasing: decreasing(&om),
                overlap_increasing: increasing(&ov),
                distance_decreasing: decreasing(&dist),
                edge_state_found: found,
                edge_omega_tilde: om,
                ansatz_overlap: ov,
                distance: dist,
                note,
            }
        })
        .collect()
}

pub fn cmd_converge(a: &ConvergeArgs) -> Result<(), CliError> {
    let (cfg, out) = study_config(&a.study)?;
    let report = study(&cfg)?;
    let failed = report.failed();
    let verdicts = converge_verdicts(&report);
    write_json(&out, &ConvergeReport { report, verdicts })?;
    if failed {
        return Err(CliError::Numerical("some sweep points failed; see the report".into()));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct VerifySummary {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<bool, CliError> {
    let mut suite = a.suite.clone();
    let mut out = a.out.clone();
    overlay(load_manifest(&a.manifest)?, &mut [("suite", &mut suite), ("out", &mut out)])?;
    let suite: Suite = suite.parse().map_err(invalid)?;
    let checks = run_suite(suite);
    for c in &checks {
        eprintln!(
            "{} criterion {:2} {} ({:.1}s): {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.seconds,
            c.detail
        );
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let summary = VerifySummary {
        suite,
        passed,
        failed: checks.len() - passed,
        checks,
    };
    write_json(&out, &summary)?;
    Ok(summary.failed == 0)
}

pub fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Bands(a) => cmd_bands(a).map(|_| true),
        Command::EdgeState(a) => cmd_edge_state(a).map(|_| true),
        Command::Zak(a) => cmd_zak(a).map(|_| true),
        Command::Atomic(a) => cmd_atomic(a).map(|_| true),
        Command::Continuum(a) => cmd_continuum(a).map(|_| true),
        Command::Converge(a) => cmd_converge(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(true) => 0,
        // failed verification checks are numerical failures
        Ok(false) => 2,
        Err(e) => {
            eprintln!("zigzag: {e}");
            e.exit_code()
        }
    }
}
