//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::coverage::{ChannelParams, CoverageTarget, PowerModel};
use crate::deployment::{circular_catalog, optimal_grid};
use crate::distributions::{square_offset_distribution, triangle_peak_distribution};
use crate::error::Error;
use crate::geometry::{BsLayout, FieldSpec};
use crate::optimizer::{plan, Arrangement, PlanConfig, SweepParam, TraceRow, UserMode};
use crate::oracle::run_validation;
use crate::units::{db_to_linear, dbm_to_watts, watts_to_dbm};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_VALIDATION_FAILED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "green-planner", version, about = "Power-minimising base-station deployment planner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimise BS count, placement and transmit power; prints a JSON report.
    Plan(PlanArgs),
    /// Re-plan over a list of parameter values; prints CSV.
    Sweep(SweepArgs),
    /// Tabulate an appendix distance distribution as CSV.
    Dist(DistArgs),
    /// List placement arrangements as CSV.
    Catalog(CatalogArgs),
    /// Run the Monte Carlo validation suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldShape {
    Square,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Large,
    Moderate,
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// JSON config with flat keys; omitted keys take the default values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub field: Option<FieldShape>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// UE count for moderate mode.
    #[arg(long)]
    pub nu: Option<u64>,
    /// Outage tolerance ε (coverage target 1 − ε).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest BS count considered.
    #[arg(long)]
    pub nmax: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum)]
    pub vary: VaryArg,
    /// Comma-separated values or `start:stop:step`. Units: coverage as a probability,
    /// sigma2 in dBm, threshold in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub values: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VaryArg {
    Coverage,
    Sigma2,
    Alpha,
    Threshold,
}

impl From<VaryArg> for SweepParam {
    fn from(v: VaryArg) -> Self {
        match v {
            VaryArg::Coverage => SweepParam::Coverage,
            VaryArg::Sigma2 => SweepParam::Sigma2,
            VaryArg::Alpha => SweepParam::Alpha,
            VaryArg::Threshold => SweepParam::Threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistShape {
    Square,
    Triangle,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    pub shape: DistShape,
    /// Square half-side, or triangle height.
    #[arg(long)]
    pub a: f64,
    /// BS offset from the centre (square) or the peak (triangle).
    #[arg(long, default_value_t = 0.0)]
    pub d: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FieldShape::Circle)]
    pub field: FieldShape,
    /// BS counts: `N`, or an inclusive range `LO..HI`.
    #[arg(long, default_value = "1..35")]
    pub nb: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub drops: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Configuration file contents, in the units the parameters are usually quoted in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub field: FieldShape,
    /// Side length `2a` of the square field.
    pub side_length_m: f64,
    pub radius_m: f64,
    pub noise_power_dbm: f64,
    pub fading_mean: f64,
    pub threshold_db: f64,
    pub path_loss_exponent: f64,
    pub amp_scaling: f64,
    pub static_power_w: f64,
    pub p_max_w: f64,
    pub n_max: usize,
    pub epsilon: f64,
    pub user_mode: ModeArg,
    pub n_users: u64,
}

impl Default for AppConfig {
    fn default() -> Self {
        Self {
            field: FieldShape::Square,
            side_length_m: 1000.0,
            radius_m: 500.0,
            noise_power_dbm: -70.0,
            fading_mean: 1.0,
            threshold_db: -10.0,
            path_loss_exponent: 4.0,
            amp_scaling: 5.5,
            static_power_w: 32.0,
            p_max_w: 5.0,
            n_max: 35,
            epsilon: 0.1,
            user_mode: ModeArg::Large,
            n_users: 100,
        }
    }
}

impl AppConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn field_spec(&self) -> Result<FieldSpec, Error> {
        match self.field {
            FieldShape::Square => FieldSpec::square(self.side_length_m / 2.0),
            FieldShape::Circle => FieldSpec::circle(self.radius_m),
        }
    }

    pub fn to_plan_config(&self) -> Result<PlanConfig, Error> {
        PlanConfig {
            field: self.field_spec()?,
            channel: ChannelParams {
                threshold: db_to_linear(self.threshold_db),
                noise_power: dbm_to_watts(self.noise_power_dbm),
                path_loss_exponent: self.path_loss_exponent,
                fading_mean: self.fading_mean,
            },
            power: PowerModel {
                amp_scaling: self.amp_scaling,
                static_power: self.static_power_w,
                p_max: self.p_max_w,
                n_max: self.n_max,
            },
            target: CoverageTarget::new(self.epsilon)?,
            users: match self.user_mode {
                ModeArg::Large => UserMode::Large,
                ModeArg::Moderate => UserMode::Moderate {
                    n_users: self.n_users,
                },
            },
        }
        .validated()
    }
}

fn resolve_config(args: &ConfigArgs) -> Result<AppConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => AppConfig::load(path)?,
        None => AppConfig::default(),
    };
    if let Some(f) = args.field {
        cfg.field = f;
    }
    if let Some(m) = args.mode {
        cfg.user_mode = m;
    }
    if let Some(n) = args.nu {
        cfg.n_users = n;
        if args.mode.is_none() {
            cfg.user_mode = ModeArg::Moderate;
        }
    }
    if let Some(e) = args.epsilon {
        cfg.epsilon = e;
    }
    if let Some(n) = args.nmax {
        cfg.n_max = n;
    }
    Ok(cfg)
}

#[derive(Debug, Serialize)]
struct PlanReport<'a> {
    config: &'a AppConfig,
    result: ResultReport,
}

#[derive(Debug, Serialize)]
struct ResultReport {
    feasible: bool,
    n_bs: Option<usize>,
    p_t_w: Option<f64>,
    p_t_dbm: Option<f64>,
    total_power_w: Option<f64>,
    arrangement: Option<Arrangement>,
    layout: Option<BsLayout>,
    per_cell_coverage: Vec<f64>,
    trace: Vec<TraceRow>,
}

/// Where a command's output goes, and the exit code to return once it is written.
struct Output {
    text: String,
    code: u8,
}

fn emit(out: &Option<PathBuf>, output: Output) -> u8 {
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, &output.text) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{}", output.text),
    }
    output.code
}

fn cmd_plan(args: &PlanArgs) -> Result<Output, String> {
    let cfg = resolve_config(&args.config)?;
    let config = cfg.to_plan_config().map_err(|e| e.to_string())?;
    let (result, code) = match plan(&config) {
        Ok(r) => (
            ResultReport {
                feasible: r.feasible,
                n_bs: Some(r.n_bs),
                p_t_w: Some(r.p_t_star),
                p_t_dbm: Some(watts_to_dbm(r.p_t_star)),
                total_power_w: Some(r.total_power),
                arrangement: Some(r.arrangement),
                layout: Some(r.layout),
                per_cell_coverage: r.per_cell_coverage,
                trace: r.trace,
            },
            EXIT_OK,
        ),
        Err(Error::Infeasible { trace }) => (
            ResultReport {
                feasible: false,
                n_bs: None,
                p_t_w: None,
                p_t_dbm: None,
                total_power_w: None,
                arrangement: None,
                layout: None,
                per_cell_coverage: Vec::new(),
                trace,
            },
            EXIT_INFEASIBLE,
        ),
        Err(e) => return Err(e.to_string()),
    };
    let report = PlanReport {
        config: &cfg,
        result,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    text.push('\n');
    Ok(Output { text, code })
}

/// Parses `a,b,c` or `start:stop:step`.
pub fn parse_values(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err("--values is empty".into());
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number `{}` in --values", s.trim()))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err("range form is start:stop:step".into());
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(step > 0.0) || stop < start {
            return Err("range needs step > 0 and stop >= start".into());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        // round to suppress accumulated representation noise in the printed values
        return Ok((0..=n)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect());
    }
    spec.split(',').map(num).collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn cmd_sweep(args: &SweepArgs) -> Result<Output, String> {
    let values = parse_values(&args.values)?;
    let cfg = resolve_config(&args.config)?;
    let config = cfg.to_plan_config().map_err(|e| e.to_string())?;
    let rows = crate::optimizer::sweep(&config, args.vary.into(), &values).map_err(|e| e.to_string())?;
    let mut text = String::from("vary_param,n_bs_star,p_t_star_w,p_t_star_dbm,total_power_w,feasible\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            r.value,
            r.n_bs_star.map(|n| n.to_string()).unwrap_or_default(),
            opt(r.p_t_star),
            opt(r.p_t_star.map(watts_to_dbm)),
            opt(r.total_power),
            r.feasible
        );
    }
    Ok(Output { text, code: EXIT_OK })
}

fn cmd_dist(args: &DistArgs) -> Result<Output, String> {
    if args.points == 0 {
        return Err("--points must be at least 1".into());
    }
    let dist = match args.shape {
        DistShape::Square => square_offset_distribution(args.a, args.d),
        DistShape::Triangle => triangle_peak_distribution(args.a, args.d),
    }
    .map_err(|e| e.to_string())?;
    let mut text = String::from("r,cdf,pdf\n");
    for i in 1..=args.points {
        let r = dist.support_max() * i as f64 / args.points as f64;
        let _ = writeln!(text, "{},{},{}", r, dist.cdf(r), dist.pdf(r));
    }
    Ok(Output { text, code: EXIT_OK })
}

/// Parses `N` or `LO..HI` (inclusive).
pub fn parse_range(spec: &str) -> Result<(usize, usize), String> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid count `{}` in --nb", s.trim()))
    };
    let (lo, hi) = match spec.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.trim_start_matches('='))?),
        None => {
            let n = num(spec)?;
            (n, n)
        }
    };
    if lo == 0 || hi < lo {
        return Err(format!("--nb range `{spec}` must satisfy 1 <= LO <= HI"));
    }
    Ok((lo, hi))
}

fn cmd_catalog(args: &CatalogArgs) -> Result<Output, String> {
    let (lo, hi) = parse_range(&args.nb)?;
    let cfg = match &args.config {
        Some(path) => AppConfig::load(path)?,
        None => AppConfig::default(),
    };
    let mut text = String::new();
    match args.field {
        FieldShape::Circle => {
            let radius = cfg.radius_m;
            text.push_str("n_bs,type,arcs,center,radii_m,table_rf_m,layout_rf_m,extrapolated\n");
            for n in lo..=hi {
                match circular_catalog(n, radius) {
                    Ok(a) => {
                        let radii: Vec<String> = a.radii.iter().map(f64::to_string).collect();
                        let layout_rf = a.layout_rf(radius).map_err(|e| e.to_string())?;
                        let _ = writeln!(
                            text,
                            "{n},{},{},{},{},{},{},{}",
                            a.kind,
                            a.arcs,
                            a.center,
                            radii.join(";"),
                            a.table_rf,
                            layout_rf,
                            a.extrapolated
                        );
                    }
                    Err(Error::UnsupportedArrangement { .. }) => {
                        let _ = writeln!(text, "{n},none,,,,,,");
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
        FieldShape::Square => {
            let a = cfg.side_length_m / 2.0;
            text.push_str("n_bs,m,n,omega,r_f_m\n");
            for n in lo..=hi {
                let g = optimal_grid(n).map_err(|e| e.to_string())?;
                let _ = writeln!(text, "{n},{},{},{},{}", g.m, g.n, g.omega(), g.farthest(a));
            }
        }
    }
    Ok(Output { text, code: EXIT_OK })
}

fn cmd_validate(args: &ValidateArgs) -> Result<Output, String> {
    if args.drops == 0 {
        return Err("--drops must be at least 1".into());
    }
    let report = run_validation(args.seed, args.drops).map_err(|e| e.to_string())?;
    let code = if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_VALIDATION_FAILED
    };
    Ok(Output {
        text: format!("{report}\n"),
        code,
    })
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let (out, result) = match &cli.command {
        Command::Plan(a) => (&a.out, cmd_plan(a)),
        Command::Sweep(a) => (&a.out, cmd_sweep(a)),
        Command::Dist(a) => (&a.out, cmd_dist(a)),
        Command::Catalog(a) => (&a.out, cmd_catalog(a)),
        Command::Validate(a) => (&a.out, cmd_validate(a)),
    };
    match result {
        Ok(output) => emit(out, output),
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}
