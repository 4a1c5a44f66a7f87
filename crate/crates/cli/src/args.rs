use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqed_core::analysis::{Engine, Field, Model, SweepVariable};
use cqed_core::Geometry;

#[derive(Parser, Debug)]
#[command(
    name = "cqed",
    version,
    about = "Single-emitter cavity steady states: solves, sweeps, peaks and model comparison"
)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one configuration and print all amplitudes as JSON.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    Solve(SolveArgs),
    /// Sweep one parameter and write CSV.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    Sweep(SweepArgs),
    /// Locate maxima and minima of one field along a sweep variable.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    Peaks(PeaksArgs),
    /// Compare the cascaded fields with the single-mode model over a detuning window.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    Compare(CompareArgs),
    /// Channeling efficiency of a dipole into a Gaussian mode of given waist.
    #[command(name = "beta-waist", args_override_self = true)]
    BetaWaist(BetaWaistArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Fp,
    Ring,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Fp => Geometry::FabryPerot,
            GeometryArg::Ring => Geometry::ChiralRing,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Jc,
    Cascaded,
    Both,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Jc => Model::Jc,
            ModelArg::Cascaded => Model::Cascaded,
            ModelArg::Both => Model::Both,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    #[value(name = "closed_form", alias = "closed-form")]
    ClosedForm,
    Oracle,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::ClosedForm => Engine::ClosedForm,
            EngineArg::Oracle => Engine::Oracle,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VarArg {
    Beta,
    Deltap,
    Alpha0,
    Xafrac,
}

impl From<VarArg> for SweepVariable {
    fn from(v: VarArg) -> Self {
        match v {
            VarArg::Beta => SweepVariable::Beta,
            VarArg::Deltap => SweepVariable::Deltap,
            VarArg::Alpha0 => SweepVariable::Alpha0,
            VarArg::Xafrac => SweepVariable::XaFrac,
        }
    }
}

/// Parses a real number or a multiple of pi: `pi`, `-pi/2`, `3pi/4`,
/// `2*pi/3`, `0.5`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let text: String = s
        .trim()
        .to_lowercase()
        .replace('π', "pi")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if text.is_empty() {
        return Err("empty value".into());
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text.strip_prefix('+').unwrap_or(&text)),
    };
    let mut value = 1.0;
    let mut op = '*';
    let mut rest = body;
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let factor = parse_factor(&rest[..end])
            .ok_or_else(|| format!("cannot parse '{s}' as a number or multiple of pi"))?;
        if op == '*' {
            value *= factor;
        } else {
            value /= factor;
        }
        if end == rest.len() {
            break;
        }
        op = rest.as_bytes()[end] as char;
        rest = &rest[end + 1..];
    }
    let v = sign * value;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_factor(f: &str) -> Option<f64> {
    if f == "pi" {
        return Some(std::f64::consts::PI);
    }
    if let Some(num) = f.strip_suffix("pi") {
        return num.parse::<f64>().ok().map(|x| x * std::f64::consts::PI);
    }
    if f.starts_with(['+', '-']) {
        return None;
    }
    f.parse().ok()
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: cqed_core::Error| e.to_string())
}

/// Parameters shared by every solving subcommand. Defaults are the
/// Fabry-Perot configuration `beta = 1/3`, `t^2 = 1e-4`, `nu_fsr = 250`,
/// emitter at an anti-node, on resonance.
#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    #[arg(long, value_enum, default_value = "fp")]
    pub geometry: GeometryArg,
    /// Total channeling efficiency (split evenly between directions in fp).
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub beta: f64,
    /// Forward channel efficiency; overrides --beta together with --beta2.
    #[arg(long, requires = "beta2")]
    pub beta1: Option<f64>,
    #[arg(long, requires = "beta1")]
    pub beta2: Option<f64>,
    /// Emitter decay rate; the unit of all other rates.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Standing-wave phase at the emitter, e.g. `pi`, `-pi/2`, `1.2`.
    #[arg(long, default_value = "pi", value_parser = parse_angle)]
    pub alpha0: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub t1sq: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub t2sq: f64,
    /// Explicit (possibly lossy) reflectivity of mirror 1.
    #[arg(long, conflicts_with = "lossless")]
    pub r1: Option<f64>,
    #[arg(long, conflicts_with = "lossless")]
    pub r2: Option<f64>,
    /// r = sqrt(1 - t^2) on both mirrors (the default without --r1/--r2).
    #[arg(long)]
    pub lossless: bool,
    #[arg(long = "nu-fsr", default_value_t = 250.0)]
    pub nu_fsr: f64,
    /// Emitter position as 2 x_a / L.
    #[arg(long = "xa-frac", default_value_t = 0.5)]
    pub xa_frac: f64,
    /// Emitter-probe detuning w0 - wp.
    #[arg(long, default_value_t = 0.0)]
    pub delta0: f64,
    /// Cavity-probe detuning wa - wp.
    #[arg(long, default_value_t = 0.0)]
    pub deltaa: f64,
    #[arg(long = "amp-in", default_value_t = 1.0)]
    pub amp_in: f64,
    /// Gaussian mode waist in wavelengths; sets --beta from the mode overlap.
    #[arg(long)]
    pub waist: Option<f64>,
    #[arg(long, value_enum, default_value = "cascaded")]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value = "closed_form")]
    pub engine: EngineArg,
    /// key=value file of flag defaults; explicit flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    #[command(flatten)]
    pub system: SystemArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum)]
    pub var: VarArg,
    #[arg(long, value_parser = parse_angle)]
    pub from: f64,
    #[arg(long, value_parser = parse_angle)]
    pub to: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// w0 - wa, held fixed while sweeping deltap.
    #[arg(long = "emitter-cavity-detuning", default_value_t = 0.0)]
    pub emitter_cavity_detuning: f64,
}

#[derive(Args, Debug, Clone)]
pub struct PeaksArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value = "deltap")]
    pub var: VarArg,
    #[arg(long, value_parser = parse_angle)]
    pub from: f64,
    #[arg(long, value_parser = parse_angle)]
    pub to: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long, default_value = "phi1", value_parser = parse_field)]
    pub field: Field,
    /// Refinement stops once the position moves less than this.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long = "emitter-cavity-detuning", default_value_t = 0.0)]
    pub emitter_cavity_detuning: f64,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Half-width of the detuning window in units of g.
    #[arg(long, default_value_t = 3.0)]
    pub span: f64,
}

#[derive(Args, Debug, Clone)]
pub struct BetaWaistArgs {
    /// Waist in wavelengths.
    #[arg(long)]
    pub waist: f64,
    #[arg(long = "theta-points", default_value_t = 32)]
    pub theta_points: usize,
    #[arg(long = "phi-points", default_value_t = 32)]
    pub phi_points: usize,
    #[arg(long)]
    pub config: Option<PathBuf>,
}
