//! Command-line front end for `cqed-core`.
//!
//! Exit codes: 0 success, 2 invalid flags or configuration, 3 solver error.

pub mod args;
pub mod config;
pub mod output;

use std::fs::File;
use std::io::{BufWriter, Write};

use clap::Parser;
use cqed_core::analysis::{
    compare_models, find_extrema, linear_grid, solve_point, sweep, Evaluator, Field, Model,
    SweepVariable,
};
use cqed_core::overlap::{analytic_warning, beta_analytic, beta_numeric, OverlapConfig};
use cqed_core::params::warnings;
use cqed_core::{
    rabi_shift, CavitySpec, EmitterSpec, Engine, Geometry, MirrorSpec, ProbeSpec, SystemSpec,
};
use serde_json::{json, Map, Value};

use args::{BetaWaistArgs, Cli, Command, CompareArgs, PeaksArgs, SolveArgs, SweepArgs, SystemArgs};
use output::{amplitude, to_json, write_csv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },
    #[error("invalid parameters: {0}")]
    Spec(cqed_core::Error),
    #[error("solver error: {0}")]
    Solver(cqed_core::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) => 3,
            _ => 2,
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Normal output goes to `out`, diagnostics
/// to `err`.
pub fn main_with<O: Write, E: Write>(args: Vec<String>, out: &mut O, err: &mut E) -> i32 {
    let args = match config::expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return e.exit_code();
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<O: Write>(command: Command, out: &mut O) -> Result<(), CliError> {
    match command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Peaks(a) => cmd_peaks(&a, out),
        Command::Compare(a) => cmd_compare(&a, out),
        Command::BetaWaist(a) => cmd_beta_waist(&a, out),
    }
}

/// Builds the system described by the flags. Invalid values are usage
/// errors.
pub fn build_spec(a: &SystemArgs) -> Result<(SystemSpec, Vec<String>), CliError> {
    let mut notes = Vec::new();
    let mirror = |t_sq: f64, r: Option<f64>| -> Result<MirrorSpec, CliError> {
        if !(0.0..=1.0).contains(&t_sq) {
            return Err(CliError::Usage(format!("t^2 = {t_sq} outside [0, 1]")));
        }
        match r {
            Some(r) => MirrorSpec::new(r, t_sq.sqrt()),
            None => MirrorSpec::lossless(t_sq),
        }
        .map_err(CliError::Spec)
    };
    let geometry: Geometry = a.geometry.into();
    let beta = match a.waist {
        Some(w) => {
            let r = beta_numeric(&OverlapConfig::new(w)).map_err(CliError::Spec)?;
            notes.push(format!(
                "beta = {} from waist {w} lambda",
                output::fmt_f64(r.beta)
            ));
            r.beta
        }
        None => a.beta,
    };
    let emitter = match (a.beta1, a.beta2) {
        (Some(b1), Some(b2)) => EmitterSpec::new(a.gamma, b1, b2),
        _ => match geometry {
            Geometry::FabryPerot => EmitterSpec::symmetric(a.gamma, beta),
            Geometry::ChiralRing => EmitterSpec::chiral(a.gamma, beta),
        },
    }
    .map_err(CliError::Spec)?;
    let spec = SystemSpec {
        mirror1: mirror(a.t1sq, a.r1)?,
        mirror2: mirror(a.t2sq, a.r2)?,
        emitter,
        cavity: CavitySpec {
            nu_fsr: a.nu_fsr,
            xa_frac: a.xa_frac,
            alpha0: a.alpha0,
        },
        probe: ProbeSpec {
            delta0: a.delta0,
            delta_a: a.deltaa,
            amp_in: a.amp_in,
        },
        geometry,
    };
    spec.validate().map_err(CliError::Spec)?;
    Ok((spec, notes))
}

fn geometry_name(g: Geometry) -> &'static str {
    match g {
        Geometry::FabryPerot => "fp",
        Geometry::ChiralRing => "ring",
    }
}

fn all_warnings(spec: &SystemSpec, mut notes: Vec<String>) -> Vec<String> {
    notes.extend(warnings(spec));
    notes
}

/// JSON document for a single configuration.
pub fn solve_document(
    spec: &SystemSpec,
    model: Model,
    engine: Engine,
    notes: Vec<String>,
) -> Result<Value, CliError> {
    let (cascaded, jc) = solve_point(spec, model, engine).map_err(CliError::Solver)?;
    let cascaded = cascaded.map(|s| {
        let names = [
            "phi1",
            "phi2",
            "phi3",
            "phi4",
            "phi0",
            "phi_ref",
            "phi_trans",
        ];
        let map: Map<String, Value> = names
            .iter()
            .zip(s.amplitudes())
            .map(|(n, z)| (n.to_string(), amplitude(z)))
            .collect();
        Value::Object(map)
    });
    let jc = jc.map(|j| {
        json!({
            "phi_a": amplitude(j.phi_a),
            "phi_a_local": amplitude(j.phi_a_local),
            "phi0": amplitude(j.phi0),
            "phi_ref": amplitude(j.phi_ref),
            "phi_trans": amplitude(j.phi_trans),
        })
    });
    let derived = spec.derived().map_err(CliError::Solver)?;
    Ok(json!({
        "command": "solve",
        "model": model.to_string(),
        "engine": engine.to_string(),
        "geometry": geometry_name(spec.geometry),
        "parameters": spec,
        "derived": derived,
        "cascaded": cascaded,
        "jc": jc,
        "warnings": all_warnings(spec, notes),
    }))
}

fn cmd_solve<O: Write>(a: &SolveArgs, out: &mut O) -> Result<(), CliError> {
    let (spec, notes) = build_spec(&a.system)?;
    let doc = solve_document(&spec, a.system.model.into(), a.system.engine.into(), notes)?;
    writeln!(out, "{}", to_json(&doc))?;
    Ok(())
}

fn evaluator(
    system: &SystemArgs,
    spec: SystemSpec,
    variable: SweepVariable,
    offset: f64,
    model: Model,
) -> Evaluator {
    Evaluator {
        base: spec,
        variable,
        emitter_cavity_detuning: offset,
        model,
        engine: system.engine.into(),
    }
}

fn cmd_sweep<O: Write>(a: &SweepArgs, out: &mut O) -> Result<(), CliError> {
    let (spec, _) = build_spec(&a.system)?;
    let grid = linear_grid(a.from, a.to, a.points).map_err(|e| CliError::Usage(e.to_string()))?;
    let eval = evaluator(
        &a.system,
        spec,
        a.var.into(),
        a.emitter_cavity_detuning,
        a.system.model.into(),
    );
    let result = sweep(&eval, grid);
    let io_err = |e: csv::Error| CliError::Io(std::io::Error::other(e.to_string()));
    match &a.out {
        Some(path) => {
            let file = File::create(path)?;
            write_csv(&result, BufWriter::new(file)).map_err(io_err)?;
        }
        None => write_csv(&result, &mut *out).map_err(io_err)?,
    }
    Ok(())
}

fn cmd_peaks<O: Write>(a: &PeaksArgs, out: &mut O) -> Result<(), CliError> {
    let (spec, notes) = build_spec(&a.system)?;
    let mut model: Model = a.system.model.into();
    let needs_jc = a.field.is_jc();
    if (needs_jc && !model.has_jc()) || (!needs_jc && !model.has_cascaded()) {
        model = Model::Both;
    }
    let variable: SweepVariable = a.var.into();
    let eval = evaluator(&a.system, spec, variable, a.emitter_cavity_detuning, model);
    let field: Field = a.field;
    let report = find_extrema(
        |x| eval.magnitude(field, x),
        field,
        a.from,
        a.to,
        a.points,
        a.tol,
    )
    .map_err(|e| match e {
        cqed_core::Error::Domain(_) => CliError::Usage(e.to_string()),
        other => CliError::Solver(other),
    })?;
    let prediction = match (spec.geometry, variable) {
        (Geometry::FabryPerot, SweepVariable::Deltap) => rabi_shift(&spec).ok().map(|r| {
            json!({ "shift": r.shift, "lower_peak": r.peaks.0, "upper_peak": r.peaks.1, "warnings": r.warnings })
        }),
        _ => None,
    };
    let doc = json!({
        "command": "peaks",
        "variable": variable.name(),
        "unit": variable.unit(),
        "field": field.name(),
        "model": model.to_string(),
        "engine": eval.engine.to_string(),
        "extrema": report.extrema,
        "grid_step": report.grid_step,
        "grid_points": report.grid_points,
        "tolerance": report.tolerance,
        "rabi_shift_prediction": prediction,
        "warnings": all_warnings(&spec, [notes, report.warnings].concat()),
    });
    writeln!(out, "{}", to_json(&doc))?;
    Ok(())
}

fn cmd_compare<O: Write>(a: &CompareArgs, out: &mut O) -> Result<(), CliError> {
    let (spec, notes) = build_spec(&a.system)?;
    if a.points == 0 || !(a.span > 0.0) {
        return Err(CliError::Usage(
            "compare needs points >= 1 and span > 0".into(),
        ));
    }
    let report = compare_models(&spec, a.system.engine.into(), a.span, a.points)
        .map_err(CliError::Solver)?;
    let doc = json!({
        "command": "compare",
        "engine": Engine::from(a.system.engine).to_string(),
        "report": report,
        "warnings": all_warnings(&spec, notes),
    });
    writeln!(out, "{}", to_json(&doc))?;
    Ok(())
}

fn cmd_beta_waist<O: Write>(a: &BetaWaistArgs, out: &mut O) -> Result<(), CliError> {
    let analytic = beta_analytic(a.waist).map_err(CliError::Spec)?;
    let cfg = OverlapConfig {
        w0_over_lambda: a.waist,
        theta_points: a.theta_points,
        phi_points: a.phi_points,
    };
    let numeric = beta_numeric(&cfg).map_err(|e| match e {
        cqed_core::Error::Domain(_) => CliError::Spec(e),
        other => CliError::Solver(other),
    })?;
    let doc = json!({
        "command": "beta-waist",
        "waist": a.waist,
        "beta_analytic": analytic,
        "beta_numeric": numeric.beta,
        "forward": numeric.forward,
        "backward": numeric.backward,
        "relative_difference": (numeric.beta - analytic) / analytic,
        "convergence_delta": numeric.convergence_delta,
        "theta_points": numeric.theta_points,
        "phi_points": numeric.phi_points,
        "warnings": analytic_warning(a.waist).into_iter().collect::<Vec<_>>(),
    });
    writeln!(out, "{}", to_json(&doc))?;
    Ok(())
}
