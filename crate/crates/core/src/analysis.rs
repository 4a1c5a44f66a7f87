//! Parameter sweeps, spectral extrema and model comparison built on the
//! solvers.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::cascaded::{cascaded_steady_state, FpSteadyState};
use crate::error::{domain, Result};
use crate::jc::{jc_mirror_probe, JcSteadyState};
use crate::oracle::oracle_solve;
use crate::params::{ComplexAmp, Geometry, ProbeSpec, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Jc,
    Cascaded,
    Both,
}

impl Model {
    pub fn has_cascaded(self) -> bool {
        matches!(self, Model::Cascaded | Model::Both)
    }

    pub fn has_jc(self) -> bool {
        matches!(self, Model::Jc | Model::Both)
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::ClosedForm => "closed_form",
            Engine::Oracle => "oracle",
        })
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Jc => "jc",
            Model::Cascaded => "cascaded",
            Model::Both => "both",
        })
    }
}

/// Amplitudes that can be selected for peak finding and output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    Phi0,
    PhiRef,
    PhiTrans,
    PhiJc,
    Phi0Jc,
    PhiRefJc,
    PhiTransJc,
}

impl Field {
    pub const CASCADED: [Field; 7] = [
        Field::Phi1,
        Field::Phi2,
        Field::Phi3,
        Field::Phi4,
        Field::Phi0,
        Field::PhiRef,
        Field::PhiTrans,
    ];
    pub const JC: [Field; 4] = [
        Field::PhiJc,
        Field::Phi0Jc,
        Field::PhiRefJc,
        Field::PhiTransJc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Field::Phi1 => "phi1",
            Field::Phi2 => "phi2",
            Field::Phi3 => "phi3",
            Field::Phi4 => "phi4",
            Field::Phi0 => "phi0",
            Field::PhiRef => "phi_ref",
            Field::PhiTrans => "phi_trans",
            Field::PhiJc => "phi_jc",
            Field::Phi0Jc => "phi0_jc",
            Field::PhiRefJc => "phi_ref_jc",
            Field::PhiTransJc => "phi_trans_jc",
        }
    }

    pub fn is_jc(self) -> bool {
        Field::JC.contains(&self)
    }

    /// Fields present in the output of `model`.
    pub fn for_model(model: Model) -> Vec<Field> {
        let mut v = Vec::new();
        if model.has_cascaded() {
            v.extend(Field::CASCADED);
        }
        if model.has_jc() {
            v.extend(Field::JC);
        }
        v
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Field {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Field::CASCADED
            .iter()
            .chain(Field::JC.iter())
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| domain(format!("unknown field '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Total channeling efficiency (split evenly for the Fabry-Perot).
    Beta,
    /// Probe detuning `delta0 = w0 - wp`, with the cavity following at a
    /// fixed emitter-cavity offset.
    Deltap,
    Alpha0,
    XaFrac,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Beta => "beta",
            SweepVariable::Deltap => "deltap",
            SweepVariable::Alpha0 => "alpha0",
            SweepVariable::XaFrac => "xafrac",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            SweepVariable::Beta | SweepVariable::XaFrac => "1",
            SweepVariable::Deltap => "gamma",
            SweepVariable::Alpha0 => "rad",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(SweepVariable::Beta),
            "deltap" => Ok(SweepVariable::Deltap),
            "alpha0" => Ok(SweepVariable::Alpha0),
            "xafrac" => Ok(SweepVariable::XaFrac),
            _ => Err(domain(format!("unknown sweep variable '{s}'"))),
        }
    }
}

/// Solver configuration for a family of specs parametrised by one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluator {
    pub base: SystemSpec,
    pub variable: SweepVariable,
    /// `w0 - wa`, held fixed in detuning sweeps.
    pub emitter_cavity_detuning: f64,
    pub model: Model,
    pub engine: Engine,
}

/// Solutions at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub cascaded: Option<FpSteadyState>,
    pub jc: Option<JcSteadyState>,
}

impl Point {
    pub fn field(&self, field: Field) -> Option<ComplexAmp> {
        if field.is_jc() {
            let j = self.jc?;
            return Some(match field {
                Field::PhiJc => j.phi_a_local,
                Field::Phi0Jc => j.phi0,
                Field::PhiRefJc => j.phi_ref,
                _ => j.phi_trans,
            });
        }
        let c = self.cascaded?;
        Some(match field {
            Field::Phi1 => c.phi1,
            Field::Phi2 => c.phi2,
            Field::Phi3 => c.phi3,
            Field::Phi4 => c.phi4,
            Field::Phi0 => c.phi0,
            Field::PhiRef => c.phi_ref,
            _ => c.phi_trans,
        })
    }
}

/// Solves a single spec under the requested model and engine.
pub fn solve_point(
    spec: &SystemSpec,
    model: Model,
    engine: Engine,
) -> Result<(Option<FpSteadyState>, Option<JcSteadyState>)> {
    let cascaded = if model.has_cascaded() {
        Some(match engine {
            Engine::ClosedForm => cascaded_steady_state(spec)?,
            Engine::Oracle => oracle_solve(spec)?,
        })
    } else {
        None
    };
    let jc = if model.has_jc() {
        Some(jc_mirror_probe(spec)?)
    } else {
        None
    };
    Ok((cascaded, jc))
}

impl Evaluator {
    pub fn spec_at(&self, x: f64) -> SystemSpec {
        let mut s = self.base;
        match self.variable {
            SweepVariable::Beta => match s.geometry {
                Geometry::FabryPerot => {
                    s.emitter.beta1 = x / 2.0;
                    s.emitter.beta2 = x / 2.0;
                }
                Geometry::ChiralRing => {
                    s.emitter.beta1 = x;
                    s.emitter.beta2 = 0.0;
                }
            },
            SweepVariable::Deltap => {
                s.probe = ProbeSpec {
                    delta0: x,
                    delta_a: x - self.emitter_cavity_detuning,
                    amp_in: s.probe.amp_in,
                };
            }
            SweepVariable::Alpha0 => s.cavity.alpha0 = x,
            SweepVariable::XaFrac => s.cavity.xa_frac = x,
        }
        s
    }

    pub fn eval(&self, x: f64) -> Result<Point> {
        let spec = self.spec_at(x);
        spec.validate()?;
        let (cascaded, jc) = solve_point(&spec, self.model, self.engine)?;
        Ok(Point { x, cascaded, jc })
    }

    /// `|field|` as a function of the sweep variable.
    pub fn magnitude(&self, field: Field, x: f64) -> Result<f64> {
        let p = self.eval(x)?;
        p.field(field).map(|z| z.norm()).ok_or_else(|| {
            domain(format!(
                "field {field} is not produced by model {}",
                self.model
            ))
        })
    }
}

/// `points` equally spaced values from `from` to `to` inclusive.
pub fn linear_grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(domain("a grid needs at least one point"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(domain("grid bounds must be finite"));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    if from == to {
        return Err(domain("grid bounds must differ when points > 1"));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            if k == points - 1 {
                to
            } else {
                from + step * k as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub point: Option<Point>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub rows: Vec<SweepRow>,
    pub engine: Engine,
    pub model: Model,
}

/// Evaluates every grid point (in parallel); rows keep grid order and a
/// failing point is recorded rather than aborting the sweep.
pub fn sweep(eval: &Evaluator, grid: Vec<f64>) -> SweepResult {
    let rows = grid
        .par_iter()
        .map(|&x| match eval.eval(x) {
            Ok(p) => SweepRow {
                x,
                point: Some(p),
                error: None,
            },
            Err(e) => SweepRow {
                x,
                point: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    SweepResult {
        variable: eval.variable,
        grid,
        rows,
        engine: eval.engine,
        model: eval.model,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremum {
    pub position: f64,
    pub height: f64,
    pub kind: ExtremumKind,
    pub field: Field,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakReport {
    pub field: Field,
    pub extrema: Vec<Extremum>,
    pub grid_step: f64,
    pub grid_points: usize,
    pub tolerance: f64,
    pub warnings: Vec<String>,
}

impl PeakReport {
    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Max)
    }

    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema.iter().filter(|e| e.kind == ExtremumKind::Min)
    }

    /// The `n` highest maxima, sorted by position.
    pub fn top_maxima(&self, n: usize) -> Vec<&Extremum> {
        let mut m: Vec<&Extremum> = self.maxima().collect();
        m.sort_by(|a, b| b.height.total_cmp(&a.height));
        m.truncate(n);
        m.sort_by(|a, b| a.position.total_cmp(&b.position));
        m
    }

    /// The deepest minimum.
    pub fn lowest_minimum(&self) -> Option<&Extremum> {
        self.minima().min_by(|a, b| a.height.total_cmp(&b.height))
    }
}

pub const MIN_PEAK_GRID: usize = 200;
pub const PEAK_TOL: f64 = 1e-4;
const MAX_REFINE: usize = 200;

fn log_mag(v: f64) -> f64 {
    v.max(1e-300).ln()
}

/// Vertex of the parabola through three points.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> Option<f64> {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let curv = (d2 - d1) / (x[2] - x[0]);
    if curv == 0.0 || !curv.is_finite() {
        return None;
    }
    Some((x[0] + x[1]) / 2.0 - d1 / (2.0 * curv))
}

/// Locates local extrema of `f` on a grid over `[from, to]` and refines
/// each by repeated parabolic interpolation of `ln f` on a shrinking
/// three-point stencil.
pub fn find_extrema<F>(
    f: F,
    field: Field,
    from: f64,
    to: f64,
    points: usize,
    tol: f64,
) -> Result<PeakReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if points < MIN_PEAK_GRID {
        return Err(domain(format!(
            "peak search needs at least {MIN_PEAK_GRID} grid points (got {points})"
        )));
    }
    if !(tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    let (lo, hi) = (from.min(to), from.max(to));
    let grid = linear_grid(lo, hi, points)?;
    let values: Vec<f64> = grid.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let step = grid[1] - grid[0];

    let mut extrema = Vec::new();
    for k in 1..points - 1 {
        let (a, b, c) = (values[k - 1], values[k], values[k + 1]);
        let kind = if b > a && b >= c {
            ExtremumKind::Max
        } else if b < a && b <= c {
            ExtremumKind::Min
        } else {
            continue;
        };
        let (position, iterations) = refine(&f, grid[k], step, kind, lo, hi, tol)?;
        extrema.push(Extremum {
            position,
            height: f(position)?,
            kind,
            field,
            iterations,
        });
    }
    let mut warnings = Vec::new();
    if extrema.is_empty() {
        warnings.push(format!("no extremum of {field} found in [{lo}, {hi}]"));
    }
    Ok(PeakReport {
        field,
        extrema,
        grid_step: step,
        grid_points: points,
        tolerance: tol,
        warnings,
    })
}

fn refine<F>(
    f: &F,
    x0: f64,
    step: f64,
    kind: ExtremumKind,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let better = |a: f64, b: f64| match kind {
        ExtremumKind::Max => a > b,
        ExtremumKind::Min => a < b,
    };
    let mut x = x0;
    let mut h = step;
    for it in 1..=MAX_REFINE {
        let xs = [(x - h).max(lo), x, (x + h).min(hi)];
        if xs[0] == xs[1] || xs[1] == xs[2] {
            return Ok((x, it));
        }
        let fs = [f(xs[0])?, f(xs[1])?, f(xs[2])?];
        // keep the stencil centred on the best sample before fitting
        if better(fs[0], fs[1]) && better(fs[0], fs[2]) {
            x = xs[0];
            continue;
        }
        if better(fs[2], fs[1]) && better(fs[2], fs[0]) {
            x = xs[2];
            continue;
        }
        let ys = fs.map(log_mag);
        let next = parabola_vertex(xs, ys)
            .map(|v| v.clamp(xs[0], xs[2]))
            .unwrap_or(x);
        let shift = (next - x).abs();
        x = next;
        h = (h / 4.0).max(shift * 2.0).min(h);
        if shift < tol && h < 100.0 * tol {
            return Ok((x, it));
        }
    }
    Ok((x, MAX_REFINE))
}

/// Deviation statistics of one cascaded field against the single-mode
/// cavity amplitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDeviation {
    pub field: Field,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub max_abs: f64,
    /// Grid points where the reference vanishes and only the absolute
    /// difference is meaningful.
    pub abs_fallback_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub g: f64,
    pub detuning_from: f64,
    pub detuning_to: f64,
    pub points: usize,
    pub fields: Vec<FieldDeviation>,
    /// Largest relative deviation of `|phi0|` between the models.
    pub phi0_max_rel: f64,
    pub overall_max_rel: f64,
    pub jc_margin: Option<f64>,
}

/// Relative deviations below this reference magnitude fall back to absolute
/// differences.
const REFERENCE_FLOOR: f64 = 1e-12;

/// Compares the cascaded fields with the single-mode prediction over the
/// common detuning window `[-span g, span g]`. With `g = 0` the window
/// degenerates to the resonant point.
pub fn compare_models(
    spec: &SystemSpec,
    engine: Engine,
    span: f64,
    points: usize,
) -> Result<CompareReport> {
    spec.validate()?;
    let g = spec.coupling_g()?;
    let grid = if g > 0.0 {
        linear_grid(-span * g, span * g, points)?
    } else {
        vec![0.0]
    };
    let eval = Evaluator {
        base: *spec,
        variable: SweepVariable::Deltap,
        emitter_cavity_detuning: 0.0,
        model: Model::Both,
        engine,
    };
    let solved: Vec<Point> = grid
        .par_iter()
        .map(|&x| eval.eval(x))
        .collect::<Result<_>>()?;

    let mut fields = Vec::new();
    for field in [Field::Phi1, Field::Phi2, Field::Phi3, Field::Phi4] {
        let mut dev = FieldDeviation {
            field,
            max_rel: 0.0,
            mean_rel: 0.0,
            max_abs: 0.0,
            abs_fallback_points: 0,
        };
        let mut n_rel = 0usize;
        for p in &solved {
            let reference = p.field(Field::PhiJc).unwrap().norm();
            let value = p.field(field).unwrap().norm();
            let diff = (value - reference).abs();
            dev.max_abs = dev.max_abs.max(diff);
            if reference > REFERENCE_FLOOR * spec.mirror1.t {
                let rel = diff / reference;
                dev.max_rel = dev.max_rel.max(rel);
                dev.mean_rel += rel;
                n_rel += 1;
            } else {
                dev.abs_fallback_points += 1;
            }
        }
        if n_rel > 0 {
            dev.mean_rel /= n_rel as f64;
        }
        fields.push(dev);
    }
    let phi0_max_rel = solved
        .iter()
        .map(|p| {
            let a = p.field(Field::Phi0).unwrap().norm();
            let b = p.field(Field::Phi0Jc).unwrap().norm();
            if b > 0.0 {
                (a - b).abs() / b
            } else {
                (a - b).abs()
            }
        })
        .fold(0.0, f64::max);
    let overall_max_rel = fields.iter().map(|d| d.max_rel).fold(0.0, f64::max);
    let derived = spec.derived()?;
    Ok(CompareReport {
        g,
        detuning_from: grid[0],
        detuning_to: *grid.last().unwrap(),
        points: grid.len(),
        fields,
        phi0_max_rel,
        overall_max_rel,
        jc_margin: derived.jc_margin,
    })
}
