//! Job schema, dispatch and output for the `symtorus` binary.
//!
//! A job comes from `--input job.json`, from flags, or both (flags win).
//! Reports are JSON objects with sorted keys, so identical jobs give
//! byte-identical output; `--pretty` renders the same object as text.

mod expr;
mod render;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classification::{classify, decide_symplectic, enumerate_admissible, Verdict, VerdictDetail};
use crate::cohomology::{class_of_cocycle, coinvariants, cohomology_context, rational_image, CohClass, CohContext};
use crate::error::{Error, Result};
use crate::exact::{FgAbelianGroup, Int, IntMatrix, Rat};
use crate::heisenberg::HeisElement;
use crate::huebschmann::{lift_representation, synthesize_extension, verify_theorem21};
use crate::selftest;
use crate::surfaces::{fixtures, validate_representation, Representation, SurfaceSpec};

pub use expr::eval_heis_expr;
pub use render::render_pretty;

pub const DEFAULT_BOUND: i64 = 5;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Decide,
    Enumerate,
    Cohomology,
    VerifyHuebschmann,
    HeisEval,
    Selftest,
}

/// Generator images as row-major matrices, or one of the names accepted by
/// [`named_representation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoSpec {
    Named(String),
    Matrices(Vec<Vec<Vec<i64>>>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub surface: Option<SurfaceSpec>,
    #[serde(default)]
    pub rho: Option<RhoSpec>,
    #[serde(default)]
    pub class: Option<Vec<i64>>,
    #[serde(default)]
    pub t: Option<Vec<i64>>,
    #[serde(default)]
    pub bound: Option<i64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub expr: Option<String>,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<JobSpec> {
        serde_json::from_str(text).map_err(|e| Error::InvalidJob(e.to_string()))
    }

    pub fn surface(&self) -> SurfaceSpec {
        self.surface.unwrap_or(SurfaceSpec::TORUS)
    }

    pub fn representation(&self) -> Result<Representation> {
        let s = self.surface();
        s.validate()?;
        match &self.rho {
            None => Representation::trivial(s),
            Some(RhoSpec::Named(name)) => named_representation(s, name),
            Some(RhoSpec::Matrices(ms)) => {
                let images = ms.iter().map(|m| matrix_from_rows(m)).collect::<Result<Vec<_>>>()?;
                validate_representation(s, images)
            }
        }
    }
}

fn matrix_from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
    let rows: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(0, 0));
    }
    IntMatrix::from_rows(rows)
}

/// `trivial`, `minus-identity` (every generator acts by `-I`), `example1`
/// (the unipotent torus action) or `example2:m,n`.
pub fn named_representation(s: SurfaceSpec, name: &str) -> Result<Representation> {
    let name = name.trim();
    let torus_only = |rho: Representation| -> Result<Representation> {
        if !s.is_torus() {
            return Err(Error::NotTorus);
        }
        Ok(rho)
    };
    match name {
        "trivial" | "identity" => Representation::trivial(s),
        "minus-identity" | "-I" => {
            validate_representation(s, vec![IntMatrix::identity(2).neg(); s.generator_count()])
        }
        "example1" | "unipotent" => torus_only(fixtures::kodaira_thurston()),
        _ => {
            let Some(args) = name.strip_prefix("example2:") else {
                return Err(Error::Parse(format!("unknown representation name {name:?}")));
            };
            let mn = parse_int_list(args)?;
            if mn.len() != 2 || mn.iter().any(|&v| v < 0) {
                return Err(Error::Parse(format!("example2 expects two non-negative integers, got {args:?}")));
            }
            torus_only(fixtures::finite_coinvariants(mn[0], mn[1]))
        }
    }
}

pub fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("not an integer: {:?}", p.trim()))))
        .collect()
}

/// `torus`, `sphere`, `rp2`, `klein`, `<kind>:<genus>` or a JSON object.
pub fn parse_surface(text: &str) -> Result<SurfaceSpec> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| Error::Parse(format!("surface: {e}")));
    }
    let s = match text {
        "torus" => SurfaceSpec::TORUS,
        "sphere" | "s2" => SurfaceSpec::SPHERE,
        "rp2" | "projective-plane" => SurfaceSpec::PROJECTIVE_PLANE,
        "klein" | "klein-bottle" => SurfaceSpec::NonOrientableClosed { genus: 2 },
        _ => {
            let (kind, genus) =
                text.split_once(':').ok_or_else(|| Error::Parse(format!("unknown surface {text:?}")))?;
            let genus: u32 = genus.trim().parse().map_err(|_| Error::Parse(format!("bad genus in {text:?}")))?;
            match kind.trim() {
                "orientable-closed" | "orientable" => SurfaceSpec::OrientableClosed { genus },
                "nonorientable-closed" | "nonorientable" => SurfaceSpec::NonOrientableClosed { genus },
                "open" => SurfaceSpec::Open { genus },
                other => return Err(Error::Parse(format!("unknown surface kind {other:?}"))),
            }
        }
    };
    Ok(s)
}

fn parse_rho(text: &str) -> Result<RhoSpec> {
    let text = text.trim();
    if text.starts_with('[') {
        return serde_json::from_str(text).map(RhoSpec::Matrices).map_err(|e| Error::Parse(format!("rho: {e}")));
    }
    Ok(RhoSpec::Named(text.to_string()))
}

fn int_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

fn ints_json(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(int_json).collect())
}

fn rat_json(x: &Rat) -> Value {
    if x.is_integer() {
        int_json(x.numer())
    } else {
        Value::String(x.to_string())
    }
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints_json(m.row(i))).collect())
}

fn group_json(g: &FgAbelianGroup) -> Value {
    json!({
        "group": g.to_string(),
        "invariant_factors": ints_json(g.invariant_factors()),
        "free_rank": g.free_rank(),
        "torsion_order": int_json(&g.torsion_order()),
    })
}

fn class_json(c: &CohClass) -> Value {
    json!({
        "representative": ints_json(c.representative()),
        "coords": ints_json(c.coords()),
        "torsion": c.is_torsion(),
        "order": c.order().as_ref().map(int_json),
    })
}

fn verdict_json(v: &Verdict) -> Value {
    let witness = match &v.detail {
        VerdictDetail::TorsionOrder(n) => json!({ "torsion_order": int_json(n) }),
        VerdictDetail::NonTorsion { coordinate, value } => {
            json!({ "non_torsion": { "coordinate": coordinate, "value": int_json(value) } })
        }
    };
    let mut out = json!({ "admits": v.admits, "branch": v.branch.as_str(), "witness": witness });
    if let Some(note) = &v.note {
        out["note"] = Value::String(note.clone());
    }
    out
}

fn heis_json(h: &HeisElement) -> Value {
    json!({ "a": rat_json(&h.a), "b": int_json(&h.b), "c": int_json(&h.c) })
}

fn job_class(job: &JobSpec, ctx: &std::sync::Arc<CohContext>, command: &str) -> Result<CohClass> {
    let rep = job.class.as_ref().ok_or_else(|| Error::InvalidJob(format!("{command} requires a class")))?;
    CohClass::from_representative(ctx, rep.iter().map(|&x| Int::from(x)).collect())
}

/// Executes a job and returns its JSON report.
pub fn run(job: &JobSpec) -> Result<Value> {
    let command = job.command.ok_or_else(|| Error::InvalidJob("no command given".into()))?;
    let mut report = match command {
        Command::Classify => run_classify(job)?,
        Command::Decide => run_decide(job)?,
        Command::Enumerate => run_enumerate(job)?,
        Command::Cohomology => run_cohomology(job)?,
        Command::VerifyHuebschmann => run_verify(job)?,
        Command::HeisEval => run_heis_eval(job)?,
        Command::Selftest => run_selftest(),
    };
    report["command"] = serde_json::to_value(command).expect("serializable");
    Ok(report)
}

fn surface_json(s: SurfaceSpec) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn run_classify(job: &JobSpec) -> Result<Value> {
    let s = job.surface();
    let rho = job.representation()?;
    let g = classify(s, &rho)?;
    let mut out = group_json(&g);
    out["surface"] = surface_json(s);
    Ok(out)
}

fn run_decide(job: &JobSpec) -> Result<Value> {
    let s = job.surface();
    let rho = job.representation()?;
    let ctx = cohomology_context(s, &rho)?;
    let c = job_class(job, &ctx, "decide")?;
    let v = decide_symplectic(s, &rho, &c)?;
    let mut out = verdict_json(&v);
    out["surface"] = surface_json(s);
    out["class"] = class_json(&c);
    out["invariant_factors"] = ints_json(ctx.h2().invariant_factors());
    Ok(out)
}

fn run_enumerate(job: &JobSpec) -> Result<Value> {
    let s = job.surface();
    let rho = job.representation()?;
    let ctx = cohomology_context(s, &rho)?;
    let classes = enumerate_admissible(s, &rho)?;
    Ok(json!({
        "surface": surface_json(s),
        "invariant_factors": ints_json(ctx.h2().invariant_factors()),
        "count": classes.len(),
        "classes": classes.iter().map(class_json).collect::<Vec<_>>(),
    }))
}

fn run_cohomology(job: &JobSpec) -> Result<Value> {
    let s = job.surface();
    let rho = job.representation()?;
    let ctx = cohomology_context(s, &rho)?;
    let mut out = json!({
        "surface": surface_json(s),
        "h0": group_json(ctx.h0()),
        "h1": group_json(ctx.h1()),
        "h2": group_json(ctx.h2()),
        "invariant_factors": ints_json(ctx.h2().invariant_factors()),
        "coinvariants": group_json(&coinvariants(&rho)),
        "d1": matrix_json(ctx.d1()),
        "d2": matrix_json(ctx.d2()),
    });
    if job.class.is_some() {
        let c = job_class(job, &ctx, "cohomology")?;
        out["class"] = class_json(&c);
        out["rational_image"] = Value::Array(rational_image(&c).iter().map(rat_json).collect());
    }
    Ok(out)
}

fn run_verify(job: &JobSpec) -> Result<Value> {
    let rho = job.representation()?;
    let t: Vec<Int> = job.t.clone().unwrap_or_else(|| vec![1, 0]).into_iter().map(Int::from).collect();
    let bound = job.bound.unwrap_or(DEFAULT_BOUND);
    let samples = job.samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = job.seed.unwrap_or(selftest::SEED);
    let report = verify_theorem21(&rho, &t, bound, samples, seed)?;
    let ext = synthesize_extension(&rho, &t)?;
    let c = class_of_cocycle(&ext)?;
    let sigma = lift_representation(&rho)?;
    let lifts: Vec<Value> = sigma
        .images()
        .iter()
        .map(|a| json!({ "top": a.top().iter().map(rat_json).collect::<Vec<_>>(), "bottom": matrix_json(a.bottom()) }))
        .collect();
    let mut out = serde_json::to_value(&report).expect("serializable");
    out["all_passed"] = Value::Bool(report.all_passed());
    out["failed"] = Value::from(report.samples - report.passed);
    out["surface"] = surface_json(rho.surface());
    out["t"] = ints_json(&t);
    out["class"] = class_json(&c);
    out["rational_image"] = Value::Array(rational_image(&c).iter().map(rat_json).collect());
    out["sigma_lift"] = Value::Array(lifts);
    Ok(out)
}

fn run_heis_eval(job: &JobSpec) -> Result<Value> {
    let src = job.expr.as_deref().ok_or_else(|| Error::InvalidJob("heis-eval requires an expression".into()))?;
    let h = eval_heis_expr(src)?;
    Ok(json!({
        "expr": src,
        "result": heis_json(&h),
        "display": h.to_string(),
        "central": h.is_central(),
        "integral": h.is_integral(),
    }))
}

fn run_selftest() -> Value {
    let outcomes = selftest::run_all();
    let passed = outcomes.iter().all(|o| o.passed);
    json!({ "seed": selftest::SEED, "passed": passed, "criteria": outcomes })
}

/// Exit status for a successful report: 2 when a verification inside it failed.
pub fn report_status(report: &Value) -> i32 {
    let failed = |key: &str| report.get(key).and_then(Value::as_bool) == Some(false);
    match report.get("command").and_then(Value::as_str) {
        Some("selftest") if failed("passed") => 2,
        Some("verify-huebschmann") if failed("all_passed") => 2,
        _ => 0,
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({ "kind": e.kind(), "message": e.to_string() })
}

pub fn error_status(e: &Error) -> i32 {
    if e.is_internal() {
        2
    } else {
        1
    }
}

#[derive(Debug, Parser)]
#[command(name = "symtorus", version, about = "Classify symplectic torus bundles over surfaces")]
pub struct Args {
    /// What to compute
    pub command: Option<Command>,
    /// Read the job from a JSON file; flags override its fields
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// torus, sphere, rp2, klein, <kind>:<genus> or a JSON object
    #[arg(long)]
    pub surface: Option<String>,
    /// trivial, minus-identity, example1, example2:m,n or JSON matrices
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// Class representative, e.g. 1,0
    #[arg(long, allow_hyphen_values = true)]
    pub class: Option<String>,
    /// Extension target for verify-huebschmann, e.g. 1,0
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long)]
    pub bound: Option<i64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Heisenberg expression for heis-eval, e.g. "[(0,1,0),(0,0,1)]^2"
    #[arg(long, allow_hyphen_values = true)]
    pub expr: Option<String>,
    /// Render the report as text instead of JSON
    #[arg(long)]
    pub pretty: bool,
}

impl Args {
    pub fn to_job(&self) -> Result<JobSpec> {
        let mut job = match &self.input {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidJob(format!("cannot read {}: {e}", path.display())))?;
                JobSpec::from_json(&text)?
            }
            None => JobSpec::default(),
        };
        if self.command.is_some() {
            job.command = self.command;
        }
        if let Some(s) = &self.surface {
            job.surface = Some(parse_surface(s)?);
        }
        if let Some(r) = &self.rho {
            job.rho = Some(parse_rho(r)?);
        }
        if let Some(c) = &self.class {
            job.class = Some(parse_int_list(c)?);
        }
        if let Some(t) = &self.t {
            job.t = Some(parse_int_list(t)?);
        }
        job.bound = self.bound.or(job.bound);
        job.samples = self.samples.or(job.samples);
        job.seed = self.seed.or(job.seed);
        if self.expr.is_some() {
            job.expr = self.expr.clone();
        }
        Ok(job)
    }
}

pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the job.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            return Outcome { status: 0, stdout: e.to_string(), stderr: String::new() };
        }
        Err(e) => return failure(&Error::Parse(e.to_string().trim_end().to_string())),
    };
    let report = args.to_job().and_then(|job| run(&job));
    match report {
        Ok(report) => {
            let stdout = if args.pretty {
                render_pretty(&report)
            } else {
                serde_json::to_string(&report).expect("serializable") + "\n"
            };
            Outcome { status: report_status(&report), stdout, stderr: String::new() }
        }
        Err(e) => failure(&e),
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome { status: error_status(e), stdout: String::new(), stderr: error_json(e).to_string() + "\n" }
}
