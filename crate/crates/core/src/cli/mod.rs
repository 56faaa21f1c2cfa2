//! The `rootlab` command line.
//!
//! Every subcommand reads an optional TOML config (`--config`) and applies
//! flag overrides on top. Reports go to `--out` (or `[output] path`), else
//! to stdout, and are written once after the run finishes. Exit codes: 0 on
//! success, 2 on a configuration error, 3 when more than 1% of the trials
//! fail, 1 for any other numeric failure.

mod check;
mod config;
mod report;
mod select;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

pub use check::{random_exponential_polynomial, run_check, zeros_in_open_disk, PARSEVAL_TOL};
pub use config::{
    parse_law_kind, EnsembleSection, ExperimentConfig, LawSection, OutputSection, RunSection, StatisticSection,
    DEFAULT_QUAD_TOL, DEFAULT_TRIALS,
};
pub use report::{fmt_num, write_rows, ReportRow, HEADER};
pub use select::{count_baseline, linear_baseline, region_baseline, Baseline};

use crate::baselines::{catalogue, BaselineKind};
use crate::ensembles::{CoefficientLaw, Ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::region::{parse_window, Region};
use crate::rootfind::{self, count_in_region, DEFAULT_TOL};
use crate::statistics::{
    compare, correlation_sum, default_lanes, linear_statistic, pair_repulsion_prob, run_trials, windowed_count,
    BumpFunction, Estimate, TrialPlan,
};

/// Offset between the master seeds of the two laws in `compare`, so the
/// two samples are independent.
const SEED_B_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Parser, Debug)]
#[command(name = "rootlab", version, about = "Zeros of random functions: Monte Carlo against gaussian baselines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Roots of one realization as CSV (re, im, residual, is_real).
    Sample(Opts),
    /// Mean number of zeros in a window or region.
    Count(Opts),
    /// Mean linear statistic of a bump.
    Linear(Opts),
    /// Mean correlation sum of a product bump.
    Correlate(Opts),
    /// Probability of two zeros in a small disk.
    Repulsion(Opts),
    /// Gaussian baseline alone.
    Baseline(Opts),
    /// Condition probe, written as JSON.
    Check(Opts),
    /// Two laws on the same statistic.
    Compare(Opts),
    /// Available closed forms and integrals.
    ListBaselines {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug, Default, Clone)]
pub struct Opts {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// kac, elliptic, weyl, trig or taylor.
    #[arg(long)]
    pub ensemble: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<f64>,
    #[arg(long)]
    pub derivative: Option<u32>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub slowly: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    #[arg(long)]
    pub truncation_tol: Option<f64>,
    #[arg(long, alias = "law-a")]
    pub law: Option<String>,
    #[arg(long)]
    pub law_b: Option<String>,
    /// `a,b`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<String>,
    /// `center,radius`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub real_bump: Vec<String>,
    /// `re,im,radius`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub complex_bump: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub outer_radius: Option<f64>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub condition: Option<String>,
    /// `re,im`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Vec<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lanes: Option<usize>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the merged config and exit.
    #[arg(long)]
    pub emit_config: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Sample,
    Count,
    Linear,
    Correlate,
    Repulsion,
    Baseline,
    Check,
    Compare,
}

fn numbers<const N: usize>(s: &str, what: &str) -> Result<[f64; N]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Config(format!("{what} `{s}`: {e}")))?;
    v.try_into().map_err(|_| Error::Config(format!("{what} `{s}`: expected {N} numbers")))
}

impl Opts {
    /// The config file (if any) with every flag applied on top.
    pub fn merged_config(&self, task: Task) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        let e = &mut c.ensemble;
        set(&mut e.family, &self.ensemble);
        if self.n.is_some() {
            e.n = self.n;
            e.c = None;
            e.d = None;
        }
        set(&mut e.level, &self.level);
        set(&mut e.derivative, &self.derivative);
        set(&mut e.gamma, &self.gamma);
        set(&mut e.slowly, &self.slowly);
        set(&mut e.domain, &self.domain);
        set(&mut e.truncation_tol, &self.truncation_tol);
        set(&mut c.law.kind, &self.law);
        if let Some(b) = &self.law_b {
            c.law_b.get_or_insert_with(LawSection::default).kind = Some(b.clone());
        }
        let st = &mut c.statistic;
        if let Some(w) = &self.window {
            let (a, b) = parse_window(w).map_err(|e| Error::Config(e.to_string()))?;
            st.window = Some([a, b]);
        }
        set(&mut st.region, &self.region);
        if !self.real_bump.is_empty() {
            st.real_bumps = Some(self.real_bump.iter().map(|s| numbers::<2>(s, "real bump")).collect::<Result<_>>()?);
        }
        if !self.complex_bump.is_empty() {
            st.complex_bumps =
                Some(self.complex_bump.iter().map(|s| numbers::<3>(s, "complex bump")).collect::<Result<_>>()?);
        }
        if !self.point.is_empty() {
            st.points = Some(self.point.iter().map(|s| numbers::<2>(s, "point")).collect::<Result<_>>()?);
        }
        set(&mut st.x, &self.x);
        set(&mut st.radius, &self.radius);
        set(&mut st.outer_radius, &self.outer_radius);
        set(&mut st.condition, &self.condition);
        set(&mut st.grid, &self.grid);
        set(&mut st.kind, &self.kind);
        let implied = match task {
            Task::Count => Some("count"),
            Task::Linear => Some("linear"),
            Task::Correlate => Some("correlation"),
            Task::Repulsion => Some("repulsion"),
            Task::Baseline => Some("baseline"),
            Task::Check => Some("condition"),
            Task::Sample | Task::Compare => None,
        };
        if let Some(k) = implied {
            st.kind = Some(k.to_string());
        }
        let r = &mut c.run;
        set(&mut r.trials, &self.trials);
        set(&mut r.seed, &self.seed);
        set(&mut r.lanes, &self.lanes);
        set(&mut r.quad_tol, &self.quad_tol);
        if let Some(p) = &self.out {
            c.output.path = Some(p.display().to_string());
        }
        Ok(c)
    }
}

fn set<T: Clone>(slot: &mut Option<T>, v: &Option<T>) {
    if v.is_some() {
        slot.clone_from(v);
    }
}

fn plan_of(cfg: &ExperimentConfig) -> Result<TrialPlan> {
    let lanes = cfg.run.lanes.unwrap_or_else(default_lanes);
    if lanes == 0 {
        return Err(Error::Config("lanes must be at least 1".into()));
    }
    Ok(TrialPlan::new(cfg.trials()?, cfg.run.seed.unwrap_or(0)).with_lanes(lanes))
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::FailureBudgetExceeded { .. } => 3,
        Error::Config(_)
        | Error::InvalidSpec(_)
        | Error::InvalidLaw(_)
        | Error::InvalidArgument(_)
        | Error::OutOfValidatedRegion(_)
        | Error::DivergentRegion
        | Error::UnsupportedRegion
        | Error::UnsupportedFamily(_)
        | Error::ArityMismatch { .. }
        | Error::AllZeroCoefficients => 2,
        _ => 1,
    }
}

/// The statistic a task measures, resolved from a config.
enum Measure {
    Window((f64, f64)),
    Region(Region),
    Linear(BumpFunction),
    Correlation(BumpFunction),
    Repulsion { x: f64, gamma: f64 },
}

impl Measure {
    fn resolve(cfg: &ExperimentConfig, kind: &str) -> Result<Self> {
        let bump = || -> Result<BumpFunction> {
            BumpFunction::new(&cfg.real_bumps(), &cfg.complex_bumps()).map_err(config_err)
        };
        match kind {
            "count" | "baseline" => match (cfg.window()?, cfg.region()?) {
                (Some(w), None) => Ok(Measure::Window(w)),
                (None, Some(r)) => Ok(Measure::Region(r)),
                (None, None)
                    if kind == "baseline"
                        && (cfg.statistic.real_bumps.is_some() || cfg.statistic.complex_bumps.is_some()) =>
                {
                    Ok(Measure::Linear(bump()?))
                }
                (None, None) => Err(Error::Config("a window or a region is required".into())),
                (Some(_), Some(_)) => Err(Error::Config("give a window or a region, not both".into())),
            },
            "linear" => {
                let g = bump()?;
                if g.arity() != 1 {
                    return Err(Error::Config("linear statistics take exactly one bump".into()));
                }
                Ok(Measure::Linear(g))
            }
            "correlation" => {
                let g = bump()?;
                if g.k() == 0 {
                    return Err(Error::Config("correlation sums need at least one real bump".into()));
                }
                Ok(Measure::Correlation(g))
            }
            "repulsion" => {
                let x = cfg.statistic.x.ok_or_else(|| Error::Config("repulsion needs statistic.x".into()))?;
                let gamma =
                    cfg.statistic.radius.ok_or_else(|| Error::Config("repulsion needs statistic.radius".into()))?;
                if !(gamma > 0.0 && gamma.is_finite() && x.is_finite()) {
                    return Err(Error::Config(format!("bad repulsion disk x = {x}, radius = {gamma}")));
                }
                Ok(Measure::Repulsion { x, gamma })
            }
            other => Err(Error::Config(format!("statistic `{other}` cannot be estimated here"))),
        }
    }

    fn names(&self) -> (String, String) {
        let supports =
            |g: &BumpFunction| g.slots().iter().map(|s| s.support().to_string()).collect::<Vec<_>>().join(" x ");
        match self {
            Measure::Window((a, b)) => ("count".into(), Region::Segment { a: *a, b: *b }.to_string()),
            Measure::Region(r) => ("count".into(), r.to_string()),
            Measure::Linear(g) => ("linear".into(), supports(g)),
            Measure::Correlation(g) => (format!("correlation(k={},l={})", g.k(), g.l()), supports(g)),
            Measure::Repulsion { x, gamma } => {
                ("repulsion".into(), Region::disk(Complex64::new(*x, 0.0), *gamma).to_string())
            }
        }
    }

    fn estimate(&self, spec: &EnsembleSpec, law: &CoefficientLaw, plan: &TrialPlan) -> Result<Estimate> {
        match self {
            Measure::Window(w) => windowed_count(spec, law, *w, plan),
            Measure::Region(region) => {
                let ens = Ensemble::new(&spec.with_law(law.clone()))?;
                run_trials(plan, "count", |s| {
                    let rs = rootfind::roots_in(&ens.draw(s), region, DEFAULT_TOL)?;
                    Ok(count_in_region(&rs, region)? as f64)
                })
            }
            Measure::Linear(g) => linear_statistic(spec, law, g, plan),
            Measure::Correlation(g) => {
                let ens = Ensemble::new(&spec.with_law(law.clone()))?;
                let domain = spec.scale.domain.clone();
                run_trials(plan, "correlation", |s| {
                    let rs = rootfind::roots_in(&ens.draw(s), &domain, DEFAULT_TOL)?;
                    correlation_sum(&rs, g, g.k(), g.l())
                })
            }
            Measure::Repulsion { x, gamma } => pair_repulsion_prob(spec, law, *x, *gamma, plan),
        }
    }

    fn baseline(&self, spec: &EnsembleSpec, quad_tol: f64) -> Result<Baseline> {
        match self {
            Measure::Window(w) => count_baseline(spec, *w, quad_tol),
            Measure::Region(r) => region_baseline(spec, r),
            Measure::Linear(g) => linear_baseline(spec, g, quad_tol),
            Measure::Correlation(_) | Measure::Repulsion { .. } => Ok(None),
        }
    }
}

fn row(spec: &EnsembleSpec, law: &CoefficientLaw, m: &Measure, plan: &TrialPlan, est: Option<&Estimate>) -> ReportRow {
    let (statistic, region) = m.names();
    ReportRow {
        ensemble: spec.label(),
        n: spec.family.degree(),
        law: law.to_string(),
        statistic,
        region,
        trials: est.map_or(0, |e| e.trials),
        seed: plan.seed,
        mean: est.map(Estimate::mean),
        stderr: est.map(Estimate::stderr),
        baseline: None,
        baseline_kind: None,
        z_score: None,
    }
}

fn csv_bytes(rows: &[ReportRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(buf)
}

/// Runs a task on a merged config and returns the report bytes.
pub fn run(task: Task, cfg: &ExperimentConfig) -> Result<Vec<u8>> {
    let plan = plan_of(cfg)?;
    let quad_tol = cfg.quad_tol()?;
    if task == Task::Check {
        let report = run_check(cfg, &plan)?;
        let mut s = report.to_json()?;
        s.push('\n');
        return Ok(s.into_bytes());
    }
    let spec = cfg.spec()?;
    let law = spec.law.clone();
    match task {
        Task::Sample => {
            let region = match cfg.region()? {
                Some(r) => r,
                None => spec.scale.domain.clone(),
            };
            let ens = Ensemble::new(&spec).map_err(config_err)?;
            let r = ens.draw(&mut crate::rng::RngStream::new(plan.seed, 0));
            let rs = rootfind::roots_in(&r, &region, DEFAULT_TOL)?;
            let mut buf = Vec::new();
            rs.write_csv(&mut buf)?;
            Ok(buf)
        }
        Task::Compare => {
            let kind = cfg.statistic.kind.as_deref().unwrap_or("count");
            let m = Measure::resolve(cfg, kind)?;
            let law_b = cfg.law_b()?.ok_or_else(|| Error::Config("compare needs a second law (--law-b)".into()))?;
            Ensemble::new(&spec.with_law(law_b.clone())).map_err(config_err)?;
            let plan_b = TrialPlan { seed: plan.seed ^ SEED_B_OFFSET, ..plan };
            let ea = m.estimate(&spec, &law, &plan)?;
            let eb = m.estimate(&spec, &law_b, &plan_b)?;
            let spec_b = spec.with_law(law_b.clone());
            let ra = row(&spec, &law, &m, &plan, Some(&ea)).with_baseline(m.baseline(&spec, quad_tol)?);
            let rb = row(&spec_b, &law_b, &m, &plan_b, Some(&eb)).with_baseline(m.baseline(&spec_b, quad_tol)?);
            let c = compare(&ea, &eb);
            let mut diff = row(&spec, &law, &m, &plan, Some(&ea));
            diff.law = format!("{law} - {law_b}");
            diff.statistic = format!("{} difference", diff.statistic);
            diff.mean = Some(c.difference);
            diff.stderr = Some(c.pooled_stderr);
            let diff = diff.with_baseline(Some((0.0, BaselineKind::Exact)));
            csv_bytes(&[ra, rb, diff])
        }
        Task::Baseline => {
            let m = Measure::resolve(cfg, "baseline")?;
            let b = m.baseline(&spec, quad_tol)?;
            if b.is_none() {
                return Err(Error::Config(format!("no baseline applies to {} with {law}", spec.label())));
            }
            let mut r = row(&spec, &law, &m, &plan, None).with_baseline(b);
            r.statistic = format!("baseline {}", r.statistic);
            csv_bytes(&[r])
        }
        Task::Count | Task::Linear | Task::Correlate | Task::Repulsion => {
            let kind = cfg.statistic.kind.as_deref().unwrap_or("count");
            let m = Measure::resolve(cfg, kind)?;
            Ensemble::new(&spec).map_err(config_err)?;
            let est = m.estimate(&spec, &law, &plan)?;
            csv_bytes(&[row(&spec, &law, &m, &plan, Some(&est)).with_baseline(m.baseline(&spec, quad_tol)?)])
        }
        Task::Check => unreachable!("handled above"),
    }
}

fn list_baselines(json: bool) -> Result<Vec<u8>> {
    if json {
        let mut s = serde_json::to_string_pretty(catalogue()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        s.push('\n');
        return Ok(s.into_bytes());
    }
    let mut out = String::new();
    for e in catalogue() {
        out.push_str(&format!("{:<26} {:<11} {:<20} {}\n    {}\n", e.name, e.kind, e.families, e.anchor, e.formula));
    }
    Ok(out.into_bytes())
}

fn dispatch(cmd: Command) -> Result<(Vec<u8>, Option<String>)> {
    let (task, opts) = match cmd {
        Command::ListBaselines { json } => return Ok((list_baselines(json)?, None)),
        Command::Sample(o) => (Task::Sample, o),
        Command::Count(o) => (Task::Count, o),
        Command::Linear(o) => (Task::Linear, o),
        Command::Correlate(o) => (Task::Correlate, o),
        Command::Repulsion(o) => (Task::Repulsion, o),
        Command::Baseline(o) => (Task::Baseline, o),
        Command::Check(o) => (Task::Check, o),
        Command::Compare(o) => (Task::Compare, o),
    };
    let cfg = opts.merged_config(task)?;
    if opts.emit_config {
        return Ok((cfg.emit()?.into_bytes(), None));
    }
    let bytes = run(task, &cfg)?;
    Ok((bytes, cfg.output.path.clone()))
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok((bytes, path)) => {
            let written = match path {
                Some(p) => std::fs::write(&p, &bytes).map_err(|e| format!("{p}: {e}")),
                None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("rootlab: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("rootlab: {e}");
            exit_code(&e)
        }
    }
}
