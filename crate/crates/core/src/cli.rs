//! Command-line front end: `simulate`, `audit` and `landmarks`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::accounting::sfc_audit;
use crate::analytics::{landmarks, Derived};
use crate::config::{parse_config, Config};
use crate::dynamics::derivatives_from_flows;
use crate::error::ConfigError;
use crate::integrator::{run_batch, Aborted, RunOutput};
use crate::output::{read_states_file, rebuild_run, write_csv_file};
use crate::report::{any_failed, format_lines, ratio_lines, scenario_lines, Line};
use crate::scenario::{ScenarioSpec, PRESET_NAMES};

/// Default output directory when neither `--out` nor the config sets one.
pub const OUT_ENV: &str = "HARMONEY_OUT";
pub const DEFAULT_OUT: &str = "harmoney-out";

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ABORT: i32 = 2;
pub const EXIT_STRICT: i32 = 3;

/// SFC residual bound used by `audit --strict`.
pub const AUDIT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "harmoney", version, about = "Run the two-sector growth model and its diagnostics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run scenarios, write one CSV per scenario and a landmark summary.
    Simulate(Common),
    /// Run scenarios and report the largest accounting-identity residuals.
    Audit(Common),
    /// Recompute landmarks from trajectory CSVs written by `simulate`.
    Landmarks {
        #[command(flatten)]
        common: Common,
        /// Trajectory files. The scenario is taken from `--scenario` or the
        /// file stem.
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Configuration file with `[run]`, `[params]` and `[scenario]` sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Preset name, comma-separated list, or `all`.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Output directory (default `harmoney-out`).
    #[arg(long, env = OUT_ENV)]
    pub out: Option<PathBuf>,
    /// Integration step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final simulated time.
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Exit with status 3 if any reference check fails.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug)]
enum Failure {
    Config(ConfigError),
    Abort(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.into())
    }
}

/// Config file merged with command-line flags, which take precedence.
pub fn effective_config(c: &Common) -> Result<Config, ConfigError> {
    let mut cfg = match &c.config {
        Some(path) => Config::from_file(path)?,
        None => parse_config("")?,
    };
    if let Some(s) = &c.scenario {
        cfg = parse_config(&format!("scenario = {s}")).map(|sel| Config { scenarios: sel.scenarios, ..cfg })?;
    }
    if let Some(dt) = c.dt {
        cfg.run.dt = dt;
    }
    if let Some(t) = c.t_end {
        cfg.run.t_end = t;
    }
    if let Some(out) = &c.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cfg: &Config) -> PathBuf {
    cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

/// Splits finished runs from aborted ones, reporting each abort.
fn collect(results: Vec<Result<RunOutput, Aborted>>) -> (Vec<RunOutput>, Vec<Aborted>) {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for r in results {
        match r {
            Ok(run) => ok.push(run),
            Err(a) => {
                eprintln!("{}: {}", a.partial.scenario, a.error);
                bad.push(a);
            }
        }
    }
    (ok, bad)
}

fn diagnostics_lines(run: &RunOutput) -> Vec<Line> {
    let name = &run.scenario;
    let d = &run.diagnostics;
    let info = |label: &str, v: String| Line {
        name: format!("{name} {label}"),
        measured: v,
        reference: "-".into(),
        tolerance: "-".into(),
        pass: None,
    };
    let mut lines = vec![
        info("time labor-capped", format!("{:.2}", d.time_in(|m| m.labor_capped))),
        info("time at resource floor", format!("{:.2}", d.time_in(|m| m.resource_floor))),
        info("time at goods floor", format!("{:.2}", d.time_in(|m| m.goods_floor))),
        info("inventory clamp evaluations", format!("{}", d.clamp_w_h + d.clamp_g)),
    ];
    if let Some(div) = d.step_halving_divergence {
        lines.push(Line {
            name: format!("{name} step-halving terminal divergence"),
            measured: format!("{div:.3e}"),
            reference: "0".into(),
            tolerance: "1e-3".into(),
            pass: Some(div < 1e-3),
        });
    }
    lines
}

fn simulate(c: &Common) -> Result<bool, Failure> {
    let cfg = effective_config(c)?;
    let dir = out_dir(&cfg);
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("config.txt"), cfg.to_text())?;

    let (runs, aborted) = collect(run_batch(&cfg.specs(), &cfg.params, &cfg.run));
    let mut lines = Vec::new();
    let mut by_name = BTreeMap::new();
    // Aborted runs keep their partial record, with the usual file name.
    let partial = aborted.iter().map(|a| (&a.partial, Some(&a.error)));
    for (run, error) in runs.iter().map(|r| (r, None)).chain(partial) {
        if run.samples.is_empty() {
            continue;
        }
        let d = Derived::from_run(run, &cfg.params).map_err(|e| Failure::Abort(format!("{}: {e}", run.scenario)))?;
        write_csv_file(&dir.join(format!("{}.csv", run.scenario)), run, &d)?;
        if let Some(e) = error {
            lines.push(Line {
                name: format!("{} run end", run.scenario),
                measured: format!("{}", run.last().t),
                reference: format!("{}", cfg.run.t_end),
                tolerance: "-".into(),
                pass: Some(false),
            });
            eprintln!("{}: landmarks below cover t <= {} only ({e})", run.scenario, run.last().t);
        }
        lines.extend(scenario_lines(run, &d));
        lines.extend(diagnostics_lines(run));
        by_name.insert(run.scenario.clone(), landmarks(&d));
    }
    lines.extend(ratio_lines(&by_name));
    let text = format_lines(&lines);
    std::fs::write(dir.join("summary.txt"), &text)?;
    print!("{text}");
    eprintln!("wrote {} trajectories to {}", by_name.len(), dir.display());
    if let Some(a) = aborted.first() {
        return Err(Failure::Abort(format!("{}: {}", a.partial.scenario, a.error)));
    }
    Ok(!any_failed(&lines))
}

/// Largest residuals of one run over all samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AuditSummary {
    pub sfc: f64,
    pub h_identity: f64,
    pub shares_sum: f64,
    /// Largest NPR minus its bound; positive means a violation.
    pub npr_excess: f64,
}

impl AuditSummary {
    pub fn passes(&self) -> bool {
        self.sfc < AUDIT_TOLERANCE && self.h_identity < 1e-12 && self.shares_sum < 1e-9 && self.npr_excess <= 0.0
    }
}

pub fn audit_run(run: &RunOutput, spec: &ScenarioSpec, p: &crate::Params) -> Result<AuditSummary, crate::ModelError> {
    let d = Derived::from_run(run, p)?;
    let mut a = AuditSummary { npr_excess: f64::NEG_INFINITY, ..Default::default() };
    for (i, s) in run.samples.iter().enumerate() {
        let der = derivatives_from_flows(s.t, &s.state, &s.flows, spec, p)?;
        a.sfc = a.sfc.max(sfc_audit(&s.state, &s.flows, &der, p).max());
        a.h_identity = a.h_identity.max((d.h[i] - d.x_mc[i] - d.psi[i]).abs());
        let sum = d.wage_share[i] + d.profit_share[i] + d.interest_share[i] + d.depreciation_share[i];
        a.shares_sum = a.shares_sum.max((sum - 1.0).abs());
        a.npr_excess = a.npr_excess.max(d.npr[i] - d.npr_upper[i]);
    }
    Ok(a)
}

fn audit(c: &Common) -> Result<bool, Failure> {
    let cfg = effective_config(c)?;
    let specs = cfg.specs();
    let (runs, aborted) = collect(run_batch(&specs, &cfg.params, &cfg.run));
    let mut ok = true;
    for run in runs.iter().chain(aborted.iter().map(|a| &a.partial)) {
        if run.samples.is_empty() {
            continue;
        }
        let spec = specs.iter().find(|s| s.name == run.scenario).expect("run comes from a spec");
        let a = audit_run(run, spec, &cfg.params).map_err(|e| Failure::Abort(format!("{}: {e}", run.scenario)))?;
        println!(
            "{} (t <= {})  max SFC residual {:.3e}  max |H - X_MC - Psi| {:.3e}  max |shares - 1| {:.3e}  max NPR - bound {:.3e}  {}",
            run.scenario,
            run.last().t,
            a.sfc,
            a.h_identity,
            a.shares_sum,
            a.npr_excess,
            if a.passes() { "PASS" } else { "FAIL" }
        );
        ok &= a.passes();
    }
    if let Some(a) = aborted.first() {
        return Err(Failure::Abort(format!("{}: {}", a.partial.scenario, a.error)));
    }
    Ok(ok)
}

fn scenario_for(path: &Path, c: &Common, cfg: &Config) -> Result<ScenarioSpec, ConfigError> {
    let name = match &c.scenario {
        Some(s) => s.clone(),
        None => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            stem.to_string()
        }
    };
    let base = name.split_once("-frozen").map_or(name.as_str(), |(b, _)| b);
    let base = base.strip_suffix("-alt").unwrap_or(base);
    if !PRESET_NAMES.contains(&base) {
        return Err(ConfigError::Invalid(format!(
            "cannot tell the scenario of {}; pass --scenario",
            path.display()
        )));
    }
    let mut spec = cfg.overrides.apply(ScenarioSpec::preset(base)?);
    if name.ends_with("-frozen") && !spec.name.ends_with("-frozen") {
        spec = spec.frozen();
    }
    Ok(spec)
}

fn recompute(c: &Common, files: &[PathBuf]) -> Result<bool, Failure> {
    // A single name here names the file contents; skip preset expansion.
    let mut flags = c.clone();
    flags.scenario = None;
    let cfg = effective_config(&flags)?;
    let mut lines = Vec::new();
    let mut by_name = BTreeMap::new();
    for path in files {
        let spec = scenario_for(path, c, &cfg)?;
        let states = read_states_file(path)?;
        if states.is_empty() {
            return Err(ConfigError::Csv(format!("{} has no rows", path.display())).into());
        }
        let run = rebuild_run(&states, &spec, &cfg.params)?;
        let d = Derived::from_run(&run, &cfg.params).map_err(ConfigError::from)?;
        lines.extend(scenario_lines(&run, &d));
        by_name.insert(run.scenario.clone(), landmarks(&d));
    }
    lines.extend(ratio_lines(&by_name));
    print!("{}", format_lines(&lines));
    Ok(!any_failed(&lines))
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let (strict, result) = match &cli.command {
        Command::Simulate(c) => (c.strict, simulate(c)),
        Command::Audit(c) => (c.strict, audit(c)),
        Command::Landmarks { common, csv } => (common.strict, recompute(common, csv)),
    };
    match result {
        Ok(true) => 0,
        Ok(false) if strict => EXIT_STRICT,
        Ok(false) => 0,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(Failure::Abort(msg)) => {
            eprintln!("aborted: {msg}");
            EXIT_ABORT
        }
    }
}

/// Parses `std::env::args` and runs. Usage errors count as configuration
/// errors; `--help` and `--version` exit 0.
pub fn main_from_env() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_CONFIG
            } else {
                0
            }
        }
    }
}
