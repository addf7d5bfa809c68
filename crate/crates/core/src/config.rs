//! Run configuration files.
//!
//! Line-oriented `key = value` entries grouped under `[run]`, `[params]` and
//! `[scenario]` headers. Entries before any header belong to `[run]`. Blank
//! lines and lines starting with `#` or `;` are ignored; later keys override
//! earlier ones.
//!
//! ```text
//! scenario = MC-111
//! t_end = 250
//!
//! [params]
//! delta = 0.05
//!
//! [scenario]
//! delay = cascade
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::ConfigError;
use crate::integrator::RunConfig;
use crate::params::Params;
use crate::scenario::{DelayShape, ScenarioSpec, PRESET_NAMES};

/// Growth driver replacing the preset's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthChoice {
    DeltaY,
    LambdaY,
    Frozen,
}

/// Optional edits applied to every selected preset.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScenarioOverrides {
    pub delay: Option<DelayShape>,
    pub growth: Option<GrowthChoice>,
    pub t50: Option<f64>,
    pub t99: Option<f64>,
    pub eta_steepness: Option<f64>,
    pub eta_mid: Option<f64>,
    pub a_ponzi: Option<f64>,
}

impl ScenarioOverrides {
    pub fn apply(&self, mut s: ScenarioSpec) -> ScenarioSpec {
        if let Some(d) = self.delay {
            s.delay = d;
        }
        match self.growth {
            Some(GrowthChoice::LambdaY) => s = s.with_lambda_y_growth(),
            Some(GrowthChoice::Frozen) => s = s.frozen(),
            Some(GrowthChoice::DeltaY) | None => {}
        }
        if let Some(v) = self.t50 {
            s.t50 = v;
        }
        if let Some(v) = self.t99 {
            s.t99 = v;
        }
        if let Some(v) = self.eta_steepness {
            s.eta.steepness = v;
        }
        if let Some(v) = self.eta_mid {
            s.eta.i_mid = v;
        }
        if let Some(v) = self.a_ponzi {
            s.a_ponzi = v;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Preset names, or the single entry `all`.
    pub scenarios: Vec<String>,
    pub params: Params,
    pub run: RunConfig,
    pub out: Option<PathBuf>,
    pub overrides: ScenarioOverrides,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            scenarios: vec!["FC-000".to_string()],
            params: Params::default(),
            run: RunConfig::default(),
            out: None,
            overrides: ScenarioOverrides::default(),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Run,
    Params,
    Scenario,
}

fn number(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let invalid = || ConfigError::InvalidValue { line, key: key.to_string(), value: value.to_string() };
    let v: f64 = value.parse().map_err(|_| invalid())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid())
    }
}

fn parse_scenarios(line: usize, value: &str) -> Result<Vec<String>, ConfigError> {
    let names: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
    if names.len() == 1 && names[0] == "all" {
        return Ok(names);
    }
    for n in &names {
        if ScenarioSpec::preset(n).is_err() {
            return Err(ConfigError::InvalidValue { line, key: "scenario".into(), value: n.clone() });
        }
    }
    Ok(names)
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut cfg = Config::default();
    let mut section = Section::Run;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') || body.starts_with(';') {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Malformed { line, text: raw.to_string() })?
                .trim();
            section = match name {
                "run" => Section::Run,
                "params" => Section::Params,
                "scenario" => Section::Scenario,
                _ => return Err(ConfigError::UnknownSection { line, section: name.to_string() }),
            };
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .filter(|(k, v)| !k.is_empty() && !v.is_empty())
            .ok_or_else(|| ConfigError::Malformed { line, text: raw.to_string() })?;
        let unknown = || ConfigError::UnknownKey { line, key: key.to_string() };
        let invalid = || ConfigError::InvalidValue { line, key: key.to_string(), value: value.to_string() };
        match section {
            Section::Run => match key {
                "scenario" => cfg.scenarios = parse_scenarios(line, value)?,
                "dt" => cfg.run.dt = number(line, key, value)?,
                "t_end" => cfg.run.t_end = number(line, key, value)?,
                "sample_every" => cfg.run.sample_every = number(line, key, value)?,
                "convergence_check" => cfg.run.convergence_check = value.parse().map_err(|_| invalid())?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                _ => return Err(unknown()),
            },
            Section::Params => {
                let v = number(line, key, value)?;
                if !cfg.params.set(key, v) {
                    return Err(unknown());
                }
            }
            Section::Scenario => {
                let o = &mut cfg.overrides;
                match key {
                    "delay" => {
                        o.delay = Some(match value {
                            "logistic" => DelayShape::Logistic,
                            "cascade" => DelayShape::Cascade,
                            _ => return Err(invalid()),
                        })
                    }
                    "growth" => {
                        o.growth = Some(match value {
                            "delta_y" => GrowthChoice::DeltaY,
                            "lambda_y" => GrowthChoice::LambdaY,
                            "frozen" => GrowthChoice::Frozen,
                            _ => return Err(invalid()),
                        })
                    }
                    "t50" => o.t50 = Some(number(line, key, value)?),
                    "t99" => o.t99 = Some(number(line, key, value)?),
                    "eta_steepness" => o.eta_steepness = Some(number(line, key, value)?),
                    "eta_mid" => o.eta_mid = Some(number(line, key, value)?),
                    "a_ponzi" => o.a_ponzi = Some(number(line, key, value)?),
                    _ => return Err(unknown()),
                }
            }
        }
    }
    Ok(cfg)
}

impl Config {
    pub fn from_file(path: &std::path::Path) -> Result<Config, ConfigError> {
        parse_config(&std::fs::read_to_string(path)?)
    }

    /// Resolved scenarios, in table order for `all`.
    pub fn specs(&self) -> Vec<ScenarioSpec> {
        let names: Vec<&str> = if self.scenarios.iter().any(|s| s == "all") {
            PRESET_NAMES.to_vec()
        } else {
            self.scenarios.iter().map(String::as_str).collect()
        };
        names
            .into_iter()
            .map(|n| self.overrides.apply(ScenarioSpec::preset(n).expect("validated on parse")))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.run.validate()?;
        self.params.validate()?;
        for s in self.specs() {
            s.validate()?;
        }
        Ok(())
    }

    /// Complete effective configuration in the file format. Parsing the
    /// result gives back an equal `Config`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[run]");
        let _ = writeln!(s, "scenario = {}", self.scenarios.join(","));
        let _ = writeln!(s, "dt = {:?}", self.run.dt);
        let _ = writeln!(s, "t_end = {:?}", self.run.t_end);
        let _ = writeln!(s, "sample_every = {:?}", self.run.sample_every);
        let _ = writeln!(s, "convergence_check = {}", self.run.convergence_check);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        let _ = writeln!(s, "\n[params]");
        for name in Params::NAMES {
            let _ = writeln!(s, "{name} = {:?}", self.params.get(name).expect("listed name"));
        }
        let o = &self.overrides;
        let _ = writeln!(s, "\n[scenario]");
        if let Some(d) = o.delay {
            let v = match d {
                DelayShape::Logistic => "logistic",
                DelayShape::Cascade => "cascade",
            };
            let _ = writeln!(s, "delay = {v}");
        }
        if let Some(g) = o.growth {
            let v = match g {
                GrowthChoice::DeltaY => "delta_y",
                GrowthChoice::LambdaY => "lambda_y",
                GrowthChoice::Frozen => "frozen",
            };
            let _ = writeln!(s, "growth = {v}");
        }
        for (k, v) in [
            ("t50", o.t50),
            ("t99", o.t99),
            ("eta_steepness", o.eta_steepness),
            ("eta_mid", o.eta_mid),
            ("a_ponzi", o.a_ponzi),
        ] {
            if let Some(v) = v {
                let _ = writeln!(s, "{k} = {v:?}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PricingMode;
    use crate::scenario::Efficiency;

    #[test]
    fn empty_is_default() {
        let c = parse_config("").unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.scenarios, vec!["FC-000"]);
        assert_eq!((c.run.dt, c.run.t_end), (0.01, 300.0));
    }

    #[test]
    fn params_override() {
        let c = parse_config("[params]\ndelta = 0.05\n").unwrap();
        assert_eq!(c.params.delta, 0.05);
        assert_eq!(Params::default().delta, 0.03);
    }

    #[test]
    fn preset_selection() {
        let c = parse_config("scenario = MC-111").unwrap();
        let s = &c.specs()[0];
        assert_eq!(s.pricing, PricingMode::Marginal);
        assert_eq!(s.efficiency, Efficiency::Declining);
        let r = s.bargaining.unwrap();
        assert_eq!((r.start, r.end), (100.0, 200.0));
        assert_eq!(s.a_ponzi, 3.0);
        assert_eq!(parse_config("scenario = all").unwrap().specs().len(), 12);
    }

    #[test]
    fn errors_name_the_line() {
        match parse_config("dt = 0.01\n[params]\nbogus = 1\n") {
            Err(ConfigError::UnknownKey { line: 3, key }) => assert_eq!(key, "bogus"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config("\n\njust text"), Err(ConfigError::Malformed { line: 3, .. })));
        assert!(matches!(parse_config("[nope]"), Err(ConfigError::UnknownSection { line: 1, .. })));
        assert!(matches!(parse_config("dt = fast"), Err(ConfigError::InvalidValue { line: 1, .. })));
        assert!(matches!(parse_config("scenario = XX-000"), Err(ConfigError::InvalidValue { .. })));
    }

    #[test]
    fn later_keys_win() {
        let c = parse_config("t_end = 100\n# comment\nt_end = 200\n").unwrap();
        assert_eq!(c.run.t_end, 200.0);
    }

    #[test]
    fn echo_reparses() {
        let text = "scenario = FC-100,MC-100\nout = /tmp/x\n[params]\nr_l = 0.0613\n[scenario]\ndelay = cascade\neta_mid = 61.5\ngrowth = lambda_y\n";
        let c = parse_config(text).unwrap();
        assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }
}
