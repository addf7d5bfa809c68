//! CSV trajectories.
//!
//! Column order: `t`, every state in [`State::NAMES`] order, then the derived
//! series in [`DERIVED_COLUMNS`]. Floats are written with 17 significant
//! digits so a file reads back to the exact values that were written. Missing
//! values (growth rates that could not be formed) are empty cells.

use std::path::Path;

use crate::analytics::Derived;
use crate::error::ConfigError;
use crate::integrator::{RunConfig, RunOutput, Sample};
use crate::params::Params;
use crate::scenario::ScenarioSpec;
use crate::state::State;

pub const DERIVED_COLUMNS: [&str; 22] = [
    "X_e",
    "X_g",
    "Y_real_total",
    "wage_share",
    "profit_share",
    "interest_share",
    "depreciation_share",
    "debt_ratio",
    "CU_e_eff",
    "CU_g_eff",
    "C_e_per_capita",
    "NEPR",
    "NPR",
    "H",
    "X_MC",
    "Psi",
    "g_Y",
    "g_R",
    "d",
    "labor_capped",
    "resource_floor",
    "goods_floor",
];

pub fn header() -> Vec<&'static str> {
    let mut h = vec!["t"];
    h.extend_from_slice(&State::NAMES);
    h.extend_from_slice(&DERIVED_COLUMNS);
    h
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> ConfigError {
    ConfigError::Csv(e.to_string())
}

pub fn write_csv(w: impl std::io::Write, run: &RunOutput, d: &Derived) -> Result<(), ConfigError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header()).map_err(csv_err)?;
    for (i, s) in run.samples.iter().enumerate() {
        let f = &s.flows;
        let mut rec: Vec<String> = Vec::with_capacity(1 + State::LEN + DERIVED_COLUMNS.len());
        rec.push(num(s.t));
        rec.extend(s.state.to_array().iter().map(|v| num(*v)));
        rec.extend(
            [
                f.x_e,
                f.x_g,
                d.real_gdp[i],
                d.wage_share[i],
                d.profit_share[i],
                d.interest_share[i],
                d.depreciation_share[i],
                d.debt_ratio[i],
                f.cu_e,
                f.cu_g,
                f.percap_resource,
                d.nepr[i],
                d.npr[i],
                d.h[i],
                d.x_mc[i],
                d.psi[i],
            ]
            .map(num),
        );
        rec.extend([d.g_y[i], d.g_r[i], d.decoupling[i]].map(opt));
        rec.extend(
            [f.mode.labor_capped, f.mode.resource_floor, f.mode.goods_floor].map(|b| (b as u8).to_string()),
        );
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, run: &RunOutput, d: &Derived) -> Result<(), ConfigError> {
    let file = std::fs::File::create(path)?;
    write_csv(std::io::BufWriter::new(file), run, d)
}

/// Sample times and states stored in a trajectory file.
pub fn read_states(r: impl std::io::Read) -> Result<Vec<(f64, State)>, ConfigError> {
    let mut rd = csv::Reader::from_reader(r);
    let hdr = rd.headers().map_err(csv_err)?.clone();
    let expected = header();
    for (i, name) in expected.iter().take(1 + State::LEN).enumerate() {
        if hdr.get(i) != Some(*name) {
            return Err(ConfigError::Csv(format!(
                "column {} should be `{name}`, found `{}`",
                i + 1,
                hdr.get(i).unwrap_or("")
            )));
        }
    }
    let mut out = Vec::new();
    for (row, rec) in rd.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let mut vals = [0.0; 1 + State::LEN];
        for (i, v) in vals.iter_mut().enumerate() {
            let cell = rec.get(i).unwrap_or("");
            *v = cell.parse().map_err(|_| {
                ConfigError::Csv(format!("row {}: bad number `{cell}` in `{}`", row + 2, expected[i]))
            })?;
        }
        out.push((vals[0], State::from_slice(&vals[1..])));
    }
    Ok(out)
}

pub fn read_states_file(path: &Path) -> Result<Vec<(f64, State)>, ConfigError> {
    read_states(std::io::BufReader::new(std::fs::File::open(path)?))
}

/// Rebuilds a run from stored states by re-evaluating the flows.
pub fn rebuild_run(
    states: &[(f64, State)],
    scenario: &ScenarioSpec,
    p: &Params,
) -> Result<RunOutput, ConfigError> {
    let mut samples = Vec::with_capacity(states.len());
    for (t, s) in states {
        let flows = crate::dynamics::evaluate_flows(*t, s, scenario, p)?;
        samples.push(Sample { t: *t, state: *s, flows });
    }
    let mut config = RunConfig::default();
    if let [a, b, ..] = states {
        config.sample_every = b.0 - a.0;
    }
    if let Some((t, _)) = states.last() {
        config.t_end = *t;
    }
    Ok(RunOutput { scenario: scenario.name.clone(), config, samples, diagnostics: Default::default() })
}
