//! Fixed-step RK4 time stepping and sampled output.

use crate::dynamics::{derivatives, evaluate_flows, Flows, Mode};
use crate::error::ModelError;
use crate::params::Params;
use crate::scenario::ScenarioSpec;
use crate::state::State;

/// One classical RK4 step of `f` from `(t, y)` with step `h`, written into
/// `out`. Generic so it can be checked against systems with known solutions.
pub fn rk4_step<const N: usize, E>(
    f: &mut impl FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
    t: f64,
    y: &[f64; N],
    h: f64,
) -> Result<[f64; N], E> {
    let k1 = f(t, y)?;
    let mut tmp = [0.0; N];
    for i in 0..N {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = f(t + 0.5 * h, &tmp)?;
    for i in 0..N {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = f(t + 0.5 * h, &tmp)?;
    for i in 0..N {
        tmp[i] = y[i] + h * k3[i];
    }
    let k4 = f(t + h, &tmp)?;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Integrates `f` from `t0` to `t1` in fixed steps of (about) `dt`.
pub fn rk4_solve<const N: usize, E>(
    mut f: impl FnMut(f64, &[f64; N]) -> Result<[f64; N], E>,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    dt: f64,
) -> Result<[f64; N], E> {
    let steps = ((t1 - t0) / dt).round().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for k in 0..steps {
        y = rk4_step(&mut f, t0 + k as f64 * h, &y, h)?;
    }
    Ok(y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: f64,
    /// Also run at `dt / 2` and report the terminal divergence.
    pub convergence_check: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { t_end: 300.0, dt: 0.01, sample_every: 0.25, convergence_check: false }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let ok = self.dt > 0.0
            && self.dt <= self.sample_every
            && self.sample_every <= self.t_end
            && self.t_end.is_finite();
        if !ok {
            return Err(ModelError::Precondition(format!(
                "need 0 < dt <= sample_every <= t_end, got dt={} sample_every={} t_end={}",
                self.dt, self.sample_every, self.t_end
            )));
        }
        let ratio = self.sample_every / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio {
            return Err(ModelError::Precondition(format!(
                "sample_every ({}) must be a whole multiple of dt ({})",
                self.sample_every, self.dt
            )));
        }
        Ok(())
    }

    fn steps_per_sample(&self) -> usize {
        (self.sample_every / self.dt).round() as usize
    }

    fn n_samples(&self) -> usize {
        (self.t_end / self.sample_every + 1e-9).floor() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: State,
    pub flows: Flows,
}

/// Time interval over which one combination of threshold flags held.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeInterval {
    pub mode: Mode,
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    /// Number of derivative evaluations in which each inventory was clamped.
    pub clamp_w_h: u64,
    pub clamp_g: u64,
    /// Mode occupancy tracked at step resolution.
    pub modes: Vec<ModeInterval>,
    /// Max relative terminal-state change under step halving, if requested.
    pub step_halving_divergence: Option<f64>,
}

impl Diagnostics {
    fn note_mode(&mut self, mode: Mode, t: f64) {
        match self.modes.last_mut() {
            Some(last) if last.mode == mode => last.end = t,
            _ => self.modes.push(ModeInterval { mode, start: t, end: t }),
        }
    }

    /// Total time spent with each flag raised.
    pub fn time_in(&self, pick: impl Fn(&Mode) -> bool) -> f64 {
        self.modes.iter().filter(|m| pick(&m.mode)).map(|m| m.end - m.start).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub scenario: String,
    pub config: RunConfig,
    pub samples: Vec<Sample>,
    pub diagnostics: Diagnostics,
}

impl RunOutput {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn series(&self, f: impl Fn(&Sample) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("a run always has its initial sample")
    }
}

/// Output of a run that stopped early, with everything recorded up to the
/// last valid sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Aborted {
    pub partial: RunOutput,
    pub error: ModelError,
}

fn sample(t: f64, state: &State, scenario: &ScenarioSpec, p: &Params) -> Result<Sample, ModelError> {
    Ok(Sample { t, state: *state, flows: evaluate_flows(t, state, scenario, p)? })
}

fn check_invariants(t: f64, s: &State) -> Result<(), ModelError> {
    let c = &s.core;
    let positive = [("y", c.y), ("N", c.n), ("P_e", c.p_e), ("P_g", c.p_g), ("w", c.w)];
    for (name, v) in positive {
        if !(v > 0.0) {
            return Err(ModelError::Invariant { name, t, detail: format!("{name} = {v} is not positive") });
        }
    }
    let nonneg = [("K_e", c.k_e), ("K_g", c.k_g)];
    for (name, v) in nonneg {
        if !(v >= 0.0) {
            return Err(ModelError::Invariant { name, t, detail: format!("{name} = {v} is negative") });
        }
    }
    Ok(())
}

/// Runs the scenario from `initial`, returning the partial trajectory if
/// the run aborts.
pub fn integrate(
    initial: &State,
    scenario: &ScenarioSpec,
    p: &Params,
    cfg: &RunConfig,
) -> Result<RunOutput, Aborted> {
    let mut out = RunOutput {
        scenario: scenario.name.clone(),
        config: *cfg,
        samples: Vec::with_capacity(cfg.n_samples() + 1),
        diagnostics: Diagnostics::default(),
    };
    let fail = |out: RunOutput, error: ModelError| {
        let last_sample = out.samples.len().saturating_sub(1);
        let error = ModelError::Aborted { last_sample, source: Box::new(error) };
        Err(Aborted { partial: out, error })
    };
    if let Err(e) = cfg.validate().and_then(|_| scenario.validate()).and_then(|_| p.validate()) {
        return fail(out, e);
    }
    if let Err(e) = check_invariants(0.0, initial) {
        return fail(out, e);
    }
    match sample(0.0, initial, scenario, p) {
        Ok(s) => out.samples.push(s),
        Err(e) => return fail(out, e),
    }

    let per = cfg.steps_per_sample();
    let mut y = initial.to_array();
    let mut step = 0usize;
    let mut clamp_w_h = 0u64;
    let mut clamp_g = 0u64;
    let mut modes = Diagnostics::default();
    let mut rhs = |t: f64, v: &[f64; State::LEN]| -> Result<[f64; State::LEN], ModelError> {
        let s = State::from_slice(v);
        let d = derivatives(t, &s, scenario, p)?;
        clamp_w_h += d.clamped_w_h as u64;
        clamp_g += d.clamped_g as u64;
        let mut r = [0.0; State::LEN];
        d.write_to(&mut r);
        Ok(r)
    };

    for k in 1..=cfg.n_samples() {
        for _ in 0..per {
            let t = step as f64 * cfg.dt;
            // Mode at the start of each step.
            match evaluate_flows(t, &State::from_slice(&y), scenario, p) {
                Ok(f) => modes.note_mode(f.mode, t),
                Err(e) => {
                    out.diagnostics = finish(modes, clamp_w_h, clamp_g);
                    return fail(out, e);
                }
            }
            match rk4_step(&mut rhs, t, &y, cfg.dt) {
                Ok(next) => y = next,
                Err(e) => {
                    out.diagnostics = finish(modes, clamp_w_h, clamp_g);
                    return fail(out, e);
                }
            }
            step += 1;
        }
        let t = k as f64 * cfg.sample_every;
        let s = State::from_slice(&y);
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            out.diagnostics = finish(modes, clamp_w_h, clamp_g);
            return fail(out, ModelError::NonFinite { quantity: State::NAMES[i], t });
        }
        let res = check_invariants(t, &s).and_then(|_| sample(t, &s, scenario, p));
        match res {
            Ok(smp) => out.samples.push(smp),
            Err(e) => {
                out.diagnostics = finish(modes, clamp_w_h, clamp_g);
                return fail(out, e);
            }
        }
    }
    if let Some(last) = modes.modes.last_mut() {
        last.end = cfg.n_samples() as f64 * cfg.sample_every;
    }
    out.diagnostics = finish(modes, clamp_w_h, clamp_g);

    if cfg.convergence_check {
        let half = RunConfig { dt: cfg.dt / 2.0, convergence_check: false, ..*cfg };
        let fine = integrate(initial, scenario, p, &half)?;
        out.diagnostics.step_halving_divergence =
            Some(max_relative_divergence(&out.last().state, &fine.last().state));
    }
    Ok(out)
}

fn finish(mut modes: Diagnostics, clamp_w_h: u64, clamp_g: u64) -> Diagnostics {
    modes.clamp_w_h = clamp_w_h;
    modes.clamp_g = clamp_g;
    modes
}

/// Largest componentwise relative difference, with a unit floor on the scale
/// so states near zero are compared absolutely.
pub fn max_relative_divergence(a: &State, b: &State) -> f64 {
    a.to_array()
        .iter()
        .zip(b.to_array().iter())
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}

/// Builds the scenario's initial state and runs it.
pub fn run_scenario(scenario: &ScenarioSpec, p: &Params, cfg: &RunConfig) -> Result<RunOutput, Aborted> {
    let initial = match crate::dynamics::initial_state(scenario, p) {
        Ok(s) => s,
        Err(e) => {
            let partial = RunOutput {
                scenario: scenario.name.clone(),
                config: *cfg,
                samples: Vec::new(),
                diagnostics: Diagnostics::default(),
            };
            return Err(Aborted {
                partial,
                error: ModelError::Aborted { last_sample: 0, source: Box::new(e) },
            });
        }
    };
    integrate(&initial, scenario, p, cfg)
}

/// Runs independent scenarios in parallel; results keep the input order.
pub fn run_batch(
    scenarios: &[ScenarioSpec],
    p: &Params,
    cfg: &RunConfig,
) -> Vec<Result<RunOutput, Aborted>> {
    use rayon::prelude::*;
    scenarios.par_iter().map(|s| run_scenario(s, p, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = rk4_solve(|_, y: &[f64; 1]| Ok::<_, ()>([-y[0]]), 0.0, [1.0], 1.0, 0.01).unwrap();
        assert!((y[0] - (-1f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn fourth_order() {
        let err = |dt| {
            let y = rk4_solve(|_, y: &[f64; 1]| Ok::<_, ()>([-y[0]]), 0.0, [1.0], 1.0, dt).unwrap();
            (y[0] - (-1f64).exp()).abs()
        };
        let (e4, e2, e1) = (err(0.04), err(0.02), err(0.01));
        for ratio in [e4 / e2, e2 / e1] {
            assert!((ratio.log2() - 4.0).abs() < 0.1, "order {}", ratio.log2());
        }
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig { dt: 0.5, sample_every: 0.25, ..Default::default() };
        assert!(bad.validate().is_err());
        let uneven = RunConfig { dt: 0.1, sample_every: 0.25, ..Default::default() };
        assert!(uneven.validate().is_err());
    }
}
