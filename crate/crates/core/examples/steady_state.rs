//! Both initial conditions with the growth driver frozen: the economy settles
//! into a stationary real state while nominal prices inflate.
//!
//! cargo run --release --example steady_state

use harmoney::accounting::steady_state_deviation;
use harmoney::dynamics::{evaluate_flows, initial_state};
use harmoney::integrator::{integrate, RunConfig};
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let cfg = RunConfig { t_end: 200.0, ..RunConfig::default() };
    for name in ["FC-000", "MC-000"] {
        let sc = ScenarioSpec::preset(name)?.frozen();
        let s0 = initial_state(&sc, &p)?;
        let y0 = evaluate_flows(0.0, &s0, &sc, &p)?.y_total();
        let run = integrate(&s0, &sc, &p, &cfg).map_err(|a| a.error)?;
        let (dev, state) = run
            .samples
            .iter()
            .map(|s| steady_state_deviation(&s0, y0, &s.state))
            .fold((0.0, ""), |a, b| if b.0 > a.0 { b } else { a });
        let last = run.last();
        println!(
            "{}: worst real drift {:.3e} ({state}), CPI x{:.3e} by t = {}",
            sc.name,
            dev,
            last.state.sched.ln_cpi.exp(),
            last.t
        );
    }
    Ok(())
}
