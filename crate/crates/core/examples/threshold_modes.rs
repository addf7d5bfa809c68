//! Which of the three threshold constraints bind, and when. Without
//! bargaining power the labor cap binds and goods utilization collapses.
//!
//! cargo run --release --example threshold_modes -- FC-010

use harmoney::integrator::{run_scenario, RunConfig};
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "FC-010".into());
    let p = Params::default();
    let run = match run_scenario(&ScenarioSpec::preset(&name)?, &p, &RunConfig::default()) {
        Ok(run) => run,
        Err(a) => {
            println!("run stopped early: {}\n", a.error);
            a.partial
        }
    };
    println!("mode  labor resource goods      from        to");
    for m in &run.diagnostics.modes {
        if m.end - m.start < 0.5 {
            continue;
        }
        let flag = |b: bool| if b { "x" } else { "." };
        println!(
            "{:>4}  {:>5} {:>8} {:>5}  {:8.2}  {:8.2}",
            m.mode.index(),
            flag(m.mode.labor_capped),
            flag(m.mode.resource_floor),
            flag(m.mode.goods_floor),
            m.start,
            m.end
        );
    }
    let d = &run.diagnostics;
    println!("\ninventory clamps: {} worker-house, {} goods", d.clamp_w_h, d.clamp_g);
    Ok(())
}
