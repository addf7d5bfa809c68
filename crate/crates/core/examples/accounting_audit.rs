//! National accounts along a run, and the stock-flow consistency residuals.
//!
//! cargo run --release --example accounting_audit -- MC-000

use harmoney::accounting::{accounts, sfc_audit};
use harmoney::dynamics::derivatives_from_flows;
use harmoney::integrator::{run_scenario, RunConfig};
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "MC-000".into());
    let p = Params::default();
    let sc = ScenarioSpec::preset(&name)?;
    let run = run_scenario(&sc, &p, &RunConfig::default()).map_err(|a| a.error)?;
    let base = run.samples[0].state.core;

    println!("{:>6} {:>7} {:>7} {:>8} {:>7} {:>9} {:>9} {:>10}", "t", "wage", "profit", "interest", "deprec", "debt/Y", "real w", "max SFC");
    let mut worst: f64 = 0.0;
    for (i, s) in run.samples.iter().enumerate() {
        let d = derivatives_from_flows(s.t, &s.state, &s.flows, &sc, &p)?;
        let residual = sfc_audit(&s.state, &s.flows, &d, &p).max();
        worst = worst.max(residual);
        if i % 100 == 0 {
            let a = accounts(&s.state, &s.flows, &base, &p)?;
            println!(
                "{:6.1} {:7.4} {:7.4} {:8.4} {:7.4} {:9.4} {:9.4} {:10.2e}",
                s.t, a.shares.wage, a.shares.profit, a.shares.interest, a.shares.depreciation, a.debt_ratio, a.real_wage, residual
            );
        }
    }
    println!("\nlargest SFC residual over {} samples: {worst:.3e}", run.samples.len());
    Ok(())
}
