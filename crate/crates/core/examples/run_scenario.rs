//! One preset run with its landmark summary.
//!
//! cargo run --release --example run_scenario -- MC-100

use harmoney::analytics::Derived;
use harmoney::integrator::{run_scenario, RunConfig};
use harmoney::report::{format_lines, scenario_lines};
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "FC-000".into());
    let p = Params::default();
    let run = run_scenario(&ScenarioSpec::preset(&name)?, &p, &RunConfig::default()).map_err(|a| a.error)?;
    let d = Derived::from_run(&run, &p)?;

    println!("{:>6} {:>9} {:>8} {:>8} {:>7} {:>7}", "t", "real Y", "X_e/N", "debt/Y", "CU_g", "lambda");
    for (i, s) in run.samples.iter().enumerate().step_by(80) {
        println!(
            "{:6.1} {:9.4} {:8.5} {:8.4} {:7.4} {:7.4}",
            s.t, d.real_gdp[i], d.percap_extraction[i], d.debt_ratio[i], s.flows.cu_g, s.flows.lambda_n
        );
    }
    println!();
    print!("{}", format_lines(&scenario_lines(&run, &d)));
    Ok(())
}
