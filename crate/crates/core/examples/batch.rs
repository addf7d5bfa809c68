//! All twelve presets in parallel, followed by the MC/FC ratio landmarks.
//!
//! cargo run --release --example batch

use std::collections::BTreeMap;

use harmoney::analytics::{landmarks, Derived};
use harmoney::integrator::{run_batch, RunConfig};
use harmoney::report::{format_lines, ratio_lines};
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let started = std::time::Instant::now();
    let results = run_batch(&ScenarioSpec::all_presets(), &p, &RunConfig::default());
    println!("12 runs in {:.2?}\n", started.elapsed());

    let mut by_name = BTreeMap::new();
    for r in results {
        // Aborted runs still carry everything up to the failure.
        let (run, note) = match r {
            Ok(run) => (run, String::new()),
            Err(a) => (a.partial, format!("  aborted: {}", a.error)),
        };
        let last = run.last();
        println!(
            "{}  t_end {:6.2}  CU_g {:.3}  lambda {:.3}  N {:7.2}{note}",
            run.scenario, last.t, last.flows.cu_g, last.flows.lambda_n, last.state.core.n
        );
        by_name.insert(run.scenario.clone(), landmarks(&Derived::from_run(&run, &p)?));
    }
    println!();
    print!("{}", format_lines(&ratio_lines(&by_name)));
    Ok(())
}
