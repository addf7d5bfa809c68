//! Growth of real output against growth of extraction, and the windows where
//! output grows while extraction falls.
//!
//! cargo run --release --example decoupling -- MC-000

use harmoney::analytics::{landmarks, Derived};
use harmoney::integrator::{run_scenario, RunConfig};
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "MC-000".into());
    let p = Params::default();
    let run = run_scenario(&ScenarioSpec::preset(&name)?, &p, &RunConfig::default()).map_err(|a| a.error)?;
    let d = Derived::from_run(&run, &p)?;

    println!("{:>6} {:>9} {:>9} {:>9}", "t", "g_Y", "g_R", "d");
    let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.5}"));
    for i in (0..d.t.len()).step_by(40) {
        println!("{:6.1} {:>9} {:>9} {:>9}", d.t[i], cell(d.g_y[i]), cell(d.g_r[i]), cell(d.decoupling[i]));
    }
    let l = landmarks(&d);
    if let Some(m) = l.max_decoupling {
        println!("\nlargest decoupling {:.5} at t = {}", m.value, m.t);
    }
    println!("absolute decoupling windows: {:?}", l.absolute_decoupling);
    Ok(())
}
