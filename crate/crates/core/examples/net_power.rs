//! Net external and net power ratios from the Leontief inverse.
//!
//! cargo run --release --example net_power

use harmoney::analytics::{leontief_inverse, Derived};
use harmoney::integrator::{run_scenario, RunConfig};
use harmoney::model::AMatrix;
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = AMatrix { a_gg: 0.3, a_ge: 0.05, a_eg_o: 0.15, a_eg_i: 0.05, a_eg: 0.2, a_ee: 0.1 };
    let inv = leontief_inverse(&a)?;
    println!("(1 - A)^-1 for a sample matrix: {inv:?}");
    println!("NPR bound (1 - a_ee)/a_ee = {}\n", (1.0 - a.a_ee) / a.a_ee);

    let p = Params::default();
    let run = run_scenario(&ScenarioSpec::preset("FC-100")?, &p, &RunConfig::default()).map_err(|a| a.error)?;
    let d = Derived::from_run(&run, &p)?;
    println!("{:>6} {:>8} {:>8} {:>8}", "t", "NEPR", "NPR", "bound");
    for i in (0..d.t.len()).step_by(100) {
        println!("{:6.1} {:8.4} {:8.4} {:8.4}", d.t[i], d.nepr[i], d.npr[i], d.npr_upper[i]);
    }
    Ok(())
}
