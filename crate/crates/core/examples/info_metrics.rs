//! Information measures of the monetary input-output table: total
//! information H splits into mutual constraint X_MC and flexibility Psi.
//!
//! cargo run --release --example info_metrics

use harmoney::analytics::{info_metrics_n, signed_area, Derived};
use harmoney::integrator::{run_scenario, RunConfig};
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Any nonnegative square table works, not only the model's 2x2 one.
    let table = [[4.0, 1.0, 0.5], [2.0, 3.0, 0.0], [0.2, 0.8, 5.0]];
    let m = info_metrics_n(&table)?;
    println!("3x3 table: H = {:.6}  X_MC = {:.6}  Psi = {:.6}  TST = {}", m.h, m.x_mc, m.psi, m.tst);

    let p = Params::default();
    let run = run_scenario(&ScenarioSpec::preset("FC-000")?, &p, &RunConfig::default()).map_err(|a| a.error)?;
    let d = Derived::from_run(&run, &p)?;
    println!("\n{:>6} {:>9} {:>9} {:>9}", "t", "H", "X_MC", "Psi");
    for i in (0..d.t.len()).step_by(100) {
        println!("{:6.1} {:9.6} {:9.6} {:9.6}", d.t[i], d.h[i], d.x_mc[i], d.psi[i]);
    }
    let area = signed_area(&d.x_mc, &d.psi);
    let turn = if area > 0.0 { "counter-clockwise" } else { "clockwise" };
    println!("\n(X_MC, Psi) path signed area {area:.3e}: {turn}");
    Ok(())
}
