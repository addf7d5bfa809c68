//! Alternative ways of driving resource-productivity growth: the default
//! logistic delay, a three-stage delay cascade, and growth through the
//! regeneration coefficient instead.
//!
//! cargo run --release --example growth_drivers

use harmoney::analytics::{landmarks, Derived};
use harmoney::integrator::{run_scenario, RunConfig};
use harmoney::scenario::DelayShape;
use harmoney::{Params, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let base = ScenarioSpec::preset("FC-000")?;
    let cascade = ScenarioSpec { delay: DelayShape::Cascade, ..base.clone() };
    let lambda = base.clone().with_lambda_y_growth();
    for (label, sc) in [("logistic", base), ("cascade", cascade), ("lambda_y", lambda)] {
        let run = run_scenario(&sc, &p, &RunConfig::default()).map_err(|a| a.error)?;
        let l = landmarks(&Derived::from_run(&run, &p)?);
        let t = |x: Option<harmoney::analytics::Landmark>| x.map_or("-".into(), |x| format!("{:.2}", x.t));
        println!(
            "{label:>9}: max extraction growth T {}  knee T {}  peak debt ratio T {}  peak X_e/N T {}",
            t(l.max_extraction_growth),
            t(l.knee),
            t(l.peak_debt_ratio),
            t(l.peak_percap_extraction)
        );
    }
    Ok(())
}
