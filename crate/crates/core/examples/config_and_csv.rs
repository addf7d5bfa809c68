//! A configuration file drives a run; its CSV is read back and the landmarks
//! are recomputed from the file alone.
//!
//! cargo run --release --example config_and_csv

use harmoney::analytics::{landmarks, Derived};
use harmoney::config::parse_config;
use harmoney::integrator::run_batch;
use harmoney::output::{read_states_file, rebuild_run, write_csv_file};

const CONFIG: &str = "
scenario = MC-100
sample_every = 0.5

[params]
r_l = 0.04

[scenario]
delay = cascade
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(CONFIG)?;
    cfg.validate()?;
    println!("effective configuration:\n{}", cfg.to_text());

    let spec = &cfg.specs()[0];
    let run = run_batch(std::slice::from_ref(spec), &cfg.params, &cfg.run).remove(0).map_err(|a| a.error)?;
    let d = Derived::from_run(&run, &cfg.params)?;

    let dir = std::env::temp_dir().join("harmoney-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{}.csv", spec.name));
    write_csv_file(&path, &run, &d)?;

    let states = read_states_file(&path)?;
    let exact = states.iter().zip(&run.samples).all(|((t, s), orig)| *t == orig.t && *s == orig.state);
    println!("{} rows written to {}, read back exactly: {exact}", states.len(), path.display());

    let again = Derived::from_run(&rebuild_run(&states, spec, &cfg.params)?, &cfg.params)?;
    println!("knee from memory {:?}", landmarks(&d).knee.map(|k| k.t));
    println!("knee from file   {:?}", landmarks(&again).knee.map(|k| k.t));
    Ok(())
}
