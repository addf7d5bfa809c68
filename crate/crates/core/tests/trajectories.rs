use proptest::prelude::*;

use harmoney::analytics::Derived;
use harmoney::config::parse_config;
use harmoney::integrator::{run_scenario, RunConfig};
use harmoney::output::{header, read_states, rebuild_run, write_csv};
use harmoney::{Params, ScenarioSpec, State};

fn short(t_end: f64) -> RunConfig {
    RunConfig { t_end, ..RunConfig::default() }
}

#[test]
fn csv_reproduces_sampled_states_exactly() {
    let p = Params::default();
    let sc = ScenarioSpec::preset("MC-111").unwrap();
    let run = run_scenario(&sc, &p, &short(150.0)).unwrap();
    let d = Derived::from_run(&run, &p).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &run, &d).unwrap();

    let text = String::from_utf8(buf.clone()).unwrap();
    let first = text.lines().next().unwrap();
    assert_eq!(first, header().join(","));
    assert_eq!(text.lines().count(), run.samples.len() + 1);

    let states = read_states(buf.as_slice()).unwrap();
    assert_eq!(states.len(), run.samples.len());
    for ((t, s), orig) in states.iter().zip(&run.samples) {
        assert_eq!(*t, orig.t);
        assert_eq!(*s, orig.state);
    }
    let again = rebuild_run(&states, &sc, &p).unwrap();
    assert_eq!(again.samples, run.samples);
}

#[test]
fn csv_reader_rejects_foreign_headers() {
    let bad = "t,y,x\n0,1,2\n";
    assert!(read_states(bad.as_bytes()).is_err());
}

#[test]
fn identical_runs_are_bit_identical() {
    let p = Params::default();
    let sc = ScenarioSpec::preset("FC-111").unwrap();
    let a = run_scenario(&sc, &p, &short(120.0)).unwrap();
    let b = run_scenario(&sc, &p, &short(120.0)).unwrap();
    for (x, y) in a.samples.iter().zip(&b.samples) {
        let bits = |s: &State| s.to_array().map(f64::to_bits);
        assert_eq!(bits(&x.state), bits(&y.state));
    }
}

#[test]
fn convergence_check_reports_divergence() {
    let p = Params::default();
    let sc = ScenarioSpec::preset("FC-000").unwrap();
    let cfg = RunConfig { convergence_check: true, ..short(60.0) };
    let run = run_scenario(&sc, &p, &cfg).unwrap();
    let div = run.diagnostics.step_halving_divergence.unwrap();
    assert!(div > 0.0 && div < 1e-3, "{div}");
}

fn float() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, any::<f64>().prop_filter("finite", |v| v.is_finite())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn any_state_survives_the_csv_format(vals in prop::collection::vec(float(), State::LEN), t in 0.0..300.0f64) {
        let s = State::from_slice(&vals);
        let mut text = header().join(",");
        text.push('\n');
        let mut row: Vec<String> = std::iter::once(t).chain(s.to_array()).map(|v| format!("{v:.16e}")).collect();
        row.resize(header().len(), String::new());
        text.push_str(&row.join(","));
        text.push('\n');
        let back = read_states(text.as_bytes()).unwrap();
        prop_assert_eq!(back[0].0.to_bits(), t.to_bits());
        prop_assert_eq!(back[0].1.to_array().map(f64::to_bits), s.to_array().map(f64::to_bits));
    }

    #[test]
    fn config_echo_reparses(
        dt_steps in 1u32..50, t_end in 10.0..400.0f64, delta in 0.001..0.2f64,
        mu in 0.0..0.5f64, pick in 0usize..12, eta_mid in prop::option::of(10.0..100.0f64),
    ) {
        let name = harmoney::scenario::PRESET_NAMES[pick];
        let dt = 0.25 / dt_steps as f64;
        let mut text = format!("scenario = {name}\ndt = {dt:?}\nt_end = {t_end:?}\n[params]\ndelta = {delta:?}\nmu_g = {mu:?}\n[scenario]\n");
        if let Some(m) = eta_mid {
            text.push_str(&format!("eta_mid = {m:?}\n"));
        }
        let cfg = parse_config(&text).unwrap();
        prop_assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
    }
}
