//! Right-hand side of the model.
//!
//! [`evaluate_flows`] turns a state into the algebraic snapshot of the
//! economy (outputs, costs, investment, consumption, profits) and
//! [`derivatives`] turns that snapshot into rates for every state.

use crate::error::ModelError;
use crate::model::{
    cu_lookup, death_rate, gross_outputs, inventory_coverage, investment_decision, phillips,
    technical_coefficients, unit_costs, AMatrix, Investment, Outputs,
};
use crate::params::Params;
use crate::scenario::ScenarioSpec;
use crate::state::{CoreState, LagState, ScheduleState, State};

/// Exogenous quantities in effect at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedules {
    pub delta_y: f64,
    pub lambda_y: f64,
    pub eta_e: f64,
    pub eta_g: f64,
    pub w1: f64,
    pub w2: f64,
    pub a_ponzi: f64,
}

/// Which of the three biophysical thresholds bind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Mode {
    /// Labor demand exceeded the participation cap.
    pub labor_capped: bool,
    /// Household resource consumption was pinned at its floor.
    pub resource_floor: bool,
    /// Household goods consumption was pinned at its floor.
    pub goods_floor: bool,
}

impl Mode {
    /// Mode number in `0..8`, one bit per threshold.
    pub fn index(&self) -> u8 {
        self.labor_capped as u8 | ((self.resource_floor as u8) << 1) | ((self.goods_floor as u8) << 2)
    }
}

/// Algebraic snapshot of the economy at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flows {
    pub t: f64,
    pub sched: Schedules,
    pub a: AMatrix,
    /// Utilizations actually applied after the thresholds.
    pub cu_e: f64,
    pub cu_g: f64,
    pub x_e: f64,
    pub x_g: f64,
    pub l_e: f64,
    pub l_g: f64,
    pub lambda_n: f64,
    /// Unit costs under the scenario's pricing rule.
    pub c_e: f64,
    pub c_g: f64,
    pub p_e_rate: f64,
    pub p_g_rate: f64,
    pub inflation: f64,
    pub inv_e: f64,
    pub inv_g: f64,
    pub dinv_e: f64,
    pub dinv_g: f64,
    pub y_e: f64,
    pub y_g: f64,
    pub invest_e: Investment,
    pub invest_g: Investment,
    pub cons_e: f64,
    pub cons_g: f64,
    pub v_e: f64,
    pub v_g: f64,
    pub pi_e: f64,
    pub pi_g: f64,
    /// Targeted resource and goods consumption (physical rates).
    pub resource_demand: f64,
    pub goods_demand: f64,
    pub ic_e: f64,
    pub ic_g: f64,
    pub percap_resource: f64,
    pub death_rate: f64,
    pub mode: Mode,
}

impl Flows {
    pub fn y_total(&self) -> f64 {
        self.y_e + self.y_g
    }

    pub fn v_total(&self) -> f64 {
        self.v_e + self.v_g
    }

    pub fn invest_total(&self) -> f64 {
        self.invest_e.total + self.invest_g.total
    }

    /// Physical investment in new capital (goods per time).
    pub fn physical_investment(&self, p_g: f64) -> f64 {
        (self.invest_e.new_capital + self.invest_g.new_capital) / p_g
    }
}

/// Rates of every state, in the same layout as [`State`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Derivatives {
    pub core: CoreState,
    pub lags: LagState,
    pub sched: ScheduleState,
    /// Inventory stocks whose outflow was cut to keep them at zero.
    pub clamped_w_h: bool,
    pub clamped_g: bool,
}

impl Derivatives {
    pub fn write_to(&self, out: &mut [f64]) {
        self.core.write_to(out);
        self.lags.write_to(&mut out[CoreState::LEN..]);
        self.sched.write_to(&mut out[CoreState::LEN + LagState::LEN..]);
    }
}

pub fn schedules(t: f64, sched: &ScheduleState, scenario: &ScenarioSpec, p: &Params) -> Schedules {
    let (eta_e, eta_g) = scenario.scheduled_eta(sched, p);
    let (w1, w2) = scenario.bargaining(t);
    Schedules {
        delta_y: scenario.scheduled_delta_y(t, sched, p),
        lambda_y: scenario.scheduled_lambda_y(t, sched, p),
        eta_e,
        eta_g,
        w1,
        w2,
        a_ponzi: scenario.a_ponzi,
    }
}

fn check(quantity: &'static str, v: f64, t: f64) -> Result<f64, ModelError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ModelError::NonFinite { quantity, t })
    }
}

/// Everything downstream of the applied utilizations, recomputed whenever a
/// threshold changes output.
struct Stage {
    out: Outputs,
    c_e: f64,
    c_g: f64,
    inv_e: f64,
    inv_g: f64,
    dinv_e: f64,
    dinv_g: f64,
    y_e: f64,
    y_g: f64,
}

fn stage(
    core: &CoreState,
    lags: &LagState,
    a: &AMatrix,
    cu_e: f64,
    cu_g: f64,
    delta_y: f64,
    scenario: &ScenarioSpec,
    p: &Params,
) -> Stage {
    let out = gross_outputs(core, cu_e, cu_g, delta_y, p);
    let costs = unit_costs(core, a, &out, scenario.pricing, p);
    // A sector with no output keeps its price: cost is taken at the level
    // that makes the price rate vanish.
    let c_e = costs.c_e.unwrap_or(core.p_e / (1.0 + p.mu_e));
    let c_g = costs.c_g.unwrap_or(core.p_g / (1.0 + p.mu_g));
    let inv_e = c_e * core.w_h;
    let inv_g = c_g * core.g;
    Stage {
        c_e,
        c_g,
        inv_e,
        inv_g,
        dinv_e: (inv_e - lags.inv_e) / p.tau_p_e,
        dinv_g: (inv_g - lags.inv_g) / p.tau_p_g,
        y_e: core.p_e * (out.x_e * (1.0 - a.a_ee) - a.a_eg * out.x_g),
        y_g: core.p_g * (out.x_g * (1.0 - a.a_gg) - a.a_ge * out.x_e),
        out,
    }
}

/// Removes up to `amount` of physical (non-Ponzi) investment, goods sector
/// first. Returns what was actually removed.
fn trim_physical_investment(amount: f64, inv_g: &mut Investment, inv_e: &mut Investment) -> f64 {
    let mut left = amount.max(0.0);
    for inv in [inv_g, inv_e] {
        let cut = left.min(inv.new_capital);
        inv.new_capital -= cut;
        inv.total -= cut;
        inv.ponzi_fraction = if inv.total > 0.0 { inv.ponzi / inv.total } else { 0.0 };
        left -= cut;
    }
    amount.max(0.0) - left
}

pub fn evaluate_flows(
    t: f64,
    state: &State,
    scenario: &ScenarioSpec,
    p: &Params,
) -> Result<Flows, ModelError> {
    let core = &state.core;
    let lags = &state.lags;

    // (1) schedules, (2) coefficients
    let sc = schedules(t, &state.sched, scenario, p);
    let a = technical_coefficients(core.y, sc.delta_y, sc.eta_e, sc.eta_g, p)?;

    // (3) tentative output at the lagged utilizations; labor cap
    let mut mode = Mode::default();
    let mut cu_e = lags.cu_e.clamp(0.0, 1.0);
    let mut cu_g = lags.cu_g.clamp(0.0, 1.0);
    let tentative = gross_outputs(core, cu_e, cu_g, sc.delta_y, p);
    let labor = tentative.l_e + tentative.l_g;
    let labor_cap = p.lambda_n_max * core.n;
    if labor > labor_cap {
        let f = labor_cap / labor;
        cu_e *= f;
        cu_g *= f;
        mode.labor_capped = true;
    }

    // (4)-(6) costs, inventory values, net output
    let mut st = stage(core, lags, &a, cu_e, cu_g, sc.delta_y, scenario, p);

    // (7) investment from lagged profits
    let mut invest_e =
        investment_decision(lags.pi_e, core.k_e, core.p_g, cu_e, sc.a_ponzi, p);
    let mut invest_g =
        investment_decision(lags.pi_g, core.k_g, core.p_g, cu_g, sc.a_ponzi, p);

    // Threshold 2: household resource floor. Goods output is cut so the
    // resource otherwise spent operating goods capital and embodied in goods
    // reaches households; the lost goods come out of physical investment.
    let cons_e = st.y_e - st.dinv_e;
    let floor_e = p.rho_e * core.n * core.p_e;
    if cons_e < floor_e && st.out.x_g > 0.0 && a.a_eg > 0.0 {
        let dx_g = (floor_e - cons_e) / (core.p_e * a.a_eg);
        let x_g_new = (st.out.x_g - dx_g).max(0.0);
        let y_g_before = st.y_g;
        cu_g *= x_g_new / st.out.x_g;
        st = stage(core, lags, &a, cu_e, cu_g, sc.delta_y, scenario, p);
        trim_physical_investment(y_g_before - st.y_g, &mut invest_g, &mut invest_e);
        mode.resource_floor = true;
    }

    // (8) household consumption as the residual of net output
    let cons_e = st.y_e - st.dinv_e;
    let mut cons_g = st.y_g - (invest_e.new_capital + invest_g.new_capital) - st.dinv_g;

    // Threshold 3: household goods floor.
    let floor_g = p.rho_g * core.n * core.p_g;
    if cons_g < floor_g {
        let cut = trim_physical_investment(floor_g - cons_g, &mut invest_g, &mut invest_e);
        cons_g += cut;
        mode.goods_floor = true;
    }

    // (4 cont.) price rates and inflation
    let p_e_rate = ((1.0 + p.mu_e) * st.c_e - core.p_e) / p.tau_p_e;
    let p_g_rate = ((1.0 + p.mu_g) * st.c_g - core.p_g) / p.tau_p_g;
    let c_sum = cons_e + cons_g;
    let (we, wg) = if c_sum.abs() > 0.0 { (cons_e / c_sum, cons_g / c_sum) } else { (0.5, 0.5) };
    let inflation = wg * p_g_rate / core.p_g + we * p_e_rate / core.p_e;

    // (9) value added and profit
    let x = &st.out;
    let v_e = core.p_e * x.x_e - core.p_g * a.a_ge * x.x_e - core.p_e * a.a_ee * x.x_e;
    let v_g = core.p_g * x.x_g - core.p_e * a.a_eg * x.x_g - core.p_g * a.a_gg * x.x_g;
    let pi_e = v_e - core.w * x.l_e - p.r_l * core.d_e - core.p_g * p.delta * core.k_e;
    let pi_g = v_g - core.w * x.l_g - p.r_l * core.d_g - core.p_g * p.delta * core.k_g;

    let resource_demand = cons_e / core.p_e + a.a_eg * x.x_g + a.a_ee * x.x_e;
    let goods_demand = (cons_g + invest_e.new_capital + invest_g.new_capital) / core.p_g
        + a.a_ge * x.x_e
        + a.a_gg * x.x_g;
    let percap_resource = cons_e / (core.p_e * core.n);

    let flows = Flows {
        t,
        sched: sc,
        a,
        cu_e,
        cu_g,
        x_e: check("X_e", x.x_e, t)?,
        x_g: check("X_g", x.x_g, t)?,
        l_e: x.l_e,
        l_g: x.l_g,
        lambda_n: check("lambda_N", x.lambda_n, t)?,
        c_e: check("c_e", st.c_e, t)?,
        c_g: check("c_g", st.c_g, t)?,
        p_e_rate,
        p_g_rate,
        inflation: check("inflation", inflation, t)?,
        inv_e: st.inv_e,
        inv_g: st.inv_g,
        dinv_e: st.dinv_e,
        dinv_g: st.dinv_g,
        y_e: check("Y_e", st.y_e, t)?,
        y_g: check("Y_g", st.y_g, t)?,
        invest_e,
        invest_g,
        cons_e: check("C_e", cons_e, t)?,
        cons_g: check("C_g", cons_g, t)?,
        v_e,
        v_g,
        pi_e: check("Pi_e", pi_e, t)?,
        pi_g: check("Pi_g", pi_g, t)?,
        resource_demand,
        goods_demand,
        ic_e: inventory_coverage(core.w_h, p.tau_ic_e, resource_demand),
        ic_g: inventory_coverage(core.g, p.tau_ic_g, goods_demand),
        percap_resource,
        death_rate: death_rate(percap_resource.max(0.0), p),
        mode,
    };
    Ok(flows)
}

/// Rates of change given an already evaluated snapshot.
pub fn derivatives_from_flows(
    t: f64,
    state: &State,
    f: &Flows,
    scenario: &ScenarioSpec,
    p: &Params,
) -> Result<Derivatives, ModelError> {
    let core = &state.core;
    let lags = &state.lags;
    let sched = &state.sched;

    let mut w_h_rate = (p.ic_ref_e - lags.icp_e) * f.resource_demand;
    let mut g_rate = (p.ic_ref_g - lags.icp_g) * f.goods_demand;
    let clamped_w_h = core.w_h <= 0.0 && w_h_rate < 0.0;
    if clamped_w_h {
        w_h_rate = 0.0;
    }
    let clamped_g = core.g <= 0.0 && g_rate < 0.0;
    if clamped_g {
        g_rate = 0.0;
    }

    let lambda_lag = (lags.l_e + lags.l_g) / core.n;
    let lambda_rate = (f.lambda_n - lambda_lag) / p.tau_l;
    let wage_growth = phillips(f.lambda_n, p)
        + f.sched.w1 * f.inflation
        + if f.lambda_n > 0.0 { f.sched.w2 * lambda_rate / f.lambda_n } else { 0.0 };

    let ic_inv = |icp: f64| if icp > 0.0 { 1.0 / icp } else { f64::MAX };
    let cu_ind_e = cu_lookup(ic_inv(lags.icp_e))?;
    let cu_ind_g = cu_lookup(ic_inv(lags.icp_g))?;

    let accruing = t >= scenario.t_critical;
    let (d1, d2, d3) = scenario.cascade_rates(sched);

    let core_rates = CoreState {
        y: p_gamma_term(core.y, f.sched.lambda_y, p) - f.x_e,
        n: (p.beta_n - f.death_rate) * core.n,
        w_h: w_h_rate,
        g: g_rate,
        k_e: f.invest_e.new_capital / core.p_g - p.delta * core.k_e,
        k_g: f.invest_g.new_capital / core.p_g - p.delta * core.k_g,
        d_e: f.invest_e.total - core.p_g * p.delta * core.k_e - f.pi_e,
        d_g: f.invest_g.total - core.p_g * p.delta * core.k_g - f.pi_g,
        w: core.w * wage_growth,
        p_e: f.p_e_rate,
        p_g: f.p_g_rate,
    };
    let lag_rates = LagState {
        cu_e: (cu_ind_e - lags.cu_e) / p.tau_cu_e,
        cu_g: (cu_ind_g - lags.cu_g) / p.tau_cu_g,
        icp_e: (f.ic_e - lags.icp_e) / p.tau_ic_e,
        icp_g: (f.ic_g - lags.icp_g) / p.tau_ic_g,
        v_e: (f.v_e - lags.v_e) / p.tau_v_e,
        v_g: (f.v_g - lags.v_g) / p.tau_v_g,
        pi_e: (f.pi_e - lags.pi_e) / p.tau_pi_e,
        pi_g: (f.pi_g - lags.pi_g) / p.tau_pi_g,
        inv_e: (f.inv_e - lags.inv_e) / p.tau_p_e,
        inv_g: (f.inv_g - lags.inv_g) / p.tau_p_g,
        l_e: (f.l_e - lags.l_e) / p.tau_p_e,
        l_g: (f.l_g - lags.l_g) / p.tau_p_g,
    };
    let sched_rates = ScheduleState {
        d1,
        d2,
        d3,
        icum_e: if accruing { f.invest_e.new_capital / core.p_g } else { 0.0 },
        icum_g: if accruing { f.invest_g.new_capital / core.p_g } else { 0.0 },
        ln_cpi: f.inflation,
    };

    let d = Derivatives { core: core_rates, lags: lag_rates, sched: sched_rates, clamped_w_h, clamped_g };
    let mut flat = [0.0; State::LEN];
    d.write_to(&mut flat);
    for (i, v) in flat.iter().enumerate() {
        if !v.is_finite() {
            return Err(ModelError::NonFinite { quantity: State::NAMES[i], t });
        }
    }
    Ok(d)
}

fn p_gamma_term(y: f64, lambda_y: f64, p: &Params) -> f64 {
    p.gamma * y * (lambda_y - y)
}

pub fn derivatives(
    t: f64,
    state: &State,
    scenario: &ScenarioSpec,
    p: &Params,
) -> Result<Derivatives, ModelError> {
    let f = evaluate_flows(t, state, scenario, p)?;
    derivatives_from_flows(t, state, &f, scenario, p)
}

/// Sets the lagged value-added, profit, inventory-value and labor states to
/// their current values, so a run starts without a spurious lag transient.
pub fn sync_lags(t: f64, state: &mut State, scenario: &ScenarioSpec, p: &Params) -> Result<(), ModelError> {
    for _ in 0..3 {
        let f = evaluate_flows(t, state, scenario, p)?;
        let l = &mut state.lags;
        l.v_e = f.v_e;
        l.v_g = f.v_g;
        l.pi_e = f.pi_e;
        l.pi_g = f.pi_g;
        l.inv_e = f.inv_e;
        l.inv_g = f.inv_g;
        l.l_e = f.l_e;
        l.l_g = f.l_g;
    }
    Ok(())
}

/// Initial state for a scenario: published stocks and lags for its pricing
/// rule, with the schedule states seeded.
pub fn initial_state(scenario: &ScenarioSpec, p: &Params) -> Result<State, ModelError> {
    let mut s = crate::initial::for_pricing(scenario.pricing);
    let start = scenario.driver_start(p);
    s.sched = ScheduleState { d1: start, d2: start, d3: start, icum_e: 0.0, icum_g: 0.0, ln_cpi: 0.0 };
    evaluate_flows(0.0, &s, scenario, p)?;
    Ok(s)
}
