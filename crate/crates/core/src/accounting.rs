//! National accounts of a sampled state and stock-flow consistency audit.

use crate::dynamics::{Derivatives, Flows};
use crate::error::ModelError;
use crate::model::gross_outputs;
use crate::params::Params;
use crate::state::{CoreState, State};

/// Split of total value added; `profit` is the residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shares {
    pub wage: f64,
    pub profit: f64,
    pub interest: f64,
    pub depreciation: f64,
}

impl Shares {
    pub fn sum(&self) -> f64 {
        self.wage + self.profit + self.interest + self.depreciation
    }
}

pub fn shares(f: &Flows, core: &CoreState, p: &Params) -> Result<Shares, ModelError> {
    let v = f.v_total();
    if !(v > 0.0) {
        return Err(ModelError::UndefinedShares(v));
    }
    let wage = core.w * (f.l_e + f.l_g) / v;
    let interest = p.r_l * (core.d_e + core.d_g) / v;
    let depreciation = core.p_g * p.delta * (core.k_e + core.k_g) / v;
    Ok(Shares { wage, interest, depreciation, profit: 1.0 - wage - interest - depreciation })
}

/// Output-weighted price level relative to the base prices.
pub fn gdp_deflator(core: &CoreState, f: &Flows, p_e0: f64, p_g0: f64) -> f64 {
    let real = p_g0 * f.y_g / core.p_g + p_e0 * f.y_e / core.p_e;
    f.y_total() / real
}

pub fn cpi(state: &State) -> f64 {
    state.sched.ln_cpi.exp()
}

/// Total firm debt over nominal total net output.
pub fn debt_ratio(core: &CoreState, f: &Flows) -> Result<f64, ModelError> {
    let y = f.y_total();
    if !(y > 0.0) {
        return Err(ModelError::UndefinedDebtRatio(y));
    }
    Ok((core.d_e + core.d_g) / y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccountsSample {
    pub shares: Shares,
    pub y_nominal: f64,
    pub y_real: f64,
    pub gdp_deflator: f64,
    pub cpi: f64,
    pub debt_ratio: f64,
    pub real_wage: f64,
    /// Net worth of extraction firms, goods firms and households.
    pub x_f_e: f64,
    pub x_f_g: f64,
    pub x_h: f64,
    pub x_tot: f64,
    pub m_h: f64,
}

/// Accounts at one sample. `base` supplies the initial prices.
pub fn accounts(state: &State, f: &Flows, base: &CoreState, p: &Params) -> Result<AccountsSample, ModelError> {
    let c = &state.core;
    let deflator = gdp_deflator(c, f, base.p_e, base.p_g);
    let cpi = cpi(state);
    // Loans are the banks' only asset and deposits their only liability.
    let m_h = c.d_e + c.d_g;
    let x_f_e = c.p_g * c.k_e - c.d_e;
    let x_f_g = c.p_g * c.k_g - c.d_g;
    Ok(AccountsSample {
        shares: shares(f, c, p)?,
        y_nominal: f.y_total(),
        y_real: f.y_total() / deflator,
        gdp_deflator: deflator,
        cpi,
        debt_ratio: debt_ratio(c, f)?,
        real_wage: c.w / cpi,
        x_f_e,
        x_f_g,
        x_h: m_h,
        x_tot: x_f_e + x_f_g + m_h,
        m_h,
    })
}

/// Relative residuals of the accounting identities at one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SfcAudit {
    /// Gross output = intermediate sales + final uses, per sector.
    pub goods_row: f64,
    pub extraction_row: f64,
    /// Gross output = intermediate purchases + value added, per sector.
    pub goods_column: f64,
    pub extraction_column: f64,
    /// Total net output = total value added.
    pub net_output: f64,
    /// Debt rates against the firms' financial balances.
    pub firm_balance_e: f64,
    pub firm_balance_g: f64,
    /// Bank saving after paying out its profit.
    pub bank_saving: f64,
    /// Aggregate net worth against the value of capital.
    pub net_worth: f64,
    /// Deposit rate against total borrowing.
    pub deposits: f64,
}

impl SfcAudit {
    pub fn max(&self) -> f64 {
        [
            self.goods_row,
            self.extraction_row,
            self.goods_column,
            self.extraction_column,
            self.net_output,
            self.firm_balance_e,
            self.firm_balance_g,
            self.bank_saving,
            self.net_worth,
            self.deposits,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn rel(residual: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        residual.abs() / scale
    } else {
        residual.abs()
    }
}

/// Rebuilds the transactions matrix from the state and the applied
/// utilizations and checks it against the flows and rates.
pub fn sfc_audit(state: &State, f: &Flows, d: &Derivatives, p: &Params) -> SfcAudit {
    let c = &state.core;
    let a = &f.a;
    let x = gross_outputs(c, f.cu_e, f.cu_g, f.sched.delta_y, p);

    let go_g = c.p_g * x.x_g;
    let go_e = c.p_e * x.x_e;
    let int_gg = c.p_g * a.a_gg * x.x_g;
    let int_ge = c.p_g * a.a_ge * x.x_e;
    let int_eg = c.p_e * a.a_eg * x.x_g;
    let int_ee = c.p_e * a.a_ee * x.x_e;
    let new_capital = f.invest_e.new_capital + f.invest_g.new_capital;

    let goods_row = go_g - (int_gg + int_ge + f.cons_g + new_capital + f.dinv_g);
    let extraction_row = go_e - (int_eg + int_ee + f.cons_e + f.dinv_e);

    let wages_e = c.w * x.l_e;
    let wages_g = c.w * x.l_g;
    let goods_column = go_g
        - (int_gg + int_eg + f.pi_g + wages_g + p.r_l * c.d_g + c.p_g * p.delta * c.k_g);
    let extraction_column = go_e
        - (int_ge + int_ee + f.pi_e + wages_e + p.r_l * c.d_e + c.p_g * p.delta * c.k_e);

    let net_output = f.y_total() - f.v_total();

    let bal_e = f.invest_e.total - c.p_g * p.delta * c.k_e - f.pi_e;
    let bal_g = f.invest_g.total - c.p_g * p.delta * c.k_g - f.pi_g;
    let flow_scale_e = f.invest_e.total.abs() + (c.p_g * p.delta * c.k_e).abs() + f.pi_e.abs();
    let flow_scale_g = f.invest_g.total.abs() + (c.p_g * p.delta * c.k_g).abs() + f.pi_g.abs();

    let loans = c.d_e + c.d_g;
    let m_h = loans;
    let bank_profit = p.r_l * loans - p.r_m * m_h;
    let bank_saving = bank_profit - (p.r_l * loans - p.r_m * m_h);

    let x_tot = (c.p_g * c.k_e - c.d_e) + (c.p_g * c.k_g - c.d_g) + m_h;
    let capital_value = c.p_g * (c.k_e + c.k_g);

    let d_loans = d.core.d_e + d.core.d_g;
    let d_deposits = bal_e + bal_g;

    SfcAudit {
        goods_row: rel(goods_row, go_g),
        extraction_row: rel(extraction_row, go_e),
        goods_column: rel(goods_column, go_g),
        extraction_column: rel(extraction_column, go_e),
        net_output: rel(net_output, f.y_total().abs().max(go_g + go_e)),
        firm_balance_e: rel(d.core.d_e - bal_e, flow_scale_e),
        firm_balance_g: rel(d.core.d_g - bal_g, flow_scale_g),
        bank_saving: rel(bank_saving, (p.r_l * loans).abs()),
        net_worth: rel(x_tot - capital_value, capital_value),
        deposits: rel(d_deposits - d_loans, flow_scale_e + flow_scale_g),
    }
}

/// States measured in money, deflated by the CPI before comparison.
pub const NOMINAL_STATES: [&str; 11] =
    ["d_e", "d_g", "w", "p_e", "p_g", "v_e", "v_g", "pi_e", "pi_g", "inv_e", "inv_g"];

/// Money stocks that sit near zero in a steady state; their drift is
/// measured against initial total net output instead of their own size.
pub const NEAR_ZERO_STATES: [&str; 4] = ["d_e", "d_g", "pi_e", "pi_g"];

/// Cumulative integrals, which grow even when the economy is stationary.
pub const CUMULATIVE_STATES: [&str; 3] = ["icum_e", "icum_g", "ln_cpi"];

/// Largest relative drift of `s` from `s0` in real terms, with the name of
/// the state that attains it. `y0` is nominal total net output at `s0`.
pub fn steady_state_deviation(s0: &State, y0: f64, s: &State) -> (f64, &'static str) {
    let deflator = cpi(s) / cpi(s0);
    let (a0, a) = (s0.to_array(), s.to_array());
    let mut worst = (0.0, "");
    for (i, name) in State::NAMES.iter().enumerate() {
        if CUMULATIVE_STATES.contains(name) {
            continue;
        }
        let v = if NOMINAL_STATES.contains(name) { a[i] / deflator } else { a[i] };
        let scale = if NEAR_ZERO_STATES.contains(name) { y0 } else { a0[i].abs() };
        let dev = (v - a0[i]).abs() / scale;
        if dev > worst.0 || dev.is_nan() {
            worst = (dev, *name);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{derivatives_from_flows, evaluate_flows, initial_state};
    use crate::scenario::ScenarioSpec;
    use approx::assert_relative_eq;

    fn fc() -> (State, Flows, ScenarioSpec, Params) {
        let p = Params::default();
        let sc = ScenarioSpec::preset("FC-000").unwrap().frozen();
        let s = initial_state(&sc, &p).unwrap();
        let f = evaluate_flows(0.0, &s, &sc, &p).unwrap();
        (s, f, sc, p)
    }

    #[test]
    fn base_accounts() {
        let (s, f, _, p) = fc();
        let acc = accounts(&s, &f, &s.core, &p).unwrap();
        assert_eq!(acc.gdp_deflator, 1.0);
        assert_eq!(acc.cpi, 1.0);
        assert_relative_eq!(acc.shares.sum(), 1.0, epsilon = 1e-12);
        // 2.178 * (7.980 + 11.116)
        assert_relative_eq!(acc.x_tot, 41.591088, epsilon = 1e-9);
    }

    #[test]
    fn deflator_is_homogeneous() {
        let (s, f, _, _) = fc();
        let mut c = s.core;
        c.p_e *= 2.0;
        c.p_g *= 2.0;
        let mut f2 = f;
        f2.y_e *= 2.0;
        f2.y_g *= 2.0;
        assert_relative_eq!(gdp_deflator(&c, &f2, s.core.p_e, s.core.p_g), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_debt_has_no_bank_profit() {
        let (mut s, _, sc, p) = fc();
        s.core.d_e = 0.0;
        s.core.d_g = 0.0;
        let f = evaluate_flows(0.0, &s, &sc, &p).unwrap();
        assert_eq!(debt_ratio(&s.core, &f).unwrap(), 0.0);
        let sh = shares(&f, &s.core, &p).unwrap();
        assert_eq!(sh.interest, 0.0);
    }

    #[test]
    fn audit_at_start() {
        let (s, f, sc, p) = fc();
        let d = derivatives_from_flows(0.0, &s, &f, &sc, &p).unwrap();
        assert!(sfc_audit(&s, &f, &d, &p).max() < 1e-12);
    }

    #[test]
    fn nonpositive_value_added() {
        let (s, mut f, _, p) = fc();
        f.v_e = 0.0;
        f.v_g = 0.0;
        assert_eq!(shares(&f, &s.core, &p), Err(ModelError::UndefinedShares(0.0)));
    }
}
