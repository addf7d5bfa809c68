//! Algebraic building blocks of the model: technical coefficients, production,
//! costs and the behavioral curves. Nothing in here steps time.

use crate::error::ModelError;
use crate::params::Params;
use crate::state::CoreState;

/// How unit costs (and therefore target prices) are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PricingMode {
    /// Intermediates, wages, interest and depreciation.
    Full,
    /// Intermediates and wages only.
    Marginal,
}

/// Leontief technical coefficients, row = supplying sector, column = buying sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AMatrix {
    pub a_gg: f64,
    pub a_ge: f64,
    /// Resource to operate goods capital.
    pub a_eg_o: f64,
    /// Resource embodied in goods.
    pub a_eg_i: f64,
    pub a_eg: f64,
    pub a_ee: f64,
}

impl AMatrix {
    /// `[[a_gg, a_ge], [a_eg, a_ee]]`.
    pub fn as_rows(&self) -> [[f64; 2]; 2] {
        [[self.a_gg, self.a_ge], [self.a_eg, self.a_ee]]
    }
}

/// Coefficients at resource level `y` and extraction technology `delta_y`, with
/// operating intensities `eta_e`/`eta_g` (which may be scheduled).
pub fn technical_coefficients(
    y: f64,
    delta_y: f64,
    eta_e: f64,
    eta_g: f64,
    p: &Params,
) -> Result<AMatrix, ModelError> {
    if !(y > 0.0) {
        return Err(ModelError::DegenerateResource(y));
    }
    if !(delta_y > 0.0) {
        return Err(ModelError::Precondition(format!("delta_y must be > 0, got {delta_y}")));
    }
    let a_eg_o = eta_g * p.nu_g;
    let a_eg_i = p.y_xg * p.nu_g;
    Ok(AMatrix {
        a_gg: p.a_gg,
        a_ge: p.a_ge,
        a_eg_o,
        a_eg_i,
        a_eg: a_eg_o + a_eg_i,
        a_ee: eta_e / (delta_y * y),
    })
}

/// Physical outputs, labor and participation for given utilizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outputs {
    pub x_e: f64,
    pub x_g: f64,
    pub l_e: f64,
    pub l_g: f64,
    pub lambda_n: f64,
}

pub fn gross_outputs(core: &CoreState, cu_e: f64, cu_g: f64, delta_y: f64, p: &Params) -> Outputs {
    let x_e = delta_y * core.y * core.k_e * cu_e;
    let x_g = core.k_g * cu_g / p.nu_g;
    let l_e = x_e / p.a_e;
    let l_g = x_g / p.a_g;
    Outputs { x_e, x_g, l_e, l_g, lambda_n: (l_e + l_g) / core.n }
}

const CU_NODES_X: [f64; 11] = [0.0, 0.25, 0.50, 0.75, 1.00, 1.25, 1.50, 1.75, 2.00, 2.25, 1e6];
const CU_NODES_Y: [f64; 11] = [0.0, 0.30, 0.55, 0.75, 0.85, 0.90, 0.94, 0.98, 0.99, 1.0, 1.0];

/// Indicated capacity utilization as a function of inverse perceived coverage.
///
/// Piecewise linear through the lookup nodes, flat beyond the last node.
pub fn cu_lookup(ic_inverse: f64) -> Result<f64, ModelError> {
    if ic_inverse.is_nan() || ic_inverse < 0.0 {
        return Err(ModelError::Precondition(format!(
            "inverse inventory coverage must be >= 0, got {ic_inverse}"
        )));
    }
    let last = CU_NODES_X.len() - 1;
    if ic_inverse >= CU_NODES_X[last] {
        return Ok(CU_NODES_Y[last]);
    }
    let hi = CU_NODES_X.partition_point(|&x| x <= ic_inverse);
    let lo = hi - 1;
    let frac = (ic_inverse - CU_NODES_X[lo]) / (CU_NODES_X[hi] - CU_NODES_X[lo]);
    let cu = CU_NODES_Y[lo] + frac * (CU_NODES_Y[hi] - CU_NODES_Y[lo]);
    Ok(cu.clamp(0.0, 1.0))
}

/// Coverage reported when nothing is demanded; its inverse indicates
/// (almost) zero utilization.
pub const IC_NO_DEMAND: f64 = 1e6;

/// Inventory coverage of one stock: `(stock / tau) / demand`, capped at
/// [`IC_NO_DEMAND`].
pub fn inventory_coverage(stock: f64, tau: f64, demand: f64) -> f64 {
    if demand > 0.0 {
        ((stock / tau) / demand).min(IC_NO_DEMAND)
    } else {
        IC_NO_DEMAND
    }
}

/// Instantaneous coverages `(IC_e, IC_g)` for the resource and goods inventories
/// given the targeted consumption rate of each.
pub fn perceived_inventory_coverage(
    w_h: f64,
    g: f64,
    resource_demand: f64,
    goods_demand: f64,
    p: &Params,
) -> (f64, f64) {
    (
        inventory_coverage(w_h, p.tau_ic_e, resource_demand),
        inventory_coverage(g, p.tau_ic_g, goods_demand),
    )
}

/// Unit costs; `None` where a sector has no output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCosts {
    pub c_e: Option<f64>,
    pub c_g: Option<f64>,
}

pub fn unit_costs(
    core: &CoreState,
    a: &AMatrix,
    out: &Outputs,
    mode: PricingMode,
    p: &Params,
) -> UnitCosts {
    let overhead = |d: f64, k: f64| match mode {
        PricingMode::Full => p.r_l * d + core.p_g * p.delta * k,
        PricingMode::Marginal => 0.0,
    };
    let c_g = (out.x_g > 0.0).then(|| {
        core.p_g * a.a_gg
            + core.p_e * a.a_eg
            + (core.w * out.l_g + overhead(core.d_g, core.k_g)) / out.x_g
    });
    let c_e = (out.x_e > 0.0).then(|| {
        core.p_e * a.a_ee
            + core.p_g * a.a_ge
            + (core.w * out.l_e + overhead(core.d_e, core.k_e)) / out.x_e
    });
    UnitCosts { c_e, c_g }
}

/// Death rate as a function of per-capita household resource consumption.
pub fn death_rate(percap_consumption: f64, p: &Params) -> f64 {
    let shortfall = (1.0 - percap_consumption / p.s).clamp(0.0, 1.0);
    p.alpha_m + shortfall * (p.alpha_max - p.alpha_m)
}

/// Short-run Phillips curve.
pub fn phillips(lambda_n: f64, p: &Params) -> f64 {
    let span = p.phi_o - p.phi_min;
    span * (p.phi_s / span * (lambda_n - p.lambda_n_o)).exp() + p.phi_min
}

/// Monetary investment of one sector split into physical and Ponzi parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Investment {
    pub total: f64,
    pub ponzi_fraction: f64,
    pub new_capital: f64,
    pub ponzi: f64,
}

pub fn investment_decision(
    lagged_profit: f64,
    capital: f64,
    p_g: f64,
    cu: f64,
    a_ponzi: f64,
    p: &Params,
) -> Investment {
    let total = (p.kappa_0 * p_g * p.delta * capital + p.kappa_1 * lagged_profit).max(0.0);
    let ponzi_fraction = (a_ponzi * (p.cu_ref - cu) / p.cu_ref).clamp(0.0, 1.0);
    let ponzi = ponzi_fraction * total;
    Investment { total, ponzi_fraction, new_capital: total - ponzi, ponzi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn fc_core() -> CoreState {
        crate::initial::full_cost().core
    }

    #[test]
    fn a_ee_at_fc_start() {
        let p = Params::default();
        let a = technical_coefficients(95.117, 0.009, 0.16, 0.16, &p).unwrap();
        assert_relative_eq!(a.a_ee, 0.16 / (0.009 * 95.117), max_relative = 1e-15);
        assert_relative_eq!(a.a_ee, 0.186904, epsilon = 1e-6);
        assert_relative_eq!(a.a_eg, 0.39, epsilon = 1e-15);
        assert_eq!(a.a_ge, 0.2);
        assert_eq!(a.a_gg, 0.1);
        let far = technical_coefficients(3.0, 0.009, 0.16, 0.16, &p).unwrap();
        assert_eq!((far.a_ge, far.a_gg), (0.2, 0.1));
    }

    #[test]
    fn degenerate_resource_is_an_error() {
        let p = Params::default();
        assert_eq!(
            technical_coefficients(0.0, 0.009, 0.16, 0.16, &p),
            Err(ModelError::DegenerateResource(0.0))
        );
        assert!(technical_coefficients(-1.0, 0.009, 0.16, 0.16, &p).is_err());
    }

    #[test]
    fn outputs_reproduce_initial_labor() {
        let p = Params::default();
        let core = fc_core();
        let o = gross_outputs(&core, 0.85, 0.85, 0.0072, &p);
        assert_relative_eq!(o.x_e, 4.645, epsilon = 1e-3);
        assert_relative_eq!(o.l_e, 4.645, epsilon = 1e-3);
        // K_g * CU_g / nu_g = 11.116 * 0.85 / 1.5
        assert_relative_eq!(o.x_g, 6.299, epsilon = 1e-3);
        assert_relative_eq!(o.lambda_n, 0.6, epsilon = 1e-3);
        let idle = gross_outputs(&core, 0.0, 0.85, 0.0072, &p);
        assert_eq!((idle.x_e, idle.l_e), (0.0, 0.0));
    }

    #[test]
    fn cu_lookup_nodes() {
        assert_eq!(cu_lookup(1.0).unwrap(), 0.85);
        assert_eq!(cu_lookup(0.0).unwrap(), 0.0);
        assert_relative_eq!(cu_lookup(1.125).unwrap(), 0.875, epsilon = 1e-15);
        assert_eq!(cu_lookup(5.0).unwrap(), 1.0);
        assert_eq!(cu_lookup(1e9).unwrap(), 1.0);
        assert!(cu_lookup(-0.1).is_err());
    }

    #[test]
    fn coverage_edge_cases() {
        let p = Params::default();
        let demand = 3.0;
        let (ic_e, _) = perceived_inventory_coverage(p.tau_ic_e * demand, 1.0, demand, 1.0, &p);
        assert_relative_eq!(ic_e, 1.0, epsilon = 1e-15);
        let (zero, _) = perceived_inventory_coverage(0.0, 1.0, demand, 1.0, &p);
        assert_eq!(zero, 0.0);
        let (inf, _) = perceived_inventory_coverage(1.0, 1.0, 0.0, 1.0, &p);
        assert_eq!(inf, IC_NO_DEMAND);
        assert!(cu_lookup(1.0 / inf).unwrap() < 1e-5);
    }

    #[test]
    fn goods_coverage_near_one_at_fc_start() {
        // Goods demand at the full-cost initial state: household goods plus
        // replacement investment plus intermediates equals gross goods output.
        let p = Params::default();
        let core = fc_core();
        let o = gross_outputs(&core, 0.85, 0.85, 0.0072, &p);
        let (_, ic_g) = perceived_inventory_coverage(core.w_h, core.g, 1.0, o.x_g, &p);
        assert_relative_eq!(ic_g, 1.0, epsilon = 0.03);
    }

    #[test]
    fn cost_modes() {
        let p = Params::default();
        let core = fc_core();
        let a = technical_coefficients(core.y, 0.0072, 0.16, 0.16, &p).unwrap();
        let o = gross_outputs(&core, 0.85, 0.85, 0.0072, &p);
        let full = unit_costs(&core, &a, &o, PricingMode::Full, &p);
        let marg = unit_costs(&core, &a, &o, PricingMode::Marginal, &p);
        let dg = full.c_g.unwrap() - marg.c_g.unwrap();
        assert_relative_eq!(
            dg,
            (p.r_l * core.d_g + core.p_g * p.delta * core.k_g) / o.x_g,
            max_relative = 1e-12
        );
        let mut debt_free = core;
        debt_free.d_e = 0.0;
        debt_free.d_g = 0.0;
        let no_dep = Params { delta: 0.0, ..p };
        let f = unit_costs(&debt_free, &a, &o, PricingMode::Full, &no_dep);
        let m = unit_costs(&debt_free, &a, &o, PricingMode::Marginal, &no_dep);
        assert_eq!(f, m);
        let idle = gross_outputs(&core, 0.0, 0.85, 0.0072, &p);
        assert_eq!(unit_costs(&core, &a, &idle, PricingMode::Full, &p).c_e, None);
    }

    #[test]
    fn death_rate_values() {
        let p = Params::default();
        assert_eq!(death_rate(0.08, &p), 0.01);
        assert_eq!(death_rate(0.5, &p), 0.01);
        assert_relative_eq!(death_rate(0.0, &p), 0.07, epsilon = 1e-15);
        assert_relative_eq!(death_rate(0.04, &p), 0.04, epsilon = 1e-15);
        let eps = 1e-12;
        assert_relative_eq!(death_rate(p.s - eps, &p), p.alpha_m, epsilon = 1e-10);
    }

    #[test]
    fn phillips_values() {
        let p = Params::default();
        assert_eq!(phillips(0.6, &p), 0.0);
        assert_relative_eq!(phillips(0.8, &p), 0.05 * (0.2f64.exp() - 1.0), epsilon = 1e-15);
        assert_relative_eq!(phillips(0.8, &p), 0.011070, epsilon = 1e-6);
        assert!(phillips(-50.0, &p) - p.phi_min < 1e-12);
        assert!(phillips(0.0, &p) > p.phi_min);
    }

    #[test]
    fn investment_cases() {
        let p = Params::default();
        let floor = investment_decision(-100.0, 10.0, 2.0, 0.85, 0.0, &p);
        assert_eq!(floor.total, 0.0);
        let on_target = investment_decision(1.0, 10.0, 2.0, 0.85, 3.0, &p);
        assert_eq!(on_target.ponzi_fraction, 0.0);
        assert_eq!(on_target.new_capital, on_target.total);
        let idle = investment_decision(1.0, 10.0, 2.0, 0.68, 3.0, &p);
        assert_relative_eq!(idle.ponzi_fraction, 0.6, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn cu_lookup_monotone_bounded(a in 0.0f64..10.0, b in 0.0f64..10.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (cl, ch) = (cu_lookup(lo).unwrap(), cu_lookup(hi).unwrap());
            prop_assert!((0.0..=1.0).contains(&cl));
            prop_assert!((0.0..=1.0).contains(&ch));
            prop_assert!(cl <= ch);
        }

        #[test]
        fn a_eg_decomposition(eta_g in 0.0f64..1.0, y_xg in 0.0f64..1.0, nu_g in 0.1f64..5.0) {
            let p = Params { y_xg, nu_g, ..Params::default() };
            let a = technical_coefficients(50.0, 0.008, 0.16, eta_g, &p).unwrap();
            prop_assert_eq!(a.a_eg, eta_g * nu_g + y_xg * nu_g);
        }

        #[test]
        fn cost_identity(d_e in 0.0f64..50.0, d_g in 0.0f64..50.0, k_e in 0.1f64..50.0,
                         k_g in 0.1f64..50.0, w in 0.1f64..5.0, cu in 0.05f64..1.0) {
            let p = Params::default();
            let core = CoreState { d_e, d_g, k_e, k_g, w, ..fc_core() };
            let a = technical_coefficients(core.y, 0.008, 0.16, 0.16, &p).unwrap();
            let o = gross_outputs(&core, cu, cu, 0.008, &p);
            let f = unit_costs(&core, &a, &o, PricingMode::Full, &p);
            let m = unit_costs(&core, &a, &o, PricingMode::Marginal, &p);
            let want_e = (p.r_l * d_e + core.p_g * p.delta * k_e) / o.x_e;
            let want_g = (p.r_l * d_g + core.p_g * p.delta * k_g) / o.x_g;
            prop_assert!(((f.c_e.unwrap() - m.c_e.unwrap()) - want_e).abs() <= 1e-12 * (1.0 + want_e));
            prop_assert!(((f.c_g.unwrap() - m.c_g.unwrap()) - want_g).abs() <= 1e-12 * (1.0 + want_g));
        }

        #[test]
        fn ponzi_split(pi in -10.0f64..10.0, k in 0.0f64..20.0, cu in 0.0f64..1.0, ap in 0.0f64..5.0) {
            let p = Params::default();
            let inv = investment_decision(pi, k, 2.0, cu, ap, &p);
            prop_assert!(inv.total >= 0.0);
            prop_assert!((0.0..=1.0).contains(&inv.ponzi_fraction));
            prop_assert!((inv.new_capital + inv.ponzi - inv.total).abs() <= 1e-12 * inv.total);
        }
    }
}
