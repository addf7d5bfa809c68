//! Published initial conditions for the two pricing rules.
//!
//! The lag states for value added, profit, inventory value and labor are
//! taken verbatim here; [`crate::dynamics::sync_lags`] replaces them with
//! values consistent with the core stocks before a run starts.

use crate::model::PricingMode;
use crate::state::{CoreState, LagState, ScheduleState, State};

pub fn full_cost() -> State {
    State {
        core: CoreState {
            y: 95.117,
            n: 18.240,
            w_h: 1.129,
            g: 1.531,
            k_e: 7.980,
            k_g: 11.116,
            d_e: 0.001,
            d_g: 0.001,
            w: 1.038,
            p_e: 2.069,
            p_g: 2.178,
        },
        lags: LagState {
            cu_e: 0.85,
            cu_g: 0.85,
            icp_e: 1.0,
            icp_g: 1.0,
            v_e: 4.727,
            v_g: 6.427,
            pi_e: 0.0002,
            pi_g: 0.0003,
            inv_e: 2.067,
            inv_g: 2.950,
            l_e: 4.645,
            l_g: 6.299,
        },
        sched: ScheduleState::default(),
    }
}

pub fn marginal_cost() -> State {
    State {
        core: CoreState {
            y: 98.235,
            n: 6.928,
            w_h: 0.427,
            g: 0.596,
            k_e: 2.883,
            k_g: 4.276,
            d_e: 0.001,
            d_g: 0.001,
            w: 0.941,
            p_e: 1.85,
            p_g: 1.963,
        },
        lags: LagState {
            cu_e: 0.85,
            cu_g: 0.85,
            icp_e: 1.0,
            icp_g: 1.0,
            v_e: 1.683,
            v_g: 2.366,
            pi_e: 0.0002,
            pi_g: 0.0002,
            inv_e: 0.699,
            inv_g: 1.036,
            l_e: 1.733,
            l_g: 2.423,
        },
        sched: ScheduleState::default(),
    }
}

pub fn for_pricing(mode: PricingMode) -> State {
    match mode {
        PricingMode::Full => full_cost(),
        PricingMode::Marginal => marginal_cost(),
    }
}
