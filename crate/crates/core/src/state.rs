//! Integrated state of the model.
//!
//! The state is split into three groups: the core stocks, the first-order lag
//! states that give the model access to "past" values, and the states that
//! support exogenous schedules. All three flatten into one vector for the
//! integrator, in the order given by [`State::NAMES`].

macro_rules! state_group {
    ($(#[$meta:meta])* $name:ident { $( $(#[$fdoc:meta])* $field:ident ),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Default)]
        pub struct $name {
            $( $(#[$fdoc])* pub $field: f64, )+
        }

        impl $name {
            pub const NAMES: &'static [&'static str] = &[$( stringify!($field) ),+];
            pub const LEN: usize = Self::NAMES.len();

            pub fn write_to(&self, out: &mut [f64]) {
                let vals = [$( self.$field ),+];
                out[..Self::LEN].copy_from_slice(&vals);
            }

            pub fn read_from(src: &[f64]) -> Self {
                let mut it = src.iter().copied();
                $name { $( $field: it.next().expect("state slice too short"), )+ }
            }
        }
    };
}

state_group! {
    /// The eleven core stocks.
    CoreState {
        /// Resource in the environment.
        y,
        /// Population.
        n,
        /// Physical inventory of extracted resources ("wealth").
        w_h,
        /// Physical inventory of goods.
        g,
        k_e,
        k_g,
        d_e,
        d_g,
        /// Wage per person.
        w,
        p_e,
        p_g,
    }
}

state_group! {
    /// First-order lag states.
    LagState {
        cu_e,
        cu_g,
        /// Perceived inventory coverage, extraction.
        icp_e,
        /// Perceived inventory coverage, goods.
        icp_g,
        v_e,
        v_g,
        pi_e,
        pi_g,
        inv_e,
        inv_g,
        l_e,
        l_g,
    }
}

state_group! {
    /// Support states for exogenous schedules.
    ScheduleState {
        /// Three-stage cascade of the growth-driver delay.
        d1,
        d2,
        d3,
        /// Cumulative physical investment, extraction capital.
        icum_e,
        /// Cumulative physical investment, goods capital.
        icum_g,
        /// Log of the consumer price index.
        ln_cpi,
    }
}

/// Complete model state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub core: CoreState,
    pub lags: LagState,
    pub sched: ScheduleState,
}

impl State {
    pub const LEN: usize = CoreState::LEN + LagState::LEN + ScheduleState::LEN;

    pub const NAMES: [&'static str; State::LEN] = {
        let mut out = [""; State::LEN];
        let mut i = 0;
        while i < CoreState::LEN {
            out[i] = CoreState::NAMES[i];
            i += 1;
        }
        let mut j = 0;
        while j < LagState::LEN {
            out[CoreState::LEN + j] = LagState::NAMES[j];
            j += 1;
        }
        let mut k = 0;
        while k < ScheduleState::LEN {
            out[CoreState::LEN + LagState::LEN + k] = ScheduleState::NAMES[k];
            k += 1;
        }
        out
    };

    pub fn to_array(&self) -> [f64; State::LEN] {
        let mut out = [0.0; State::LEN];
        self.core.write_to(&mut out[..]);
        self.lags.write_to(&mut out[CoreState::LEN..]);
        self.sched.write_to(&mut out[CoreState::LEN + LagState::LEN..]);
        out
    }

    pub fn from_slice(v: &[f64]) -> Self {
        assert!(v.len() >= State::LEN, "state slice too short");
        State {
            core: CoreState::read_from(v),
            lags: LagState::read_from(&v[CoreState::LEN..]),
            sched: ScheduleState::read_from(&v[CoreState::LEN + LagState::LEN..]),
        }
    }

    /// Index of a named component in the flattened vector.
    pub fn index_of(name: &str) -> Option<usize> {
        State::NAMES.iter().position(|n| *n == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn layout() {
        assert_eq!(CoreState::LEN, 11);
        assert_eq!(LagState::LEN, 12);
        assert_eq!(ScheduleState::LEN, 6);
        assert_eq!(State::NAMES[0], "y");
        assert_eq!(State::NAMES[11], "cu_e");
        assert_eq!(State::NAMES[28], "ln_cpi");
        assert_eq!(State::index_of("p_g"), Some(10));
    }

    proptest! {
        #[test]
        fn flatten_roundtrip(v in proptest::collection::vec(-1e6f64..1e6, State::LEN)) {
            let s = State::from_slice(&v);
            prop_assert_eq!(s.to_array().to_vec(), v);
        }
    }
}
