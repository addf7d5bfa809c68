//! Model parameters and their base-run values.

use crate::error::ModelError;

macro_rules! define_params {
    ($( $(#[$doc:meta])* $field:ident = $default:expr ),+ $(,)?) => {
        /// Structural and behavioral constants of the model.
        ///
        /// Every field can be overridden by name (see [`Params::set`]), which is
        /// how configuration files address them.
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct Params {
            $( $(#[$doc])* pub $field: f64, )+
        }

        impl Default for Params {
            fn default() -> Self {
                Params { $( $field: $default, )+ }
            }
        }

        impl Params {
            /// Field names in declaration order.
            pub const NAMES: &'static [&'static str] = &[$( stringify!($field) ),+];

            pub fn get(&self, name: &str) -> Option<f64> {
                match name {
                    $( stringify!($field) => Some(self.$field), )+
                    _ => None,
                }
            }

            /// Sets a field by name. Returns `false` when the name is unknown.
            pub fn set(&mut self, name: &str, value: f64) -> bool {
                match name {
                    $( stringify!($field) => { self.$field = value; true } )+
                    _ => false,
                }
            }
        }
    };
}

define_params! {
    /// Goods input per unit of gross resource extraction.
    a_ge = 0.2,
    /// Goods input per unit of gross goods production.
    a_gg = 0.1,
    ic_ref_e = 1.0,
    ic_ref_g = 1.0,
    /// Interest rate on loans.
    r_l = 0.05,
    /// Interest rate on household deposits.
    r_m = 0.0,
    /// Per-capita resource consumption below which death rates rise.
    s = 0.08,
    /// Resource embodied per unit of goods output.
    y_xg = 0.1,
    alpha_m = 0.01,
    alpha_max = 0.07,
    beta_n = 0.03,
    /// Regeneration rate of the resource.
    gamma = 0.01,
    /// Capital depreciation rate.
    delta = 0.03,
    /// Extraction technology before any scheduled change.
    delta_y = 0.0072,
    /// Resource use to operate a unit of extraction capital (constant-efficiency value).
    eta_e = 0.16,
    /// Resource use to operate a unit of goods capital (constant-efficiency value).
    eta_g = 0.16,
    kappa_0 = 1.0,
    kappa_1 = 1.5,
    /// Carrying capacity of the resource.
    lambda_y = 100.0,
    lambda_n_o = 0.6,
    lambda_n_max = 0.8,
    /// Goods capital to output ratio.
    nu_g = 1.5,
    rho_e = 0.01,
    rho_g = 0.0,
    mu_e = 0.13,
    mu_g = 0.13,
    /// Labor productivity of extraction.
    a_e = 1.0,
    /// Labor productivity of goods production.
    a_g = 1.0,
    phi_min = -0.05,
    phi_o = 0.0,
    phi_s = 0.05,
    cu_ref = 0.85,
    tau_cu_e = 0.25,
    tau_cu_g = 0.25,
    tau_ic_e = 0.25,
    tau_ic_g = 0.25,
    tau_p_e = 1.0,
    tau_p_g = 1.0,
    tau_v_e = 1.0,
    tau_v_g = 1.0,
    tau_pi_e = 1.0,
    tau_pi_g = 1.0,
    /// Time constant of the participation-rate derivative estimate.
    tau_l = 1.0,
}

impl Params {
    /// Checks the sign and ordering constraints every run relies on.
    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("s", self.s),
            ("alpha_m", self.alpha_m),
            ("beta_n", self.beta_n),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("delta_y", self.delta_y),
            ("lambda_y", self.lambda_y),
            ("nu_g", self.nu_g),
            ("a_e", self.a_e),
            ("a_g", self.a_g),
            ("cu_ref", self.cu_ref),
            ("ic_ref_e", self.ic_ref_e),
            ("ic_ref_g", self.ic_ref_g),
            ("tau_cu_e", self.tau_cu_e),
            ("tau_cu_g", self.tau_cu_g),
            ("tau_ic_e", self.tau_ic_e),
            ("tau_ic_g", self.tau_ic_g),
            ("tau_p_e", self.tau_p_e),
            ("tau_p_g", self.tau_p_g),
            ("tau_v_e", self.tau_v_e),
            ("tau_v_g", self.tau_v_g),
            ("tau_pi_e", self.tau_pi_e),
            ("tau_pi_g", self.tau_pi_g),
            ("tau_l", self.tau_l),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ModelError::Precondition(format!("{name} must be > 0, got {v}")));
            }
        }
        let nonneg = [
            ("a_ge", self.a_ge),
            ("a_gg", self.a_gg),
            ("r_l", self.r_l),
            ("r_m", self.r_m),
            ("y_xg", self.y_xg),
            ("eta_e", self.eta_e),
            ("eta_g", self.eta_g),
            ("mu_e", self.mu_e),
            ("mu_g", self.mu_g),
            ("rho_e", self.rho_e),
            ("rho_g", self.rho_g),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ModelError::Precondition(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(0.0 < self.lambda_n_o
            && self.lambda_n_o < self.lambda_n_max
            && self.lambda_n_max <= 1.0)
        {
            return Err(ModelError::Precondition(format!(
                "need 0 < lambda_n_o < lambda_n_max <= 1, got {} and {}",
                self.lambda_n_o, self.lambda_n_max
            )));
        }
        if self.alpha_m >= self.alpha_max {
            return Err(ModelError::Precondition(format!(
                "alpha_m ({}) must be below alpha_max ({})",
                self.alpha_m, self.alpha_max
            )));
        }
        if self.phi_o <= self.phi_min {
            return Err(ModelError::Precondition("phi_o must exceed phi_min".into()));
        }
        if self.cu_ref > 1.0 {
            return Err(ModelError::Precondition("cu_ref must be <= 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_base_run_table() {
        let p = Params::default();
        assert_eq!(p.r_l, 0.05);
        assert_eq!(p.delta, 0.03);
        assert_eq!(p.kappa_0, 1.0);
        assert_eq!(p.kappa_1, 1.5);
        assert_eq!(p.lambda_n_o, 0.6);
        assert_eq!(p.a_ge, 0.2);
        assert_eq!(p.a_gg, 0.1);
        assert_eq!(p.mu_g, 0.13);
        p.validate().unwrap();
    }

    #[test]
    fn set_and_get_by_name() {
        let mut p = Params::default();
        assert!(p.set("delta", 0.05));
        assert_eq!(p.get("delta"), Some(0.05));
        assert!(!p.set("nu_e", 1.0));
        assert_eq!(p.get("nope"), None);
        assert_eq!(Params::NAMES.len(), 43);
    }

    #[test]
    fn validate_rejects_bad_orderings() {
        let p = Params { lambda_n_o: 0.9, ..Params::default() };
        assert!(p.validate().is_err());
        let p = Params { alpha_m: 0.08, ..Params::default() };
        assert!(p.validate().is_err());
        let p = Params { tau_cu_g: 0.0, ..Params::default() };
        assert!(p.validate().is_err());
    }
}
