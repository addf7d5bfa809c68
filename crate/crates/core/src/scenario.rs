//! Scenario presets and the exogenous schedules they drive.

use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;
use crate::model::PricingMode;
use crate::params::Params;
use crate::state::ScheduleState;

/// Whether the resource intensity of operating capital falls with investment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Efficiency {
    Constant,
    Declining,
}

/// Which exogenous path induces growth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthDriver {
    /// Extraction technology rises from `from` to `to`.
    DeltaY { from: f64, to: f64 },
    /// Resource carrying capacity rises from `from` to `to`.
    LambdaY { from: f64, to: f64 },
    /// Nothing changes; the economy stays at its initial technology.
    Frozen,
}

impl GrowthDriver {
    pub fn endpoints(&self) -> Option<(f64, f64)> {
        match *self {
            GrowthDriver::DeltaY { from, to } | GrowthDriver::LambdaY { from, to } => {
                Some((from, to))
            }
            GrowthDriver::Frozen => None,
        }
    }
}

/// Shape of the growth-driver transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayShape {
    /// Logistic in time through the half-way and 99% marks.
    Logistic,
    /// Three chained first-order lags (an Erlang-3 delay) whose median is
    /// the half-way mark.
    Cascade,
}

/// Logistic decline of operating resource intensity with cumulative investment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSchedule {
    pub eta_max: f64,
    pub eta_min: f64,
    /// Steepness per unit of cumulative investment (goods).
    pub steepness: f64,
    /// Half of the cumulative investment at the inflection point.
    pub i_mid: f64,
}

impl Default for EtaSchedule {
    fn default() -> Self {
        EtaSchedule { eta_max: 0.16, eta_min: 0.12, steepness: 0.02, i_mid: 55.0 }
    }
}

impl EtaSchedule {
    fn logistic(&self, icum: f64) -> f64 {
        1.0 / (1.0 + (-self.steepness * (icum - 2.0 * self.i_mid)).exp())
    }

    /// Intensity after `icum` units of cumulative physical investment.
    ///
    /// Exactly `eta_max` at zero, nonincreasing, bounded below by `eta_min`.
    pub fn eta(&self, icum: f64) -> f64 {
        let icum = icum.max(0.0);
        let drop = self.logistic(icum) - self.logistic(0.0);
        self.eta_max + (self.eta_min - self.eta_max) * drop
    }

    /// Limit as cumulative investment grows without bound.
    pub fn asymptote(&self) -> f64 {
        self.eta_max + (self.eta_min - self.eta_max) * (1.0 - self.logistic(0.0))
    }
}

/// Linear removal of wage bargaining power over `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BargainingRamp {
    pub start: f64,
    pub end: f64,
}

/// One simulated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub pricing: PricingMode,
    pub efficiency: Efficiency,
    pub bargaining: Option<BargainingRamp>,
    pub a_ponzi: f64,
    pub growth: GrowthDriver,
    pub delay: DelayShape,
    /// Time at which the growth driver is half-way.
    pub t50: f64,
    /// Time at which the growth driver reaches 99% of its change.
    pub t99: f64,
    pub eta: EtaSchedule,
    /// Cumulative investment accrues from this time on.
    pub t_critical: f64,
}

/// Names of the twelve preset experiments, in table order.
pub const PRESET_NAMES: [&str; 12] = [
    "FC-000", "MC-000", "FC-010", "MC-010", "FC-011", "MC-011", "FC-100", "MC-100", "FC-110",
    "MC-110", "FC-111", "MC-111",
];

/// Parsed `FC-XYZ` / `MC-XYZ` code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScenarioCode {
    pub pricing: PricingMode,
    pub declining_eta: bool,
    pub bargaining_loss: bool,
    pub ponzi: bool,
}

impl FromStr for ScenarioCode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::UnknownScenario(s.to_string());
        let (prefix, digits) = s.split_once('-').ok_or_else(bad)?;
        let pricing = match prefix {
            "FC" => PricingMode::Full,
            "MC" => PricingMode::Marginal,
            _ => return Err(bad()),
        };
        let bits: Vec<bool> = digits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(bad()),
            })
            .collect::<Result<_, _>>()?;
        if bits.len() != 3 || (bits[2] && !bits[1]) {
            return Err(bad());
        }
        Ok(ScenarioCode {
            pricing,
            declining_eta: bits[0],
            bargaining_loss: bits[1],
            ponzi: bits[2],
        })
    }
}

impl fmt::Display for ScenarioCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.pricing {
            PricingMode::Full => "FC",
            PricingMode::Marginal => "MC",
        };
        write!(
            f,
            "{prefix}-{}{}{}",
            self.declining_eta as u8, self.bargaining_loss as u8, self.ponzi as u8
        )
    }
}

impl ScenarioSpec {
    /// One of the twelve named presets, e.g. `"MC-111"`.
    pub fn preset(name: &str) -> Result<Self, ModelError> {
        let code: ScenarioCode = name.parse()?;
        if code.ponzi && !code.bargaining_loss {
            return Err(ModelError::UnknownScenario(name.to_string()));
        }
        Ok(Self::from_code(code))
    }

    pub fn from_code(code: ScenarioCode) -> Self {
        // Bargaining power is removed from the time of peak per-capita
        // extraction, which differs by pricing rule.
        let ramp = match code.pricing {
            PricingMode::Full => BargainingRamp { start: 60.0, end: 160.0 },
            PricingMode::Marginal => BargainingRamp { start: 100.0, end: 200.0 },
        };
        ScenarioSpec {
            name: code.to_string(),
            pricing: code.pricing,
            efficiency: if code.declining_eta { Efficiency::Declining } else { Efficiency::Constant },
            bargaining: code.bargaining_loss.then_some(ramp),
            a_ponzi: if code.ponzi { 3.0 } else { 0.0 },
            growth: GrowthDriver::DeltaY { from: 0.0072, to: 0.009 },
            delay: DelayShape::Logistic,
            t50: 40.0,
            t99: 84.0,
            eta: EtaSchedule::default(),
            t_critical: 0.1,
        }
    }

    pub fn all_presets() -> Vec<ScenarioSpec> {
        PRESET_NAMES.iter().map(|n| Self::preset(n).expect("preset names are valid")).collect()
    }

    /// Same economy with the growth driver held at its starting value.
    pub fn frozen(mut self) -> Self {
        self.growth = GrowthDriver::Frozen;
        self.name.push_str("-frozen");
        self
    }

    /// Growth induced by a larger resource base instead of better extraction.
    pub fn with_lambda_y_growth(mut self) -> Self {
        self.growth = GrowthDriver::LambdaY { from: 100.0, to: 115.0 };
        self.name.push_str("-alt");
        self
    }

    pub fn code(&self) -> Option<ScenarioCode> {
        self.name.get(..6).and_then(|s| s.parse().ok())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if let Some(r) = self.bargaining {
            if !(r.start < r.end) {
                return Err(ModelError::Precondition(format!(
                    "bargaining ramp must have start < end, got [{}, {}]",
                    r.start, r.end
                )));
            }
        }
        if !(self.eta.eta_min < self.eta.eta_max) {
            return Err(ModelError::Precondition("eta_min must be below eta_max".into()));
        }
        if !(self.a_ponzi >= 0.0) {
            return Err(ModelError::Precondition("a_ponzi must be >= 0".into()));
        }
        if !(0.0 < self.t50 && self.t50 < self.t99) {
            return Err(ModelError::Precondition("need 0 < t50 < t99".into()));
        }
        Ok(())
    }

    /// Steepness of the time logistic through (t50, 1/2) and (t99, 0.99).
    pub fn logistic_rate(&self) -> f64 {
        99f64.ln() / (self.t99 - self.t50)
    }

    /// Total delay of the three-stage cascade whose median falls at `t50`.
    pub fn cascade_delay(&self) -> f64 {
        3.0 * self.t50 / ERLANG3_MEDIAN
    }

    /// Fraction in `[0, 1]` of the growth driver's change completed at `t`.
    pub fn growth_fraction(&self, t: f64, sched: &ScheduleState) -> f64 {
        let Some((from, to)) = self.growth.endpoints() else {
            return 0.0;
        };
        match self.delay {
            DelayShape::Logistic => 1.0 / (1.0 + (-self.logistic_rate() * (t - self.t50)).exp()),
            DelayShape::Cascade => ((sched.d3 - from) / (to - from)).clamp(0.0, 1.0),
        }
    }

    /// Extraction technology in effect at `t`.
    pub fn scheduled_delta_y(&self, t: f64, sched: &ScheduleState, p: &Params) -> f64 {
        match self.growth {
            GrowthDriver::DeltaY { from, to } => from + (to - from) * self.growth_fraction(t, sched),
            _ => p.delta_y,
        }
    }

    /// Resource carrying capacity in effect at `t`.
    pub fn scheduled_lambda_y(&self, t: f64, sched: &ScheduleState, p: &Params) -> f64 {
        match self.growth {
            GrowthDriver::LambdaY { from, to } => {
                from + (to - from) * self.growth_fraction(t, sched)
            }
            _ => p.lambda_y,
        }
    }

    /// Operating intensities `(eta_e, eta_g)`.
    pub fn scheduled_eta(&self, sched: &ScheduleState, p: &Params) -> (f64, f64) {
        match self.efficiency {
            Efficiency::Constant => (p.eta_e, p.eta_g),
            Efficiency::Declining => (self.eta.eta(sched.icum_e), self.eta.eta(sched.icum_g)),
        }
    }

    /// Wage indexation weights `(w1, w2)`.
    pub fn bargaining(&self, t: f64) -> (f64, f64) {
        let Some(r) = self.bargaining else {
            return (1.0, 1.0);
        };
        let w = 1.0 - ((t - r.start) / (r.end - r.start)).clamp(0.0, 1.0);
        (w, w)
    }

    /// Rates of the cascade stages.
    pub fn cascade_rates(&self, sched: &ScheduleState) -> (f64, f64, f64) {
        let Some((_, to)) = self.growth.endpoints() else {
            return (0.0, 0.0, 0.0);
        };
        let stage = self.cascade_delay() / 3.0;
        (
            (to - sched.d1) / stage,
            (sched.d1 - sched.d2) / stage,
            (sched.d2 - sched.d3) / stage,
        )
    }

    /// Starting value of the growth driver (used to seed the cascade).
    pub fn driver_start(&self, p: &Params) -> f64 {
        match self.growth {
            GrowthDriver::DeltaY { from, .. } | GrowthDriver::LambdaY { from, .. } => from,
            GrowthDriver::Frozen => p.delta_y,
        }
    }
}

/// Median of the Gamma(3, 1) distribution.
const ERLANG3_MEDIAN: f64 = 2.674_060_313_723_561;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sched() -> ScheduleState {
        ScheduleState::default()
    }

    #[test]
    fn delta_y_marks() {
        let p = Params::default();
        let s = ScenarioSpec::preset("FC-000").unwrap();
        assert_relative_eq!(s.scheduled_delta_y(40.0, &sched(), &p), 0.0081, epsilon = 1e-15);
        assert!(s.scheduled_delta_y(84.0, &sched(), &p) >= 0.0072 + 0.99 * 0.0018 - 1e-15);
        assert_eq!(s.scheduled_delta_y(1e6, &sched(), &p), 0.009);
        let frozen = s.frozen();
        assert_eq!(frozen.scheduled_delta_y(100.0, &sched(), &p), 0.0072);
    }

    #[test]
    fn erlang_median_constant() {
        // 1 - e^{-x}(1 + x + x^2/2) = 1/2
        let x = ERLANG3_MEDIAN;
        let cdf = 1.0 - (-x).exp() * (1.0 + x + x * x / 2.0);
        assert_relative_eq!(cdf, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn eta_schedule() {
        let e = EtaSchedule::default();
        assert_eq!(e.eta(0.0), 0.16);
        let lim = e.asymptote();
        assert!((0.12..0.16).contains(&lim));
        assert_relative_eq!(e.eta(1e7), lim, epsilon = 1e-12);
        let p = Params::default();
        let s = ScenarioSpec::preset("FC-000").unwrap();
        let far = ScheduleState { icum_e: 1e4, icum_g: 1e4, ..sched() };
        assert_eq!(s.scheduled_eta(&far, &p), (0.16, 0.16));
        let d = ScenarioSpec::preset("FC-100").unwrap();
        let (ee, eg) = d.scheduled_eta(&far, &p);
        assert!(ee < 0.16 && eg < 0.16);
    }

    #[test]
    fn bargaining_ramps() {
        let fc = ScenarioSpec::preset("FC-110").unwrap();
        assert_eq!(fc.bargaining(110.0), (0.5, 0.5));
        assert_eq!(fc.bargaining(10.0), (1.0, 1.0));
        let base = ScenarioSpec::preset("MC-000").unwrap();
        assert_eq!(base.bargaining(150.0), (1.0, 1.0));
        let mc = ScenarioSpec::preset("MC-010").unwrap();
        assert_eq!(mc.bargaining(200.0), (0.0, 0.0));
        assert_eq!(mc.bargaining(250.0), (0.0, 0.0));
    }

    #[test]
    fn presets_by_name() {
        let all = ScenarioSpec::all_presets();
        assert_eq!(all.len(), 12);
        for (s, n) in all.iter().zip(PRESET_NAMES) {
            assert_eq!(s.name, n);
            s.validate().unwrap();
            assert_eq!(s.growth, GrowthDriver::DeltaY { from: 0.0072, to: 0.009 });
        }
        let m = ScenarioSpec::preset("MC-111").unwrap();
        assert_eq!(m.pricing, PricingMode::Marginal);
        assert_eq!(m.efficiency, Efficiency::Declining);
        assert_eq!(m.bargaining, Some(BargainingRamp { start: 100.0, end: 200.0 }));
        assert_eq!(m.a_ponzi, 3.0);
        assert!(ScenarioSpec::preset("FC-001").is_err());
        assert!(ScenarioSpec::preset("XC-000").is_err());
        assert!(ScenarioSpec::preset("FC-0000").is_err());
    }

    #[test]
    fn cascade_median_at_t50() {
        // Integrate the cascade alone and check it crosses half-way near t50.
        let p = Params::default();
        let s = ScenarioSpec { delay: DelayShape::Cascade, ..ScenarioSpec::preset("FC-000").unwrap() };
        let start = s.driver_start(&p);
        let mut st = ScheduleState { d1: start, d2: start, d3: start, ..sched() };
        let dt = 0.001;
        let mut t = 0.0;
        while s.growth_fraction(t, &st) < 0.5 {
            let (r1, r2, r3) = s.cascade_rates(&st);
            st.d1 += dt * r1;
            st.d2 += dt * r2;
            st.d3 += dt * r3;
            t += dt;
        }
        assert!((t - 40.0).abs() < 0.05, "median at {t}");
    }

    proptest! {
        #[test]
        fn schedules_monotone(a in 0.0f64..400.0, b in 0.0f64..400.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p = Params::default();
            let s = ScenarioSpec::preset("FC-100").unwrap();
            prop_assert!(s.scheduled_delta_y(lo, &sched(), &p) <= s.scheduled_delta_y(hi, &sched(), &p));
            prop_assert!(s.eta.eta(lo) >= s.eta.eta(hi));
            prop_assert!(s.eta.eta(hi) >= s.eta.eta_min);
        }
    }
}
