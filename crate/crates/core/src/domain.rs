//! Parameter bundles, trajectories and crisis reports shared by every model.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::Polynomial;

/// Baseline parameters of the growth model.
///
/// `mu` is the investment share of income, `nu` the number of years of income
/// that counterbalance the capital and `k0` the initial capital. The rate
/// `sigma = mu / nu` and the initial flows `y0 = k0 / nu`, `i0 = sigma * k0` are
/// computed once at construction so every caller sees the same rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    mu: f64,
    nu: f64,
    k0: f64,
    sigma: f64,
    y0: f64,
    i0: f64,
}

/// Validates `(mu, nu, k0)` and derives `sigma`, `y0` and `i0`.
pub fn make_params(mu: f64, nu: f64, k0: f64) -> Result<ModelParams> {
    ModelParams::new(mu, nu, k0)
}

impl ModelParams {
    pub fn new(mu: f64, nu: f64, k0: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::invalid("mu", format!("{mu} is not in (0, 1)")));
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::invalid(
                "nu",
                format!("{nu} is not a positive finite number"),
            ));
        }
        if !(k0 > 0.0 && k0.is_finite()) {
            return Err(Error::invalid(
                "k0",
                format!("{k0} is not a positive finite number"),
            ));
        }
        let sigma = mu / nu;
        Ok(ModelParams {
            mu,
            nu,
            k0,
            sigma,
            y0: k0 / nu,
            i0: sigma * k0,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn i0(&self) -> f64 {
        self.i0
    }

    /// Crisis time of the continuous model, `1 / sigma`, evaluated as `nu / mu`.
    ///
    /// Any `nu > 0` is accepted, so this horizon limit is unbounded above.
    pub fn crisis_time(&self) -> f64 {
        self.nu / self.mu
    }

    /// Same parameters with a different initial capital.
    pub fn with_k0(&self, k0: f64) -> Result<Self> {
        Self::new(self.mu, self.nu, k0)
    }
}

/// Series that a [`Trajectory`] carries, in CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Channel {
    Capital,
    Investment,
    Income,
    Consumption,
    RealizedIncome,
    RealizedCapital,
    RealizedConsumption,
}

impl Channel {
    pub const ALL: [Channel; 7] = [
        Channel::Capital,
        Channel::Investment,
        Channel::Income,
        Channel::Consumption,
        Channel::RealizedIncome,
        Channel::RealizedCapital,
        Channel::RealizedConsumption,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Channel::Capital => "K",
            Channel::Investment => "I",
            Channel::Income => "Y",
            Channel::Consumption => "C",
            Channel::RealizedIncome => "Y_R",
            Channel::RealizedCapital => "K_R",
            Channel::RealizedConsumption => "C_R",
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Channel::ALL
            .into_iter()
            .find(|c| c.label() == s.trim())
            .ok_or_else(|| Error::invalid("channel", format!("unknown series `{s}`")))
    }
}

/// Time grid with aligned stock, flow-intensity and realized series.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub grid: Vec<f64>,
    pub capital: Vec<f64>,
    pub investment: Vec<f64>,
    pub income: Vec<f64>,
    pub consumption: Vec<f64>,
    pub realized_income: Vec<f64>,
    pub realized_capital: Vec<f64>,
    pub realized_consumption: Vec<f64>,
    pub realized_investment: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn series(&self, channel: Channel) -> &[f64] {
        match channel {
            Channel::Capital => &self.capital,
            Channel::Investment => &self.investment,
            Channel::Income => &self.income,
            Channel::Consumption => &self.consumption,
            Channel::RealizedIncome => &self.realized_income,
            Channel::RealizedCapital => &self.realized_capital,
            Channel::RealizedConsumption => &self.realized_consumption,
        }
    }

    pub fn last_time(&self) -> Option<f64> {
        self.grid.last().copied()
    }

    /// Value of `channel` at the last grid point.
    pub fn last(&self, channel: Channel) -> Option<f64> {
        self.series(channel).last().copied()
    }

    /// Checks the structural invariants: aligned lengths, a strictly increasing
    /// grid starting at zero, the exact flow identity `Y = C + I` and
    /// `realized_investment == realized_capital`.
    pub fn check(&self) -> Result<()> {
        let n = self.grid.len();
        let lengths = [
            self.capital.len(),
            self.investment.len(),
            self.income.len(),
            self.consumption.len(),
            self.realized_income.len(),
            self.realized_capital.len(),
            self.realized_consumption.len(),
            self.realized_investment.len(),
        ];
        if lengths.iter().any(|&l| l != n) {
            return Err(Error::invalid(
                "trajectory",
                "series lengths differ from the grid",
            ));
        }
        if self.grid.first().is_some_and(|&t| t != 0.0) {
            return Err(Error::invalid("trajectory", "grid does not start at 0"));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "trajectory",
                "grid is not strictly increasing",
            ));
        }
        for j in 0..n {
            if self.income[j] != self.consumption[j] + self.investment[j] {
                return Err(Error::invalid(
                    "trajectory",
                    format!("Y != C + I at grid index {j}"),
                ));
            }
        }
        if self.realized_capital != self.realized_investment {
            return Err(Error::invalid("trajectory", "K_R and I_R disagree"));
        }
        Ok(())
    }
}

/// Which model produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    LegacyExponential,
    Discrete,
    Continuous,
    Generalized,
    VariableMu,
    Amortized,
    Cumulative,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::LegacyExponential,
        Variant::Discrete,
        Variant::Continuous,
        Variant::Generalized,
        Variant::VariableMu,
        Variant::Amortized,
        Variant::Cumulative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::LegacyExponential => "legacy-exponential",
            Variant::Discrete => "discrete",
            Variant::Continuous => "continuous",
            Variant::Generalized => "generalized",
            Variant::VariableMu => "variable-mu",
            Variant::Amortized => "amortized",
            Variant::Cumulative => "cumulative",
        }
    }

    /// The legacy exponential and discrete models never blow up.
    pub fn has_crisis(self) -> bool {
        !matches!(self, Variant::LegacyExponential | Variant::Discrete)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s.trim())
            .ok_or_else(|| Error::invalid("variant", format!("unknown variant `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrisisMethod {
    /// Closed-form crisis time.
    Analytic,
    /// Root of a polynomial crisis equation located numerically.
    PolynomialRoot,
    /// The integrator's denominator guard stopped the run.
    IntegratorGuard,
}

impl CrisisMethod {
    pub fn name(self) -> &'static str {
        match self {
            CrisisMethod::Analytic => "analytic",
            CrisisMethod::PolynomialRoot => "polynomial-root",
            CrisisMethod::IntegratorGuard => "integrator-guard",
        }
    }
}

impl fmt::Display for CrisisMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of crisis detection for one model run.
#[derive(Debug, Clone, PartialEq)]
pub struct CrisisReport {
    pub variant: Variant,
    /// Time of the singularity, or `None` when the model has none within
    /// `search_limit`. For analytic methods this may lie beyond the horizon.
    pub crisis_time: Option<f64>,
    pub method: CrisisMethod,
    /// End of the interval that was examined (horizon or validity limit).
    pub search_limit: f64,
    /// Blowing-up denominator at the last safe grid point.
    pub denominator_margin: Option<f64>,
    /// Last grid point reached before the integrator guard tripped.
    pub last_safe_time: Option<f64>,
    /// Set when the crisis was extrapolated from a fitted growth law.
    pub extrapolated: bool,
}

impl CrisisReport {
    /// Report for a model without a singularity.
    pub fn none(variant: Variant, method: CrisisMethod, search_limit: f64) -> Self {
        CrisisReport {
            variant,
            crisis_time: None,
            method,
            search_limit,
            denominator_margin: None,
            last_safe_time: None,
            extrapolated: false,
        }
    }

    pub fn at(variant: Variant, method: CrisisMethod, crisis_time: f64, search_limit: f64) -> Self {
        CrisisReport {
            crisis_time: Some(crisis_time),
            ..Self::none(variant, method, search_limit)
        }
    }

    /// True when the crisis happens no later than `horizon`.
    pub fn within(&self, horizon: f64) -> bool {
        self.crisis_time.is_some_and(|t| t <= horizon)
    }

    pub fn guard_tripped(&self) -> bool {
        self.last_safe_time.is_some()
    }
}

/// Polynomial accumulation law `f(tau) = tau + a_2 tau^2 + ... + a_N tau^N`.
///
/// The constant term is zero and the linear coefficient one by construction, so
/// `f(0) = 0` and `f'(0) = 1` always hold.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthLaw {
    coefficients: Vec<f64>,
}

impl GrowthLaw {
    /// `coefficients` are `a_2 .. a_N`; an empty slice is the identity law.
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid(
                "growth_law",
                format!("coefficient {c} is not finite"),
            ));
        }
        Ok(GrowthLaw { coefficients })
    }

    pub fn identity() -> Self {
        GrowthLaw {
            coefficients: Vec::new(),
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() + 1
    }

    /// True when every higher-order coefficient is zero.
    pub fn is_identity(&self) -> bool {
        self.coefficients.iter().all(|&a| a == 0.0)
    }

    pub fn polynomial(&self) -> Polynomial {
        let mut c = Vec::with_capacity(self.coefficients.len() + 2);
        c.push(0.0);
        c.push(1.0);
        c.extend_from_slice(&self.coefficients);
        Polynomial::new(c)
    }

    pub fn eval(&self, tau: f64) -> f64 {
        self.polynomial().eval(tau)
    }

    pub fn derivative(&self, tau: f64) -> f64 {
        self.polynomial().derivative().eval(tau)
    }

    /// End of the interval `[0, end)` on which `f' > 0`; infinite when `f'`
    /// never changes sign on the positive axis.
    pub fn validity_end(&self) -> f64 {
        self.polynomial()
            .derivative()
            .first_positive_root()
            .unwrap_or(f64::INFINITY)
    }
}

/// Time-dependent investment share.
#[derive(Debug, Clone, PartialEq)]
pub enum MuSchedule {
    Constant(f64),
    /// `(time, value)` breakpoints; the first time is 0 and times strictly
    /// increase. The value of entry `k` holds on `(t_k, t_(k+1)]`, so the
    /// schedule is left-continuous.
    Piecewise(Vec<(f64, f64)>),
    /// Coefficients `c_0, c_1, ...` of a polynomial in `tau`.
    Polynomial(Vec<f64>),
}

impl MuSchedule {
    pub fn validate(&self) -> Result<()> {
        let share_ok = |v: f64| v > 0.0 && v < 1.0;
        match self {
            MuSchedule::Constant(v) => {
                if !share_ok(*v) {
                    return Err(Error::invalid(
                        "mu_schedule",
                        format!("{v} is not in (0, 1)"),
                    ));
                }
            }
            MuSchedule::Piecewise(table) => {
                let Some(&(t0, _)) = table.first() else {
                    return Err(Error::invalid("mu_schedule", "empty piecewise table"));
                };
                if t0 != 0.0 {
                    return Err(Error::invalid(
                        "mu_schedule",
                        "first breakpoint must be at 0",
                    ));
                }
                if table.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(Error::invalid(
                        "mu_schedule",
                        "breakpoints must be strictly increasing",
                    ));
                }
                if let Some(&(_, v)) = table.iter().find(|&&(_, v)| !share_ok(v)) {
                    return Err(Error::invalid(
                        "mu_schedule",
                        format!("{v} is not in (0, 1)"),
                    ));
                }
            }
            MuSchedule::Polynomial(c) => {
                if c.is_empty() || c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::invalid(
                        "mu_schedule",
                        "polynomial needs finite coefficients",
                    ));
                }
                if !share_ok(c[0]) {
                    return Err(Error::invalid(
                        "mu_schedule",
                        format!("mu(0) = {} is not in (0, 1)", c[0]),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Evaluates `mu(tau)` without range checking.
    pub fn value(&self, tau: f64) -> f64 {
        match self {
            MuSchedule::Constant(v) => *v,
            MuSchedule::Piecewise(table) => {
                let k = table.partition_point(|&(t, _)| t < tau);
                table[k.saturating_sub(1)].1
            }
            MuSchedule::Polynomial(c) => Polynomial::new(c.clone()).eval(tau),
        }
    }

    /// Evaluates `mu(tau)`, rejecting values outside `(0, 1)`.
    pub fn eval(&self, tau: f64) -> Result<f64> {
        let v = self.value(tau);
        if v > 0.0 && v < 1.0 {
            Ok(v)
        } else {
            Err(Error::invalid(
                "mu_schedule",
                format!("mu({tau}) = {v} is not in (0, 1)"),
            ))
        }
    }
}

/// Numerical tolerances of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative local error bound per integration step.
    pub ode_rel: f64,
    /// Absolute bracket width for root finding.
    pub root_abs: f64,
    /// Tolerance for analytic identities checked by quadrature.
    pub identity_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ode_rel: 1e-8,
            root_abs: 1e-9,
            identity_abs: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("ode_rel", self.ode_rel),
            ("root_abs", self.root_abs),
            ("identity_abs", self.identity_abs),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(
                    name,
                    format!("{v} is not a positive tolerance"),
                ));
            }
        }
        Ok(())
    }
}

/// Step control handed to the simulators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Controls {
    pub max_step: f64,
    pub denominator_floor: f64,
    pub tolerances: Tolerances,
}

impl Default for Controls {
    fn default() -> Self {
        Controls {
            max_step: 0.01,
            denominator_floor: 1e-6,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputKind {
    Csv,
    Report,
    Svg,
}

impl OutputKind {
    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Csv => "csv",
            OutputKind::Report => "report",
            OutputKind::Svg => "svg",
        }
    }
}

impl FromStr for OutputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(OutputKind::Csv),
            "report" => Ok(OutputKind::Report),
            "svg" => Ok(OutputKind::Svg),
            other => Err(Error::invalid(
                "outputs",
                format!("unknown output `{other}`"),
            )),
        }
    }
}

/// Declarative description of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub variant: Variant,
    pub params: ModelParams,
    pub alpha: Option<f64>,
    pub rho: Option<f64>,
    pub growth_law: Option<GrowthLaw>,
    pub mu_schedule: Option<MuSchedule>,
    pub horizon: f64,
    pub max_step: f64,
    pub tolerances: Tolerances,
    pub outputs: BTreeSet<OutputKind>,
}

impl ScenarioConfig {
    /// A config for `variant` with documented defaults: horizon `0.95 / sigma`,
    /// `max_step = 0.01`, default tolerances and `{csv, report}` outputs.
    pub fn new(variant: Variant, params: ModelParams) -> Self {
        ScenarioConfig {
            variant,
            params,
            alpha: None,
            rho: None,
            growth_law: None,
            mu_schedule: None,
            horizon: 0.95 / params.sigma(),
            max_step: 0.01,
            tolerances: Tolerances::default(),
            outputs: [OutputKind::Csv, OutputKind::Report].into_iter().collect(),
        }
    }

    pub fn controls(&self) -> Controls {
        Controls {
            max_step: self.max_step,
            tolerances: self.tolerances,
            ..Controls::default()
        }
    }

    /// Checks ranges and that variant-specific fields appear exactly when the
    /// variant needs them.
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::invalid(
                "horizon",
                format!("{} is not positive", self.horizon),
            ));
        }
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return Err(Error::invalid(
                "max_step",
                format!("{} is not positive", self.max_step),
            ));
        }
        self.tolerances.validate()?;

        let gate = |name: &str, present: bool, wanted: Variant| -> Result<()> {
            match (present, self.variant == wanted) {
                (false, true) => Err(Error::invalid(
                    name,
                    format!("required for variant {}", self.variant),
                )),
                (true, false) => Err(Error::invalid(
                    name,
                    format!("not used by variant {}", self.variant),
                )),
                _ => Ok(()),
            }
        };
        gate("alpha", self.alpha.is_some(), Variant::Amortized)?;
        gate("rho", self.rho.is_some(), Variant::Cumulative)?;
        gate(
            "growth_law",
            self.growth_law.is_some(),
            Variant::Generalized,
        )?;
        gate(
            "mu_schedule",
            self.mu_schedule.is_some(),
            Variant::VariableMu,
        )?;

        if let Some(a) = self.alpha {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(Error::invalid(
                    "alpha",
                    format!("{a} is negative or not finite"),
                ));
            }
        }
        if let Some(r) = self.rho {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(Error::invalid(
                    "rho",
                    format!("{r} is negative or not finite"),
                ));
            }
        }
        if let Some(s) = &self.mu_schedule {
            s.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_from_typical_values() {
        let p = make_params(0.5, 10.0, 1.0).unwrap();
        assert_eq!(p.sigma(), 0.05);
        assert_eq!(p.y0(), 0.1);
        assert_eq!(p.i0(), 0.05);
        assert_eq!(p.crisis_time(), 20.0);
    }

    #[test]
    fn params_derived_arithmetic() {
        let p = make_params(0.2, 8.0, 100.0).unwrap();
        assert!((p.sigma() - 0.025).abs() < 1e-16);
        assert!((p.y0() - 12.5).abs() < 1e-14);
        assert!((p.i0() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn params_reject_each_field() {
        let field = |r: Result<ModelParams>| match r {
            Err(Error::Invalid { field, .. }) => field,
            other => panic!("expected validation error, got {other:?}"),
        };
        assert_eq!(field(make_params(0.5, 10.0, 0.0)), "k0");
        assert_eq!(field(make_params(1.0, 10.0, 1.0)), "mu");
        assert_eq!(field(make_params(0.0, 10.0, 1.0)), "mu");
        assert_eq!(field(make_params(0.5, 0.0, 1.0)), "nu");
        assert_eq!(field(make_params(0.5, f64::NAN, 1.0)), "nu");
    }

    #[test]
    fn growth_law_constraints_hold() {
        let law = GrowthLaw::new(vec![-0.01, 0.003]).unwrap();
        assert_eq!(law.eval(0.0), 0.0);
        assert_eq!(law.derivative(0.0), 1.0);
        assert_eq!(law.degree(), 3);
        assert!(GrowthLaw::identity().validity_end().is_infinite());
        // f' = 1 - 0.02 tau vanishes at 50
        let decel = GrowthLaw::new(vec![-0.01]).unwrap();
        assert!((decel.validity_end() - 50.0).abs() < 1e-9);
    }

    #[test]
    fn piecewise_schedule_is_left_continuous() {
        let s = MuSchedule::Piecewise(vec![(0.0, 0.5), (5.0, 0.25)]);
        s.validate().unwrap();
        assert_eq!(s.value(0.0), 0.5);
        assert_eq!(s.value(5.0), 0.5);
        assert_eq!(s.value(5.0 + 1e-12), 0.25);
        assert_eq!(s.value(100.0), 0.25);
    }

    #[test]
    fn schedule_validation() {
        assert!(MuSchedule::Constant(1.2).validate().is_err());
        assert!(MuSchedule::Piecewise(vec![(0.0, 0.5), (0.0, 0.4)])
            .validate()
            .is_err());
        assert!(MuSchedule::Piecewise(vec![(1.0, 0.5)]).validate().is_err());
        let poly = MuSchedule::Polynomial(vec![0.5, 0.01]);
        poly.validate().unwrap();
        assert!(poly.eval(10.0).is_ok());
        assert!(poly.eval(60.0).is_err());
    }

    #[test]
    fn config_gating() {
        let p = make_params(0.5, 10.0, 1.0).unwrap();
        let mut c = ScenarioConfig::new(Variant::Cumulative, p);
        assert!(c.validate().is_err());
        c.rho = Some(0.1);
        c.validate().unwrap();
        c.alpha = Some(0.1);
        assert!(c.validate().is_err());
        assert!((ScenarioConfig::new(Variant::Continuous, p).horizon - 19.0).abs() < 1e-12);
    }
}
