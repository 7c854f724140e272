//! Generalized capital law and the three extension models.
//!
//! Every extension keeps the form `dK/dtau = r(tau) K` with a rate that blows
//! up where a denominator `D(tau)` vanishes:
//!
//! | model        | `D(tau)`                          | crisis                         |
//! |--------------|-----------------------------------|--------------------------------|
//! | generalized  | `1 - sigma f(tau)`                | root of `f(tau) = 1/sigma`     |
//! | variable mu  | `nu - tau mu(tau)`                | root of `tau mu(tau) = nu`     |
//! | amortized    | `1 - (alpha + sigma) tau + alpha sigma tau^2` | `min(1/alpha, 1/sigma)` |
//! | cumulative   | `1 - sigma tau - sigma rho tau^2` | `-1/(2 rho) + sqrt(1/(4 rho^2) + 1/(sigma rho))` |

use crate::domain::{
    Controls, CrisisMethod, CrisisReport, GrowthLaw, ModelParams, MuSchedule, Trajectory, Variant,
};
use crate::dynamics::{crisis_for_run, simulate_law, CapitalLaw, Run};
use crate::error::{Error, Result};
use crate::numerics::{find_root_newton, Polynomial};

/// Trajectory and crisis of one extension run, with the comparison against a
/// closed form where one exists.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionOutcome {
    pub trajectory: Trajectory,
    pub crisis: CrisisReport,
    /// A trusted closed form exists and was compared against the ODE.
    pub closed_form_available: bool,
    pub closed_form_discrepancy: Option<Discrepancy>,
}

/// Largest relative mismatch between a closed-form expression and the ODE
/// capital over the compared grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    /// NaN when the expression is undefined at every compared point.
    pub max_relative: f64,
    /// Points where the expression evaluated to a finite number.
    pub finite_points: usize,
    pub compared_points: usize,
}

/// Compares `closed` with the trajectory capital on grid points up to
/// `0.95 * crisis_time` (or the whole grid without a crisis).
fn discrepancy(
    tr: &Trajectory,
    crisis_time: Option<f64>,
    closed: impl Fn(f64) -> f64,
) -> Discrepancy {
    let limit = crisis_time.map_or(f64::INFINITY, |t| 0.95 * t);
    let mut out = Discrepancy {
        max_relative: f64::NAN,
        finite_points: 0,
        compared_points: 0,
    };
    for (&tau, &k) in tr.grid.iter().zip(&tr.capital) {
        if tau > limit {
            break;
        }
        out.compared_points += 1;
        let c = closed(tau);
        if c.is_finite() {
            out.finite_points += 1;
            let rel = ((k - c) / c).abs();
            out.max_relative = if out.max_relative.is_nan() {
                rel
            } else {
                out.max_relative.max(rel)
            };
        }
    }
    out
}

fn outcome(
    run: Run,
    crisis: CrisisReport,
    closed: Option<(bool, &dyn Fn(f64) -> f64)>,
) -> ExtensionOutcome {
    let closed_form_discrepancy =
        closed.map(|(_, f)| discrepancy(&run.trajectory, crisis.crisis_time, f));
    ExtensionOutcome {
        closed_form_available: closed.is_some_and(|(trusted, _)| trusted),
        closed_form_discrepancy,
        trajectory: run.trajectory,
        crisis,
    }
}

// ---------------------------------------------------------------------------
// Generalized law

/// `K0 / (1 - sigma f(tau))`.
pub fn generalized_capital(params: &ModelParams, law: &GrowthLaw, tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::invalid("tau", format!("{tau} is negative")));
    }
    let end = law.validity_end();
    if tau > end {
        return Err(Error::invalid(
            "tau",
            format!("{tau} is beyond the monotone range of the growth law (ends at {end})"),
        ));
    }
    let gap = 1.0 - params.sigma() * law.eval(tau);
    if !(gap > 0.0) {
        let crisis_time = generalized_crisis(params, law, 1e-12)?
            .crisis_time
            .unwrap_or(tau);
        return Err(Error::PastCrisis { tau, crisis_time });
    }
    Ok(params.k0() / gap)
}

/// Crisis of the generalized law: smallest positive root of `f(tau) = nu/mu`
/// within the monotone range of `f`.
pub fn generalized_crisis(
    params: &ModelParams,
    law: &GrowthLaw,
    root_abs: f64,
) -> Result<CrisisReport> {
    law_crisis(law, params.sigma(), params.crisis_time(), root_abs)
}

/// Root of `f(tau) = inverse_sigma`; `inverse_sigma` is passed separately so
/// that callers holding `nu/mu` get the identity law exactly right.
pub(crate) fn law_crisis(
    law: &GrowthLaw,
    sigma: f64,
    inverse_sigma: f64,
    root_abs: f64,
) -> Result<CrisisReport> {
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma", format!("{sigma} is not positive")));
    }
    let variant = Variant::Generalized;
    if law.is_identity() {
        return Ok(CrisisReport::at(
            variant,
            CrisisMethod::PolynomialRoot,
            inverse_sigma,
            f64::INFINITY,
        ));
    }
    let f = law.polynomial();
    let df = f.derivative();
    let end = law.validity_end();
    let g = |t: f64| f.eval(t) - inverse_sigma;
    let hi = if end.is_finite() {
        end
    } else {
        let mut c = f.coefficients().to_vec();
        c[0] -= inverse_sigma;
        Polynomial::new(c)
            .cauchy_bound()
            .expect("non-identity law has degree >= 2")
    };
    if g(hi) < 0.0 {
        return Ok(CrisisReport::none(
            variant,
            CrisisMethod::PolynomialRoot,
            hi,
        ));
    }
    let root = find_root_newton(g, |t| df.eval(t), (0.0, hi), root_abs)?;
    Ok(CrisisReport::at(
        variant,
        CrisisMethod::PolynomialRoot,
        root,
        hi,
    ))
}

struct GeneralizedLaw<'a> {
    params: &'a ModelParams,
    f: Polynomial,
    df: Polynomial,
}

impl CapitalLaw for GeneralizedLaw<'_> {
    fn rate(&self, tau: f64) -> Result<f64> {
        Ok(self.params.sigma() * self.df.eval(tau) / self.denominator(tau))
    }

    fn denominator(&self, tau: f64) -> f64 {
        1.0 - self.params.sigma() * self.f.eval(tau)
    }

    fn investment(&self, tau: f64, capital: f64) -> Result<f64> {
        Ok(self.rate(tau)? * capital)
    }

    fn share(&self, _tau: f64) -> Result<f64> {
        Ok(self.params.mu())
    }
}

/// ODE `dK/dtau = sigma f'(tau) / (1 - sigma f(tau)) K`, compared with the
/// closed form `K0 / (1 - sigma f)`.
pub fn generalized_simulate(
    params: &ModelParams,
    law: &GrowthLaw,
    horizon: f64,
    controls: &Controls,
) -> Result<ExtensionOutcome> {
    let end = law.validity_end();
    if horizon > end {
        return Err(Error::invalid(
            "horizon",
            format!("{horizon} exceeds the monotone range of the growth law (ends at {end})"),
        ));
    }
    let dynamics = GeneralizedLaw {
        params,
        f: law.polynomial(),
        df: law.polynomial().derivative(),
    };
    let run = simulate_law(&dynamics, params.k0(), horizon, controls)?;
    let analytic = generalized_crisis(params, law, controls.tolerances.root_abs)?;
    let crisis = crisis_for_run(
        Variant::Generalized,
        &dynamics,
        analytic
            .crisis_time
            .map(|t| (t, CrisisMethod::PolynomialRoot)),
        &run,
        horizon,
    );
    let closed = |t: f64| params.k0() / dynamics.denominator(t);
    Ok(outcome(run, crisis, Some((true, &closed))))
}

// ---------------------------------------------------------------------------
// Time-dependent investment share

struct VariableMu<'a> {
    params: &'a ModelParams,
    schedule: &'a MuSchedule,
}

impl CapitalLaw for VariableMu<'_> {
    fn rate(&self, tau: f64) -> Result<f64> {
        let mu = self.schedule.eval(tau)?;
        Ok(mu / (self.params.nu() - tau * mu))
    }

    fn denominator(&self, tau: f64) -> f64 {
        self.params.nu() - tau * self.schedule.value(tau)
    }

    fn investment(&self, tau: f64, capital: f64) -> Result<f64> {
        Ok(self.rate(tau)? * capital)
    }

    fn share(&self, tau: f64) -> Result<f64> {
        self.schedule.eval(tau)
    }
}

/// Crisis of a variable-share schedule from its algebraic form, where one
/// exists: `nu / mu` for a constant, the first positive root of
/// `nu - tau mu(tau)` for a polynomial. Piecewise tables return `None`.
pub fn variable_mu_crisis(
    params: &ModelParams,
    schedule: &MuSchedule,
) -> Result<Option<(f64, CrisisMethod)>> {
    schedule.validate()?;
    Ok(match schedule {
        MuSchedule::Constant(mu) => Some((params.nu() / mu, CrisisMethod::Analytic)),
        MuSchedule::Polynomial(c) => {
            let mut d = Vec::with_capacity(c.len() + 1);
            d.push(params.nu());
            d.extend(c.iter().map(|x| -x));
            Polynomial::new(d)
                .first_positive_root()
                .map(|t| (t, CrisisMethod::PolynomialRoot))
        }
        MuSchedule::Piecewise(_) => None,
    })
}

/// ODE `dK/dtau = mu(tau) / (nu - tau mu(tau)) K`.
pub fn variable_mu_simulate(
    params: &ModelParams,
    schedule: &MuSchedule,
    horizon: f64,
    controls: &Controls,
) -> Result<ExtensionOutcome> {
    let analytic = variable_mu_crisis(params, schedule)?;
    let dynamics = VariableMu { params, schedule };
    let run = simulate_law(&dynamics, params.k0(), horizon, controls)?;
    let crisis = crisis_for_run(Variant::VariableMu, &dynamics, analytic, &run, horizon);
    Ok(match schedule {
        MuSchedule::Constant(mu) => {
            let closed = |t: f64| params.k0() / (1.0 - mu / params.nu() * t);
            outcome(run, crisis, Some((true, &closed)))
        }
        _ => outcome(run, crisis, None),
    })
}

// ---------------------------------------------------------------------------
// Amortization

struct Amortized<'a> {
    params: &'a ModelParams,
    alpha: f64,
}

impl CapitalLaw for Amortized<'_> {
    fn rate(&self, tau: f64) -> Result<f64> {
        let (a, s) = (self.alpha, self.params.sigma());
        Ok((a + s - 2.0 * a * s * tau) / self.denominator(tau))
    }

    fn denominator(&self, tau: f64) -> f64 {
        let (a, s) = (self.alpha, self.params.sigma());
        1.0 - (a + s) * tau + a * s * tau * tau
    }

    /// Investment feeds the amortized capital `(1 - alpha tau) K`.
    fn investment(&self, tau: f64, capital: f64) -> Result<f64> {
        Ok(capital * ((1.0 - self.alpha * tau) * self.rate(tau)? - self.alpha))
    }

    fn share(&self, _tau: f64) -> Result<f64> {
        Ok(self.params.mu())
    }
}

fn check_rate(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("{value} is negative or not finite"),
        ))
    }
}

/// `K0 / ((1 - alpha tau)(1 - sigma tau))`.
pub fn amortized_capital(params: &ModelParams, alpha: f64, tau: f64) -> Result<f64> {
    check_rate("alpha", alpha)?;
    let gap = (1.0 - alpha * tau) * (1.0 - params.sigma() * tau);
    let crisis_time = amortized_crisis_time(params, alpha);
    if !(gap > 0.0) || tau >= crisis_time {
        return Err(Error::PastCrisis { tau, crisis_time });
    }
    Ok(params.k0() / gap)
}

fn amortized_crisis_time(params: &ModelParams, alpha: f64) -> f64 {
    if alpha > 0.0 {
        (1.0 / alpha).min(params.crisis_time())
    } else {
        params.crisis_time()
    }
}

/// `min(1/alpha, nu/mu)`.
pub fn amortized_crisis(params: &ModelParams, alpha: f64) -> Result<CrisisReport> {
    check_rate("alpha", alpha)?;
    Ok(CrisisReport::at(
        Variant::Amortized,
        CrisisMethod::Analytic,
        amortized_crisis_time(params, alpha),
        f64::INFINITY,
    ))
}

/// ODE with rate `(alpha + sigma - 2 alpha sigma tau) / (1 - (alpha + sigma) tau + alpha sigma tau^2)`.
pub fn amortized_simulate(
    params: &ModelParams,
    alpha: f64,
    horizon: f64,
    controls: &Controls,
) -> Result<ExtensionOutcome> {
    check_rate("alpha", alpha)?;
    let dynamics = Amortized { params, alpha };
    let run = simulate_law(&dynamics, params.k0(), horizon, controls)?;
    let crisis = crisis_for_run(
        Variant::Amortized,
        &dynamics,
        Some((amortized_crisis_time(params, alpha), CrisisMethod::Analytic)),
        &run,
        horizon,
    );
    let closed = |t: f64| params.k0() / ((1.0 - alpha * t) * (1.0 - params.sigma() * t));
    Ok(outcome(run, crisis, Some((true, &closed))))
}

// ---------------------------------------------------------------------------
// Cumulative effect

struct Cumulative<'a> {
    params: &'a ModelParams,
    rho: f64,
}

impl CapitalLaw for Cumulative<'_> {
    fn rate(&self, tau: f64) -> Result<f64> {
        let s = self.params.sigma();
        Ok(s * (1.0 + self.rho * tau) / self.denominator(tau))
    }

    fn denominator(&self, tau: f64) -> f64 {
        let s = self.params.sigma();
        1.0 - s * tau - s * self.rho * tau * tau
    }

    /// Capital grows by `(1 + rho tau) I`, so `I = K' / (1 + rho tau)`.
    fn investment(&self, tau: f64, capital: f64) -> Result<f64> {
        Ok(self.params.sigma() * capital / self.denominator(tau))
    }

    fn share(&self, _tau: f64) -> Result<f64> {
        Ok(self.params.mu())
    }
}

// Below this rho the crisis formula cancels catastrophically; use nu/mu.
const RHO_FALLBACK: f64 = 1e-12;

/// Crisis of the cumulative model from the explicit formula
/// `-1/(2 rho) + sqrt(1/(4 rho^2) + 1/(sigma rho))`, verified against the
/// positive root of `1 - sigma tau - sigma rho tau^2`.
///
/// If the two disagree by more than `root_abs` (cancellation in the formula
/// for small `rho`), the bracketed root is reported.
pub fn cumulative_crisis(params: &ModelParams, rho: f64, root_abs: f64) -> Result<CrisisReport> {
    check_rate("rho", rho)?;
    let variant = Variant::Cumulative;
    if rho < RHO_FALLBACK {
        return Ok(CrisisReport::at(
            variant,
            CrisisMethod::Analytic,
            params.crisis_time(),
            f64::INFINITY,
        ));
    }
    let s = params.sigma();
    let formula = -1.0 / (2.0 * rho) + (1.0 / (4.0 * rho * rho) + 1.0 / (s * rho)).sqrt();
    let root = find_root_newton(
        |t| 1.0 - s * t - s * rho * t * t,
        |t| -s - 2.0 * s * rho * t,
        (0.0, params.crisis_time()),
        root_abs,
    )?;
    let crisis_time = if (formula - root).abs() <= root_abs {
        formula
    } else {
        root
    };
    Ok(CrisisReport::at(
        variant,
        CrisisMethod::Analytic,
        crisis_time,
        f64::INFINITY,
    ))
}

/// The closed-form expression printed for the cumulative model, evaluated
/// literally:
///
/// `K0 { (1 - sigma tau - sigma rho tau^2)^(-1/2)
///      + [(-2 sigma tau - sigma - s) / (-2 sigma tau - sigma + s)]^(sigma / (2 s)) }`
/// with `s = sqrt(4 sigma rho + sigma^2)`.
///
/// The bracket is negative while `2 sigma tau + sigma < s`, where the
/// fractional power is NaN, and the expression does not return `K0` at
/// `tau = 0`. It is kept as printed and never used as ground truth.
pub fn cumulative_printed_form(params: &ModelParams, rho: f64, tau: f64) -> f64 {
    let sg = params.sigma();
    let s = (4.0 * sg * rho + sg * sg).sqrt();
    let root_term = 1.0 / (-sg * rho * tau * tau - sg * tau + 1.0).sqrt();
    let bracket = (-2.0 * sg * tau - sg - s) / (-2.0 * sg * tau - sg + s);
    params.k0() * (root_term + bracket.powf(sg / (2.0 * s)))
}

/// ODE `dK/dtau = sigma (1 + rho tau) / (1 - sigma tau - sigma rho tau^2) K`.
///
/// The printed closed form is compared but not trusted, so
/// `closed_form_available` is false and the discrepancy is informational.
pub fn cumulative_simulate(
    params: &ModelParams,
    rho: f64,
    horizon: f64,
    controls: &Controls,
) -> Result<ExtensionOutcome> {
    check_rate("rho", rho)?;
    let dynamics = Cumulative { params, rho };
    let run = simulate_law(&dynamics, params.k0(), horizon, controls)?;
    let analytic = cumulative_crisis(params, rho, controls.tolerances.root_abs)?;
    let crisis = crisis_for_run(
        Variant::Cumulative,
        &dynamics,
        analytic.crisis_time.map(|t| (t, CrisisMethod::Analytic)),
        &run,
        horizon,
    );
    let printed = |t: f64| cumulative_printed_form(params, rho, t);
    Ok(outcome(run, crisis, Some((false, &printed))))
}
