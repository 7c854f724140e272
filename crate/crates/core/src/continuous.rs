//! Continuous-time model: capital balanced against income accumulated over the
//! elapsed period, `K(tau) tau = nu * int_0^tau Y`, together with
//! `I = mu Y` and `dK/dtau = I`.
//!
//! The solution `K = K0 / (1 - sigma tau)` blows up at `tau = 1/sigma = nu/mu`.
//! Before that, at `tau = nu`, realized income catches up with capital and
//! realized consumption reaches the initial capital.

use crate::domain::{
    Controls, CrisisMethod, CrisisReport, ModelParams, Tolerances, Trajectory, Variant,
};
use crate::dynamics::{crisis_for_run, simulate_law, CapitalLaw};
use crate::error::{Error, Result};
use crate::numerics::{find_root_newton, quadrature};

/// Stocks and flow intensities at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub capital: f64,
    pub investment: f64,
    pub income: f64,
    pub consumption: f64,
}

/// Running integrals of the flow intensities from 0 to `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizedFlows {
    pub income: f64,
    pub capital: f64,
    pub consumption: f64,
    pub investment: f64,
}

fn check_before_crisis(params: &ModelParams, tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::invalid("tau", format!("{tau} is negative")));
    }
    let gap = 1.0 - params.sigma() * tau;
    if !(gap > 0.0) {
        return Err(Error::PastCrisis {
            tau,
            crisis_time: params.crisis_time(),
        });
    }
    Ok(gap)
}

/// `K = K0/(1 - sigma tau)`, `I = I0/(1 - sigma tau)^2`, `Y = I/mu`, `C = (1 - mu) Y`.
pub fn closed_form_state(params: &ModelParams, tau: f64) -> Result<State> {
    let gap = check_before_crisis(params, tau)?;
    let investment = params.i0() / (gap * gap);
    let income = investment / params.mu();
    Ok(State {
        capital: params.k0() / gap,
        investment,
        income,
        consumption: (1.0 - params.mu()) * income,
    })
}

/// Antiderivatives of the closed-form intensities:
/// `Y_R = (K0/mu)((1 - sigma tau)^-1 - 1)`, `K_R = I_R = mu Y_R`, `C_R = (1 - mu) Y_R`.
pub fn realized_flows(params: &ModelParams, tau: f64) -> Result<RealizedFlows> {
    let gap = check_before_crisis(params, tau)?;
    let mu = params.mu();
    // (1/gap - 1) without cancellation for small tau
    let income = params.k0() / mu * (params.sigma() * tau / gap);
    let capital = mu * income;
    Ok(RealizedFlows {
        income,
        capital,
        consumption: (1.0 - mu) * income,
        investment: capital,
    })
}

/// The same realized flows by adaptive quadrature of the closed-form
/// intensities, independent of the antiderivatives.
pub fn realized_flows_by_quadrature(
    params: &ModelParams,
    tau: f64,
    abs_tol: f64,
) -> Result<RealizedFlows> {
    check_before_crisis(params, tau)?;
    let state = |t: f64| closed_form_state(params, t).map_or(State::nan(), |s| s);
    let income = quadrature(|t| state(t).income, 0.0, tau, abs_tol)?;
    let investment = quadrature(|t| state(t).investment, 0.0, tau, abs_tol)?;
    let consumption = quadrature(|t| state(t).consumption, 0.0, tau, abs_tol)?;
    Ok(RealizedFlows {
        income,
        capital: investment,
        consumption,
        investment,
    })
}

impl State {
    fn nan() -> Self {
        State {
            capital: f64::NAN,
            investment: f64::NAN,
            income: f64::NAN,
            consumption: f64::NAN,
        }
    }
}

pub(crate) struct Baseline<'a>(pub &'a ModelParams);

impl CapitalLaw for Baseline<'_> {
    fn rate(&self, tau: f64) -> Result<f64> {
        Ok(self.0.sigma() / self.denominator(tau))
    }

    fn denominator(&self, tau: f64) -> f64 {
        1.0 - self.0.sigma() * tau
    }

    fn investment(&self, tau: f64, capital: f64) -> Result<f64> {
        Ok(self.rate(tau)? * capital)
    }

    fn share(&self, _tau: f64) -> Result<f64> {
        Ok(self.0.mu())
    }
}

/// Result of [`simulate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub trajectory: Trajectory,
    pub crisis: CrisisReport,
}

/// Integrates `dK/dtau = sigma/(1 - sigma tau) K` with the numerics engine.
///
/// Flows follow pointwise from the capital; realized series are running
/// quadratures. A tripped guard is the crisis outcome, not an error.
pub fn simulate(params: &ModelParams, horizon: f64, controls: &Controls) -> Result<Simulation> {
    let law = Baseline(params);
    let run = simulate_law(&law, params.k0(), horizon, controls)?;
    let crisis = crisis_for_run(
        Variant::Continuous,
        &law,
        Some((params.crisis_time(), CrisisMethod::Analytic)),
        &run,
        horizon,
    );
    Ok(Simulation {
        trajectory: run.trajectory,
        crisis,
    })
}

/// Analytic crisis report `tau* = nu/mu`.
pub fn continuous_crisis(params: &ModelParams, horizon: f64) -> CrisisReport {
    let mut report = CrisisReport::at(
        Variant::Continuous,
        CrisisMethod::Analytic,
        params.crisis_time(),
        horizon,
    );
    let end = horizon.min(params.crisis_time());
    report.denominator_margin = Some(1.0 - params.sigma() * end);
    report
}

/// Values at `tau = nu` next to their predicted form `K0/(1 - mu)`,
/// `I0/(1 - mu)^2`, `Y0/(1 - mu)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuBoundary {
    pub capital: f64,
    pub investment: f64,
    pub income: f64,
    pub expected_capital: f64,
    pub expected_investment: f64,
    pub expected_income: f64,
}

impl NuBoundary {
    /// Largest relative deviation between evaluated and predicted values.
    pub fn max_relative_error(&self) -> f64 {
        [
            (self.capital, self.expected_capital),
            (self.investment, self.expected_investment),
            (self.income, self.expected_income),
        ]
        .into_iter()
        .map(|(v, e)| ((v - e) / e).abs())
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Milestones {
    /// First time realized income equals capital.
    pub balance_time: f64,
    /// First time realized consumption equals the initial capital.
    pub reformat_time: f64,
    pub crisis_time: f64,
    pub checks: NuBoundary,
}

/// Locates the balance and re-formatting times numerically and evaluates the
/// state at `tau = nu`. Analytically both times equal `nu`.
pub fn milestones(params: &ModelParams, tolerances: &Tolerances) -> Result<Milestones> {
    let crisis_time = params.crisis_time();
    let hi = crisis_time * (1.0 - 1e-9);
    let k0 = params.k0();
    let flows = |t: f64| realized_flows(params, t).map_or(f64::NAN, |r| r.income);
    let state = |t: f64| closed_form_state(params, t).unwrap_or(State::nan());

    // d/dtau (Y_R - K) = Y - I = C and d/dtau C_R = C
    let balance_time = find_root_newton(
        |t| flows(t) - state(t).capital,
        |t| state(t).consumption,
        (0.0, hi),
        tolerances.root_abs,
    )?;
    let reformat_time = find_root_newton(
        |t| realized_flows(params, t).map_or(f64::NAN, |r| r.consumption) - k0,
        |t| state(t).consumption,
        (0.0, hi),
        tolerances.root_abs,
    )?;

    let at_nu = closed_form_state(params, params.nu())?;
    let share = 1.0 - params.mu();
    Ok(Milestones {
        balance_time,
        reformat_time,
        crisis_time,
        checks: NuBoundary {
            capital: at_nu.capital,
            investment: at_nu.investment,
            income: at_nu.income,
            expected_capital: k0 / share,
            expected_investment: params.i0() / (share * share),
            expected_income: params.y0() / (share * share),
        },
    })
}

/// Closed-form exponential path `K0 e^(sigma tau)` on a uniform grid with
/// spacing at most `max_step`. It never blows up.
pub fn legacy_exponential(params: &ModelParams, horizon: f64, max_step: f64) -> Result<Trajectory> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::invalid(
            "horizon",
            format!("{horizon} is not positive"),
        ));
    }
    if !(max_step > 0.0) {
        return Err(Error::invalid(
            "max_step",
            format!("{max_step} is not positive"),
        ));
    }
    let steps = (horizon / max_step).ceil().max(1.0) as usize;
    let (sigma, mu) = (params.sigma(), params.mu());
    let mut tr = Trajectory::default();
    for j in 0..=steps {
        let tau = if j == steps {
            horizon
        } else {
            horizon * j as f64 / steps as f64
        };
        let g = (sigma * tau).exp();
        let growth = (sigma * tau).exp_m1();
        let investment = params.i0() * g;
        let consumption = (params.y0() - params.i0()) * g;
        let realized_income = params.y0() / sigma * growth;
        tr.grid.push(tau);
        tr.capital.push(params.k0() * g);
        tr.investment.push(investment);
        tr.consumption.push(consumption);
        tr.income.push(consumption + investment);
        tr.realized_income.push(realized_income);
        tr.realized_investment.push(mu * realized_income);
        tr.realized_consumption.push((1.0 - mu) * realized_income);
    }
    tr.realized_capital = tr.realized_investment.clone();
    Ok(tr)
}

/// Both sides of `K(tau) = (nu/tau) int_0^tau Y` by independent routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalAudit {
    pub tau: f64,
    /// `K(tau)` from the closed form.
    pub capital: f64,
    /// `(nu/tau) int_0^tau Y` by quadrature, or `nu Y0` at `tau = 0`.
    pub balance: f64,
    pub relative_mismatch: f64,
    pub holds: bool,
}

pub fn dimensional_audit(
    params: &ModelParams,
    tau: f64,
    identity_abs: f64,
) -> Result<DimensionalAudit> {
    let capital = closed_form_state(params, tau)?.capital;
    let balance = if tau == 0.0 {
        // limit of the balance as tau -> 0
        params.nu() * params.y0()
    } else {
        let income = |t: f64| closed_form_state(params, t).map_or(f64::NAN, |s| s.income);
        let integral = quadrature(income, 0.0, tau, 1e-3 * identity_abs * capital)?;
        params.nu() / tau * integral
    };
    let relative_mismatch = ((capital - balance) / capital).abs();
    Ok(DimensionalAudit {
        tau,
        capital,
        balance,
        relative_mismatch,
        holds: relative_mismatch <= identity_abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::make_params;

    fn base() -> ModelParams {
        make_params(0.5, 10.0, 1.0).unwrap()
    }

    #[test]
    fn state_at_nu() {
        let s = closed_form_state(&base(), 10.0).unwrap();
        assert!((s.capital - 2.0).abs() < 1e-15);
        assert!((s.income - 0.4).abs() < 1e-15);
        assert!((s.investment - 0.2).abs() < 1e-15);
        assert!((s.consumption - 0.2).abs() < 1e-15);
    }

    #[test]
    fn state_at_start_and_near_crisis() {
        let p = base();
        let s = closed_form_state(&p, 0.0).unwrap();
        assert_eq!((s.capital, s.income, s.investment), (1.0, 0.1, 0.05));
        let s = closed_form_state(&p, 19.0).unwrap();
        assert!((s.capital - 20.0).abs() < 1e-12);
        // I0 / (1 - 0.95)^2 = 0.05 / 0.0025
        assert!((s.investment - 20.0).abs() < 1e-10);
        match closed_form_state(&p, 20.0) {
            Err(Error::PastCrisis { crisis_time, .. }) => assert_eq!(crisis_time, 20.0),
            other => panic!("{other:?}"),
        }
        assert!(closed_form_state(&p, 25.0).is_err());
    }

    #[test]
    fn realized_flow_values() {
        let p = base();
        let r = realized_flows(&p, 10.0).unwrap();
        assert!((r.income - 2.0).abs() < 1e-14);
        assert!((r.capital - 1.0).abs() < 1e-14);
        assert!((r.consumption - 1.0).abs() < 1e-14);
        let r = realized_flows(&p, 19.0).unwrap();
        assert!((r.income - 38.0).abs() < 1e-12);
        assert!((r.capital - 19.0).abs() < 1e-12);
        assert!((r.consumption - 19.0).abs() < 1e-12);
        let r = realized_flows(&p, 0.0).unwrap();
        assert_eq!(
            (r.income, r.capital, r.consumption, r.investment),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn antiderivatives_match_quadrature() {
        let p = make_params(0.3, 6.0, 2.5).unwrap();
        for tau in [0.5, 5.0, 15.0, 19.0] {
            let a = realized_flows(&p, tau).unwrap();
            let q = realized_flows_by_quadrature(&p, tau, 1e-12).unwrap();
            assert!((a.income - q.income).abs() < 1e-10, "{tau}");
            assert!((a.consumption - q.consumption).abs() < 1e-10);
            assert!((a.investment - q.investment).abs() < 1e-10);
        }
    }

    #[test]
    fn milestone_times() {
        let tol = Tolerances::default();
        let m = milestones(&base(), &tol).unwrap();
        assert!((m.balance_time - 10.0).abs() < 1e-9);
        assert!((m.reformat_time - 10.0).abs() < 1e-9);
        assert_eq!(m.crisis_time, 20.0);
        assert!(m.checks.max_relative_error() < 1e-14);

        let m = milestones(&make_params(0.8, 10.0, 1.0).unwrap(), &tol).unwrap();
        assert!((m.reformat_time - 10.0).abs() < 1e-9);
        assert_eq!(m.crisis_time, 12.5);

        let m = milestones(&make_params(0.2, 5.0, 1.0).unwrap(), &tol).unwrap();
        assert_eq!(m.crisis_time, 25.0);
    }

    #[test]
    fn simulation_reports() {
        let c = Controls::default();
        let sim = simulate(&base(), 19.0, &c).unwrap();
        sim.trajectory.check().unwrap();
        assert!(
            (sim.trajectory
                .last(crate::domain::Channel::Capital)
                .unwrap()
                / 20.0
                - 1.0)
                .abs()
                < 1e-8
        );
        assert_eq!(sim.crisis.method, CrisisMethod::Analytic);
        assert_eq!(sim.crisis.crisis_time, Some(20.0));
        assert!(!sim.crisis.within(19.0));

        let sim = simulate(&base(), 25.0, &c).unwrap();
        assert_eq!(sim.crisis.method, CrisisMethod::IntegratorGuard);
        assert_eq!(sim.crisis.crisis_time, Some(20.0));
        let last = sim.crisis.last_safe_time.unwrap();
        assert!(last > 19.9 && last < 20.0);
        assert!(sim.crisis.denominator_margin.unwrap() >= 1e-6);

        let sim = simulate(&base(), 0.001, &c).unwrap();
        assert!(sim.trajectory.len() >= 2);
        assert!((sim.trajectory.capital.last().unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn legacy_values() {
        let t = legacy_exponential(&base(), 20.0, 0.5).unwrap();
        t.check().unwrap();
        assert_eq!(t.capital[0], 1.0);
        assert!((t.capital.last().unwrap() - std::f64::consts::E).abs() < 1e-14);
        assert_eq!(t.grid.len(), 41);
        // the continuous model is already singular there
        assert!(closed_form_state(&base(), 20.0).is_err());
    }

    #[test]
    fn dimensional_identity() {
        let p = base();
        for tau in [10.0, 19.0] {
            let a = dimensional_audit(&p, tau, 1e-9).unwrap();
            assert!(a.holds, "{a:?}");
        }
        let a = dimensional_audit(&p, 10.0, 1e-9).unwrap();
        assert!((a.balance - 2.0).abs() < 1e-9);
        let a = dimensional_audit(&p, 0.0, 1e-9).unwrap();
        assert_eq!(a.balance, p.k0());
        assert_eq!(a.relative_mismatch, 0.0);
    }
}
