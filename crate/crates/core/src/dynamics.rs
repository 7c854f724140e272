//! Turning an integrated capital path into a full [`Trajectory`].

use crate::domain::{Controls, CrisisMethod, CrisisReport, Trajectory, Variant};
use crate::error::Result;
use crate::numerics::{
    integrate_linear_ode, quadrature, OdeControls, OdeSolution, RateFunction, StopReason,
};

/// Capital law of one model variant: `dK/dtau = rate(tau) K`, singular where
/// `denominator` vanishes, with the investment intensity recoverable from the
/// capital.
pub(crate) trait CapitalLaw {
    fn rate(&self, tau: f64) -> Result<f64>;

    fn denominator(&self, tau: f64) -> f64;

    /// Investment intensity `I(tau)` given the capital `K(tau)`.
    fn investment(&self, tau: f64, capital: f64) -> Result<f64>;

    /// Investment share `mu(tau)`.
    fn share(&self, tau: f64) -> Result<f64>;
}

struct AsRate<'a, L: ?Sized>(&'a L);

impl<L: CapitalLaw + ?Sized> RateFunction for AsRate<'_, L> {
    fn rate(&self, tau: f64) -> Result<f64> {
        self.0.rate(tau)
    }

    fn denominator(&self, tau: f64) -> Option<f64> {
        Some(self.0.denominator(tau))
    }
}

pub(crate) struct Run {
    pub trajectory: Trajectory,
    pub solution: OdeSolution,
}

/// Integrates the law and derives flows pointwise and realized flows by
/// running quadrature over the Hermite interpolant of the capital.
pub(crate) fn simulate_law<L: CapitalLaw + ?Sized>(
    law: &L,
    k0: f64,
    horizon: f64,
    controls: &Controls,
) -> Result<Run> {
    let ode = OdeControls {
        rel_tol: controls.tolerances.ode_rel,
        max_step: controls.max_step,
        denominator_floor: controls.denominator_floor,
    };
    let solution = integrate_linear_ode(&AsRate(law), k0, horizon, ode)?;

    let n = solution.grid.len();
    let mut tr = Trajectory {
        grid: solution.grid.clone(),
        capital: solution.values.clone(),
        ..Trajectory::default()
    };
    for (&tau, &k) in solution.grid.iter().zip(&solution.values) {
        let (i, c) = flows(law, tau, k)?;
        tr.investment.push(i);
        tr.consumption.push(c);
        tr.income.push(c + i);
    }

    let tol_scale = 1e-3 * controls.tolerances.identity_abs;
    let (mut yr, mut ir, mut cr) = (0.0, 0.0, 0.0);
    tr.realized_income.push(0.0);
    tr.realized_investment.push(0.0);
    tr.realized_consumption.push(0.0);
    for j in 0..n.saturating_sub(1) {
        let (a, b) = (solution.grid[j], solution.grid[j + 1]);
        let capital = |tau: f64| solution.hermite(j, tau);
        let tol = |x: &[f64]| tol_scale * (b - a) * (1.0 + x[j].abs() + x[j + 1].abs());
        let flow_at = |tau: f64, pick: fn((f64, f64)) -> f64| -> f64 {
            flows(law, tau, capital(tau)).map(pick).unwrap_or(f64::NAN)
        };
        ir += quadrature(|t| flow_at(t, |(i, _)| i), a, b, tol(&tr.investment))?;
        cr += quadrature(|t| flow_at(t, |(_, c)| c), a, b, tol(&tr.consumption))?;
        yr += quadrature(|t| flow_at(t, |(i, c)| i + c), a, b, tol(&tr.income))?;
        tr.realized_income.push(yr);
        tr.realized_investment.push(ir);
        tr.realized_consumption.push(cr);
    }
    tr.realized_capital = tr.realized_investment.clone();
    Ok(Run {
        trajectory: tr,
        solution,
    })
}

/// `(I, C)` at one point; `Y` is formed as `C + I` by the caller.
fn flows<L: CapitalLaw + ?Sized>(law: &L, tau: f64, k: f64) -> Result<(f64, f64)> {
    let i = law.investment(tau, k)?;
    let mu = law.share(tau)?;
    Ok((i, i * (1.0 - mu) / mu))
}

/// Crisis report for a simulated run. When the guard tripped the method is
/// `integrator-guard`; the crisis time is still the analytic one if known.
pub(crate) fn crisis_for_run<L: CapitalLaw + ?Sized>(
    variant: Variant,
    law: &L,
    analytic: Option<(f64, CrisisMethod)>,
    run: &Run,
    horizon: f64,
) -> CrisisReport {
    let last = run.solution.last_time();
    let mut report = match (run.solution.stop, analytic) {
        (StopReason::GuardTripped, Some((t, _))) => {
            CrisisReport::at(variant, CrisisMethod::IntegratorGuard, t, horizon)
        }
        (StopReason::GuardTripped, None) => {
            CrisisReport::at(variant, CrisisMethod::IntegratorGuard, last, horizon)
        }
        (StopReason::ReachedHorizon, Some((t, method))) => {
            CrisisReport::at(variant, method, t, horizon)
        }
        (StopReason::ReachedHorizon, None) => {
            CrisisReport::none(variant, CrisisMethod::IntegratorGuard, horizon)
        }
    };
    report.denominator_margin = Some(law.denominator(last));
    if run.solution.stop == StopReason::GuardTripped {
        report.last_safe_time = Some(last);
    }
    report
}
