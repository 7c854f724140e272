//! Dispatch from a scenario to the model modules.

use harrod::{continuous, discrete, extensions};
use harrod::{
    Channel, CrisisMethod, CrisisReport, OutputKind, Result, ScenarioConfig, Trajectory, Variant,
};

use crate::csv::trajectory_csv;
use crate::plot::{emit_plot, PlotOptions};
use crate::report::{self, Summary};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_CRISIS: u8 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutputs {
    pub trajectory_csv: String,
    pub report_text: String,
    pub report_machine: String,
    pub plot_svg: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub outputs: RunOutputs,
    pub trajectory: Trajectory,
    pub summary: Summary,
    /// [`EXIT_CRISIS`] when the crisis falls inside the horizon, else [`EXIT_OK`].
    pub status: u8,
}

/// Runs a validated scenario. Errors map to [`EXIT_ERROR`] in the binary.
///
/// The discrete variant runs years `0 ..= floor(horizon)`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioRun> {
    config.validate()?;
    let params = &config.params;
    let controls = config.controls();
    let horizon = config.horizon;
    let mut milestones = None;
    let mut closed_form = None;

    let (trajectory, crisis) = match config.variant {
        Variant::LegacyExponential => (
            continuous::legacy_exponential(params, horizon, config.max_step)?,
            CrisisReport::none(config.variant, CrisisMethod::Analytic, horizon),
        ),
        Variant::Discrete => {
            let n_max = horizon.floor() as usize;
            if n_max == 0 {
                return Err(harrod::Error::Invalid {
                    field: "horizon".into(),
                    reason: "the discrete model needs at least one year".into(),
                });
            }
            (
                discrete::discrete_exact(params, n_max).to_trajectory(),
                CrisisReport::none(config.variant, CrisisMethod::Analytic, horizon),
            )
        }
        Variant::Continuous => {
            let sim = continuous::simulate(params, horizon, &controls)?;
            milestones = Some(continuous::milestones(params, &config.tolerances)?);
            (sim.trajectory, sim.crisis)
        }
        variant => {
            let outcome = match variant {
                Variant::Generalized => extensions::generalized_simulate(
                    params,
                    config.growth_law.as_ref().expect("validated"),
                    horizon,
                    &controls,
                )?,
                Variant::VariableMu => extensions::variable_mu_simulate(
                    params,
                    config.mu_schedule.as_ref().expect("validated"),
                    horizon,
                    &controls,
                )?,
                Variant::Amortized => extensions::amortized_simulate(
                    params,
                    config.alpha.expect("validated"),
                    horizon,
                    &controls,
                )?,
                Variant::Cumulative => extensions::cumulative_simulate(
                    params,
                    config.rho.expect("validated"),
                    horizon,
                    &controls,
                )?,
                _ => unreachable!("handled above"),
            };
            closed_form = Some((
                outcome.closed_form_available,
                outcome.closed_form_discrepancy,
            ));
            (outcome.trajectory, outcome.crisis)
        }
    };
    trajectory.check()?;

    let summary = Summary {
        variant: config.variant,
        horizon,
        crisis,
        milestones,
        closed_form,
        rows: trajectory.len(),
        last_tau: trajectory.last_time().unwrap_or(0.0),
        last_capital: trajectory.last(Channel::Capital).unwrap_or(f64::NAN),
    };
    let plot_svg = if config.outputs.contains(&OutputKind::Svg) {
        let options = PlotOptions {
            log_scale: summary.crisis.guard_tripped(),
        };
        Some(emit_plot(
            &trajectory,
            &[Channel::Capital, Channel::Income, Channel::Investment],
            options,
        )?)
    } else {
        None
    };
    let status = if summary.crisis.within(horizon) {
        EXIT_CRISIS
    } else {
        EXIT_OK
    };
    Ok(ScenarioRun {
        outputs: RunOutputs {
            trajectory_csv: trajectory_csv(&trajectory),
            report_text: report::text(&summary),
            report_machine: report::machine(&summary),
            plot_svg,
        },
        trajectory,
        summary,
        status,
    })
}
