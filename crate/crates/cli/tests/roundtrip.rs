use proptest::prelude::*;

use harrod::{
    make_params, GrowthLaw, MuSchedule, OutputKind, ScenarioConfig, Tolerances, Trajectory, Variant,
};
use harrod_cli::csv::trajectory_csv;
use harrod_cli::{parse_scenario, render_scenario};

fn config() -> impl Strategy<Value = ScenarioConfig> {
    let variant = prop::sample::select(vec![
        Variant::LegacyExponential,
        Variant::Discrete,
        Variant::Continuous,
        Variant::Generalized,
        Variant::VariableMu,
        Variant::Amortized,
        Variant::Cumulative,
    ]);
    (
        variant,
        (0.01f64..0.99, 0.5f64..50.0, 1e-3f64..1e3),
        (0.1f64..100.0, 1e-4f64..1.0),
        (0.0f64..2.0, prop::collection::vec(-0.1f64..0.1, 0..4)),
        (1e-12f64..1e-4, 1e-12f64..1e-4, 1e-12f64..1e-4),
        prop::collection::btree_set(
            prop::sample::select(vec![OutputKind::Csv, OutputKind::Report, OutputKind::Svg]),
            0..3,
        ),
        prop::collection::vec((0.1f64..5.0, 0.05f64..0.95), 0..4),
    )
        .prop_map(
            |(
                variant,
                (mu, nu, k0),
                (horizon, max_step),
                (rate, coeffs),
                (a, b, c),
                outputs,
                steps,
            )| {
                let mut cfg = ScenarioConfig::new(variant, make_params(mu, nu, k0).unwrap());
                cfg.horizon = horizon;
                cfg.max_step = max_step;
                cfg.tolerances = Tolerances {
                    ode_rel: a,
                    root_abs: b,
                    identity_abs: c,
                };
                cfg.outputs = outputs;
                match variant {
                    Variant::Amortized => cfg.alpha = Some(rate),
                    Variant::Cumulative => cfg.rho = Some(rate),
                    Variant::Generalized => cfg.growth_law = Some(GrowthLaw::new(coeffs).unwrap()),
                    Variant::VariableMu => {
                        let mut t = 0.0;
                        let mut table = vec![(0.0, mu)];
                        for (dt, v) in steps {
                            t += dt;
                            table.push((t, v));
                        }
                        cfg.mu_schedule = Some(MuSchedule::Piecewise(table));
                    }
                    _ => {}
                }
                cfg
            },
        )
}

proptest! {
    #[test]
    fn scenario_survives_render_and_parse(cfg in config()) {
        let text = render_scenario(&cfg);
        prop_assert_eq!(parse_scenario(&text).unwrap(), cfg);
    }

    #[test]
    fn csv_reproduces_twelve_digits(values in prop::collection::vec(-1e6f64..1e6, 1..20)) {
        let grid: Vec<f64> = (0..values.len()).map(|j| j as f64 * 0.37).collect();
        let tr = Trajectory {
            grid,
            capital: values.clone(),
            investment: values.clone(),
            income: values.clone(),
            consumption: values.clone(),
            realized_income: values.clone(),
            realized_capital: values.clone(),
            realized_consumption: values.clone(),
            realized_investment: values.clone(),
        };
        let text = trajectory_csv(&tr);
        for (line, v) in text.lines().skip(1).zip(&values) {
            let parsed: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            for &x in &parsed[1..] {
                prop_assert!((x - v).abs() <= 5e-12 * v.abs());
            }
        }
    }
}

#[test]
fn polynomial_schedule_round_trip() {
    let mut cfg = ScenarioConfig::new(Variant::VariableMu, make_params(0.5, 10.0, 1.0).unwrap());
    cfg.mu_schedule = Some(MuSchedule::Polynomial(vec![0.5, 0.01, -1e-4]));
    assert_eq!(parse_scenario(&render_scenario(&cfg)).unwrap(), cfg);
}
