//! The `audit` and `calibrate` commands.

use std::fmt::Write as _;

use harrod::calibration::{extrapolate_crisis, fit_growth_law, ObservedSeries, SeriesKind};
use harrod::continuous::{closed_form_state, dimensional_audit};
use harrod::discrete::{
    consistency_audit, discrete_approx, discrete_exact, geometric_residual, DiscreteSolution,
    InvestmentTiming,
};
use harrod::{Error, Result, ScenarioConfig};

use crate::csv::sci;

/// Divergence of the three readings at `n = round(1/sigma)`, the accounting
/// audit under both investment timings and the balance relation `K = nu Y`
/// integrated over `[0, tau]`.
pub fn audit_report(config: &ScenarioConfig) -> Result<String> {
    let p = &config.params;
    let n = (1.0 / p.sigma()).round().max(1.0) as usize;
    let mut out = String::new();
    let mut kv = |k: String, v: String| {
        let _ = writeln!(out, "{k}={v}");
    };

    kv("divergence.n".into(), n.to_string());
    kv(
        "divergence.discrete_exact".into(),
        sci(discrete_exact(p, n).capital[n]),
    );
    kv(
        "divergence.discrete_approx".into(),
        sci(discrete_approx(p, n).capital[n]),
    );
    let continuous = match closed_form_state(p, n as f64) {
        Ok(s) => sci(s.capital),
        Err(Error::PastCrisis { .. }) => "singular".into(),
        Err(e) => return Err(e),
    };
    kv("divergence.continuous".into(), continuous);

    let mut years = vec![1, n.div_ceil(2), n];
    years.dedup();
    for &year in &years {
        for (sol, sname) in [
            (DiscreteSolution::Exact, "exact"),
            (DiscreteSolution::Approx, "approx"),
        ] {
            for (timing, tname) in [
                (InvestmentTiming::PriorCapital, "prior_capital"),
                (InvestmentTiming::CurrentCapital, "current_capital"),
            ] {
                let a = consistency_audit(p, year, sol, timing)?;
                kv(
                    format!("consistency.n{year}.{sname}.{tname}.residual"),
                    sci(a.residual),
                );
            }
        }
        kv(
            format!("consistency.n{year}.geometric_closed_form"),
            sci(geometric_residual(p, year)),
        );
    }

    for tau in [0.5 * p.nu(), p.nu()] {
        if tau >= p.crisis_time() {
            continue;
        }
        let d = dimensional_audit(p, tau, config.tolerances.identity_abs)?;
        let key = format!("dimensional.tau{}", sci(tau));
        kv(format!("{key}.capital"), sci(d.capital));
        kv(format!("{key}.balance"), sci(d.balance));
        kv(format!("{key}.relative_mismatch"), sci(d.relative_mismatch));
        kv(format!("{key}.holds"), d.holds.to_string());
    }
    Ok(out)
}

/// Fits the growth law to capital observations and extrapolates its crisis.
pub fn calibrate_report(
    samples: Vec<(f64, f64)>,
    sigma: f64,
    k0: f64,
    degree: usize,
) -> Result<String> {
    let observed = ObservedSeries::new(samples, SeriesKind::Capital)?;
    let fit = fit_growth_law(&observed, sigma, k0, degree)?;
    let crisis = extrapolate_crisis(&fit.law, sigma, 1e-9)?;
    let coefficients: Vec<String> = fit.law.coefficients().iter().map(|a| sci(*a)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "degree={degree}");
    let _ = writeln!(out, "coefficients={}", coefficients.join(","));
    let _ = writeln!(out, "residual_norm={}", sci(fit.residual_norm));
    let _ = writeln!(
        out,
        "crisis_time={}",
        crisis.crisis_time.map_or_else(|| "none".into(), sci)
    );
    let _ = writeln!(out, "method={}", crisis.method.name());
    let _ = writeln!(out, "search_limit={}", sci(crisis.search_limit));
    let _ = writeln!(out, "extrapolated={}", crisis.extrapolated);
    Ok(out)
}
