//! Crisis and milestone summaries, as prose and as `key=value` lines.

use std::fmt::Write as _;

use harrod::continuous::Milestones;
use harrod::extensions::Discrepancy;
use harrod::{CrisisReport, Variant};

use crate::csv::sci;

/// Everything a report needs from one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub variant: Variant,
    pub horizon: f64,
    pub crisis: CrisisReport,
    pub milestones: Option<Milestones>,
    /// `(closed form trusted, discrepancy against it)` for extension variants.
    pub closed_form: Option<(bool, Option<Discrepancy>)>,
    pub rows: usize,
    pub last_tau: f64,
    pub last_capital: f64,
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), sci)
}

pub fn machine(s: &Summary) -> String {
    let c = &s.crisis;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("variant", s.variant.to_string());
    kv("horizon", sci(s.horizon));
    kv("crisis_time", opt(c.crisis_time));
    kv("method", c.method.name().to_string());
    kv("within_horizon", c.within(s.horizon).to_string());
    kv("search_limit", sci(c.search_limit));
    kv("last_safe_time", opt(c.last_safe_time));
    kv("denominator_margin", opt(c.denominator_margin));
    kv("extrapolated", c.extrapolated.to_string());
    if let Some(m) = &s.milestones {
        kv("balance_time", sci(m.balance_time));
        kv("reformat_time", sci(m.reformat_time));
        kv(
            "nu_boundary_max_relative_error",
            sci(m.checks.max_relative_error()),
        );
    }
    if let Some((trusted, d)) = &s.closed_form {
        kv("closed_form_available", trusted.to_string());
        if let Some(d) = d {
            kv("closed_form_max_relative", sci(d.max_relative));
            kv(
                "closed_form_points",
                format!("{}/{}", d.finite_points, d.compared_points),
            );
        }
    }
    kv("rows", s.rows.to_string());
    kv("last_tau", sci(s.last_tau));
    kv("last_K", sci(s.last_capital));
    out
}

pub fn text(s: &Summary) -> String {
    let c = &s.crisis;
    let mut out = String::new();
    let _ = writeln!(out, "variant {} over tau in [0, {}]", s.variant, s.horizon);
    match c.crisis_time {
        None => {
            let _ = writeln!(out, "no crisis up to tau = {}", c.search_limit);
        }
        Some(t) => {
            let place = if c.within(s.horizon) {
                "inside"
            } else {
                "beyond"
            };
            let _ = writeln!(
                out,
                "crisis at tau = {t} ({}), {place} the horizon",
                c.method.name()
            );
        }
    }
    if let Some(t) = c.last_safe_time {
        let _ = writeln!(
            out,
            "integration stopped at tau = {t}, denominator {}",
            opt(c.denominator_margin)
        );
    }
    if let Some(m) = &s.milestones {
        let _ = writeln!(
            out,
            "realized income equals capital at tau = {}",
            m.balance_time
        );
        let _ = writeln!(
            out,
            "realized consumption equals K0 at tau = {}",
            m.reformat_time
        );
        let _ = writeln!(
            out,
            "K, I, Y at tau = nu: {}, {}, {} (largest relative deviation from K0/(1-mu), I0/(1-mu)^2, Y0/(1-mu)^2: {:.1e})",
            m.checks.capital,
            m.checks.investment,
            m.checks.income,
            m.checks.max_relative_error()
        );
    }
    if let Some((trusted, Some(d))) = &s.closed_form {
        let kind = if *trusted {
            "closed form"
        } else {
            "printed form (not trusted)"
        };
        let _ = writeln!(
            out,
            "{kind}: max relative deviation {:.3e} over {} of {} points",
            d.max_relative, d.finite_points, d.compared_points
        );
    }
    let _ = writeln!(
        out,
        "{} rows, K({}) = {}",
        s.rows, s.last_tau, s.last_capital
    );
    out
}
