//! Flat `key = value` scenario files.
//!
//! ```text
//! # baseline run past the crisis
//! variant = continuous
//! mu = 0.5
//! nu = 10
//! k0 = 1
//! horizon = 25
//! outputs = csv,report,svg
//! ```
//!
//! `growth_law` lists `a_2, ..., a_N`; `mu_schedule` is one of `constant:v`,
//! `piecewise:t0:v0,t1:v1,...` or `poly:c0,c1,...`; `tolerances` takes any of
//! `ode_rel:x,root_abs:x,identity_abs:x`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use harrod::{
    make_params, Error, GrowthLaw, MuSchedule, OutputKind, Result, ScenarioConfig, Tolerances,
    Variant,
};

const KEYS: [&str; 12] = [
    "variant",
    "mu",
    "nu",
    "k0",
    "horizon",
    "max_step",
    "alpha",
    "rho",
    "growth_law",
    "mu_schedule",
    "outputs",
    "tolerances",
];

fn parse_error(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

fn number(s: &str) -> std::result::Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(x) => Err(format!("`{x}` is not finite")),
        Err(_) => Err(format!("malformed number `{}`", s.trim())),
    }
}

fn number_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(number).collect()
}

fn mu_schedule(s: &str) -> std::result::Result<MuSchedule, String> {
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `constant:`, `piecewise:` or `poly:`, got `{s}`"))?;
    match kind.trim() {
        "constant" => Ok(MuSchedule::Constant(number(body)?)),
        "poly" => Ok(MuSchedule::Polynomial(number_list(body)?)),
        "piecewise" => body
            .split(',')
            .map(|pair| {
                let (t, v) = pair
                    .split_once(':')
                    .ok_or_else(|| format!("breakpoint `{}` is not `time:value`", pair.trim()))?;
                Ok((number(t)?, number(v)?))
            })
            .collect::<std::result::Result<Vec<_>, String>>()
            .map(MuSchedule::Piecewise),
        other => Err(format!("unknown schedule kind `{other}`")),
    }
}

fn tolerances(s: &str) -> std::result::Result<Tolerances, String> {
    let mut tol = Tolerances::default();
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        let (name, value) = item
            .split_once(':')
            .ok_or_else(|| format!("tolerance `{}` is not `name:value`", item.trim()))?;
        let value = number(value)?;
        match name.trim() {
            "ode_rel" => tol.ode_rel = value,
            "root_abs" => tol.root_abs = value,
            "identity_abs" => tol.identity_abs = value,
            other => return Err(format!("unknown tolerance `{other}`")),
        }
    }
    Ok(tol)
}

/// Parses and validates a scenario document.
///
/// Errors name the offending line and key. Keys that are missing altogether
/// are reported at the line of `variant` (or line 0 when that is missing too).
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(parse_error(line, content, "expected `key = value`"));
        };
        let key = key.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(parse_error(line, key, "unknown key"));
        };
        if let Some((first, _)) = entries.insert(known, (line, value.trim())) {
            return Err(parse_error(
                line,
                key,
                format!("duplicate key, first set on line {first}"),
            ));
        }
    }

    let anchor = entries.get("variant").map_or(0, |(l, _)| *l);
    let field = |key: &str| entries.get(key).copied();
    let required =
        |key: &str| field(key).ok_or_else(|| parse_error(anchor, key, "missing required key"));
    let num = |key: &str| -> Result<Option<f64>> {
        field(key)
            .map(|(line, v)| number(v).map_err(|m| parse_error(line, key, m)))
            .transpose()
    };

    let (line, v) = required("variant")?;
    let variant: Variant = v
        .parse()
        .map_err(|e: Error| parse_error(line, "variant", e.to_string()))?;
    let mut values = [0.0; 3];
    for (slot, key) in values.iter_mut().zip(["mu", "nu", "k0"]) {
        required(key)?;
        *slot = num(key)?.unwrap_or_default();
    }
    let params =
        make_params(values[0], values[1], values[2]).map_err(|e| relocate(e, &entries, anchor))?;

    let mut config = ScenarioConfig::new(variant, params);
    if let Some(h) = num("horizon")? {
        config.horizon = h;
    }
    if let Some(s) = num("max_step")? {
        config.max_step = s;
    }
    config.alpha = num("alpha")?;
    config.rho = num("rho")?;
    if let Some((line, v)) = field("growth_law") {
        let coefficients = number_list(v).map_err(|m| parse_error(line, "growth_law", m))?;
        config.growth_law = Some(
            GrowthLaw::new(coefficients)
                .map_err(|e| parse_error(line, "growth_law", e.to_string()))?,
        );
    }
    if let Some((line, v)) = field("mu_schedule") {
        config.mu_schedule = Some(mu_schedule(v).map_err(|m| parse_error(line, "mu_schedule", m))?);
    }
    if let Some((line, v)) = field("tolerances") {
        config.tolerances = tolerances(v).map_err(|m| parse_error(line, "tolerances", m))?;
    }
    if let Some((line, v)) = field("outputs") {
        config.outputs = v
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(str::parse::<OutputKind>)
            .collect::<Result<_>>()
            .map_err(|e| parse_error(line, "outputs", e.to_string()))?;
    }
    config
        .validate()
        .map_err(|e| relocate(e, &entries, anchor))?;
    Ok(config)
}

// Turns a validation error into a parse error at the line of its field.
fn relocate(err: Error, entries: &BTreeMap<&str, (usize, &str)>, anchor: usize) -> Error {
    match err {
        Error::Invalid { field, reason } => {
            let line = entries.get(field.as_str()).map_or(anchor, |(l, _)| *l);
            parse_error(line, &field, reason)
        }
        other => other,
    }
}

/// Writes every field explicitly, so `parse_scenario(&render_scenario(c)) == c`.
pub fn render_scenario(config: &ScenarioConfig) -> String {
    let join = |xs: &[f64]| xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    let p = &config.params;
    let mut out = String::new();
    let _ = writeln!(out, "variant = {}", config.variant);
    let _ = writeln!(out, "mu = {}", p.mu());
    let _ = writeln!(out, "nu = {}", p.nu());
    let _ = writeln!(out, "k0 = {}", p.k0());
    let _ = writeln!(out, "horizon = {}", config.horizon);
    let _ = writeln!(out, "max_step = {}", config.max_step);
    if let Some(a) = config.alpha {
        let _ = writeln!(out, "alpha = {a}");
    }
    if let Some(r) = config.rho {
        let _ = writeln!(out, "rho = {r}");
    }
    if let Some(law) = &config.growth_law {
        let _ = writeln!(out, "growth_law = {}", join(law.coefficients()));
    }
    if let Some(s) = &config.mu_schedule {
        let body = match s {
            MuSchedule::Constant(v) => format!("constant:{v}"),
            MuSchedule::Polynomial(c) => format!("poly:{}", join(c)),
            MuSchedule::Piecewise(table) => format!(
                "piecewise:{}",
                table
                    .iter()
                    .map(|(t, v)| format!("{t}:{v}"))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        };
        let _ = writeln!(out, "mu_schedule = {body}");
    }
    let t = &config.tolerances;
    let _ = writeln!(
        out,
        "tolerances = ode_rel:{},root_abs:{},identity_abs:{}",
        t.ode_rel, t.root_abs, t.identity_abs
    );
    let outputs: Vec<&str> = config.outputs.iter().map(|o| o.name()).collect();
    let _ = writeln!(out, "outputs = {}", outputs.join(","));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(text: &str) -> (usize, String, String) {
        match parse_scenario(text) {
            Err(Error::Parse { line, key, message }) => (line, key, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_applied() {
        let c = parse_scenario("variant=continuous\nmu=0.5\nnu=10\nk0=1").unwrap();
        assert_eq!(c.params.sigma(), 0.05);
        assert!((c.horizon - 19.0).abs() < 1e-12);
        assert_eq!(c.max_step, 0.01);
        assert_eq!(c.tolerances, Tolerances::default());
        assert_eq!(
            c.outputs.iter().copied().collect::<Vec<_>>(),
            vec![OutputKind::Csv, OutputKind::Report]
        );
    }

    #[test]
    fn cumulative_carries_rho() {
        let c = parse_scenario("variant=cumulative\nmu=0.5\nnu=10\nk0=1\nrho=0.1").unwrap();
        assert_eq!(c.rho, Some(0.1));
    }

    #[test]
    fn cumulative_without_rho() {
        let (line, key, message) = parse_err("variant=cumulative\nmu=0.5\nnu=10\nk0=1");
        assert_eq!((line, key.as_str()), (1, "rho"));
        assert!(message.contains("required"), "{message}");
    }

    #[test]
    fn errors_name_line_and_key() {
        let (line, key, _) = parse_err("variant=continuous\nmu=0.5\n\n# note\nnu=ten\nk0=1");
        assert_eq!((line, key.as_str()), (5, "nu"));
        let (line, key, _) = parse_err("variant=continuous\nmu=0.5\nnu=10\nk0=1\nspeed=3");
        assert_eq!((line, key.as_str()), (5, "speed"));
        let (line, key, _) = parse_err("variant=continuous\nmu=1.5\nnu=10\nk0=1");
        assert_eq!((line, key.as_str()), (2, "mu"));
        let (line, key, _) = parse_err("variant=continuous\nmu=0.5\nk0=1");
        assert_eq!((line, key.as_str()), (1, "nu"));
        let (line, key, _) = parse_err("variant=continuous\nmu=0.5\nnu=10\nk0=1\nmu=0.4");
        assert_eq!((line, key.as_str()), (5, "mu"));
        let (line, key, _) = parse_err("variant=continuous\nmu=0.5\nnu=10\nk0=1\nalpha=0.1");
        assert_eq!((line, key.as_str()), (5, "alpha"));
        let (line, key, _) = parse_err("variant=continuous\nmu=0.5\nnu=10\nk0=1\noutputs=csv,pdf");
        assert_eq!((line, key.as_str()), (5, "outputs"));
        let (_, key, _) = parse_err("mu=0.5\nnu=10\nk0=1");
        assert_eq!(key, "variant");
    }

    #[test]
    fn structured_values() {
        let c = parse_scenario(
            "variant = variable-mu   # piecewise share\n\
             mu = 0.5\nnu = 10\nk0 = 1\n\
             mu_schedule = piecewise:0:0.5, 5:0.25\n\
             tolerances = root_abs:1e-12\n\
             outputs = svg",
        )
        .unwrap();
        assert_eq!(
            c.mu_schedule,
            Some(MuSchedule::Piecewise(vec![(0.0, 0.5), (5.0, 0.25)]))
        );
        assert_eq!(c.tolerances.root_abs, 1e-12);
        assert_eq!(c.tolerances.ode_rel, 1e-8);
        assert_eq!(c.outputs.len(), 1);

        let g =
            parse_scenario("variant=generalized\nmu=0.5\nnu=10\nk0=1\ngrowth_law=-0.01").unwrap();
        assert_eq!(g.growth_law.unwrap().coefficients(), &[-0.01]);
    }

    #[test]
    fn render_round_trips() {
        let text = "variant=variable-mu\nmu=0.5\nnu=10\nk0=2\nhorizon=12.5\n\
                    mu_schedule=poly:0.5,0.01\ntolerances=ode_rel:1e-10";
        let c = parse_scenario(text).unwrap();
        assert_eq!(parse_scenario(&render_scenario(&c)).unwrap(), c);
    }
}
