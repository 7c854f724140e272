//! Self-contained SVG line charts. Coordinates are printed with fixed
//! precision so identical trajectories give identical bytes.

use std::fmt::Write as _;

use harrod::{Channel, Error, Result, Trajectory};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 78.0;
const RIGHT: f64 = 120.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 44.0;
// Polylines keep at most this many vertices.
const MAX_POINTS: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlotOptions {
    /// Logarithmic vertical axis; non-positive samples are skipped.
    pub log_scale: bool,
}

fn color(channel: Channel) -> &'static str {
    match channel {
        Channel::Capital => "#1f77b4",
        Channel::Investment => "#d62728",
        Channel::Income => "#2ca02c",
        Channel::Consumption => "#ff7f0e",
        Channel::RealizedIncome => "#9467bd",
        Channel::RealizedCapital => "#8c564b",
        Channel::RealizedConsumption => "#7f7f7f",
    }
}

fn tick_label(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-2..1e4).contains(&a) {
        let s = format!("{x:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.2e}")
    }
}

// Six even ticks, or whole decades on a log axis.
fn value_ticks(lo: f64, hi: f64, log: bool) -> Vec<(f64, String)> {
    if !log {
        return (0..=5)
            .map(|k| {
                let v = lo + k as f64 / 5.0 * (hi - lo);
                (v, tick_label(v))
            })
            .collect();
    }
    let (first, last) = (lo.ceil() as i32, hi.floor() as i32);
    if first > last {
        return vec![(lo, tick_label(10f64.powf(lo)))];
    }
    let stride = ((last - first) / 6 + 1) as usize;
    (first..=last)
        .step_by(stride)
        .map(|k| (f64::from(k), format!("1e{k}")))
        .collect()
}

fn indices(n: usize) -> Vec<usize> {
    if n <= MAX_POINTS {
        return (0..n).collect();
    }
    let mut idx: Vec<usize> = (0..MAX_POINTS - 1)
        .map(|k| k * (n - 1) / (MAX_POINTS - 1))
        .collect();
    idx.push(n - 1);
    idx
}

/// Draws the selected channels against `tau`.
pub fn emit_plot(
    trajectory: &Trajectory,
    channels: &[Channel],
    options: PlotOptions,
) -> Result<String> {
    if channels.is_empty() {
        return Err(Error::Invalid {
            field: "channels".into(),
            reason: "at least one channel is required".into(),
        });
    }
    if trajectory.is_empty() {
        return Err(Error::Invalid {
            field: "trajectory".into(),
            reason: "nothing to plot".into(),
        });
    }
    let scale = |v: f64| if options.log_scale { v.log10() } else { v };
    let keep = |v: f64| v.is_finite() && (!options.log_scale || v > 0.0);

    let idx = indices(trajectory.len());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &c in channels {
        for &v in trajectory.series(c).iter().filter(|v| keep(**v)) {
            lo = lo.min(scale(v));
            hi = hi.max(scale(v));
        }
    }
    if !lo.is_finite() {
        return Err(Error::Invalid {
            field: "channels".into(),
            reason: "no plottable values".into(),
        });
    }
    if !options.log_scale {
        lo = lo.min(0.0);
    }
    if hi - lo < 1e-12 * hi.abs().max(1.0) {
        hi = lo + 1.0;
    }
    let t0 = trajectory.grid[0];
    let t1 = trajectory.last_time().unwrap_or(t0).max(t0 + 1e-12);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |t: f64| LEFT + (t - t0) / (t1 - t0) * pw;
    let py = |v: f64| TOP + (hi - v) / (hi - lo) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let t = t0 + k as f64 / 5.0 * (t1 - t0);
        let x = px(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ccc"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP,
            TOP + ph,
            TOP + ph + 16.0,
            tick_label(t)
        );
    }
    for (v, label) in value_ticks(lo, hi, options.log_scale) {
        let y = py(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ccc"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">tau</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 8.0
    );

    for (row, &c) in channels.iter().enumerate() {
        let series = trajectory.series(c);
        let points: Vec<String> = idx
            .iter()
            .filter(|&&j| keep(series[j]))
            .map(|&j| format!("{:.2},{:.2}", px(trajectory.grid[j]), py(scale(series[j]))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            color(c),
            points.join(" ")
        );
        let ly = TOP + 14.0 + 16.0 * row as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 18.0,
            color(c),
            lx + 24.0,
            ly + 4.0,
            c.label()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> Trajectory {
        let grid: Vec<f64> = (0..=10).map(f64::from).collect();
        let capital: Vec<f64> = grid.iter().map(|t| 1.0 + t).collect();
        Trajectory {
            capital: capital.clone(),
            investment: capital.clone(),
            income: capital.clone(),
            consumption: capital.clone(),
            realized_income: grid.clone(),
            realized_capital: grid.clone(),
            realized_consumption: grid.clone(),
            realized_investment: grid.clone(),
            grid,
        }
    }

    #[test]
    fn empty_channel_set_rejected() {
        assert!(emit_plot(&ramp(), &[], PlotOptions::default()).is_err());
    }

    #[test]
    fn deterministic_and_well_formed() {
        let a = emit_plot(&ramp(), &[Channel::Capital], PlotOptions::default()).unwrap();
        let b = emit_plot(&ramp(), &[Channel::Capital], PlotOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<polyline").count(), 1);
    }

    #[test]
    fn log_scale_skips_zero() {
        let svg = emit_plot(
            &ramp(),
            &[Channel::RealizedIncome],
            PlotOptions { log_scale: true },
        )
        .unwrap();
        let points = svg
            .split("points=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap();
        assert_eq!(points.split(' ').count(), 10);
    }

    #[test]
    fn decade_ticks() {
        let ticks = value_ticks(-1.3, 10.2, true);
        let labels: Vec<&str> = ticks.iter().map(|(_, l)| l.as_str()).collect();
        assert_eq!(labels, ["1e-1", "1e1", "1e3", "1e5", "1e7", "1e9"]);
        assert_eq!(value_ticks(0.0, 1.0, false).len(), 6);
    }

    #[test]
    fn decimation_keeps_endpoints() {
        let idx = indices(5000);
        assert_eq!(idx.len(), MAX_POINTS);
        assert_eq!((idx[0], *idx.last().unwrap()), (0, 4999));
        assert!(idx.windows(2).all(|w| w[1] > w[0]));
    }
}
