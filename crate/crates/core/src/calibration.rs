//! Identification from observed series: the `nu` estimate from the income
//! threshold `Y0 / (1 - mu)^2`, growth-law fitting from capital observations,
//! and extrapolation of the fitted law to its crisis.

use crate::domain::{CrisisReport, GrowthLaw};
use crate::error::{Error, Result};
use crate::extensions::law_crisis;
use crate::numerics::{fit_constrained_polynomial, ConstrainedFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Capital,
    Income,
}

/// Observed `(tau, value)` samples with strictly increasing positive times and
/// positive values; at least three of them.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedSeries {
    samples: Vec<(f64, f64)>,
    kind: SeriesKind,
}

impl ObservedSeries {
    pub fn new(samples: Vec<(f64, f64)>, kind: SeriesKind) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InsufficientObservation(format!(
                "{} samples, at least 3 required",
                samples.len()
            )));
        }
        if let Some(&(t, v)) = samples
            .iter()
            .find(|&&(t, v)| !(t > 0.0 && t.is_finite() && v > 0.0 && v.is_finite()))
        {
            return Err(Error::invalid(
                "observations",
                format!("sample ({t}, {v}) needs positive finite time and value"),
            ));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::invalid(
                "observations",
                "times must be strictly increasing",
            ));
        }
        Ok(ObservedSeries { samples, kind })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }
}

/// Estimates `nu` as the first time observed income reaches `y0 / (1 - mu)^2`,
/// interpolating linearly between the bracketing samples.
pub fn estimate_nu(observed: &ObservedSeries, mu: f64, y0: f64) -> Result<f64> {
    if observed.kind != SeriesKind::Income {
        return Err(Error::invalid(
            "observations",
            "nu estimation needs an income series",
        ));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid("mu", format!("{mu} is not in (0, 1)")));
    }
    if !(y0 > 0.0) {
        return Err(Error::invalid("y0", format!("{y0} is not positive")));
    }
    let s = &observed.samples;
    if s.windows(2).any(|w| w[1].1 < w[0].1) {
        return Err(Error::invalid(
            "observations",
            "income must be non-decreasing",
        ));
    }
    let threshold = y0 / ((1.0 - mu) * (1.0 - mu));
    let k = s.partition_point(|&(_, v)| v < threshold);
    match k {
        _ if k == s.len() => Err(Error::InsufficientObservation(format!(
            "income never reaches the threshold {threshold}"
        ))),
        _ if s[k].1 == threshold => Ok(s[k].0),
        0 => Err(Error::InsufficientObservation(format!(
            "income already exceeds the threshold {threshold} at the first sample"
        ))),
        _ => {
            let ((t0, v0), (t1, v1)) = (s[k - 1], s[k]);
            Ok(t0 + (threshold - v0) / (v1 - v0) * (t1 - t0))
        }
    }
}

/// Fits `f` of the given degree to capital observations through the exact
/// inversion `f(tau_i) = (1 - k0/K_i) / sigma`.
pub fn fit_growth_law(
    observed: &ObservedSeries,
    sigma: f64,
    k0: f64,
    degree: usize,
) -> Result<ConstrainedFit> {
    if observed.kind != SeriesKind::Capital {
        return Err(Error::invalid(
            "observations",
            "growth-law fitting needs a capital series",
        ));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid("sigma", format!("{sigma} is not positive")));
    }
    if !(k0 > 0.0 && k0.is_finite()) {
        return Err(Error::invalid("k0", format!("{k0} is not positive")));
    }
    let points: Vec<(f64, f64)> = observed
        .samples
        .iter()
        .map(|&(t, k)| (t, (1.0 - k0 / k) / sigma))
        .collect();
    fit_constrained_polynomial(&points, degree)
}

/// Crisis time of a fitted law, flagged as extrapolated.
pub fn extrapolate_crisis(law: &GrowthLaw, sigma: f64, root_abs: f64) -> Result<CrisisReport> {
    let mut report = law_crisis(law, sigma, 1.0 / sigma, root_abs)?;
    report.extrapolated = true;
    Ok(report)
}
