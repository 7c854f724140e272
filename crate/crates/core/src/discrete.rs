//! The model in its difference form: yearly capital formation
//! `K_n = K_0 + I_1 + ... + I_n` with `I_n = mu Y_n` and `K_n = nu Y_n`.
//!
//! Closed forms and recurrences are computed independently so that each checks
//! the other. [`consistency_audit`] exposes how the two possible timings of
//! investment make the geometric-sum accounting fail for the exact solution.

use crate::domain::{ModelParams, Trajectory};
use crate::error::{Error, Result};

/// Yearly series indexed by `n = 0 ..= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSeries {
    pub capital: Vec<f64>,
    pub income: Vec<f64>,
    pub investment: Vec<f64>,
    pub consumption: Vec<f64>,
}

impl DiscreteSeries {
    pub fn n_max(&self) -> usize {
        self.capital.len() - 1
    }

    fn from_capital(params: &ModelParams, capital: Vec<f64>, investment: Vec<f64>) -> Self {
        let income: Vec<f64> = capital.iter().map(|k| k / params.nu()).collect();
        let consumption = income.iter().zip(&investment).map(|(y, i)| y - i).collect();
        DiscreteSeries {
            capital,
            income,
            investment,
            consumption,
        }
    }

    /// Trajectory on the integer grid; realized series are cumulative sums over
    /// years `1 ..= n`.
    pub fn to_trajectory(&self) -> Trajectory {
        let n = self.capital.len();
        let running = |xs: &[f64]| -> Vec<f64> {
            let mut acc = 0.0;
            std::iter::once(0.0)
                .chain(xs[1..].iter().map(|x| {
                    acc += x;
                    acc
                }))
                .collect()
        };
        let income: Vec<f64> = self
            .consumption
            .iter()
            .zip(&self.investment)
            .map(|(c, i)| c + i)
            .collect();
        let realized_capital = running(&self.investment);
        Trajectory {
            grid: (0..n).map(|j| j as f64).collect(),
            capital: self.capital.clone(),
            investment: self.investment.clone(),
            realized_income: running(&income),
            income,
            consumption: self.consumption.clone(),
            realized_investment: realized_capital.clone(),
            realized_capital,
            realized_consumption: running(&self.consumption),
        }
    }
}

/// `K_n = K_0 (1 + sigma)^n`, with income and investment scaled alike.
pub fn discrete_exact(params: &ModelParams, n_max: usize) -> DiscreteSeries {
    let growth = 1.0 + params.sigma();
    closed_form(params, n_max, |n| growth.powi(n as i32))
}

/// The small-sigma replacement `ln(1 + sigma) ~ sigma`: `K_n = K_0 e^(sigma n)`.
pub fn discrete_approx(params: &ModelParams, n_max: usize) -> DiscreteSeries {
    let sigma = params.sigma();
    closed_form(params, n_max, |n| (sigma * n as f64).exp())
}

fn closed_form(
    params: &ModelParams,
    n_max: usize,
    factor: impl Fn(usize) -> f64,
) -> DiscreteSeries {
    let mut series = DiscreteSeries {
        capital: Vec::with_capacity(n_max + 1),
        income: Vec::with_capacity(n_max + 1),
        investment: Vec::with_capacity(n_max + 1),
        consumption: Vec::with_capacity(n_max + 1),
    };
    for n in 0..=n_max {
        let g = factor(n);
        let (k, y, i) = (params.k0() * g, params.y0() * g, params.i0() * g);
        series.capital.push(k);
        series.income.push(y);
        series.investment.push(i);
        series.consumption.push(y - i);
    }
    series
}

/// When the investment of year `n` is determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvestmentTiming {
    /// `I_n = sigma K_(n-1)`, which reproduces `(1 + sigma)^n`.
    PriorCapital,
    /// `I_n = sigma K_n`, the reading behind the geometric-sum argument; gives
    /// `K_n = K_0 / (1 - sigma)^n`.
    CurrentCapital,
}

/// Rolls out `K_n = K_(n-1) + I_n` year by year.
pub fn recurrence_simulate(
    params: &ModelParams,
    n_max: usize,
    timing: InvestmentTiming,
) -> Result<DiscreteSeries> {
    let sigma = params.sigma();
    if timing == InvestmentTiming::CurrentCapital && sigma >= 1.0 {
        return Err(Error::DivergentRecurrence { sigma });
    }
    let mut capital = Vec::with_capacity(n_max + 1);
    let mut investment = Vec::with_capacity(n_max + 1);
    capital.push(params.k0());
    investment.push(params.i0());
    let mut k = params.k0();
    for _ in 1..=n_max {
        let i = match timing {
            InvestmentTiming::PriorCapital => sigma * k,
            // K_n (1 - sigma) = K_(n-1)
            InvestmentTiming::CurrentCapital => sigma * k / (1.0 - sigma),
        };
        k += i;
        capital.push(k);
        investment.push(i);
    }
    Ok(DiscreteSeries::from_capital(params, capital, investment))
}

/// Which closed form the audit takes its capital path from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscreteSolution {
    /// `K_0 (1 + sigma)^n`.
    Exact,
    /// `K_0 e^(sigma n)`.
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditOutcome {
    pub accumulated_investment: f64,
    pub capital_minus_k0: f64,
    /// `K_n - K_0 - sum_(j=1..n) I_j`; zero when the accounting closes.
    pub residual: f64,
}

/// Brute-force check of `K_n = K_0 + sum I_j` along a closed-form path.
pub fn consistency_audit(
    params: &ModelParams,
    n: usize,
    solution: DiscreteSolution,
    timing: InvestmentTiming,
) -> Result<AuditOutcome> {
    if n == 0 {
        return Err(Error::invalid("n", "the audit needs at least one year"));
    }
    let path = match solution {
        DiscreteSolution::Exact => discrete_exact(params, n),
        DiscreteSolution::Approx => discrete_approx(params, n),
    };
    let k = &path.capital;
    let sigma = params.sigma();
    let accumulated_investment: f64 = (1..=n)
        .map(|j| match timing {
            InvestmentTiming::PriorCapital => sigma * k[j - 1],
            InvestmentTiming::CurrentCapital => sigma * k[j],
        })
        .sum();
    let capital_minus_k0 = k[n] - params.k0();
    Ok(AuditOutcome {
        accumulated_investment,
        capital_minus_k0,
        residual: capital_minus_k0 - accumulated_investment,
    })
}

/// Closed form of the audit residual for the exact path with current-capital
/// timing: `-sigma K_0 ((1 + sigma)^n - 1)`.
pub fn geometric_residual(params: &ModelParams, n: usize) -> f64 {
    let sigma = params.sigma();
    -sigma * params.k0() * ((1.0 + sigma).powi(n as i32) - 1.0)
}
