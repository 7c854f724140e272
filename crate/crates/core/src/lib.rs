//! Simulation and forecasting for Harrod-type growth models.
//!
//! The classical reading of the model couples a discrete balance `K = nu Y`
//! with a continuous capital equation and ends in endless exponential growth.
//! Read consistently in continuous time, the same premises give
//! `K(tau) = K0 / (1 - sigma tau)`, which blows up at `tau = nu / mu`. This crate
//! evaluates the closed forms of every variant, integrates their ODEs
//! independently, detects the finite-time crisis and calibrates crisis times
//! from observed capital.
//!
//! ```
//! use harrod::{continuous, make_params, Controls};
//!
//! let params = make_params(0.5, 10.0, 1.0)?;
//! let run = continuous::simulate(&params, 25.0, &Controls::default())?;
//! assert_eq!(run.crisis.crisis_time, Some(20.0));
//! assert!(run.crisis.guard_tripped());
//! # Ok::<(), harrod::Error>(())
//! ```
//!
//! Modules:
//!
//! - [`domain`]: parameters, trajectories, crisis reports, scenario configs
//! - [`numerics`]: integrator, quadrature, root finding, constrained fitting
//! - [`discrete`]: the yearly difference model and its accounting audit
//! - [`continuous`]: closed forms, simulation and milestones of the corrected model
//! - [`extensions`]: generalized law, variable share, amortization, cumulative effect
//! - [`calibration`]: `nu` estimation, growth-law fitting and crisis extrapolation

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod continuous;
pub mod discrete;
pub mod domain;
mod dynamics;
mod error;
pub mod extensions;
pub mod numerics;

pub use domain::{
    make_params, Channel, Controls, CrisisMethod, CrisisReport, GrowthLaw, ModelParams, MuSchedule,
    OutputKind, ScenarioConfig, Tolerances, Trajectory, Variant,
};
pub use error::{Error, Result};

// Book chapters are compiled as doctests so their snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/discrete.md")]
    mod discrete {}
    #[doc = include_str!("../../../book/src/continuous.md")]
    mod continuous {}
    #[doc = include_str!("../../../book/src/crisis.md")]
    mod crisis {}
    #[doc = include_str!("../../../book/src/extensions.md")]
    mod extensions {}
    #[doc = include_str!("../../../book/src/calibration.md")]
    mod calibration {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
