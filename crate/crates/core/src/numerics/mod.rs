//! Numerical engine used both by the simulators and as an independent oracle
//! for every closed form: a guarded fourth-order integrator for scalar linear
//! ODEs, adaptive Simpson quadrature, a bracketing root finder with Newton
//! polish and a constrained polynomial least-squares fit.

mod lsq;
mod ode;
mod poly;
mod quad;
mod roots;

pub use lsq::{fit_constrained_polynomial, ConstrainedFit};
pub use ode::{integrate_linear_ode, Guarded, OdeControls, OdeSolution, RateFunction, StopReason};
pub use poly::Polynomial;
pub use quad::quadrature;
pub use roots::{find_root, find_root_newton};
