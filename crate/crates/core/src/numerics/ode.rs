use crate::error::{Error, Result};

/// Instantaneous relative growth rate `r(tau)` of a linear ODE `dK/dtau = r K`.
///
/// Models with a finite-time singularity also expose the denominator whose
/// vanishing makes the rate blow up; the integrator stops before it drops
/// below the configured floor.
pub trait RateFunction {
    fn rate(&self, tau: f64) -> Result<f64>;

    fn denominator(&self, _tau: f64) -> Option<f64> {
        None
    }
}

impl<F> RateFunction for F
where
    F: Fn(f64) -> f64,
{
    fn rate(&self, tau: f64) -> Result<f64> {
        Ok(self(tau))
    }
}

/// A rate paired with its blow-up denominator.
#[derive(Debug, Clone, Copy)]
pub struct Guarded<R, D> {
    pub rate: R,
    pub denominator: D,
}

impl<R, D> RateFunction for Guarded<R, D>
where
    R: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn rate(&self, tau: f64) -> Result<f64> {
        Ok((self.rate)(tau))
    }

    fn denominator(&self, tau: f64) -> Option<f64> {
        Some((self.denominator)(tau))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeControls {
    /// Bound on the step-doubling local error estimate, relative to |K|.
    pub rel_tol: f64,
    pub max_step: f64,
    pub denominator_floor: f64,
}

impl Default for OdeControls {
    fn default() -> Self {
        OdeControls {
            rel_tol: 1e-8,
            max_step: 0.01,
            denominator_floor: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ReachedHorizon,
    GuardTripped,
}

/// Accepted integration points with the slopes `dK/dtau` at each of them.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    pub stop: StopReason,
}

impl OdeSolution {
    pub fn last_time(&self) -> f64 {
        *self.grid.last().expect("solution holds the initial point")
    }

    pub fn last_value(&self) -> f64 {
        *self
            .values
            .last()
            .expect("solution holds the initial point")
    }

    /// Cubic Hermite interpolant between accepted points. `None` outside the
    /// integrated interval.
    pub fn interpolate(&self, tau: f64) -> Option<f64> {
        let (first, last) = (self.grid[0], self.last_time());
        if !(tau >= first && tau <= last) {
            return None;
        }
        let j = self
            .grid
            .partition_point(|&t| t <= tau)
            .clamp(1, self.grid.len().max(2) - 1);
        if self.grid.len() == 1 {
            return Some(self.values[0]);
        }
        Some(self.hermite(j - 1, tau))
    }

    /// Hermite interpolant on the interval starting at grid index `j`.
    pub fn hermite(&self, j: usize, tau: f64) -> f64 {
        let (t0, t1) = (self.grid[j], self.grid[j + 1]);
        let h = t1 - t0;
        let s = (tau - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.values[j]
            + h10 * h * self.slopes[j]
            + h01 * self.values[j + 1]
            + h11 * h * self.slopes[j + 1]
    }
}

/// Integrates `dK/dtau = r(tau) K`, `K(0) = k0`, up to `horizon`.
///
/// Classical fourth-order Runge-Kutta with step doubling: every step is taken
/// once at full width and once as two halves, and the difference estimates the
/// local error. Steps whose estimate exceeds `rel_tol * |K|` are halved;
/// accepted steps keep the two-half value. A proposed step whose end point has
/// a denominator below `denominator_floor` is halved as well, and once it
/// cannot advance any further the run ends with [`StopReason::GuardTripped`].
pub fn integrate_linear_ode<R>(
    rate: &R,
    k0: f64,
    horizon: f64,
    controls: OdeControls,
) -> Result<OdeSolution>
where
    R: RateFunction + ?Sized,
{
    if !(k0 > 0.0 && k0.is_finite()) {
        return Err(Error::invalid("k0", format!("{k0} is not positive")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::invalid(
            "horizon",
            format!("{horizon} is not positive"),
        ));
    }
    if !(controls.rel_tol > 0.0 && controls.max_step > 0.0 && controls.denominator_floor > 0.0) {
        return Err(Error::invalid(
            "controls",
            "tolerances and steps must be positive",
        ));
    }

    let floor = controls.denominator_floor;
    let blocked = |tau: f64| rate.denominator(tau).is_some_and(|d| !(d >= floor));
    let eval = |tau: f64| -> Result<f64> {
        let r = rate.rate(tau)?;
        if r.is_finite() {
            Ok(r)
        } else {
            Err(Error::NumericalDomain {
                tau,
                detail: format!("growth rate evaluated to {r}"),
            })
        }
    };
    let rk4 = |t: f64, y: f64, h: f64| -> Result<f64> {
        let k1 = eval(t)? * y;
        let k2 = eval(t + 0.5 * h)? * (y + 0.5 * h * k1);
        let k3 = eval(t + 0.5 * h)? * (y + 0.5 * h * k2);
        let k4 = eval(t + h)? * (y + h * k3);
        Ok(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    };

    let mut sol = OdeSolution {
        grid: vec![0.0],
        values: vec![k0],
        slopes: Vec::new(),
        stop: StopReason::ReachedHorizon,
    };
    if blocked(0.0) {
        sol.slopes.push(f64::NAN);
        sol.stop = StopReason::GuardTripped;
        return Ok(sol);
    }
    sol.slopes.push(eval(0.0)? * k0);

    let (mut t, mut y) = (0.0_f64, k0);
    let mut h = controls.max_step.min(horizon);
    while t < horizon {
        let min_step = 1e-13 * t.abs().max(1.0);
        let last = h >= horizon - t;
        let step = if last { horizon - t } else { h };
        let t_next = if last { horizon } else { t + step };

        if blocked(t_next) || blocked(t + 0.5 * step) {
            h = 0.5 * step;
            if h < min_step {
                sol.stop = StopReason::GuardTripped;
                break;
            }
            continue;
        }

        let full = rk4(t, y, step)?;
        let half = rk4(t, y, 0.5 * step)?;
        let double = rk4(t + 0.5 * step, half, 0.5 * step)?;
        let err = (double - full).abs() / 15.0;
        let bound = controls.rel_tol * double.abs();
        if !double.is_finite() {
            return Err(Error::NumericalDomain {
                tau: t_next,
                detail: "solution overflowed".into(),
            });
        }
        if err > bound {
            h = 0.5 * step;
            if h < min_step {
                return Err(Error::NumericalDomain {
                    tau: t,
                    detail: format!("step size underflow (error estimate {err:e})"),
                });
            }
            continue;
        }

        t = t_next;
        y = double;
        sol.grid.push(t);
        sol.values.push(y);
        sol.slopes.push(eval(t)? * y);
        if err * 32.0 < bound {
            h = (2.0 * h).min(controls.max_step);
        }
    }
    Ok(sol)
}
