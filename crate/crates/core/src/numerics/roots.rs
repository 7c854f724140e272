use crate::error::{Error, Result};

/// Root of `g` on `bracket` by bisection; the returned point lies inside a
/// final bracket narrower than `abs_tol`.
pub fn find_root<G>(g: G, bracket: (f64, f64), abs_tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    solve(&g, None::<&fn(f64) -> f64>, bracket, abs_tol)
}

/// Bisects down to a safe width, then polishes with safeguarded Newton steps
/// using the derivative `dg`.
pub fn find_root_newton<G, D>(g: G, dg: D, bracket: (f64, f64), abs_tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    solve(&g, Some(&dg), bracket, abs_tol)
}

// Fraction of the initial bracket below which bisection hands over to Newton.
const SAFE_WIDTH: f64 = 1e-3;
const MAX_NEWTON: usize = 100;

fn solve<G, D>(g: &G, dg: Option<&D>, bracket: (f64, f64), abs_tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(abs_tol > 0.0) {
        return Err(Error::invalid(
            "abs_tol",
            format!("{abs_tol} is not positive"),
        ));
    }
    let (mut a, mut b) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let eval = |x: f64| -> Result<f64> {
        let v = g(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NumericalDomain {
                tau: x,
                detail: format!("root function evaluated to {v}"),
            })
        }
    };
    let mut fa = eval(a)?;
    let fb = eval(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracketing { lo: a, hi: b });
    }

    let safe = (b - a) * SAFE_WIDTH;
    while b - a > abs_tol {
        let m = a + 0.5 * (b - a);
        if m <= a || m >= b {
            break;
        }
        let fm = eval(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if dg.is_some() && b - a <= safe {
            break;
        }
    }
    let Some(dg) = dg else {
        return Ok(a + 0.5 * (b - a));
    };

    let mut x = a + 0.5 * (b - a);
    for _ in 0..MAX_NEWTON {
        if b - a <= abs_tol {
            break;
        }
        let fx = eval(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let step = fx / dg(x);
        let mut next = x - step;
        if !(next > a && next < b) {
            next = a + 0.5 * (b - a);
        }
        if (next - x).abs() < 0.5 * abs_tol {
            // Converged: confirm with a bracket of width abs_tol around it.
            let lo = (next - 0.5 * abs_tol).max(a);
            let hi = (next + 0.5 * abs_tol).min(b);
            let (flo, fhi) = (eval(lo)?, eval(hi)?);
            if flo == 0.0 {
                return Ok(lo);
            }
            if fhi == 0.0 {
                return Ok(hi);
            }
            if flo.signum() != fhi.signum() {
                return Ok(next);
            }
        }
        x = next;
    }
    Ok(if x > a && x < b { x } else { a + 0.5 * (b - a) })
}
