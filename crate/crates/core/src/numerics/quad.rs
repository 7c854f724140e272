use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Adaptive composite Simpson estimate of `f` over `[a, b]`.
///
/// Each panel is split until the coarse and refined Simpson values agree to
/// `15 * tol` for its share of `abs_tol`; the refined value is then corrected
/// by the Richardson term. The rule is exact for cubics.
pub fn quadrature<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a <= b) {
        return Err(Error::invalid(
            "interval",
            format!("[{a}, {b}] is not ordered"),
        ));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::invalid(
            "abs_tol",
            format!("{abs_tol} is not positive"),
        ));
    }
    if a == b {
        return Ok(0.0);
    }
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NumericalDomain {
                tau: x,
                detail: format!("integrand evaluated to {v}"),
            })
        }
    };
    let fa = eval(a)?;
    let fb = eval(b)?;
    let m = 0.5 * (a + b);
    let fm = eval(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(&eval, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn step<E>(
    eval: &E,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    E: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return Ok(left + right + delta / 15.0);
    }
    Ok(step(eval, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + step(eval, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_approach_intensity() {
        // Y0 / (1 - sigma tau)^2 integrates to (Y0/sigma)((1 - sigma tau)^-1 - 1)
        let v = quadrature(|t| 0.1 / (1.0 - 0.05 * t).powi(2), 0.0, 10.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn zero_and_constant_integrands() {
        assert_eq!(quadrature(|_| 0.0, -3.0, 7.0, 1e-12).unwrap(), 0.0);
        let v = quadrature(|_| 2.5, 1.0, 5.0, 1e-12).unwrap();
        assert!((v - 10.0).abs() <= 4.0 * f64::EPSILON * 10.0);
        assert_eq!(quadrature(|x| x, 2.0, 2.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn cubics_are_exact() {
        let v = quadrature(|x| 4.0 * x * x * x - 3.0 * x * x + 1.0, -1.0, 2.0, 1e-3).unwrap();
        // x^4 - x^3 + x on [-1, 2] = (16 - 8 + 2) - (1 + 1 - 1) = 9
        assert!((v - 9.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(quadrature(|x| x, 1.0, 0.0, 1e-9).is_err());
        assert!(matches!(
            quadrature(|x| 1.0 / x, 0.0, 1.0, 1e-9),
            Err(Error::NumericalDomain { .. })
        ));
    }
}
