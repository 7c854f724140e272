use nalgebra::{DMatrix, DVector};

use crate::domain::GrowthLaw;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedFit {
    pub law: GrowthLaw,
    /// Euclidean norm of the residuals `g_i - f(tau_i)`.
    pub residual_norm: f64,
}

// Pivot ratio below which the scaled normal matrix is treated as singular.
const RANK_TOL: f64 = 1e-13;

/// Least-squares fit of `g ~ f(tau) = tau + a_2 tau^2 + ... + a_N tau^N`.
///
/// The constraints `f(0) = 0` and `f'(0) = 1` are built into the basis, so only
/// `a_2 .. a_N` are unknowns. Columns are scaled to unit maximum before the
/// normal equations are factored with full pivoting.
pub fn fit_constrained_polynomial(points: &[(f64, f64)], degree: usize) -> Result<ConstrainedFit> {
    if degree < 2 {
        return Err(Error::invalid(
            "degree",
            format!("{degree} < 2 leaves nothing to fit"),
        ));
    }
    if let Some(&(t, g)) = points
        .iter()
        .find(|(t, g)| !t.is_finite() || !g.is_finite())
    {
        return Err(Error::invalid(
            "points",
            format!("non-finite sample ({t}, {g})"),
        ));
    }
    let unknowns = degree - 1;
    let mut abscissae: Vec<f64> = points.iter().map(|p| p.0).filter(|&t| t > 0.0).collect();
    abscissae.sort_by(f64::total_cmp);
    abscissae.dedup();
    if abscissae.len() < unknowns {
        return Err(Error::DegenerateFit(format!(
            "{} distinct positive abscissae for {unknowns} coefficients",
            abscissae.len()
        )));
    }

    let rows = points.len();
    let mut design = DMatrix::<f64>::zeros(rows, unknowns);
    let mut target = DVector::<f64>::zeros(rows);
    for (i, &(t, g)) in points.iter().enumerate() {
        let mut power = t * t;
        for j in 0..unknowns {
            design[(i, j)] = power;
            power *= t;
        }
        target[i] = g - t;
    }
    let scale: Vec<f64> = (0..unknowns).map(|j| design.column(j).amax()).collect();
    for (j, &s) in scale.iter().enumerate() {
        design.column_mut(j).scale_mut(1.0 / s);
    }

    let normal = design.transpose() * &design;
    let rhs = design.transpose() * &target;
    let lu = normal.full_piv_lu();
    let pivots = lu.u().diagonal().map(f64::abs);
    let (pmax, pmin) = (pivots.max(), pivots.min());
    if !(pmin > RANK_TOL * pmax) {
        return Err(Error::DegenerateFit(format!(
            "normal matrix is rank deficient (pivot ratio {:e})",
            pmin / pmax
        )));
    }
    let scaled = lu
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateFit("normal matrix is singular".into()))?;

    let coefficients: Vec<f64> = scaled.iter().zip(&scale).map(|(c, s)| c / s).collect();
    let law = GrowthLaw::new(coefficients)?;
    let residual_norm = points
        .iter()
        .map(|&(t, g)| (g - law.eval(t)).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ConstrainedFit { law, residual_norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: impl Fn(f64) -> f64, taus: impl IntoIterator<Item = f64>) -> Vec<(f64, f64)> {
        taus.into_iter().map(|t| (t, f(t))).collect()
    }

    #[test]
    fn planted_quadratic() {
        let pts = sample(|t| t - 0.01 * t * t, (1..=10).map(f64::from));
        let fit = fit_constrained_polynomial(&pts, 2).unwrap();
        assert!((fit.law.coefficients()[0] + 0.01).abs() < 1e-10);
        assert!(fit.residual_norm < 1e-12);
    }

    #[test]
    fn identity_law() {
        let pts = sample(|t| t, (1..=10).map(f64::from));
        let fit = fit_constrained_polynomial(&pts, 3).unwrap();
        for a in fit.law.coefficients() {
            assert!(a.abs() < 1e-10, "{a}");
        }
    }

    #[test]
    fn planted_cubic() {
        let pts = sample(|t| t + 0.002 * t * t * t, (1..=12).map(f64::from));
        let fit = fit_constrained_polynomial(&pts, 3).unwrap();
        let a = fit.law.coefficients();
        assert!(a[0].abs() < 1e-10, "{a:?}");
        assert!((a[1] - 0.002).abs() < 1e-10, "{a:?}");
    }

    #[test]
    fn equal_abscissae_are_degenerate() {
        let pts = vec![(2.0, 2.1); 6];
        assert!(matches!(
            fit_constrained_polynomial(&pts, 3),
            Err(Error::DegenerateFit(_))
        ));
        // a single abscissa still determines one coefficient
        assert!(fit_constrained_polynomial(&pts, 2).is_ok());
        assert!(fit_constrained_polynomial(&[(0.0, 0.0), (0.0, 0.0)], 2).is_err());
    }
}
