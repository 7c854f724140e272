use super::roots::find_root_newton;

/// Dense polynomial with coefficients in ascending order of power.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

// Cells in the root scan; log-spaced so that small roots are resolved as well
// as large ones.
const SCAN_CELLS: usize = 4096;
const SCAN_DECADES: f64 = 12.0;

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &c)| n as f64 * c)
                .collect(),
        )
    }

    /// Degree after dropping zero leading coefficients; `None` for the zero
    /// polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    /// Cauchy bound: every real root lies in `[-bound, bound]`.
    pub fn cauchy_bound(&self) -> Option<f64> {
        let n = self.degree()?;
        if n == 0 {
            return None;
        }
        let lead = self.coeffs[n].abs();
        let m = self.coeffs[..n]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max);
        Some(1.0 + m)
    }

    /// Smallest root strictly greater than zero at which the polynomial
    /// changes sign. Tangential roots are not reported.
    pub fn first_positive_root(&self) -> Option<f64> {
        self.first_root_in(0.0, self.cauchy_bound()?)
    }

    /// Smallest sign-changing root in `(lo, hi]`.
    pub fn first_root_in(&self, lo: f64, hi: f64) -> Option<f64> {
        if !(hi > lo) {
            return None;
        }
        let span = hi - lo;
        let mut prev: Option<(f64, f64)> = None;
        let mut visit = |t: f64| -> Option<Option<f64>> {
            let v = self.eval(t);
            if v == 0.0 && t > lo {
                return Some(Some(t));
            }
            if let Some((tp, vp)) = prev {
                if v != 0.0 && vp.signum() != v.signum() {
                    let d = self.derivative();
                    let tol = 4.0 * f64::EPSILON * t.abs().max(1.0);
                    return Some(
                        find_root_newton(|x| self.eval(x), |x| d.eval(x), (tp, t), tol).ok(),
                    );
                }
            }
            if v != 0.0 {
                prev = Some((t, v));
            }
            None
        };
        if let Some(found) = visit(lo) {
            return found;
        }
        for k in 0..=SCAN_CELLS {
            let frac = 10f64.powf(-SCAN_DECADES + SCAN_DECADES * k as f64 / SCAN_CELLS as f64);
            let t = if k == SCAN_CELLS {
                hi
            } else {
                lo + span * frac
            };
            if let Some(found) = visit(t) {
                return found;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_derivative() {
        let p = Polynomial::new(vec![1.0, -3.0, 2.0]);
        assert_eq!(p.eval(2.0), 3.0);
        assert_eq!(p.derivative().coefficients(), &[-3.0, 4.0]);
        assert_eq!(Polynomial::new(vec![0.0, 0.0]).degree(), None);
    }

    #[test]
    fn first_positive_root_of_quadratics() {
        // (x - 1)(x - 2)
        let p = Polynomial::new(vec![2.0, -3.0, 1.0]);
        assert!((p.first_positive_root().unwrap() - 1.0).abs() < 1e-12);
        // 1 - 0.05 x - 0.005 x^2 has positive root 10
        let q = Polynomial::new(vec![1.0, -0.05, -0.005]);
        assert!((q.first_positive_root().unwrap() - 10.0).abs() < 1e-12);
        // x^2 + 1 has no real roots
        assert_eq!(
            Polynomial::new(vec![1.0, 0.0, 1.0]).first_positive_root(),
            None
        );
        // only a negative root
        assert_eq!(Polynomial::new(vec![1.0, 1.0]).first_positive_root(), None);
    }

    #[test]
    fn small_roots_are_resolved() {
        let p = Polynomial::new(vec![-1e-6, 1.0, 1e3]);
        let r = p.first_positive_root().unwrap();
        assert!(p.eval(r).abs() < 1e-15);
        assert!(r > 0.0 && r < 1e-6);
    }
}
