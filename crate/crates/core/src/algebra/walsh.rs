//! Complex polynomials and mean values over regular polygons.
//!
//! For a polynomial `P` of degree at most `n`, the average of `P` over the
//! `2n` vertices `z + r e^{iθ} e^{iπj/n}` equals `P(z)`: every power
//! `e^{iπjm/n}` with `0 < m < 2n` sums to zero over `j`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Ascending coefficients; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs
            .last()
            .is_some_and(|c| *c == Complex64::new(0.0, 0.0))
        {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

/// `(1/2n) Σ_{j<2n} P(z + r e^{iθ} e^{iπj/n})`.
///
/// Equals `P(z)` whenever `n ≥ deg P`; smaller `n` is accepted so the
/// failure of the identity can be observed.
pub fn polygon_mean(
    poly: &ComplexPolynomial,
    z: Complex64,
    r: f64,
    theta: f64,
    n: usize,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1",
        });
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: "must be positive",
        });
    }
    let m = 2 * n;
    let sum: Complex64 = (0..m)
        .map(|j| {
            let angle = theta + math::PI * j as f64 / n as f64;
            poly.eval(z + Complex64::new(r * math::cos(angle), r * math::sin(angle)))
        })
        .sum();
    Ok(sum / m as f64)
}

/// Magnitude scale `Σ |c_k| (|z| + r)^k` used for relative errors.
fn scale(poly: &ComplexPolynomial, z: Complex64, r: f64) -> f64 {
    let m = z.norm() + r;
    poly.coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * m + c.norm())
}

/// Relative deviation `|mean − P(z)| / Σ|c_k|(|z|+r)^k` of one polygon mean.
pub fn polygon_mean_error(
    poly: &ComplexPolynomial,
    z: Complex64,
    r: f64,
    theta: f64,
    n: usize,
) -> Result<f64> {
    let mean = polygon_mean(poly, z, r, theta, n)?;
    let s = scale(poly, z, r);
    Ok(if s == 0.0 {
        0.0
    } else {
        (mean - poly.eval(z)).norm() / s
    })
}

/// Outcome of [`verify_walsh`].
#[derive(Debug, Clone, PartialEq)]
pub struct WalshReport {
    pub trials: usize,
    pub max_degree: usize,
    pub max_relative_error: f64,
    /// Relative error of `z²` averaged over a 2-gon, where the identity fails.
    pub negative_case_error: f64,
    pub pass: bool,
}

/// Random polynomials of degree `≤ max_degree` with coefficients and `z` in the
/// unit square, `r ∈ [0.1, 1.5]`, `θ ∈ [0, 2π)` and `n ∈ [deg, deg + 3]`.
/// Passes if every relative error is `≤ tol` and the negative case exceeds it.
pub fn verify_walsh(max_degree: usize, trials: usize, seed: u64, tol: f64) -> Result<WalshReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |rng: &mut ChaCha8Rng| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    };
    let mut max_err = 0.0f64;
    for _ in 0..trials {
        let deg = rng.random_range(0..=max_degree);
        let mut coeffs: Vec<Complex64> = (0..=deg).map(|_| unit(&mut rng)).collect();
        if coeffs[deg].norm() < 1e-3 {
            coeffs[deg] = Complex64::new(1.0, 0.0);
        }
        let poly = ComplexPolynomial::new(coeffs);
        let z = unit(&mut rng);
        let r = rng.random_range(0.1..=1.5);
        let theta = rng.random_range(0.0..2.0 * math::PI);
        let n = deg.max(1) + rng.random_range(0..=3);
        max_err = max_err.max(polygon_mean_error(&poly, z, r, theta, n)?);
    }
    let square = ComplexPolynomial::new(alloc::vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0)
    ]);
    let negative_case_error = polygon_mean_error(&square, Complex64::new(0.5, 0.5), 1.0, 0.3, 1)?;
    Ok(WalshReport {
        trials,
        max_degree,
        max_relative_error: max_err,
        negative_case_error,
        pass: max_err <= tol && negative_case_error > tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_on_four_points() {
        let p = ComplexPolynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let z = c(0.3, -1.2);
        let m = polygon_mean(&p, z, 0.8, 0.4, 2).unwrap();
        assert!((m - z * z).norm() < 1e-14);
    }

    #[test]
    fn constants_and_failures() {
        let k = ComplexPolynomial::new(vec![c(2.0, -1.0)]);
        assert!(
            (polygon_mean(&k, c(5.0, 5.0), 1.0, 0.0, 1).unwrap() - c(2.0, -1.0)).norm() < 1e-15
        );
        // z² over a 2-gon: mean is z² + r²e^{2iθ}
        let sq = ComplexPolynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let z = c(0.5, 0.5);
        let m = polygon_mean(&sq, z, 1.0, 0.3, 1).unwrap();
        assert!((m - z * z).norm() > 0.5);
        assert!(polygon_mean(&sq, z, 0.0, 0.0, 2).is_err());
        assert!(polygon_mean(&sq, z, 1.0, 0.0, 0).is_err());
    }

    #[test]
    fn random_degree_five() {
        let poly = ComplexPolynomial::new(
            (0..6)
                .map(|k| c(0.3 * k as f64 - 0.7, 0.1 * k as f64))
                .collect(),
        );
        let err = polygon_mean_error(&poly, c(0.2, -0.4), 0.7, 0.3, 5).unwrap();
        assert!(err < 1e-11);
        let report = verify_walsh(8, 50, 3, 1e-10).unwrap();
        assert!(report.pass, "{report:?}");
    }
}
