//! Named analytic test fields with exact gradients and Hessians.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::math;
use crate::operators::QuadraticProbe;

/// Scalar field on ℝⁿ with closed-form derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticField {
    Constant(f64),
    /// `⟨coefficients, x⟩ + offset`.
    Linear {
        coefficients: Vec<f64>,
        offset: f64,
    },
    /// `Re(z²) = x₁² − x₂²` on the plane.
    ReZSquared,
    /// `sin(x₁) + x₂²` on the plane.
    SinPlusSquare,
    /// `|x|²`.
    SquaredNorm,
    Quadratic(QuadraticProbe),
}

impl AnalyticField {
    /// Looks up a parameter-free field by its name
    /// (`re-z-squared`, `sin-plus-square`, `squared-norm`).
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "re-z-squared" => Ok(Self::ReZSquared),
            "sin-plus-square" => Ok(Self::SinPlusSquare),
            "squared-norm" => Ok(Self::SquaredNorm),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }

    /// Fixed dimension of the field, if it has one.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Self::Constant(_) | Self::SquaredNorm => None,
            Self::Linear { coefficients, .. } => Some(coefficients.len()),
            Self::ReZSquared | Self::SinPlusSquare => Some(2),
            Self::Quadratic(q) => Some(q.dim()),
        }
    }

    pub fn check_dimension(&self, dim: usize) -> Result<()> {
        match self.dimension() {
            Some(d) if d != dim => Err(Error::DimensionMismatch {
                expected: d,
                found: dim,
            }),
            _ => Ok(()),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Linear {
                coefficients,
                offset,
            } => math::dot(coefficients, x) + offset,
            Self::ReZSquared => x[0] * x[0] - x[1] * x[1],
            Self::SinPlusSquare => math::sin(x[0]) + x[1] * x[1],
            Self::SquaredNorm => math::dot(x, x),
            Self::Quadratic(q) => q.eval(x),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Self::Constant(_) => vec![0.0; x.len()],
            Self::Linear { coefficients, .. } => coefficients.clone(),
            Self::ReZSquared => vec![2.0 * x[0], -2.0 * x[1]],
            Self::SinPlusSquare => vec![math::cos(x[0]), 2.0 * x[1]],
            Self::SquaredNorm => x.iter().map(|v| 2.0 * v).collect(),
            Self::Quadratic(q) => q.gradient_at(x),
        }
    }

    pub fn hessian(&self, x: &[f64]) -> SymmetricMatrix {
        match self {
            Self::Constant(_) | Self::Linear { .. } => SymmetricMatrix::zeros(x.len()),
            Self::ReZSquared => SymmetricMatrix::diagonal(&[2.0, -2.0]),
            Self::SinPlusSquare => SymmetricMatrix::diagonal(&[-math::sin(x[0]), 2.0]),
            Self::SquaredNorm => SymmetricMatrix::diagonal(&vec![2.0; x.len()]),
            Self::Quadratic(q) => q.hessian().clone(),
        }
    }

    /// Second-order Taylor data of the field at `x` as a probe.
    pub fn probe_at(&self, x: &[f64]) -> Result<QuadraticProbe> {
        self.check_dimension(x.len())?;
        QuadraticProbe::new(x.to_vec(), self.value(x), self.gradient(x), self.hessian(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite_difference_check(f: &AnalyticField, x: &[f64]) {
        let h = 1e-5;
        let g = f.gradient(x);
        let hess = f.hessian(x);
        for i in 0..x.len() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let fd = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-8);
            let gp = f.gradient(&xp);
            let gm = f.gradient(&xm);
            for j in 0..x.len() {
                assert!(((gp[j] - gm[j]) / (2.0 * h) - hess.get(i, j)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let x = [0.4, -0.7];
        for f in [
            AnalyticField::ReZSquared,
            AnalyticField::SinPlusSquare,
            AnalyticField::SquaredNorm,
            AnalyticField::Linear {
                coefficients: vec![1.5, -2.0],
                offset: 0.3,
            },
        ] {
            finite_difference_check(&f, &x);
        }
    }

    #[test]
    fn names_and_dimensions() {
        assert_eq!(
            AnalyticField::named("re-z-squared").unwrap(),
            AnalyticField::ReZSquared
        );
        assert!(AnalyticField::named("nope").is_err());
        assert!(AnalyticField::SinPlusSquare.check_dimension(3).is_err());
        assert!(AnalyticField::SquaredNorm.check_dimension(4).is_ok());
    }
}
