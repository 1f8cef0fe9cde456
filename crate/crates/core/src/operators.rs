//! The game p-Laplacian and its recovery from discrete p-averages.
//!
//! ```text
//! Δ_p^G u = (1/p) tr A + ((p−2)/p) ⟨Aξ,ξ⟩/|ξ|²,   ξ = ∇u, A = D²u
//! ```
//!
//! For a p-averaging set with constant `d`, the p-average of
//! `{u(x + εη_j)}` satisfies `A_ε − u(x) = (ε²/2) d Δ_p^G u(x) + o(ε²)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricMatrix};
use crate::math;
use crate::paverage::{p_average_raw, DEFAULT_TOL};
use crate::polytopes::{averaging_ratio_with_exponent, DirectionSet, SymmetricProbe};

/// Second-order polynomial `φ(y) = φ(x) + ⟨a, y−x⟩ + ½⟨A(y−x), y−x⟩` with `a ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticProbe {
    base_point: Vec<f64>,
    base_value: f64,
    gradient: Vec<f64>,
    hessian: SymmetricMatrix,
}

impl QuadraticProbe {
    pub fn new(
        base_point: Vec<f64>,
        base_value: f64,
        gradient: Vec<f64>,
        hessian: SymmetricMatrix,
    ) -> Result<Self> {
        let n = base_point.len();
        if gradient.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gradient.len(),
            });
        }
        if hessian.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: hessian.dim(),
            });
        }
        if !(math::is_finite_slice(&base_point)
            && math::is_finite_slice(&gradient)
            && base_value.is_finite())
        {
            return Err(Error::NonFinite {
                what: "probe data",
                index: 0,
            });
        }
        if math::norm(&gradient) == 0.0 {
            return Err(Error::ZeroGradient);
        }
        Ok(Self {
            base_point,
            base_value,
            gradient,
            hessian,
        })
    }

    pub fn dim(&self) -> usize {
        self.base_point.len()
    }

    pub fn base_point(&self) -> &[f64] {
        &self.base_point
    }

    pub fn base_value(&self) -> f64 {
        self.base_value
    }

    pub fn gradient(&self) -> &[f64] {
        &self.gradient
    }

    pub fn hessian(&self) -> &SymmetricMatrix {
        &self.hessian
    }

    /// `φ(y)`.
    pub fn eval(&self, y: &[f64]) -> f64 {
        let h: Vec<f64> = y.iter().zip(&self.base_point).map(|(a, b)| a - b).collect();
        self.base_value + math::dot(&self.gradient, &h) + 0.5 * self.hessian.quad_form(&h)
    }

    /// `∇φ(y) = a + A(y − x)`.
    pub fn gradient_at(&self, y: &[f64]) -> Vec<f64> {
        let h: Vec<f64> = y.iter().zip(&self.base_point).map(|(a, b)| a - b).collect();
        let ah = self.hessian.mul_vec(&h);
        self.gradient.iter().zip(ah).map(|(a, b)| a + b).collect()
    }

    /// Unit gradient direction with the Hessian, as a ratio probe.
    pub fn symmetric_probe(&self) -> SymmetricProbe {
        SymmetricProbe::normalizing(self.hessian.clone(), self.gradient.clone())
            .expect("gradient is nonzero by construction")
    }
}

/// `φ(y)` for a quadratic probe.
pub fn probe_eval(probe: &QuadraticProbe, y: &[f64]) -> f64 {
    probe.eval(y)
}

fn check_gradient(gradient: &[f64], hessian: &SymmetricMatrix) -> Result<f64> {
    if gradient.len() != hessian.dim() {
        return Err(Error::DimensionMismatch {
            expected: hessian.dim(),
            found: gradient.len(),
        });
    }
    let g2 = math::dot(gradient, gradient);
    if !(g2 > 0.0) {
        return Err(Error::ZeroGradient);
    }
    Ok(g2)
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "must lie in (1, ∞]",
        });
    }
    Ok(())
}

/// `Δ_p^G` from gradient and Hessian; `p = ∞` gives the Rayleigh quotient.
pub fn game_p_laplacian(gradient: &[f64], hessian: &SymmetricMatrix, p: f64) -> Result<f64> {
    check_p(p)?;
    let g2 = check_gradient(gradient, hessian)?;
    let rayleigh = hessian.quad_form(gradient) / g2;
    if p == f64::INFINITY {
        return Ok(rayleigh);
    }
    Ok(hessian.trace() / p + (p - 2.0) / p * rayleigh)
}

/// `Δ_p^G` as `tr[M(ξ)A]` with `M(ξ) = (1/p)I + (1 − 2/p) ξξᵀ/|ξ|²`.
pub fn game_p_laplacian_matrix_form(
    gradient: &[f64],
    hessian: &SymmetricMatrix,
    p: f64,
) -> Result<f64> {
    check_p(p)?;
    let g2 = check_gradient(gradient, hessian)?;
    let n = gradient.len();
    let (a, b) = if p == f64::INFINITY {
        (0.0, 1.0)
    } else {
        (1.0 / p, 1.0 - 2.0 / p)
    };
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let m = if i == j { a } else { 0.0 } + b * gradient[i] * gradient[j] / g2;
            acc += m * hessian.get(j, i);
        }
    }
    Ok(acc)
}

/// The normalised Laplacians `Δ₂^G`, `Δ₁^G`, `Δ∞^G` and
/// `Δ₁^G/p + Δ∞^G/q` with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacianDecomposition {
    pub delta2: f64,
    pub delta1: f64,
    pub delta_inf: f64,
    pub recombined: f64,
}

pub fn laplacian_decomposition(
    gradient: &[f64],
    hessian: &SymmetricMatrix,
    p: f64,
) -> Result<LaplacianDecomposition> {
    check_p(p)?;
    let g2 = check_gradient(gradient, hessian)?;
    let delta2 = 0.5 * hessian.trace();
    let delta_inf = hessian.quad_form(gradient) / g2;
    let delta1 = 2.0 * delta2 - delta_inf;
    let inv_p = if p == f64::INFINITY { 0.0 } else { 1.0 / p };
    let recombined = inv_p * delta1 + (1.0 - inv_p) * delta_inf;
    Ok(LaplacianDecomposition {
        delta2,
        delta1,
        delta_inf,
        recombined,
    })
}

/// Geometry of the continuous mean value property a scheme constant refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// Solid ball: `c = p / (2(n + p))`.
    Ball,
    /// Sphere: `c = p / (2(n + p − 2))`.
    Sphere,
}

pub fn scheme_constant(p: f64, n: usize, geometry: Geometry) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "must be finite and > 1",
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 2",
        });
    }
    let n = n as f64;
    Ok(match geometry {
        Geometry::Ball => p / (2.0 * (n + p)),
        Geometry::Sphere => p / (2.0 * (n + p - 2.0)),
    })
}

/// [`scheme_constant`] for integer `p ≥ 2`, as an exact rational.
pub fn scheme_constant_exact(p: u32, n: usize, geometry: Geometry) -> Result<BigRational> {
    if p < 2 || n < 2 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "need integer p ≥ 2 and n ≥ 2",
        });
    }
    let (p, n) = (p as i64, n as i64);
    let den = match geometry {
        Geometry::Ball => 2 * (n + p),
        Geometry::Sphere => 2 * (n + p - 2),
    };
    Ok(BigRational::new(BigInt::from(p), BigInt::from(den)))
}

fn check_set_dim(set: &DirectionSet, point: &[f64]) -> Result<()> {
    if set.dim() != point.len() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: point.len(),
        });
    }
    Ok(())
}

/// `d(ε) = (A_ε − φ(x)) / (ε²/2)` for a general field, with `A_ε` the
/// weighted p-average of `φ(x + εη_j)`.
///
/// The average is taken over the differences `φ(x + εη_j) − φ(x)`, which is
/// the same number by affine invariance but keeps full relative precision.
pub fn discrete_amvp_estimate_field<F>(
    field: F,
    point: &[f64],
    set: &DirectionSet,
    epsilon: f64,
    p: f64,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    check_p(p)?;
    check_set_dim(set, point)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "must be positive",
        });
    }
    let center = field(point);
    if !center.is_finite() {
        return Err(Error::NonFinite {
            what: "field value",
            index: 0,
        });
    }
    let mut y = vec![0.0; point.len()];
    let mut diffs = Vec::with_capacity(set.len());
    for (j, eta) in set.vectors().enumerate() {
        for (k, (x, e)) in point.iter().zip(eta).enumerate() {
            y[k] = x + epsilon * e;
        }
        let v = field(&y);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                what: "field value",
                index: j,
            });
        }
        diffs.push(v - center);
    }
    let avg = p_average_raw(&diffs, set.weights(), p, DEFAULT_TOL).value;
    Ok(avg / (0.5 * epsilon * epsilon))
}

/// [`discrete_amvp_estimate_field`] for a quadratic probe at its base point.
pub fn discrete_amvp_estimate(
    probe: &QuadraticProbe,
    set: &DirectionSet,
    epsilon: f64,
    p: f64,
) -> Result<f64> {
    discrete_amvp_estimate_field(|y| probe.eval(y), &probe.base_point, set, epsilon, p)
}

/// ε-sweep of `d(ε)` with its extrapolated limit.
#[derive(Debug, Clone, PartialEq)]
pub struct AmvpReport {
    /// Strictly decreasing.
    pub epsilons: Vec<f64>,
    pub estimates: Vec<f64>,
    pub extrapolated_limit: f64,
    pub reference: f64,
    pub max_abs_error_at_smallest_eps: f64,
    /// `|extrapolated_limit − reference|`.
    pub limit_error: f64,
    /// Coefficients of the fit in `t = (ε/ε_max)²`, constant term first.
    pub fit: Vec<f64>,
}

/// Limit of `d(ε)` predicted for a field with gradient `a ≠ 0` and Hessian `A`:
/// `d · Δ_p^G` when `p` is the set's own exponent and `d` is known, otherwise
/// the averaging ratio `R(A, a/|a|)` at exponent `p`.
pub fn amvp_reference(
    set: &DirectionSet,
    gradient: &[f64],
    hessian: &SymmetricMatrix,
    p: f64,
) -> Result<f64> {
    if let (true, Some(d)) = (p == set.exponent() as f64, set.expected_d_f64()) {
        return Ok(d * game_p_laplacian(gradient, hessian, p)?);
    }
    let probe = SymmetricProbe::normalizing(hessian.clone(), gradient.to_vec())?;
    averaging_ratio_with_exponent(set, &probe, p)
}

/// Least-squares fit of estimates against powers of `t = (ε/ε_max)²`.
///
/// `d(ε)` is even in `ε` for negation-closed sets, so the expansion only
/// contains even powers of `ε`. With `m ≥ 3` points the fit keeps `m − 1`
/// terms (at most five), leaving one degree of freedom.
fn even_fit(epsilons: &[f64], estimates: &[f64]) -> Vec<f64> {
    let m = epsilons.len();
    let terms = if m >= 3 { (m - 1).min(5) } else { m };
    let emax = epsilons[0];
    let mut normal = vec![0.0; terms * terms];
    let mut rhs = vec![0.0; terms];
    for (e, d) in epsilons.iter().zip(estimates) {
        let t = (e / emax) * (e / emax);
        let basis: Vec<f64> = (0..terms).map(|k| math::powi(t, k as u32)).collect();
        for i in 0..terms {
            rhs[i] += basis[i] * d;
            for j in 0..terms {
                normal[i * terms + j] += basis[i] * basis[j];
            }
        }
    }
    linalg::solve(&normal, &rhs).unwrap_or_else(|| {
        let mut c = vec![0.0; terms];
        c[0] = estimates[estimates.len() - 1];
        c
    })
}

/// Sweep over `eps_list` for a general field with known limit `reference`.
pub fn amvp_sweep_field<F>(
    field: F,
    point: &[f64],
    reference: f64,
    set: &DirectionSet,
    eps_list: &[f64],
    p: f64,
) -> Result<AmvpReport>
where
    F: Fn(&[f64]) -> f64,
{
    if eps_list.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "eps_list",
            reason: "need at least 2 values",
        });
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && e.is_finite()))
        || eps_list.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidParameter {
            name: "eps_list",
            reason: "must be positive and strictly decreasing",
        });
    }
    if !p.is_finite() {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "sweeps need finite p",
        });
    }
    let estimates = eps_list
        .iter()
        .map(|&e| discrete_amvp_estimate_field(&field, point, set, e, p))
        .collect::<Result<Vec<f64>>>()?;
    let fit = even_fit(eps_list, &estimates);
    let extrapolated_limit = fit[0];
    Ok(AmvpReport {
        epsilons: eps_list.to_vec(),
        max_abs_error_at_smallest_eps: math::abs(estimates[estimates.len() - 1] - reference),
        estimates,
        extrapolated_limit,
        reference,
        limit_error: math::abs(extrapolated_limit - reference),
        fit,
    })
}

/// Sweep for a quadratic probe, referenced against [`amvp_reference`].
pub fn amvp_sweep(
    probe: &QuadraticProbe,
    set: &DirectionSet,
    eps_list: &[f64],
    p: f64,
) -> Result<AmvpReport> {
    check_set_dim(set, &probe.base_point)?;
    let reference = amvp_reference(set, &probe.gradient, &probe.hessian, p)?;
    amvp_sweep_field(
        |y| probe.eval(y),
        &probe.base_point,
        reference,
        set,
        eps_list,
        p,
    )
}

/// `ε₀, ε₀/2, …` with `count` entries.
pub fn halving_sequence(eps0: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| eps0 / math::powi(2.0, i as u32))
        .collect()
}
