//! Variational p-averages of weighted finite samples.
//!
//! For `1 < p < ∞` the p-average of a sample `(y_i, ν_i)` is the unique
//! minimiser of `λ ↦ Σ ν_i |y_i − λ|^p`, equivalently the unique root of the
//! strictly decreasing characterization
//!
//! ```text
//! F(λ) = Σ ν_i |y_i − λ|^{p−2} (y_i − λ)
//! ```
//!
//! bracketed by `[min y, max y]`. `p = 2` is the weighted mean and `p = ∞` the
//! midrange. The root is found by Newton's method safeguarded by the bracket,
//! in coordinates normalised to `[0, 1]` so that the solver itself is affine
//! equivariant.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Default bracket tolerance, relative to the sample's range.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_ITERATIONS: u32 = 500;

/// Finite measured dataset: values with strictly positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedSample {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::LengthMismatch {
                values: values.len(),
                weights: weights.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "sample value",
                index: i,
            });
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::NonPositiveWeight {
                index: i,
                weight: weights[i],
            });
        }
        Ok(Self { values, weights })
    }

    /// Sample with unit (counting-measure) weights.
    pub fn unweighted(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(values, alloc::vec![1.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weighted mean under the normalised measure.
    pub fn mean(&self) -> f64 {
        weighted_mean(&self.values, &self.weights)
    }

    /// Returns `λ·values + ξ` with the same weights.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self> {
        Self::new(
            self.values.iter().map(|v| scale * v + shift).collect(),
            self.weights.clone(),
        )
    }
}

/// Outcome of a p-average computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PAverageResult {
    /// The p-average `A_p`.
    pub value: f64,
    /// `σ_p = (Σ ν_i |y_i − A_p|^p / Σ ν_i)^{1/p}`, or `max |y_i − A_p|` for `p = ∞`.
    pub dispersion: f64,
    /// Characterization `F` at the result, evaluated on the sample rescaled to
    /// `[0, 1]` with probability weights.
    pub residual: f64,
    pub iterations: u32,
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "must lie in (1, ∞]",
        });
    }
    Ok(())
}

fn weighted_mean(values: &[f64], weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    values.iter().zip(weights).map(|(y, w)| y * w).sum::<f64>() / total
}

/// `F(λ) = Σ ν_i |y_i − λ|^{p−2}(y_i − λ)` for finite `p > 1`.
///
/// Exact ties `y_i = λ` contribute zero, which is the limit of their term for
/// every `p > 1`.
pub fn characterization_residual(sample: &WeightedSample, lambda: f64, p: f64) -> f64 {
    debug_assert!(p.is_finite() && p > 1.0);
    sample
        .values
        .iter()
        .zip(&sample.weights)
        .map(|(&y, &w)| {
            let d = y - lambda;
            if d == 0.0 {
                0.0
            } else {
                w * math::abs_pow(d, p - 1.0).copysign(d)
            }
        })
        .sum()
}

/// The p-average of `sample` for `p ∈ (1, ∞]` (`f64::INFINITY` for ∞).
///
/// `tol` bounds the final Newton step or bracket width, relative to
/// `max − min` of the sample.
pub fn p_average(sample: &WeightedSample, p: f64, tol: f64) -> Result<PAverageResult> {
    check_exponent(p)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be positive",
        });
    }
    Ok(p_average_raw(&sample.values, &sample.weights, p, tol))
}

/// Unchecked core of [`p_average`] over pre-validated slices.
pub(crate) fn p_average_raw(values: &[f64], weights: &[f64], p: f64, tol: f64) -> PAverageResult {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    if span == 0.0 {
        return PAverageResult {
            value: lo,
            dispersion: 0.0,
            residual: 0.0,
            iterations: 0,
        };
    }
    let total: f64 = weights.iter().sum();
    let inv_span = 1.0 / span;
    let z = |y: f64| (y - lo) * inv_span;

    if p == f64::INFINITY {
        let value = 0.5 * (lo + hi);
        return PAverageResult {
            value,
            dispersion: 0.5 * span,
            residual: 0.0,
            iterations: 0,
        };
    }

    let eval = |t: f64| -> (f64, f64) {
        let mut f = 0.0;
        let mut df = 0.0;
        for (&y, &w) in values.iter().zip(weights) {
            let d = z(y) - t;
            if d == 0.0 {
                if p < 2.0 {
                    df = f64::NEG_INFINITY;
                } else if p == 2.0 {
                    df -= w;
                }
                continue;
            }
            let a = math::abs(d);
            let g = math::abs_pow(a, p - 2.0);
            f += w * g * d;
            df -= w * g;
        }
        (f / total, (p - 1.0) * df / total)
    };

    if p == 2.0 {
        let value = weighted_mean(values, weights).clamp(lo, hi);
        let t = z(value);
        let dispersion =
            span * math::sqrt(normalized_moment(values, weights, lo, inv_span, t, 2.0) / total);
        return PAverageResult {
            value,
            dispersion,
            residual: eval(t).0,
            iterations: 0,
        };
    }

    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut t = z(weighted_mean(values, weights)).clamp(0.0, 1.0);
    let mut iterations = 0;
    // step before last; Newton steps must at least halve it
    let mut older = 1.0f64;
    let mut last = 1.0f64;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (f, df) = eval(t);
        if f == 0.0 {
            break;
        }
        if f > 0.0 {
            a = t;
        } else {
            b = t;
        }
        let newton = t - f / df;
        let shrinks = math::abs(newton - t) <= 0.5 * older;
        let next = if df.is_finite() && df < 0.0 && newton >= a && newton <= b && shrinks {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = math::abs(next - t);
        older = last;
        last = step;
        t = next;
        if b - a <= tol {
            break;
        }
        if step <= tol {
            // a short Newton step near a steep point is not proof of convergence
            let (l, h) = ((t - tol).max(a), (t + tol).min(b));
            let (fl, fh) = (eval(l).0, eval(h).0);
            if fl >= 0.0 && fh <= 0.0 {
                break;
            }
            if fl < 0.0 {
                b = l;
            } else {
                a = h;
            }
            t = 0.5 * (a + b);
        }
    }
    let residual = eval(t).0;
    let value = (lo + span * t).clamp(lo, hi);
    let dispersion = span
        * math::pow(
            normalized_moment(values, weights, lo, inv_span, t, p) / total,
            1.0 / p,
        );
    PAverageResult {
        value,
        dispersion,
        residual,
        iterations,
    }
}

fn normalized_moment(
    values: &[f64],
    weights: &[f64],
    lo: f64,
    inv_span: f64,
    t: f64,
    p: f64,
) -> f64 {
    values
        .iter()
        .zip(weights)
        .map(|(&y, &w)| w * math::abs_pow((y - lo) * inv_span - t, p))
        .sum()
}

/// Weighted mean, standard deviation and skewness under the normalised measure.
pub fn moments(sample: &WeightedSample) -> (f64, f64, f64) {
    let total = sample.total_weight();
    let mean = sample.mean();
    let (mut m2, mut m3) = (0.0, 0.0);
    for (&y, &w) in sample.values.iter().zip(&sample.weights) {
        let d = y - mean;
        m2 += w * d * d;
        m3 += w * d * d * d;
    }
    m2 /= total;
    m3 /= total;
    let sigma = math::sqrt(m2);
    let skew = if sigma > 0.0 {
        m3 / (sigma * sigma * sigma)
    } else {
        0.0
    };
    (mean, sigma, skew)
}

/// Closed-form 4-average from the mean `t̄`, deviation `σ` and skewness `κ`:
///
/// ```text
/// A₄ = σ/∛2 · (∛(κ + √(κ²+4)) + ∛(κ − √(κ²+4))) + t̄
/// ```
///
/// The second cube root is evaluated as `−∛(4/(κ + √(κ²+4)))`, which is the
/// same number without cancellation for large `κ`.
pub fn four_average_closed_form(sample: &WeightedSample) -> f64 {
    let (mean, sigma, kappa) = moments(sample);
    if sigma == 0.0 {
        return mean;
    }
    let root = math::sqrt(kappa * kappa + 4.0);
    let (s_plus, s_minus) = if kappa >= 0.0 {
        let s = kappa + root;
        (s, -4.0 / s)
    } else {
        let s = kappa - root;
        (-4.0 / s, s)
    };
    let value = sigma / math::cbrt(2.0) * (math::cbrt(s_plus) + math::cbrt(s_minus)) + mean;
    value.clamp(sample.min(), sample.max())
}

/// γ-median of an even, strictly increasing dataset `x_1 < … < x_{2k}`: the
/// unique root in `(x_k, x_{k+1})` of
/// `Π_{i≤k}(c − x_i) − Π_{i>k}(x_i − c)`, the `p → 1⁺` limit of p-averages.
pub fn gamma_median(values: &[f64]) -> Result<f64> {
    if values.is_empty() || !values.len().is_multiple_of(2) {
        return Err(Error::Domain(
            "γ-median needs an even, nonzero number of values",
        ));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "value",
            index: i,
        });
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("γ-median needs strictly increasing values"));
    }
    let k = values.len() / 2;
    let lo = values[0];
    let span = values[values.len() - 1] - lo;
    let z: Vec<f64> = values.iter().map(|v| (v - lo) / span).collect();
    let product_poly = |c: f64| -> f64 {
        let left: f64 = z[..k].iter().map(|x| c - x).product();
        let right: f64 = z[k..].iter().map(|x| x - c).product();
        left - right
    };
    // product_poly < 0 at x_k and > 0 at x_{k+1}
    let (mut a, mut b) = (z[k - 1], z[k]);
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if product_poly(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let c = if math::abs(product_poly(a)) <= math::abs(product_poly(b)) {
        a
    } else {
        b
    };
    Ok(lo + span * c)
}

/// p-averages of an even dataset along a decreasing sequence `p → 1⁺`.
pub fn p_limit_to_gamma_median(values: &[f64], p_sequence: &[f64]) -> Result<Vec<f64>> {
    if p_sequence.iter().any(|&p| !(p > 1.0 && p <= 2.0)) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "sequence must lie in (1, 2]",
        });
    }
    if p_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "sequence must be decreasing",
        });
    }
    let sample = WeightedSample::unweighted(values.to_vec())?;
    p_sequence
        .iter()
        .map(|&p| p_average(&sample, p, DEFAULT_TOL).map(|r| r.value))
        .collect()
}

/// Node/weight rule on the closed unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallQuadrature {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl BallQuadrature {
    /// Polar product rule on the unit disk: Gauss–Legendre in `r` (with the
    /// Jacobian `r`) times `angular` equally spaced angles. `angular` must be
    /// even so the rule is centrally symmetric.
    pub fn polar(radial: usize, angular: usize) -> Result<Self> {
        if radial == 0 || angular == 0 || !angular.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "quadrature",
                reason: "need radial > 0 and an even angular count",
            });
        }
        let (r_nodes, r_weights) = gauss_legendre_unit(radial);
        let mut nodes = Vec::with_capacity(2 * radial * angular);
        let mut weights = Vec::with_capacity(radial * angular);
        let dtheta = 2.0 * math::PI / angular as f64;
        for (r, wr) in r_nodes.iter().zip(&r_weights) {
            for j in 0..angular {
                let theta = dtheta * j as f64;
                nodes.push(r * math::cos(theta));
                nodes.push(r * math::sin(theta));
                weights.push(wr * r * dtheta);
            }
        }
        Ok(Self {
            dim: 2,
            nodes,
            weights,
        })
    }

    /// Spherical product rule on the unit 3-ball: Gauss–Legendre in `r` (with
    /// `r²`) and in `cos θ`, and `azimuthal` equally spaced angles (even).
    pub fn spherical(radial: usize, polar: usize, azimuthal: usize) -> Result<Self> {
        if radial == 0 || polar == 0 || azimuthal == 0 || !azimuthal.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "quadrature",
                reason: "need positive counts and an even azimuthal count",
            });
        }
        let (r_nodes, r_weights) = gauss_legendre_unit(radial);
        let (c_nodes, c_weights) = gauss_legendre(polar);
        let dphi = 2.0 * math::PI / azimuthal as f64;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (r, wr) in r_nodes.iter().zip(&r_weights) {
            for (ct, wc) in c_nodes.iter().zip(&c_weights) {
                let st = math::sqrt((1.0 - ct * ct).max(0.0));
                for k in 0..azimuthal {
                    let ph = dphi * k as f64;
                    nodes.push(r * st * math::cos(ph));
                    nodes.push(r * st * math::sin(ph));
                    nodes.push(r * ct);
                    weights.push(wr * r * r * wc * dphi);
                }
            }
        }
        Ok(Self {
            dim: 3,
            nodes,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = math::cos(math::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if math::abs(dx) < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|w| 0.5 * w).collect(),
    )
}

/// p-average of `field` over the ball `B_radius(center)`, discretised by `quadrature`.
pub fn ball_paverage<F>(
    field: F,
    center: &[f64],
    radius: f64,
    p: f64,
    quadrature: &BallQuadrature,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if center.len() != quadrature.dim {
        return Err(Error::DimensionMismatch {
            expected: quadrature.dim,
            found: center.len(),
        });
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: "must be positive",
        });
    }
    let mut point = alloc::vec![0.0; center.len()];
    let mut values = Vec::with_capacity(quadrature.len());
    for i in 0..quadrature.len() {
        for (k, (c, n)) in center.iter().zip(quadrature.node(i)).enumerate() {
            point[k] = c + radius * n;
        }
        let v = field(&point);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                what: "field value",
                index: i,
            });
        }
        values.push(v);
    }
    let sample = WeightedSample::new(values, quadrature.weights.clone())?;
    Ok(p_average(&sample, p, DEFAULT_TOL)?.value)
}

/// Volume of the unit ball in ℝⁿ.
pub fn unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    math::pow(math::PI, h) / libm::tgamma(h + 1.0)
}

/// Hölder constant for ball p-averages of bounded functions (`p > 2`, full
/// balls of radius `radius` in ℝⁿ):
///
/// `|A(x₁) − A(x₂)| ≤ C ‖u‖_∞ |x₁ − x₂|^{1/(p−1)}` with
/// `C = 2^{(p−2)/(p−1)} ((2/ε) V_{n−1}/V_n)^{1/(p−1)}`.
pub fn ball_holder_constant(p: f64, dim: usize, radius: f64) -> f64 {
    let e = 1.0 / (p - 1.0);
    let ratio = 2.0 / radius * unit_ball_volume(dim - 1) / unit_ball_volume(dim);
    math::pow(2.0, (p - 2.0) * e) * math::pow(ratio, e)
}
