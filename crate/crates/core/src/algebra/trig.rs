//! Cosine power sums over equally spaced angles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math;

/// Direct and closed-form values of `Σ_{j<2k+2} cos^{2r}(a + 2πj/(2k+2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosPowerSum {
    pub numeric: f64,
    /// `(2k+2) C(2r, r) / 4^r`.
    pub closed_form: BigRational,
}

impl CosPowerSum {
    pub fn closed_form_f64(&self) -> f64 {
        self.closed_form.to_f64().unwrap_or(f64::NAN)
    }
}

/// `Σ_{j<m} cos^{2r}(a + 2πj/m)` by direct summation.
pub fn cos_power_direct(m: u32, r: u32, a: f64) -> f64 {
    (0..m)
        .map(|j| math::powi(math::cos(a + 2.0 * math::PI * j as f64 / m as f64), 2 * r))
        .sum()
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// `(2k+2) C(2r, r) / 4^r` as an exact rational.
pub fn cos_power_closed_form(k: u32, r: u32) -> BigRational {
    BigRational::new(
        BigInt::from(2 * k + 2) * binomial(2 * r, r),
        BigInt::from(4).pow(r),
    )
}

/// Cosine power sum over the `2k+2` polygon angles for `1 ≤ r ≤ k`; outside
/// that range the sum generally differs from the closed form.
pub fn cos_power_sum(k: u32, r: u32, a: f64) -> Result<CosPowerSum> {
    if k == 0 || r == 0 {
        return Err(Error::InvalidParameter {
            name: "k, r",
            reason: "must be at least 1",
        });
    }
    if r > k {
        return Err(Error::Domain("cosine power sum identity needs r ≤ k"));
    }
    Ok(CosPowerSum {
        numeric: cos_power_direct(2 * k + 2, r, a),
        closed_form: cos_power_closed_form(k, r),
    })
}

/// `Σ_{j<n} cos(α + jd) = sin(nd/2)/sin(d/2) · cos(α + (n−1)d/2)`, with the
/// limit `n cos α` when `d` is a multiple of 2π.
pub fn cos_arith_progression_sum(alpha: f64, d: f64, n: u32) -> f64 {
    let half = math::sin(0.5 * d);
    if math::abs(half) < 1e-15 {
        // cos(α + jd) = cos α for every j
        return n as f64 * math::cos(alpha);
    }
    math::sin(0.5 * n as f64 * d) / half * math::cos(alpha + 0.5 * (n as f64 - 1.0) * d)
}

/// Term-by-term `Σ_{j<n} cos(α + jd)`.
pub fn cos_arith_progression_direct(alpha: f64, d: f64, n: u32) -> f64 {
    (0..n).map(|j| math::cos(alpha + j as f64 * d)).sum()
}

/// Outcome of [`verify_trig`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrigReport {
    pub kmax: u32,
    pub cases: usize,
    /// `max |numeric − closed| / (2k+2)` over all `1 ≤ r ≤ k ≤ kmax` and angles.
    pub max_scaled_error: f64,
    /// `Σ cos⁴` over the six hexagon angles at `a = 0`.
    pub hexagon_fourth_power: f64,
    /// Deviation from the closed form at `k = 1, r = 2`, where the identity fails.
    pub negative_case_gap: f64,
    pub pass: bool,
}

/// Checks the power-sum identity for every `1 ≤ r ≤ k ≤ kmax` at `a = 0` and
/// `samples` random angles, against `tol · (2k+2)`.
pub fn verify_trig(kmax: u32, samples: usize, seed: u64, tol: f64) -> Result<TrigReport> {
    if kmax == 0 {
        return Err(Error::InvalidParameter {
            name: "kmax",
            reason: "must be at least 1",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles: alloc::vec::Vec<f64> = core::iter::once(0.0)
        .chain((0..samples).map(|_| rng.random_range(0.0..2.0 * math::PI)))
        .collect();
    let mut max_scaled_error = 0.0f64;
    let mut cases = 0;
    for k in 1..=kmax {
        for r in 1..=k {
            for &a in &angles {
                let s = cos_power_sum(k, r, a)?;
                max_scaled_error = max_scaled_error
                    .max(math::abs(s.numeric - s.closed_form_f64()) / (2 * k + 2) as f64);
                cases += 1;
            }
        }
    }
    let hexagon_fourth_power = cos_power_direct(6, 2, 0.0);
    let negative_case_gap = math::abs(
        cos_power_direct(4, 2, 0.0) - cos_power_closed_form(1, 2).to_f64().unwrap_or(f64::NAN),
    );
    let pass = max_scaled_error <= tol
        && math::abs(hexagon_fourth_power - 2.25) <= 6.0 * tol
        && negative_case_gap > tol;
    Ok(TrigReport {
        kmax,
        cases,
        max_scaled_error,
        hexagon_fourth_power,
        negative_case_gap,
        pass,
    })
}
