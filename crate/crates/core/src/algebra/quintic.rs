//! Characterization polynomials of integer p-averages and their depression.
//!
//! For even `p` and integer data `x_i`, the p-average is the real root of
//! `Σ (x − x_i)^{p−1}`: a cubic for `p = 4`, a quintic for `p = 6`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use super::poly::{approximate_real_roots, integer_root_test, IntPolynomial, RationalPolynomial};
use crate::error::{Error, Result};

/// `Σ_i (x − x_i)^power` with exact integer coefficients.
pub fn power_sum_polynomial(values: &[i64], power: u32) -> Result<IntPolynomial> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(values.iter().fold(IntPolynomial::zero(), |acc, &x| {
        &acc + &IntPolynomial::linear_root(BigInt::from(x)).pow(power)
    }))
}

/// `Σ_i (x − x_i)⁵`, whose real root is the 6-average of the data.
pub fn six_average_equation(values: &[i64]) -> Result<IntPolynomial> {
    power_sum_polynomial(values, 5)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Depressed {
    /// Monic polynomial in `t` without a `t^{d−1}` term.
    pub depressed: RationalPolynomial,
    /// `x = t + shift`.
    pub shift: BigRational,
}

/// Normalises a cubic or quintic to monic form and substitutes
/// `x = t − c_{d−1}/d`, removing the subleading term.
pub fn depress(poly: &RationalPolynomial) -> Result<Depressed> {
    let d = match poly.degree() {
        Some(d @ (3 | 5)) => d,
        _ => {
            return Err(Error::Domain(
                "depression is defined for cubics and quintics",
            ))
        }
    };
    let monic = poly.monic();
    let shift = -monic.coeff(d - 1) / BigRational::from_integer(BigInt::from(d));
    Ok(Depressed {
        depressed: monic.shift(&shift),
        shift,
    })
}

/// [`depress`] for an integer polynomial.
pub fn depress_int(poly: &IntPolynomial) -> Result<Depressed> {
    depress(&poly.to_rational())
}

/// The depressed 6-average quintic of `{1, 6, 11, 13, 19}`:
/// `x⁵ + 376x³ + 72x² + 13460x + 156`.
pub fn expected_depressed_quintic() -> IntPolynomial {
    IntPolynomial::from_i64(&[156, 13460, 72, 376, 0, 1])
}

/// Coefficients of the resolvent sextic `p₂₀` for the quintic above, in
/// ascending order, exactly as printed. The printed list repeats
/// `−633810584502272` for both `x³` and `x²`; it is kept verbatim.
pub const RESOLVENT_P20: [&str; 7] = [
    "7102938318637196554440048",
    "-2545206831640273748008",
    "-633810584502272",
    "-633810584502272",
    "-4167324992",
    "107680",
    "1",
];

pub fn resolvent_p20() -> IntPolynomial {
    IntPolynomial::new(
        RESOLVENT_P20
            .iter()
            .map(|s| {
                BigInt::from_str_radix(s, 10).expect("fixture coefficients are decimal integers")
            })
            .collect(),
    )
}

/// End-to-end result of [`quintic_pipeline`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuinticCheck {
    pub values: Vec<i64>,
    pub quintic: IntPolynomial,
    pub depressed: RationalPolynomial,
    pub shift: BigRational,
    /// Depressed quintic has integer coefficients equal to [`expected_depressed_quintic`].
    pub matches_expected: bool,
    pub resolvent: IntPolynomial,
    pub resolvent_integer_roots: Vec<BigInt>,
    pub resolvent_real_roots: Vec<f64>,
}

impl QuinticCheck {
    /// Depression matches and the monic resolvent has no rational root.
    pub fn pass(&self) -> bool {
        self.matches_expected
            && self.resolvent_integer_roots.is_empty()
            && self.resolvent.is_monic()
    }
}

/// Builds and depresses the 6-average quintic of `values`, then runs the
/// integer-root test on the stored resolvent sextic.
pub fn quintic_pipeline(values: &[i64]) -> Result<QuinticCheck> {
    let quintic = six_average_equation(values)?;
    let Depressed { depressed, shift } = depress_int(&quintic)?;
    let matches_expected = depressed
        .to_integer()
        .is_some_and(|p| p == expected_depressed_quintic());
    let resolvent = resolvent_p20();
    let resolvent_integer_roots = integer_root_test(&resolvent)?;
    let resolvent_real_roots = approximate_real_roots(&resolvent);
    Ok(QuinticCheck {
        values: values.to_vec(),
        quintic,
        depressed,
        shift,
        matches_expected,
        resolvent,
        resolvent_integer_roots,
        resolvent_real_roots,
    })
}

/// Depressed cubic `t³ + pt + q` of the 4-average characterization
/// `(1/n) Σ (x − x_i)³`; returns `(p, q, shift)`.
pub fn four_average_depressed_cubic(
    values: &[i64],
) -> Result<(BigRational, BigRational, BigRational)> {
    let Depressed { depressed, shift } = depress_int(&power_sum_polynomial(values, 3)?)?;
    debug_assert!(depressed.coeff(2).is_zero());
    Ok((depressed.coeff(1), depressed.coeff(0), shift))
}
