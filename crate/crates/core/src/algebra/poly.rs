//! Dense univariate polynomials over ℤ and ℚ with exact arithmetic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial with coefficients in ascending degree order, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type IntPolynomial = Polynomial<BigInt>;
pub type RationalPolynomial = Polynomial<BigRational>;

impl<T> Polynomial<T>
where
    T: Clone + Num + Neg<Output = T> + From<BigInt>,
{
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `c · xⁿ`.
    pub fn monomial(c: T, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// `x − r`.
    pub fn linear_root(r: T) -> Self {
        Self::new(vec![-r, T::one()])
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `xⁿ` (zero beyond the degree).
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// `p(x + s)`, by Horner's scheme in the shifted variable.
    pub fn shift(&self, s: &T) -> Self {
        let step = Self::new(vec![s.clone(), T::one()]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * &step) + &Self::new(vec![c.clone()])
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::new(vec![T::one()]), |acc, _| &acc * self)
    }
}

impl<T> Add for &Polynomial<T>
where
    T: Clone + Num + Neg<Output = T> + From<BigInt>,
{
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T> Sub for &Polynomial<T>
where
    T: Clone + Num + Neg<Output = T> + From<BigInt>,
{
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T> Mul for &Polynomial<T>
where
    T: Clone + Num + Neg<Output = T> + From<BigInt>,
{
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T> Neg for &Polynomial<T>
where
    T: Clone + Num + Neg<Output = T> + From<BigInt>,
{
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T> fmt::Display for Polynomial<T>
where
    T: Clone + Num + Neg<Output = T> + From<BigInt> + Signed + fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if !magnitude.is_one() || i == 0 {
                write!(f, "{magnitude}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl IntPolynomial {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `Π (x − r)` over the given integer roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::from_i64(&[1]), |acc, &r| {
            &acc * &Self::linear_root(BigInt::from(r))
        })
    }

    pub fn to_rational(&self) -> RationalPolynomial {
        RationalPolynomial::new(
            self.coeffs
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        )
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }
}

impl RationalPolynomial {
    /// Integer polynomial if every coefficient is an integer.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Euclidean division `self = q·rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        let d = rhs.degree().expect("division by the zero polynomial");
        let lead = rhs.leading().cloned().unwrap();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); n - d];
        for k in (0..n - d).rev() {
            let c = &rem[k + d] / &lead;
            if !c.is_zero() {
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Sturm sequence `p₀ = p, p₁ = p', p_{k+1} = −rem(p_{k−1}, p_k)`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        seq
    }
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn changes_at(seq: &[RationalPolynomial], x: &BigRational) -> usize {
    sign_changes(seq.iter().map(|p| sign(&p.eval(x))))
}

fn changes_at_infinity(seq: &[RationalPolynomial], negative: bool) -> usize {
    sign_changes(seq.iter().map(|p| {
        let s = sign(p.leading().expect("Sturm terms are nonzero"));
        if negative && p.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots.
pub fn real_root_count(poly: &IntPolynomial) -> usize {
    if poly.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = poly.to_rational().square_free_part().sturm_sequence();
    changes_at_infinity(&seq, true) - changes_at_infinity(&seq, false)
}

/// `1 + max |a_i / a_n|` rounded up: every real root lies strictly inside `(−B, B)`.
fn cauchy_bound(p: &RationalPolynomial) -> BigInt {
    let lead = p.leading().cloned().expect("nonzero polynomial");
    let m = p.coeffs[..p.coeffs.len() - 1]
        .iter()
        .map(|c| (c / &lead).abs())
        .max()
        .unwrap_or_else(BigRational::zero);
    m.ceil().to_integer() + BigInt::one()
}

/// A point of `(k, k+1)` that is not a root of `p`.
fn separator(p: &RationalPolynomial, k: &BigInt) -> BigRational {
    let base = BigRational::from_integer(k.clone());
    let mut j = 2i64;
    loop {
        let x = &base + BigRational::new(BigInt::one(), BigInt::from(j));
        if !p.eval(&x).is_zero() {
            return x;
        }
        j += 1;
    }
}

/// All integer roots of `poly`, in increasing order.
///
/// The real roots of the square-free part are isolated into unit integer
/// windows by Sturm-sequence bisection over `[−B, B]` (Cauchy bound), and the
/// one integer in each window containing a root is tested by exact
/// evaluation. For monic inputs every rational root is an integer, so an
/// empty result certifies that there is no rational root.
pub fn integer_root_test(poly: &IntPolynomial) -> Result<Vec<BigInt>> {
    if poly.is_zero() {
        return Err(Error::Domain(
            "the zero polynomial has every integer as a root",
        ));
    }
    if poly.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let sf = poly.to_rational().square_free_part();
    let seq = sf.sturm_sequence();
    let bound = cauchy_bound(&sf);
    let mut roots = Vec::new();
    // window (sep(a), sep(b)) holds the integers a+1 ..= b
    let a0 = -bound.clone() - BigInt::one();
    let s0 = separator(&sf, &a0);
    let b0 = bound;
    let t0 = separator(&sf, &b0);
    let (v0, w0) = (changes_at(&seq, &s0), changes_at(&seq, &t0));
    let mut stack = vec![(a0, v0, b0, w0)];
    while let Some((a, va, b, vb)) = stack.pop() {
        if va == vb {
            continue;
        }
        if &b - &a == BigInt::one() {
            if poly.eval(&b).is_zero() {
                roots.push(b);
            }
            continue;
        }
        let mid = (&a + &b).div_floor(&BigInt::from(2));
        let vm = changes_at(&seq, &separator(&sf, &mid));
        stack.push((a, va, mid.clone(), vm));
        stack.push((mid, vm, b, vb));
    }
    roots.sort();
    Ok(roots)
}

/// Real roots of `poly` isolated to rational intervals of width ≤ `width`.
pub fn isolate_real_roots(
    poly: &IntPolynomial,
    width: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    if poly.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = poly.to_rational().square_free_part();
    let seq = sf.sturm_sequence();
    let b = BigRational::from_integer(cauchy_bound(&sf));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = changes_at(&seq, &lo) - changes_at(&seq, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && &hi - &lo <= *width {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / &two;
        if sf.eval(&mid).is_zero() {
            // shrink a window around the simple root at mid until it holds only that root
            let mut delta = (&hi - &lo) / BigRational::from_integer(BigInt::from(4));
            loop {
                let (s1, s2) = (&mid - &delta, &mid + &delta);
                if !sf.eval(&s1).is_zero()
                    && !sf.eval(&s2).is_zero()
                    && changes_at(&seq, &s1) - changes_at(&seq, &s2) == 1
                {
                    out.push((mid.clone(), mid.clone()));
                    stack.push((lo, s1));
                    stack.push((s2, hi));
                    break;
                }
                delta /= &two;
            }
        } else {
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Midpoints of [`isolate_real_roots`] as floats.
pub fn approximate_real_roots(poly: &IntPolynomial) -> Vec<f64> {
    let width = BigRational::new(BigInt::one(), BigInt::from(1u64 << 40));
    isolate_real_roots(poly, &width)
        .into_iter()
        .map(|(lo, hi)| {
            ((lo + hi) / BigRational::from_integer(BigInt::from(2)))
                .to_f64()
                .unwrap_or(f64::NAN)
        })
        .collect()
}
