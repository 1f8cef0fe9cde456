// Float helpers backed by libm so the crate builds without std.

pub(crate) use libm::{cbrt, cos, fabs as abs, pow, sin, sqrt};

pub(crate) use core::f64::consts::PI;

/// `x^n` by repeated squaring.
pub(crate) fn powi(mut x: f64, mut n: u32) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= x;
        }
        x *= x;
        n >>= 1;
    }
    acc
}

/// `|x|^e`, using integer powers whenever `e` is integral.
pub(crate) fn abs_pow(x: f64, e: f64) -> f64 {
    let a = abs(x);
    if e == 0.0 {
        return 1.0;
    }
    if e > 0.0 && e <= 64.0 && e == libm::trunc(e) {
        powi(a, e as u32)
    } else {
        pow(a, e)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

pub(crate) fn is_finite_slice(a: &[f64]) -> bool {
    a.iter().all(|x| x.is_finite())
}
