//! Strategies and property checks shared by the property suite and the
//! acceptance run.

#![allow(dead_code)]

use std::sync::OnceLock;

use pavg_core::paverage::{ball_holder_constant, ball_paverage, BallQuadrature};
use pavg_core::solver::{jacobi_step, Domain};
use pavg_core::{p_average, Lattice, WeightedSample};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Slack for comparisons of p-averages, relative to the data scale.
pub const REL_TOL: f64 = 1e-9;

pub fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![1.05..12.0f64, Just(2.0), Just(4.0), Just(f64::INFINITY)]
}

pub fn sample() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(0.05..5.0f64, n),
        )
    })
}

fn avg(
    values: &[f64],
    weights: &[f64],
    p: f64,
) -> Result<pavg_core::PAverageResult, TestCaseError> {
    let s = WeightedSample::new(values.to_vec(), weights.to_vec())
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    p_average(&s, p, 1e-12).map_err(|e| TestCaseError::fail(e.to_string()))
}

fn scale(values: &[f64]) -> f64 {
    values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

pub fn check_stability(values: &[f64], weights: &[f64], p: f64) -> Result<(), TestCaseError> {
    let a = avg(values, weights, p)?.value;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    prop_assert!(lo <= a && a <= hi, "{a} outside [{lo}, {hi}]");
    Ok(())
}

/// Raising values never lowers the average; raising every value strictly
/// raises it.
pub fn check_monotonicity(
    values: &[f64],
    weights: &[f64],
    bumps: &[f64],
    p: f64,
) -> Result<(), TestCaseError> {
    let raised: Vec<f64> = values
        .iter()
        .zip(bumps.iter().cycle())
        .map(|(v, b)| v + b)
        .collect();
    let a = avg(values, weights, p)?.value;
    let b = avg(&raised, weights, p)?.value;
    let tol = REL_TOL * scale(&raised);
    prop_assert!(b >= a - tol, "{b} < {a}");
    let min_bump = bumps
        .iter()
        .take(values.len())
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_bump > 1e-3 && values.len() <= bumps.len() {
        prop_assert!(b > a, "strict increase failed: {b} vs {a}");
    }
    Ok(())
}

pub fn check_affine(
    values: &[f64],
    weights: &[f64],
    p: f64,
    lambda: f64,
    xi: f64,
) -> Result<(), TestCaseError> {
    let mapped: Vec<f64> = values.iter().map(|v| lambda * v + xi).collect();
    let a = avg(values, weights, p)?.value;
    let b = avg(&mapped, weights, p)?.value;
    let tol = REL_TOL * (lambda.abs() * scale(values) + xi.abs() + 1.0);
    prop_assert!(
        (b - (lambda * a + xi)).abs() <= tol,
        "{b} vs {}",
        lambda * a + xi
    );
    Ok(())
}

/// `‖φ − ψ‖_∞ ≤ δ ⇒ |A(φ) − A(ψ)| ≤ δ`.
pub fn check_perturbation(
    values: &[f64],
    weights: &[f64],
    noise: &[f64],
    p: f64,
) -> Result<(), TestCaseError> {
    let moved: Vec<f64> = values
        .iter()
        .zip(noise.iter().cycle())
        .map(|(v, e)| v + e)
        .collect();
    let delta = values
        .iter()
        .zip(&moved)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let a = avg(values, weights, p)?.value;
    let b = avg(&moved, weights, p)?.value;
    prop_assert!(
        (a - b).abs() <= delta + REL_TOL * scale(&moved),
        "|{a} − {b}| > {delta}"
    );
    Ok(())
}

/// `|σ(φ) − σ(ψ)| ≤ ‖φ − ψ‖_{L^p}` for the normalized weights.
pub fn check_dispersion_lipschitz(
    values: &[f64],
    weights: &[f64],
    noise: &[f64],
    p: f64,
) -> Result<(), TestCaseError> {
    let moved: Vec<f64> = values
        .iter()
        .zip(noise.iter().cycle())
        .map(|(v, e)| v + e)
        .collect();
    let total: f64 = weights.iter().sum();
    let dist = if p.is_finite() {
        let s: f64 = values
            .iter()
            .zip(&moved)
            .zip(weights)
            .map(|((a, b), w)| w * (a - b).abs().powf(p))
            .sum();
        (s / total).powf(1.0 / p)
    } else {
        values
            .iter()
            .zip(&moved)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let sa = avg(values, weights, p)?.dispersion;
    let sb = avg(&moved, weights, p)?.dispersion;
    prop_assert!(
        (sa - sb).abs() <= dist + REL_TOL * scale(&moved),
        "|{sa} − {sb}| > {dist}"
    );
    Ok(())
}

fn quadrature() -> &'static BallQuadrature {
    static Q: OnceLock<BallQuadrature> = OnceLock::new();
    Q.get_or_init(|| BallQuadrature::polar(24, 64).expect("valid rule"))
}

/// Parameters of a steep smooth step `tanh(k(⟨y, ν⟩ − s))` and two ball
/// centres at distance `h`.
#[derive(Debug, Clone)]
pub struct HolderCase {
    pub p: f64,
    pub steepness: f64,
    pub normal_angle: f64,
    pub offset: f64,
    pub center: [f64; 2],
    pub step_angle: f64,
    pub h: f64,
    pub radius: f64,
}

pub fn holder_case() -> impl Strategy<Value = HolderCase> {
    (
        2.05..8.0f64,
        1.0..60.0f64,
        0.0..std::f64::consts::TAU,
        -0.5..0.5f64,
        (-0.5..0.5f64, -0.5..0.5f64),
        0.0..std::f64::consts::TAU,
        1e-4..0.5f64,
        0.2..1.5f64,
    )
        .prop_map(
            |(p, steepness, normal_angle, offset, (cx, cy), step_angle, h, radius)| HolderCase {
                p,
                steepness,
                normal_angle,
                offset,
                center: [cx, cy],
                step_angle,
                h,
                radius,
            },
        )
}

pub fn check_holder(c: &HolderCase) -> Result<(), TestCaseError> {
    let nu = [c.normal_angle.cos(), c.normal_angle.sin()];
    let u = |y: &[f64]| (c.steepness * (y[0] * nu[0] + y[1] * nu[1] - c.offset)).tanh();
    let x1 = c.center;
    let x2 = [
        x1[0] + c.h * c.step_angle.cos(),
        x1[1] + c.h * c.step_angle.sin(),
    ];
    let q = quadrature();
    let fail = |e: pavg_core::Error| TestCaseError::fail(e.to_string());
    let a1 = ball_paverage(u, &x1, c.radius, c.p, q).map_err(fail)?;
    let a2 = ball_paverage(u, &x2, c.radius, c.p, q).map_err(fail)?;
    let bound = ball_holder_constant(c.p, 2, c.radius) * c.h.powf(1.0 / (c.p - 1.0));
    prop_assert!((a1 - a2).abs() <= bound + 1e-12, "|{a1} − {a2}| > {bound}");
    Ok(())
}

/// Small triangular lattice on the unit disk.
pub fn disk_lattice() -> &'static Lattice {
    static L: OnceLock<Lattice> = OnceLock::new();
    L.get_or_init(|| {
        let domain = Domain::ball(vec![0.0, 0.0], 1.0).expect("disk");
        Lattice::triangular(&domain, 0.25, 2).expect("lattice")
    })
}

pub fn node_values() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    let n = disk_lattice().len();
    (
        prop::collection::vec(-5.0..5.0f64, n),
        prop::collection::vec(-5.0..5.0f64, n),
    )
}

/// `‖T u − T v‖_∞ ≤ ‖u − v‖_∞` for one Jacobi sweep.
pub fn check_nonexpansive(u: &[f64], v: &[f64], p: f64) -> Result<(), TestCaseError> {
    let lattice = disk_lattice();
    let mut tu = vec![0.0; u.len()];
    let mut tv = vec![0.0; v.len()];
    jacobi_step(lattice, u, p, &mut tu);
    jacobi_step(lattice, v, p, &mut tv);
    let before = u
        .iter()
        .zip(v)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let after = tu
        .iter()
        .zip(&tv)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    prop_assert!(after <= before + REL_TOL * 10.0, "{after} > {before}");
    Ok(())
}
