//! Direction sets and the p-averaging-set identity.
//!
//! A finite, negation-closed, spanning set `J = {η_j}` with weights `ω_j` is a
//! (weighted) p-averaging set when, for every symmetric `A` and unit `u`,
//!
//! ```text
//! Σ ω_j ⟨u,η_j⟩^{p−2} ⟨Aη_j,η_j⟩ / Σ ω_j ⟨u,η_j⟩^{p−2} = d · (tr A / p + (p−2)/p · ⟨Au,u⟩)
//! ```
//!
//! for one constant `d = d_{p,n}`. Sets built from golden-ratio coordinates
//! also carry exact `ℚ[√5]` coordinates, and [`exact_certificate`] decides the
//! identity without floating point by checking that the moment tensors of
//! orders `p` and `p − 2` are isotropic.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::golden::QSqrt5;
use crate::linalg::{self, SymmetricMatrix};
use crate::math;

/// Finite symmetric set of weighted directions with its averaging exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    label: String,
    dim: usize,
    vectors: Vec<f64>,
    weights: Vec<f64>,
    exponent: u32,
    expected_d: Option<QSqrt5>,
    exact: Option<ExactCoordinates>,
}

#[derive(Debug, Clone, PartialEq)]
struct ExactCoordinates {
    vectors: Vec<Vec<QSqrt5>>,
    weights: Vec<QSqrt5>,
}

impl DirectionSet {
    /// Validates and builds a set. `exponent` must be even and at least 2.
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        vectors: Vec<Vec<f64>>,
        weights: Vec<f64>,
        exponent: u32,
        expected_d: Option<QSqrt5>,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: "must be at least 2",
            });
        }
        if exponent < 2 || !exponent.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "exponent",
                reason: "must be even and ≥ 2",
            });
        }
        if vectors.len() != weights.len() {
            return Err(Error::LengthMismatch {
                values: vectors.len(),
                weights: weights.len(),
            });
        }
        if vectors.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut flat = Vec::with_capacity(dim * vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if !math::is_finite_slice(v) {
                return Err(Error::NonFinite {
                    what: "direction",
                    index: i,
                });
            }
            if v.iter().all(|x| *x == 0.0) {
                return Err(Error::Domain(
                    "direction sets may not contain the zero vector",
                ));
            }
            flat.extend_from_slice(v);
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::NonPositiveWeight {
                index: i,
                weight: weights[i],
            });
        }
        let set = Self {
            label: label.into(),
            dim,
            vectors: flat,
            weights,
            exponent,
            expected_d,
            exact: None,
        };
        if !set.is_negation_closed() {
            return Err(Error::Domain("direction set is not closed under negation"));
        }
        if linalg::rank(&vectors, dim, 1e-10) < dim {
            return Err(Error::Domain("direction set does not span the space"));
        }
        Ok(set)
    }

    /// Builds a set from exact `ℚ[√5]` coordinates; the floating-point
    /// mirror is derived from them.
    pub fn from_exact(
        label: impl Into<String>,
        dim: usize,
        vectors: Vec<Vec<QSqrt5>>,
        weights: Vec<QSqrt5>,
        exponent: u32,
        expected_d: Option<QSqrt5>,
    ) -> Result<Self> {
        let float_vectors = vectors
            .iter()
            .map(|v| v.iter().map(QSqrt5::to_f64).collect())
            .collect();
        let float_weights = weights.iter().map(QSqrt5::to_f64).collect();
        let mut set = Self::new(
            label,
            dim,
            float_vectors,
            float_weights,
            exponent,
            expected_d,
        )?;
        set.exact = Some(ExactCoordinates { vectors, weights });
        Ok(set)
    }

    pub fn label(&self) -> &str {
        &self.label
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

    pub fn vector(&self, j: usize) -> &[f64] {
        &self.vectors[j * self.dim..(j + 1) * self.dim]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.chunks(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Known constant `d_{p,n}` for the set's own exponent.
    pub fn expected_d(&self) -> Option<&QSqrt5> {
        self.expected_d.as_ref()
    }

    pub fn expected_d_f64(&self) -> Option<f64> {
        self.expected_d.as_ref().map(QSqrt5::to_f64)
    }

    pub fn has_exact_coordinates(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact squared norms `|η_j|²`, when exact coordinates are known.
    pub fn exact_squared_norms(&self) -> Option<Vec<QSqrt5>> {
        let exact = self.exact.as_ref()?;
        Some(
            exact
                .vectors
                .iter()
                .map(|v| v.iter().fold(QSqrt5::zero(), |acc, x| &acc + &(x * x)))
                .collect(),
        )
    }

    /// Largest Euclidean norm of the directions.
    pub fn max_norm(&self) -> f64 {
        self.vectors().map(math::norm).fold(0.0, f64::max)
    }

    /// Common norm of all directions if they agree to a relative 1e-12.
    pub fn common_norm(&self) -> Option<f64> {
        let first = math::norm(self.vector(0));
        self.vectors()
            .all(|v| math::abs(math::norm(v) - first) <= 1e-12 * first)
            .then_some(first)
    }

    fn is_negation_closed(&self) -> bool {
        let scale = self
            .vectors
            .iter()
            .fold(0.0f64, |m, x| m.max(math::abs(*x)));
        let tol = 1e-12 * scale;
        (0..self.len()).all(|i| {
            let v = self.vector(i);
            (0..self.len()).any(|j| {
                let w = self.vector(j);
                v.iter().zip(w).all(|(a, b)| math::abs(a + b) <= tol)
                    && math::abs(self.weights[i] - self.weights[j]) <= 1e-12 * self.weights[i]
            })
        })
    }

    /// Every direction multiplied by `s > 0`. Averaging ratios scale by `s²`;
    /// the stored constant is dropped.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "scale",
                reason: "must be positive",
            });
        }
        let mut out = self.clone();
        out.vectors.iter_mut().for_each(|x| *x *= s);
        out.exact = None;
        out.expected_d = None;
        out.label = alloc::format!("{}*{}", self.label, s);
        Ok(out)
    }

    /// Every direction divided by its norm. When all directions share one
    /// exactly known squared norm `r²`, the constant becomes `d / r²`.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        for v in out.vectors.chunks_mut(self.dim) {
            let n = math::norm(v);
            v.iter_mut().for_each(|x| *x /= n);
        }
        out.expected_d = None;
        if let (Some(d), Some(norms)) = (&self.expected_d, self.exact_squared_norms()) {
            if norms.iter().all(|n| *n == norms[0]) {
                out.expected_d = Some(d / &norms[0]);
            }
        } else if let (Some(d), Some(r)) = (&self.expected_d, self.common_norm()) {
            // float-only sets: keep a rational constant only for unit sets
            if math::abs(r - 1.0) <= 1e-12 {
                out.expected_d = Some(d.clone());
            }
        }
        out.exact = None;
        out.label = alloc::format!("{}/normalized", self.label);
        out
    }

    /// Applies the orthogonal row-major matrix `q` to every direction.
    pub fn transformed(&self, q: &[f64]) -> Result<Self> {
        if q.len() != self.dim * self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim * self.dim,
                found: q.len(),
            });
        }
        let mut out = self.clone();
        for (dst, src) in out
            .vectors
            .chunks_mut(self.dim)
            .zip(self.vectors.chunks(self.dim))
        {
            dst.copy_from_slice(&linalg::mat_vec(q, src));
        }
        out.exact = None;
        Ok(out)
    }

    /// Same set with a different averaging exponent and no known constant.
    pub fn with_exponent(&self, exponent: u32) -> Result<Self> {
        if exponent < 2 || !exponent.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "exponent",
                reason: "must be even and ≥ 2",
            });
        }
        let mut out = self.clone();
        if exponent != self.exponent {
            out.exponent = exponent;
            out.expected_d = None;
        }
        Ok(out)
    }
}

/// Symmetric matrix `A` together with a unit direction `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProbe {
    matrix: SymmetricMatrix,
    direction: Vec<f64>,
}

impl SymmetricProbe {
    /// Requires `|u| = 1` within 1e-14.
    pub fn new(matrix: SymmetricMatrix, direction: Vec<f64>) -> Result<Self> {
        if direction.len() != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                found: direction.len(),
            });
        }
        if math::abs(math::norm(&direction) - 1.0) > 1e-14 {
            return Err(Error::Domain("probe direction must be a unit vector"));
        }
        Ok(Self { matrix, direction })
    }

    /// Normalises `direction` before building the probe.
    pub fn normalizing(matrix: SymmetricMatrix, direction: Vec<f64>) -> Result<Self> {
        let n = math::norm(&direction);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::ZeroGradient);
        }
        Self::new(matrix, direction.iter().map(|x| x / n).collect())
    }

    /// Random probe: symmetric matrix with upper-triangle entries uniform in
    /// `[−1, 1]` and a direction uniform on the sphere.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let upper: Vec<f64> = (0..dim * (dim + 1) / 2)
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        let matrix =
            SymmetricMatrix::from_upper(dim, &upper).expect("upper triangle has the right size");
        loop {
            let g: Vec<f64> = (0..dim)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let n = math::norm(&g);
            if n > 1e-8 {
                let direction = g.iter().map(|x| x / n).collect();
                return Self { matrix, direction };
            }
        }
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    /// `tr A / p + (p − 2)/p · ⟨Au,u⟩`.
    pub fn game_form(&self, p: f64) -> f64 {
        self.matrix.trace() / p + (p - 2.0) / p * self.matrix.quad_form(&self.direction)
    }
}

/// The 2k+2 unit vectors of the regular polygon, rotated by `rotation`,
/// as a 2k-averaging set with `d = 1`.
pub fn polygon_set(k: u32, rotation: f64) -> Result<DirectionSet> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "must be at least 1",
        });
    }
    let m = 2 * k + 2;
    let vectors = (0..m)
        .map(|j| {
            let theta = rotation + 2.0 * math::PI * j as f64 / m as f64;
            vec![math::cos(theta), math::sin(theta)]
        })
        .collect();
    DirectionSet::new(
        alloc::format!("polygon:k={k}"),
        2,
        vectors,
        vec![1.0; m as usize],
        2 * k,
        Some(QSqrt5::one()),
    )
}

/// Exceptional polytopes with golden-ratio vertex coordinates (and the 24-cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolytopeName {
    Icosahedron,
    Dodecahedron,
    Cell24,
    Cell600,
    Cell120,
}

impl PolytopeName {
    pub const ALL: [PolytopeName; 5] = [
        Self::Icosahedron,
        Self::Dodecahedron,
        Self::Cell24,
        Self::Cell600,
        Self::Cell120,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Icosahedron => "icosahedron",
            Self::Dodecahedron => "dodecahedron",
            Self::Cell24 => "cell24",
            Self::Cell600 => "cell600",
            Self::Cell120 => "cell120",
        }
    }
}

impl fmt::Display for PolytopeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolytopeName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

fn q(n: i64) -> QSqrt5 {
    QSqrt5::integer(n)
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in all_permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn is_even_permutation(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn cyclic_permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|s| (0..n).map(|i| (i + s) % n).collect())
        .collect()
}

/// All sign choices on nonzero entries of every position permutation of
/// `base`, deduplicated exactly and collected in sorted order.
fn signed_orbit(
    base: &[QSqrt5],
    perms: &[Vec<usize>],
    out: &mut BTreeSet<Vec<(BigRational, BigRational)>>,
) {
    let n = base.len();
    for perm in perms {
        // coordinate i of the image is base[perm[i]]
        let permuted: Vec<QSqrt5> = (0..n).map(|i| base[perm[i]].clone()).collect();
        let nonzero: Vec<usize> = (0..n).filter(|&i| !permuted[i].is_zero()).collect();
        for mask in 0u32..(1 << nonzero.len()) {
            let mut v = permuted.clone();
            for (bit, &i) in nonzero.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    v[i] = -v[i].clone();
                }
            }
            out.insert(v.into_iter().map(|x| (x.a, x.b)).collect());
        }
    }
}

fn orbit_vectors(bases: &[(Vec<QSqrt5>, &[Vec<usize>])]) -> Vec<Vec<QSqrt5>> {
    let mut set = BTreeSet::new();
    for (base, perms) in bases {
        signed_orbit(base, perms, &mut set);
    }
    set.into_iter()
        .map(|v| v.into_iter().map(|(a, b)| QSqrt5::new(a, b)).collect())
        .collect()
}

/// Exact vertex list of a named polytope with `p = 4`.
pub fn named_polytope(name: PolytopeName) -> DirectionSet {
    let phi = QSqrt5::phi();
    let phi_inv = phi.inverse().expect("φ ≠ 0");
    let sqrt5 = QSqrt5::sqrt5();
    let zero = QSqrt5::zero();
    let one = QSqrt5::one();
    let cyclic3 = cyclic_permutations(3);
    let all4 = all_permutations(4);
    let even4: Vec<Vec<usize>> = all4
        .iter()
        .filter(|p| is_even_permutation(p))
        .cloned()
        .collect();
    let identity4 = vec![vec![0, 1, 2, 3]];

    let (dim, vectors, expected) = match name {
        PolytopeName::Icosahedron => {
            let v = orbit_vectors(&[(vec![zero.clone(), one.clone(), phi.clone()], &cyclic3)]);
            // (φ² + 1)·4/5
            let d = &(&(&phi * &phi) + &one) * &QSqrt5::rational(4, 5);
            (3, v, d)
        }
        PolytopeName::Dodecahedron => {
            let v = orbit_vectors(&[
                (
                    vec![one.clone(), one.clone(), one.clone()],
                    &[vec![0, 1, 2]],
                ),
                (vec![zero.clone(), phi_inv.clone(), phi.clone()], &cyclic3),
            ]);
            (3, v, QSqrt5::rational(12, 5))
        }
        PolytopeName::Cell24 => {
            let v = orbit_vectors(&[(
                vec![one.clone(), one.clone(), zero.clone(), zero.clone()],
                &all4,
            )]);
            (4, v, QSqrt5::rational(4, 3))
        }
        PolytopeName::Cell600 => {
            let v = orbit_vectors(&[
                (
                    vec![one.clone(), one.clone(), one.clone(), one.clone()],
                    &identity4,
                ),
                (vec![q(2), zero.clone(), zero.clone(), zero.clone()], &all4),
                (
                    vec![phi.clone(), one.clone(), phi_inv.clone(), zero.clone()],
                    &even4,
                ),
            ]);
            (4, v, QSqrt5::rational(8, 3))
        }
        PolytopeName::Cell120 => {
            let phi2 = &phi * &phi;
            let phi_inv2 = &phi_inv * &phi_inv;
            let v = orbit_vectors(&[
                (vec![q(2), q(2), zero.clone(), zero.clone()], &all4),
                (
                    vec![sqrt5.clone(), one.clone(), one.clone(), one.clone()],
                    &all4,
                ),
                (
                    vec![phi.clone(), phi.clone(), phi.clone(), phi_inv2.clone()],
                    &all4,
                ),
                (
                    vec![
                        phi2.clone(),
                        phi_inv.clone(),
                        phi_inv.clone(),
                        phi_inv.clone(),
                    ],
                    &all4,
                ),
                (
                    vec![phi2.clone(), phi_inv2.clone(), one.clone(), zero.clone()],
                    &even4,
                ),
                (
                    vec![sqrt5.clone(), phi_inv.clone(), phi.clone(), zero.clone()],
                    &even4,
                ),
                (
                    vec![q(2), one.clone(), phi.clone(), phi_inv.clone()],
                    &even4,
                ),
            ]);
            (4, v, QSqrt5::rational(16, 3))
        }
    };
    let weights = vec![QSqrt5::one(); vectors.len()];
    DirectionSet::from_exact(name.as_str(), dim, vectors, weights, 4, Some(expected))
        .expect("polytope vertex sets are symmetric and spanning")
}

/// Half-cube vertices `(±½, …, ±½)` with weight `16/2ⁿ` together with the
/// signed unit basis vectors (weight 1): a weighted 4-averaging set with
/// `d = 4/6`.
pub fn weighted_cross_cube(n: usize) -> Result<DirectionSet> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must lie in 2..=6",
        });
    }
    let half = QSqrt5::rational(1, 2);
    let cube_weight = QSqrt5::rational(16, 1 << n);
    let mut vectors = Vec::new();
    let mut weights = Vec::new();
    for mask in 0u32..(1 << n) {
        vectors.push(
            (0..n)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        -half.clone()
                    } else {
                        half.clone()
                    }
                })
                .collect(),
        );
        weights.push(cube_weight.clone());
    }
    for i in 0..n {
        for s in [1, -1] {
            let mut v = vec![QSqrt5::zero(); n];
            v[i] = QSqrt5::integer(s);
            vectors.push(v);
            weights.push(QSqrt5::one());
        }
    }
    DirectionSet::from_exact(
        alloc::format!("cross-cube:n={n}"),
        n,
        vectors,
        weights,
        4,
        Some(QSqrt5::rational(4, 6)),
    )
}

/// Coefficients of `tr A` and `⟨Au,u⟩` in the displayed p = 6 ratio of
/// [`hexagon_p6_set`]: `(tr A + 4⟨Au,u⟩)/6`.
pub const P6_DISPLAYED_COEFFICIENTS: (f64, f64) = (1.0 / 6.0, 4.0 / 6.0);

/// The eight vectors `(±1/√2, ±1/√2), (±1, 0), (0, ±1)` with unit weights
/// and `p = 6`.
///
/// These are the vertices of the regular octagon, i.e. `polygon_set(3, 0)`
/// reordered, so `d = 1`. This agrees with [`P6_DISPLAYED_COEFFICIENTS`]:
/// `d/p = 1/6` and `d(p−2)/p = 4/6`.
pub fn hexagon_p6_set() -> DirectionSet {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let vectors = vec![
        vec![h, h],
        vec![h, -h],
        vec![-h, h],
        vec![-h, -h],
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.0, 1.0],
        vec![0.0, -1.0],
    ];
    DirectionSet::new("p6-2d", 2, vectors, vec![1.0; 8], 6, Some(QSqrt5::one()))
        .expect("octagon directions are symmetric and spanning")
}

/// The displayed p = 6 ratio `(tr A + 4⟨Au,u⟩)/6`.
pub fn p6_displayed_ratio(probe: &SymmetricProbe) -> f64 {
    let (ct, cq) = P6_DISPLAYED_COEFFICIENTS;
    ct * probe.matrix.trace() + cq * probe.matrix.quad_form(&probe.direction)
}

/// `R(A, u)` for the set's own exponent.
pub fn averaging_ratio(set: &DirectionSet, probe: &SymmetricProbe) -> Result<f64> {
    averaging_ratio_with_exponent(set, probe, set.exponent as f64)
}

/// `Σ ω|⟨u,η⟩|^{p−2}⟨Aη,η⟩ / Σ ω|⟨u,η⟩|^{p−2}` for any real `p ≥ 2`.
pub fn averaging_ratio_with_exponent(
    set: &DirectionSet,
    probe: &SymmetricProbe,
    p: f64,
) -> Result<f64> {
    if probe.direction.len() != set.dim {
        return Err(Error::DimensionMismatch {
            expected: set.dim,
            found: probe.direction.len(),
        });
    }
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "must be finite and ≥ 2",
        });
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (eta, w) in set.vectors().zip(&set.weights) {
        let s = w * math::abs_pow(math::dot(&probe.direction, eta), p - 2.0);
        num += s * probe.matrix.quad_form(eta);
        den += s;
    }
    if !(den > 0.0) {
        return Err(Error::Domain("degenerate averaging-ratio denominator"));
    }
    Ok(num / den)
}

/// Outcome of [`verify_averaging_set`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub p: u32,
    pub trials: usize,
    /// Least-squares fit of `d` over all probes.
    pub d_estimate: f64,
    /// `max |R(A,u) − d_estimate · (tr A/p + (p−2)/p ⟨Au,u⟩)|`.
    pub max_residual: f64,
    /// Known constant, reported only when `p` is the set's own exponent.
    pub expected_d: Option<f64>,
    pub d_error: Option<f64>,
    pub pass: bool,
}

/// Tests the p-averaging identity on `trials` random probes drawn from a
/// ChaCha8 stream seeded with `seed`.
///
/// Passes when every residual, and the deviation of `d_estimate` from the
/// known constant (if any), is at most `tol`.
pub fn verify_averaging_set(
    set: &DirectionSet,
    p: u32,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<VerifyReport> {
    if trials < 2 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "need at least 2",
        });
    }
    if p < 2 || !p.is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "must be an even integer ≥ 2",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pf = p as f64;
    let mut pairs = Vec::with_capacity(trials);
    for _ in 0..trials {
        let probe = SymmetricProbe::random(set.dim, &mut rng);
        let ratio = averaging_ratio_with_exponent(set, &probe, pf)?;
        pairs.push((ratio, probe.game_form(pf)));
    }
    let (rb, bb) = pairs
        .iter()
        .fold((0.0, 0.0), |(rb, bb), (r, b)| (rb + r * b, bb + b * b));
    let d_estimate = rb / bb;
    let max_residual = pairs
        .iter()
        .map(|(r, b)| math::abs(r - d_estimate * b))
        .fold(0.0, f64::max);
    let expected_d = if p == set.exponent {
        set.expected_d_f64()
    } else {
        None
    };
    let d_error = expected_d.map(|d| math::abs(d - d_estimate));
    let pass = max_residual <= tol && d_error.is_none_or(|e| e <= tol);
    Ok(VerifyReport {
        p,
        trials,
        d_estimate,
        max_residual,
        expected_d,
        d_error,
        pass,
    })
}

/// Exact isotropy data of a set's moment tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCertificate {
    pub p: u32,
    /// `Σ ω η₁^p`.
    pub alpha: QSqrt5,
    /// `Σ ω η₁^{p−2}`.
    pub beta: QSqrt5,
    /// Both moment tensors are multiples of the isotropic ones.
    pub isotropic: bool,
    /// `α p / ((p − 1) β)`, meaningful when `isotropic`.
    pub d: QSqrt5,
}

fn double_factorial_odd(m: i64) -> i64 {
    // (m−1)!! for even m
    (1..m).step_by(2).product::<i64>().max(1)
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `M_c = Σ ω Π η_i^{c_i}` over every composition `c` of `order` and the
/// isotropy check `M_c = α Π(c_i−1)!!/(order−1)!!` (zero if any `c_i` is odd).
fn isotropic_moment(exact: &ExactCoordinates, dim: usize, order: u32) -> (QSqrt5, bool) {
    let moment = |c: &[u32]| -> QSqrt5 {
        let mut acc = QSqrt5::zero();
        for (v, w) in exact.vectors.iter().zip(&exact.weights) {
            let mut term = w.clone();
            for (x, &e) in v.iter().zip(c) {
                if e > 0 {
                    term = &term * &x.pow(e);
                }
            }
            acc = &acc + &term;
        }
        acc
    };
    let mut axis = vec![0u32; dim];
    axis[0] = order;
    let alpha = moment(&axis);
    let denom = double_factorial_odd(order as i64);
    let isotropic = compositions(order, dim).iter().all(|c| {
        let m = moment(c);
        if c.iter().any(|e| e % 2 == 1) {
            return m.is_zero();
        }
        let num: i64 = c.iter().map(|&e| double_factorial_odd(e as i64)).product();
        m == &alpha * &QSqrt5::rational(num, denom)
    });
    (alpha, isotropic)
}

/// Decides the p-averaging identity in exact arithmetic, for sets with exact
/// coordinates. Returns `None` when only floating-point coordinates exist.
pub fn exact_certificate(set: &DirectionSet, p: u32) -> Result<Option<ExactCertificate>> {
    if p < 2 || !p.is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "must be an even integer ≥ 2",
        });
    }
    let Some(exact) = &set.exact else {
        return Ok(None);
    };
    let (alpha, iso_p) = isotropic_moment(exact, set.dim, p);
    let (beta, iso_q) = isotropic_moment(exact, set.dim, p - 2);
    let d = if beta.is_zero() {
        QSqrt5::zero()
    } else {
        &(&alpha * &QSqrt5::integer(p as i64)) / &(&beta * &QSqrt5::integer(p as i64 - 1))
    };
    Ok(Some(ExactCertificate {
        p,
        alpha,
        beta,
        isotropic: iso_p && iso_q,
        d,
    }))
}

/// Exact `Σ ω ⟨u,η⟩²` for a rational direction `u`.
pub fn exact_second_moment(set: &DirectionSet, u: &[BigRational]) -> Option<QSqrt5> {
    let exact = set.exact.as_ref()?;
    let mut acc = QSqrt5::zero();
    for (v, w) in exact.vectors.iter().zip(&exact.weights) {
        let dot = v.iter().zip(u).fold(QSqrt5::zero(), |acc, (x, ui)| {
            &acc + &(x * &QSqrt5::from(ui.clone()))
        });
        acc = &acc + &(w * &(&dot * &dot));
    }
    Some(acc)
}

/// Parses `name | hexagon | polygon:k=K[,rot=R] | cross-cube:n=N | p6-2d`.
pub fn parse_set(spec: &str) -> Result<DirectionSet> {
    let spec = spec.trim();
    match spec {
        "p6-2d" => return Ok(hexagon_p6_set()),
        "hexagon" => return polygon_set(2, 0.0),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("polygon:") {
        let mut k = None;
        let mut rotation = 0.0;
        for part in rest.split(',') {
            match part.split_once('=') {
                Some(("k", v)) => k = v.trim().parse::<u32>().ok(),
                Some(("rot", v)) => {
                    rotation = v
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidParameter {
                            name: "rot",
                            reason: "not a number",
                        })?
                }
                _ => return Err(Error::UnknownName(spec.to_string())),
            }
        }
        let k = k.ok_or(Error::InvalidParameter {
            name: "k",
            reason: "missing or not an integer",
        })?;
        return polygon_set(k, rotation);
    }
    if let Some(rest) = spec.strip_prefix("cross-cube:") {
        let n = rest
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or(Error::InvalidParameter {
                name: "n",
                reason: "missing or not an integer",
            })?;
        return weighted_cross_cube(n);
    }
    Ok(named_polytope(spec.parse()?))
}

impl ExactCertificate {
    /// `d` compared with a known constant.
    pub fn matches(&self, expected: &QSqrt5) -> bool {
        self.isotropic && &self.d == expected
    }
}
