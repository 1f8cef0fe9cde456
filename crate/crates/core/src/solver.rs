//! Dirichlet problems for the game p-Laplacian on tessellating lattices.
//!
//! The discrete problem is the fixed point `u(x) = A_ε^p[u](x)` at interior
//! nodes, where the average runs over the stencil neighbours of `x`, with
//! `u = g` fixed on the boundary strip. Two lattices tessellate with a
//! p-averaging stencil: the triangular (Eisenstein) lattice with the hexagon
//! and the D₄ lattice with the 24-cell.
//!
//! Throughout, `ε` in the scheme residual is the common distance between a
//! node and its stencil neighbours: the spacing on the triangular lattice and
//! `√2 ·` spacing on D₄.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::operators::{scheme_constant, Geometry};
use crate::paverage::{p_average_raw, DEFAULT_TOL};
use crate::polytopes::{named_polytope, polygon_set, DirectionSet, PolytopeName};

/// One component of a domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Ball { center: Vec<f64>, radius: f64 },
    Box { min: Vec<f64>, max: Vec<f64> },
}

impl Region {
    fn dim(&self) -> usize {
        match self {
            Region::Ball { center, .. } => center.len(),
            Region::Box { min, .. } => min.len(),
        }
    }

    fn contains_strictly(&self, x: &[f64]) -> bool {
        match self {
            Region::Ball { center, radius } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                d2 < radius * radius
            }
            Region::Box { min, max } => x
                .iter()
                .zip(min.iter().zip(max))
                .all(|(v, (lo, hi))| lo < v && v < hi),
        }
    }

    fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Region::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Region::Box { min, max } => (min.clone(), max.clone()),
        }
    }
}

/// Open domain given as a union of balls and boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    dim: usize,
    regions: Vec<Region>,
}

impl Domain {
    pub fn new(regions: Vec<Region>) -> Result<Self> {
        let Some(first) = regions.first() else {
            return Err(Error::Domain("domain needs at least one region"));
        };
        let dim = first.dim();
        for r in &regions {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
            match r {
                Region::Ball { center, radius } => {
                    if !(radius.is_finite() && *radius > 0.0) || !math::is_finite_slice(center) {
                        return Err(Error::InvalidParameter {
                            name: "radius",
                            reason: "must be finite and positive",
                        });
                    }
                }
                Region::Box { min, max } => {
                    if max.len() != dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            found: max.len(),
                        });
                    }
                    if !(math::is_finite_slice(min) && math::is_finite_slice(max))
                        || min.iter().zip(max).any(|(a, b)| a >= b)
                    {
                        return Err(Error::InvalidParameter {
                            name: "box",
                            reason: "need finite min < max",
                        });
                    }
                }
            }
        }
        Ok(Self { dim, regions })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        Self::new(vec![Region::Ball { center, radius }])
    }

    pub fn cube(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        Self::new(vec![Region::Box { min, max }])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.regions.iter().any(|r| r.contains_strictly(x))
    }

    fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for r in &self.regions {
            let (a, b) = r.bounds();
            for i in 0..self.dim {
                lo[i] = lo[i].min(a[i]);
                hi[i] = hi[i].max(b[i]);
            }
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Interior,
    Strip,
}

/// ε-scaled lattice nodes covering a domain, with interior nodes first and
/// the boundary strip (neighbours of interior nodes outside the domain) after.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    dim: usize,
    spacing: f64,
    neighbor_distance: f64,
    stencil: DirectionSet,
    nodes: Vec<f64>,
    interior_count: usize,
    adjacency: Vec<usize>,
}

struct LatticeSpec<'a> {
    /// Columns are the lattice generators, row-major.
    basis: &'a [f64],
    /// Integer offsets whose images are the stencil, in stencil order.
    offsets: &'a [Vec<i64>],
    parity_even: bool,
}

fn invert(m: &[f64], n: usize) -> Vec<f64> {
    let mut inv = vec![0.0; n * n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = crate::linalg::solve(m, &e).expect("lattice basis is invertible");
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    inv
}

impl Lattice {
    fn build(
        domain: &Domain,
        spacing: f64,
        spec: LatticeSpec<'_>,
        stencil: DirectionSet,
    ) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: "must be positive",
            });
        }
        let n = domain.dim;
        let (lo, hi) = domain.bounds();
        let inv = invert(spec.basis, n);
        // integer coordinate ranges covering the bounding box
        let mut ranges = Vec::with_capacity(n);
        for i in 0..n {
            let (mut a, mut b) = (0.0, 0.0);
            for j in 0..n {
                let c = inv[i * n + j] / spacing;
                let (x, y) = (c * lo[j], c * hi[j]);
                a += x.min(y);
                b += x.max(y);
            }
            let (a, b) = (libm::floor(a) as i64 - 1, libm::ceil(b) as i64 + 1);
            if b - a > 20_000 {
                return Err(Error::InvalidParameter {
                    name: "epsilon",
                    reason: "too small for the domain",
                });
            }
            ranges.push((a, b));
        }
        let position = |m: &[i64]| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    spacing
                        * (0..n)
                            .map(|j| spec.basis[i * n + j] * m[j] as f64)
                            .sum::<f64>()
                })
                .collect()
        };
        let mut index: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        let mut keys: Vec<Vec<i64>> = Vec::new();
        let mut nodes = Vec::new();
        let mut m: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            if !spec.parity_even || m.iter().sum::<i64>().rem_euclid(2) == 0 {
                let x = position(&m);
                if domain.contains(&x) {
                    index.insert(m.clone(), keys.len());
                    keys.push(m.clone());
                    nodes.extend_from_slice(&x);
                }
            }
            for i in 0..n {
                m[i] += 1;
                if m[i] <= ranges[i].1 {
                    continue 'outer;
                }
                m[i] = ranges[i].0;
            }
            break;
        }
        let interior_count = keys.len();
        if interior_count == 0 {
            return Err(Error::EmptyInterior);
        }
        let mut adjacency = Vec::with_capacity(interior_count * spec.offsets.len());
        for k in 0..interior_count {
            for off in spec.offsets {
                let nb: Vec<i64> = keys[k].iter().zip(off).map(|(a, b)| a + b).collect();
                let idx = match index.get(&nb) {
                    Some(&i) => i,
                    None => {
                        let i = keys.len();
                        nodes.extend_from_slice(&position(&nb));
                        index.insert(nb.clone(), i);
                        keys.push(nb);
                        i
                    }
                };
                adjacency.push(idx);
            }
        }
        let neighbor_distance = spacing
            * stencil
                .common_norm()
                .expect("lattice stencils have one norm");
        Ok(Self {
            dim: n,
            spacing,
            neighbor_distance,
            stencil,
            nodes,
            interior_count,
            adjacency,
        })
    }

    /// Triangular lattice `ε(a + bω)`, `ω = e^{2πi/3}`, with the stencil
    /// `polygon_set(k, 0)`. Only `k = 2` (the hexagon) tessellates.
    pub fn triangular(domain: &Domain, epsilon: f64, k: u32) -> Result<Self> {
        if domain.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: domain.dim,
            });
        }
        if k != 2 {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: "only the hexagonal stencil (k = 2) tessellates the plane",
            });
        }
        let s3 = math::sqrt(3.0);
        let basis = [1.0, -0.5, 0.0, 0.5 * s3];
        let offsets = [
            vec![1, 0],
            vec![1, 1],
            vec![0, 1],
            vec![-1, 0],
            vec![-1, -1],
            vec![0, -1],
        ];
        let spec = LatticeSpec {
            basis: &basis,
            offsets: &offsets,
            parity_even: false,
        };
        Self::build(domain, epsilon, spec, polygon_set(2, 0.0)?)
    }

    /// D₄ lattice: `ε ·` integer 4-vectors with even coordinate sum, with the
    /// 24-cell as stencil (neighbour distance `√2 ε`).
    pub fn d4(domain: &Domain, epsilon: f64) -> Result<Self> {
        if domain.dim != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: domain.dim,
            });
        }
        let stencil = named_polytope(PolytopeName::Cell24);
        let offsets: Vec<Vec<i64>> = stencil
            .vectors()
            .map(|v| v.iter().map(|x| libm::round(*x) as i64).collect())
            .collect();
        let mut basis = [0.0; 16];
        for i in 0..4 {
            basis[i * 5] = 1.0;
        }
        let spec = LatticeSpec {
            basis: &basis,
            offsets: &offsets,
            parity_even: true,
        };
        Self::build(domain, epsilon, spec, stencil)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Common distance from a node to each stencil neighbour.
    pub fn neighbor_distance(&self) -> f64 {
        self.neighbor_distance
    }

    /// Unscaled stencil; node offsets are `spacing ·` these vectors.
    pub fn stencil(&self) -> &DirectionSet {
        &self.stencil
    }

    pub fn len(&self) -> usize {
        self.nodes.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn interior_count(&self) -> usize {
        self.interior_count
    }

    pub fn strip_count(&self) -> usize {
        self.len() - self.interior_count
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn class(&self, i: usize) -> NodeClass {
        if i < self.interior_count {
            NodeClass::Interior
        } else {
            NodeClass::Strip
        }
    }

    /// Node indices of the stencil neighbours of interior node `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        let s = self.stencil.len();
        &self.adjacency[i * s..(i + 1) * s]
    }

    /// Node values with `g` on the strip and `fill` in the interior.
    pub fn initial_values<G: Fn(&[f64]) -> f64>(&self, g: G, fill: f64) -> Result<Vec<f64>> {
        let mut u = vec![fill; self.len()];
        for i in self.interior_count..self.len() {
            let v = g(self.node(i));
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    what: "boundary value",
                    index: i,
                });
            }
            u[i] = v;
        }
        Ok(u)
    }
}

/// Update order of the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sweep {
    /// Every node from the previous iterate; the reference semantics.
    #[default]
    Jacobi,
    /// In-place updates in node order.
    GaussSeidel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Stop once the sup-norm of an update is at most `tol`.
    pub tol: f64,
    pub max_iters: u64,
    pub sweep: Sweep,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 1_000_000,
            sweep: Sweep::Jacobi,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: u64,
    pub final_update_norm: f64,
    pub converged: bool,
    /// Values at every node, interior first.
    pub solution: Vec<f64>,
    pub sup_error_vs_reference: Option<f64>,
}

impl SolveReport {
    /// Records the interior sup-error against `reference`.
    pub fn attach_reference<F: Fn(&[f64]) -> f64>(&mut self, lattice: &Lattice, reference: F) {
        self.sup_error_vs_reference =
            Some(error_report(lattice, &self.solution, reference).sup_error);
    }
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

/// The p-average of `u` over the stencil of interior node `i`.
pub fn node_update(lattice: &Lattice, u: &[f64], i: usize, p: f64) -> f64 {
    let weights = lattice.stencil.weights();
    let mut buf = [0.0f64; 32];
    let nbrs = lattice.neighbors(i);
    if nbrs.len() <= buf.len() {
        for (b, &j) in buf.iter_mut().zip(nbrs) {
            *b = u[j];
        }
        p_average_raw(&buf[..nbrs.len()], weights, p, DEFAULT_TOL).value
    } else {
        let vals: Vec<f64> = nbrs.iter().map(|&j| u[j]).collect();
        p_average_raw(&vals, weights, p, DEFAULT_TOL).value
    }
}

/// One Jacobi sweep `out = T(u)`; returns `‖T(u) − u‖_∞` over interior nodes.
pub fn jacobi_step(lattice: &Lattice, u: &[f64], p: f64, out: &mut [f64]) -> f64 {
    out.copy_from_slice(u);
    let mut norm = 0.0f64;
    for i in 0..lattice.interior_count {
        out[i] = node_update(lattice, u, i, p);
        norm = norm.max(math::abs(out[i] - u[i]));
    }
    norm
}

fn gauss_seidel_step(lattice: &Lattice, u: &mut [f64], p: f64) -> f64 {
    let mut norm = 0.0f64;
    for i in 0..lattice.interior_count {
        let v = node_update(lattice, u, i, p);
        norm = norm.max(math::abs(v - u[i]));
        u[i] = v;
    }
    norm
}

/// Solves from given node values (strip entries are the boundary data,
/// interior entries the starting guess). `observer` sees every iterate.
pub fn solve_from<O>(
    lattice: &Lattice,
    mut u: Vec<f64>,
    p: f64,
    options: &SolveOptions,
    mut observer: O,
) -> Result<SolveReport>
where
    O: FnMut(u64, &[f64]),
{
    check_p(p)?;
    if u.len() != lattice.len() {
        return Err(Error::DimensionMismatch {
            expected: lattice.len(),
            found: u.len(),
        });
    }
    if !(options.tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "must be positive",
        });
    }
    if let Some(i) = u.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "node value",
            index: i,
        });
    }
    let mut scratch = u.clone();
    let mut iterations = 0;
    let mut update = f64::INFINITY;
    while iterations < options.max_iters {
        iterations += 1;
        update = match options.sweep {
            Sweep::Jacobi => {
                let n = jacobi_step(lattice, &u, p, &mut scratch);
                core::mem::swap(&mut u, &mut scratch);
                n
            }
            Sweep::GaussSeidel => gauss_seidel_step(lattice, &mut u, p),
        };
        observer(iterations, &u);
        if update <= options.tol {
            break;
        }
    }
    Ok(SolveReport {
        iterations,
        final_update_norm: update,
        converged: update <= options.tol,
        solution: u,
        sup_error_vs_reference: None,
    })
}

/// Solves `u = A_ε^p[u]` inside with `u = g` on the strip, starting from the
/// mean of the strip values.
pub fn solve_dirichlet<G>(
    lattice: &Lattice,
    g: G,
    p: f64,
    options: &SolveOptions,
) -> Result<SolveReport>
where
    G: Fn(&[f64]) -> f64,
{
    solve_dirichlet_observed(lattice, g, p, options, |_, _| {})
}

pub fn solve_dirichlet_observed<G, O>(
    lattice: &Lattice,
    g: G,
    p: f64,
    options: &SolveOptions,
    observer: O,
) -> Result<SolveReport>
where
    G: Fn(&[f64]) -> f64,
    O: FnMut(u64, &[f64]),
{
    let mut u = lattice.initial_values(g, 0.0)?;
    let strip = &u[lattice.interior_count..];
    let mean = strip.iter().sum::<f64>() / strip.len() as f64;
    u[..lattice.interior_count]
        .iter_mut()
        .for_each(|v| *v = mean);
    solve_from(lattice, u, p, options, observer)
}

/// `S(ε, x, u)`: `(u(x) − A_ε^p[u](x)) / (c ε²)` at interior nodes, with
/// `c = p/(2(n+p−2))` and `ε` the neighbour distance; `u(x) − g(x)` on the strip.
pub fn scheme_residual<G>(lattice: &Lattice, u: &[f64], node: usize, p: f64, g: G) -> Result<f64>
where
    G: Fn(&[f64]) -> f64,
{
    check_p(p)?;
    if u.len() != lattice.len() {
        return Err(Error::DimensionMismatch {
            expected: lattice.len(),
            found: u.len(),
        });
    }
    if node >= lattice.len() {
        return Err(Error::InvalidParameter {
            name: "node",
            reason: "index out of range",
        });
    }
    if node >= lattice.interior_count {
        return Ok(u[node] - g(lattice.node(node)));
    }
    let c = if p.is_finite() {
        scheme_constant(p, lattice.dim, Geometry::Sphere)?
    } else {
        0.5
    };
    let e = lattice.neighbor_distance;
    Ok((u[node] - node_update(lattice, u, node, p)) / (c * e * e))
}

/// Scheme residual of an analytic field at `point` over any stencil,
/// evaluating the field itself at the neighbours. This covers stencils that
/// do not tessellate (manufactured solutions).
pub fn field_residual<F>(
    field: F,
    point: &[f64],
    stencil: &DirectionSet,
    epsilon: f64,
    p: f64,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    check_p(p)?;
    if point.len() != stencil.dim() {
        return Err(Error::DimensionMismatch {
            expected: stencil.dim(),
            found: point.len(),
        });
    }
    let r = stencil
        .common_norm()
        .ok_or(Error::Domain("stencil vectors must share one norm"))?;
    let mut y = vec![0.0; point.len()];
    let center = field(point);
    let diffs: Vec<f64> = stencil
        .vectors()
        .map(|eta| {
            for (k, (x, e)) in point.iter().zip(eta).enumerate() {
                y[k] = x + epsilon * e;
            }
            field(&y) - center
        })
        .collect();
    let c = if p.is_finite() {
        scheme_constant(p, point.len(), Geometry::Sphere)?
    } else {
        0.5
    };
    let e = epsilon * r;
    Ok(-p_average_raw(&diffs, stencil.weights(), p, DEFAULT_TOL).value / (c * e * e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub sup_error: f64,
    /// Root mean square over interior nodes.
    pub l2_error: f64,
}

/// Sup and RMS error of `solution` against `reference` over interior nodes.
pub fn error_report<F: Fn(&[f64]) -> f64>(
    lattice: &Lattice,
    solution: &[f64],
    reference: F,
) -> ErrorReport {
    let mut sup = 0.0f64;
    let mut sq = 0.0;
    for i in 0..lattice.interior_count {
        let e = math::abs(solution[i] - reference(lattice.node(i)));
        sup = sup.max(e);
        sq += e * e;
    }
    ErrorReport {
        sup_error: sup,
        l2_error: math::sqrt(sq / lattice.interior_count as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_disk() -> Domain {
        Domain::ball(vec![0.0, 0.0], 1.0).unwrap()
    }

    #[test]
    fn triangular_stencil_geometry() {
        let lat = Lattice::triangular(&unit_disk(), 0.05, 2).unwrap();
        assert!(lat.interior_count() > 1000);
        for i in 0..lat.interior_count() {
            assert_eq!(lat.neighbors(i).len(), 6);
            for &j in lat.neighbors(i) {
                let d: f64 = lat
                    .node(i)
                    .iter()
                    .zip(lat.node(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                assert!((d.sqrt() - 0.05).abs() < 1e-12);
            }
            assert!(unit_disk().contains(lat.node(i)));
        }
        for i in lat.interior_count()..lat.len() {
            assert_eq!(lat.class(i), NodeClass::Strip);
            assert!(!unit_disk().contains(lat.node(i)));
        }
    }

    #[test]
    fn square_has_strip_on_every_side() {
        let dom = Domain::cube(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let lat = Lattice::triangular(&dom, 0.1, 2).unwrap();
        let strip: Vec<&[f64]> = (lat.interior_count()..lat.len())
            .map(|i| lat.node(i))
            .collect();
        assert!(strip.iter().any(|x| x[0] <= 0.0));
        assert!(strip.iter().any(|x| x[0] >= 1.0));
        assert!(strip.iter().any(|x| x[1] <= 0.0));
        assert!(strip.iter().any(|x| x[1] >= 1.0));
    }

    #[test]
    fn degenerate_domains_are_rejected() {
        let tiny = Domain::ball(vec![0.01, 0.013], 0.004).unwrap();
        assert_eq!(
            Lattice::triangular(&tiny, 0.05, 2),
            Err(Error::EmptyInterior)
        );
        assert!(Lattice::triangular(&unit_disk(), 0.05, 3).is_err());
        assert!(Domain::cube(vec![0.0, 1.0], vec![1.0, 0.5]).is_err());
    }

    #[test]
    fn d4_lattice_properties() {
        let dom = Domain::ball(vec![0.0; 4], 1.0).unwrap();
        let lat = Lattice::d4(&dom, 0.25).unwrap();
        assert!((lat.neighbor_distance() - 0.25 * 2f64.sqrt()).abs() < 1e-15);
        for i in 0..lat.len() {
            let s: f64 = lat.node(i).iter().map(|x| x / 0.25).sum();
            assert_eq!((s.round() as i64).rem_euclid(2), 0);
        }
        for i in 0..lat.interior_count() {
            assert_eq!(lat.neighbors(i).len(), 24);
            for (&j, eta) in lat.neighbors(i).iter().zip(lat.stencil().vectors()) {
                for k in 0..4 {
                    assert!((lat.node(j)[k] - lat.node(i)[k] - 0.25 * eta[k]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn residual_examples() {
        let lat = Lattice::triangular(&unit_disk(), 0.1, 2).unwrap();
        let constant = vec![3.0; lat.len()];
        for i in 0..lat.len() {
            assert_eq!(
                scheme_residual(&lat, &constant, i, 4.0, |_| 3.0).unwrap(),
                0.0
            );
        }
        let lin: Vec<f64> = (0..lat.len())
            .map(|i| 2.0 * lat.node(i)[0] - lat.node(i)[1])
            .collect();
        for i in 0..lat.interior_count() {
            assert!(scheme_residual(&lat, &lin, i, 4.0, |_| 0.0).unwrap().abs() < 1e-9);
        }
        let sq: Vec<f64> = (0..lat.len())
            .map(|i| lat.node(i).iter().map(|x| x * x).sum())
            .collect();
        for i in 0..lat.interior_count() {
            assert!((scheme_residual(&lat, &sq, i, 2.0, |_| 0.0).unwrap() + 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_data_converges_immediately() {
        let lat = Lattice::triangular(&unit_disk(), 0.1, 2).unwrap();
        let report = solve_dirichlet(&lat, |_| 5.0, 3.0, &SolveOptions::default()).unwrap();
        assert_eq!(report.iterations, 1);
        assert!(report.converged);
        assert!(report.solution.iter().all(|v| *v == 5.0));
    }

    #[test]
    fn linear_data_is_reproduced() {
        let lat = Lattice::triangular(&unit_disk(), 0.1, 2).unwrap();
        let opts = SolveOptions {
            tol: 1e-12,
            sweep: Sweep::GaussSeidel,
            ..Default::default()
        };
        let mut report = solve_dirichlet(&lat, |x| x[0], 4.0, &opts).unwrap();
        report.attach_reference(&lat, |x| x[0]);
        assert!(report.converged);
        assert!(report.sup_error_vs_reference.unwrap() < 1e-9);
    }

    #[test]
    fn error_report_examples() {
        let lat = Lattice::triangular(&unit_disk(), 0.2, 2).unwrap();
        let u: Vec<f64> = (0..lat.len()).map(|i| lat.node(i)[1]).collect();
        assert_eq!(
            error_report(&lat, &u, |x| x[1]),
            ErrorReport {
                sup_error: 0.0,
                l2_error: 0.0
            }
        );
        let shifted: Vec<f64> = u.iter().map(|v| v + 0.25).collect();
        let r = error_report(&lat, &shifted, |x| x[1]);
        assert!((r.sup_error - 0.25).abs() < 1e-15 && (r.l2_error - 0.25).abs() < 1e-15);
    }

    #[test]
    fn field_residual_on_octagon() {
        let oct = polygon_set(3, 0.0).unwrap();
        // |x|² has Δ₆^G = (1/6)·4 + (4/6)·2 = 2
        let r =
            field_residual(|x| x[0] * x[0] + x[1] * x[1], &[0.3, 0.4], &oct, 0.01, 6.0).unwrap();
        assert!((r + 2.0).abs() < 1e-6, "{r}");
    }
}
