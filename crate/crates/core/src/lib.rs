//! Discrete p-averages and the fully discrete asymptotic mean value property
//! of the game (normalized) p-Laplacian.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! - [`paverage`]: variational p-averages of weighted finite samples, the
//!   closed-form 4-average, the γ-median and ball averages by quadrature.
//! - [`polytopes`]: direction sets (polygons, exceptional polytopes, weighted
//!   cross-cubes) and verification of the p-averaging-set identity, both with
//!   random probes and exactly in ℚ\[√5\].
//! - [`operators`]: the game p-Laplacian, its Δ₁/Δ∞ decomposition and
//!   ε-sweeps of discrete p-averages that recover it.
//! - [`solver`]: Dirichlet problems on the triangular and D₄ lattices, solved
//!   as fixed points of discrete p-averaging.
//! - [`algebra`]: polygon mean values of complex polynomials, cosine power
//!   sums, cubic/quintic depression and exact integer-root certification.
//!
//! IO, file formats and the command line live in the companion `pavg` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
mod error;
pub mod fields;
pub mod golden;
pub mod linalg;
mod math;
pub mod operators;
pub mod paverage;
pub mod polytopes;
pub mod solver;

pub use error::{Error, Result};
pub use fields::AnalyticField;
pub use golden::QSqrt5;
pub use linalg::SymmetricMatrix;
pub use operators::{game_p_laplacian, AmvpReport, QuadraticProbe};
pub use paverage::{p_average, PAverageResult, WeightedSample};
pub use polytopes::{DirectionSet, PolytopeName, SymmetricProbe};
pub use solver::{Lattice, SolveOptions, SolveReport, Sweep};
