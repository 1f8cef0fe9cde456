//! Algebraic identities behind the discrete mean value properties.
//!
//! - [`poly`]: exact integer/rational univariate polynomials, Sturm sequences
//!   and integer-root certification.
//! - [`walsh`]: complex polynomials and their regular-polygon mean values.
//! - [`trig`]: cosine power sums over equally spaced angles.
//! - [`quintic`]: the 6-average quintic, depression, and the stored
//!   resolvent sextic fixture.

pub mod poly;
pub mod quintic;
pub mod trig;
pub mod walsh;

pub use poly::{integer_root_test, IntPolynomial, Polynomial, RationalPolynomial};
pub use quintic::{depress, quintic_pipeline, six_average_equation, Depressed, QuinticCheck};
pub use trig::{cos_arith_progression_sum, cos_power_sum, verify_trig, CosPowerSum, TrigReport};
pub use walsh::{polygon_mean, verify_walsh, ComplexPolynomial, WalshReport};
