//! Exact computational laboratory for quadratic character L-polynomials over
//! F_q[T]: finite-field and polynomial arithmetic, residue symbols, exact
//! L-polynomials and central values, an independent point-counting oracle,
//! exhaustive family moments, and the truncated-exponential mollifier
//! machinery, all at desk scale.
//!
//! Exactness policy: everything that can be integer arithmetic is (field
//! elements, polynomial coefficients, character sums, L-coefficients,
//! central values in Z[sqrt(q)]); floating point enters only in analytic
//! comparisons, always under deterministic fixed-shape reductions.

pub mod charsum;
pub mod divisor;
pub mod error;
pub mod family;
pub mod field;
pub mod lfunc;
pub mod mollifier;
pub mod moments;
pub mod perron;
pub mod poly;
pub mod primes;
pub mod reduce;
pub mod report;
pub mod roots;
pub mod symbol;
pub mod zeta;
pub mod zetaoracle;

pub use error::{Error, Result};
pub use family::{FamilyKind, FamilySpec};
pub use field::{ExtensionField, PrimeField};
pub use lfunc::{CentralValue, FamilyData, LPolynomial};
pub use poly::Polynomial;
pub use primes::PrimeTables;
