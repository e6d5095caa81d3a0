//! Exact quasi-particle combinatorics for the standard modules of affine
//! `sl(n+1)`.
//!
//! The crate evaluates fermionic q-series (principal subspace characters,
//! parafermionic characters and their vacuum-module relatives), enumerates
//! quasi-particle monomial bases, assembles full standard-module characters
//! out of theta functions, and cross-checks all of it against an independent
//! Freudenthal multiplicity oracle. Every number is exact: exponents are
//! rationals, coefficients are arbitrary-precision integers.
//!
//! Module map:
//!
//! - [`lattice`]: root/weight lattice of `sl(n+1)`, Cartan data, exact
//!   ellipsoid enumeration of lattice points.
//! - [`qseries`]: truncated q-series with rational exponents.
//! - [`fermionic`]: occupation-number sums.
//! - [`qpbasis`]: quasi-particle monomials, admissibility, census and tables.
//! - [`theta`]: theta functions and character assembly.
//! - [`oracle`]: affine Freudenthal multiplicities, string functions, traces.
//! - [`verify`]: named cross-check suites producing machine-readable reports.

pub mod fermionic;
pub mod lattice;
pub mod oracle;
pub mod qpbasis;
pub mod qseries;
pub mod rational;
pub mod theta;
pub mod verify;

pub use fermionic::{HighestWeight, OccupationTuple, Search};
pub use lattice::{LatticeContext, WeightVec};
pub use oracle::{AffineWeight, DominantWeight, MultTable};
pub use qpbasis::{AdmissibilityContext, Census, Grading, QPMonomial};
pub use qseries::QSeries;
pub use rational::Rational;
pub use theta::GradedCharacter;
pub use verify::{CheckReport, CheckStatus};
