//! Exact arithmetic for the generalized Frobenius problem.
//!
//! Given coprime positive generators a_1, ..., a_n, the restricted
//! partition function f(t) counts the representations
//! t = a_1 x_1 + ... + a_n x_n over nonnegative integers. This crate
//! computes f exactly over ranges, the level-set statistics g/h/c/s for
//! any representation count k (with certified finite enumeration
//! horizons), the quasi-polynomial constituents of f, the closed-form
//! bundles valid beyond a certified threshold, and the associated
//! generating functions — all in exact integer and rational arithmetic.

pub mod basis;
pub mod closedforms;
pub mod counting;
pub mod error;
pub mod genfun;
pub mod levelsets;
pub mod quasipoly;
pub mod selfcheck;

pub use basis::{coset_offsets, decompose, gcd_structure, Basis, Decomposition, GcdStructure};
pub use counting::{count, count_table, verify_recursion, Count, CountTable};
pub use error::{Error, Result};
pub use genfun::{RationalGF, SparsePoly};
pub use levelsets::{certified_horizon, cumulative_stats, level_set, CumulativeStats, LevelSet};
pub use quasipoly::{interpolate_quasipoly, PolynomialQ, QuasiPolynomial};

/// Exact rational scalar used for quasi-polynomial coefficients.
pub type Rational = num_rational::BigRational;
