//! Radial weighted Sobolev embeddings: exact exponent ranges, potential
//! analysis, numerical estimation of the embedding functionals, and radial
//! p-Laplacian solvers.

pub mod catalog;
pub mod estimator;
pub mod exponent;
pub mod linalg;
pub mod scalar;
pub mod solver;

use num_bigint::BigInt;

pub use scalar::{ExactInt, Real};

/// Exact rational backed by arbitrary precision integers.
pub type Rational = num_rational::Ratio<BigInt>;
pub type ExtRational = exponent::ExtendedRational<BigInt>;
pub type Dims = exponent::ProblemDims<BigInt>;
pub type Profile = exponent::AsymptoticProfile<BigInt>;
pub type QSet = exponent::ExponentSet<BigInt>;
pub type Conclusion = exponent::EmbeddingConclusion<BigInt>;
