//! Exact computation with generalized Baumslag-Solitar groups: finite graphs
//! of `Z^n`-groups, their Bass-Serre fundamental group, the modular
//! homomorphism into the rational affine group, the word problem, the
//! Bass-Serre tree, and certified verdicts on amenability, the Haagerup
//! property, distortion and L^p-compression.
//!
//! All group-theoretic computations are exact over arbitrary-precision
//! rationals. Floating point only appears in the empirical embedding
//! estimators, never in a certificate.

pub mod bstree;
pub mod embed;
pub mod error;
pub mod gog;
pub mod modmap;
pub mod ratlin;
pub mod verdicts;
pub mod words;

pub use error::Error;

/// Arbitrary-precision integer scalar used throughout.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational scalar, always kept in lowest terms with a
/// positive denominator by construction.
pub type Rat = num_rational::BigRational;
