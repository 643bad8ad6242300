//! Exact decision procedures for the icc property (every nontrivial
//! conjugacy class infinite) of group extensions `1 -> K -> G -> Q -> 1`.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: exact integer matrices, Hermite normal form, lattices,
//!   characteristic polynomials and cyclotomic factor detection.
//! * [`matgroup`]: finitely generated subgroups of `GL(r, Z)`: element order,
//!   finiteness certificates and the finite-orbit sublattice.
//! * [`catalog`]: the supported kernel and quotient groups, FC-subgroups,
//!   and free-group words and automorphisms.
//! * [`analyzer`]: the three-valued verdict with witnesses.
//! * [`oracle`]: brute-force conjugacy balls in materialized split extensions.
//! * [`dsl`]: the line-oriented extension description format.
//!
//! The linear algebra and matrix-group layers are generic over the integer
//! type through [`Scalar`]; the aliases below fix it to [`BigInt`], which is
//! what the analyzer uses.

pub mod analyzer;
pub mod catalog;
pub mod dsl;
pub mod linalg;
pub mod matgroup;
pub mod oracle;
mod scalar;

pub use num_bigint::BigInt;
pub use scalar::Scalar;

/// Arbitrary-precision integer matrix.
pub type IntMatrix = linalg::Matrix<BigInt>;
/// Sublattice of `Z^r` with arbitrary-precision entries.
pub type IntLattice = linalg::Lattice<BigInt>;
/// Integer polynomial with arbitrary-precision coefficients.
pub type IntPoly = linalg::Poly<BigInt>;
/// Generators of a subgroup of `GL(r, Z)` with arbitrary-precision entries.
pub type IntMatGroup = matgroup::MatGroupGens<BigInt>;
/// Integer vector, the element type of a free abelian kernel.
pub type IntVector = Vec<BigInt>;
