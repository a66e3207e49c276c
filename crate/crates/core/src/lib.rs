//! Flag curvature of very standard homogeneous Finsler metrics on compact
//! coset spaces `G/H`, computed from Lie-algebraic data.
//!
//! The pipeline is:
//!
//! 1. [`rootsys`] builds abstract root systems for the families `A_n`, `C_n`
//!    and `G2` in explicit Euclidean coordinates.
//! 2. [`liealg`] realizes the compact real form through a Chevalley basis,
//!    with bracket, bi-invariant inner product and a matrix-realization
//!    cross-check for the classical types.
//! 3. [`coset`] splits `g = h + m` orthogonally and decomposes `m` into
//!    isotypic summands of the isotropy action.
//! 4. [`norm`] represents very standard Minkowski norms through their
//!    generating function `L` and assembles the fundamental tensor.
//! 5. [`curvature`] evaluates the homogeneous flag curvature formula,
//!    certifies zero-curvature flags, and carries a normal-metric oracle.
//! 6. [`obstruct`] replays the classification case analysis and samples
//!    curvature positivity on the surviving spaces.

pub mod coset;
pub mod curvature;
pub mod dual;
pub mod error;
pub mod fixtures;
pub mod liealg;
pub mod linalg;
pub mod norm;
pub mod obstruct;
pub mod report;
pub mod rootsys;
pub mod specfile;

mod chevalley;
mod matrixreal;

pub use error::{Error, Result};
pub use liealg::{AlgebraVector, CompactLieAlgebra};
pub use rootsys::{Family, RootSystem};
