// negated comparisons are deliberate: NaN must land in the "not certified"
// branch; float match guards stand in for deprecated float-literal patterns
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::redundant_guards)]
#![allow(clippy::needless_range_loop)]

//! Certified stability analysis for discrete time-varying linear systems.
//!
//! The toolkit models discrete evolution families U(n, m) over ℂ^d through a
//! finite prefix + constant/periodic tail encoding, brackets the norm of the
//! associated convolution operator on the sequence spaces c₀⁰, ℓ∞₀ and ℓᵖ₀,
//! and verifies the growth-bound inequality ω₀·c ≤ -1 together with its
//! spectral-disk, resolvent, Datko and summed-power corollaries, reporting
//! every quantity as a certified two-sided bracket.

pub mod certify;
pub mod config;
pub mod conv;
pub mod corpus;
pub mod eigen;
pub mod error;
pub mod family;
pub mod linalg;
pub mod report;
pub mod resolvent;
pub mod space;

pub use error::{CoreError, Result};
pub use family::{EvolutionFamily, GeneratorSpec, Tail};
pub use linalg::{C64, CMatrix, CVector, MatrixNorm};
pub use space::{SpaceSpec, TruncatedSequence};
