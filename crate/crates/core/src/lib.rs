//! Exact-arithmetic lattice laboratory.
//!
//! Everything here works over arbitrary-precision rationals: LLL reduction,
//! exhaustive shortest-vector enumeration (Euclidean and max norm), the
//! deterministic uniqueness amplification of a lattice, randomized index-2
//! sparsification with survivor tracking, the projection-based verifier for
//! unique-SVP "NO" instances, and the search-to-decision reduction for unique SVP.

#![allow(clippy::needless_range_loop)]

pub mod amplify;
pub mod certificate;
pub mod descent;
pub mod error;
pub mod gso;
pub mod lattice;
pub mod scalar;
pub mod sparsify;
pub mod svp;
pub mod verifier;

pub use certificate::{Certificate, Verdict, Witness};
pub use error::{LatticeError, Result};
pub use lattice::Basis;
pub use scalar::{CoeffVector, LatticeVector, Scalar};
pub use svp::Norm;
