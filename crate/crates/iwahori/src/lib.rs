//! Exact linear algebra over Laurent series fields with a Frobenius twist.
//!
//! The library classifies invertible matrices over k((ε)) up to the Iwahori
//! subgroup on both sides, retracts unipotent orbits onto the extended affine
//! Weyl group, solves the twisted conjugation equations that govern which
//! cosets a σ-conjugacy class meets, and draws the alcove hexagons those
//! computations trace out for SL₃.
//!
//! Everything is exact: coefficients live in a fixed 𝔽_{p^m}, series carry an
//! explicit precision window, and any answer that would depend on unknown
//! coefficients is reported as indeterminate rather than guessed.

pub mod adlv;
pub mod arith;
pub mod error;
pub mod harness;
pub mod hexagon;
pub mod linalg;
pub mod coset;
pub mod weyl;

pub use error::{Error, Result};
