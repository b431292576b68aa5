//! Decision procedures for wild automorphisms of abelian varieties.
//!
//! Given a product of elliptic curves (or simple factors with `End = Z`)
//! and an automorphism `σ = T_b · α`, decide whether `σ` is wild, whether
//! the twisted homogeneous coordinate ring `B(X, L, σ)` is projectively
//! simple, and compute its GK-dimension where that is known. All arithmetic
//! is exact.

#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod error;
pub mod json;
pub mod linalg;
pub mod model;
pub mod num_action;
pub mod random;
pub mod selfcheck;
pub mod unipotency;
pub mod wildness;
