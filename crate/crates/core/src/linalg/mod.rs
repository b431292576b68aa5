//! Exact integer and rational matrix algebra.
//!
//! Nothing here touches floating point. Entries are `BigInt` throughout
//! because matrix powers and normal-form intermediates overflow machine words
//! quickly.

mod charpoly;
mod frobenius;
mod hnf;
mod jordan;
mod matrix;
mod poly;
mod snf;

pub use charpoly::charpoly;
pub use frobenius::{conjugate_over_q, frobenius_invariants};
pub use hnf::{hnf, left_kernel, primitive_part, row_echelon, RowEchelon};
pub use jordan::{unipotent_jordan_profile, JordanProfile};
pub use matrix::IntMatrix;
pub use poly::IntPoly;
pub use snf::{snf, SmithDecomposition};
