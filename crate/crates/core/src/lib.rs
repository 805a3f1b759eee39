//! Exact arithmetic in finite-field towers, composed products of polynomials
//! under diamond operations, and exhaustive checkers for the cancellation and
//! irreducibility properties those products rely on.

#![allow(clippy::mutable_key_type, clippy::too_many_arguments)]

pub mod cancellation;
pub mod composed;
pub mod conjecture;
pub mod diamond;
pub mod error;
pub mod field;
pub mod limits;
pub mod linalg;
pub mod ntheory;
pub mod poly;
pub mod subfield;
mod text;

pub use diamond::{BivarPoly, DiamondOp};
pub use error::{Error, Result};
pub use field::{ArithOp, FieldCtx, FieldElem, DEFAULT_CAP};
pub use limits::Limits;
pub use poly::{Poly, PolyOp, DEFAULT_BUDGET};
