//! Non-adaptive parity search.
//!
//! Up to `d` of `n` items are marked. A query names a subset of the items
//! and is answered with the parity of the number of marked items in it.
//! This crate builds query plans with at most `d*m` queries (`n < 2^m`)
//! from odd power moments over GF(2^m), checks them exhaustively, and
//! decodes answer vectors back to the marked set.

pub mod cli;
pub mod construction;
pub mod decode;
pub mod error;
pub mod f2linalg;
pub mod gf2m;
mod subsets;
pub mod verify;

pub use construction::{build_query_plan, build_query_plan_with, PlanConfig, QueryPlan};
pub use decode::{answer_queries, decode_algebraic, decode_brute, Decoder, MarkedSet, Syndrome};
pub use error::{Error, Result};
pub use f2linalg::{BitMatrix, BitVector};
pub use gf2m::{FieldElement, FieldSpec};
pub use verify::{entropy_lower_bound, verify_separating, WorkCap};
