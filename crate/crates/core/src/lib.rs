//! Elementary-operator defect transforms on complex matrices.
//!
//! For operators `A`, `B`, `X` the crate evaluates `Δ^m_{B,A}(X)` (powers of
//! `X ↦ BXA − X`) and `δ^n_{B,A}(X)` (powers of `X ↦ BX − XA`), classifies
//! operators and pairs by the orders at which these vanish, computes Drazin
//! inverses, and checks a catalogue of permanence identities on generated
//! instances.

pub mod bundle;
pub mod classify;
pub mod cli;
pub mod drazin;
pub mod elementary;
pub mod error;
pub mod generators;
pub mod harness;
pub mod json;
pub mod matrix;
pub mod rng;
pub mod tolerance;

pub use error::{Error, Result};
pub use matrix::{c, CMatrix, Limits};
pub use tolerance::ToleranceContext;
