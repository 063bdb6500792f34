//! Decision procedures for the first-order additive theory of mixed integers
//! and reals.
//!
//! Every definable set `R ⊆ R^n` is a finite union of sums `Z + D`, with `Z` a
//! Presburger set of integer vectors and `D` a polyhedral subset of the
//! half-open cube `[0,1)^n`. [`idf::IdfSet`] keeps that union in a canonical
//! form: the decimal parts partition the cube and each carries a distinct
//! integer label.

pub mod cli;
pub mod error;
pub mod frontend;
pub mod idf;
pub mod json;
pub mod dbm;
pub mod decimal;
pub mod presburger;

pub use error::{Error, Result};
