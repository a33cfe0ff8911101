//! Classical resolvability of discrete energy spectra.
//!
//! For a one-dimensional bound system with levels `E_n` and classical
//! periods `τ_n`, the product `y(n) = |ΔE_n Δτ_n|` of the half level spacing
//! and the half period difference is compared against `ħ/2`. Pairs with
//! `y(n) < ħ/2` cannot be told apart by timing the classical motion without
//! beating the time-energy uncertainty relation.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod criterion;
pub mod error;
pub mod interp;
pub mod io;
pub mod model;
pub mod noise;
pub mod numeric;
pub mod semiclassical;
pub mod sim;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};
pub use model::{ModelKind, ModelParams, ModelSpec};
pub use units::UnitSystem;
