//! Enumeration of principal graph pair candidates for subfactors below an
//! index bound.
//!
//! The search starts from a seed pair and repeatedly extends candidate
//! pairs ("weeds") by one depth, pruning by graph norm and by the
//! associativity test. Pairs that may only be translated further are
//! collected as "vines". [`classify`] drives the full index-5 run.

pub mod bigraph;
pub mod classify;
pub mod error;
pub mod fixtures;
pub mod obstructions;
pub mod odometer;
pub mod spectral;

pub use bigraph::{
    canonical_form, canonical_form_up_to_swap, parse_bigraph, parse_pair, serialize_bigraph,
    starts_like, translate, Bigraph, BigraphPair, BigraphWithDuals, DualData, InclusionMatrix,
};
pub use error::{Error, Result};
pub use odometer::{run_odometer, ClassificationStatement, OdometerConfig, OdometerTree};
