//! Exact spectral geometry of spherical space forms and orbifolds.
//!
//! The spectrum of `S^d/Γ` is encoded by the generating function
//! `F_Γ(z) = Σ_k dim H_k^Γ z^k`, which the Molien formula turns into a
//! finite sum of rational functions. This crate evaluates that sum exactly,
//! decides isospectrality and isometry, and runs the exhaustive searches
//! over lens spaces, small orbifold groups and non-cyclic space forms.

pub mod error;
pub mod exactalg;
pub mod invariants;
pub mod lens;
pub mod molien;
pub mod notation;
pub mod orbifolds;
pub mod search;
pub mod spaceforms;

pub use error::{Error, Result};
