//! Free-energy upper bounds for a dilute Bose gas on the unit torus in the
//! Gross–Pitaevskii scaling, together with the ingredients they are built
//! from: scattering lengths, ideal-gas lattice thermodynamics, Bogoliubov
//! spectra and the classical one-mode condensate theory.

// Oracle constants carry more digits than f64 holds; `!(x > 0.0)` is the
// NaN-rejecting form of input checks.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bogoliubov;
pub mod bound;
pub mod condensate;
pub mod error;
pub mod ideal_gas;
pub mod lattice;
pub mod numerics;
pub mod scattering;
pub mod verify;

pub use error::{Error, Result};
