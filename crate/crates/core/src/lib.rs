//! Error exponents for discriminating translation-invariant Gaussian states on a bosonic
//! lattice, with a truncated Fock-space simulator as an independent check.

pub mod asymptotics;
pub mod calculus;
pub mod cli;
pub mod error;
pub mod finite;
pub mod fock;
pub mod lattice;
pub mod optimize;
pub mod symbols;

pub use error::{Error, Result};
pub use symbols::{DiscriminationProblem, DisplacementSpec, GaussianStateSpec, SymbolKind, SymbolSpec, make_trig_symbol};
