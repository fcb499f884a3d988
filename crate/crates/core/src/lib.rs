//! Finite L-algebras, their ideal lattices and prime spectra.
//!
//! The crate validates operation tables, enumerates ideals, builds the
//! spectral topology, and runs a registry of law checks over fixture and
//! enumerated corpora. See the `lalg` binary for the command-line front end.

pub mod algebra;
pub mod constructions;
pub mod error;
pub mod ideals;
pub mod io;
pub mod laws;
pub mod spectrum;
pub mod subset;

pub use algebra::{
    derive_order, validate, FiniteLAlgebra, OrderRelation, RawAlgebra, StructureFlags,
};
pub use error::{Error, Falsification, FalsificationKind, Result};
pub use ideals::{
    congruence_of, enumerate_ideals, generate_ideal, quotient, Congruence, IdealLattice, Quotient,
};
pub use subset::Subset;
