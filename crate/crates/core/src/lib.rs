//! Molecular fingerprint engine.
//!
//! SMILES parsing and sanitization ([`smiles`], [`mol`]), SMARTS
//! substructure matching ([`smarts`]), hashed, substructure-key and
//! descriptor fingerprints ([`fingerprints`]), dense and CSR batch output
//! ([`matrix`]), parallel batch transforms with pipeline and union
//! composition ([`engine`]), similarity search ([`similarity`]) and a
//! synthetic corpus generator ([`corpus`]).

pub mod corpus;
pub mod engine;
pub mod error;
pub mod fingerprints;
pub mod hash;
pub mod matrix;
pub mod mol;
pub mod similarity;
pub mod smarts;
pub mod smiles;

pub use error::{Error, Result};
