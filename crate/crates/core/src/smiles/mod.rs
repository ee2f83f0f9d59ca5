//! SMILES reading and canonical writing.
//!
//! Supported: organic-subset atoms (aromatic lowercase included), bracket
//! atoms with isotope, hydrogen count, charge and atom map, bonds
//! `- = # :`, ring closures (`1`..`9`, `%nn`), branches and dots. Stereo
//! markers (`/`, `\`, `@`) are accepted and dropped; the draft records
//! that they were seen.

mod canon;
mod parser;
mod token;
mod writer;

pub use canon::{canonical_ranks, symmetry_classes};
pub use parser::parse_smiles;
pub use token::{tokenize, BondSymbol, BracketAtom, SmilesToken, TokenKind};
pub use writer::write_canonical_smiles;

use crate::error::Result;
use crate::mol::{sanitize, Molecule};

/// Parses and sanitizes in one step.
pub fn mol_from_smiles(text: &str) -> Result<Molecule> {
    let draft = parse_smiles(text)?;
    Ok(sanitize(&draft)?)
}

/// Canonicalizes a SMILES string.
pub fn canonicalize(text: &str) -> Result<String> {
    Ok(write_canonical_smiles(&mol_from_smiles(text)?))
}
