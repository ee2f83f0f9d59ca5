//! SMARTS-subset patterns and substructure matching.

mod keyset;
mod matcher;
mod parser;
mod pattern;

pub use keyset::{Key, KeySet};
pub use matcher::{count_unique, has_match, match_pattern, MatchSet};
pub use parser::parse_smarts;
pub use pattern::{AtomPrimitive, BondPrimitive, Expr, QueryAtom, QueryBond, SmartsPattern};
