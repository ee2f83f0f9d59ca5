//! Molecular graph model: drafts produced by parsers, sanitized immutable
//! molecules, ring perception and topological distances.

mod distance;
mod draft;
mod element;
mod molecule;
mod rings;

pub use distance::{shortest_path_matrix, DistanceMatrix};
pub use draft::{AtomDraft, BondDraft, BondOrder, MoleculeDraft};
pub use element::Element;
pub use molecule::{
    default_implicit_hydrogens, initial_atom_invariant, sanitize, Atom, Bond, Molecule, Neighbor,
};
pub use rings::{perceive_rings, RingInfo};
