use crate::error::SanitizeError;

use super::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to the atom's bond order sum, in half-bond units
    /// (aromatic counts 1.5).
    pub fn half_units(self) -> u32 {
        match self {
            BondOrder::Single => 2,
            BondOrder::Double => 4,
            BondOrder::Triple => 6,
            BondOrder::Aromatic => 3,
        }
    }

    /// Lowest order a Kekulé structure could assign to this bond.
    pub fn kekule_min(self) -> u32 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }

    /// Small integer code used in hashed features.
    pub fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            BondOrder::Single => '-',
            BondOrder::Double => '=',
            BondOrder::Triple => '#',
            BondOrder::Aromatic => ':',
        }
    }
}

/// An atom as written, before hydrogens are assigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtomDraft {
    pub element: Element,
    pub charge: i8,
    pub isotope: Option<u16>,
    /// `Some` for bracket atoms (exact hydrogen count), `None` for
    /// organic-subset atoms whose hydrogens are implied by valence.
    pub explicit_h: Option<u8>,
    pub aromatic: bool,
}

impl AtomDraft {
    pub fn organic(element: Element, aromatic: bool) -> Self {
        AtomDraft {
            element,
            charge: 0,
            isotope: None,
            explicit_h: None,
            aromatic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BondDraft {
    pub begin: usize,
    pub end: usize,
    pub order: BondOrder,
}

/// Mutable pre-sanitization molecular graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoleculeDraft {
    pub atoms: Vec<AtomDraft>,
    pub bonds: Vec<BondDraft>,
    pub source: Option<String>,
    /// Set when stereo markers were present in the input and dropped.
    pub stereo_ignored: bool,
}

impl MoleculeDraft {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_atom(&mut self, atom: AtomDraft) -> usize {
        self.atoms.push(atom);
        self.atoms.len() - 1
    }

    pub fn add_bond(&mut self, begin: usize, end: usize, order: BondOrder) {
        self.bonds.push(BondDraft { begin, end, order });
    }

    pub fn has_bond(&self, a: usize, b: usize) -> bool {
        self.bonds
            .iter()
            .any(|bd| (bd.begin == a && bd.end == b) || (bd.begin == b && bd.end == a))
    }

    /// Checks endpoint validity, self-loops and duplicate bonds.
    pub fn validate(&self) -> Result<(), SanitizeError> {
        let n = self.atoms.len();
        let mut seen = std::collections::HashSet::new();
        for (i, b) in self.bonds.iter().enumerate() {
            if b.begin >= n || b.end >= n {
                return Err(SanitizeError::Structure(format!(
                    "bond {i} references a missing atom"
                )));
            }
            if b.begin == b.end {
                return Err(SanitizeError::Structure(format!(
                    "bond {i} is a self-loop on atom {}",
                    b.begin
                )));
            }
            if !seen.insert((b.begin.min(b.end), b.begin.max(b.end))) {
                return Err(SanitizeError::Structure(format!(
                    "duplicate bond between atoms {} and {}",
                    b.begin, b.end
                )));
            }
        }
        Ok(())
    }

    /// Relabels atoms: old atom `i` becomes atom `perm[i]`. Bond list order
    /// is preserved.
    pub fn permuted(&self, perm: &[usize]) -> MoleculeDraft {
        assert_eq!(perm.len(), self.atoms.len(), "permutation length mismatch");
        let mut atoms = self.atoms.clone();
        for (old, &new) in perm.iter().enumerate() {
            atoms[new] = self.atoms[old];
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| BondDraft {
                begin: perm[b.begin],
                end: perm[b.end],
                order: b.order,
            })
            .collect();
        MoleculeDraft {
            atoms,
            bonds,
            source: None,
            stereo_ignored: self.stereo_ignored,
        }
    }
}
