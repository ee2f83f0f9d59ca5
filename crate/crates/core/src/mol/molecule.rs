use crate::error::SanitizeError;
use crate::hash::FeatureHasher;

use super::{perceive_rings, BondOrder, Element, MoleculeDraft, RingInfo};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    pub isotope: Option<u16>,
    /// Hydrogens not present as graph atoms (implied or bracket-declared).
    pub implicit_h: u8,
    pub aromatic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bond {
    pub begin: usize,
    pub end: usize,
    pub order: BondOrder,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.begin == atom {
            self.end
        } else {
            self.begin
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Neighbor {
    pub atom: usize,
    pub bond: usize,
}

/// A sanitized, immutable molecular graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Vec<Neighbor>>,
    rings: RingInfo,
}

impl Molecule {
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }

    /// Neighbours of `atom`, sorted by neighbour index.
    pub fn neighbors(&self, atom: usize) -> &[Neighbor] {
        &self.adjacency[atom]
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .iter()
            .find(|nb| nb.atom == b)
            .map(|nb| nb.bond)
    }

    pub fn ring_info(&self) -> &RingInfo {
        &self.rings
    }

    /// Explicit connections (graph neighbours, including any hydrogen atoms).
    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    pub fn heavy_degree(&self, atom: usize) -> usize {
        self.adjacency[atom]
            .iter()
            .filter(|nb| self.atoms[nb.atom].element != Element::H)
            .count()
    }

    /// Implicit hydrogens plus hydrogen atoms bonded in the graph.
    pub fn total_h(&self, atom: usize) -> usize {
        self.atoms[atom].implicit_h as usize + self.degree(atom) - self.heavy_degree(atom)
    }

    pub fn num_components(&self) -> usize {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(a) = stack.pop() {
                for nb in &self.adjacency[a] {
                    if !seen[nb.atom] {
                        seen[nb.atom] = true;
                        stack.push(nb.atom);
                    }
                }
            }
        }
        count
    }

    /// Bond order sum in half-bond units.
    fn half_sum(&self, atom: usize) -> u32 {
        self.adjacency[atom]
            .iter()
            .map(|nb| self.bonds[nb.bond].order.half_units())
            .sum()
    }

    fn kekule_min_sum(&self, atom: usize) -> u32 {
        self.adjacency[atom]
            .iter()
            .map(|nb| self.bonds[nb.bond].order.kekule_min())
            .sum()
    }

    /// Hydrogen count this atom would receive if written without brackets.
    /// `None` when the organic form could not express it.
    pub fn organic_implicit_h(&self, atom: usize) -> Option<u8> {
        let a = &self.atoms[atom];
        if !a.element.is_organic_subset() || a.charge != 0 || a.isotope.is_some() {
            return None;
        }
        default_implicit_hydrogens(
            a.element,
            a.aromatic,
            self.half_sum(atom),
            self.kekule_min_sum(atom),
        )
    }
}

/// Implicit hydrogen count for an uncharged organic-subset atom with the
/// given bond order sum (half units). Aromatic bonds count 1.5 and the sum
/// is rounded down; aromatic heteroatoms receive none. Returns `None` when
/// no permitted valence fits.
pub fn default_implicit_hydrogens(
    element: Element,
    aromatic: bool,
    half_sum: u32,
    kekule_min: u32,
) -> Option<u8> {
    let Some(valences) = element.permitted_valences(0) else {
        return Some(0);
    };
    let sum = half_sum / 2;
    if let Some(&v) = valences.iter().find(|&&v| v as u32 >= sum) {
        if aromatic && element != Element::C {
            return Some(0);
        }
        return Some((v as u32 - sum) as u8);
    }
    // A fused or exocyclic-substituted aromatic atom can exceed the
    // rounded sum yet still admit a Kekulé structure.
    if aromatic && valences.iter().any(|&v| v as u32 >= kekule_min) {
        return Some(0);
    }
    None
}

fn format_half_sum(half: u32) -> String {
    if half.is_multiple_of(2) {
        format!("{}", half / 2)
    } else {
        format!("{}.5", half / 2)
    }
}

/// Validates a draft and turns it into an immutable [`Molecule`]:
/// perceives rings, checks aromatic flags, assigns hydrogens and checks
/// valences.
pub fn sanitize(draft: &MoleculeDraft) -> Result<Molecule, SanitizeError> {
    draft.validate()?;
    let n = draft.atoms.len();

    let mut bonds: Vec<Bond> = draft
        .bonds
        .iter()
        .map(|b| Bond {
            begin: b.begin,
            end: b.end,
            order: b.order,
        })
        .collect();
    let mut adjacency: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
    for (i, b) in bonds.iter().enumerate() {
        adjacency[b.begin].push(Neighbor {
            atom: b.end,
            bond: i,
        });
        adjacency[b.end].push(Neighbor {
            atom: b.begin,
            bond: i,
        });
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }

    let edges: Vec<(usize, usize)> = bonds.iter().map(|b| (b.begin, b.end)).collect();
    let rings = perceive_rings(n, &edges);

    for (i, a) in draft.atoms.iter().enumerate() {
        if !a.aromatic {
            continue;
        }
        if !a.element.can_be_aromatic() {
            return Err(SanitizeError::Aromaticity {
                atom: i,
                message: format!("{} cannot be aromatic", a.element),
            });
        }
        if !rings.atom_in_ring(i) {
            return Err(SanitizeError::Aromaticity {
                atom: i,
                message: "aromatic atom is not in a ring".into(),
            });
        }
    }
    for (i, b) in bonds.iter_mut().enumerate() {
        if b.order != BondOrder::Aromatic {
            continue;
        }
        let (x, y) = (&draft.atoms[b.begin], &draft.atoms[b.end]);
        if !x.aromatic || !y.aromatic {
            return Err(SanitizeError::Aromaticity {
                atom: if x.aromatic { b.end } else { b.begin },
                message: "aromatic bond to a non-aromatic atom".into(),
            });
        }
        // Links between separate aromatic rings are plain single bonds.
        if !rings.bond_in_ring(i) {
            b.order = BondOrder::Single;
        }
    }

    let mut atoms = Vec::with_capacity(n);
    for (i, a) in draft.atoms.iter().enumerate() {
        let half: u32 = adjacency[i]
            .iter()
            .map(|nb| bonds[nb.bond].order.half_units())
            .sum();
        let kekule: u32 = adjacency[i]
            .iter()
            .map(|nb| bonds[nb.bond].order.kekule_min())
            .sum();
        let valence_error = || SanitizeError::Valence {
            atom: i,
            element: a.element.symbol().to_string(),
            bond_sum: format_half_sum(half + 2 * a.explicit_h.unwrap_or(0) as u32),
        };
        let implicit_h = match a.explicit_h {
            Some(h) => {
                if let Some(valences) = a.element.permitted_valences(a.charge) {
                    let used = if a.aromatic {
                        (half / 2).min(kekule)
                    } else {
                        half / 2
                    } + h as u32;
                    if !valences.iter().any(|&v| v as u32 >= used) {
                        return Err(valence_error());
                    }
                }
                h
            }
            None => {
                if a.charge != 0 {
                    return Err(SanitizeError::Structure(format!(
                        "atom {i} carries a charge but no explicit hydrogen count"
                    )));
                }
                default_implicit_hydrogens(a.element, a.aromatic, half, kekule)
                    .ok_or_else(valence_error)?
            }
        };
        atoms.push(Atom {
            element: a.element,
            charge: a.charge,
            isotope: a.isotope,
            implicit_h,
            aromatic: a.aromatic,
        });
    }

    Ok(Molecule {
        atoms,
        bonds,
        adjacency,
        rings,
    })
}

const TAG_ATOM_INVARIANT: u8 = 0x01;

/// Seed code for circular fingerprints: a hash of (atomic number, heavy
/// degree, total H, formal charge, isotope, in-ring, aromatic).
pub fn initial_atom_invariant(mol: &Molecule, atom: usize) -> u32 {
    let a = mol.atom(atom);
    FeatureHasher::new(TAG_ATOM_INVARIANT)
        .u8(a.element.atomic_number())
        .u32(mol.heavy_degree(atom) as u32)
        .u32(mol.total_h(atom) as u32)
        .i32(a.charge as i32)
        .u32(a.isotope.map_or(0, u32::from))
        .bool(mol.ring_info().atom_in_ring(atom))
        .bool(a.aromatic)
        .finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mol::{AtomDraft, MoleculeDraft};

    fn chain(elements: &[Element], orders: &[BondOrder]) -> MoleculeDraft {
        let mut d = MoleculeDraft::new();
        for &e in elements {
            d.add_atom(AtomDraft::organic(e, false));
        }
        for (i, &o) in orders.iter().enumerate() {
            d.add_bond(i, i + 1, o);
        }
        d
    }

    #[test]
    fn ethanol_hydrogens() {
        let d = chain(
            &[Element::C, Element::C, Element::O],
            &[BondOrder::Single, BondOrder::Single],
        );
        let m = sanitize(&d).unwrap();
        let h: Vec<u8> = m.atoms().iter().map(|a| a.implicit_h).collect();
        assert_eq!(h, vec![3, 2, 1]);
    }

    #[test]
    fn hypervalent_sulfur_picks_next_valence() {
        // S with a double and a single bond: sum 3 -> valence 4 -> 1 H
        let d = chain(
            &[Element::O, Element::S, Element::C],
            &[BondOrder::Double, BondOrder::Single],
        );
        let m = sanitize(&d).unwrap();
        assert_eq!(m.atom(1).implicit_h, 1);
    }

    #[test]
    fn dihydrogen_double_bond_is_rejected() {
        let mut d = MoleculeDraft::new();
        for _ in 0..2 {
            d.add_atom(AtomDraft {
                element: Element::H,
                charge: 0,
                isotope: None,
                explicit_h: Some(0),
                aromatic: false,
            });
        }
        d.add_bond(0, 1, BondOrder::Double);
        assert!(matches!(sanitize(&d), Err(SanitizeError::Valence { .. })));
    }

    #[test]
    fn aromatic_atom_outside_ring() {
        let mut d = MoleculeDraft::new();
        d.add_atom(AtomDraft::organic(Element::C, true));
        d.add_atom(AtomDraft::organic(Element::C, false));
        d.add_bond(0, 1, BondOrder::Single);
        assert!(matches!(
            sanitize(&d),
            Err(SanitizeError::Aromaticity { atom: 0, .. })
        ));
    }

    #[test]
    fn duplicate_bond_is_structural_error() {
        let mut d = chain(&[Element::C, Element::C], &[BondOrder::Single]);
        d.add_bond(1, 0, BondOrder::Single);
        assert!(matches!(sanitize(&d), Err(SanitizeError::Structure(_))));
    }

    #[test]
    fn pentavalent_carbon_fails() {
        let mut d = MoleculeDraft::new();
        let c = d.add_atom(AtomDraft::organic(Element::C, false));
        for _ in 0..5 {
            let x = d.add_atom(AtomDraft::organic(Element::F, false));
            d.add_bond(c, x, BondOrder::Single);
        }
        assert!(matches!(
            sanitize(&d),
            Err(SanitizeError::Valence { atom: 0, .. })
        ));
    }
}
