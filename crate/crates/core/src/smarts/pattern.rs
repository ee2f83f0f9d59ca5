use crate::mol::{BondOrder, Element, Molecule};

/// Boolean expression over primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr<P> {
    Prim(P),
    Not(Box<Expr<P>>),
    And(Vec<Expr<P>>),
    Or(Vec<Expr<P>>),
}

impl<P> Expr<P> {
    pub fn eval(&self, test: &impl Fn(&P) -> bool) -> bool {
        match self {
            Expr::Prim(p) => test(p),
            Expr::Not(e) => !e.eval(test),
            Expr::And(es) => es.iter().all(|e| e.eval(test)),
            Expr::Or(es) => es.iter().any(|e| e.eval(test)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomPrimitive {
    Any,
    AtomicNumber(u8),
    /// Element with a fixed aromaticity (`C` aliphatic, `c` aromatic).
    Symbol {
        element: Element,
        aromatic: bool,
    },
    Aromatic,
    Aliphatic,
    /// `D<n>`: explicit connections.
    Degree(u32),
    /// `H<n>`: total hydrogen count.
    TotalH(u32),
    /// `X<n>`: total connections including hydrogens.
    Connectivity(u32),
    /// `R` with no count.
    InRing,
    /// `R<n>`: number of basis rings containing the atom.
    RingCount(u32),
    /// `r<n>`: size of the smallest basis ring containing the atom.
    SmallestRing(u32),
    Charge(i32),
}

impl AtomPrimitive {
    pub fn matches(&self, mol: &Molecule, atom: usize) -> bool {
        let a = mol.atom(atom);
        let rings = mol.ring_info();
        match *self {
            AtomPrimitive::Any => true,
            AtomPrimitive::AtomicNumber(z) => a.element.atomic_number() == z,
            AtomPrimitive::Symbol { element, aromatic } => {
                a.element == element && a.aromatic == aromatic
            }
            AtomPrimitive::Aromatic => a.aromatic,
            AtomPrimitive::Aliphatic => !a.aromatic,
            AtomPrimitive::Degree(n) => mol.degree(atom) == n as usize,
            AtomPrimitive::TotalH(n) => mol.total_h(atom) == n as usize,
            AtomPrimitive::Connectivity(n) => {
                mol.degree(atom) + a.implicit_h as usize == n as usize
            }
            AtomPrimitive::InRing => rings.atom_in_ring(atom),
            AtomPrimitive::RingCount(n) => rings.atom_ring_count(atom) == n as usize,
            AtomPrimitive::SmallestRing(0) => !rings.atom_in_ring(atom),
            AtomPrimitive::SmallestRing(n) => rings.smallest_ring_size(atom) == Some(n as usize),
            AtomPrimitive::Charge(q) => a.charge as i32 == q,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BondPrimitive {
    Single,
    Double,
    Triple,
    Aromatic,
    Any,
    /// `@`: bond in a ring.
    Ring,
}

impl BondPrimitive {
    pub fn matches(&self, mol: &Molecule, bond: usize) -> bool {
        let order = mol.bond(bond).order;
        match self {
            BondPrimitive::Single => order == BondOrder::Single,
            BondPrimitive::Double => order == BondOrder::Double,
            BondPrimitive::Triple => order == BondOrder::Triple,
            BondPrimitive::Aromatic => order == BondOrder::Aromatic,
            BondPrimitive::Any => true,
            BondPrimitive::Ring => mol.ring_info().bond_in_ring(bond),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryAtom {
    pub expr: Expr<AtomPrimitive>,
}

impl QueryAtom {
    pub fn matches(&self, mol: &Molecule, atom: usize) -> bool {
        self.expr.eval(&|p: &AtomPrimitive| p.matches(mol, atom))
    }

    /// True when every atom satisfying the expression must be aromatic.
    pub fn implies_aromatic(&self) -> bool {
        fn walk(e: &Expr<AtomPrimitive>) -> bool {
            match e {
                Expr::Prim(AtomPrimitive::Aromatic) => true,
                Expr::Prim(AtomPrimitive::Symbol { aromatic, .. }) => *aromatic,
                Expr::Prim(_) | Expr::Not(_) => false,
                Expr::And(es) => es.iter().any(walk),
                Expr::Or(es) => !es.is_empty() && es.iter().all(walk),
            }
        }
        walk(&self.expr)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryBond {
    pub begin: usize,
    pub end: usize,
    pub expr: Expr<BondPrimitive>,
}

impl QueryBond {
    pub fn matches(&self, mol: &Molecule, bond: usize) -> bool {
        self.expr.eval(&|p: &BondPrimitive| p.matches(mol, bond))
    }
}

/// A compiled SMARTS query graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmartsPattern {
    pub(crate) source: String,
    pub(crate) atoms: Vec<QueryAtom>,
    pub(crate) bonds: Vec<QueryBond>,
    /// Per query atom: (neighbour query atom, query bond index).
    pub(crate) adjacency: Vec<Vec<(usize, usize)>>,
}

impl SmartsPattern {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn atoms(&self) -> &[QueryAtom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[QueryBond] {
        &self.bonds
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn neighbors(&self, atom: usize) -> &[(usize, usize)] {
        &self.adjacency[atom]
    }
}
