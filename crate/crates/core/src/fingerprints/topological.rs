//! Atom-pair, topological-torsion and linear-path fingerprints.

use crate::hash::FeatureHasher;
use crate::mol::{shortest_path_matrix, Element, Molecule};

const TAG_ATOM_TYPE: u8 = 0x20;
const TAG_PAIR: u8 = 0x21;
const TAG_TORSION: u8 = 0x30;
const TAG_PATH_ATOM: u8 = 0x40;
const TAG_PATH: u8 = 0x41;

/// Atom type shared by atom pairs and torsions: element, heavy degree, aromaticity.
pub fn pair_atom_type(mol: &Molecule, atom: usize) -> u32 {
    let a = mol.atom(atom);
    FeatureHasher::new(TAG_ATOM_TYPE)
        .u8(a.element.atomic_number())
        .u32(mol.heavy_degree(atom) as u32)
        .bool(a.aromatic)
        .finish()
}

fn is_heavy(mol: &Molecule, atom: usize) -> bool {
    mol.atom(atom).element != Element::H
}

/// One identifier per unordered pair of heavy atoms at topological
/// distance `1..=distance_cap`.
pub fn atom_pair_identifiers(mol: &Molecule, distance_cap: u32) -> Vec<u32> {
    let dist = shortest_path_matrix(mol);
    let heavy: Vec<usize> = (0..mol.num_atoms()).filter(|&a| is_heavy(mol, a)).collect();
    let types: Vec<u32> = (0..mol.num_atoms())
        .map(|a| pair_atom_type(mol, a))
        .collect();
    let mut out = Vec::new();
    for (x, &i) in heavy.iter().enumerate() {
        for &j in &heavy[x + 1..] {
            let Some(d) = dist.get(i, j) else { continue };
            if d == 0 || d > distance_cap {
                continue;
            }
            let (lo, hi) = if types[i] <= types[j] {
                (types[i], types[j])
            } else {
                (types[j], types[i])
            };
            out.push(FeatureHasher::new(TAG_PAIR).u32(lo).u32(d).u32(hi).finish());
        }
    }
    out
}

/// One identifier per simple path of four distinct heavy atoms.
pub fn torsion_identifiers(mol: &Molecule) -> Vec<u32> {
    let types: Vec<u32> = (0..mol.num_atoms())
        .map(|a| pair_atom_type(mol, a))
        .collect();
    let mut out = Vec::new();
    for bond in mol.bonds() {
        let (b, c) = (bond.begin, bond.end);
        if !is_heavy(mol, b) || !is_heavy(mol, c) {
            continue;
        }
        for na in mol.neighbors(b) {
            let a = na.atom;
            if a == c || !is_heavy(mol, a) {
                continue;
            }
            for nd in mol.neighbors(c) {
                let d = nd.atom;
                if d == b || d == a || !is_heavy(mol, d) {
                    continue;
                }
                let fwd = [types[a], types[b], types[c], types[d]];
                let rev = [types[d], types[c], types[b], types[a]];
                let seq = fwd.min(rev);
                let mut h = FeatureHasher::new(TAG_TORSION);
                for t in seq {
                    h.push_u32(t);
                }
                out.push(h.finish());
            }
        }
    }
    out
}

/// One identifier per simple path with `min_bonds..=max_bonds` bonds,
/// keyed on the canonically oriented atom/bond sequence.
pub fn path_identifiers(mol: &Molecule, min_bonds: u32, max_bonds: u32) -> Vec<u32> {
    let n = mol.num_atoms();
    let codes: Vec<u32> = (0..n)
        .map(|a| {
            let atom = mol.atom(a);
            FeatureHasher::new(TAG_PATH_ATOM)
                .u8(atom.element.atomic_number())
                .bool(atom.aromatic)
                .u32(mol.degree(a) as u32)
                .finish()
        })
        .collect();
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut atoms = Vec::new();
    let mut bonds = Vec::new();
    for start in 0..n {
        atoms.push(start);
        on_path[start] = true;
        extend(
            mol,
            &codes,
            (min_bonds, max_bonds),
            &mut atoms,
            &mut bonds,
            &mut on_path,
            &mut out,
        );
        on_path[start] = false;
        atoms.pop();
    }
    out
}

fn extend(
    mol: &Molecule,
    codes: &[u32],
    bounds: (u32, u32),
    atoms: &mut Vec<usize>,
    bonds: &mut Vec<u8>,
    on_path: &mut [bool],
    out: &mut Vec<u32>,
) {
    let len = bonds.len() as u32;
    // each undirected path is visited twice; keep the walk with the smaller start
    if len >= bounds.0 && len >= 1 && atoms[0] < *atoms.last().unwrap() {
        out.push(path_identifier(codes, atoms, bonds));
    }
    if len >= bounds.1 {
        return;
    }
    let tip = *atoms.last().unwrap();
    for nb in mol.neighbors(tip) {
        if on_path[nb.atom] {
            continue;
        }
        on_path[nb.atom] = true;
        atoms.push(nb.atom);
        bonds.push(mol.bond(nb.bond).order.code());
        extend(mol, codes, bounds, atoms, bonds, on_path, out);
        bonds.pop();
        atoms.pop();
        on_path[nb.atom] = false;
    }
}

fn path_identifier(codes: &[u32], atoms: &[usize], bonds: &[u8]) -> u32 {
    let mut fwd = Vec::with_capacity(atoms.len() + bonds.len());
    for (i, &a) in atoms.iter().enumerate() {
        fwd.push(codes[a]);
        if let Some(&b) = bonds.get(i) {
            fwd.push(b as u32);
        }
    }
    let rev: Vec<u32> = fwd.iter().rev().copied().collect();
    let seq = if rev < fwd { rev } else { fwd };
    let mut h = FeatureHasher::new(TAG_PATH).u32(bonds.len() as u32);
    for x in seq {
        h.push_u32(x);
    }
    h.finish()
}
