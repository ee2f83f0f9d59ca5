//! Extended-connectivity (ECFP) and functional-class (FCFP) fingerprints.

use std::collections::HashSet;

use crate::hash::FeatureHasher;
use crate::mol::{initial_atom_invariant, Element, Molecule};

const TAG_ITERATION: u8 = 0x10;
const TAG_FEATURE_CLASS: u8 = 0x11;

/// Pharmacophoric feature bits used to seed FCFP.
pub fn feature_class_bits(mol: &Molecule, atom: usize) -> u8 {
    let a = mol.atom(atom);
    let polar = a.element == Element::N || a.element == Element::O;
    let mut bits = 0u8;
    if polar && mol.total_h(atom) > 0 {
        bits |= 1; // donor
    }
    if polar {
        bits |= 1 << 1; // acceptor
    }
    if a.charge > 0 {
        bits |= 1 << 2;
    }
    if a.charge < 0 {
        bits |= 1 << 3;
    }
    if a.aromatic {
        bits |= 1 << 4;
    }
    if a.element.is_halogen() {
        bits |= 1 << 5;
    }
    bits
}

pub fn feature_class_invariant(mol: &Molecule, atom: usize) -> u32 {
    FeatureHasher::new(TAG_FEATURE_CLASS)
        .u8(feature_class_bits(mol, atom))
        .finish()
}

/// Runs the circular iteration from the given seed codes and returns the
/// identifiers of every surviving environment.
///
/// Iteration 0 keeps one environment per atom. Iteration `k` hashes
/// `(k, own code, sorted (bond order, neighbour code) pairs)`; an
/// environment whose bond set was already produced (earlier iteration, or
/// same iteration with a smaller identifier) is dropped.
pub fn circular_identifiers(mol: &Molecule, radius: u32, seeds: Vec<u32>) -> Vec<u32> {
    let n = mol.num_atoms();
    let mut out = seeds.clone();
    if n == 0 || radius == 0 {
        return out;
    }
    let words = mol.num_bonds().div_ceil(64).max(1);
    let mut codes = seeds;
    let mut sets: Vec<Vec<u64>> = vec![vec![0; words]; n];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([vec![0; words]]);

    for k in 1..=radius {
        let mut next_codes = Vec::with_capacity(n);
        let mut next_sets = Vec::with_capacity(n);
        for a in 0..n {
            let mut env: Vec<(u8, u32)> = mol
                .neighbors(a)
                .iter()
                .map(|nb| (mol.bond(nb.bond).order.code(), codes[nb.atom]))
                .collect();
            env.sort_unstable();
            let mut h = FeatureHasher::new(TAG_ITERATION).u32(k).u32(codes[a]);
            for (order, code) in env {
                h.push_u32(order as u32);
                h.push_u32(code);
            }
            next_codes.push(h.finish());

            let mut set = sets[a].clone();
            for nb in mol.neighbors(a) {
                set[nb.bond / 64] |= 1 << (nb.bond % 64);
                for (w, x) in set.iter_mut().zip(&sets[nb.atom]) {
                    *w |= x;
                }
            }
            next_sets.push(set);
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (next_codes[a], a));
        for &a in &order {
            if seen.insert(next_sets[a].clone()) {
                out.push(next_codes[a]);
            }
        }
        let stable = next_sets == sets;
        codes = next_codes;
        sets = next_sets;
        if stable {
            // bond sets stopped growing, so later iterations repeat them
            break;
        }
    }
    out
}

pub fn ecfp_identifiers(mol: &Molecule, radius: u32) -> Vec<u32> {
    let seeds = (0..mol.num_atoms())
        .map(|a| initial_atom_invariant(mol, a))
        .collect();
    circular_identifiers(mol, radius, seeds)
}

pub fn fcfp_identifiers(mol: &Molecule, radius: u32) -> Vec<u32> {
    let seeds = (0..mol.num_atoms())
        .map(|a| feature_class_invariant(mol, a))
        .collect();
    circular_identifiers(mol, radius, seeds)
}
