//! Canonical atom ranking by iterative neighbourhood refinement.

use crate::mol::Molecule;

/// Replaces each key by its position among the distinct sorted keys.
fn dense_ranks<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

fn count_classes(ranks: &[usize]) -> usize {
    let mut seen = ranks.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Refines `ranks` until the partition stops splitting.
fn refine(mol: &Molecule, mut ranks: Vec<usize>) -> Vec<usize> {
    let mut classes = count_classes(&ranks);
    loop {
        let keys: Vec<(usize, Vec<(u8, usize)>)> = (0..mol.num_atoms())
            .map(|a| {
                let mut env: Vec<(u8, usize)> = mol
                    .neighbors(a)
                    .iter()
                    .map(|nb| (mol.bond(nb.bond).order.code(), ranks[nb.atom]))
                    .collect();
                env.sort_unstable();
                (ranks[a], env)
            })
            .collect();
        let next = dense_ranks(&keys);
        let next_classes = count_classes(&next);
        ranks = next;
        if next_classes == classes {
            return ranks;
        }
        classes = next_classes;
    }
}

fn seed_ranks(mol: &Molecule) -> Vec<usize> {
    let seeds: Vec<_> = (0..mol.num_atoms())
        .map(|a| {
            let atom = mol.atom(a);
            (
                atom.element.atomic_number(),
                mol.degree(a),
                atom.charge,
                mol.total_h(a),
                atom.aromatic,
                atom.isotope,
            )
        })
        .collect();
    dense_ranks(&seeds)
}

/// Stable refinement classes before any tie-breaking: atoms sharing a
/// value are indistinguishable by their neighbourhoods.
pub fn symmetry_classes(mol: &Molecule) -> Vec<usize> {
    refine(mol, seed_ranks(mol))
}

/// A permutation of `0..n` assigning each atom a distinct canonical rank.
///
/// Ties left after refinement are broken by promoting the lowest-indexed
/// atom of the lowest tied class, then refining again.
pub fn canonical_ranks(mol: &Molecule) -> Vec<usize> {
    let n = mol.num_atoms();
    let mut ranks = symmetry_classes(mol);
    while count_classes(&ranks) < n {
        let mut counts = vec![0usize; n];
        for &r in &ranks {
            counts[r] += 1;
        }
        let tied = (0..n)
            .find(|&r| counts[r] > 1)
            .expect("a tied class exists");
        let chosen = (0..n)
            .find(|&a| ranks[a] == tied)
            .expect("class is non-empty");
        let split: Vec<usize> = (0..n)
            .map(|a| 2 * ranks[a] + usize::from(a != chosen))
            .collect();
        ranks = refine(mol, dense_ranks(&split));
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::mol_from_smiles;

    #[test]
    fn benzene_is_one_class() {
        let m = mol_from_smiles("c1ccccc1").unwrap();
        let classes = symmetry_classes(&m);
        assert!(classes.iter().all(|&c| c == classes[0]));
        let mut ranks = canonical_ranks(&m);
        ranks.sort();
        assert_eq!(ranks, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn ethanol_distinct() {
        let m = mol_from_smiles("CCO").unwrap();
        let c = symmetry_classes(&m);
        assert_eq!(count_classes(&c), 3);
    }

    #[test]
    fn propane_terminals_tie() {
        let m = mol_from_smiles("CCC").unwrap();
        let c = symmetry_classes(&m);
        assert_eq!(c[0], c[2]);
        assert_ne!(c[0], c[1]);
    }
}
