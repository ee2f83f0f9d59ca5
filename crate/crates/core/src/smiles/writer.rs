use std::collections::BTreeSet;
use std::fmt::Write;

use crate::mol::{BondOrder, Molecule};

use super::canonical_ranks;

fn atom_text(mol: &Molecule, i: usize, out: &mut String) {
    let a = mol.atom(i);
    let symbol = if a.aromatic {
        a.element.symbol().to_ascii_lowercase()
    } else {
        a.element.symbol().to_string()
    };
    if mol.organic_implicit_h(i) == Some(a.implicit_h) {
        out.push_str(&symbol);
        return;
    }
    out.push('[');
    if let Some(iso) = a.isotope {
        write!(out, "{iso}").unwrap();
    }
    out.push_str(&symbol);
    match a.implicit_h {
        0 => {}
        1 => out.push('H'),
        h => write!(out, "H{h}").unwrap(),
    }
    match a.charge {
        0 => {}
        1 => out.push('+'),
        -1 => out.push('-'),
        q if q > 0 => write!(out, "+{q}").unwrap(),
        q => write!(out, "-{}", -q).unwrap(),
    }
    out.push(']');
}

fn bond_text(mol: &Molecule, bond: usize, out: &mut String) {
    let b = mol.bond(bond);
    let both_aromatic = mol.atom(b.begin).aromatic && mol.atom(b.end).aromatic;
    match b.order {
        BondOrder::Single if both_aromatic => out.push('-'),
        BondOrder::Aromatic if !both_aromatic => out.push(':'),
        BondOrder::Single | BondOrder::Aromatic => {}
        BondOrder::Double => out.push('='),
        BondOrder::Triple => out.push('#'),
    }
}

struct Traversal {
    /// Visit order index per atom.
    order: Vec<usize>,
    children: Vec<Vec<(usize, usize)>>,
    /// (partner atom, bond) for ring bonds opened at each atom, in
    /// closing order.
    opens: Vec<Vec<(usize, usize)>>,
    closes: Vec<Vec<usize>>,
}

fn traverse(
    mol: &Molecule,
    ranks: &[usize],
    root: usize,
    t: &mut Traversal,
    seen: &mut [bool],
    counter: &mut usize,
) {
    t.order[root] = *counter;
    *counter += 1;
    let mut nbrs: Vec<_> = mol.neighbors(root).to_vec();
    nbrs.sort_by_key(|nb| ranks[nb.atom]);
    for nb in nbrs {
        if seen[nb.bond] {
            continue;
        }
        seen[nb.bond] = true;
        if t.order[nb.atom] == usize::MAX {
            t.children[root].push((nb.atom, nb.bond));
            traverse(mol, ranks, nb.atom, t, seen, counter);
        } else {
            // back edge: the partner was visited earlier and opens the ring
            t.opens[nb.atom].push((root, nb.bond));
            t.closes[root].push(nb.bond);
        }
    }
}

fn emit(
    mol: &Molecule,
    atom: usize,
    t: &Traversal,
    digits: &mut Vec<Option<usize>>,
    free: &mut BTreeSet<usize>,
    out: &mut String,
) {
    atom_text(mol, atom, out);
    let mut opens = t.opens[atom].clone();
    opens.sort_by_key(|&(partner, _)| t.order[partner]);
    for (_, bond) in opens {
        let d = free.pop_first().expect("ring labels available");
        digits[bond] = Some(d);
        bond_text(mol, bond, out);
        push_label(d, out);
    }
    let mut closes: Vec<(usize, usize)> = t.closes[atom]
        .iter()
        .map(|&b| (digits[b].expect("ring opened before closing"), b))
        .collect();
    closes.sort_unstable();
    for (d, _) in closes {
        push_label(d, out);
        free.insert(d);
    }
    let children = &t.children[atom];
    for (k, &(child, bond)) in children.iter().enumerate() {
        let branch = k + 1 < children.len();
        if branch {
            out.push('(');
        }
        bond_text(mol, bond, out);
        emit(mol, child, t, digits, free, out);
        if branch {
            out.push(')');
        }
    }
}

fn push_label(d: usize, out: &mut String) {
    if d < 10 {
        write!(out, "{d}").unwrap();
    } else {
        write!(out, "%{d:02}").unwrap();
    }
}

/// Writes canonical SMILES: a rank-ordered depth-first walk from the
/// lowest-ranked atom of each component, components joined by `.` in
/// order of their lowest rank.
pub fn write_canonical_smiles(mol: &Molecule) -> String {
    let n = mol.num_atoms();
    if n == 0 {
        return String::new();
    }
    let ranks = canonical_ranks(mol);
    let mut by_rank: Vec<usize> = (0..n).collect();
    by_rank.sort_by_key(|&a| ranks[a]);

    let mut t = Traversal {
        order: vec![usize::MAX; n],
        children: vec![Vec::new(); n],
        opens: vec![Vec::new(); n],
        closes: vec![Vec::new(); n],
    };
    let mut seen = vec![false; mol.num_bonds()];
    let mut counter = 0;
    let mut roots = Vec::new();
    for &a in &by_rank {
        if t.order[a] == usize::MAX {
            roots.push(a);
            traverse(mol, &ranks, a, &mut t, &mut seen, &mut counter);
        }
    }

    let mut out = String::new();
    let mut digits = vec![None; mol.num_bonds()];
    for (i, &root) in roots.iter().enumerate() {
        if i > 0 {
            out.push('.');
        }
        let mut free: BTreeSet<usize> = (1..100).collect();
        emit(mol, root, &t, &mut digits, &mut free, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::smiles::{canonicalize, mol_from_smiles};

    use super::*;

    #[test]
    fn methane() {
        assert_eq!(canonicalize("C").unwrap(), "C");
    }

    #[test]
    fn same_molecule_same_string() {
        assert_eq!(canonicalize("OCC").unwrap(), canonicalize("CCO").unwrap());
        assert_eq!(
            canonicalize("c1ccccc1O").unwrap(),
            canonicalize("Oc1ccccc1").unwrap()
        );
    }

    #[test]
    fn brackets_only_when_needed() {
        assert_eq!(canonicalize("[CH4]").unwrap(), "C");
        assert_eq!(canonicalize("[NH4+]").unwrap(), "[NH4+]");
        assert_eq!(canonicalize("[13CH4]").unwrap(), "[13CH4]");
        let pyrrole = canonicalize("c1cc[nH]c1").unwrap();
        assert!(pyrrole.contains("[nH]"), "{pyrrole}");
    }

    #[test]
    fn fixed_point() {
        for s in [
            "c1ccc2ccccc2c1",
            "CC(=O)Oc1ccccc1C(=O)O",
            "C1CC1.O",
            "C#N",
            "O=S(=O)(O)O",
        ] {
            let c = canonicalize(s).unwrap();
            assert_eq!(canonicalize(&c).unwrap(), c, "{s}");
        }
    }

    #[test]
    fn biphenyl_link_stays_single() {
        let m = mol_from_smiles("c1ccccc1c1ccccc1").unwrap();
        let c = write_canonical_smiles(&m);
        assert!(c.contains('-'), "{c}");
        assert_eq!(canonicalize(&c).unwrap(), c);
    }
}
