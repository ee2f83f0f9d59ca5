use std::collections::BTreeMap;

use crate::mol::{BondOrder, Element, Molecule};

pub const DESCRIPTOR_NAMES: [&str; 10] = [
    "molecular_weight",
    "heavy_atoms",
    "rings",
    "aromatic_rings",
    "hbond_donors",
    "hbond_acceptors",
    "rotatable_bonds",
    "formal_charge",
    "fraction_csp3",
    "halogens",
];

const HYDROGEN_WEIGHT: f64 = 1.008;

/// Fixed-order physicochemical descriptor vector (see [`DESCRIPTOR_NAMES`]).
pub fn descriptors(mol: &Molecule) -> Vec<f64> {
    let n = mol.num_atoms();
    let atoms = mol.atoms();
    let heavy = |i: usize| atoms[i].element != Element::H;

    // per-element tallies keep the sum independent of atom order
    let mut tally: BTreeMap<u8, (f64, u32)> = BTreeMap::new();
    let mut hidden_h = 0u32;
    for a in atoms {
        tally
            .entry(a.element.atomic_number())
            .or_insert((a.element.atomic_weight(), 0))
            .1 += 1;
        hidden_h += a.implicit_h as u32;
    }
    let weight =
        tally.values().map(|&(w, c)| w * c as f64).sum::<f64>() + hidden_h as f64 * HYDROGEN_WEIGHT;
    let heavy_atoms = (0..n).filter(|&i| heavy(i)).count();
    let rings = mol.ring_info().num_rings();
    let aromatic_rings = mol
        .ring_info()
        .rings()
        .iter()
        .filter(|r| r.iter().all(|&a| atoms[a].aromatic))
        .count();
    let rotatable = (0..mol.num_bonds())
        .filter(|&b| {
            let bond = mol.bond(b);
            bond.order == BondOrder::Single
                && !mol.ring_info().bond_in_ring(b)
                && heavy(bond.begin)
                && heavy(bond.end)
                && mol.heavy_degree(bond.begin) >= 2
                && mol.heavy_degree(bond.end) >= 2
        })
        .count();
    let polar = |i: usize| matches!(atoms[i].element, Element::N | Element::O);
    let donors = (0..n).filter(|&i| polar(i) && mol.total_h(i) > 0).count();
    let acceptors = (0..n).filter(|&i| polar(i)).count();
    let charge: i64 = atoms.iter().map(|a| a.charge as i64).sum();
    let halogens = atoms.iter().filter(|a| a.element.is_halogen()).count();
    let carbons: Vec<usize> = (0..n).filter(|&i| atoms[i].element == Element::C).collect();
    let sp3 = carbons
        .iter()
        .filter(|&&c| {
            !atoms[c].aromatic
                && mol
                    .neighbors(c)
                    .iter()
                    .all(|nb| mol.bond(nb.bond).order == BondOrder::Single)
        })
        .count();
    let fsp3 = if carbons.is_empty() {
        0.0
    } else {
        sp3 as f64 / carbons.len() as f64
    };

    vec![
        weight,
        heavy_atoms as f64,
        rings as f64,
        aromatic_rings as f64,
        donors as f64,
        acceptors as f64,
        rotatable as f64,
        charge as f64,
        fsp3,
        halogens as f64,
    ]
}
