//! Deterministic synthetic drug-like SMILES generator.
//!
//! Molecules are chains of ring scaffolds joined by short linkers, with
//! substituents (terminal groups or nested scaffolds) hung off ring atoms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ring scaffold: atom tokens with `{0}`/`{1}` ring-label placeholders and
/// the positions that may carry a substituent branch.
struct Scaffold {
    atoms: &'static [&'static str],
    labels: usize,
    sites: &'static [usize],
}

const SCAFFOLDS: &[Scaffold] = &[
    Scaffold {
        atoms: &["c{0}", "c", "c", "c", "c", "c{0}"],
        labels: 1,
        sites: &[1, 2, 3, 4],
    },
    Scaffold {
        atoms: &["c{0}", "c", "c", "n", "c", "c{0}"],
        labels: 1,
        sites: &[1, 2, 4],
    },
    Scaffold {
        atoms: &["C{0}", "C", "C", "C", "C", "C{0}"],
        labels: 1,
        sites: &[1, 2, 3, 4],
    },
    Scaffold {
        atoms: &["C{0}", "C", "C", "N", "C", "C{0}"],
        labels: 1,
        sites: &[1, 3, 4],
    },
    Scaffold {
        atoms: &["c{0}", "c", "c", "s", "c{0}"],
        labels: 1,
        sites: &[1, 2],
    },
    Scaffold {
        atoms: &["c{0}", "c", "c", "o", "c{0}"],
        labels: 1,
        sites: &[1, 2],
    },
    Scaffold {
        atoms: &["c{0}", "c", "c", "[nH]", "c{0}"],
        labels: 1,
        sites: &[1, 2],
    },
    Scaffold {
        atoms: &["C{0}", "C", "O", "C", "C", "N{0}"],
        labels: 1,
        sites: &[1, 3, 4],
    },
    Scaffold {
        atoms: &["C{0}", "C", "C", "C", "C{0}"],
        labels: 1,
        sites: &[1, 2, 3],
    },
    Scaffold {
        atoms: &["c{0}", "c", "c", "c{1}", "c", "c", "c", "c", "c{1}", "c{0}"],
        labels: 2,
        sites: &[1, 2, 4, 5, 6, 7],
    },
];

const LINKERS: &[&str] = &[
    "",
    "C",
    "CC",
    "O",
    "N",
    "C(=O)",
    "C(=O)N",
    "NC(=O)",
    "S(=O)(=O)",
    "OC",
    "CO",
    "C=C",
    "CN",
    "NC",
];

const TERMINALS: &[&str] = &[
    "C",
    "C",
    "CC",
    "F",
    "Cl",
    "Br",
    "O",
    "N",
    "C#N",
    "C(F)(F)F",
    "OC",
    "C(=O)O",
    "[N+](=O)[O-]",
    "C(C)C",
    "S",
    "C(=O)N",
    "N(C)C",
    "CCO",
];

/// Leading groups; each leaves a free valence for the following linker.
const HEADS: &[&str] = &[
    "C", "CC", "N", "O", "CO", "FC(F)(F)", "ClC", "N#CC", "CC(C)", "OC(=O)C",
];

const MAX_LABEL_DEPTH: usize = 6;

fn label(n: usize) -> String {
    if n < 10 {
        n.to_string()
    } else {
        format!("%{n}")
    }
}

struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    fn scaffold(&mut self, depth: usize, out: &mut String) {
        let s = SCAFFOLDS.choose(&mut self.rng).unwrap();
        let labels: Vec<String> = (0..s.labels).map(|i| label(depth + i + 1)).collect();
        for (i, tok) in s.atoms.iter().enumerate() {
            let mut t = tok.replace("{0}", &labels[0]);
            if s.labels > 1 {
                t = t.replace("{1}", &labels[1]);
            }
            out.push_str(&t);
            if s.sites.contains(&i) && self.rng.gen_bool(0.3) {
                out.push('(');
                self.substituent(depth + s.labels, out);
                out.push(')');
            }
        }
    }

    fn substituent(&mut self, depth: usize, out: &mut String) {
        if depth + 2 <= MAX_LABEL_DEPTH && self.rng.gen_bool(0.15) {
            out.push_str(LINKERS.choose(&mut self.rng).unwrap());
            self.scaffold(depth, out);
        } else {
            out.push_str(TERMINALS.choose(&mut self.rng).unwrap());
        }
    }

    fn molecule(&mut self) -> String {
        let mut out = String::new();
        if self.rng.gen_bool(0.3) {
            out.push_str(HEADS.choose(&mut self.rng).unwrap());
        }
        let units = self.rng.gen_range(1..=3);
        for u in 0..units {
            if u > 0 || !out.is_empty() {
                out.push_str(LINKERS.choose(&mut self.rng).unwrap());
            }
            self.scaffold(0, &mut out);
        }
        if self.rng.gen_bool(0.5) {
            out.push_str(TERMINALS.choose(&mut self.rng).unwrap());
        }
        out
    }
}

/// `n` SMILES strings, identical for identical `(n, seed)`.
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<String> {
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    (0..n).map(|_| g.molecule()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::mol_from_smiles;

    #[test]
    fn deterministic() {
        assert_eq!(synthetic_corpus(50, 7), synthetic_corpus(50, 7));
        assert_ne!(synthetic_corpus(50, 7), synthetic_corpus(50, 8));
    }

    #[test]
    fn every_molecule_sanitizes() {
        for s in synthetic_corpus(2000, 1) {
            mol_from_smiles(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
    }
}
