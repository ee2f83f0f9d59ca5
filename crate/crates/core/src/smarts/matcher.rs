//! Backtracking subgraph matcher.
//!
//! Query atoms are visited most-constrained-first: the first atom is the
//! one with the fewest candidate target atoms, and each following atom is
//! the most constrained one adjacent to the atoms already placed. Target
//! candidates are tried in ascending index order, which makes the mapping
//! order deterministic.

use std::collections::HashSet;

use crate::mol::Molecule;

use super::SmartsPattern;

/// All injective query→target atom assignments satisfying a pattern.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchSet {
    /// `mappings[k][q]` is the target atom assigned to query atom `q`.
    pub mappings: Vec<Vec<usize>>,
    /// Sorted target atom sets, deduplicated, in first-seen order.
    pub unique_atom_sets: Vec<Vec<usize>>,
}

struct Plan {
    order: Vec<usize>,
    /// For step i: an earlier-placed neighbour (query atom, query bond)
    /// used to generate candidates.
    anchor: Vec<Option<(usize, usize)>>,
    /// For step i: all bonds to earlier-placed query atoms.
    back_bonds: Vec<Vec<(usize, usize)>>,
    candidates: Vec<Vec<bool>>,
}

fn plan(pattern: &SmartsPattern, mol: &Molecule) -> Option<Plan> {
    let nq = pattern.num_atoms();
    let nt = mol.num_atoms();
    let candidates: Vec<Vec<bool>> = pattern
        .atoms()
        .iter()
        .map(|q| (0..nt).map(|t| q.matches(mol, t)).collect())
        .collect();
    let counts: Vec<usize> = candidates
        .iter()
        .map(|c| c.iter().filter(|&&x| x).count())
        .collect();
    if counts.contains(&0) {
        return None;
    }

    let mut placed = vec![false; nq];
    let mut order = Vec::with_capacity(nq);
    while order.len() < nq {
        let frontier =
            (0..nq).filter(|&q| !placed[q] && pattern.neighbors(q).iter().any(|&(n, _)| placed[n]));
        let pick = frontier
            .min_by_key(|&q| (counts[q], q))
            .or_else(|| {
                (0..nq)
                    .filter(|&q| !placed[q])
                    .min_by_key(|&q| (counts[q], q))
            })
            .expect("an unplaced query atom remains");
        placed[pick] = true;
        order.push(pick);
    }

    let mut position = vec![usize::MAX; nq];
    for (i, &q) in order.iter().enumerate() {
        position[q] = i;
    }
    let mut anchor = Vec::with_capacity(nq);
    let mut back_bonds = Vec::with_capacity(nq);
    for (i, &q) in order.iter().enumerate() {
        let back: Vec<(usize, usize)> = pattern
            .neighbors(q)
            .iter()
            .copied()
            .filter(|&(n, _)| position[n] < i)
            .collect();
        anchor.push(back.iter().copied().min_by_key(|&(n, _)| position[n]));
        back_bonds.push(back);
    }
    Some(Plan {
        order,
        anchor,
        back_bonds,
        candidates,
    })
}

struct Search<'a> {
    pattern: &'a SmartsPattern,
    mol: &'a Molecule,
    plan: Plan,
    assignment: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Calls `visit` with each complete mapping; stops when it returns false.
    fn run(&mut self, step: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if step == self.plan.order.len() {
            return visit(&self.assignment);
        }
        let q = self.plan.order[step];
        let targets: Vec<usize> = match self.plan.anchor[step] {
            Some((nq, _)) => {
                let mut t: Vec<usize> = self
                    .mol
                    .neighbors(self.assignment[nq])
                    .iter()
                    .map(|nb| nb.atom)
                    .collect();
                t.sort_unstable();
                t
            }
            None => (0..self.mol.num_atoms()).collect(),
        };
        for t in targets {
            if self.used[t] || !self.plan.candidates[q][t] {
                continue;
            }
            let bonds_ok = self.plan.back_bonds[step].iter().all(|&(nq, qb)| {
                self.mol
                    .bond_between(self.assignment[nq], t)
                    .is_some_and(|tb| self.pattern.bonds()[qb].matches(self.mol, tb))
            });
            if !bonds_ok {
                continue;
            }
            self.assignment[q] = t;
            self.used[t] = true;
            let go_on = self.run(step + 1, visit);
            self.used[t] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn search(pattern: &SmartsPattern, mol: &Molecule, mut visit: impl FnMut(&[usize]) -> bool) {
    if pattern.num_atoms() == 0 || pattern.num_atoms() > mol.num_atoms() {
        return;
    }
    let Some(plan) = plan(pattern, mol) else {
        return;
    };
    let mut s = Search {
        pattern,
        mol,
        plan,
        assignment: vec![usize::MAX; pattern.num_atoms()],
        used: vec![false; mol.num_atoms()],
    };
    s.run(0, &mut visit);
}

/// Enumerates every match of `pattern` in `mol`.
pub fn match_pattern(pattern: &SmartsPattern, mol: &Molecule) -> MatchSet {
    let mut out = MatchSet::default();
    let mut seen = HashSet::new();
    search(pattern, mol, |m| {
        let mut set = m.to_vec();
        set.sort_unstable();
        if seen.insert(set.clone()) {
            out.unique_atom_sets.push(set);
        }
        out.mappings.push(m.to_vec());
        true
    });
    out
}

/// Stops at the first match.
pub fn has_match(pattern: &SmartsPattern, mol: &Molecule) -> bool {
    let mut found = false;
    search(pattern, mol, |_| {
        found = true;
        false
    });
    found
}

/// Number of distinct matched atom sets.
pub fn count_unique(pattern: &SmartsPattern, mol: &Molecule) -> usize {
    let mut seen = HashSet::new();
    search(pattern, mol, |m| {
        let mut set = m.to_vec();
        set.sort_unstable();
        seen.insert(set);
        true
    });
    seen.len()
}
