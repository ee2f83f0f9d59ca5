//! Shared corpora and brute-force oracles for integration tests.

#![allow(dead_code, clippy::needless_range_loop, clippy::too_many_arguments)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use molfp::corpus::synthetic_corpus;
use molfp::mol::{sanitize, Molecule};
use molfp::smarts::SmartsPattern;
use molfp::smiles::parse_smiles;
use rand::seq::SliceRandom;
use rand::Rng;

/// Hand-written drug-like and small reference molecules.
pub const CURATED: &[&str] = &[
    "C",
    "CC",
    "CCO",
    "CCN",
    "CC=O",
    "C=C",
    "C#C",
    "C#N",
    "CO",
    "OCCO",
    "CC(C)C",
    "CC(C)(C)C",
    "C1CC1",
    "C1CCC1",
    "C1CCCC1",
    "C1CCCCC1",
    "c1ccccc1",
    "c1ccncc1",
    "c1ccoc1",
    "c1ccsc1",
    "c1cc[nH]c1",
    "c1cnc[nH]1",
    "c1ncncn1",
    "c1ccc2ccccc2c1",
    "c1ccc2c(c1)cccn2",
    "c1ccc2[nH]ccc2c1",
    "c1ccc(cc1)-c1ccccc1",
    "C1CCNCC1",
    "C1COCCN1",
    "C1CC2CCC1C2",
    "C12C3C4C1C5C2C3C45",
    "CC(=O)O",
    "CC(=O)OC",
    "CC(=O)N",
    "NC(=O)N",
    "OC(=O)C(O)=O",
    "CC(=O)Oc1ccccc1C(=O)O",
    "CC(=O)Nc1ccc(O)cc1",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
    "OC[C@H]1OC(O)[C@H](O)[C@@H](O)[C@@H]1O",
    "CCN(CC)CC",
    "C[N+](C)(C)C",
    "[NH4+]",
    "[O-]C(=O)C",
    "CC[O-]",
    "[Na+].[Cl-]",
    "O=[N+]([O-])c1ccccc1",
    "FC(F)(F)c1ccccc1",
    "Clc1ccc(Cl)cc1",
    "Brc1ccccc1I",
    "CS(=O)(=O)N",
    "CS(C)=O",
    "OP(=O)(O)O",
    "CCOP(=O)(OCC)OCC",
    "CSC",
    "c1ccc2c(c1)oc1ccccc12",
    "CN1CCC[C@H]1c1cccnc1",
    "COc1ccc2[nH]cc(CCN)c2c1",
    "NCCc1ccc(O)c(O)c1",
    "CC(C)NCC(O)c1ccc(O)c(O)c1",
    "O=C1NC(=O)C(N1)(c1ccccc1)c1ccccc1",
    "CC1=CC(=O)CCC1",
    "C=CC=C",
    "C/C=C/C",
    "F/C=C\\F",
    "[13CH4]",
    "[2H]C([2H])([2H])O",
    "N#Cc1ccccc1",
    "O=C(O)c1ccccc1O",
    "CC(C)(C)OC(=O)N",
    "C1=CC=CC=C1",
    "OC1=CC=CC=C1",
    "c1ccc2cc3ccccc3cc2c1",
    "C1CC2(C1)CC2",
    "C1CCC2(CC1)CCCC2",
    "CC12CCC3C(CCC4=CC(=O)CCC34C)C1CCC2O",
    "CN1CCN(CC1)C(=O)c1ccccc1",
    "Cc1ccccc1N",
    "c1ccc(nc1)N",
    "OCC(O)CO",
    "NCC(=O)O",
    "CC(N)C(=O)O",
    "N[C@@H](Cc1ccccc1)C(=O)O",
    "CSCC[C@H](N)C(=O)O",
    "CC(C)C[C@H](N)C(=O)O",
    "O=C1CCCN1",
    "O=C1CCCCN1",
    "C1CCOC1",
    "C1CCSC1",
    "C1=CCC=C1",
    "c1ccc2nsnc2c1",
    "c1cc2ccc3cccc4ccc(c1)c2c34",
    "Oc1ccc(cc1)S(=O)(=O)c1ccc(O)cc1",
    "CCCCCCCCCCCCCCCC(=O)O",
    "CC(C)=CCCC(C)=CCO",
    "COC(=O)C1=C(C)NC(C)=C(C1c1cccc(c1)[N+](=O)[O-])C(=O)OC",
    "CC(C)NCC(COc1cccc2ccccc12)O",
    "CN(C)CCCN1c2ccccc2CCc2ccccc12",
    "O=C(O)CCC(=O)O",
    "C(C(=O)O)C(CC(=O)O)(C(=O)O)O",
    "Nc1ncnc2[nH]cnc12",
    "O=c1cc[nH]c(=O)[nH]1",
    "Cc1c[nH]c(=O)[nH]c1=O",
    "S=C=S",
    "O=C=O",
    "N#N",
    "[Cu+2]",
    "[Fe]",
    "B(O)(O)O",
    "c1ccc(cc1)[Si](C)(C)C",
    "C[Se]C",
    "ClC(Cl)(Cl)Cl",
    "BrCCBr",
];

/// `n` molecules: the curated set followed by synthetic padding.
pub fn corpus(n: usize) -> Vec<String> {
    let mut out: Vec<String> = CURATED.iter().take(n).map(|s| s.to_string()).collect();
    if out.len() < n {
        out.extend(synthetic_corpus(n - out.len(), 0x5eed));
    }
    out
}

pub fn molecule(smiles: &str) -> Molecule {
    molfp::smiles::mol_from_smiles(smiles).unwrap_or_else(|e| panic!("{smiles}: {e}"))
}

/// The molecule with atoms relabeled by a random permutation.
pub fn random_relabel(smiles: &str, rng: &mut impl Rng) -> Molecule {
    let draft = parse_smiles(smiles).unwrap();
    let mut perm: Vec<usize> = (0..draft.atoms.len()).collect();
    perm.shuffle(rng);
    sanitize(&draft.permuted(&perm)).unwrap()
}

fn atom_label(m: &Molecule, a: usize) -> (u8, i8, Option<u16>, bool, usize, usize) {
    let at = m.atom(a);
    (
        at.element.atomic_number(),
        at.charge,
        at.isotope,
        at.aromatic,
        m.total_h(a),
        m.degree(a),
    )
}

/// Weisfeiler-Lehman colour classes, used only to prune the isomorphism search.
fn wl_colours(m: &Molecule) -> Vec<u64> {
    use std::hash::{Hash, Hasher};
    let mut colours: Vec<u64> = (0..m.num_atoms())
        .map(|a| {
            let mut h = std::collections::hash_map::DefaultHasher::new();
            atom_label(m, a).hash(&mut h);
            h.finish()
        })
        .collect();
    for _ in 0..m.num_atoms().min(8) {
        colours = (0..m.num_atoms())
            .map(|a| {
                let mut env: Vec<(u8, u64)> = m
                    .neighbors(a)
                    .iter()
                    .map(|nb| (m.bond(nb.bond).order.code(), colours[nb.atom]))
                    .collect();
                env.sort_unstable();
                let mut h = std::collections::hash_map::DefaultHasher::new();
                (colours[a], env).hash(&mut h);
                h.finish()
            })
            .collect();
    }
    colours
}

/// Exhaustive labelled-graph isomorphism test (element, charge, isotope,
/// aromaticity, hydrogen count, bond order).
pub fn isomorphic(a: &Molecule, b: &Molecule) -> bool {
    let n = a.num_atoms();
    if n != b.num_atoms() || a.num_bonds() != b.num_bonds() {
        return false;
    }
    let (ca, cb) = (wl_colours(a), wl_colours(b));
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    // BFS order over `a` so each new atom is adjacent to a mapped one where possible
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for nb in a.neighbors(x) {
                if !seen[nb.atom] {
                    seen[nb.atom] = true;
                    q.push_back(nb.atom);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        k: usize,
        order: &[usize],
        a: &Molecule,
        b: &Molecule,
        ca: &[u64],
        cb: &[u64],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for y in 0..b.num_atoms() {
            if used[y] || ca[x] != cb[y] {
                continue;
            }
            let consistent = a.neighbors(x).iter().all(|nb| {
                let mx = map[nb.atom];
                mx == usize::MAX
                    || b.bond_between(y, mx)
                        .is_some_and(|bb| b.bond(bb).order == a.bond(nb.bond).order)
            });
            let mapped_nbrs_a = a
                .neighbors(x)
                .iter()
                .filter(|nb| map[nb.atom] != usize::MAX)
                .count();
            let mapped_nbrs_b = b.neighbors(y).iter().filter(|nb| used[nb.atom]).count();
            if !consistent || mapped_nbrs_a != mapped_nbrs_b {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if extend(k + 1, order, a, b, ca, cb, map, used) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    extend(0, &order, a, b, &ca, &cb, &mut map, &mut used)
}

/// Every simple cycle of an undirected graph, as a sorted list of edge ids.
pub fn simple_cycles(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut found = BTreeSet::new();
    // cycles rooted at their smallest vertex, walked from every start edge
    fn walk(
        start: usize,
        cur: usize,
        adj: &[Vec<(usize, usize)>],
        on: &mut [bool],
        path: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<usize>>,
    ) {
        for &(nx, e) in &adj[cur] {
            if nx == start && path.len() >= 2 && !path.contains(&e) {
                let mut c = path.clone();
                c.push(e);
                c.sort_unstable();
                found.insert(c);
            } else if nx > start && !on[nx] {
                on[nx] = true;
                path.push(e);
                walk(start, nx, adj, on, path, found);
                path.pop();
                on[nx] = false;
            }
        }
    }
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        walk(s, s, &adj, &mut on, &mut Vec::new(), &mut found);
    }
    found.into_iter().collect()
}

/// Rank of a set of edge-incidence vectors over GF(2).
pub fn gf2_rank(sets: &[Vec<usize>], num_edges: usize) -> usize {
    let words = num_edges.div_ceil(64).max(1);
    let lowest = |v: &[u64]| {
        v.iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + v[i].trailing_zeros() as usize)
    };
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for s in sets {
        let mut v = vec![0u64; words];
        for &e in s {
            v[e / 64] ^= 1 << (e % 64);
        }
        // xor-ing a vector with the same lowest bit strictly raises v's lowest bit
        while let Some(p) = lowest(&v) {
            match basis.iter().find(|(q, _)| *q == p) {
                Some((_, b)) => v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
                None => {
                    basis.push((p, v));
                    break;
                }
            }
        }
    }
    basis.len()
}

/// Sorted sizes of a minimum cycle basis, by greedy selection over all
/// simple cycles (a minimum basis of the cycle matroid).
pub fn minimum_cycle_basis_sizes(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut cycles = simple_cycles(n, edges);
    cycles.sort_by_key(|c| c.len());
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    for c in cycles {
        chosen.push(c);
        if gf2_rank(&chosen, edges.len()) < chosen.len() {
            chosen.pop();
        }
    }
    chosen.iter().map(Vec::len).collect()
}

/// All injective query→target assignments satisfying every atom and bond
/// predicate, found by trying every ordered tuple of distinct target atoms.
pub fn smarts_assignments(p: &SmartsPattern, m: &Molecule) -> BTreeSet<Vec<usize>> {
    let k = p.num_atoms();
    let mut out = BTreeSet::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(
        p: &SmartsPattern,
        m: &Molecule,
        k: usize,
        cur: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if cur.len() == k {
            let atoms_ok = (0..k).all(|q| p.atoms()[q].matches(m, cur[q]));
            let bonds_ok = p.bonds().iter().all(|qb| {
                m.bond_between(cur[qb.begin], cur[qb.end])
                    .is_some_and(|b| qb.matches(m, b))
            });
            if atoms_ok && bonds_ok {
                out.insert(cur.clone());
            }
            return;
        }
        for t in 0..m.num_atoms() {
            if !cur.contains(&t) {
                cur.push(t);
                rec(p, m, k, cur, out);
                cur.pop();
            }
        }
    }
    rec(p, m, k, &mut cur, &mut out);
    out
}

/// Number of ECFP environments after bond-set deduplication: one per atom
/// at radius 0, plus every distinct non-empty set of bonds reachable within
/// radius `r` (bonds with an endpoint closer than `r` to the centre).
pub fn ecfp_environment_count(m: &Molecule, radius: u32) -> usize {
    let n = m.num_atoms();
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..n {
        let mut dist = vec![u32::MAX; n];
        dist[a] = 0;
        let mut q = VecDeque::from([a]);
        while let Some(x) = q.pop_front() {
            for nb in m.neighbors(x) {
                if dist[nb.atom] == u32::MAX {
                    dist[nb.atom] = dist[x] + 1;
                    q.push_back(nb.atom);
                }
            }
        }
        for r in 1..=radius {
            let set: Vec<usize> = (0..m.num_bonds())
                .filter(|&b| {
                    let bd = m.bond(b);
                    dist[bd.begin].min(dist[bd.end]) < r
                })
                .collect();
            if !set.is_empty() {
                sets.insert(set);
            }
        }
    }
    n + sets.len()
}

/// Heavy-atom pairs at distances 1..=cap, by Floyd-Warshall.
pub fn atom_pair_count(m: &Molecule, cap: u32) -> usize {
    let n = m.num_atoms();
    let inf = u32::MAX / 2;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for b in m.bonds() {
        d[b.begin][b.end] = 1;
        d[b.end][b.begin] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let heavy = |i: usize| m.atom(i).element.atomic_number() != 1;
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if heavy(i) && heavy(j) && d[i][j] >= 1 && d[i][j] <= cap {
                count += 1;
            }
        }
    }
    count
}

/// Simple paths, as unordered atom sequences, with `lo..=hi` bonds; the
/// filter restricts which atoms may appear.
pub fn simple_paths(m: &Molecule, lo: usize, hi: usize, allowed: impl Fn(usize) -> bool) -> usize {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    fn rec(
        m: &Molecule,
        path: &mut Vec<usize>,
        lo: usize,
        hi: usize,
        allowed: &dyn Fn(usize) -> bool,
        seen: &mut BTreeSet<Vec<usize>>,
    ) {
        let bonds = path.len() - 1;
        if bonds >= lo && bonds >= 1 {
            let mut key = path.clone();
            if key.last() < key.first() {
                key.reverse();
            }
            seen.insert(key);
        }
        if bonds == hi {
            return;
        }
        let tip = *path.last().unwrap();
        for nb in m.neighbors(tip) {
            if allowed(nb.atom) && !path.contains(&nb.atom) {
                path.push(nb.atom);
                rec(m, path, lo, hi, allowed, seen);
                path.pop();
            }
        }
    }
    for s in 0..m.num_atoms() {
        if allowed(s) {
            rec(m, &mut vec![s], lo, hi, &allowed, &mut seen);
        }
    }
    seen.len()
}

/// Column histogram of a count vector, used to compare multisets of codes.
pub fn count_histogram(v: &molfp::fingerprints::FingerprintVector) -> HashMap<u32, usize> {
    let mut h = HashMap::new();
    for (_, c) in v.iter() {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}
