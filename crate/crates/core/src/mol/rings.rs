//! Ring perception.
//!
//! Computes a minimum cycle basis (the SSSR) of an undirected graph.
//! Candidate cycles are generated Horton-style on the 2-core: for every
//! root atom a BFS tree is built and every non-tree edge `(x, y)` whose
//! tree paths to the root share only the root closes a candidate. The
//! candidates are ordered by size, then by their sorted atom tuple, and
//! accepted greedily when linearly independent over GF(2).

use std::collections::{HashSet, VecDeque};

/// Rings of a molecule and the per-atom / per-bond views derived from them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingInfo {
    rings: Vec<Vec<usize>>,
    ring_bonds: Vec<Vec<usize>>,
    atom_rings: Vec<Vec<usize>>,
    bond_in_ring: Vec<bool>,
}

impl RingInfo {
    /// Rings as atom cycles. Each starts at its smallest atom index and
    /// proceeds toward the smaller of that atom's two ring neighbours.
    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }

    /// Bond indices of ring `r`.
    pub fn ring_bonds(&self, r: usize) -> &[usize] {
        &self.ring_bonds[r]
    }

    pub fn num_rings(&self) -> usize {
        self.rings.len()
    }

    pub fn atom_in_ring(&self, atom: usize) -> bool {
        !self.atom_rings[atom].is_empty()
    }

    pub fn bond_in_ring(&self, bond: usize) -> bool {
        self.bond_in_ring[bond]
    }

    /// Number of basis rings containing `atom`.
    pub fn atom_ring_count(&self, atom: usize) -> usize {
        self.atom_rings[atom].len()
    }

    /// Indices of the basis rings containing `atom`.
    pub fn atom_rings(&self, atom: usize) -> &[usize] {
        &self.atom_rings[atom]
    }

    pub fn smallest_ring_size(&self, atom: usize) -> Option<usize> {
        self.atom_rings[atom]
            .iter()
            .map(|&r| self.rings[r].len())
            .min()
    }
}

struct Candidate {
    atoms: Vec<usize>,
    sorted: Vec<usize>,
    edges: Vec<u64>,
}

fn bitset_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn bitset_get(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn lowest_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn count_components(n: usize, adj: &[Vec<(usize, usize)>]) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for &(b, _) in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    count
}

/// Orders a cycle so it starts at its minimum atom and walks toward the
/// smaller neighbour.
fn normalize_cycle(mut cycle: Vec<usize>) -> Vec<usize> {
    let start = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, a)| **a)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle.rotate_left(start);
    if cycle.len() > 2 && cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// Perceives a minimum cycle basis for the graph with `num_atoms` vertices
/// and the given undirected edges (indexed by position).
pub fn perceive_rings(num_atoms: usize, edges: &[(usize, usize)]) -> RingInfo {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_atoms];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut info = RingInfo {
        rings: Vec::new(),
        ring_bonds: Vec::new(),
        atom_rings: vec![Vec::new(); num_atoms],
        bond_in_ring: vec![false; edges.len()],
    };

    let components = count_components(num_atoms, &adj);
    let target = (edges.len() + components).saturating_sub(num_atoms);
    if target == 0 {
        return info;
    }

    // Restrict to the 2-core: acyclic appendages never carry cycles.
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut in_core = vec![true; num_atoms];
    let mut queue: VecDeque<usize> = (0..num_atoms).filter(|&a| degree[a] <= 1).collect();
    while let Some(a) = queue.pop_front() {
        if !in_core[a] {
            continue;
        }
        in_core[a] = false;
        for &(b, _) in &adj[a] {
            if in_core[b] {
                degree[b] -= 1;
                if degree[b] == 1 {
                    queue.push_back(b);
                }
            }
        }
    }
    let core_adj: Vec<Vec<(usize, usize)>> = adj
        .iter()
        .enumerate()
        .map(|(a, list)| {
            if in_core[a] {
                list.iter().copied().filter(|&(b, _)| in_core[b]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let core_edges: Vec<usize> = (0..edges.len())
        .filter(|&e| in_core[edges[e].0] && in_core[edges[e].1])
        .collect();

    let words = edges.len().div_ceil(64);
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut seen_cycles: HashSet<Vec<u64>> = HashSet::new();

    let mut parent: Vec<Option<(usize, usize)>> = vec![None; num_atoms];
    let mut dist: Vec<usize> = vec![usize::MAX; num_atoms];
    for root in (0..num_atoms).filter(|&a| in_core[a]) {
        parent.iter_mut().for_each(|p| *p = None);
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        let mut bfs = VecDeque::from([root]);
        while let Some(a) = bfs.pop_front() {
            for &(b, e) in &core_adj[a] {
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    parent[b] = Some((a, e));
                    bfs.push_back(b);
                }
            }
        }
        let path_to_root = |mut a: usize| {
            let mut atoms = vec![a];
            let mut bonds = Vec::new();
            while let Some((p, e)) = parent[a] {
                atoms.push(p);
                bonds.push(e);
                a = p;
            }
            (atoms, bonds)
        };
        for &e in &core_edges {
            let (x, y) = edges[e];
            if dist[x] == usize::MAX || dist[y] == usize::MAX {
                continue;
            }
            if parent[x].map(|(_, pe)| pe) == Some(e) || parent[y].map(|(_, pe)| pe) == Some(e) {
                continue;
            }
            let (px, bx) = path_to_root(x);
            let (py, by) = path_to_root(y);
            let sx: HashSet<usize> = px.iter().copied().collect();
            if py[..py.len() - 1].iter().any(|a| sx.contains(a)) {
                continue;
            }
            let mut bits = vec![0u64; words];
            for &b in bx.iter().chain(by.iter()) {
                bitset_set(&mut bits, b);
            }
            bitset_set(&mut bits, e);
            if !seen_cycles.insert(bits.clone()) {
                continue;
            }
            // px runs x..root, py runs y..root; cycle is x..root..y.
            let mut cycle = px;
            cycle.extend(py[..py.len() - 1].iter().rev());
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            candidates.push(Candidate {
                atoms: cycle,
                sorted,
                edges: bits,
            });
        }
    }

    candidates.sort_by(|a, b| {
        a.sorted
            .len()
            .cmp(&b.sorted.len())
            .then_with(|| a.sorted.cmp(&b.sorted))
    });

    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for cand in candidates {
        if basis.len() == target {
            break;
        }
        let mut v = cand.edges.clone();
        for (pivot, row) in &basis {
            if bitset_get(&v, *pivot) {
                v.iter_mut().zip(row).for_each(|(w, r)| *w ^= r);
            }
        }
        let Some(pivot) = lowest_bit(&v) else {
            continue;
        };
        basis.push((pivot, v));

        let ring = normalize_cycle(cand.atoms);
        let r = info.rings.len();
        let bonds: Vec<usize> = (0..edges.len())
            .filter(|&b| bitset_get(&cand.edges, b))
            .collect();
        for &b in &bonds {
            info.bond_in_ring[b] = true;
        }
        for &a in &ring {
            info.atom_rings[a].push(r);
        }
        info.ring_bonds.push(bonds);
        info.rings.push(ring);
    }
    info
}
