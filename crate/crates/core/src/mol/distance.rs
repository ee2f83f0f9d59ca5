use std::collections::VecDeque;

use super::Molecule;

/// All-pairs topological distances (bond counts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    const UNREACHABLE: u32 = u32::MAX;

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance between `i` and `j`; `None` when they lie in different
    /// components.
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        let d = self.data[i * self.n + j];
        (d != Self::UNREACHABLE).then_some(d)
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = Option<u32>> + '_ {
        self.data[i * self.n..(i + 1) * self.n]
            .iter()
            .map(|&d| (d != Self::UNREACHABLE).then_some(d))
    }
}

/// Unweighted BFS from every atom.
pub fn shortest_path_matrix(mol: &Molecule) -> DistanceMatrix {
    let n = mol.num_atoms();
    let mut data = vec![DistanceMatrix::UNREACHABLE; n * n];
    let mut queue = VecDeque::new();
    for src in 0..n {
        let row = &mut data[src * n..(src + 1) * n];
        row[src] = 0;
        queue.push_back(src);
        while let Some(a) = queue.pop_front() {
            let next = row[a] + 1;
            for nb in mol.neighbors(a) {
                if row[nb.atom] == DistanceMatrix::UNREACHABLE {
                    row[nb.atom] = next;
                    queue.push_back(nb.atom);
                }
            }
        }
    }
    DistanceMatrix { n, data }
}
