//! Graphic rank via union-find: the rank of an edge set is the number of
//! edges that join distinct components.

use crate::set::{bits, Mask};

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// `edges` hold compacted vertex indices in `0..vertices`.
pub(crate) fn forest_rank(edges: &[(usize, usize)], vertices: usize, set: Mask) -> usize {
    let mut ds = DisjointSets::new(vertices);
    bits(set)
        .filter(|&i| {
            let (u, v) = edges[i];
            ds.union(u, v)
        })
        .count()
}
