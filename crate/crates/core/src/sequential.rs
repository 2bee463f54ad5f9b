//! Textbook sequential union-find: union by size, optionally with full path
//! compression. Serves both as the per-edge baseline and as the reference
//! oracle the bulk structures are checked against.

use crate::forest::canonicalize;
use crate::{Edge, Vertex};

#[derive(Debug, Clone)]
pub struct SequentialUnionFind {
    parent: Vec<Vertex>,
    size: Vec<u32>,
    compress: bool,
    hops: u64,
}

impl SequentialUnionFind {
    pub fn new(n: usize, compress: bool) -> Self {
        Self {
            parent: (0..n as Vertex).collect(),
            size: vec![1; n],
            compress,
            hops: 0,
        }
    }

    /// Starts from an explicit (acyclic) parent array. Sizes are recomputed.
    pub fn from_parents(parents: Vec<Vertex>, compress: bool) -> Self {
        let n = parents.len();
        let mut uf = Self {
            parent: parents,
            size: vec![0; n],
            compress,
            hops: 0,
        };
        for v in 0..n as Vertex {
            let r = uf.root_of(v);
            uf.size[r as usize] += 1;
        }
        uf.size.iter_mut().for_each(|s| *s = (*s).max(1));
        uf
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parents(&self) -> &[Vertex] {
        &self.parent
    }

    /// Total parent hops taken by finds so far.
    pub fn hops(&self) -> u64 {
        self.hops
    }

    fn root_of(&self, mut u: Vertex) -> Vertex {
        while self.parent[u as usize] != u {
            u = self.parent[u as usize];
        }
        u
    }

    pub fn find(&mut self, u: Vertex) -> Vertex {
        self.find_with_path(u).0
    }

    /// Find that also reports the non-root vertices whose parent pointers it
    /// followed, in walk order.
    pub fn find_with_path(&mut self, u: Vertex) -> (Vertex, Vec<Vertex>) {
        let mut path = Vec::new();
        let mut v = u;
        while self.parent[v as usize] != v {
            path.push(v);
            v = self.parent[v as usize];
        }
        self.hops += path.len() as u64;
        if self.compress {
            for &w in &path {
                self.parent[w as usize] = v;
            }
        }
        (v, path)
    }

    /// Unions the components of `u` and `v`; returns true if they were
    /// previously disjoint.
    pub fn union(&mut self, u: Vertex, v: Vertex) -> bool {
        let ru = self.find(u);
        let rv = self.find(v);
        if ru == rv {
            return false;
        }
        let (winner, loser) = if self.size[ru as usize] >= self.size[rv as usize] {
            (ru, rv)
        } else {
            (rv, ru)
        };
        self.parent[loser as usize] = winner;
        self.size[winner as usize] += self.size[loser as usize];
        true
    }

    /// Inserts every edge; returns the number of successful unions.
    pub fn insert_all(&mut self, edges: &[Edge]) -> usize {
        edges.iter().filter(|&&(u, v)| self.union(u, v)).count()
    }

    pub fn connected(&mut self, u: Vertex, v: Vertex) -> bool {
        self.find(u) == self.find(v)
    }

    pub fn count_components(&self) -> usize {
        self.parent
            .iter()
            .enumerate()
            .filter(|(v, &p)| p as usize == *v)
            .count()
    }

    /// Smallest vertex id of each vertex's component.
    pub fn canonical_labels(&self) -> Vec<Vertex> {
        let roots: Vec<Vertex> = (0..self.len() as Vertex).map(|v| self.root_of(v)).collect();
        canonicalize(&roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::bfs_labels;

    #[test]
    fn full_compression_flattens_the_path() {
        let mut uf = SequentialUnionFind::from_parents(vec![1, 2, 3, 3], true);
        let (root, path) = uf.find_with_path(0);
        assert_eq!(root, 3);
        assert_eq!(path, vec![0, 1, 2]);
        assert_eq!(uf.parents(), &[3, 3, 3, 3]);
        assert_eq!(uf.hops(), 3);
        assert_eq!(uf.find_with_path(0).1, vec![0]);
    }

    #[test]
    fn without_compression_parents_stay() {
        let mut uf = SequentialUnionFind::from_parents(vec![1, 2, 2], false);
        uf.find(0);
        assert_eq!(uf.parents(), &[1, 2, 2]);
    }

    #[test]
    fn agrees_with_bfs() {
        let edges = [(0, 1), (2, 3), (1, 3), (5, 6)];
        for compress in [false, true] {
            let mut uf = SequentialUnionFind::new(8, compress);
            assert_eq!(uf.insert_all(&edges), 4);
            assert_eq!(uf.canonical_labels(), bfs_labels(8, &edges));
            assert_eq!(uf.count_components(), 4);
            assert!(uf.connected(0, 2));
            assert!(!uf.connected(0, 5));
        }
    }
}
