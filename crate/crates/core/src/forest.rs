//! The union-find forest shared by every bulk operation.
//!
//! Parent and size entries are stored as relaxed atomics so that independent
//! finds, compression writes and joins on disjoint trees can run on the rayon
//! pool without locks. The only cross-thread writes that may touch the same
//! entry are compression writes, and those always store the current root of
//! the written node's tree, so any interleaving leaves the same value behind.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU32, Ordering::Relaxed};

use rayon::prelude::*;
use thiserror::Error;

use crate::{Vertex, MAX_VERTICES};

/// How individual finds treat the path they walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum FindMode {
    /// Read-only walk to the root.
    #[default]
    Plain,
    /// Walk to the root, then walk again pointing every node at the root.
    /// Concurrent finds do not coordinate.
    PragmaticCompress,
    /// Bulk operations route all their finds through one coordinated
    /// [`bulk_find`](UnionFindForest::bulk_find) per call. Single finds
    /// compress like [`FindMode::PragmaticCompress`].
    Coordinated,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("vertex count {0} exceeds the supported maximum")]
    TooManyVertices(usize),
    #[error("parent of {vertex} is {parent}, outside [0, {n})")]
    ParentOutOfRange { vertex: Vertex, parent: Vertex, n: usize },
    #[error("parent pointers starting at {0} form a cycle")]
    Cycle(Vertex),
    #[error("root {root} records size {recorded}, but {actual} vertices reach it")]
    SizeMismatch { root: Vertex, recorded: u32, actual: u32 },
}

pub struct UnionFindForest {
    parent: Vec<AtomicU32>,
    size: Vec<AtomicU32>,
    mode: FindMode,
    // Per-vertex flags used by bulk_find; allocated on first use and left
    // all-clear between calls.
    pub(crate) visited: Vec<AtomicBool>,
    pub(crate) bulk_find_calls: u64,
}

impl UnionFindForest {
    /// A forest of `n` singleton trees.
    ///
    /// Panics if `n` exceeds [`MAX_VERTICES`].
    pub fn new(n: usize, mode: FindMode) -> Self {
        assert!(n <= MAX_VERTICES, "vertex count {n} exceeds the supported maximum");
        Self {
            parent: (0..n as Vertex).into_par_iter().map(AtomicU32::new).collect(),
            size: (0..n).into_par_iter().map(|_| AtomicU32::new(1)).collect(),
            mode,
            visited: Vec::new(),
            bulk_find_calls: 0,
        }
    }

    /// Builds a forest from an explicit parent array, recomputing root sizes.
    ///
    /// The trees need not satisfy the union-by-size height bound, which makes
    /// this useful for exercising finds on deep paths.
    pub fn from_parents(parents: Vec<Vertex>, mode: FindMode) -> Result<Self, ForestError> {
        let n = parents.len();
        if n > MAX_VERTICES {
            return Err(ForestError::TooManyVertices(n));
        }
        for (v, &p) in parents.iter().enumerate() {
            if p as usize >= n {
                return Err(ForestError::ParentOutOfRange {
                    vertex: v as Vertex,
                    parent: p,
                    n,
                });
            }
        }
        // 0 = unseen, 1 = on the current walk, 2 = known to reach a root.
        let mut state = vec![0u8; n];
        let mut walk = Vec::new();
        for start in 0..n {
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                let p = parents[v] as usize;
                if p == v {
                    break;
                }
                v = p;
            }
            if state[v] == 1 && parents[v] as usize != v {
                return Err(ForestError::Cycle(v as Vertex));
            }
            for w in walk.drain(..) {
                state[w] = 2;
            }
        }

        let forest = Self {
            parent: parents.into_iter().map(AtomicU32::new).collect(),
            size: (0..n).map(|_| AtomicU32::new(1)).collect(),
            mode,
            visited: Vec::new(),
            bulk_find_calls: 0,
        };
        let mut sizes = vec![0u32; n];
        for v in 0..n as Vertex {
            sizes[forest.find_plain(v) as usize] += 1;
        }
        for (r, s) in sizes.into_iter().enumerate() {
            if s > 0 {
                forest.size[r].store(s, Relaxed);
            }
        }
        Ok(forest)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn mode(&self) -> FindMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: FindMode) {
        self.mode = mode;
    }

    #[inline]
    pub fn parent(&self, v: Vertex) -> Vertex {
        self.parent[v as usize].load(Relaxed)
    }

    #[inline]
    pub(crate) fn set_parent(&self, v: Vertex, p: Vertex) {
        self.parent[v as usize].store(p, Relaxed);
    }

    #[inline]
    pub fn is_root(&self, v: Vertex) -> bool {
        self.parent(v) == v
    }

    /// Size of the tree rooted at `root`. Entries of non-roots are stale.
    pub fn size(&self, root: Vertex) -> u32 {
        self.size[root as usize].load(Relaxed)
    }

    /// Snapshot of the parent array.
    pub fn parents(&self) -> Vec<Vertex> {
        self.parent.iter().map(|p| p.load(Relaxed)).collect()
    }

    #[inline]
    fn check(&self, u: Vertex) {
        assert!(
            (u as usize) < self.len(),
            "vertex {u} out of range for {} vertices",
            self.len()
        );
    }

    /// Root of `u`'s tree, compressing the path unless the mode is
    /// [`FindMode::Plain`].
    pub fn find(&self, u: Vertex) -> Vertex {
        self.check(u);
        match self.mode {
            FindMode::Plain => self.find_plain(u),
            FindMode::PragmaticCompress | FindMode::Coordinated => self.find_compress(u),
        }
    }

    /// Read-only find.
    #[inline]
    pub fn find_plain(&self, mut u: Vertex) -> Vertex {
        loop {
            let p = self.parent(u);
            if p == u {
                return u;
            }
            u = p;
        }
    }

    /// Find followed by a second pass that points every node on the path at
    /// the root. Safe to run concurrently with other finds, not with links.
    #[inline]
    pub fn find_compress(&self, u: Vertex) -> Vertex {
        let root = self.find_plain(u);
        let mut v = u;
        while v != root {
            let next = self.parent(v);
            if next != root {
                self.set_parent(v, root);
            }
            v = next;
        }
        root
    }

    /// Number of parent hops from `u` to its root.
    pub fn path_length(&self, mut u: Vertex) -> usize {
        self.check(u);
        let mut hops = 0;
        loop {
            let p = self.parent(u);
            if p == u {
                return hops;
            }
            u = p;
            hops += 1;
        }
    }

    /// Links two distinct roots by size; on a tie the first argument wins.
    /// Returns the surviving root.
    pub fn union_roots(&mut self, u: Vertex, v: Vertex) -> Vertex {
        self.check(u);
        self.check(v);
        self.link(u, v)
    }

    /// Shared-reference link used by the parallel join. Callers guarantee no
    /// concurrent operation touches either root.
    #[inline]
    pub(crate) fn link(&self, u: Vertex, v: Vertex) -> Vertex {
        debug_assert_ne!(u, v, "link of a root with itself");
        debug_assert!(self.is_root(u) && self.is_root(v), "link of non-roots {u}, {v}");
        let su = self.size(u);
        let sv = self.size(v);
        let (winner, loser) = if su >= sv { (u, v) } else { (v, u) };
        self.set_parent(loser, winner);
        self.size[winner as usize].store(su + sv, Relaxed);
        winner
    }

    /// Sequential union of two arbitrary vertices, as used by the per-edge
    /// baseline. A no-op returning the common root when already connected.
    pub fn seq_union(&mut self, u: Vertex, v: Vertex) -> Vertex {
        let ru = self.find(u);
        let rv = self.find(v);
        if ru == rv {
            ru
        } else {
            self.link(ru, rv)
        }
    }

    pub fn connected(&self, u: Vertex, v: Vertex) -> bool {
        self.find(u) == self.find(v)
    }

    /// Number of trees, i.e. connected components.
    pub fn count_components(&self) -> usize {
        self.parent
            .par_iter()
            .enumerate()
            .filter(|(v, p)| p.load(Relaxed) as usize == *v)
            .count()
    }

    /// Longest path to a root over all vertices.
    pub fn max_height(&self) -> usize {
        (0..self.len() as Vertex)
            .into_par_iter()
            .map(|v| self.path_length(v))
            .max()
            .unwrap_or(0)
    }

    /// Labels every vertex with the smallest vertex id in its component.
    /// Two forests describe the same partition iff their labels are equal.
    pub fn canonical_labels(&self) -> Vec<Vertex> {
        let roots: Vec<Vertex> = (0..self.len() as Vertex)
            .into_par_iter()
            .map(|v| self.find_plain(v))
            .collect();
        canonicalize(&roots)
    }

    /// Verifies acyclicity and that every root's size matches its tree.
    pub fn check_invariants(&self) -> Result<(), ForestError> {
        let n = self.len();
        let mut counts = vec![0u32; n];
        for v in 0..n as Vertex {
            let mut u = v;
            let mut hops = 0usize;
            loop {
                let p = self.parent(u);
                if p as usize >= n {
                    return Err(ForestError::ParentOutOfRange {
                        vertex: u,
                        parent: p,
                        n,
                    });
                }
                if p == u {
                    break;
                }
                hops += 1;
                if hops > n {
                    return Err(ForestError::Cycle(v));
                }
                u = p;
            }
            counts[u as usize] += 1;
        }
        for (r, &actual) in counts.iter().enumerate() {
            if actual > 0 && self.size(r as Vertex) != actual {
                return Err(ForestError::SizeMismatch {
                    root: r as Vertex,
                    recorded: self.size(r as Vertex),
                    actual,
                });
            }
        }
        Ok(())
    }
}

/// Maps per-vertex component identifiers to the minimum vertex id of each
/// component.
pub(crate) fn canonicalize(ids: &[Vertex]) -> Vec<Vertex> {
    let mut min_of = vec![Vertex::MAX; ids.len()];
    for (v, &id) in ids.iter().enumerate() {
        let slot = &mut min_of[id as usize];
        *slot = (*slot).min(v as Vertex);
    }
    ids.iter().map(|&id| min_of[id as usize]).collect()
}

impl Clone for UnionFindForest {
    fn clone(&self) -> Self {
        Self {
            parent: self.parent.iter().map(|p| AtomicU32::new(p.load(Relaxed))).collect(),
            size: self.size.iter().map(|s| AtomicU32::new(s.load(Relaxed))).collect(),
            mode: self.mode,
            visited: Vec::new(),
            bulk_find_calls: self.bulk_find_calls,
        }
    }
}

impl fmt::Debug for UnionFindForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnionFindForest")
            .field("n", &self.len())
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}
