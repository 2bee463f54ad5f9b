//! Bulk query and bulk update on top of the union-find forest.
//!
//! An update relabels every edge with the roots of its endpoints, drops the
//! edges that fall inside one tree, computes connected components of what is
//! left, and joins the roots of each component with a balanced divide and
//! conquer. Components touch disjoint root sets, so they are joined in
//! parallel.

use rayon::prelude::*;

use crate::components::connected_components;
use crate::forest::{FindMode, UnionFindForest};
use crate::primitives::{filter, grain_size};
use crate::{Edge, Vertex};

/// Counters reported by [`UnionFindForest::bulk_update`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateStats {
    /// Edges in the minibatch, self-loops and duplicates included.
    pub edges_seen: usize,
    /// Edges left after relabeling to roots and dropping self-loops.
    pub relabeled_edges: usize,
    /// Components of the relabeled edge set that were joined.
    pub components_joined: usize,
    /// Root links performed; the component count drops by exactly this much.
    pub unions: usize,
}

/// Edges of a minibatch rewritten in terms of tree roots.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelabeledEdges {
    /// Every edge with both endpoints replaced by their roots.
    pub relabeled: Vec<Edge>,
    /// The relabeled edges whose endpoints lie in different trees.
    pub cross: Vec<Edge>,
}

/// Result of [`UnionFindForest::parallel_join`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JoinTrace {
    pub root: Vertex,
    pub unions: usize,
    /// Recursion levels below the top call; `ceil(log2 k)` for `k` roots.
    pub depth: usize,
}

// Sub-joins smaller than this run on the current thread.
const JOIN_SPAWN_THRESHOLD: usize = 256;

impl UnionFindForest {
    /// Answers each `(u, v)` with whether `u` and `v` are connected.
    ///
    /// The partition is unchanged; compressing modes may rewrite parent
    /// pointers along the way.
    pub fn bulk_query(&mut self, queries: &[Edge]) -> Vec<bool> {
        if self.mode() == FindMode::Coordinated {
            let roots = self.bulk_find(&flatten(queries)).roots;
            return roots.chunks_exact(2).map(|p| p[0] == p[1]).collect();
        }
        let this = &*self;
        queries
            .par_iter()
            .with_min_len(grain_size())
            .map(|&(u, v)| this.find(u) == this.find(v))
            .collect()
    }

    /// Replaces each edge's endpoints by their roots and separates out the
    /// edges that cross between trees.
    pub fn relabel(&mut self, edges: &[Edge]) -> RelabeledEdges {
        let relabeled: Vec<Edge> = if self.mode() == FindMode::Coordinated {
            let roots = self.bulk_find(&flatten(edges)).roots;
            roots.chunks_exact(2).map(|p| (p[0], p[1])).collect()
        } else {
            let this = &*self;
            edges
                .par_iter()
                .with_min_len(grain_size())
                .map(|&(u, v)| (this.find(u), this.find(v)))
                .collect()
        };
        let cross = filter(&relabeled, |(u, v)| u != v);
        RelabeledEdges { relabeled, cross }
    }

    /// Inserts a minibatch of edges. Afterwards two vertices share a root iff
    /// they are connected by the edges inserted so far.
    pub fn bulk_update(&mut self, edges: &[Edge]) -> UpdateStats {
        let RelabeledEdges { cross, .. } = self.relabel(edges);
        let mut stats = UpdateStats {
            edges_seen: edges.len(),
            relabeled_edges: cross.len(),
            ..UpdateStats::default()
        };
        if cross.is_empty() {
            return stats;
        }
        let partition = connected_components(&cross);
        #[cfg(debug_assertions)]
        {
            let mut seen = std::collections::HashSet::new();
            for c in partition.components() {
                for &r in c {
                    debug_assert!(seen.insert(r), "root {r} in two components");
                    debug_assert!(self.is_root(r), "component member {r} is not a root");
                }
            }
        }
        let this = &*self;
        stats.components_joined = partition.len();
        stats.unions = partition.components().par_iter().map(|c| join(this, c).unions).sum();
        stats
    }

    /// Links the trees of `roots` into one, halving the sequence recursively
    /// and joining the halves in parallel. Performs exactly `roots.len() - 1`
    /// links.
    ///
    /// Panics if `roots` is empty. Roots must be distinct roots of the forest
    /// (checked in debug builds).
    pub fn parallel_join(&mut self, roots: &[Vertex]) -> JoinTrace {
        assert!(!roots.is_empty(), "parallel_join needs at least one root");
        #[cfg(debug_assertions)]
        {
            let mut distinct = roots.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            debug_assert_eq!(distinct.len(), roots.len(), "duplicate roots");
            debug_assert!(roots.iter().all(|&r| self.is_root(r)), "non-root passed to join");
        }
        join(self, roots)
    }
}

fn join(forest: &UnionFindForest, roots: &[Vertex]) -> JoinTrace {
    if roots.len() == 1 {
        return JoinTrace {
            root: roots[0],
            unions: 0,
            depth: 0,
        };
    }
    let (left, right) = roots.split_at(roots.len() / 2);
    let (a, b) = if roots.len() >= JOIN_SPAWN_THRESHOLD {
        rayon::join(|| join(forest, left), || join(forest, right))
    } else {
        (join(forest, left), join(forest, right))
    };
    JoinTrace {
        root: forest.link(a.root, b.root),
        unions: a.unions + b.unions + 1,
        depth: 1 + a.depth.max(b.depth),
    }
}

fn flatten(pairs: &[Edge]) -> Vec<Vertex> {
    pairs.iter().flat_map(|&(u, v)| [u, v]).collect()
}
