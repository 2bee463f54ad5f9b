//! Coordinated multi-source find with full path compression.
//!
//! Phase I runs a breadth-first walk upward from all query vertices at once.
//! Each level records the hops it takes as `(parent, child)` pairs; when
//! several flows reach the same vertex only one continues, and a flow stops
//! as soon as it reaches a vertex some other flow already visited. Phase II
//! indexes the recorded hops in a [`ResponseDistributor`] and walks them
//! backwards from the roots, pointing every visited vertex directly at its
//! root.
//!
//! The total work of a call is linear in the number of recorded pairs
//! ([`BulkFindOutcome::traversal_len`]), which is at most the summed plain
//! path lengths of the queries plus one seed record per query.

mod distributor;

pub use distributor::{MultiplyShift, ResponseDistributor};

use std::sync::atomic::{AtomicBool, Ordering::Relaxed};

use rayon::prelude::*;

use crate::forest::UnionFindForest;
use crate::primitives::{grain_size, remove_dup};
use crate::{Edge, Vertex};

/// Per-vertex visited flags.
pub trait VisitedSet: Sync {
    fn contains(&self, v: Vertex) -> bool;
}

impl VisitedSet for [AtomicBool] {
    fn contains(&self, v: Vertex) -> bool {
        self[v as usize].load(Relaxed)
    }
}

impl VisitedSet for [bool] {
    fn contains(&self, v: Vertex) -> bool {
        self[v as usize]
    }
}

/// Distinct, not yet visited target vertices of a level's records.
pub fn make_frontier<V: VisitedSet + ?Sized>(records: &[Edge], visited: &V) -> Vec<Vertex> {
    let requested: Vec<Vertex> = if records.len() <= grain_size() {
        records.iter().map(|r| r.0).filter(|&v| !visited.contains(v)).collect()
    } else {
        records
            .par_iter()
            .map(|r| r.0)
            .filter(|&v| !visited.contains(v))
            .collect()
    };
    remove_dup(&requested)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BulkFindOutcome {
    /// Root of each query vertex, in query order.
    pub roots: Vec<Vertex>,
    /// Number of records in the concatenated traversal log, seeds included.
    pub traversal_len: usize,
    /// Iterations of the Phase I loop.
    pub iterations: usize,
    /// Seed of the response distributor's hash.
    pub seed: u64,
}

/// Everything Phase I recorded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraversalLog {
    /// Vertex id used as the predecessor of seed records.
    pub nil: Vertex,
    /// `levels[i]` holds the `(vertex, predecessor)` records of level `i`;
    /// level 0 holds one `(query, nil)` seed per query.
    pub levels: Vec<Vec<Edge>>,
    /// `frontiers[i]` holds the vertices expanded at level `i`.
    pub frontiers: Vec<Vec<Vertex>>,
    /// Roots reached.
    pub roots: Vec<Vertex>,
}

impl TraversalLog {
    /// The concatenation of all levels.
    pub fn union(&self) -> Vec<Edge> {
        self.levels.concat()
    }

    pub fn union_len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Every vertex visited in Phase I.
    pub fn visited(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.frontiers.iter().flatten().copied()
    }
}

impl UnionFindForest {
    /// Roots of every vertex in `queries`, compressing all traversed paths.
    ///
    /// Answers equal those of plain finds made before the call; afterwards
    /// every vertex visited on the way points directly at its root.
    pub fn bulk_find(&mut self, queries: &[Vertex]) -> BulkFindOutcome {
        let seed = self.next_bulk_find_seed();
        self.bulk_find_traced(queries, seed).0
    }

    /// [`bulk_find`](Self::bulk_find) with an explicit distributor seed,
    /// also returning the Phase I log.
    pub fn bulk_find_traced(&mut self, queries: &[Vertex], seed: u64) -> (BulkFindOutcome, TraversalLog) {
        let n = self.len();
        for &q in queries {
            assert!((q as usize) < n, "vertex {q} out of range for {n} vertices");
        }
        if self.visited.len() != n {
            self.visited = (0..n).into_par_iter().map(|_| AtomicBool::new(false)).collect();
        }
        let nil = n as Vertex;
        let this = &*self;
        let visited = &this.visited[..];

        // Phase I.
        let mut log = TraversalLog {
            nil,
            ..TraversalLog::default()
        };
        let seeds: Vec<Edge> = queries.iter().map(|&q| (q, nil)).collect();
        let mut frontier = make_frontier(&seeds, visited);
        log.levels.push(seeds);
        let mut iterations = 0;
        while !log.levels.last().is_some_and(Vec::is_empty) {
            iterations += 1;
            frontier
                .par_iter()
                .for_each(|&v| visited[v as usize].store(true, Relaxed));
            let next: Vec<Edge> = frontier
                .par_iter()
                .filter_map(|&v| {
                    let p = this.parent(v);
                    (p != v).then_some((p, v))
                })
                .collect();
            log.roots.extend(frontier.iter().copied().filter(|&v| this.is_root(v)));
            let next_frontier = make_frontier(&next, visited);
            log.frontiers.push(std::mem::replace(&mut frontier, next_frontier));
            log.levels.push(next);
        }
        debug_assert!(frontier.is_empty());

        // Phase II.
        let rd = ResponseDistributor::build(&log.union(), seed);
        let mut wave: Vec<Edge> = log.roots.iter().map(|&r| (r, r)).collect();
        #[cfg(debug_assertions)]
        let mut expanded = std::collections::HashSet::new();
        while !wave.is_empty() {
            #[cfg(debug_assertions)]
            for &(v, _) in &wave {
                debug_assert!(expanded.insert(v), "vertex {v} expanded twice");
            }
            wave.par_iter().for_each(|&(v, r)| this.set_parent(v, r));
            wave = wave
                .par_iter()
                .flat_map_iter(|&(v, r)| rd.all_from(v).filter(move |&u| u != nil).map(move |u| (u, r)))
                .collect();
        }

        let roots: Vec<Vertex> = queries.par_iter().map(|&q| this.parent(q)).collect();
        log.frontiers
            .par_iter()
            .flatten()
            .for_each(|&v| visited[v as usize].store(false, Relaxed));

        let outcome = BulkFindOutcome {
            roots,
            traversal_len: log.union_len(),
            iterations,
            seed,
        };
        (outcome, log)
    }

    fn next_bulk_find_seed(&mut self) -> u64 {
        self.bulk_find_calls += 1;
        let mut state = self.bulk_find_calls;
        distributor::splitmix64(&mut state)
    }
}
