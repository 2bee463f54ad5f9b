//! Connected components of a raw edge list over sparse vertex ids.
//!
//! Endpoints are first densified through a claim table (distinct ids, ranked
//! by slot order), so all scratch state is proportional to the number of
//! edges rather than to the id universe. Components are then found by
//! hook-and-contract rounds on the dense labels:
//!
//! 1. every edge whose endpoints carry different root labels hooks the higher
//!    root under the lower one (`fetch_min`, so the lowest label wins);
//! 2. labels are shortcut to their roots;
//! 3. edges are contracted onto root labels and internal ones dropped.
//!
//! Labels only ever decrease, so hooking cannot create cycles. An edge is only
//! dropped once both ends share a root, and every round with a live edge hooks
//! at least one root, so the loop terminates with exact components.

use std::sync::atomic::{AtomicU32, Ordering::Relaxed};

use rayon::prelude::*;

use crate::primitives::{filter, int_sort, prefix_sum, ClaimTable};
use crate::{Edge, Vertex};

/// Components of the graph induced by an edge list, each a list of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentPartition {
    components: Vec<Vec<Vertex>>,
}

impl ComponentPartition {
    pub fn components(&self) -> &[Vec<Vertex>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Vec<Vertex>> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of distinct endpoints covered.
    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    /// Order-insensitive form: each component sorted, components ordered by
    /// their minimum id.
    pub fn canonical(&self) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = self
            .components
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        out.sort_unstable_by_key(|c| c[0]);
        out
    }
}

/// Connected components of `edges`. Self-loops are not expected (the bulk
/// update strips them) and are rejected in debug builds.
pub fn connected_components(edges: &[Edge]) -> ComponentPartition {
    debug_assert!(
        edges.par_iter().all(|(u, v)| u != v),
        "connected_components: self-loop in input"
    );
    if edges.is_empty() {
        return ComponentPartition::default();
    }

    // Densify endpoint ids.
    let table = ClaimTable::with_capacity(2 * edges.len());
    let slot_edges: Vec<(usize, usize)> = edges
        .par_iter()
        .map(|&(u, v)| (table.claim(u), table.claim(v)))
        .collect();
    let occupied = table.occupancy();
    let flags: Vec<usize> = occupied.par_iter().map(|&o| o as usize).collect();
    let (rank, k) = prefix_sum(&flags).expect("slot count fits in usize");
    let ids = table.into_keys();
    debug_assert_eq!(ids.len(), k);
    let mut active: Vec<Edge> = slot_edges
        .par_iter()
        .map(|&(a, b)| (rank[a] as Vertex, rank[b] as Vertex))
        .collect();
    drop(slot_edges);

    let label: Vec<AtomicU32> = (0..k as Vertex).into_par_iter().map(AtomicU32::new).collect();
    while !active.is_empty() {
        active.par_iter().for_each(|&(a, b)| {
            let (la, lb) = (label[a as usize].load(Relaxed), label[b as usize].load(Relaxed));
            if la != lb {
                let (lo, hi) = if la < lb { (la, lb) } else { (lb, la) };
                label[hi as usize].fetch_min(lo, Relaxed);
            }
        });
        label.par_iter().for_each(|l| {
            let mut r = l.load(Relaxed);
            loop {
                let next = label[r as usize].load(Relaxed);
                if next == r {
                    break;
                }
                r = next;
            }
            l.store(r, Relaxed);
        });
        let contracted: Vec<Edge> = active
            .par_iter()
            .map(|&(a, b)| (label[a as usize].load(Relaxed), label[b as usize].load(Relaxed)))
            .collect();
        active = filter(&contracted, |(a, b)| a != b);
    }

    // Group vertices by final label.
    let keyed: Vec<(usize, Vertex)> = label
        .par_iter()
        .zip(ids.par_iter())
        .map(|(l, &id)| (l.load(Relaxed) as usize, id))
        .collect();
    let sorted = int_sort(&keyed, k).expect("labels lie in [0, k)");
    let starts: Vec<usize> = (0..sorted.len())
        .into_par_iter()
        .filter(|&i| i == 0 || sorted[i].0 != sorted[i - 1].0)
        .collect();
    let components = starts
        .par_iter()
        .enumerate()
        .map(|(j, &s)| {
            let e = starts.get(j + 1).copied().unwrap_or(sorted.len());
            sorted[s..e].iter().map(|&(_, id)| id).collect()
        })
        .collect();
    ComponentPartition { components }
}
