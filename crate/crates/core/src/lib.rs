//! Bulk-parallel incremental graph connectivity.
//!
//! A [`UnionFindForest`] ingests minibatches of edges with
//! [`UnionFindForest::bulk_update`] and answers minibatches of connectivity
//! queries with [`UnionFindForest::bulk_query`]. Each bulk operation is
//! internally parallel (on the ambient rayon pool); bulk operations themselves
//! are serialized, which the `&mut self` receivers enforce.
//!
//! ```
//! use bpcc::{FindMode, UnionFindForest};
//!
//! let mut forest = UnionFindForest::new(8, FindMode::PragmaticCompress);
//! let star: Vec<(u32, u32)> = (1..8).map(|v| (0, v)).collect();
//! let stats = forest.bulk_update(&star);
//! assert_eq!(stats.unions, 7);
//! assert_eq!(forest.bulk_query(&[(2, 7), (3, 3)]), vec![true, true]);
//! assert_eq!(forest.count_components(), 1);
//! ```
//!
//! The `book/` directory at the repository root has the long-form guide; its
//! code listings are compiled and run as doc-tests of this crate.

pub mod bench;
pub mod bulk;
pub mod bulk_find;
pub mod components;
pub mod forest;
pub mod generate;
pub mod primitives;
pub mod sequential;

pub use bulk::{JoinTrace, RelabeledEdges, UpdateStats};
pub use bulk_find::{BulkFindOutcome, ResponseDistributor, TraversalLog};
pub use components::{connected_components, ComponentPartition};
pub use forest::{FindMode, ForestError, UnionFindForest};
pub use sequential::SequentialUnionFind;

/// Dense vertex identifier in `[0, n)`.
pub type Vertex = u32;

/// An undirected edge, or a connectivity query, between two vertices.
pub type Edge = (Vertex, Vertex);

/// Largest supported vertex count. One id above the last vertex is reserved
/// as the NIL predecessor in bulk-find traversal records.
pub const MAX_VERTICES: usize = (u32::MAX - 1) as usize;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/primitives.md")]
    mod primitives {}
    #[doc = include_str!("../../../book/src/union-find.md")]
    mod union_find {}
    #[doc = include_str!("../../../book/src/bulk-update.md")]
    mod bulk_update {}
    #[doc = include_str!("../../../book/src/connected-components.md")]
    mod connected_components {}
    #[doc = include_str!("../../../book/src/bulk-find.md")]
    mod bulk_find {}
    #[doc = include_str!("../../../book/src/response-distributor.md")]
    mod response_distributor {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/stream-format.md")]
    mod stream_format {}
}

#[cfg(test)]
pub(crate) mod testutil;
