//! Oracles shared by unit tests. Deliberately independent of the library's
//! union-find and connected-components code.

use std::collections::VecDeque;

use crate::Vertex;

/// Component labels by breadth-first search over an adjacency list: every
/// vertex gets the smallest id in its component.
pub(crate) fn bfs_labels(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<Vertex> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    let mut label = vec![Vertex::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != Vertex::MAX {
            continue;
        }
        label[s] = s as Vertex;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if label[y] == Vertex::MAX {
                    label[y] = s as Vertex;
                    queue.push_back(y);
                }
            }
        }
    }
    label
}

/// A 20-vertex tree rooted at 19 in which the paths from 1 and from 7 meet
/// at 4, and 3 joins 1's path at 2:
///
/// ```text
/// 1 -> 2 -> 4 -> 10 -> 19
/// 3 -> 2
/// 7 -> 8 -> 9 -> 4
/// ```
///
/// The remaining vertices hang off the tree as distractors.
pub(crate) fn merging_paths_tree() -> Vec<Vertex> {
    let mut parent: Vec<Vertex> = (0..20).collect();
    for (child, p) in [
        (1, 2),
        (3, 2),
        (2, 4),
        (4, 10),
        (10, 19),
        (7, 8),
        (8, 9),
        (9, 4),
        (0, 19),
        (5, 10),
        (6, 5),
        (11, 19),
        (12, 11),
        (13, 12),
        (14, 19),
        (15, 14),
        (16, 15),
        (17, 8),
        (18, 19),
    ] {
        parent[child] = p;
    }
    parent
}
