//! Oracles and workload builders shared by the integration tests. The oracles
//! here do not call into the library.
#![allow(dead_code)]

use std::collections::VecDeque;

use bpcc::bench::Batch;
use bpcc::generate::{generate_all, StreamSpec};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Pair = (u32, u32);

/// Textbook union-find: union by size and full path compression.
#[derive(Clone)]
pub struct OracleUf {
    pub parent: Vec<u32>,
    size: Vec<u32>,
}

impl OracleUf {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn from_parents(parent: Vec<u32>) -> Self {
        let n = parent.len();
        Self {
            parent,
            size: vec![1; n],
        }
    }

    /// Root of `u`, plus the non-root vertices walked to get there.
    pub fn find_path(&mut self, u: u32) -> (u32, Vec<u32>) {
        let mut path = Vec::new();
        let mut r = u;
        while self.parent[r as usize] != r {
            path.push(r);
            r = self.parent[r as usize];
        }
        for &w in &path {
            self.parent[w as usize] = r;
        }
        (r, path)
    }

    pub fn find(&mut self, u: u32) -> u32 {
        self.find_path(u).0
    }

    pub fn union(&mut self, u: u32, v: u32) -> bool {
        let (a, b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        let (big, small) = if self.size[a as usize] >= self.size[b as usize] {
            (a, b)
        } else {
            (b, a)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        true
    }

    pub fn components(&self) -> usize {
        self.parent.iter().enumerate().filter(|&(v, &p)| v as u32 == p).count()
    }
}

/// Smallest vertex id in each vertex's component, by breadth-first search.
pub fn bfs_labels(n: usize, edges: &[Pair]) -> Vec<u32> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut label = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != u32::MAX {
            continue;
        }
        label[s] = s as u32;
        queue.push_back(s as u32);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x as usize] {
                if label[y as usize] == u32::MAX {
                    label[y as usize] = s as u32;
                    queue.push_back(y);
                }
            }
        }
    }
    label
}

pub fn bfs_component_count(n: usize, edges: &[Pair]) -> usize {
    bfs_labels(n, edges)
        .iter()
        .enumerate()
        .filter(|&(v, &l)| v as u32 == l)
        .count()
}

/// Component labels of an explicit parent array, as smallest member id.
pub fn labels_from_parents(parent: &[u32]) -> Vec<u32> {
    let n = parent.len();
    let root = |mut v: usize| {
        while parent[v] as usize != v {
            v = parent[v] as usize;
        }
        v
    };
    let mut smallest = vec![u32::MAX; n];
    let roots: Vec<usize> = (0..n).map(root).collect();
    for v in 0..n {
        smallest[roots[v]] = smallest[roots[v]].min(v as u32);
    }
    roots.iter().map(|&r| smallest[r]).collect()
}

/// Longest parent-pointer path in the forest.
pub fn max_depth(parent: &[u32]) -> usize {
    (0..parent.len())
        .map(|mut v| {
            let mut d = 0;
            while parent[v] as usize != v {
                v = parent[v] as usize;
                d += 1;
            }
            d
        })
        .max()
        .unwrap_or(0)
}

pub fn floor_log2(n: usize) -> usize {
    let mut d = 0;
    while (2usize << d) <= n {
        d += 1;
    }
    d
}

pub fn ceil_log2(k: usize) -> usize {
    let mut d = 0;
    while (1usize << d) < k {
        d += 1;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptKind {
    Random,
    Local,
    Rmat,
    Grid,
    Star,
    Chain,
    Tie,
}

pub const SCRIPT_KINDS: [ScriptKind; 7] = [
    ScriptKind::Random,
    ScriptKind::Local,
    ScriptKind::Rmat,
    ScriptKind::Grid,
    ScriptKind::Star,
    ScriptKind::Chain,
    ScriptKind::Tie,
];

#[derive(Debug, Clone)]
pub struct Script {
    pub kind: ScriptKind,
    pub n: usize,
    pub batches: Vec<Batch>,
}

fn split_into(edges: Vec<Pair>, parts: usize) -> Vec<Vec<Pair>> {
    let size = edges.len().div_ceil(parts.max(1)).max(1);
    edges.chunks(size).map(<[Pair]>::to_vec).collect()
}

/// A random mixed update/query script over at most `max_n` vertices with at
/// most `max_batches` batches.
pub fn random_script(kind: ScriptKind, max_n: usize, max_batches: usize, rng: &mut ChaCha8Rng) -> Script {
    let updates_target = rng.gen_range(1..=max_batches / 2);
    let log_n = rng.gen_range(1..=floor_log2(max_n));
    let mut n = rng.gen_range((1usize << (log_n - 1)).max(2)..=(1usize << log_n));
    let seed = rng.gen();
    let from_spec = |spec: StreamSpec| generate_all(&spec).expect("valid spec").concat();
    let updates: Vec<Vec<Pair>> = match kind {
        ScriptKind::Random => {
            let k = rng.gen_range(1..=3);
            split_into(from_spec(StreamSpec::random(n, k, seed, 1)), updates_target)
        }
        ScriptKind::Local => {
            let (k, window) = (rng.gen_range(1..=4), rng.gen_range(1..=32));
            split_into(from_spec(StreamSpec::local(n, k, window, seed, 1)), updates_target)
        }
        ScriptKind::Rmat => {
            n = n.next_power_of_two().min(max_n);
            let m = n * rng.gen_range(1..=6);
            split_into(from_spec(StreamSpec::rmat(n, m, seed, 1)), updates_target)
        }
        ScriptKind::Grid => {
            let mut side = 1;
            while (side + 1usize).pow(3) <= n {
                side += 1;
            }
            n = side.pow(3);
            let mut edges = from_spec(StreamSpec::grid3d(side, seed, 1));
            if rng.gen_bool(0.5) {
                edges.shuffle(rng);
            }
            split_into(edges, updates_target)
        }
        ScriptKind::Star => {
            let center = rng.gen_range(0..n as u32);
            let mut edges: Vec<Pair> = (0..n as u32)
                .filter(|&v| v != center)
                .map(|v| if rng.gen_bool(0.5) { (center, v) } else { (v, center) })
                .collect();
            edges.shuffle(rng);
            split_into(edges, updates_target)
        }
        ScriptKind::Chain => {
            let mut order: Vec<u32> = (0..n as u32).collect();
            if rng.gen_bool(0.5) {
                order.shuffle(rng);
            }
            let mut edges: Vec<Pair> = order.windows(2).map(|w| (w[0], w[1])).collect();
            if rng.gen_bool(0.5) {
                edges.shuffle(rng);
            }
            split_into(edges, updates_target)
        }
        ScriptKind::Tie => {
            // Round t joins blocks of size 2^t pairwise, so every join sees
            // trees of equal size.
            n = 1 << log_n;
            let mut rounds = Vec::new();
            let mut block = 1;
            while block < n {
                let mut round = Vec::new();
                for start in (0..n).step_by(2 * block) {
                    let a = start + rng.gen_range(0..block);
                    let b = start + block + rng.gen_range(0..block);
                    round.push((a as u32, b as u32));
                }
                round.shuffle(rng);
                rounds.push(round);
                block *= 2;
            }
            rounds
        }
    };

    let mut batches = Vec::new();
    let mut seen: Vec<Pair> = Vec::new();
    for edges in updates {
        if batches.len() + 2 > max_batches {
            break;
        }
        seen.extend_from_slice(&edges);
        batches.push(Batch::update(edges));
        if rng.gen_bool(0.6) {
            let q = rng.gen_range(1..=n.min(2000));
            let queries = (0..q)
                .map(|_| {
                    if !seen.is_empty() && rng.gen_bool(0.5) {
                        let (a, _) = seen[rng.gen_range(0..seen.len())];
                        let (_, b) = seen[rng.gen_range(0..seen.len())];
                        (a, b)
                    } else {
                        (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32))
                    }
                })
                .collect();
            batches.push(Batch::query(queries));
        }
    }
    Script { kind, n, batches }
}

/// Every permutation of `items`, visited in lexicographic index order until
/// `visit` returns true. Returns the number of permutations visited.
pub fn search_permutations<T: Copy>(items: &[T], mut visit: impl FnMut(&[T]) -> bool) -> (usize, bool) {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    let mut tried = 0;
    loop {
        tried += 1;
        let perm: Vec<T> = idx.iter().map(|&i| items[i]).collect();
        if visit(&perm) {
            return (tried, true);
        }
        // Next lexicographic permutation of idx.
        let Some(i) = (1..idx.len()).rev().find(|&i| idx[i - 1] < idx[i]) else {
            return (tried, false);
        };
        let j = (i..idx.len()).rev().find(|&j| idx[j] > idx[i - 1]).unwrap();
        idx.swap(i - 1, j);
        idx[i..].reverse();
    }
}
