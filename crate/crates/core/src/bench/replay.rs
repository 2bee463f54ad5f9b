use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use super::report::{throughput, BatchRow, RunReport};
use super::stream::{BatchKind, StreamFile};
use crate::{Edge, FindMode, SequentialUnionFind, UnionFindForest, Vertex};

/// The structure a stream is replayed through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Bulk operations with independent compressing finds.
    Simple,
    /// Bulk operations whose finds go through one coordinated bulk find.
    WorkEfficient,
    /// Sequential union by size, no compression.
    SeqUf,
    /// Sequential union by size with full path compression.
    SeqUfPc,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Simple, Mode::WorkEfficient, Mode::SeqUf, Mode::SeqUfPc];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Simple => "simple",
            Mode::WorkEfficient => "work-efficient",
            Mode::SeqUf => "seq-uf",
            Mode::SeqUfPc => "seq-uf-pc",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}` (expected simple, work-efficient, seq-uf or seq-uf-pc)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayOptions {
    pub mode: Mode,
    /// Worker threads for the bulk operations; 0 runs on the current rayon
    /// pool.
    pub threads: usize,
    /// Replay a compressing sequential union-find alongside and compare every
    /// query answer and the final partition.
    pub check_oracle: bool,
}

impl ReplayOptions {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            threads: 0,
            check_oracle: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("oracle mismatch in batch {batch}: {detail}")]
    OracleMismatch { batch: usize, detail: String },
    #[error("final partition differs from the oracle")]
    FinalPartitionMismatch,
    #[error("cannot build thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

enum Structure {
    Bulk(UnionFindForest),
    Seq(SequentialUnionFind),
}

impl Structure {
    fn new(n: usize, mode: Mode) -> Self {
        match mode {
            Mode::Simple => Structure::Bulk(UnionFindForest::new(n, FindMode::PragmaticCompress)),
            Mode::WorkEfficient => Structure::Bulk(UnionFindForest::new(n, FindMode::Coordinated)),
            Mode::SeqUf => Structure::Seq(SequentialUnionFind::new(n, false)),
            Mode::SeqUfPc => Structure::Seq(SequentialUnionFind::new(n, true)),
        }
    }

    fn update(&mut self, edges: &[Edge]) -> usize {
        match self {
            Structure::Bulk(f) => f.bulk_update(edges).unions,
            Structure::Seq(s) => s.insert_all(edges),
        }
    }

    fn query(&mut self, queries: &[Edge]) -> Vec<bool> {
        match self {
            Structure::Bulk(f) => f.bulk_query(queries),
            Structure::Seq(s) => queries.iter().map(|&(u, v)| s.connected(u, v)).collect(),
        }
    }

    fn canonical_labels(&self) -> Vec<Vertex> {
        match self {
            Structure::Bulk(f) => f.canonical_labels(),
            Structure::Seq(s) => s.canonical_labels(),
        }
    }
}

enum Outcome {
    Unions(usize),
    Answers(Vec<bool>),
}

/// Processes the batches of `file` in order, one bulk call at a time, timing
/// each call.
pub fn replay(file: &StreamFile, options: ReplayOptions) -> Result<RunReport, ReplayError> {
    if options.threads == 0 {
        return replay_in_pool(file, options, rayon::current_num_threads());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(options.threads).build()?;
    pool.install(|| replay_in_pool(file, options, options.threads))
}

fn replay_in_pool(file: &StreamFile, options: ReplayOptions, threads: usize) -> Result<RunReport, ReplayError> {
    let mut structure = Structure::new(file.n, options.mode);
    let mut oracle = options.check_oracle.then(|| SequentialUnionFind::new(file.n, true));
    let mut components = file.n;
    let mut rows = Vec::with_capacity(file.batches.len());
    let mut answers = Vec::new();

    for (index, batch) in file.batches.iter().enumerate() {
        let start = Instant::now();
        let result = match batch.kind {
            BatchKind::Update => Outcome::Unions(structure.update(&batch.pairs)),
            BatchKind::Query => Outcome::Answers(structure.query(&batch.pairs)),
        };
        let wall_seconds = start.elapsed().as_secs_f64().max(1e-9);

        match result {
            Outcome::Unions(unions) => {
                components -= unions;
                if let Some(o) = oracle.as_mut() {
                    let expected = o.insert_all(&batch.pairs);
                    if expected != unions {
                        return Err(ReplayError::OracleMismatch {
                            batch: index,
                            detail: format!("{unions} unions, oracle performed {expected}"),
                        });
                    }
                }
            }
            Outcome::Answers(got) => {
                if let Some(o) = oracle.as_mut() {
                    if let Some(i) = (0..got.len()).find(|&i| {
                        let (u, v) = batch.pairs[i];
                        o.connected(u, v) != got[i]
                    }) {
                        let (u, v) = batch.pairs[i];
                        return Err(ReplayError::OracleMismatch {
                            batch: index,
                            detail: format!("query {i} ({u}, {v}) answered {}", got[i]),
                        });
                    }
                }
                answers.push(got);
            }
        }
        rows.push(BatchRow {
            index,
            kind: batch.kind,
            size: batch.pairs.len(),
            wall_seconds,
            per_second: throughput(batch.pairs.len(), wall_seconds),
            components_after: components,
        });
    }

    if let Some(o) = &oracle {
        if o.canonical_labels() != structure.canonical_labels() {
            return Err(ReplayError::FinalPartitionMismatch);
        }
    }
    Ok(RunReport::new(options.mode, threads, file.n, rows, answers))
}
