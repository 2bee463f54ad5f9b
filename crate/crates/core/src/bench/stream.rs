//! Stream files: an ordered list of update and query minibatches over a fixed
//! vertex count.
//!
//! Binary layout, all integers little-endian:
//!
//! ```text
//! offset 0   4 bytes  magic "BPCC"
//! offset 4   u32      version (1)
//! offset 8   u64      n
//! offset 16  u64      batch count
//! then per batch:
//!            u8       kind (0 = update, 1 = query)
//!            u64      pair count
//!            count x (u64 u, u64 v)
//! ```
//!
//! The text layout has an `n <N>` header line, a `#batch update` or
//! `#batch query` line opening each batch, and one `u v` pair per line. Other
//! lines starting with `#` and blank lines are ignored.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::generate::{generate, GenError, StreamSpec};
use crate::{Edge, Vertex, MAX_VERTICES};

pub const STREAM_MAGIC: &[u8; 4] = b"BPCC";
pub const STREAM_VERSION: u32 = 1;

const HEADER_LEN: usize = 24;
const PAIR_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BatchKind {
    Update,
    Query,
}

impl BatchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BatchKind::Update => "update",
            BatchKind::Query => "query",
        }
    }
}

impl fmt::Display for BatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Batch {
    pub kind: BatchKind,
    pub pairs: Vec<Edge>,
}

impl Batch {
    pub fn update(pairs: Vec<Edge>) -> Self {
        Self {
            kind: BatchKind::Update,
            pairs,
        }
    }

    pub fn query(pairs: Vec<Edge>) -> Self {
        Self {
            kind: BatchKind::Query,
            pairs,
        }
    }
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("byte {offset}: {message}")]
    Parse { offset: u64, message: String },
    #[error("invalid stream: {0}")]
    Invalid(String),
    #[error(transparent)]
    Generate(#[from] GenError),
}

fn parse_err(offset: usize, message: impl Into<String>) -> StreamError {
    StreamError::Parse {
        offset: offset as u64,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StreamFile {
    pub n: usize,
    pub batches: Vec<Batch>,
}

impl StreamFile {
    pub fn new(n: usize, batches: Vec<Batch>) -> Result<Self, StreamError> {
        let file = Self { n, batches };
        file.validate()?;
        Ok(file)
    }

    /// Checks the vertex count and that every id is below `n`.
    pub fn validate(&self) -> Result<(), StreamError> {
        if self.n > MAX_VERTICES {
            return Err(StreamError::Invalid(format!("n = {} is too large", self.n)));
        }
        for (i, b) in self.batches.iter().enumerate() {
            if let Some(&(u, v)) = b.pairs.iter().find(|&&(u, v)| u.max(v) as usize >= self.n) {
                return Err(StreamError::Invalid(format!(
                    "batch {i} has pair ({u}, {v}) outside [0, {})",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// One update batch per generated minibatch, each followed by a query
    /// batch of `queries_per_batch` uniform pairs when that is nonzero.
    pub fn from_generator(spec: &StreamSpec, queries_per_batch: usize, seed: u64) -> Result<Self, StreamError> {
        let stream = generate(spec)?;
        let n = stream.spec().n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut batches = Vec::new();
        for edges in stream {
            batches.push(Batch::update(edges));
            if queries_per_batch > 0 {
                let queries = (0..queries_per_batch)
                    .map(|_| (rng.gen_range(0..n) as Vertex, rng.gen_range(0..n) as Vertex))
                    .collect();
                batches.push(Batch::query(queries));
            }
        }
        Ok(Self { n, batches })
    }

    pub fn update_edges(&self) -> usize {
        self.batches
            .iter()
            .filter(|b| b.kind == BatchKind::Update)
            .map(|b| b.pairs.len())
            .sum()
    }

    /// Parses either layout, choosing binary when the input starts with the
    /// magic bytes.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, StreamError> {
        if bytes.starts_with(STREAM_MAGIC) {
            Self::from_binary(bytes)
        } else {
            Self::from_text(bytes)
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, StreamError> {
        Self::from_bytes(&fs::read(path)?)
    }

    pub fn save_binary(&self, path: impl AsRef<Path>) -> Result<(), StreamError> {
        let mut w = io::BufWriter::new(fs::File::create(path)?);
        self.write_binary(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn save_text(&self, path: impl AsRef<Path>) -> Result<(), StreamError> {
        let mut w = io::BufWriter::new(fs::File::create(path)?);
        self.write_text(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_binary<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(STREAM_MAGIC)?;
        w.write_all(&STREAM_VERSION.to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&(self.batches.len() as u64).to_le_bytes())?;
        for b in &self.batches {
            let kind: u8 = match b.kind {
                BatchKind::Update => 0,
                BatchKind::Query => 1,
            };
            w.write_all(&[kind])?;
            w.write_all(&(b.pairs.len() as u64).to_le_bytes())?;
            for &(u, v) in &b.pairs {
                w.write_all(&(u as u64).to_le_bytes())?;
                w.write_all(&(v as u64).to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_binary(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn write_text<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "n {}", self.n)?;
        for b in &self.batches {
            writeln!(w, "#batch {}", b.kind)?;
            for &(u, v) in &b.pairs {
                writeln!(w, "{u} {v}")?;
            }
        }
        Ok(())
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self, StreamError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4, "magic")? != STREAM_MAGIC {
            return Err(parse_err(0, "bad magic, expected \"BPCC\""));
        }
        let version = r.u32("version")?;
        if version != STREAM_VERSION {
            return Err(parse_err(4, format!("unsupported version {version}")));
        }
        let n = r.u64("vertex count")?;
        if n > MAX_VERTICES as u64 {
            return Err(parse_err(8, format!("vertex count {n} is too large")));
        }
        let n = n as usize;
        let batch_count = r.u64("batch count")?;
        debug_assert_eq!(r.pos, HEADER_LEN);
        let mut batches = Vec::new();
        for _ in 0..batch_count {
            let at = r.pos;
            let kind = match r.take(1, "batch kind")?[0] {
                0 => BatchKind::Update,
                1 => BatchKind::Query,
                k => return Err(parse_err(at, format!("unknown batch kind {k}"))),
            };
            let count_at = r.pos;
            let count = r.u64("pair count")?;
            let available = (bytes.len() - r.pos) / PAIR_LEN;
            if count > available as u64 {
                return Err(parse_err(
                    count_at,
                    format!("batch declares {count} pairs but only {available} follow"),
                ));
            }
            let mut pairs = Vec::with_capacity(count as usize);
            for _ in 0..count {
                let u = r.vertex(n)?;
                let v = r.vertex(n)?;
                pairs.push((u, v));
            }
            batches.push(Batch { kind, pairs });
        }
        if r.pos != bytes.len() {
            return Err(parse_err(r.pos, "trailing bytes after last batch"));
        }
        Ok(Self { n, batches })
    }

    pub fn from_text(bytes: &[u8]) -> Result<Self, StreamError> {
        let text = std::str::from_utf8(bytes).map_err(|e| parse_err(e.valid_up_to(), "invalid UTF-8"))?;
        let mut n: Option<usize> = None;
        let mut batches: Vec<Batch> = Vec::new();
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let at = offset;
            offset += raw.len();
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut words = rest.split_whitespace();
                if words.next() == Some("batch") {
                    if n.is_none() {
                        return Err(parse_err(at, "batch before the `n` header"));
                    }
                    let kind = match words.next() {
                        Some("update") => BatchKind::Update,
                        Some("query") => BatchKind::Query,
                        _ => return Err(parse_err(at, "expected `#batch update` or `#batch query`")),
                    };
                    batches.push(Batch {
                        kind,
                        pairs: Vec::new(),
                    });
                }
                continue;
            }
            let mut words = line.split_whitespace();
            let (a, b) = (words.next(), words.next());
            if words.next().is_some() {
                return Err(parse_err(at, "expected two fields"));
            }
            let Some(limit) = n else {
                match (a, b) {
                    (Some("n"), Some(count)) => {
                        let count: usize = count.parse().map_err(|_| parse_err(at, "bad vertex count"))?;
                        if count > MAX_VERTICES {
                            return Err(parse_err(at, format!("vertex count {count} is too large")));
                        }
                        n = Some(count);
                        continue;
                    }
                    _ => return Err(parse_err(at, "expected `n <count>` header")),
                }
            };
            let batch = batches
                .last_mut()
                .ok_or_else(|| parse_err(at, "pair outside any batch"))?;
            let id = |s: Option<&str>| -> Result<Vertex, StreamError> {
                let x: u64 = s
                    .ok_or_else(|| parse_err(at, "expected two fields"))?
                    .parse()
                    .map_err(|_| parse_err(at, "bad vertex id"))?;
                if x >= limit as u64 {
                    return Err(parse_err(at, format!("vertex {x} outside [0, {limit})")));
                }
                Ok(x as Vertex)
            };
            batch.pairs.push((id(a)?, id(b)?));
        }
        let n = n.ok_or_else(|| parse_err(offset, "missing `n <count>` header"))?;
        Ok(Self { n, batches })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8], StreamError> {
        let end = self.pos + len;
        if end > self.bytes.len() {
            return Err(parse_err(self.pos, format!("unexpected end of input reading {what}")));
        }
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self, what: &str) -> Result<u32, StreamError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, StreamError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn vertex(&mut self, n: usize) -> Result<Vertex, StreamError> {
        let at = self.pos;
        let x = self.u64("vertex id")?;
        if x >= n as u64 {
            return Err(parse_err(at, format!("vertex {x} outside [0, {n})")));
        }
        Ok(x as Vertex)
    }
}
