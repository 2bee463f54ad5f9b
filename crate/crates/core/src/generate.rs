//! Seeded synthetic edge streams.
//!
//! Four families are supported:
//!
//! * `grid3d`: a `s x s x s` mesh, each mesh edge emitted once;
//! * `random`: every vertex in turn draws `k` uniform neighbours;
//! * `local`: every vertex in turn draws `k` neighbours at a short id
//!   distance (geometric decay, capped at a window), which gives graphs with
//!   small separators;
//! * `rmat`: recursive-matrix edges over `2^scale` vertices with quadrant
//!   probabilities `(a, b, c, d)`.
//!
//! Generation is sequential per stream and fully determined by its `StreamSpec`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

use crate::{Edge, Vertex, MAX_VERTICES};

pub const DEFAULT_DEGREE: usize = 5;
pub const DEFAULT_LOCAL_WINDOW: usize = 64;
/// Canonical R-MAT quadrant probabilities.
pub const DEFAULT_RMAT: [f64; 4] = [0.57, 0.19, 0.19, 0.05];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Grid3d,
    RandomK { k: usize },
    Local { degree: usize, window: usize },
    Rmat { a: f64, b: f64, c: f64, d: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Grid3d => "grid3d",
            Family::RandomK { .. } => "random",
            Family::Local { .. } => "local",
            Family::Rmat { .. } => "rmat",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("unknown family `{0}` (expected grid3d, random, local or rmat)")]
    UnknownFamily(String),
    #[error("malformed parameter `{0}`")]
    BadParameter(String),
    #[error("parameter `{0}` does not apply to family {1}")]
    UnexpectedParameter(String, &'static str),
    #[error("invalid stream spec: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub batch_size: usize,
    /// Shuffle edges within each batch.
    pub shuffle: bool,
}

impl StreamSpec {
    /// Full 3-d mesh with `side^3` vertices.
    pub fn grid3d(side: usize, seed: u64, batch_size: usize) -> Self {
        let n = side.pow(3);
        Self {
            family: Family::Grid3d,
            n,
            m: grid_edge_count(side),
            seed,
            batch_size,
            shuffle: false,
        }
    }

    /// `k` uniform neighbours per vertex, `m = n * k`.
    pub fn random(n: usize, k: usize, seed: u64, batch_size: usize) -> Self {
        Self {
            family: Family::RandomK { k },
            n,
            m: n * k,
            seed,
            batch_size,
            shuffle: false,
        }
    }

    /// `degree` nearby neighbours per vertex, `m = n * degree`.
    pub fn local(n: usize, degree: usize, window: usize, seed: u64, batch_size: usize) -> Self {
        Self {
            family: Family::Local { degree, window },
            n,
            m: n * degree,
            seed,
            batch_size,
            shuffle: false,
        }
    }

    /// R-MAT with the canonical probabilities.
    pub fn rmat(n: usize, m: usize, seed: u64, batch_size: usize) -> Self {
        let [a, b, c, d] = DEFAULT_RMAT;
        Self {
            family: Family::Rmat { a, b, c, d },
            n,
            m,
            seed,
            batch_size,
            shuffle: false,
        }
    }

    /// Parses `family:key=value,...` with keys `n`, `m`, `seed`, `k`,
    /// `window`, `a`, `b`, `c`, `d` and `shuffle`. Unset `m` defaults to the
    /// full mesh for `grid3d` and `n * k` otherwise.
    pub fn parse(text: &str, batch_size: usize) -> Result<Self, GenError> {
        let (family, params) = text.split_once(':').unwrap_or((text, ""));
        let mut n = None;
        let mut m = None;
        let mut seed = 1u64;
        let mut k = None;
        let mut window = None;
        let mut probs = DEFAULT_RMAT;
        let mut shuffle = false;
        for kv in params.split(',').filter(|s| !s.is_empty()) {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| GenError::BadParameter(kv.to_string()))?;
            let bad = || GenError::BadParameter(kv.to_string());
            match key.trim() {
                "n" => n = Some(parse_count(value).ok_or_else(bad)?),
                "m" => m = Some(parse_count(value).ok_or_else(bad)?),
                "seed" => seed = value.trim().parse().map_err(|_| bad())?,
                "k" => k = Some(parse_count(value).ok_or_else(bad)?),
                "window" => window = Some(parse_count(value).ok_or_else(bad)?),
                "shuffle" => shuffle = matches!(value.trim(), "1" | "true" | "yes"),
                p @ ("a" | "b" | "c" | "d") => {
                    let idx = (p.as_bytes()[0] - b'a') as usize;
                    probs[idx] = value.trim().parse().map_err(|_| bad())?;
                }
                _ => return Err(bad()),
            }
        }
        let n = n.ok_or_else(|| GenError::Invalid("missing n".into()))?;
        let family = match family.trim() {
            "grid3d" => Family::Grid3d,
            "random" => Family::RandomK {
                k: k.unwrap_or(DEFAULT_DEGREE),
            },
            "local" => Family::Local {
                degree: k.unwrap_or(DEFAULT_DEGREE),
                window: window.unwrap_or(DEFAULT_LOCAL_WINDOW),
            },
            "rmat" => {
                let [a, b, c, d] = probs;
                Family::Rmat { a, b, c, d }
            }
            other => return Err(GenError::UnknownFamily(other.to_string())),
        };
        if window.is_some() && !matches!(family, Family::Local { .. }) {
            return Err(GenError::UnexpectedParameter("window".into(), family.name()));
        }
        if probs != DEFAULT_RMAT && !matches!(family, Family::Rmat { .. }) {
            return Err(GenError::UnexpectedParameter("a/b/c/d".into(), family.name()));
        }
        let default_m = match family {
            Family::Grid3d => grid_edge_count(cube_side(n)),
            Family::RandomK { k } => n * k,
            Family::Local { degree, .. } => n * degree,
            Family::Rmat { .. } => n * DEFAULT_DEGREE,
        };
        Self {
            family,
            n,
            m: m.unwrap_or(default_m),
            seed,
            batch_size,
            shuffle,
        }
        .normalized()
    }

    /// Validates the parameters and applies the family's vertex-count rounding:
    /// `rmat` rounds `n` up to a power of two and `grid3d` up to a cube.
    pub fn normalized(&self) -> Result<Self, GenError> {
        let mut spec = self.clone();
        if spec.batch_size == 0 {
            return Err(GenError::Invalid("batch size must be at least 1".into()));
        }
        if spec.n == 0 {
            return Err(GenError::Invalid("n must be at least 1".into()));
        }
        match spec.family {
            Family::Grid3d => {
                let side = cube_side(spec.n);
                spec.n = side.pow(3);
                let full = grid_edge_count(side);
                if spec.m > full {
                    return Err(GenError::Invalid(format!(
                        "grid3d with {} vertices has only {full} edges, {} requested",
                        spec.n, spec.m
                    )));
                }
            }
            Family::RandomK { k } => {
                if k == 0 {
                    return Err(GenError::Invalid("k must be at least 1".into()));
                }
            }
            Family::Local { degree, window } => {
                if degree == 0 || window == 0 {
                    return Err(GenError::Invalid("local degree and window must be at least 1".into()));
                }
            }
            Family::Rmat { a, b, c, d } => {
                if [a, b, c, d].iter().any(|p| !(0.0..=1.0).contains(p)) || (a + b + c + d - 1.0).abs() > 1e-9 {
                    return Err(GenError::Invalid(format!(
                        "rmat probabilities must be in [0, 1] and sum to 1, got {a}+{b}+{c}+{d}"
                    )));
                }
                spec.n = spec.n.next_power_of_two();
            }
        }
        if spec.n > MAX_VERTICES {
            return Err(GenError::Invalid(format!("n = {} is too large", spec.n)));
        }
        Ok(spec)
    }

    pub fn batch_count(&self) -> usize {
        self.m.div_ceil(self.batch_size)
    }
}

impl fmt::Display for StreamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:n={},m={},seed={}", self.family.name(), self.n, self.m, self.seed)?;
        match self.family {
            Family::Grid3d => Ok(()),
            Family::RandomK { k } => write!(f, ",k={k}"),
            Family::Local { degree, window } => write!(f, ",k={degree},window={window}"),
            Family::Rmat { a, b, c, d } => write!(f, ",a={a},b={b},c={c},d={d}"),
        }
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(StreamSpec::parse(&format!("{s}:n=1"), 1)?.family)
    }
}

/// Accepts plain integers, `_` separators, powers (`2^20`) and scientific
/// notation (`3.2e7`).
fn parse_count(s: &str) -> Option<usize> {
    let s = s.trim().replace('_', "");
    if let Some((base, exp)) = s.split_once('^') {
        return base.parse::<usize>().ok()?.checked_pow(exp.parse().ok()?);
    }
    if let Ok(v) = s.parse::<usize>() {
        return Some(v);
    }
    let f: f64 = s.parse().ok()?;
    (f >= 0.0 && f.fract() == 0.0 && f < 1e19).then_some(f as usize)
}

fn cube_side(n: usize) -> usize {
    let mut s = (n as f64).cbrt().round() as usize;
    while s.pow(3) < n {
        s += 1;
    }
    while s > 1 && (s - 1).pow(3) >= n {
        s -= 1;
    }
    s
}

fn grid_edge_count(side: usize) -> usize {
    3 * side * side * side.saturating_sub(1)
}

/// Validates `spec` and returns an iterator over its minibatches.
pub fn generate(spec: &StreamSpec) -> Result<BatchStream, GenError> {
    let spec = spec.normalized()?;
    let rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let source = match spec.family {
        Family::Grid3d => Source::Grid {
            side: cube_side(spec.n),
            vertex: 0,
            dir: 0,
        },
        Family::RandomK { k } => Source::Random { k },
        Family::Local { degree, window } => Source::Local {
            degree,
            window,
            decay: Geometric::new((4.0 / window as f64).min(1.0)).expect("probability in (0, 1]"),
        },
        Family::Rmat { a, b, c, .. } => Source::Rmat {
            scale: spec.n.trailing_zeros(),
            cumulative: [a, a + b, a + b + c],
        },
    };
    Ok(BatchStream {
        spec,
        rng,
        source,
        emitted: 0,
    })
}

/// Collects the whole stream.
pub fn generate_all(spec: &StreamSpec) -> Result<Vec<Vec<Edge>>, GenError> {
    Ok(generate(spec)?.collect())
}

enum Source {
    Grid {
        side: usize,
        vertex: usize,
        dir: u8,
    },
    Random {
        k: usize,
    },
    Local {
        degree: usize,
        window: usize,
        decay: Geometric,
    },
    Rmat {
        scale: u32,
        cumulative: [f64; 3],
    },
}

pub struct BatchStream {
    spec: StreamSpec,
    rng: ChaCha8Rng,
    source: Source,
    emitted: usize,
}

impl BatchStream {
    /// The normalized spec driving this stream.
    pub fn spec(&self) -> &StreamSpec {
        &self.spec
    }

    fn next_edge(&mut self) -> Edge {
        let n = self.spec.n;
        let i = self.emitted;
        match &mut self.source {
            Source::Grid { side, vertex, dir } => {
                let s = *side;
                loop {
                    let v = *vertex;
                    let (x, y, z) = (v % s, (v / s) % s, v / (s * s));
                    let d = *dir;
                    *dir = (d + 1) % 3;
                    if *dir == 0 {
                        *vertex += 1;
                    }
                    let target = match d {
                        0 if x + 1 < s => Some(v + 1),
                        1 if y + 1 < s => Some(v + s),
                        2 if z + 1 < s => Some(v + s * s),
                        _ => None,
                    };
                    if let Some(t) = target {
                        return (v as Vertex, t as Vertex);
                    }
                }
            }
            Source::Random { k } => {
                let u = (i / *k) % n;
                (u as Vertex, self.rng.gen_range(0..n) as Vertex)
            }
            Source::Local { degree, window, decay } => {
                let u = (i / *degree) % n;
                let dist = loop {
                    let d = decay.sample(&mut self.rng) as usize + 1;
                    if d <= *window {
                        break d % n;
                    }
                };
                let v = if self.rng.gen::<bool>() {
                    (u + dist) % n
                } else {
                    (u + n - dist) % n
                };
                (u as Vertex, v as Vertex)
            }
            Source::Rmat { scale, cumulative } => {
                let (mut u, mut v) = (0usize, 0usize);
                for _ in 0..*scale {
                    let r: f64 = self.rng.gen();
                    let (bu, bv) = if r < cumulative[0] {
                        (0, 0)
                    } else if r < cumulative[1] {
                        (0, 1)
                    } else if r < cumulative[2] {
                        (1, 0)
                    } else {
                        (1, 1)
                    };
                    u = (u << 1) | bu;
                    v = (v << 1) | bv;
                }
                (u as Vertex, v as Vertex)
            }
        }
    }
}

impl Iterator for BatchStream {
    type Item = Vec<Edge>;

    fn next(&mut self) -> Option<Vec<Edge>> {
        let remaining = self.spec.m - self.emitted;
        if remaining == 0 {
            return None;
        }
        let len = remaining.min(self.spec.batch_size);
        let mut batch = Vec::with_capacity(len);
        for _ in 0..len {
            batch.push(self.next_edge());
            self.emitted += 1;
        }
        if self.spec.shuffle {
            batch.shuffle(&mut self.rng);
        }
        Some(batch)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.spec.m - self.emitted).div_ceil(self.spec.batch_size);
        (left, Some(left))
    }
}

impl ExactSizeIterator for BatchStream {}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn cube_graph() {
        let spec = StreamSpec::grid3d(2, 0, 5);
        let batches = generate_all(&spec).unwrap();
        assert_eq!(batches.len(), 3);
        let edges: Vec<Edge> = batches.concat();
        assert_eq!(edges.len(), 12);
        let distinct: HashSet<Edge> = edges.iter().copied().collect();
        assert_eq!(distinct.len(), 12);
        let mut degree = [0; 8];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        assert_eq!(degree, [3; 8]);
    }

    #[test]
    fn grid_rejects_too_many_edges_and_rounds_to_cube() {
        let mut spec = StreamSpec::grid3d(3, 0, 10);
        spec.m += 1;
        assert!(spec.normalized().is_err());
        let parsed = StreamSpec::parse("grid3d:n=20", 7).unwrap();
        assert_eq!(parsed.n, 27);
        assert_eq!(parsed.m, 54);
    }

    #[test]
    fn random_k_emits_k_per_vertex() {
        let edges = generate_all(&StreamSpec::random(10, 5, 3, 7)).unwrap().concat();
        assert_eq!(edges.len(), 50);
        let mut count = [0; 10];
        for &(u, v) in &edges {
            count[u as usize] += 1;
            assert!(v < 10);
        }
        assert_eq!(count, [5; 10]);
    }

    #[test]
    fn local_neighbours_stay_within_window() {
        let n = 1000;
        let edges = generate_all(&StreamSpec::local(n, 5, 16, 4, 100)).unwrap().concat();
        assert_eq!(edges.len(), 5000);
        for &(u, v) in &edges {
            let d = (u as i64 - v as i64).rem_euclid(n as i64);
            let d = d.min(n as i64 - d);
            assert!((1..=16).contains(&d), "edge {u}-{v}");
        }
    }

    #[test]
    fn rmat_rounds_up_and_is_heavy_tailed() {
        let spec = StreamSpec::rmat(40_000, 1 << 18, 12, 1 << 15);
        let stream = generate(&spec).unwrap();
        assert_eq!(stream.spec().n, 1 << 16);
        let edges = stream.collect::<Vec<_>>().concat();
        assert_eq!(edges.len(), 1 << 18);
        let mut indeg = vec![0usize; 1 << 16];
        for &(_, v) in &edges {
            indeg[v as usize] += 1;
        }
        indeg.sort_unstable_by(|a, b| b.cmp(a));
        let top: usize = indeg[..(1 << 16) / 100].iter().sum();
        assert!(top * 10 > edges.len(), "top 1% hold {top} of {}", edges.len());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        for spec in [
            StreamSpec::rmat(1 << 10, 5000, 9, 333),
            StreamSpec::random(500, 3, 9, 100),
            StreamSpec::local(500, 4, 8, 9, 64),
            StreamSpec {
                shuffle: true,
                ..StreamSpec::grid3d(5, 9, 50)
            },
        ] {
            assert_eq!(generate_all(&spec).unwrap(), generate_all(&spec).unwrap());
            let mut other = spec.clone();
            other.seed += 1;
            if spec.family != Family::Grid3d {
                assert_ne!(generate_all(&spec).unwrap(), generate_all(&other).unwrap());
            }
        }
    }

    #[test]
    fn batches_total_m() {
        let spec = StreamSpec::random(100, 7, 1, 33);
        let batches = generate_all(&spec).unwrap();
        assert_eq!(batches.len(), spec.batch_count());
        assert_eq!(batches.len(), 700usize.div_ceil(33));
        assert!(batches[..batches.len() - 1].iter().all(|b| b.len() == 33));
        assert_eq!(batches.iter().map(Vec::len).sum::<usize>(), 700);
    }

    #[test]
    fn parse_and_validate() {
        let s = StreamSpec::parse("rmat:n=2^16,m=3.2e5,seed=4,a=0.6,b=0.15,c=0.15,d=0.1", 1000).unwrap();
        assert_eq!((s.n, s.m, s.seed), (65536, 320_000, 4));
        assert!(matches!(s.family, Family::Rmat { a, .. } if a == 0.6));
        assert!(StreamSpec::parse("rmat:n=16,a=0.9", 10).is_err());
        assert!(StreamSpec::parse("mesh:n=8", 10).is_err());
        assert!(StreamSpec::parse("random:n=8,window=3", 10).is_err());
        assert!(StreamSpec::parse("random:n=8", 0).is_err());
        assert!(StreamSpec::parse("random:m=8", 1).is_err());
        assert_eq!(StreamSpec::parse("local:n=10,k=3", 4).unwrap().m, 30);
        let printed = StreamSpec::random(64, 5, 2, 8).to_string();
        assert_eq!(StreamSpec::parse(&printed, 8).unwrap(), StreamSpec::random(64, 5, 2, 8));
    }
}
