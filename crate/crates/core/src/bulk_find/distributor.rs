//! Hash-bucketed index over `(from, to)` pairs answering "all `to` recorded
//! for a given `from`".
//!
//! Pairs are sorted by `h(from)` with the small-range integer sort, where `h`
//! maps into `[0, 3λ)` for `λ` pairs, and an offset array marks where each hash
//! bucket starts. A lookup scans one bucket and keeps the pairs whose `from`
//! matches. Summed over all distinct `from` keys the expected scan length is
//! at most `(1 + 1/3) λ`.

use std::sync::atomic::{AtomicUsize, Ordering::Relaxed};

use rayon::prelude::*;

use crate::primitives::{int_sort, prefix_sum};
use crate::{Edge, Vertex};

/// Seeded multiply-shift hash from vertex ids into `[0, range)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplyShift {
    multiplier: u64,
    increment: u64,
    range: usize,
}

impl MultiplyShift {
    pub fn from_seed(seed: u64, range: usize) -> Self {
        assert!(range as u64 <= u32::MAX as u64, "hash range must fit in 32 bits");
        let mut state = seed;
        Self {
            multiplier: splitmix64(&mut state) | 1,
            increment: splitmix64(&mut state),
            range,
        }
    }

    pub fn range(&self) -> usize {
        self.range
    }

    #[inline]
    pub fn hash(&self, x: Vertex) -> usize {
        let high = self.multiplier.wrapping_mul(x as u64).wrapping_add(self.increment) >> 32;
        ((high * self.range as u64) >> 32) as usize
    }
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct ResponseDistributor {
    hasher: MultiplyShift,
    pairs: Vec<Edge>,
    offsets: Vec<usize>,
}

impl ResponseDistributor {
    /// Builds the index with a hash seeded by `seed` into `[0, 3λ)`.
    pub fn build(pairs: &[Edge], seed: u64) -> Self {
        Self::with_hasher(pairs, MultiplyShift::from_seed(seed, 3 * pairs.len()))
    }

    /// Builds the index with an explicit hash function. The hash range must
    /// not exceed `3λ`.
    pub fn with_hasher(pairs: &[Edge], hasher: MultiplyShift) -> Self {
        let rho = hasher.range();
        if pairs.is_empty() {
            return Self {
                hasher,
                pairs: Vec::new(),
                offsets: vec![0; rho + 1],
            };
        }
        let keyed: Vec<(usize, Edge)> = pairs.par_iter().map(|&p| (hasher.hash(p.0), p)).collect();
        let sorted = int_sort(&keyed, rho).expect("hash values lie in [0, 3λ)");

        let counts: Vec<AtomicUsize> = (0..rho + 1).into_par_iter().map(|_| AtomicUsize::new(0)).collect();
        sorted.par_iter().for_each(|(k, _)| {
            counts[*k].fetch_add(1, Relaxed);
        });
        let counts: Vec<usize> = counts.into_par_iter().map(AtomicUsize::into_inner).collect();
        let (offsets, total) = prefix_sum(&counts).expect("pair count fits in usize");
        debug_assert_eq!(total, pairs.len());

        Self {
            hasher,
            pairs: sorted.into_par_iter().map(|(_, p)| p).collect(),
            offsets,
        }
    }

    /// Number of pairs, λ.
    pub fn lambda(&self) -> usize {
        self.pairs.len()
    }

    /// Hash range, ρ.
    pub fn rho(&self) -> usize {
        self.hasher.range()
    }

    pub fn hasher(&self) -> &MultiplyShift {
        &self.hasher
    }

    /// Pairs ordered by hash bucket.
    pub fn sorted_pairs(&self) -> &[Edge] {
        &self.pairs
    }

    /// `offsets()[i]` is the index of the first pair in bucket `i`; the array
    /// has `ρ + 1` entries and ends at λ.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    fn bucket(&self, from: Vertex) -> &[Edge] {
        if self.rho() == 0 {
            return &[];
        }
        let b = self.hasher.hash(from);
        &self.pairs[self.offsets[b]..self.offsets[b + 1]]
    }

    /// Every `to` recorded with `from`, in bucket order.
    pub fn all_from(&self, from: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.bucket(from).iter().filter(move |p| p.0 == from).map(|p| p.1)
    }

    /// Pairs examined by `all_from(from)`.
    pub fn scan_len(&self, from: Vertex) -> usize {
        self.bucket(from).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn linear_scan(pairs: &[Edge], from: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = pairs.iter().filter(|p| p.0 == from).map(|p| p.1).collect();
        out.sort_unstable();
        out
    }

    fn sorted(it: impl Iterator<Item = Vertex>) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = it.collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn empty_distributor() {
        let rd = ResponseDistributor::build(&[], 1);
        assert_eq!(rd.lambda(), 0);
        assert_eq!(rd.offsets(), &[0]);
        assert_eq!(rd.all_from(3).count(), 0);
    }

    #[test]
    fn small_example_matches_linear_scan() {
        let pairs = [(4, 1), (4, 9), (2, 3)];
        let rd = ResponseDistributor::build(&pairs, 42);
        assert_eq!(rd.rho(), 9);
        assert_eq!(sorted(rd.all_from(4)), linear_scan(&pairs, 4));
        assert_eq!(sorted(rd.all_from(4)), vec![1, 9]);
        assert_eq!(sorted(rd.all_from(2)), vec![3]);
        assert!(rd.all_from(5).next().is_none());
    }

    #[test]
    fn colliding_keys_stay_separate() {
        let pairs = [(10, 1), (10, 2), (20, 3), (30, 4)];
        let seed = (0..10_000u64)
            .find(|&s| {
                let h = MultiplyShift::from_seed(s, 12);
                h.hash(10) == h.hash(20)
            })
            .expect("some seed collides 10 and 20");
        let rd = ResponseDistributor::build(&pairs, seed);
        assert_eq!(rd.hasher().hash(10), rd.hasher().hash(20));
        assert_eq!(sorted(rd.all_from(10)), vec![1, 2]);
        assert_eq!(sorted(rd.all_from(20)), vec![3]);
        assert_eq!(rd.scan_len(10), rd.scan_len(20));
    }

    proptest! {
        #[test]
        fn structure_invariants(raw in proptest::collection::vec((0u32..200, 0u32..200), 0..3000), seed: u64) {
            let rd = ResponseDistributor::build(&raw, seed);
            let o = rd.offsets();
            prop_assert_eq!(o.len(), rd.rho() + 1);
            prop_assert_eq!(o[0], 0);
            prop_assert_eq!(*o.last().unwrap(), raw.len());
            prop_assert!(o.windows(2).all(|w| w[0] <= w[1]));
            for b in 0..rd.rho() {
                for p in &rd.sorted_pairs()[o[b]..o[b + 1]] {
                    prop_assert_eq!(rd.hasher().hash(p.0), b);
                }
            }
            let mut keys: Vec<Vertex> = raw.iter().map(|p| p.0).collect();
            keys.sort_unstable();
            keys.dedup();
            let mut rebuilt: Vec<Edge> = keys.iter().flat_map(|&f| rd.all_from(f).map(move |t| (f, t))).collect();
            let mut input = raw.clone();
            rebuilt.sort_unstable();
            input.sort_unstable();
            prop_assert_eq!(rebuilt, input);
        }
    }
}
