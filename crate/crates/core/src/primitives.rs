//! Parallel sequence primitives: filter/pack, exclusive prefix sum, duplicate
//! removal and small-range integer sort.
//!
//! Every primitive splits its input into blocks of [`grain_size`] elements and
//! runs sequentially when the input fits in a single block. Indices are 0-based
//! throughout.

use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::Vertex;

/// Default block size below which primitives run sequentially.
pub const DEFAULT_GRAIN: usize = 2048;

/// `int_sort` accepts key ranges up to this multiple of the input length.
pub const INT_SORT_RANGE_FACTOR: usize = 4;

static GRAIN: AtomicUsize = AtomicUsize::new(DEFAULT_GRAIN);

/// Current library-wide sequential threshold.
pub fn grain_size() -> usize {
    GRAIN.load(Ordering::Relaxed)
}

/// Sets the library-wide sequential threshold (clamped to at least 1).
pub fn set_grain_size(grain: usize) {
    GRAIN.store(grain.max(1), Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitiveError {
    #[error("prefix sum overflows the index width")]
    Overflow,
    #[error("key {key} at position {index} is outside [0, {bound})")]
    KeyOutOfRange { index: usize, key: usize, bound: usize },
    #[error("key bound {bound} exceeds {INT_SORT_RANGE_FACTOR} x input length {len}")]
    KeyRangeTooLarge { bound: usize, len: usize },
}

/// Elements of `xs` satisfying `keep`, in their original order.
pub fn filter<T, F>(xs: &[T], keep: F) -> Vec<T>
where
    T: Copy + Default + Send + Sync,
    F: Fn(&T) -> bool + Sync,
{
    pack_with(xs, |_, x| keep(x))
}

/// Elements `xs[i]` with `flags[i]` set, in their original order.
///
/// Panics if the two slices differ in length.
pub fn pack<T>(xs: &[T], flags: &[bool]) -> Vec<T>
where
    T: Copy + Default + Send + Sync,
{
    assert_eq!(xs.len(), flags.len(), "pack: flags must match input length");
    pack_with(xs, |i, _| flags[i])
}

fn pack_with<T, F>(xs: &[T], keep: F) -> Vec<T>
where
    T: Copy + Default + Send + Sync,
    F: Fn(usize, &T) -> bool + Sync,
{
    let grain = grain_size();
    if xs.len() <= grain {
        return xs
            .iter()
            .enumerate()
            .filter(|(i, x)| keep(*i, x))
            .map(|(_, x)| *x)
            .collect();
    }

    let counts: Vec<usize> = xs
        .par_chunks(grain)
        .enumerate()
        .map(|(b, chunk)| {
            let base = b * grain;
            chunk.iter().enumerate().filter(|(i, x)| keep(base + i, x)).count()
        })
        .collect();
    let total = counts.iter().sum();

    let mut out = vec![T::default(); total];
    let mut pieces = Vec::with_capacity(counts.len());
    let mut rest = out.as_mut_slice();
    for &c in &counts {
        let (head, tail) = std::mem::take(&mut rest).split_at_mut(c);
        pieces.push(head);
        rest = tail;
    }
    xs.par_chunks(grain)
        .zip(pieces.into_par_iter())
        .enumerate()
        .for_each(|(b, (chunk, dst))| {
            let base = b * grain;
            let kept = chunk
                .iter()
                .enumerate()
                .filter(|(i, x)| keep(base + i, x))
                .map(|(_, x)| *x);
            for (d, x) in dst.iter_mut().zip(kept) {
                *d = x;
            }
        });
    out
}

/// Exclusive prefix sums of `xs` together with the grand total.
pub fn prefix_sum(xs: &[usize]) -> Result<(Vec<usize>, usize), PrimitiveError> {
    let grain = grain_size();
    if xs.len() <= grain {
        return scan_sequential(xs);
    }
    let block_sums: Option<Vec<usize>> = xs
        .par_chunks(grain)
        .map(|c| c.iter().try_fold(0usize, |acc, &x| acc.checked_add(x)))
        .collect();
    let block_sums = block_sums.ok_or(PrimitiveError::Overflow)?;
    let (block_offsets, total) = scan_sequential(&block_sums)?;

    let mut out = vec![0usize; xs.len()];
    out.par_chunks_mut(grain)
        .zip(xs.par_chunks(grain))
        .zip(block_offsets.par_iter())
        .for_each(|((dst, src), &base)| {
            // Cannot overflow: every partial sum is bounded by `total`.
            let mut acc = base;
            for (d, &x) in dst.iter_mut().zip(src) {
                *d = acc;
                acc += x;
            }
        });
    Ok((out, total))
}

fn scan_sequential(xs: &[usize]) -> Result<(Vec<usize>, usize), PrimitiveError> {
    let mut acc = 0usize;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        out.push(acc);
        acc = acc.checked_add(x).ok_or(PrimitiveError::Overflow)?;
    }
    Ok((out, acc))
}

/// The distinct values of `xs`. Output order is unspecified.
///
/// `u32::MAX` is reserved and must not appear in the input.
pub fn remove_dup(xs: &[Vertex]) -> Vec<Vertex> {
    if xs.len() <= grain_size() {
        let mut out = xs.to_vec();
        out.sort_unstable();
        out.dedup();
        return out;
    }
    let table = ClaimTable::with_capacity(xs.len());
    xs.par_iter().for_each(|&x| {
        table.claim(x);
    });
    table.into_keys()
}

const EMPTY: u32 = u32::MAX;

/// Open-addressing set of vertex ids built by concurrent claims.
///
/// A claim is idempotent: every thread inserting the same key lands on the same
/// slot. After the claiming phase the occupied slots can be compacted into a
/// dense key list, or ranked to give each key a dense index.
pub(crate) struct ClaimTable {
    slots: Vec<AtomicU32>,
    shift: u32,
}

impl ClaimTable {
    pub(crate) fn with_capacity(keys: usize) -> Self {
        let cap = (2 * keys).next_power_of_two().max(2);
        let slots = (0..cap).into_par_iter().map(|_| AtomicU32::new(EMPTY)).collect();
        Self {
            slots,
            shift: 64 - cap.trailing_zeros(),
        }
    }

    fn home(&self, x: Vertex) -> usize {
        ((x as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> self.shift) as usize
    }

    /// Inserts `x` if absent and returns its slot.
    pub(crate) fn claim(&self, x: Vertex) -> usize {
        debug_assert_ne!(x, EMPTY, "u32::MAX is reserved");
        let mask = self.slots.len() - 1;
        let mut i = self.home(x);
        loop {
            let cur = self.slots[i].load(Ordering::Relaxed);
            if cur == x {
                return i;
            }
            if cur == EMPTY {
                match self.slots[i].compare_exchange(EMPTY, x, Ordering::Relaxed, Ordering::Relaxed) {
                    Ok(_) => return i,
                    Err(now) if now == x => return i,
                    Err(_) => {}
                }
            }
            i = (i + 1) & mask;
        }
    }

    pub(crate) fn occupancy(&self) -> Vec<bool> {
        self.slots
            .par_iter()
            .map(|s| s.load(Ordering::Relaxed) != EMPTY)
            .collect()
    }

    pub(crate) fn into_keys(self) -> Vec<Vertex> {
        let flat: Vec<Vertex> = self.slots.into_par_iter().map(AtomicU32::into_inner).collect();
        filter(&flat, |&x| x != EMPTY)
    }
}

const RADIX_BITS: usize = 8;
const RADIX: usize = 1 << RADIX_BITS;

/// Stable sort of `(key, payload)` pairs by key, for keys in `[0, key_bound)`.
///
/// The key range must be small relative to the input:
/// `key_bound <= INT_SORT_RANGE_FACTOR * items.len()`. Small inputs use one
/// counting-sort pass; larger ones run parallel LSD radix passes of
/// `RADIX_BITS` bits with per-block histograms.
pub fn int_sort<T>(items: &[(usize, T)], key_bound: usize) -> Result<Vec<(usize, T)>, PrimitiveError>
where
    T: Copy + Send + Sync,
{
    if items.is_empty() {
        return Ok(Vec::new());
    }
    if key_bound > INT_SORT_RANGE_FACTOR.saturating_mul(items.len()) {
        return Err(PrimitiveError::KeyRangeTooLarge {
            bound: key_bound,
            len: items.len(),
        });
    }
    if let Some(index) = items.par_iter().position_first(|(k, _)| *k >= key_bound) {
        return Err(PrimitiveError::KeyOutOfRange {
            index,
            key: items[index].0,
            bound: key_bound,
        });
    }

    let grain = grain_size();
    if items.len() <= grain {
        return Ok(counting_sort(items, key_bound));
    }

    let key_bits = (usize::BITS - (key_bound - 1).leading_zeros()) as usize;
    let passes = key_bits.div_ceil(RADIX_BITS).max(1);
    let mut src = items.to_vec();
    let mut dst = items.to_vec();
    for pass in 0..passes {
        let shift = pass * RADIX_BITS;
        let digit = |k: usize| (k >> shift) & (RADIX - 1);

        let hist: Vec<[usize; RADIX]> = src
            .par_chunks(grain)
            .map(|chunk| {
                let mut h = [0usize; RADIX];
                for (k, _) in chunk {
                    h[digit(*k)] += 1;
                }
                h
            })
            .collect();

        // Output is digit-major, block-minor; carve it into one slice per
        // (block, digit) so blocks can scatter without sharing.
        let mut per_block: Vec<Vec<&mut [(usize, T)]>> = (0..hist.len()).map(|_| Vec::with_capacity(RADIX)).collect();
        let mut rest = dst.as_mut_slice();
        for d in 0..RADIX {
            for (b, h) in hist.iter().enumerate() {
                let (head, tail) = std::mem::take(&mut rest).split_at_mut(h[d]);
                per_block[b].push(head);
                rest = tail;
            }
        }
        src.par_chunks(grain)
            .zip(per_block.into_par_iter())
            .for_each(|(chunk, mut buckets)| {
                let mut cursor = [0usize; RADIX];
                for &item in chunk {
                    let d = digit(item.0);
                    buckets[d][cursor[d]] = item;
                    cursor[d] += 1;
                }
            });
        std::mem::swap(&mut src, &mut dst);
    }
    Ok(src)
}

fn counting_sort<T: Copy>(items: &[(usize, T)], key_bound: usize) -> Vec<(usize, T)> {
    let mut starts = vec![0usize; key_bound + 1];
    for (k, _) in items {
        starts[k + 1] += 1;
    }
    for i in 1..starts.len() {
        starts[i] += starts[i - 1];
    }
    let mut out = items.to_vec();
    for &item in items {
        out[starts[item.0]] = item;
        starts[item.0] += 1;
    }
    out
}
