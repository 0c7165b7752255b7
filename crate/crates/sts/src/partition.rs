//! Integer partitions, conjugacy-class combinatorics, and bounded-part
//! sampling.
//!
//! Partitions play two roles here: as cycle types of permutations (hence
//! conjugacy classes of `S_n`) and as index sets for irreducible characters.
//! The text form is dot notation: `3.2.2.2` for the partition (3,2,2,2) and
//! `-` for the empty partition.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::perm::Permutation;

/// A partition of a non-negative integer: weakly decreasing positive parts.
///
/// The derived ordering compares part vectors lexicographically, so among
/// partitions of the same `n` the reverse-lexicographic enumeration order
/// `(n), (n-1,1), ..., (1^n)` is exactly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("no partition of {n} has at most {k} parts")]
    Unsamplable { n: u32, k: u32 },
    #[error("rank {rank} out of range: only {count} partitions")]
    RankOutOfRange { rank: BigUint, count: BigUint },
}

#[derive(Debug, Error)]
#[error("invalid partition {text:?}: {reason}")]
pub struct ParsePartitionError {
    pub text: String,
    pub reason: String,
}

impl Partition {
    /// Builds a partition from arbitrary part values: zeros are dropped and
    /// the rest are sorted into weakly decreasing order.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned (sum of parts).
    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part-size multiplicities `a_k = #{i : part_i = k}`.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// The conjugate (transposed Young diagram) partition.
    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Size of the conjugacy class of `S_n` with this cycle type:
    /// `n! / prod_k k^{a_k} a_k!`.
    pub fn class_size(&self) -> BigUint {
        let mut denom = BigUint::one();
        for (k, a) in self.multiplicities() {
            denom *= BigUint::from(k).pow(a);
            denom *= factorial(a);
        }
        factorial(self.n()) / denom
    }

    /// Whether permutations of this cycle type are even (lie in `A_n`).
    pub fn is_even_class(&self) -> bool {
        (self.n() as usize - self.num_parts()).is_multiple_of(2)
    }

    /// Hook lengths and contents of every cell of the Young diagram, plus the
    /// product of all hook lengths.
    ///
    /// Cell `(i, j)` (0-based row, column) has content `j - i`; its hook
    /// counts the cell itself, the cells to its right, and the cells below.
    pub fn hooks_and_contents(&self) -> CellStats {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.parts.len());
        let mut contents = Vec::with_capacity(self.parts.len());
        let mut hook_product = BigUint::one();
        for (i, &row) in self.parts.iter().enumerate() {
            let mut hrow = Vec::with_capacity(row as usize);
            let mut crow = Vec::with_capacity(row as usize);
            for j in 0..row {
                let hook =
                    (row - 1 - j) as u64 + (conj.parts[j as usize] as u64 - 1 - i as u64) + 1;
                hrow.push(hook);
                crow.push(j as i64 - i as i64);
                hook_product *= BigUint::from(hook);
            }
            hooks.push(hrow);
            contents.push(crow);
        }
        CellStats { hooks, contents, hook_product }
    }

    /// The canonical permutation of cycle type `self`: cycles in weakly
    /// decreasing length order, filled with `1..n` left to right. For
    /// example (3,2) gives `(1,2,3)(4,5)`.
    pub fn canonical_representative(&self) -> Permutation {
        let n = self.n();
        let mut images = vec![0u32; n as usize];
        let mut start = 1u32;
        for &len in &self.parts {
            for off in 0..len {
                let x = start + off;
                images[(x - 1) as usize] = if off + 1 == len { start } else { x + 1 };
            }
            start += len;
        }
        Permutation::from_one_based(images).expect("canonical cycle fill is a bijection")
    }
}

/// Hook lengths, contents, and the hook-length product of a Young diagram.
pub struct CellStats {
    pub hooks: Vec<Vec<u64>>,
    pub contents: Vec<Vec<i64>>,
    pub hook_product: BigUint,
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(".")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = ParsePartitionError;

    /// Parses dot notation. Parts must be positive and weakly decreasing;
    /// `-` denotes the empty partition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParsePartitionError { text: s.to_string(), reason: reason.to_string() };
        let trimmed = s.trim();
        if trimmed == "-" {
            return Ok(Partition::empty());
        }
        if trimmed.is_empty() {
            return Err(err("empty input (write \"-\" for the empty partition)"));
        }
        let mut parts = Vec::new();
        for piece in trimmed.split('.') {
            let p: u32 = piece
                .parse()
                .map_err(|_| err(&format!("part {piece:?} is not a positive integer")))?;
            if p == 0 {
                return Err(err("parts must be positive"));
            }
            if let Some(&prev) = parts.last() {
                if p > prev {
                    return Err(err("parts must be weakly decreasing"));
                }
            }
            parts.push(p);
        }
        Ok(Partition { parts })
    }
}

pub fn factorial(n: u32) -> BigUint {
    let mut f = BigUint::one();
    for i in 2..=u64::from(n) {
        f *= BigUint::from(i);
    }
    f
}

/// Iterator over all partitions of `n` in reverse-lexicographic order:
/// `(n)` first, `(1^n)` last.
pub fn all_partitions(n: u32) -> PartitionIter {
    PartitionIter { next: Some(if n == 0 { Vec::new() } else { vec![n] }) }
}

pub struct PartitionIter {
    next: Option<Vec<u32>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        // Successor: decrement the rightmost part > 1, then re-spread the
        // freed weight greedily (largest allowed parts first).
        let succ = match current.iter().rposition(|&p| p > 1) {
            None => None,
            Some(i) => {
                let mut parts: Vec<u32> = current[..=i].to_vec();
                let mut rem = (current.len() - 1 - i) as u32 + 1;
                parts[i] -= 1;
                let cap = parts[i];
                while rem > 0 {
                    let t = rem.min(cap);
                    parts.push(t);
                    rem -= t;
                }
                Some(parts)
            }
        };
        self.next = succ;
        Some(Partition { parts: current })
    }
}

/// Counting table for partitions with bounded part count, supporting uniform
/// sampling by unranking. Immutable once built, so it can be shared freely
/// across threads.
///
/// `BoundedPartitionTable::new(n, k)` counts partitions of `n` with at most
/// `k` parts via the recurrence `p(m, j) = p(m, j-1) + p(m-j, j)` on the
/// conjugate problem (partitions of `m` with all parts at most `j`).
pub struct BoundedPartitionTable {
    n: u32,
    k: u32,
    /// counts[j][m] = number of partitions of m with every part <= j.
    counts: Vec<Vec<BigUint>>,
}

impl BoundedPartitionTable {
    pub fn new(n: u32, k: u32) -> Self {
        let n_us = n as usize;
        let mut counts = Vec::with_capacity(k as usize + 1);
        let mut row0 = vec![BigUint::zero(); n_us + 1];
        row0[0] = BigUint::one();
        counts.push(row0);
        for j in 1..=k as usize {
            let mut row = counts[j - 1].clone();
            for m in j..=n_us {
                let add = row[m - j].clone();
                row[m] += add;
            }
            counts.push(row);
        }
        BoundedPartitionTable { n, k, counts }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn max_parts(&self) -> u32 {
        self.k
    }

    /// Number of partitions of `n` with at most `k` parts.
    pub fn count(&self) -> &BigUint {
        &self.counts[self.k as usize][self.n as usize]
    }

    /// Returns the partition at position `rank` (0-based) in the enumeration
    /// induced by the counting recurrence. Ranks `0..count` hit each
    /// partition of `n` with at most `k` parts exactly once.
    pub fn unrank(&self, rank: &BigUint) -> Result<Partition, PartitionError> {
        if rank >= self.count() {
            return Err(PartitionError::RankOutOfRange {
                rank: rank.clone(),
                count: self.count().clone(),
            });
        }
        // Walk the conjugate world (parts bounded by k in size), then
        // conjugate back to a partition with at most k parts.
        let mut rank = rank.clone();
        let mut m = self.n as usize;
        let mut j = self.k as usize;
        let mut bounded = Vec::new();
        while m > 0 {
            let below = &self.counts[j - 1][m];
            if &rank < below {
                j -= 1;
            } else {
                rank -= below;
                bounded.push(j as u32);
                m -= j;
            }
        }
        Ok(Partition { parts: bounded }.conjugate())
    }

    /// Draws a uniform partition of `n` with at most `k` parts.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<Partition, PartitionError> {
        let count = self.count();
        if count.is_zero() {
            return Err(PartitionError::Unsamplable { n: self.n, k: self.k });
        }
        let rank = rng.gen_biguint_below(count);
        self.unrank(&rank)
    }
}

/// Number of partitions of `n` into at most `k` parts.
pub fn count_partitions_max_parts(n: u32, k: u32) -> BigUint {
    BoundedPartitionTable::new(n, k).count().clone()
}

/// Uniform partition of `n` with at most `k` parts. Builds a fresh counting
/// table; callers in a loop should hold a [`BoundedPartitionTable`] instead.
pub fn sample_partition_max_parts<R: Rng>(
    n: u32,
    k: u32,
    rng: &mut R,
) -> Result<Partition, PartitionError> {
    BoundedPartitionTable::new(n, k).sample(rng)
}

/// The `count` largest conjugacy classes of `S_n`, as (cycle type, size)
/// pairs in decreasing size order; ties are broken toward the
/// reverse-lexicographically earlier cycle type.
pub fn largest_classes(n: u32, count: usize) -> Vec<(Partition, BigUint)> {
    let mut classes: Vec<(Partition, BigUint)> =
        all_partitions(n).map(|p| { let s = p.class_size(); (p, s) }).collect();
    classes.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| b.0.cmp(&a.0)));
    classes.truncate(count);
    classes
}

/// `floor(n^(num/den))` in exact integer arithmetic (floor of the `den`-th
/// root of `n^num`). Used to turn a rational exponent bound into a concrete
/// part-count cap.
pub fn floor_rational_power(n: u64, num: u32, den: u32) -> u64 {
    assert!(den >= 1, "denominator must be positive");
    if num == 0 {
        return 1;
    }
    let root = BigUint::from(n).pow(num).nth_root(den);
    u64::try_from(&root).expect("rational power fits in u64")
}
