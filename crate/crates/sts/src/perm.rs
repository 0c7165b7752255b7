//! Permutations of `{1, ..., n}` with cycle-notation input/output.
//!
//! Composition is right-to-left: `p.compose(&q)` maps `x` to `p(q(x))`.
//! Points are 1-based in every public interface; the internal image table is
//! 0-based. Cycle notation follows the grammar
//!
//! ```text
//! perm  := cycle*            (empty input is the identity)
//! cycle := '(' int (',' int)* ')'
//! ```
//!
//! with optional whitespace anywhere between tokens. Points omitted from the
//! input are fixed.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::partition::Partition;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    /// images[i] is the 0-based image of point i+1.
    images: Vec<u32>,
}

#[derive(Debug, Error)]
pub enum PermError {
    #[error("image table is not a bijection on 1..={n}")]
    NotABijection { n: u32 },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
}

/// Parse failure for cycle notation, with the 1-based character position of
/// the offending input.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at position {position}: {kind}")]
pub struct ParseCyclesError {
    pub position: usize,
    pub kind: ParseCyclesErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseCyclesErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected a point, found {0:?}")]
    ExpectedNumber(char),
    #[error("unclosed cycle")]
    UnclosedCycle,
    #[error("points are 1-based; 0 is not a point")]
    ZeroPoint,
    #[error("point {value} exceeds degree {n}")]
    OutOfRange { value: u64, n: u32 },
    #[error("point {0} appears twice")]
    DuplicatePoint(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Which group to draw from in [`sample_uniform`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermGroup {
    Symmetric,
    Alternating,
}

impl Permutation {
    pub fn identity(n: u32) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation from a 1-based image table: `images[i]` is the
    /// image of point `i+1`.
    pub fn from_one_based(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len() as u32;
        let mut seen = vec![false; images.len()];
        for &img in &images {
            if img == 0 || img > n || seen[(img - 1) as usize] {
                return Err(PermError::NotABijection { n });
            }
            seen[(img - 1) as usize] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|x| x - 1).collect() })
    }

    /// Builds a permutation of `{1..n}` from a list of disjoint cycles.
    pub fn from_cycles(n: u32, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..n).collect();
        let mut seen = vec![false; n as usize];
        for cycle in cycles {
            for (idx, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || seen[(x - 1) as usize] {
                    return Err(PermError::NotABijection { n });
                }
                seen[(x - 1) as usize] = true;
                let y = cycle[(idx + 1) % cycle.len()];
                images[(x - 1) as usize] = y - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: u32) -> u32 {
        assert!(x >= 1 && x <= self.degree(), "point {x} outside 1..={}", self.degree());
        self.images[(x - 1) as usize] + 1
    }

    /// Right-to-left composition: the result maps `x` to `self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        let images = other.images.iter().map(|&m| self.images[m as usize]).collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &m) in self.images.iter().enumerate() {
            images[m as usize] = i as u32;
        }
        Permutation { images }
    }

    /// The commutator `self · other · self⁻¹ · other⁻¹` (right-to-left).
    pub fn commutator(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.compose(other)?.compose(&self.inverse().compose(&other.inverse())?)
    }

    /// 1-based fixed points, ascending.
    pub fn fixed_points(&self) -> Vec<u32> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &m)| i as u32 == m)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    /// Cycles sorted by decreasing length, ties by smallest contained point;
    /// each cycle is rotated to start at its smallest point. Fixed points
    /// appear as 1-cycles.
    pub fn cycles(&self) -> CycleDecomposition {
        let mut cycles = self.raw_cycles();
        cycles.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        CycleDecomposition { cycles }
    }

    /// Cycles in order of smallest contained point (natural reading order).
    fn raw_cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32 + 1);
                x = self.images[x] as usize;
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.raw_cycles().iter().map(|c| c.len() as u32).collect())
    }

    pub fn parity(&self) -> Parity {
        let cycles = self.raw_cycles().len();
        if (self.images.len() - cycles).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }
}

/// Cycle decomposition ordered by decreasing cycle length (so the lengths
/// read off the cycle type directly).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<u32>>,
}

impl CycleDecomposition {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

impl fmt::Display for Permutation {
    /// Canonical cycle notation: cycles of length >= 2 in order of smallest
    /// point, each starting at its smallest point. The identity renders as
    /// the empty string, matching the input grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.raw_cycles() {
            if cycle.len() < 2 {
                continue;
            }
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() || self.fixed_points().len() == self.images.len() {
            write!(f, "Permutation(id, n={})", self.degree())
        } else {
            write!(f, "Permutation({}, n={})", self, self.degree())
        }
    }
}

/// Parses cycle notation into a permutation of `{1..n}`.
pub fn parse_cycles(text: &str, n: u32) -> Result<Permutation, ParseCyclesError> {
    let fail = |pos: usize, kind: ParseCyclesErrorKind| Err(ParseCyclesError { position: pos + 1, kind });
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pos = 0usize;
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut used = vec![false; n as usize];

    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].1.is_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    while pos < chars.len() {
        if chars[pos].1 != '(' {
            return fail(pos, ParseCyclesErrorKind::UnexpectedChar(chars[pos].1));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                return fail(chars.len(), ParseCyclesErrorKind::UnclosedCycle);
            }
            if !chars[pos].1.is_ascii_digit() {
                return fail(pos, ParseCyclesErrorKind::ExpectedNumber(chars[pos].1));
            }
            let num_start = pos;
            let mut value: u64 = 0;
            while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                value = value * 10 + chars[pos].1.to_digit(10).unwrap() as u64;
                if value > u64::from(u32::MAX) {
                    return fail(num_start, ParseCyclesErrorKind::OutOfRange { value, n });
                }
                pos += 1;
            }
            if value == 0 {
                return fail(num_start, ParseCyclesErrorKind::ZeroPoint);
            }
            if value > u64::from(n) {
                return fail(num_start, ParseCyclesErrorKind::OutOfRange { value, n });
            }
            let point = value as u32;
            if used[(point - 1) as usize] {
                return fail(num_start, ParseCyclesErrorKind::DuplicatePoint(point));
            }
            used[(point - 1) as usize] = true;
            cycle.push(point);

            skip_ws(&mut pos);
            match chars.get(pos).map(|&(_, c)| c) {
                Some(',') => pos += 1,
                Some(')') => {
                    pos += 1;
                    break;
                }
                Some(c) => return fail(pos, ParseCyclesErrorKind::UnexpectedChar(c)),
                None => return fail(chars.len(), ParseCyclesErrorKind::UnclosedCycle),
            }
        }
        cycles.push(cycle);
        skip_ws(&mut pos);
    }

    Ok(Permutation::from_cycles(n, &cycles).expect("parser enforces disjointness and range"))
}

/// Orbits of `{1..n}` under a set of generating permutations, each of degree
/// `n`. Orbits are sorted by smallest member and internally ascending; with
/// no generators every point is its own orbit.
pub fn orbits<'a, I>(n: u32, generators: I) -> Result<Vec<Vec<u32>>, PermError>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    let mut uf = UnionFind::new(n as usize);
    for g in generators {
        if g.degree() != n {
            return Err(PermError::DegreeMismatch { left: n, right: g.degree() });
        }
        for x in 0..n as usize {
            uf.union(x, g.images[x] as usize);
        }
    }
    let mut groups: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    for x in 0..n as usize {
        groups[uf.find(x)].push(x as u32 + 1);
    }
    groups.retain(|g| !g.is_empty());
    Ok(groups)
}

/// Minimal union-find with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Uniform element of `S_n` or `A_n`.
///
/// The alternating group is sampled without rejection: draw uniform from
/// `S_n` and, if the draw is odd, multiply by the transposition (1 2) (swap
/// the images of points 1 and 2). The map is two-to-one onto `A_n`, so the
/// result is uniform.
pub fn sample_uniform<R: Rng>(group: PermGroup, n: u32, rng: &mut R) -> Permutation {
    let mut images: Vec<u32> = (0..n).collect();
    images.shuffle(rng);
    let mut p = Permutation { images };
    if group == PermGroup::Alternating && !p.is_even() {
        p.images.swap(0, 1);
    }
    p
}

/// Uniform element of the conjugacy class of `S_n` with cycle type `class`:
/// a uniform word of `{1..n}` is poured into the canonical cycle shape,
/// which conjugates the canonical representative by a uniform permutation.
pub fn sample_conjugacy_class<R: Rng>(class: &Partition, rng: &mut R) -> Permutation {
    let n = class.n();
    let mut word: Vec<u32> = (1..=n).collect();
    word.shuffle(rng);
    let mut images = vec![0u32; n as usize];
    let mut base = 0usize;
    for &len in class.parts() {
        let len = len as usize;
        for off in 0..len {
            let from = word[base + off];
            let to = word[base + (off + 1) % len];
            images[(from - 1) as usize] = to - 1;
        }
        base += len;
    }
    Permutation { images }
}
