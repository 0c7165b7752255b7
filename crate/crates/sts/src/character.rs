//! Irreducible characters of the symmetric group.
//!
//! Characters are indexed by partitions of `n` and evaluated on conjugacy
//! classes (cycle types) by the Murnaghan–Nakayama rule: recursively strip
//! border strips whose sizes are the parts of the class, largest part first,
//! signing each strip by its height. Strip removal works on the beta-set
//! (first-column hook lengths) of the shape, where a border strip of size
//! `s` is exactly the replacement of a beta number `b` by `b - s`.
//!
//! Dimensions come from the hook length formula `n! / prod(hooks)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::partition::{all_partitions, factorial, Partition};

#[derive(Debug, Error)]
pub enum CharacterError {
    #[error("character of shape {lambda} is not defined on class {mu}: sizes {n_lambda} vs {n_mu}")]
    SizeMismatch { lambda: Partition, mu: Partition, n_lambda: u32, n_mu: u32 },
}

/// Dimension of the irreducible representation indexed by `lambda`
/// (hook length formula).
pub fn dimension(lambda: &Partition) -> BigUint {
    factorial(lambda.n()) / lambda.hooks_and_contents().hook_product
}

/// One way of removing a border strip: the smaller shape left behind and the
/// height of the removed strip (number of rows it touches, minus one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderStripRemoval {
    pub child: Partition,
    pub height: u32,
}

/// Beta-set of a partition: strictly decreasing first-column hook lengths
/// `lambda_i + (k - 1 - i)` over the `k` nonzero rows.
fn beta_set(lambda: &Partition) -> Vec<u32> {
    let k = lambda.num_parts() as u32;
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (k - 1 - i as u32))
        .collect()
}

fn partition_from_beta(mut beta: Vec<u32>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let k = beta.len() as u32;
    Partition::new(
        beta.iter().enumerate().map(|(i, &b)| b - (k - 1 - i as u32)).collect(),
    )
}

/// All ways to remove a border strip of `size` cells from `lambda`.
///
/// In beta-set form: pick `b` in the set with `b >= size` and `b - size` not
/// in the set; the strip's height is the number of beta values strictly
/// between `b - size` and `b`. Results are ordered by the row where the
/// strip starts (outermost candidate first).
pub fn border_strip_removals(lambda: &Partition, size: u32) -> Vec<BorderStripRemoval> {
    assert!(size >= 1, "border strips are non-empty");
    let beta = beta_set(lambda);
    let mut removals = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < size {
            continue;
        }
        let target = b - size;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&c| c > target && c < b).count() as u32;
        let mut child_beta = beta.clone();
        child_beta[i] = target;
        removals.push(BorderStripRemoval { child: partition_from_beta(child_beta), height });
    }
    removals
}

/// Shared evaluation state for character values against a fixed class `mu`.
/// The memo is keyed by (remaining shape, index into mu's parts), so values
/// computed while evaluating one shape are reused by every other shape.
pub struct CharacterEvaluator {
    mu_parts: Vec<u32>,
    memo: HashMap<(Partition, usize), BigInt>,
}

impl CharacterEvaluator {
    pub fn new(mu: &Partition) -> Self {
        CharacterEvaluator { mu_parts: mu.parts().to_vec(), memo: HashMap::new() }
    }

    /// Character value `chi^lambda(mu)`. `lambda` must partition the same
    /// integer as `mu`.
    pub fn value(&mut self, lambda: &Partition) -> Result<BigInt, CharacterError> {
        let n_mu: u32 = self.mu_parts.iter().sum();
        if lambda.n() != n_mu {
            return Err(CharacterError::SizeMismatch {
                lambda: lambda.clone(),
                mu: Partition::new(self.mu_parts.clone()),
                n_lambda: lambda.n(),
                n_mu,
            });
        }
        Ok(self.eval(lambda, 0))
    }

    fn eval(&mut self, shape: &Partition, idx: usize) -> BigInt {
        if shape.is_empty() {
            return BigInt::one();
        }
        let key = (shape.clone(), idx);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let size = self.mu_parts[idx];
        let mut acc = BigInt::zero();
        for removal in border_strip_removals(shape, size) {
            let term = self.eval(&removal.child, idx + 1);
            if removal.height % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }
}

/// Character value `chi^lambda(mu)` by the Murnaghan–Nakayama rule.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<BigInt, CharacterError> {
    CharacterEvaluator::new(mu).value(lambda)
}

/// One column of the character table of `S_n`: the values `chi^lambda(mu)`
/// for every shape `lambda` of `n`, computed with a shared memo.
#[derive(Clone, Debug)]
pub struct CharColumn {
    pub mu: Partition,
    pub values: BTreeMap<Partition, BigInt>,
}

pub fn character_column(mu: &Partition) -> CharColumn {
    let mut evaluator = CharacterEvaluator::new(mu);
    let values = all_partitions(mu.n())
        .map(|lambda| {
            let v = evaluator.value(&lambda).expect("shapes of n match classes of n");
            (lambda, v)
        })
        .collect();
    CharColumn { mu: mu.clone(), values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn ones(n: u32) -> Partition {
        Partition::new(vec![1; n as usize])
    }

    #[test]
    fn strip_removal_examples() {
        let rems = border_strip_removals(&p("2.1"), 3);
        assert_eq!(rems, vec![BorderStripRemoval { child: Partition::empty(), height: 1 }]);

        let rems = border_strip_removals(&p("2.2"), 3);
        assert_eq!(rems, vec![BorderStripRemoval { child: p("1"), height: 1 }]);

        assert!(border_strip_removals(&p("1"), 2).is_empty());

        // the only domino on the rim of (2,2,1) is the right column; the
        // bottom two cells of the left column would not leave a partition
        let rems = border_strip_removals(&p("2.2.1"), 2);
        assert_eq!(rems, vec![BorderStripRemoval { child: p("1.1.1"), height: 1 }]);
    }

    #[test]
    fn strip_removal_preserves_size_and_shape() {
        for n in 1..=9u32 {
            for lambda in all_partitions(n) {
                for size in 1..=n {
                    for rem in border_strip_removals(&lambda, size) {
                        assert_eq!(rem.child.n(), n - size);
                        assert!(rem.height < lambda.num_parts() as u32 + 1);
                        // the child fits inside the parent
                        for (i, &part) in rem.child.parts().iter().enumerate() {
                            assert!(part <= lambda.parts()[i]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn small_character_values() {
        assert_eq!(mn_character(&p("2.1"), &p("3")).unwrap(), BigInt::from(-1));
        assert_eq!(mn_character(&p("2.1"), &ones(3)).unwrap(), BigInt::from(2));
        assert_eq!(mn_character(&p("3"), &p("3")).unwrap(), BigInt::one());
        assert_eq!(mn_character(&p("1.1.1"), &p("3")).unwrap(), BigInt::one());
        assert_eq!(mn_character(&p("3.2"), &p("2.2.1")).unwrap(), BigInt::one());
        assert_eq!(mn_character(&p("3.2"), &p("5")).unwrap(), BigInt::zero());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(mn_character(&p("2.1"), &p("2.2")).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension(&p("5.3.3.2.1")), BigUint::from(64064u32));
        assert_eq!(dimension(&p("3.2")), BigUint::from(5u32));
        assert_eq!(dimension(&p("1")), BigUint::one());
        // the trivial and sign representations are one-dimensional
        for n in 1..=12u32 {
            assert_eq!(dimension(&Partition::new(vec![n])), BigUint::one());
            assert_eq!(dimension(&ones(n)), BigUint::one());
        }
    }

    #[test]
    fn dimension_matches_character_at_identity() {
        for n in 1..=7u32 {
            let id_class = ones(n);
            for lambda in all_partitions(n) {
                let chi = mn_character(&lambda, &id_class).unwrap();
                assert_eq!(chi, BigInt::from(dimension(&lambda)), "lambda={lambda}");
            }
        }
    }

    #[test]
    fn dimension_squares_sum_to_group_order() {
        for n in 1..=10u32 {
            let sum: BigUint = all_partitions(n).map(|l| dimension(&l).pow(2)).sum();
            assert_eq!(sum, factorial(n), "n={n}");
        }
    }

    #[test]
    fn two_row_dimension_closed_form() {
        for n in 2..=20u32 {
            for k in 0..=n / 2 {
                let lambda = Partition::new(vec![n - k, k]);
                let closed = binomial(BigUint::from(n), BigUint::from(k))
                    * BigUint::from(n - 2 * k + 1)
                    / BigUint::from(n - k + 1);
                assert_eq!(dimension(&lambda), closed, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn full_cycle_column_is_plus_minus_one_or_zero() {
        for n in 1..=12u32 {
            let col = character_column(&Partition::new(vec![n]));
            for (lambda, v) in &col.values {
                assert!(
                    *v == BigInt::zero() || *v == BigInt::one() || *v == BigInt::from(-1),
                    "chi^{lambda}(({n})) = {v}"
                );
            }
        }
    }

    #[test]
    fn column_norms_match_centralizer_order() {
        // second orthogonality diagonal: sum over shapes of chi(mu)^2 = n!/|K_mu|
        for n in 1..=7u32 {
            for mu in all_partitions(n) {
                let col = character_column(&mu);
                let norm: BigInt = col.values.values().map(|v| v * v).sum();
                let centralizer = factorial(n) / mu.class_size();
                assert_eq!(norm, BigInt::from(centralizer), "mu={mu}");
            }
        }
    }

    #[test]
    fn first_orthogonality() {
        for n in 1..=7u32 {
            let columns: Vec<(Partition, CharColumn)> =
                all_partitions(n).map(|mu| (mu.clone(), character_column(&mu))).collect();
            let shapes: Vec<Partition> = all_partitions(n).collect();
            let order = BigInt::from(factorial(n));
            for a in &shapes {
                for b in &shapes {
                    let mut acc = BigInt::zero();
                    for (mu, col) in &columns {
                        acc += BigInt::from(mu.class_size()) * &col.values[a] * &col.values[b];
                    }
                    let expect = if a == b { order.clone() } else { BigInt::zero() };
                    assert_eq!(acc, expect, "n={n} a={a} b={b}");
                }
            }
        }
    }

    /// Independent oracle: enumerate all fillings of the diagram of `lambda`
    /// with `mu_i` copies of label `i`, keep those that are border-strip
    /// tableaux (rows and columns weakly increase; each label region is
    /// edge-connected with no 2x2 block), and sum their signs.
    fn brute_force_character(lambda: &Partition, mu: &Partition) -> BigInt {
        let cells: Vec<(usize, usize)> = lambda
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &row)| (0..row as usize).map(move |j| (i, j)))
            .collect();
        let labels = mu.num_parts();
        let mut fill = vec![0usize; cells.len()];
        let mut total = BigInt::zero();
        enumerate_fillings(lambda, mu, &cells, &mut fill, 0, labels, &mut total);
        total
    }

    fn enumerate_fillings(
        lambda: &Partition,
        mu: &Partition,
        cells: &[(usize, usize)],
        fill: &mut Vec<usize>,
        pos: usize,
        labels: usize,
        total: &mut BigInt,
    ) {
        if pos == cells.len() {
            if let Some(sign) = tableau_sign(lambda, mu, cells, fill, labels) {
                *total += sign;
            }
            return;
        }
        for label in 0..labels {
            fill[pos] = label;
            enumerate_fillings(lambda, mu, cells, fill, pos + 1, labels, total);
        }
    }

    fn tableau_sign(
        lambda: &Partition,
        mu: &Partition,
        cells: &[(usize, usize)],
        fill: &[usize],
        labels: usize,
    ) -> Option<BigInt> {
        let at = |i: usize, j: usize| -> Option<usize> {
            cells.iter().position(|&c| c == (i, j)).map(|idx| fill[idx])
        };
        // label counts match mu
        for (label, &want) in mu.parts().iter().enumerate() {
            let got = fill.iter().filter(|&&l| l == label).count();
            if got != want as usize {
                return None;
            }
        }
        // rows and columns weakly increase
        for (idx, &(i, j)) in cells.iter().enumerate() {
            if let Some(right) = at(i, j + 1) {
                if right < fill[idx] {
                    return None;
                }
            }
            if let Some(below) = at(i + 1, j) {
                if below < fill[idx] {
                    return None;
                }
            }
        }
        let mut sign = BigInt::one();
        for label in 0..labels {
            let region: Vec<(usize, usize)> = cells
                .iter()
                .zip(fill)
                .filter(|&(_, &l)| l == label)
                .map(|(&c, _)| c)
                .collect();
            // edge-connected
            let mut reached = vec![false; region.len()];
            let mut stack = vec![0usize];
            reached[0] = true;
            while let Some(r) = stack.pop() {
                let (i, j) = region[r];
                for (s, &(i2, j2)) in region.iter().enumerate() {
                    if !reached[s] && i.abs_diff(i2) + j.abs_diff(j2) == 1 {
                        reached[s] = true;
                        stack.push(s);
                    }
                }
            }
            if reached.iter().any(|&r| !r) {
                return None;
            }
            // no 2x2 block
            for &(i, j) in &region {
                if region.contains(&(i + 1, j))
                    && region.contains(&(i, j + 1))
                    && region.contains(&(i + 1, j + 1))
                {
                    return None;
                }
            }
            let rows: std::collections::HashSet<usize> =
                region.iter().map(|&(i, _)| i).collect();
            if (rows.len() - 1) % 2 == 1 {
                sign = -sign;
            }
        }
        let _ = lambda;
        Some(sign)
    }

    #[test]
    fn murnaghan_nakayama_matches_tableau_enumeration() {
        for n in 1..=5u32 {
            for lambda in all_partitions(n) {
                for mu in all_partitions(n) {
                    let fast = mn_character(&lambda, &mu).unwrap();
                    let slow = brute_force_character(&lambda, &mu);
                    assert_eq!(fast, slow, "lambda={lambda} mu={mu}");
                }
            }
        }
    }
}
