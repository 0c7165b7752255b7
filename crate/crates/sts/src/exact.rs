//! Exact distributions for random square-tiled surfaces.
//!
//! Two random models on `n` squares are supported:
//!
//! * **standard** — both gluing permutations uniform on `S_n`;
//! * **horizontally restricted**, `Hr(mu)` — the horizontal gluing uniform
//!   on the conjugacy class of cycle type `mu`, the vertical one uniform on
//!   `S_n`.
//!
//! Everything here is computed in exact big-rational arithmetic from the
//! character theory of `S_n`. The commutator of the gluing pair (whose
//! cycles are the surface's vertices) has per-element probability
//!
//! ```text
//! P_mu(g) = (1/n!) * sum over shapes lambda of
//!           chi^lambda(mu)^2 * chi^lambda(g) / dim(lambda)
//! ```
//!
//! and the probability generating function of the vertex count is a sum of
//! content products over shapes. Alongside the distributions live the
//! finite-`n` bounds used to certify convergence to the uniform distribution
//! on `A_n`: a fourth-power character bound on total variation, an l2
//! discrepancy, and a geometric tail bound on the vertex count, plus a
//! brute-force enumeration oracle for small `n`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::character::{character_column, dimension, mn_character};
use crate::partition::{all_partitions, factorial, Partition};
use crate::perm::{Permutation, UnionFind};

/// Exact character pipelines are supported up to this degree; p(30) = 5604
/// shapes is the practical ceiling for full columns.
pub const MAX_CHARACTER_N: u32 = 30;

/// Brute-force enumeration refuses to walk more gluing pairs than this.
pub const MAX_BRUTE_FORCE_PAIRS: u64 = 500_000_000;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("degree {n} exceeds the exact-arithmetic limit {max}")]
    DegreeTooLarge { n: u32, max: u32 },
    #[error("enumerating {pairs} gluing pairs exceeds the budget of {budget}")]
    PairBudgetExceeded { pairs: u128, budget: u64 },
    #[error("degree must be at least {min}, got {n}")]
    DegreeTooSmall { n: u32, min: u32 },
    #[error("distributions have different degrees: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("cycle type {mu} does not partition {n}")]
    WrongSize { mu: Partition, n: u32 },
}

/// Random model with an exact distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    /// Both permutations uniform on `S_n`.
    Standard,
    /// Horizontal permutation uniform on the class of cycle type `mu`.
    Hr(Partition),
}

fn check_degree(n: u32) -> Result<(), ExactError> {
    if n == 0 {
        return Err(ExactError::DegreeTooSmall { n, min: 1 });
    }
    if n > MAX_CHARACTER_N {
        return Err(ExactError::DegreeTooLarge { n, max: MAX_CHARACTER_N });
    }
    Ok(())
}

fn check_model(model: &Model, n: u32) -> Result<(), ExactError> {
    check_degree(n)?;
    if let Model::Hr(mu) = model {
        if mu.n() != n {
            return Err(ExactError::WrongSize { mu: mu.clone(), n });
        }
    }
    Ok(())
}

/// A probability distribution over conjugacy classes of `S_n`, stored as
/// whole-class masses keyed by cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDist {
    pub n: u32,
    pub masses: BTreeMap<Partition, BigRational>,
}

impl ClassDist {
    pub fn total_mass(&self) -> BigRational {
        self.masses.values().sum()
    }

    pub fn mass(&self, class: &Partition) -> BigRational {
        self.masses.get(class).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Distribution of the number of cycles, obtained by aggregating class
    /// masses with equal part counts.
    pub fn cycle_count_dist(&self) -> PgfPoly {
        let mut coeffs = vec![BigRational::zero(); self.n as usize + 1];
        for (class, mass) in &self.masses {
            coeffs[class.num_parts()] += mass;
        }
        PgfPoly { coeffs }
    }
}

/// A polynomial with rational coefficients, used as a probability generating
/// function: `coeffs[x]` is the probability of the value `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PgfPoly {
    pub coeffs: Vec<BigRational>,
}

impl PgfPoly {
    pub fn eval(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    pub fn expectation(&self) -> BigRational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(x, c)| c * BigRational::from_integer(BigInt::from(x)))
            .sum()
    }

    pub fn variance(&self) -> BigRational {
        let mean = self.expectation();
        let second: BigRational = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(x, c)| c * BigRational::from_integer(BigInt::from(x * x)))
            .sum();
        second - &mean * &mean
    }

    /// `Pr(X >= t)`.
    pub fn upper_tail(&self, t: u32) -> BigRational {
        self.coeffs.iter().skip(t as usize).sum()
    }
}

/// Moment functional `E[p(X)] = sum over x of p(x) * Pr(X = x)` for a
/// polynomial `p` given by its coefficient list (constant term first).
pub fn dist_moments(dist: &PgfPoly, poly: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (x, mass) in dist.coeffs.iter().enumerate() {
        if mass.is_zero() {
            continue;
        }
        let point = BigRational::from_integer(BigInt::from(x));
        let mut value = BigRational::zero();
        for c in poly.iter().rev() {
            value = value * &point + c;
        }
        acc += mass * value;
    }
    acc
}

/// Per-element probability that the commutator of the `Hr(mu)` model equals
/// a fixed permutation of cycle type `g_class`. Commutators are even, so odd
/// classes get probability zero.
pub fn p_value(mu: &Partition, g_class: &Partition) -> Result<BigRational, ExactError> {
    let n = mu.n();
    check_degree(n)?;
    if g_class.n() != n {
        return Err(ExactError::WrongSize { mu: g_class.clone(), n });
    }
    if !g_class.is_even_class() {
        return Ok(BigRational::zero());
    }
    let col_mu = character_column(mu);
    let col_g = character_column(g_class);
    let mut acc = BigRational::zero();
    for (lambda, chi_mu) in &col_mu.values {
        let chi_g = &col_g.values[lambda];
        if chi_mu.is_zero() || chi_g.is_zero() {
            continue;
        }
        acc += BigRational::new(chi_mu * chi_mu * chi_g, BigInt::from(dimension(lambda)));
    }
    Ok(acc / BigRational::from_integer(BigInt::from(factorial(n))))
}

/// Exact distribution of the commutator's conjugacy class under the given
/// model. The support is the even classes of `S_n` (some may carry zero
/// mass).
pub fn commutator_class_distribution(model: &Model, n: u32) -> Result<ClassDist, ExactError> {
    check_model(model, n)?;
    let col_mu = match model {
        Model::Standard => None,
        Model::Hr(mu) => Some(character_column(mu)),
    };
    let mut masses = BTreeMap::new();
    for g in all_partitions(n).filter(Partition::is_even_class) {
        let col_g = character_column(&g);
        let mut acc = BigRational::zero();
        for (lambda, chi_g) in &col_g.values {
            if chi_g.is_zero() {
                continue;
            }
            let dim = BigInt::from(dimension(lambda));
            match &col_mu {
                // HR model: weight each shape by chi^lambda(mu)^2
                Some(col) => {
                    let chi_mu = &col.values[lambda];
                    if chi_mu.is_zero() {
                        continue;
                    }
                    acc += BigRational::new(chi_mu * chi_mu * chi_g, dim);
                }
                // standard model: the class-size-weighted average of
                // chi(mu)^2 over mu is 1 by column orthogonality, leaving
                // the classical commutator distribution sum chi(g)/dim
                None => acc += BigRational::new(chi_g.clone(), dim),
            }
        }
        let mass = acc * BigRational::new(BigInt::from(g.class_size()), BigInt::from(factorial(n)));
        masses.insert(g, mass);
    }
    Ok(ClassDist { n, masses })
}

/// Probability generating function of the vertex count (number of commutator
/// cycles) under `Hr(mu)`:
/// `g(q) = (1/n!) * sum over lambda of chi^lambda(mu)^2 * prod over cells
/// (q + content)`.
pub fn vertex_count_pgf(mu: &Partition) -> Result<PgfPoly, ExactError> {
    let n = mu.n();
    check_degree(n)?;
    let col = character_column(mu);
    let mut acc = vec![BigInt::zero(); n as usize + 1];
    for (lambda, chi) in &col.values {
        if chi.is_zero() {
            continue;
        }
        let weight = chi * chi;
        for (i, c) in content_poly(lambda).iter().enumerate() {
            acc[i] += c * &weight;
        }
    }
    Ok(divide_by_order(acc, n))
}

/// Vertex-count PGF under the standard model. Averaging the HR generating
/// function over classes with weights `|K_mu|/n!` collapses the character
/// squares by column orthogonality, leaving
/// `g(q) = (1/n!) * sum over lambda of prod over cells (q + content)`.
pub fn vertex_count_pgf_standard(n: u32) -> Result<PgfPoly, ExactError> {
    check_degree(n)?;
    let mut acc = vec![BigInt::zero(); n as usize + 1];
    for lambda in all_partitions(n) {
        for (i, c) in content_poly(&lambda).iter().enumerate() {
            acc[i] += c;
        }
    }
    Ok(divide_by_order(acc, n))
}

/// `prod over cells (q + content)` as integer polynomial coefficients.
fn content_poly(lambda: &Partition) -> Vec<BigInt> {
    let n = lambda.n() as usize;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::one();
    let mut degree = 0usize;
    for row in lambda.hooks_and_contents().contents {
        for content in row {
            let c = BigInt::from(content);
            coeffs[degree + 1] = coeffs[degree].clone();
            for i in (1..=degree).rev() {
                let shifted = coeffs[i - 1].clone();
                coeffs[i] = &coeffs[i] * &c + shifted;
            }
            coeffs[0] = &coeffs[0] * &c;
            degree += 1;
        }
    }
    coeffs
}

fn divide_by_order(coeffs: Vec<BigInt>, n: u32) -> PgfPoly {
    let order = BigInt::from(factorial(n));
    PgfPoly {
        coeffs: coeffs.into_iter().map(|c| BigRational::new(c, order.clone())).collect(),
    }
}

/// Uniform distribution on `A_n` as a class distribution: each even class
/// carries `2 |K| / n!` (for `n = 1`, the point mass at the identity).
pub fn uniform_an_distribution(n: u32) -> Result<ClassDist, ExactError> {
    if n == 0 {
        return Err(ExactError::DegreeTooSmall { n, min: 1 });
    }
    let order = BigInt::from(factorial(n));
    let masses = all_partitions(n)
        .filter(Partition::is_even_class)
        .map(|g| {
            let size = BigInt::from(g.class_size());
            let mass = if n == 1 {
                BigRational::one()
            } else {
                BigRational::new(BigInt::from(2) * size, order.clone())
            };
            (g, mass)
        })
        .collect();
    Ok(ClassDist { n, masses })
}

/// Distribution of the cycle count of a uniform element of `A_n`. Class
/// sizes are accumulated as integers by part count, so this stays cheap even
/// at degrees (n = 50) where the full class map would be bulky.
pub fn uniform_an_cycle_count_dist(n: u32) -> Result<PgfPoly, ExactError> {
    if n == 0 {
        return Err(ExactError::DegreeTooSmall { n, min: 1 });
    }
    let mut totals = vec![BigUint::zero(); n as usize + 1];
    for g in all_partitions(n).filter(Partition::is_even_class) {
        totals[g.num_parts()] += g.class_size();
    }
    let order = BigInt::from(factorial(n));
    let two = BigInt::from(if n == 1 { 1 } else { 2 });
    Ok(PgfPoly {
        coeffs: totals
            .into_iter()
            .map(|t| BigRational::new(&two * BigInt::from(t), order.clone()))
            .collect(),
    })
}

/// Total variation distance between two class distributions of the same
/// degree: half the sum of absolute mass differences.
pub fn tv_distance(a: &ClassDist, b: &ClassDist) -> Result<BigRational, ExactError> {
    if a.n != b.n {
        return Err(ExactError::DegreeMismatch { left: a.n, right: b.n });
    }
    let keys: std::collections::BTreeSet<&Partition> =
        a.masses.keys().chain(b.masses.keys()).collect();
    let mut acc = BigRational::zero();
    for key in keys {
        acc += (a.mass(key) - b.mass(key)).abs();
    }
    Ok(acc / BigRational::from_integer(BigInt::from(2)))
}

/// Fourth-power character bound on the squared total variation between the
/// `Hr(mu)` commutator distribution and uniform `A_n`:
/// `TV^2 <= (1/4) * sum over nonlinear shapes of chi(mu)^4 / dim^2`.
/// The derivation needs `n >= 5`; smaller degrees are rejected.
pub fn tv_upper_bound(mu: &Partition) -> Result<BigRational, ExactError> {
    if mu.n() < 5 {
        return Err(ExactError::DegreeTooSmall { n: mu.n(), min: 5 });
    }
    tv_upper_bound_any_degree(mu)
}

/// The same character sum without the degree gate, for diagnostics and
/// small-degree experiments. Not a proven bound below degree 5.
pub fn tv_upper_bound_any_degree(mu: &Partition) -> Result<BigRational, ExactError> {
    let n = mu.n();
    check_degree(n)?;
    let trivial = Partition::new(vec![n]);
    let sign = Partition::new(vec![1; n as usize]);
    let col = character_column(mu);
    let mut acc = BigRational::zero();
    for (lambda, chi) in &col.values {
        if *lambda == trivial || *lambda == sign || chi.is_zero() {
            continue;
        }
        let dim = BigInt::from(dimension(lambda));
        let chi_sq = chi * chi;
        acc += BigRational::new(&chi_sq * &chi_sq, &dim * &dim);
    }
    Ok(acc / BigRational::from_integer(BigInt::from(4)))
}

/// Geometric tail bound on the vertex count under `Hr(mu)`:
/// `Pr(V >= t) <= 2^(-t) * (1/n!) * sum over two-row shapes (n-k, k) of
/// chi(mu)^2 * prod over cells (2 + content)`.
/// Only two-row shapes survive evaluation at 2 because any third row
/// contributes a factor `2 + (-2) = 0`.
pub fn tail_bound(mu: &Partition, t: u32) -> Result<BigRational, ExactError> {
    let n = mu.n();
    check_degree(n)?;
    let mut acc = BigRational::zero();
    for k in 0..=n / 2 {
        let lambda = Partition::new(vec![n - k, k]);
        let chi = mn_character(&lambda, mu).expect("same degree");
        if chi.is_zero() {
            continue;
        }
        let mut product = BigInt::one();
        for row in lambda.hooks_and_contents().contents {
            for content in row {
                product *= BigInt::from(2 + content);
            }
        }
        acc += BigRational::from_integer(&chi * &chi * product);
    }
    acc /= BigRational::from_integer(BigInt::from(factorial(n)));
    Ok(acc / BigRational::from_integer(BigInt::from(1u8) << t as usize))
}

/// Scaled l2 discrepancy between the `Hr(mu)` commutator distribution and
/// uniform on `A_n`: `|A_n| * sum over g in A_n of (P(g) - U(g))^2`,
/// aggregated over classes. Satisfies `4 TV^2 <= l2`.
pub fn l2_discrepancy(mu: &Partition) -> Result<BigRational, ExactError> {
    let n = mu.n();
    if n < 2 {
        return Err(ExactError::DegreeTooSmall { n, min: 2 });
    }
    let dist = commutator_class_distribution(&Model::Hr(mu.clone()), n)?;
    let uniform = uniform_an_distribution(n)?;
    let half_order = BigRational::new(BigInt::from(factorial(n)), BigInt::from(2));
    let mut acc = BigRational::zero();
    for (class, mass) in &dist.masses {
        let size = BigRational::from_integer(BigInt::from(class.class_size()));
        let diff = (mass - uniform.mass(class)) / &size;
        acc += size * &diff * &diff;
    }
    Ok(acc * half_order)
}

/// Per-class deviation of the `Hr(mu)` commutator distribution from uniform
/// `A_n`, with the Cauchy-Schwarz certificate
/// `deviation(K)^2 <= |K| * sum over A_n of (P - U)^2` checked per class.
#[derive(Clone, Debug)]
pub struct StratumDeviation {
    pub deviations: BTreeMap<Partition, BigRational>,
    /// True when every class passes the certificate (always expected; a
    /// failure would indicate an arithmetic bug).
    pub certified: bool,
}

pub fn stratum_class_deviation(mu: &Partition) -> Result<StratumDeviation, ExactError> {
    let n = mu.n();
    if n < 2 {
        return Err(ExactError::DegreeTooSmall { n, min: 2 });
    }
    let dist = commutator_class_distribution(&Model::Hr(mu.clone()), n)?;
    let uniform = uniform_an_distribution(n)?;
    // sum over elements of A_n of the squared per-element difference
    let mut l2_sum = BigRational::zero();
    for (class, mass) in &dist.masses {
        let size = BigRational::from_integer(BigInt::from(class.class_size()));
        let diff = (mass - uniform.mass(class)) / &size;
        l2_sum += size * &diff * &diff;
    }
    let mut deviations = BTreeMap::new();
    let mut certified = true;
    for (class, mass) in &dist.masses {
        let dev = (mass - uniform.mass(class)).abs();
        let size = BigRational::from_integer(BigInt::from(class.class_size()));
        if &dev * &dev > &size * &l2_sum {
            certified = false;
        }
        deviations.insert(class.clone(), dev);
    }
    Ok(StratumDeviation { deviations, certified })
}

/// Everything the brute-force enumeration measures about a model at small
/// `n`: exact frequencies over all gluing pairs.
#[derive(Clone, Debug)]
pub struct BruteForceResult {
    pub class_dist: ClassDist,
    pub pgf: PgfPoly,
    pub connected_fraction: BigRational,
    /// Fractions classified as torus / visibility-certified / undetermined.
    pub holonomy_fractions: [BigRational; 3],
}

/// Exhaustive enumeration of all gluing pairs of the model. The number of
/// pairs is `|X| * n!` where `X` is `S_n` or the class of `mu`; the walk is
/// refused beyond [`MAX_BRUTE_FORCE_PAIRS`].
pub fn brute_force_model(model: &Model, n: u32) -> Result<BruteForceResult, ExactError> {
    if n == 0 {
        return Err(ExactError::DegreeTooSmall { n, min: 1 });
    }
    if let Model::Hr(mu) = model {
        if mu.n() != n {
            return Err(ExactError::WrongSize { mu: mu.clone(), n });
        }
    }
    let order = factorial(n);
    let x_size = match model {
        Model::Standard => order.clone(),
        Model::Hr(mu) => mu.class_size(),
    };
    let pairs: u128 = u128::try_from(&x_size * &order)
        .map_err(|_| ExactError::PairBudgetExceeded { pairs: u128::MAX, budget: MAX_BRUTE_FORCE_PAIRS })?;
    if pairs > MAX_BRUTE_FORCE_PAIRS as u128 {
        return Err(ExactError::PairBudgetExceeded { pairs, budget: MAX_BRUTE_FORCE_PAIRS });
    }

    let group: Vec<Permutation> = (1..=n)
        .permutations(n as usize)
        .map(|im| Permutation::from_one_based(im).unwrap())
        .collect();
    let sigmas: Vec<&Permutation> = match model {
        Model::Standard => group.iter().collect(),
        Model::Hr(mu) => group.iter().filter(|p| &p.cycle_type() == mu).collect(),
    };

    let mut class_counts: BTreeMap<Partition, u64> = BTreeMap::new();
    let mut vertex_counts = vec![0u64; n as usize + 1];
    let mut connected: u64 = 0;
    let mut holonomy = [0u64; 3];

    let nu = n as usize;
    let mut tau_inv = vec![0u32; nu];
    let mut com = vec![0u32; nu];
    let mut seen = vec![false; nu];
    for tau in &group {
        let tau_images: Vec<u32> = (1..=n).map(|x| tau.apply(x) - 1).collect();
        for (i, &m) in tau_images.iter().enumerate() {
            tau_inv[m as usize] = i as u32;
        }
        for sigma in &sigmas {
            let sigma_images: Vec<u32> = (1..=n).map(|x| sigma.apply(x) - 1).collect();
            let mut sigma_inv = vec![0u32; nu];
            for (i, &m) in sigma_images.iter().enumerate() {
                sigma_inv[m as usize] = i as u32;
            }
            // commutator images: sigma(tau(sigma_inv(tau_inv(x))))
            for x in 0..nu {
                com[x] = sigma_images
                    [tau_images[sigma_inv[tau_inv[x] as usize] as usize] as usize];
            }
            // cycle type of the commutator
            seen.fill(false);
            let mut lens: Vec<u32> = Vec::new();
            let mut fixed = 0usize;
            for start in 0..nu {
                if seen[start] {
                    continue;
                }
                let mut len = 0u32;
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    len += 1;
                    x = com[x] as usize;
                }
                if len == 1 {
                    fixed += 1;
                }
                lens.push(len);
            }
            let vertex_count = lens.len();
            let class = Partition::new(lens);
            *class_counts.entry(class).or_insert(0) += 1;
            vertex_counts[vertex_count] += 1;

            // connectivity of the pair
            let mut uf = UnionFind::new(nu);
            for x in 0..nu {
                uf.union(x, sigma_images[x] as usize);
                uf.union(x, tau_images[x] as usize);
            }
            let root = uf.find(0);
            if (0..nu).all(|x| uf.find(x) == root) {
                connected += 1;
            }

            // holonomy classification: no commutator fixed points, or all of
            // them fixed by both gluings, is the torus case
            let h = if fixed == 0
                || (0..nu).all(|x| {
                    com[x] as usize != x
                        || (sigma_images[x] as usize == x && tau_images[x] as usize == x)
                }) {
                0
            } else if nu > 2 * fixed {
                1
            } else {
                2
            };
            holonomy[h] += 1;
        }
    }

    let denom = BigInt::from(x_size * order);
    let ratio = |count: u64| BigRational::new(BigInt::from(count), denom.clone());
    let masses = all_partitions(n)
        .filter(Partition::is_even_class)
        .map(|g| {
            let count = class_counts.get(&g).copied().unwrap_or(0);
            (g, ratio(count))
        })
        .collect();
    Ok(BruteForceResult {
        class_dist: ClassDist { n, masses },
        pgf: PgfPoly { coeffs: vertex_counts.into_iter().map(ratio).collect() },
        connected_fraction: ratio(connected),
        holonomy_fractions: [ratio(holonomy[0]), ratio(holonomy[1]), ratio(holonomy[2])],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn three_square_hr_distribution() {
        let dist =
            commutator_class_distribution(&Model::Hr(p("3")), 3).unwrap();
        assert_eq!(dist.masses.len(), 2);
        assert_eq!(dist.mass(&p("1.1.1")), rat(1, 2));
        assert_eq!(dist.mass(&p("3")), rat(1, 2));
        assert_eq!(dist.total_mass(), BigRational::one());
    }

    #[test]
    fn three_square_p_values() {
        assert_eq!(p_value(&p("3"), &p("1.1.1")).unwrap(), rat(1, 2));
        assert_eq!(p_value(&p("3"), &p("3")).unwrap(), rat(1, 4));
        // odd classes carry no mass
        assert_eq!(p_value(&p("3"), &p("2.1")).unwrap(), BigRational::zero());
    }

    #[test]
    fn three_square_pgf() {
        // (q^3 + q) / 2
        let pgf = vertex_count_pgf(&p("3")).unwrap();
        assert_eq!(
            pgf.coeffs,
            vec![rat(0, 1), rat(1, 2), rat(0, 1), rat(1, 2)]
        );
        assert_eq!(pgf.eval(&BigRational::one()), BigRational::one());
        assert_eq!(pgf.expectation(), rat(2, 1));
    }

    #[test]
    fn pgf_matches_class_distribution_route() {
        for n in 1..=7u32 {
            for mu in all_partitions(n) {
                let via_classes =
                    commutator_class_distribution(&Model::Hr(mu.clone()), n)
                        .unwrap()
                        .cycle_count_dist();
                let via_contents = vertex_count_pgf(&mu).unwrap();
                assert_eq!(via_classes, via_contents, "mu={mu}");
            }
            let std_classes = commutator_class_distribution(&Model::Standard, n)
                .unwrap()
                .cycle_count_dist();
            let std_contents = vertex_count_pgf_standard(n).unwrap();
            assert_eq!(std_classes, std_contents, "standard n={n}");
        }
    }

    #[test]
    fn pgf_parity_support_and_total() {
        for n in 1..=7u32 {
            for mu in all_partitions(n) {
                let pgf = vertex_count_pgf(&mu).unwrap();
                assert_eq!(pgf.coeffs.len() as u32, n + 1);
                assert_eq!(pgf.eval(&BigRational::one()), BigRational::one());
                for (x, c) in pgf.coeffs.iter().enumerate() {
                    if (n as usize - x) % 2 == 1 {
                        assert!(c.is_zero(), "odd-parity coefficient {x} for mu={mu}");
                    } else {
                        assert!(!c.is_negative(), "negative coefficient for mu={mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn standard_model_is_the_class_weighted_mixture() {
        for n in 1..=5u32 {
            let std = commutator_class_distribution(&Model::Standard, n).unwrap();
            let order = BigRational::from_integer(BigInt::from(factorial(n)));
            let mut mixed: BTreeMap<Partition, BigRational> = BTreeMap::new();
            for mu in all_partitions(n) {
                let weight =
                    BigRational::from_integer(BigInt::from(mu.class_size())) / &order;
                let dist =
                    commutator_class_distribution(&Model::Hr(mu.clone()), n).unwrap();
                for (g, mass) in dist.masses {
                    *mixed.entry(g).or_insert_with(BigRational::zero) += mass * &weight;
                }
            }
            for (g, mass) in &std.masses {
                assert_eq!(mass, &mixed[g], "n={n} class={g}");
            }
        }
    }

    #[test]
    fn distributions_sum_to_one() {
        for n in 1..=7u32 {
            for mu in all_partitions(n) {
                let dist = commutator_class_distribution(&Model::Hr(mu), n).unwrap();
                assert_eq!(dist.total_mass(), BigRational::one());
            }
            let std = commutator_class_distribution(&Model::Standard, n).unwrap();
            assert_eq!(std.total_mass(), BigRational::one());
            let uni = uniform_an_distribution(n).unwrap();
            assert_eq!(uni.total_mass(), BigRational::one());
        }
    }

    #[test]
    fn uniform_an_small_cases() {
        let u3 = uniform_an_distribution(3).unwrap();
        assert_eq!(u3.mass(&p("1.1.1")), rat(1, 3));
        assert_eq!(u3.mass(&p("3")), rat(2, 3));
        let u1 = uniform_an_distribution(1).unwrap();
        assert_eq!(u1.mass(&p("1")), BigRational::one());
        // derangement mass in A_4: only the (2,2) class
        let u4 = uniform_an_distribution(4).unwrap();
        let derangement: BigRational = u4
            .masses
            .iter()
            .filter(|(g, _)| !g.parts().contains(&1))
            .map(|(_, m)| m)
            .sum();
        assert_eq!(derangement, rat(1, 4));
        // within n^2/(n+1)! of 1/e
        let diff = (0.25f64 - (-1.0f64).exp()).abs();
        assert!(diff <= 16.0 / 120.0);
    }

    #[test]
    fn tv_distance_three_squares() {
        let dist = commutator_class_distribution(&Model::Hr(p("3")), 3).unwrap();
        let uniform = uniform_an_distribution(3).unwrap();
        assert_eq!(tv_distance(&dist, &uniform).unwrap(), rat(1, 6));
        assert_eq!(tv_distance(&dist, &dist).unwrap(), BigRational::zero());
        let other = uniform_an_distribution(4).unwrap();
        assert!(tv_distance(&dist, &other).is_err());
    }

    #[test]
    fn tv_bound_diagnostic_at_degree_three() {
        // single nonlinear shape (2,1): chi((3)) = -1, dim 2, bound 1/16
        let bound = tv_upper_bound_any_degree(&p("3")).unwrap();
        assert_eq!(bound, rat(1, 16));
        // squared TV is 1/36, comfortably below
        assert!(rat(1, 36) <= bound);
        // gate: the proven bound starts at degree 5
        assert!(tv_upper_bound(&p("3")).is_err());
        assert!(tv_upper_bound(&p("5")).is_ok());
    }

    #[test]
    fn finite_degree_bound_suite() {
        for n in 2..=7u32 {
            let uniform = uniform_an_distribution(n).unwrap();
            for mu in all_partitions(n) {
                let dist =
                    commutator_class_distribution(&Model::Hr(mu.clone()), n).unwrap();
                let tv = tv_distance(&dist, &uniform).unwrap();
                let tv2 = &tv * &tv;
                let l2 = l2_discrepancy(&mu).unwrap();
                assert!(
                    BigRational::from_integer(BigInt::from(4)) * &tv2 <= l2,
                    "4 TV^2 > l2 for mu={mu}"
                );
                if n >= 5 {
                    let bound = tv_upper_bound(&mu).unwrap();
                    assert!(tv2 <= bound, "TV^2 > bound for mu={mu}");
                    assert!(
                        l2 <= BigRational::from_integer(BigInt::from(4)) * &bound,
                        "l2/4 > bound for mu={mu}"
                    );
                }
                // vertex-count tails
                let pgf = vertex_count_pgf(&mu).unwrap();
                for t in 1..=n {
                    let bound = tail_bound(&mu, t).unwrap();
                    assert!(
                        pgf.upper_tail(t) <= bound,
                        "tail bound fails for mu={mu}, t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn tail_bound_values_and_halving() {
        assert_eq!(tail_bound(&p("3"), 3).unwrap(), rat(5, 8));
        for t in 1..=6 {
            let here = tail_bound(&p("4.2"), t).unwrap();
            let next = tail_bound(&p("4.2"), t + 1).unwrap();
            assert_eq!(next * BigRational::from_integer(BigInt::from(2)), here);
        }
    }

    #[test]
    fn l2_discrepancy_three_squares() {
        assert_eq!(l2_discrepancy(&p("3")).unwrap(), rat(1, 8));
    }

    #[test]
    fn stratum_deviation_certificate() {
        for n in 2..=7u32 {
            for mu in all_partitions(n) {
                let dev = stratum_class_deviation(&mu).unwrap();
                assert!(dev.certified, "certificate failed for mu={mu}");
                // deviations cover exactly the even classes
                assert!(dev.deviations.keys().all(|g| g.is_even_class()));
            }
        }
        let dev = stratum_class_deviation(&p("3")).unwrap();
        assert_eq!(dev.deviations[&p("1.1.1")], rat(1, 6));
        assert_eq!(dev.deviations[&p("3")], rat(1, 6));
    }

    #[test]
    fn moments_against_uniform_reference() {
        // E[C_50] and Var[C_50] stay within 0.2 of ln(n) + gamma and
        // ln(n) + gamma - pi^2/6
        let dist = uniform_an_cycle_count_dist(50).unwrap();
        let mean = dist.expectation().to_f64().unwrap();
        let var = dist.variance().to_f64().unwrap();
        let gamma = 0.5772156649015329f64;
        let ln50 = 50f64.ln();
        assert!((mean - (ln50 + gamma)).abs() < 0.2, "mean {mean}");
        assert!(
            (var - (ln50 + gamma - std::f64::consts::PI.powi(2) / 6.0)).abs() < 0.2,
            "var {var}"
        );
        assert_eq!(dist.eval(&BigRational::one()), BigRational::one());
    }

    #[test]
    fn hr_vertex_mean_tracks_uniform_cycle_mean() {
        for n in 6..=8u32 {
            let hr = vertex_count_pgf(&Partition::new(vec![n])).unwrap();
            let uniform = uniform_an_cycle_count_dist(n).unwrap();
            let diff = (hr.expectation() - uniform.expectation())
                .to_f64()
                .unwrap()
                .abs();
            assert!(diff < 0.5, "n={n}: HR mean strays {diff} from uniform");
        }
    }

    #[test]
    fn tv_decays_for_full_cycles() {
        // TV to uniform A_n for mu = (n) oscillates with the parity of n
        // (the commutator distribution favors classes of matching parity),
        // so the clean decay statement is along each parity
        let tv_at = |n: u32| {
            let mu = Partition::new(vec![n]);
            let dist = commutator_class_distribution(&Model::Hr(mu), n).unwrap();
            let uniform = uniform_an_distribution(n).unwrap();
            tv_distance(&dist, &uniform).unwrap()
        };
        let values: Vec<BigRational> = (3..=8).map(tv_at).collect();
        assert_eq!(values[0], rat(1, 6));
        assert_eq!(values[1], rat(1, 12));
        assert_eq!(values[2], rat(13, 120));
        for n in [3usize, 4, 5, 6] {
            assert!(
                values[n - 1] < values[n - 3],
                "TV({}) not below TV({})",
                n + 2,
                n
            );
        }
    }

    #[test]
    fn dist_moments_evaluates_polynomials() {
        let pgf = vertex_count_pgf(&p("3")).unwrap();
        // E[V^2 - V] with p(x) = x^2 - x
        let poly = vec![rat(0, 1), rat(-1, 1), rat(1, 1)];
        assert_eq!(dist_moments(&pgf, &poly), rat(3, 1));
        assert_eq!(pgf.variance(), rat(1, 1));
    }

    #[test]
    fn degree_gates() {
        let mu = Partition::new(vec![31]);
        assert!(matches!(
            vertex_count_pgf(&mu),
            Err(ExactError::DegreeTooLarge { .. })
        ));
        assert!(matches!(
            commutator_class_distribution(&Model::Standard, 31),
            Err(ExactError::DegreeTooLarge { .. })
        ));
        assert!(matches!(
            commutator_class_distribution(&Model::Hr(p("3")), 4),
            Err(ExactError::WrongSize { .. })
        ));
        // brute force refuses big walks up front
        assert!(matches!(
            brute_force_model(&Model::Standard, 13),
            Err(ExactError::PairBudgetExceeded { .. })
        ));
    }

    #[test]
    fn brute_force_matches_formulas_small() {
        for n in 1..=5u32 {
            let std_bf = brute_force_model(&Model::Standard, n).unwrap();
            let std_dist = commutator_class_distribution(&Model::Standard, n).unwrap();
            assert_eq!(std_bf.class_dist, std_dist, "standard class dist n={n}");
            assert_eq!(
                std_bf.pgf,
                vertex_count_pgf_standard(n).unwrap(),
                "standard pgf n={n}"
            );
            for mu in all_partitions(n) {
                let bf = brute_force_model(&Model::Hr(mu.clone()), n).unwrap();
                let dist =
                    commutator_class_distribution(&Model::Hr(mu.clone()), n).unwrap();
                assert_eq!(bf.class_dist, dist, "class dist mu={mu}");
                assert_eq!(bf.pgf, vertex_count_pgf(&mu).unwrap(), "pgf mu={mu}");
            }
        }
    }

    #[test]
    fn brute_force_extras_are_probabilities() {
        let bf = brute_force_model(&Model::Hr(p("4")), 4).unwrap();
        let total: BigRational = bf.holonomy_fractions.iter().sum();
        assert_eq!(total, BigRational::one());
        assert!(bf.connected_fraction <= BigRational::one());
        assert!(bf.connected_fraction > BigRational::zero());
    }

    #[test]
    fn uniform_class_gap_at_moderate_degrees() {
        // in uniform A_n the most likely cycle type is (n) for odd n and
        // (n-1, 1) for even n, and it leads the runner-up by at least
        // (n-6)/(n(n-3)), with equality when n is odd
        for n in 7..=12u32 {
            let uniform = uniform_an_distribution(n).unwrap();
            let mut ranked: Vec<(&Partition, &BigRational)> =
                uniform.masses.iter().collect();
            ranked.sort_by(|a, b| b.1.cmp(a.1));
            let (top_class, top_mass) = ranked[0];
            let runner_mass = ranked[1].1;
            if n % 2 == 1 {
                assert_eq!(top_class.parts(), &[n], "n={n}");
                assert_eq!(ranked[1].0.parts(), &[n - 3, 2, 1], "n={n}");
            } else {
                assert_eq!(top_class.parts(), &[n - 1, 1], "n={n}");
            }
            let gap = BigRational::new(
                BigInt::from(n - 6),
                BigInt::from(n) * BigInt::from(n - 3),
            );
            let lead = top_mass - runner_mass;
            assert!(lead >= gap, "gap violated at n={n}: lead {lead} < {gap}");
            if n % 2 == 1 {
                assert_eq!(lead, gap, "n={n}");
            }
        }
    }

    #[test]
    fn three_largest_classes_at_moderate_degrees() {
        use crate::partition::largest_classes;
        for n in 7..=12u32 {
            let top = largest_classes(n, 3);
            assert_eq!(top[0].0.parts(), &[n - 1, 1], "n={n}");
            assert_eq!(top[1].0.parts(), &[n], "n={n}");
            assert_eq!(top[2].0.parts(), &[n - 3, 2, 1], "n={n}");
            assert_eq!(top[1].1, factorial(n) / BigUint::from(n));
            assert_eq!(
                top[2].1,
                factorial(n) / (BigUint::from(2u32) * BigUint::from(n - 3))
            );
        }
    }

}
