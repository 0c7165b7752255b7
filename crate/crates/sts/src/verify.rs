//! Self-verification suites.
//!
//! Each suite re-derives a family of facts the rest of the crate depends on
//! and reports one [`Check`] per fact: character orthogonality, agreement of
//! the exact distributions with brute-force enumeration, the finite-degree
//! bound chain, and the nine-square reference surface worked out by hand.
//! The CLI surfaces these as `verify --suite ...`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::character::{character_column, dimension, CharColumn};
use crate::exact::{
    brute_force_model, commutator_class_distribution, l2_discrepancy,
    stratum_class_deviation, tail_bound, tv_distance, tv_upper_bound,
    uniform_an_distribution, vertex_count_pgf, vertex_count_pgf_standard, ExactError,
    Model,
};
use crate::partition::{all_partitions, factorial, largest_classes, Partition};
use crate::perm::parse_cycles;
use crate::surface::{Holonomy, SquareTiledSurface};

/// Outcome of one verified fact.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// The nine-square surface used as the crate's worked reference example:
/// `sigma = (1,2)(3,4,5)(6,7)(8,9)`, `tau = (2,3)(5,6,8)(7,9)`.
pub fn suite_reference_surface() -> Vec<Check> {
    let sigma = parse_cycles("(1,2)(3,4,5)(6,7)(8,9)", 9).expect("valid fixture");
    let tau = parse_cycles("(2,3)(5,6,8)(7,9)", 9).expect("valid fixture");
    let report = SquareTiledSurface::new(sigma, tau).expect("equal degrees").analyze();

    let mut checks = Vec::new();
    let commutator = report.commutator.to_string();
    checks.push(Check::new(
        "reference surface: commutator",
        commutator == "(1,4)(2,7,3)(5,6)",
        format!("computed {commutator}"),
    ));
    checks.push(Check::new(
        "reference surface: vertex profile",
        report.vertex_profile.to_string() == "3.2.2.1.1" && report.vertex_count == 5,
        format!("profile {} with {} vertices", report.vertex_profile, report.vertex_count),
    ));
    checks.push(Check::new(
        "reference surface: topology",
        report.connected && report.genus == 3,
        format!("connected={}, genus={}", report.connected, report.genus),
    ));
    checks.push(Check::new(
        "reference surface: stratum",
        report.stratum.orders_string() == "2.1.1" && report.stratum.marked_points == 2,
        format!(
            "stratum {} with {} marked points",
            report.stratum.orders_string(),
            report.stratum.marked_points
        ),
    ));
    let cylinders: Vec<Vec<u32>> =
        report.cylinders.iter().map(|c| c.squares.clone()).collect();
    checks.push(Check::new(
        "reference surface: horizontal cylinders",
        cylinders == vec![vec![1, 2], vec![3, 4, 5], vec![6, 7, 8, 9]]
            && report.cylinders[2].circumference == 2
            && report.cylinders[2].height == 2,
        format!("cylinders {cylinders:?}"),
    ));
    checks.push(Check::new(
        "reference surface: holonomy",
        report.holonomy == Holonomy::VisibilityCertified,
        format!("classified {}", report.holonomy.letter()),
    ));
    checks
}

/// Exact distributions against exhaustive enumeration of every gluing pair,
/// for the standard model and every horizontal class, degree by degree.
pub fn suite_oracle(max_n: u32) -> Result<Vec<Check>, ExactError> {
    let mut checks = Vec::new();
    for n in 1..=max_n {
        let mut pass = true;
        let mut mismatches: Vec<String> = Vec::new();
        let mut pairs: u128 = 0;

        let order = factorial(n);
        let std_bf = brute_force_model(&Model::Standard, n)?;
        pairs += u128::try_from(&order * &order).expect("budget-checked");
        if std_bf.class_dist != commutator_class_distribution(&Model::Standard, n)? {
            pass = false;
            mismatches.push("standard class law".into());
        }
        if std_bf.pgf != vertex_count_pgf_standard(n)? {
            pass = false;
            mismatches.push("standard vertex law".into());
        }

        let mut classes = 0u32;
        for mu in all_partitions(n) {
            classes += 1;
            let bf = brute_force_model(&Model::Hr(mu.clone()), n)?;
            pairs += u128::try_from(mu.class_size() * &order).expect("budget-checked");
            if bf.class_dist != commutator_class_distribution(&Model::Hr(mu.clone()), n)? {
                pass = false;
                mismatches.push(format!("class law for mu={mu}"));
            }
            if bf.pgf != vertex_count_pgf(&mu)? {
                pass = false;
                mismatches.push(format!("vertex law for mu={mu}"));
            }
        }

        let detail = if pass {
            format!(
                "standard model and {classes} horizontal classes match enumeration of {pairs} pairs"
            )
        } else {
            format!("mismatches: {}", mismatches.join(", "))
        };
        checks.push(Check::new(format!("oracle: degree {n}"), pass, detail));
    }
    Ok(checks)
}

/// First and second orthogonality of the irreducible characters, plus
/// dimension consistency, degree by degree.
pub fn suite_orthogonality(max_n: u32) -> Vec<Check> {
    let mut checks = Vec::new();
    for n in 1..=max_n {
        let shapes: Vec<Partition> = all_partitions(n).collect();
        let columns: Vec<CharColumn> = shapes.iter().map(character_column).collect();
        let order = BigInt::from(factorial(n));

        // rows indexed by shape: chi[i][j] = chi^{shapes[i]}(class shapes[j])
        let chi: Vec<Vec<BigInt>> = shapes
            .iter()
            .map(|lambda| columns.iter().map(|col| col.values[lambda].clone()).collect())
            .collect();
        let class_sizes: Vec<BigInt> =
            shapes.iter().map(|g| BigInt::from(g.class_size())).collect();

        let mut rows_ok = true;
        for i in 0..shapes.len() {
            for j in i..shapes.len() {
                let sum: BigInt = (0..shapes.len())
                    .map(|k| &class_sizes[k] * &chi[i][k] * &chi[j][k])
                    .sum();
                let expected = if i == j { order.clone() } else { BigInt::zero() };
                if sum != expected {
                    rows_ok = false;
                }
            }
        }
        checks.push(Check::new(
            format!("row orthogonality: degree {n}"),
            rows_ok,
            format!("{} shape pairs", shapes.len() * (shapes.len() + 1) / 2),
        ));

        let mut cols_ok = true;
        for a in 0..shapes.len() {
            for b in a..shapes.len() {
                let sum: BigInt = (0..shapes.len()).map(|i| &chi[i][a] * &chi[i][b]).sum();
                let expected = if a == b {
                    &order / &class_sizes[a]
                } else {
                    BigInt::zero()
                };
                if sum != expected {
                    cols_ok = false;
                }
            }
        }
        checks.push(Check::new(
            format!("column orthogonality: degree {n}"),
            cols_ok,
            format!("{} class pairs", shapes.len() * (shapes.len() + 1) / 2),
        ));

        let identity = Partition::new(vec![1; n as usize]);
        let id_index = shapes.iter().position(|g| g == &identity).expect("present");
        let mut dims_ok = true;
        let mut dim_square_sum = BigInt::zero();
        for (i, lambda) in shapes.iter().enumerate() {
            let dim = BigInt::from(dimension(lambda));
            if chi[i][id_index] != dim {
                dims_ok = false;
            }
            dim_square_sum += &dim * &dim;
        }
        if dim_square_sum != order {
            dims_ok = false;
        }
        checks.push(Check::new(
            format!("dimensions: degree {n}"),
            dims_ok,
            "hook-length values match identity column; squares sum to n!",
        ));
    }
    checks
}

/// The finite-degree bound chain and class-size orderings.
pub fn suite_bounds(max_n: u32) -> Result<Vec<Check>, ExactError> {
    let mut checks = Vec::new();
    let four = BigRational::from_integer(BigInt::from(4));

    for n in 2..=max_n {
        let uniform = uniform_an_distribution(n)?;
        let mut tails_ok = true;
        let mut chain_ok = true;
        let mut cert_ok = true;
        for mu in all_partitions(n) {
            let dist = commutator_class_distribution(&Model::Hr(mu.clone()), n)?;
            let tv = tv_distance(&dist, &uniform)?;
            let tv2 = &tv * &tv;
            let l2 = l2_discrepancy(&mu)?;
            if &four * &tv2 > l2 {
                chain_ok = false;
            }
            if n >= 5 {
                let bound = tv_upper_bound(&mu)?;
                if tv2 > bound || l2 > &four * &bound {
                    chain_ok = false;
                }
            }
            let pgf = vertex_count_pgf(&mu)?;
            for t in 1..=n {
                if pgf.upper_tail(t) > tail_bound(&mu, t)? {
                    tails_ok = false;
                }
            }
            if !stratum_class_deviation(&mu)?.certified {
                cert_ok = false;
            }
        }
        let class_count = all_partitions(n).count();
        checks.push(Check::new(
            format!("vertex tail bounds: degree {n}"),
            tails_ok,
            format!("{class_count} classes, thresholds 1..={n}"),
        ));
        let chain_name = if n >= 5 {
            "bound chain 4*TV^2 <= l2 <= 4*bound"
        } else {
            "bound chain 4*TV^2 <= l2"
        };
        checks.push(Check::new(
            format!("{chain_name}: degree {n}"),
            chain_ok,
            format!("{class_count} classes"),
        ));
        checks.push(Check::new(
            format!("per-class deviation certificates: degree {n}"),
            cert_ok,
            format!("{class_count} classes"),
        ));
    }

    // class-size structure at moderate degrees (independent of max_n; these
    // are cheap and anchor the mixing-rate constants)
    let mut ordering_ok = true;
    let mut gap_ok = true;
    for n in 7..=12u32 {
        let top = largest_classes(n, 3);
        let expected: Vec<Vec<u32>> =
            vec![vec![n - 1, 1], vec![n], vec![n - 3, 2, 1]];
        if top.iter().map(|(q, _)| q.parts().to_vec()).collect::<Vec<_>>() != expected {
            ordering_ok = false;
        }

        let uniform = uniform_an_distribution(n)?;
        let mut ranked: Vec<(&Partition, &BigRational)> = uniform.masses.iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(a.1));
        let lead = ranked[0].1 - ranked[1].1;
        let gap = BigRational::new(BigInt::from(n - 6), BigInt::from(n) * BigInt::from(n - 3));
        if lead < gap || lead.is_negative() {
            gap_ok = false;
        }
    }
    checks.push(Check::new(
        "three largest classes: degrees 7..=12",
        ordering_ok,
        "(n-1,1), (n), (n-3,2,1) in that order",
    ));
    checks.push(Check::new(
        "uniform modal-class gap: degrees 7..=12",
        gap_ok,
        "lead over runner-up at least (n-6)/(n(n-3))",
    ));

    let mut coalesce_ok = true;
    for n in 4..=12u32 {
        for q in all_partitions(n) {
            if q.num_parts() < 2 || q.parts()[1] < 2 {
                continue;
            }
            let mut merged = q.parts().to_vec();
            let second = merged.remove(1);
            merged[0] += second;
            if Partition::new(merged).class_size() < q.class_size() {
                coalesce_ok = false;
            }
        }
    }
    checks.push(Check::new(
        "part coalescing grows classes: degrees 4..=12",
        coalesce_ok,
        "merging the two largest parts (second >= 2) never shrinks the class",
    ));

    Ok(checks)
}
