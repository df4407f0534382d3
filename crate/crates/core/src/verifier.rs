//! Independent checks of factorizations and solutions.
//!
//! Only the value being checked and `(n, L)` are consulted, never any state
//! of the code that produced it.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::combinatorics::{factor_count, LevelSet, PascalTable, Subset, MAX_N};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::factorization::Factorization;
use crate::system::{evaluate_solution, target_vector, LinearSystem, SolutionVector};

/// Families larger than this are refused rather than counted.
pub const MAX_FAMILY: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two sets of one factor intersect.
    Overlap { factor: usize, set: Subset },
    /// The union of a factor misses these elements.
    Uncovered { factor: usize, missing: Subset },
    /// A set is empty, too large for `[n]`, or of a size outside `L`.
    BadSize { factor: usize, set: Subset },
    /// A set appears `count > 1` times over all factors.
    Duplicate { set: Subset, count: u32 },
    /// A set of the family appears in no factor.
    Missing { set: Subset },
    FactorCount { expected: BigUint, got: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { factor, set } => write!(f, "factor {factor}: {set} overlaps another set"),
            Violation::Uncovered { factor, missing } => write!(f, "factor {factor}: elements {missing} uncovered"),
            Violation::BadSize { factor, set } => write!(f, "factor {factor}: {set} has a size outside L"),
            Violation::Duplicate { set, count } => write!(f, "{set} appears {count} times"),
            Violation::Missing { set } => write!(f, "{set} appears in no factor"),
            Violation::FactorCount { expected, got } => write!(f, "{got} factors, expected {expected}"),
        }
    }
}

/// Rank of `s` among the `|s|`-subsets of `[n]` in colex order.
fn colex_rank(s: Subset, pascal: &PascalTable) -> usize {
    s.elements()
        .enumerate()
        .map(|(i, e)| pascal.get(e as i64 - 1, i as i64 + 1) as usize)
        .sum()
}

fn factor_violations(n: usize, levels: &LevelSet, index: usize, factor: &[Subset]) -> Vec<Violation> {
    let mut out = Vec::new();
    let full = Subset::full(n);
    let mut union = Subset::EMPTY;
    for &s in factor {
        if s.is_empty() || !s.is_subset_of(full) || !levels.contains(s.len()) {
            out.push(Violation::BadSize { factor: index, set: s });
        }
        if !union.is_disjoint(s) {
            out.push(Violation::Overlap { factor: index, set: s });
        }
        union = union.union(s);
    }
    if union.bits() & full.bits() != full.bits() {
        out.push(Violation::Uncovered {
            factor: index,
            missing: Subset::from_bits(full.bits() & !union.bits()),
        });
    }
    out
}

pub fn verify_factorization(fact: &Factorization) -> Result<Vec<Violation>> {
    verify_factorization_with(fact, Execution::default())
}

/// Every violation found, in a fixed order: per-factor problems by factor,
/// then duplicates and missing sets by level and colex order, then the
/// factor count. An empty list means the factorization is valid.
pub fn verify_factorization_with(fact: &Factorization, exec: Execution) -> Result<Vec<Violation>> {
    let (n, levels) = (fact.n(), fact.levels());
    if levels.is_empty() && (1..=MAX_N).contains(&n) {
        // The empty family: only the empty factorization is valid.
        return Ok(match fact.len() {
            0 => Vec::new(),
            got => vec![Violation::FactorCount {
                expected: BigUint::zero(),
                got,
            }],
        });
    }
    levels.check_for(n)?;
    let pascal = PascalTable::new(n);
    let family: u128 = levels.iter().map(|l| pascal.get(n as i64, l as i64)).sum();
    if family > MAX_FAMILY {
        return Err(Error::LimitExceeded(format!(
            "family of {family} sets exceeds the verification limit of {MAX_FAMILY}"
        )));
    }

    let factors = fact.factors();
    let mut violations: Vec<Violation> = exec
        .map_range(factors.len(), |i| factor_violations(n, levels, i, &factors[i]))
        .into_iter()
        .flatten()
        .collect();

    // One counter array per level, indexed by colex rank.
    let mut counts: Vec<Vec<u32>> = (0..=n)
        .map(|l| {
            if levels.contains(l) {
                vec![0; pascal.get(n as i64, l as i64) as usize]
            } else {
                Vec::new()
            }
        })
        .collect();
    let full = Subset::full(n);
    for s in fact.sets() {
        if s.is_subset_of(full) && levels.contains(s.len()) {
            counts[s.len()][colex_rank(s, &pascal)] += 1;
        }
    }
    for l in levels.iter() {
        let mut sets = crate::combinatorics::subsets_of_size(n, l);
        for &c in &counts[l] {
            let s = sets.next().expect("one counter per subset");
            match c {
                0 => violations.push(Violation::Missing { set: s }),
                1 => {}
                _ => violations.push(Violation::Duplicate { set: s, count: c }),
            }
        }
    }

    let expected = factor_count(n, levels);
    if expected != BigUint::from(factors.len()) {
        violations.push(Violation::FactorCount {
            expected,
            got: factors.len(),
        });
    }
    Ok(violations)
}

/// Fails with [`Error::InvalidFactorization`] listing the first few
/// violations, if there are any.
pub fn ensure_valid(fact: &Factorization) -> Result<()> {
    let v = verify_factorization(fact)?;
    if v.is_empty() {
        return Ok(());
    }
    let shown: Vec<String> = v.iter().take(5).map(ToString::to_string).collect();
    Err(Error::InvalidFactorization(format!(
        "{} violation(s): {}",
        v.len(),
        shown.join("; ")
    )))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionViolation {
    /// `(A^T x)_level` differs from `b_level`.
    Level { level: usize, got: BigInt, expected: BigUint },
    /// A stored vector is not a row of the system.
    NotAType(String),
}

impl fmt::Display for SolutionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionViolation::Level { level, got, expected } => {
                write!(f, "level {level}: {got} sets covered, expected {expected}")
            }
            SolutionViolation::NotAType(m) => write!(f, "{m}"),
        }
    }
}

/// Violations of `A^T x = b` by level. Non-negativity holds by
/// construction of [`SolutionVector`].
pub fn verify_solution(sys: &LinearSystem, x: &SolutionVector) -> Vec<SolutionViolation> {
    let r = match evaluate_solution(sys, x) {
        Ok(r) => r,
        Err(e) => return vec![SolutionViolation::NotAType(e.to_string())],
    };
    let b = target_vector(sys.n(), sys.levels());
    r.into_iter()
        .zip(b)
        .enumerate()
        .filter(|(_, (d, _))| !d.is_zero())
        .map(|(i, (d, b))| SolutionViolation::Level {
            level: i + 1,
            got: d + BigInt::from(b.clone()),
            expected: b,
        })
        .collect()
}

/// `|binom([n], L)|`.
pub fn family_size(n: usize, levels: &LevelSet) -> u128 {
    let pascal = PascalTable::new(n);
    levels.iter().map(|l| pascal.get(n as i64, l as i64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::TypeVector;
    use crate::constructors::construct_div;
    use crate::system::build_system;

    fn set(e: &[usize]) -> Subset {
        Subset::from_elements(e.iter().copied()).unwrap()
    }

    fn k4() -> Factorization {
        Factorization::new(
            4,
            LevelSet::new([2]).unwrap(),
            vec![
                vec![set(&[1, 2]), set(&[3, 4])],
                vec![set(&[1, 3]), set(&[2, 4])],
                vec![set(&[1, 4]), set(&[2, 3])],
            ],
        )
    }

    #[test]
    fn matchings_of_k4_pass() {
        assert!(verify_factorization(&k4()).unwrap().is_empty());
    }

    #[test]
    fn duplicate_and_missing_reported_together() {
        let mut factors = k4().into_factors();
        factors[2] = vec![set(&[1, 2]), set(&[3, 4])];
        let f = Factorization::new(4, LevelSet::new([2]).unwrap(), factors);
        let v = verify_factorization(&f).unwrap();
        assert!(v.contains(&Violation::Duplicate { set: set(&[1, 2]), count: 2 }));
        assert!(v.contains(&Violation::Duplicate { set: set(&[3, 4]), count: 2 }));
        assert!(v.contains(&Violation::Missing { set: set(&[1, 4]) }));
        assert!(v.contains(&Violation::Missing { set: set(&[2, 3]) }));
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn partition_failures() {
        let f = Factorization::new(
            4,
            LevelSet::new([2]).unwrap(),
            vec![vec![set(&[1, 2]), set(&[2, 3])], vec![set(&[1, 2, 3])]],
        );
        let v = verify_factorization(&f).unwrap();
        assert!(v.iter().any(|x| matches!(x, Violation::Overlap { factor: 0, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::Uncovered { factor: 0, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::BadSize { factor: 1, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::FactorCount { got: 2, .. })));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut factors = k4().into_factors();
        factors.pop();
        let f = Factorization::new(4, LevelSet::new([2]).unwrap(), factors);
        assert_eq!(
            verify_factorization_with(&f, Execution::Sequential).unwrap(),
            verify_factorization_with(&f, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn solutions() {
        let sys = build_system(12, &LevelSet::up_to(3)).unwrap();
        let x = construct_div(12, 3).unwrap();
        assert!(verify_solution(&sys, &x).is_empty());

        let mut y = x.clone();
        let t = TypeVector::new(vec![0, 0, 4]);
        y.set(t.clone(), x.get(&t) - 1u32);
        let v = verify_solution(&sys, &y);
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], SolutionViolation::Level { level: 3, .. }));

        let bad = build_system(7, &LevelSet::up_to(3)).unwrap();
        assert_eq!(verify_solution(&bad, &SolutionVector::new()).len(), 3);
    }
}
