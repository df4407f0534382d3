//! Moving between `binom([n], ≤k)` for `k >= n/2` and `binom([n], ≤n-k-1)`.
//!
//! Every set `S` with `n-k <= |S| <= k` has its complement in the same
//! range, so those sets can always be covered by the two-set factors
//! `{S, [n] \ S}`. Adding such factors extends a factorization upward;
//! [`repair_to_complement_paired`] rearranges an arbitrary factorization so
//! that they can be removed again.

use std::collections::HashMap;

use crate::combinatorics::{subsets_of_size, LevelSet, Subset};
use crate::error::{Error, Result};
use crate::factorization::{sort_factor, Factorization};
use crate::verifier::{ensure_valid, verify_factorization};

fn check_range(n: usize, k: usize) -> Result<()> {
    if k >= n || 2 * k < n {
        return Err(Error::Precondition(format!(
            "complement pairing needs n/2 <= k <= n-1, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// The pairs `{S, [n] \ S}` with `n-k <= |S| <= k`, each once: `S` runs
/// over the sets containing 1, by size and then in colex order.
pub fn complement_pairs(n: usize, k: usize) -> Vec<[Subset; 2]> {
    let mut out = Vec::new();
    for size in (n - k)..=k {
        for rest in subsets_of_size(n - 1, size - 1) {
            // Shift [n-1] onto {2, ..., n} and add 1.
            let s = Subset::from_bits(rest.bits() << 1 | 1);
            out.push([s, s.complement(n)]);
        }
    }
    out
}

/// Appends every complement pair to a factorization of
/// `binom([n], ≤n-k-1)`, giving one of `binom([n], ≤k)`.
pub fn extend_by_complements(fact: &Factorization, k: usize) -> Result<Factorization> {
    let n = fact.n();
    check_range(n, k)?;
    if *fact.levels() != LevelSet::up_to(n - k - 1) {
        return Err(Error::InvalidFactorization(format!(
            "expected levels {{{}}}, found {{{}}}",
            LevelSet::up_to(n - k - 1),
            fact.levels()
        )));
    }
    ensure_valid(fact)?;
    let mut factors = fact.factors().to_vec();
    factors.extend(complement_pairs(n, k).into_iter().map(Vec::from));
    Ok(Factorization::new(n, LevelSet::up_to(k), factors))
}

fn is_pair(factor: &[Subset], n: usize) -> bool {
    factor.len() == 2 && factor[0].complement(n) == factor[1]
}

/// Rearranges a factorization of `binom([n], ≤k)`, `n/2 <= k <= n-1`, so
/// that every set of size `n-k..=k` lies in a complement pair.
///
/// Sizes run from `k` down to `⌈n/2⌉`, sets of one size in colex order. For
/// a set `S` whose factor `F` is not `{S, U}` (`U = [n] \ S`), the other
/// sets of `F` partition `U`; they trade places with `U` itself, which sits
/// in some other unpaired factor. Returns the repaired factorization and
/// the factorization of `binom([n], ≤n-k-1)` left after removing the pairs.
///
/// With `validate_each_swap` the full factorization is re-verified after
/// every swap.
pub fn repair_to_complement_paired(
    fact: &Factorization,
    validate_each_swap: bool,
) -> Result<(Factorization, Factorization)> {
    let n = fact.n();
    let k = fact.levels().max();
    check_range(n, k)?;
    if *fact.levels() != LevelSet::up_to(k) {
        return Err(Error::InvalidFactorization(format!(
            "expected levels {{1..{k}}}, found {{{}}}",
            fact.levels()
        )));
    }
    ensure_valid(fact)?;

    let mut factors = fact.factors().to_vec();
    let mut home: HashMap<Subset, usize> = HashMap::new();
    for (i, f) in factors.iter().enumerate() {
        for &s in f {
            home.insert(s, i);
        }
    }

    let mut swaps = 0usize;
    for size in (n.div_ceil(2)..=k).rev() {
        for s in subsets_of_size(n, size) {
            let u = s.complement(n);
            let f = home[&s];
            if is_pair(&factors[f], n) {
                continue;
            }
            let g = home[&u];
            debug_assert_ne!(f, g);
            let moved: Vec<Subset> = factors[f].iter().copied().filter(|&t| t != s).collect();
            factors[f] = vec![s, u];
            factors[g].retain(|&t| t != u);
            factors[g].extend(moved.iter().copied());
            sort_factor(&mut factors[f]);
            sort_factor(&mut factors[g]);
            home.insert(u, f);
            for t in moved {
                home.insert(t, g);
            }
            swaps += 1;
            if validate_each_swap {
                let snapshot = Factorization::new(n, fact.levels().clone(), factors.clone());
                let v = verify_factorization(&snapshot)?;
                if let Some(first) = v.first() {
                    return Err(Error::Internal(format!("swap for {s} broke the factorization: {first}")));
                }
            }
        }
    }
    log::debug!("complement repair for n={n}, k={k}: {swaps} swaps");

    let lower = n - k - 1;
    let residue: Vec<Vec<Subset>> = factors
        .iter()
        .filter(|f| f.iter().all(|s| s.len() <= lower))
        .cloned()
        .collect();
    let paired = Factorization::new(n, fact.levels().clone(), factors);
    let residue = Factorization::new(n, LevelSet::up_to(lower), residue);
    Ok((paired, residue))
}

/// Deletes element `n+1` from the one set containing it in every factor of
/// a factorization of `binom([n+1], L')`. Empty sets and factors vanish.
/// The result lives on `[n]` with levels `L' ∪ (L' - 1)` (without 0).
pub fn project_lift(fact: &Factorization) -> Result<Factorization> {
    let m = fact.n();
    if m < 2 {
        return Err(Error::Precondition(format!("cannot project a ground set of size {m}")));
    }
    let mut factors = Vec::with_capacity(fact.len());
    for (i, f) in fact.factors().iter().enumerate() {
        let holders = f.iter().filter(|s| s.contains(m)).count();
        if holders != 1 {
            return Err(Error::InvalidFactorization(format!(
                "factor {i} has {holders} sets containing {m}"
            )));
        }
        let projected: Vec<Subset> = f
            .iter()
            .map(|&s| {
                let mut s = s;
                s.remove(m);
                s
            })
            .filter(|s| !s.is_empty())
            .collect();
        if !projected.is_empty() {
            factors.push(projected);
        }
    }
    let levels = LevelSet::new(
        fact.levels()
            .iter()
            .flat_map(|l| [l, l - 1])
            .filter(|&l| l > 0),
    )?;
    Ok(Factorization::new(m - 1, levels, factors))
}
