use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use super::{ensure_solves, exact_div, make_type, to_biguint};
use crate::combinatorics::{binomial, LevelSet, TypeVector};
use crate::error::{Error, Result};
use crate::system::SolutionVector;

/// The divisible pattern on `[n]` with `k | n`: for each level `i` in
/// `lower`, the type with `k/gcd(k,i)` parts of size `i` and
/// `n/k - i/gcd(k,i)` parts of size `k`, used `C(n,i) / (k/gcd(k,i))`
/// times; `extra` (a type without `k`-parts) is added as is; the pure type
/// `(0,…,0,n/k)` covers what is left of level `k`.
pub(crate) fn div_pattern(
    n: usize,
    k: usize,
    lower: &[usize],
    extra: Option<(TypeVector, BigUint)>,
    target: &LevelSet,
) -> Result<SolutionVector> {
    if k == 0 || n % k != 0 {
        return Err(Error::Internal(format!("divisible pattern needs {k} | {n}")));
    }
    let q = (n / k) as i64;
    let mut x = SolutionVector::new();
    let mut used_top = BigInt::from(0);
    for &i in lower {
        let g = k.gcd(&i);
        let parts = k / g;
        let top = q - (i / g) as i64;
        let t = make_type(k, &[(i, parts as i64), (k, top)])?;
        let mult = exact_div(
            &BigInt::from(binomial(n as i64, i as i64)),
            &BigInt::from(parts),
            &format!("multiplicity of level {i}"),
        )?;
        used_top += &mult * top;
        x.add(t, to_biguint(&mult, "multiplicity")?);
    }
    if let Some((t, mult)) = extra {
        used_top += BigInt::from(mult.clone()) * t.get(k);
        x.add(t, mult);
    }
    let left = BigInt::from(binomial(n as i64, k as i64)) - used_top;
    let left = to_biguint(&left, &format!("remainder on level {k}"))?;
    let pure = exact_div(&BigInt::from(left), &BigInt::from(q), "remainder on the top level")?;
    x.add(make_type(k, &[(k, q)])?, to_biguint(&pure, "pure multiplicity")?);
    ensure_solves(n, target, &x)?;
    Ok(x)
}

/// Solution for `L = [k]` when `k | n`, `n > 2k` and `n >= k(k-2)`.
///
/// For `n = k² - 2k` the levels `k-2` and `k-1` are covered together by
/// the type with one `(k-2)`-part and `k-2` parts of size `k-1`.
pub fn construct_div(n: usize, k: usize) -> Result<SolutionVector> {
    if k == 0 || n % k != 0 || n <= 2 * k || n < k * k.saturating_sub(2) {
        return Err(Error::Precondition(format!(
            "divisible construction needs k | n, n > 2k and n >= k(k-2); got n={n}, k={k}"
        )));
    }
    let levels = LevelSet::up_to(k);
    if n == k * k - 2 * k {
        let lower: Vec<usize> = (1..=k - 3).collect();
        let edge = make_type(k, &[(k - 2, 1), (k - 1, (k - 2) as i64)])?;
        let mult = binomial(n as i64, (k - 2) as i64);
        if &mult * BigUint::from(k - 2) != binomial(n as i64, (k - 1) as i64) {
            return Err(Error::Internal("edge type does not balance levels k-2 and k-1".into()));
        }
        div_pattern(n, k, &lower, Some((edge, mult)), &levels)
    } else {
        let lower: Vec<usize> = (1..k).collect();
        div_pattern(n, k, &lower, None, &levels)
    }
}

/// The divisible pattern for an arbitrary level set with `k = max L`
/// dividing `n`. Returns [`Error::NotApplicable`] when some multiplicity
/// would be negative, i.e. `n` is not yet large enough for this pattern.
pub fn construct_general_l_div(n: usize, levels: &LevelSet) -> Result<SolutionVector> {
    levels.check_for(n)?;
    let k = levels.max();
    if n % k != 0 {
        return Err(Error::Precondition(format!("{k} does not divide {n}")));
    }
    let lower: Vec<usize> = levels.iter().filter(|&l| l != k).collect();
    div_pattern(n, k, &lower, None, levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(x: &SolutionVector, lambda: &[u32]) -> BigUint {
        x.get(&TypeVector::new(lambda.to_vec()))
    }

    #[test]
    fn twelve_by_three() {
        let x = construct_div(12, 3).unwrap();
        assert_eq!(x.support_len(), 3);
        assert_eq!(entry(&x, &[3, 0, 3]), BigUint::from(4u32));
        assert_eq!(entry(&x, &[0, 3, 2]), BigUint::from(22u32));
        assert_eq!(entry(&x, &[0, 0, 4]), BigUint::from(41u32));
    }

    #[test]
    fn eight_by_two() {
        let x = construct_div(8, 2).unwrap();
        assert_eq!(entry(&x, &[2, 3]), BigUint::from(4u32));
        assert_eq!(entry(&x, &[0, 4]), BigUint::from(4u32));
    }

    #[test]
    fn edge_case_uses_balancing_type() {
        let x = construct_div(24, 6).unwrap();
        assert_eq!(entry(&x, &[0, 0, 0, 1, 4, 0]), binomial(24, 4));
        ensure_solves(24, &LevelSet::up_to(6), &x).unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(construct_div(18, 6), Err(Error::Precondition(_))));
        assert!(matches!(construct_div(13, 3), Err(Error::Precondition(_))));
        assert!(matches!(construct_div(6, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn general_levels() {
        let x = construct_general_l_div(12, &LevelSet::new([2, 4]).unwrap()).unwrap();
        assert_eq!(entry(&x, &[0, 2, 0, 2]), BigUint::from(33u32));
        assert_eq!(entry(&x, &[0, 0, 0, 3]), BigUint::from(143u32));

        let x = construct_general_l_div(8, &LevelSet::new([1, 4]).unwrap()).unwrap();
        assert_eq!(entry(&x, &[4, 0, 0, 1]), BigUint::from(2u32));
        assert_eq!(entry(&x, &[0, 0, 0, 2]), BigUint::from(34u32));

        let x = construct_general_l_div(6, &LevelSet::new([3]).unwrap()).unwrap();
        assert_eq!(entry(&x, &[0, 0, 2]), BigUint::from(10u32));
    }

    #[test]
    fn general_levels_too_small() {
        // Six 5-sets do not fit into [6].
        let r = construct_general_l_div(6, &LevelSet::new([5, 6]).unwrap());
        assert!(matches!(r, Err(Error::NotApplicable(_))), "{r:?}");
    }
}
