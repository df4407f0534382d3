use super::div::div_pattern;
use super::odd::{abc_solution, RstSolution};
use super::Construction;
use crate::combinatorics::LevelSet;
use crate::error::{Error, Result};

/// Construction for `L = [k]` with `n ≡ -1 (mod k)`, `n > 2k` and
/// `n >= k(⌈k/2⌉ - 1) - 1`.
///
/// * even `k`: the divisible pattern on `[n+1]` over the even sizes
///   `{2, 4, …, k}`; deleting `n+1` afterwards recovers every size.
/// * odd `k`, `n + 1 >= k(k-2)`: the same lift over `{1, 3, …, k-2, k}`.
/// * odd `k`, `n = k² - 3k - 1`: the three-type solution of the top three
///   levels, plus `(n, [k-3])`.
/// * otherwise: the many-type solution of the levels from
///   `(k+1)/2 + t` to `k`, plus `(n, [(k+2t-1)/2])`.
pub fn construct_minus1(n: usize, k: usize) -> Result<Construction> {
    let ceil_half = k.div_ceil(2);
    if k < 2 || (n + 1) % k != 0 || n <= 2 * k || n + 1 < k * ceil_half.saturating_sub(1) {
        return Err(Error::Precondition(format!(
            "minus-one construction needs n ≡ -1 (mod k), n > 2k and n >= k(⌈k/2⌉-1)-1; got n={n}, k={k}"
        )));
    }
    if k % 2 == 0 {
        return lift(n, k, 2);
    }
    let t = (n - (k * k - k - 2) / 2) / k;
    if 2 * t + 3 >= k {
        lift(n, k, 1)
    } else if 2 * t + 5 == k {
        let s = abc_solution(k)?;
        Ok(Construction::Split {
            levels: s.levels(),
            x: s.to_solution()?,
            lower: k - 3,
        })
    } else {
        let s = RstSolution::compute(k, t)?;
        Ok(Construction::Split {
            levels: s.levels(),
            x: s.to_solution()?,
            lower: s.lower_k(),
        })
    }
}

/// Divisible pattern on `[n+1]` over the levels `first, first+2, …, k`.
fn lift(n: usize, k: usize, first: usize) -> Result<Construction> {
    let levels = LevelSet::new((first..=k).step_by(2))?;
    let lower: Vec<usize> = levels.iter().filter(|&l| l != k).collect();
    let x = div_pattern(n + 1, k, &lower, None, &levels).map_err(|e| match e {
        Error::NotApplicable(m) => Error::Internal(format!("lifted pattern for n={n}, k={k}: {m}")),
        other => other,
    })?;
    Ok(Construction::Lifted { levels, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_lift_for_eleven_by_three() {
        match construct_minus1(11, 3).unwrap() {
            Construction::Lifted { levels, .. } => assert_eq!(levels.levels(), &[1, 3]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn even_lift_for_nine_by_two() {
        match construct_minus1(9, 2).unwrap() {
            Construction::Lifted { levels, x } => {
                assert_eq!(levels.levels(), &[2]);
                assert_eq!(x.support_len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn branches_for_k7() {
        // t = 0: many-type solution, lower family [3].
        match construct_minus1(20, 7).unwrap() {
            Construction::Split { levels, lower, .. } => {
                assert_eq!(levels.levels(), &[4, 5, 6, 7]);
                assert_eq!(lower, 3);
            }
            other => panic!("{other:?}"),
        }
        // t = 1: three-type solution, lower family [4].
        match construct_minus1(27, 7).unwrap() {
            Construction::Split { levels, lower, .. } => {
                assert_eq!(levels.levels(), &[5, 6, 7]);
                assert_eq!(lower, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(construct_minus1(34, 7).unwrap(), Construction::Lifted { .. }));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(construct_minus1(12, 3).is_err());
        assert!(construct_minus1(5, 3).is_err());
        assert!(construct_minus1(13, 7).is_err());
    }
}
