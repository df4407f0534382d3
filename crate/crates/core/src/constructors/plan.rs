use std::fmt;

use crate::combinatorics::{LevelSet, MAX_N};
use crate::error::{Error, Result};

/// Which construction realizes a factorable `(n, [k])`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `k = 1`: one factor made of all singletons.
    TrivialSmall,
    /// `k | n`, `n > k(k-2)`: divisible pattern.
    DivGeneric,
    /// `n = k(k-2)`: divisible pattern with the balancing type on `k-2, k-1`.
    DivEdge,
    /// `n ≡ -1`, `k` even: lift to `[n+1]` over the even sizes.
    Minus1EvenLift,
    /// `n ≡ -1`, `k` odd, `t >= (k-3)/2`: lift over the odd sizes.
    Minus1OddLift,
    /// `n ≡ -1`, `k` odd, `t = (k-5)/2`: three-type solution plus `[k-3]`.
    Minus1OddAbc,
    /// `n ≡ -1`, `k` odd, `t <= (k-7)/2`: many-type solution plus a lower family.
    Minus1OddRst,
    /// Divisible pattern for a level set other than `[k]`.
    GeneralLDiv,
    /// `n/2 <= k <= n-1`: factorize `[n-k-1]`, then add complement pairs.
    ComplementReduction,
    /// `k = n`: `[n]` forms its own factor; the rest is `k = n-1`.
    WholeSet,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::TrivialSmall => "TRIVIAL_SMALL",
            Branch::DivGeneric => "DIV_GENERIC",
            Branch::DivEdge => "DIV_EDGE",
            Branch::Minus1EvenLift => "MINUS1_EVEN_LIFT",
            Branch::Minus1OddLift => "MINUS1_ODD_LIFT",
            Branch::Minus1OddAbc => "MINUS1_ODD_ABC",
            Branch::Minus1OddRst => "MINUS1_ODD_RST",
            Branch::GeneralLDiv => "GENERAL_L_DIV",
            Branch::ComplementReduction => "COMPLEMENT_REDUCTION",
            Branch::WholeSet => "WHOLE_SET",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The branch chosen for `(n, [k])` together with its parameters.
///
/// `j` and `r` come from `n = j·k + r` (for `n ≡ -1` the convention is
/// `n = j·k + k - 1`), `t` from `n = (k² - k - 2)/2 + t·k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub branch: Branch,
    pub n: usize,
    pub k: usize,
    pub j: Option<usize>,
    pub t: Option<usize>,
    pub r: Option<usize>,
    /// Ground set and level set of a lifted sub-problem.
    pub lift: Option<(usize, LevelSet)>,
    /// `k'` of the companion lower family `(n, [k'])`.
    pub lower: Option<usize>,
    /// `k'` of the reduced problem `(n, [k'])` under complement pairing.
    pub reduced: Option<usize>,
}

impl ConstructionPlan {
    fn new(branch: Branch, n: usize, k: usize) -> Self {
        Self {
            branch,
            n,
            k,
            j: None,
            t: None,
            r: None,
            lift: None,
            lower: None,
            reduced: None,
        }
    }
}

impl fmt::Display for ConstructionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={}, k={}", self.branch, self.n, self.k)?;
        if let Some(j) = self.j {
            write!(f, ", j={j}")?;
        }
        if let Some(t) = self.t {
            write!(f, ", t={t}")?;
        }
        if let Some((m, l)) = &self.lift {
            write!(f, ", lift to n={m} with L={{{l}}}")?;
        }
        if let Some(l) = self.lower {
            write!(f, ", lower family k'={l}")?;
        }
        if let Some(r) = self.reduced {
            write!(f, ", reduced to k'={r}")?;
        }
        f.write_str(")")
    }
}

/// Selects the construction for `(n, [k])`.
///
/// | range | condition | branch |
/// |---|---|---|
/// | `k = 1` | | `TrivialSmall` |
/// | `k = n` | | `WholeSet`, then `k' = n-1` |
/// | `n/2 <= k < n` | | `ComplementReduction` to `k' = n-k-1` |
/// | `k < n/2`, `k ∣ n` | `n > k(k-2)` | `DivGeneric` |
/// | | `n = k(k-2)` | `DivEdge` |
/// | `k < n/2`, `k ∣ n+1`, `n >= k(⌈k/2⌉-1)-1` | `k` even | `Minus1EvenLift` |
/// | | `k` odd, `t >= (k-3)/2` | `Minus1OddLift` |
/// | | `k` odd, `t = (k-5)/2` | `Minus1OddAbc`, lower `k-3` |
/// | | `k` odd, `t <= (k-7)/2` | `Minus1OddRst`, lower `(k+2t-1)/2` |
///
/// Every other `(n, k)` is rejected with [`Error::NotFactorable`].
pub fn plan(n: usize, k: usize) -> Result<ConstructionPlan> {
    if n == 0 {
        return Err(Error::InvalidGroundSet(n));
    }
    if n > MAX_N {
        return Err(Error::GroundSetTooLarge { n, max: MAX_N });
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k must satisfy 1 <= k <= n, got k={k}, n={n}")));
    }
    if k == 1 {
        return Ok(ConstructionPlan::new(Branch::TrivialSmall, n, k));
    }
    if k == n {
        let mut p = ConstructionPlan::new(Branch::WholeSet, n, k);
        p.reduced = Some(n - 1);
        return Ok(p);
    }
    if 2 * k >= n {
        let mut p = ConstructionPlan::new(Branch::ComplementReduction, n, k);
        p.reduced = Some(n - k - 1);
        return Ok(p);
    }
    let r = n % k;
    if r == 0 {
        let j = n / k - 1;
        if j + 3 < k {
            return Err(Error::NotFactorable(format!(
                "n = {n} is divisible by k = {k} but below k(k-2) = {}",
                k * (k - 2)
            )));
        }
        let branch = if n == k * (k - 2) {
            Branch::DivEdge
        } else {
            Branch::DivGeneric
        };
        let mut p = ConstructionPlan::new(branch, n, k);
        p.j = Some(j);
        p.r = Some(0);
        return Ok(p);
    }
    if r == k - 1 {
        let j = (n + 1) / k - 1;
        if j + 2 < k.div_ceil(2) {
            return Err(Error::NotFactorable(format!(
                "n = {n} ≡ -1 (mod {k}) but below k(⌈k/2⌉-1)-1 = {}",
                (k * (k.div_ceil(2) - 1)) as i64 - 1
            )));
        }
        let mut p;
        if k % 2 == 0 {
            p = ConstructionPlan::new(Branch::Minus1EvenLift, n, k);
            p.lift = Some((n + 1, LevelSet::new((2..=k).step_by(2))?));
        } else {
            let t = (n - (k * k - k - 2) / 2) / k;
            if 2 * t + 3 >= k {
                p = ConstructionPlan::new(Branch::Minus1OddLift, n, k);
                p.lift = Some((n + 1, LevelSet::new((1..=k).step_by(2))?));
            } else if 2 * t + 5 == k {
                p = ConstructionPlan::new(Branch::Minus1OddAbc, n, k);
                p.lower = Some(k - 3);
            } else {
                p = ConstructionPlan::new(Branch::Minus1OddRst, n, k);
                p.lower = Some((k + 2 * t - 1) / 2);
            }
            p.t = Some(t);
        }
        p.j = Some(j);
        p.r = Some(r);
        return Ok(p);
    }
    Err(Error::NotFactorable(format!(
        "n = {n} ≡ {r} (mod {k}), neither 0 nor -1"
    )))
}

/// Plan for the divisible pattern on a general level set.
pub fn plan_general_div(n: usize, levels: &LevelSet) -> ConstructionPlan {
    let k = levels.max();
    let mut p = ConstructionPlan::new(Branch::GeneralLDiv, n, k);
    if k > 0 && n % k == 0 {
        p.j = Some(n / k - 1);
        p.r = Some(0);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        assert_eq!(plan(12, 3).unwrap().branch, Branch::DivGeneric);
        assert_eq!(plan(24, 6).unwrap().branch, Branch::DivEdge);
        assert_eq!(plan(11, 3).unwrap().branch, Branch::Minus1OddLift);
        assert_eq!(plan(9, 2).unwrap().branch, Branch::Minus1EvenLift);
        assert_eq!(plan(20, 7).unwrap().branch, Branch::Minus1OddRst);
        assert_eq!(plan(27, 7).unwrap().branch, Branch::Minus1OddAbc);
        assert_eq!(plan(53, 9).unwrap().branch, Branch::Minus1OddAbc);
        assert_eq!(plan(6, 3).unwrap().branch, Branch::ComplementReduction);
        assert_eq!(plan(6, 3).unwrap().reduced, Some(2));
        assert_eq!(plan(5, 5).unwrap().branch, Branch::WholeSet);
        assert_eq!(plan(5, 1).unwrap().branch, Branch::TrivialSmall);
        assert!(matches!(plan(18, 6), Err(Error::NotFactorable(_))));
        assert!(matches!(plan(7, 3), Err(Error::NotFactorable(_))));
        assert!(matches!(plan(26, 9), Err(Error::NotFactorable(_))));
        assert!(matches!(plan(4, 5), Err(Error::InvalidArgument(_))));
        assert!(matches!(plan(65, 3), Err(Error::GroundSetTooLarge { .. })));
    }
}
