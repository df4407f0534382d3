//! Explicit non-negative integer solutions of the counting system.
//!
//! Each constructor returns exact multiplicities and checks its own result
//! against the system before handing it out; a failed self-check is an
//! [`Error::Internal`], never a silently wrong answer.

mod div;
mod minus1;
mod odd;
mod plan;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::combinatorics::{LevelSet, TypeVector};
use crate::error::{Error, Result};
use crate::system::{residual, SolutionVector};

pub use div::{construct_div, construct_general_l_div};
pub use minus1::construct_minus1;
pub use odd::{abc_solution, AbcSolution, RstSolution};
pub use plan::{plan, plan_general_div, Branch, ConstructionPlan};

/// What a constructor hands to the factorization pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// A solution of the requested system itself.
    Direct(SolutionVector),
    /// A solution on the ground set `[n+1]` with level set `levels`;
    /// factorize it there and delete element `n+1` from every factor.
    Lifted { levels: LevelSet, x: SolutionVector },
    /// A solution on `[n]` for the upper `levels` only. The remaining
    /// sizes `1..=lower` are covered by a separate construction for
    /// `(n, [lower])`.
    Split {
        levels: LevelSet,
        x: SolutionVector,
        lower: usize,
    },
}

/// `λ` of width `k` from `(level, multiplicity)` pairs; rejects negative
/// or out-of-range entries.
pub(crate) fn make_type(k: usize, entries: &[(usize, i64)]) -> Result<TypeVector> {
    let mut lambda = vec![0u32; k];
    for &(level, v) in entries {
        if level == 0 || level > k {
            return Err(Error::Internal(format!("level {level} outside 1..={k}")));
        }
        let v = u32::try_from(v)
            .map_err(|_| Error::NotApplicable(format!("part count {v} on level {level} is negative")))?;
        lambda[level - 1] += v;
    }
    Ok(TypeVector::new(lambda))
}

pub(crate) fn to_biguint(v: &BigInt, what: &str) -> Result<BigUint> {
    if v.is_negative() {
        return Err(Error::NotApplicable(format!("{what} = {v} is negative")));
    }
    Ok(v.magnitude().clone())
}

/// Exact quotient or an internal error naming the failed division.
pub(crate) fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt> {
    if den.is_zero() || !(num % den).is_zero() {
        return Err(Error::Internal(format!("{what}: {num} is not divisible by {den}")));
    }
    Ok(num / den)
}

/// Fails unless `x` solves the system for `(n, levels)` exactly.
pub(crate) fn ensure_solves(n: usize, levels: &LevelSet, x: &SolutionVector) -> Result<()> {
    let r = residual(n, levels, x)?;
    if let Some(i) = r.iter().position(|v| !v.is_zero()) {
        return Err(Error::Internal(format!(
            "constructed solution for n={n}, L={{{levels}}} misses level {} by {}",
            i + 1,
            r[i]
        )));
    }
    Ok(())
}
