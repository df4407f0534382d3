//! Upper-level solutions for odd `k` with `n = (k² - k - 2)/2 + t·k` and
//! `t <= (k-5)/2`, where the lifted divisible pattern no longer fits.
//!
//! Only the levels from `(k+1)/2 + t` up to `k` are solved here; the lower
//! sizes form `(n, [(k+2t-1)/2])`, which the dispatcher handles on its own.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::{ensure_solves, exact_div, make_type, to_biguint};
use crate::combinatorics::{binomial, LevelSet};
use crate::error::{Error, Result};
use crate::system::SolutionVector;

fn c(n: i64, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

fn odd_n(k: usize, t: usize) -> usize {
    (k * k - k - 2) / 2 + t * k
}

/// Three-type solution of `({k-2, k-1, k})` on `[n]`, `n = k² - 3k - 1`,
/// for odd `k >= 7`.
///
/// * `A`: `(k+1)/2` parts of size `k-2`, `(k-5)/2` of size `k`
/// * `B`: `(k-1)/2` of size `k-2`, two of size `k-1`, `(k-7)/2` of size `k`
/// * `C`: one of size `k-1`, `k-4` of size `k`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcSolution {
    pub k: usize,
    pub n: usize,
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
}

pub fn abc_solution(k: usize) -> Result<AbcSolution> {
    if k < 7 || k % 2 == 0 {
        return Err(Error::Precondition(format!("three-type solution needs odd k >= 7, got {k}")));
    }
    let n = k * k - 3 * k - 1;
    let (ki, ni) = (k as i64, n as i64);
    let below = c(ni, ki - 2);
    let a = exact_div(&(BigInt::from(3 * (ki - 3)) * &below), &BigInt::from(2 * ni), "count of A")?;
    let b = exact_div(&(BigInt::from(ki - 5) * &below), &BigInt::from(2 * ni), "count of B")?;
    let cc = c(ni, ki - 1) - BigInt::from(2) * &b;
    Ok(AbcSolution {
        k,
        n,
        a: to_biguint(&a, "a")?,
        b: to_biguint(&b, "b")?,
        c: to_biguint(&cc, "c")?,
    })
}

impl AbcSolution {
    pub fn levels(&self) -> LevelSet {
        LevelSet::new([self.k - 2, self.k - 1, self.k]).expect("non-empty")
    }

    pub fn to_solution(&self) -> Result<SolutionVector> {
        let k = self.k;
        let h = |v: usize| v as i64;
        let mut x = SolutionVector::new();
        x.add(make_type(k, &[(k - 2, h((k + 1) / 2)), (k, h((k - 5) / 2))])?, self.a.clone());
        x.add(
            make_type(k, &[(k - 2, h((k - 1) / 2)), (k - 1, 2), (k, h((k - 7) / 2))])?,
            self.b.clone(),
        );
        x.add(make_type(k, &[(k - 1, 1), (k, h(k - 4))])?, self.c.clone());
        ensure_solves(self.n, &self.levels(), &x)?;
        Ok(x)
    }
}

/// Multiplicities for the many-type solution of the upper levels, odd
/// `k >= 7`, `0 <= t <= (k-7)/2`.
///
/// With `h = (k-5)/2 - t` the types are
/// * `R`: one part of size `k-1`, `(k-3)/2 + t` of size `k` (used `x` times)
/// * `S_0`: `(k+1)/2` parts of size `k-2`, `t` of size `k` (`a[0]` times)
/// * `S_i`, `1 <= i <= h`: one part of size `k-2-i`, `(k-1)/2 - i` of size
///   `k-2`, `i` of size `k-1`, `t` of size `k` (`a[i]` times)
/// * `T_i`, `1 <= i <= h`: two parts of size `k-2-i`, `(k-3)/2 - i` of
///   size `k-2`, `t + i` of size `k` (`b[i]` times)
///
/// `b[0]` is unused and always zero. `big_a = Σ i·a_i`, `big_b = Σ i·b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RstSolution {
    pub k: usize,
    pub t: usize,
    pub n: usize,
    pub x: BigUint,
    pub y: BigUint,
    pub big_a: BigUint,
    pub big_b: BigUint,
    pub a: Vec<BigUint>,
    pub b: Vec<BigUint>,
}

impl RstSolution {
    pub fn compute(k: usize, t: usize) -> Result<Self> {
        if k < 7 || k % 2 == 0 || 2 * t + 7 > k {
            return Err(Error::Precondition(format!(
                "many-type solution needs odd k >= 7 and t <= (k-7)/2, got k={k}, t={t}"
            )));
        }
        let n = odd_n(k, t);
        let (ki, ti, ni) = (k as i64, t as i64, n as i64);
        let h = (k - 5) / 2 - t;
        let lo = (ki + 1) / 2 + ti;

        let mut x = BigInt::zero();
        let mut y = BigInt::zero();
        for i in lo..=ki {
            x += BigInt::from(lo) * c(ni - 1, i - 1) - c(ni, i);
            y += c(ni, i) - BigInt::from(lo - 1) * c(ni - 1, i - 1);
        }

        let level = |i: usize| c(ni, ki - 2 - i as i64);
        let mut a = vec![BigInt::zero(); h + 1];
        let mut b = vec![BigInt::zero(); h + 1];
        for i in 2..=h {
            b[i] = level(i) / 2;
            a[i] = level(i) - BigInt::from(2) * &b[i];
        }
        let weighted: BigInt = (1..=h).map(|i| BigInt::from(i) * level(i)).sum();
        let big_a = exact_div(
            &(BigInt::from(2 * ti) * &y + weighted),
            &BigInt::from(ki - 2 + 2 * ti),
            "A",
        )?;
        let big_b = BigInt::from((ki - 3) / 2 + ti) * &big_a - BigInt::from(ti) * &y;
        a[1] = &big_a - (2..=h).map(|i| BigInt::from(i) * &a[i]).sum::<BigInt>();
        b[1] = &big_b - (2..=h).map(|i| BigInt::from(i) * &b[i]).sum::<BigInt>();
        a[0] = &y - (1..=h).map(|i| &a[i] + &b[i]).sum::<BigInt>();

        let nonneg = |v: &BigInt, what: &str| {
            to_biguint(v, what).map_err(|e| Error::Internal(format!("k={k}, t={t}: {e}")))
        };
        Ok(Self {
            k,
            t,
            n,
            x: nonneg(&x, "x")?,
            y: nonneg(&y, "y")?,
            big_a: nonneg(&big_a, "A")?,
            big_b: nonneg(&big_b, "B")?,
            a: a.iter().map(|v| nonneg(v, "a_i")).collect::<Result<_>>()?,
            b: b.iter().map(|v| nonneg(v, "b_i")).collect::<Result<_>>()?,
        })
    }

    /// Number of `S_i` / `T_i` pairs beyond `S_0`.
    pub fn h(&self) -> usize {
        self.a.len() - 1
    }

    /// Smallest level handled here, `(k+1)/2 + t`.
    pub fn lowest_level(&self) -> usize {
        (self.k + 1) / 2 + self.t
    }

    /// Largest level of the companion lower family, `(k+2t-1)/2`.
    pub fn lower_k(&self) -> usize {
        (self.k + 2 * self.t - 1) / 2
    }

    pub fn levels(&self) -> LevelSet {
        LevelSet::new(self.lowest_level()..=self.k).expect("non-empty")
    }

    pub fn to_solution(&self) -> Result<SolutionVector> {
        let (k, t) = (self.k as i64, self.t as i64);
        let ku = self.k;
        let mut x = SolutionVector::new();
        x.add(make_type(ku, &[(ku - 1, 1), (ku, (k - 3) / 2 + t)])?, self.x.clone());
        x.add(make_type(ku, &[(ku - 2, (k + 1) / 2), (ku, t)])?, self.a[0].clone());
        for i in 1..=self.h() {
            let ii = i as i64;
            x.add(
                make_type(ku, &[(ku - 2 - i, 1), (ku - 2, (k - 1) / 2 - ii), (ku - 1, ii), (ku, t)])?,
                self.a[i].clone(),
            );
            x.add(
                make_type(ku, &[(ku - 2 - i, 2), (ku - 2, (k - 3) / 2 - ii), (ku, t + ii)])?,
                self.b[i].clone(),
            );
        }
        ensure_solves(self.n, &self.levels(), &x)?;
        Ok(x)
    }
}
