//! Exact combinatorial primitives: binomials under the zero convention,
//! p-adic valuations, bit-set subsets of `[n]`, level sets, and the
//! enumeration of `(n, L)`-types.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest supported ground set. Subsets are stored as `u64` bit-sets.
pub const MAX_N: usize = 64;

/// `C(a, b)`, taken to be zero whenever `a < 0`, `b < 0` or `a < b`.
///
/// With this convention `C(0, 0) = 1` and Pascal's rule
/// `C(a, b) = C(a-1, b-1) + C(a-1, b)` holds for every `a >= 1` and every
/// integer `b`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || a < b {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= BigUint::from((a - i) as u64);
        acc /= BigUint::from((i + 1) as u64);
    }
    acc
}

/// Pascal triangle of `u128` values for `0 <= a <= max`.
///
/// Every entry with `a <= 127` fits in `u128`; the hot loops of the flow
/// engine and the verifier read capacities and counts from here.
#[derive(Debug, Clone)]
pub struct PascalTable {
    max: usize,
    rows: Vec<Vec<u128>>,
}

impl PascalTable {
    pub fn new(max: usize) -> Self {
        assert!(max <= 127, "PascalTable supports a <= 127");
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(max + 1);
        for a in 0..=max {
            let mut row = vec![1u128; a + 1];
            for b in 1..a {
                row[b] = rows[a - 1][b - 1] + rows[a - 1][b];
            }
            rows.push(row);
        }
        Self { max, rows }
    }

    /// `C(a, b)` with the zero convention. Panics if `a` exceeds the table.
    pub fn get(&self, a: i64, b: i64) -> u128 {
        if a < 0 || b < 0 || a < b {
            return 0;
        }
        assert!(a as usize <= self.max, "PascalTable lookup out of range");
        self.rows[a as usize][b as usize]
    }
}

/// Trial-division primality test; the inputs here are tiny.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest `e` with `p^e | m`.
pub fn padic_valuation(p: u64, m: &BigUint) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not a prime")));
    }
    if m.is_zero() {
        return Err(Error::InvalidArgument("valuation of zero is undefined".into()));
    }
    let p = BigUint::from(p);
    let mut m = m.clone();
    let mut e = 0;
    while (&m % &p).is_zero() {
        m /= &p;
        e += 1;
    }
    Ok(e)
}

/// The ground set `[n] = {1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet(usize);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroundSet(n));
        }
        if n > MAX_N {
            return Err(Error::GroundSetTooLarge { n, max: MAX_N });
        }
        Ok(Self(n))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn full(self) -> Subset {
        Subset::full(self.0)
    }
}

/// A strictly increasing list of positive set sizes.
///
/// The empty level set is only produced by [`LevelSet::up_to`] with `k = 0`
/// and stands for the empty family; every parsed or user-supplied level set
/// is non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelSet {
    levels: Vec<usize>,
}

impl LevelSet {
    pub fn new(levels: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut levels: Vec<usize> = levels.into_iter().collect();
        if levels.is_empty() {
            return Err(Error::InvalidLevels("level set must be non-empty".into()));
        }
        if levels.contains(&0) {
            return Err(Error::InvalidLevels("levels must be positive".into()));
        }
        levels.sort_unstable();
        levels.dedup();
        Ok(Self { levels })
    }

    /// `{1, ..., k}`; empty when `k = 0`.
    pub fn up_to(k: usize) -> Self {
        Self {
            levels: (1..=k).collect(),
        }
    }

    /// Rejects level sets that do not fit inside `[n]`.
    pub fn check_for(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidGroundSet(n));
        }
        if n > MAX_N {
            return Err(Error::GroundSetTooLarge { n, max: MAX_N });
        }
        if self.levels.is_empty() {
            return Err(Error::InvalidLevels("level set must be non-empty".into()));
        }
        if self.max() > n {
            return Err(Error::InvalidLevels(format!(
                "largest level {} exceeds n = {n}",
                self.max()
            )));
        }
        Ok(())
    }

    /// Largest level `k` (0 for the empty family).
    pub fn max(&self) -> usize {
        self.levels.last().copied().unwrap_or(0)
    }

    pub fn contains(&self, level: usize) -> bool {
        self.levels.binary_search(&level).is_ok()
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, usize>> {
        self.levels.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// True when the set is exactly `{1, ..., k}`.
    pub fn is_initial_segment(&self) -> bool {
        self.levels.iter().enumerate().all(|(i, &l)| l == i + 1)
    }
}

impl fmt::Display for LevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for LevelSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let levels = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidLevels(format!("cannot parse level {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels)
    }
}

/// A subset of `[n]` for `n <= 64`; element `e` is stored in bit `e - 1`.
///
/// The derived ordering compares the bit patterns as integers, which is
/// colexicographic order on subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `[n]` itself.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_N);
        if n == 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << n) - 1)
        }
    }

    pub fn from_elements(elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::EMPTY;
        for e in elements {
            if e == 0 || e > MAX_N {
                return Err(Error::InvalidArgument(format!("element {e} out of range 1..=64")));
            }
            s.insert(e);
        }
        Ok(s)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e >= 1 && e <= MAX_N && self.0 >> (e - 1) & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        debug_assert!((1..=MAX_N).contains(&e));
        self.0 |= 1u64 << (e - 1);
    }

    pub fn remove(&mut self, e: usize) {
        debug_assert!((1..=MAX_N).contains(&e));
        self.0 &= !(1u64 << (e - 1));
    }

    pub fn with(mut self, e: usize) -> Self {
        self.insert(e);
        self
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// `[n] \ self`.
    pub fn complement(self, n: usize) -> Self {
        Self(Self::full(n).0 & !self.0)
    }

    /// Smallest element, if any.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest element, if any.
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                Some(e)
            }
        })
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// All `size`-subsets of `[n]` in colexicographic order (Gosper's hack).
pub fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = Subset> {
    assert!(n <= MAX_N);
    let limit: u128 = 1u128 << n;
    let mut next: Option<u128> = if size > n {
        None
    } else if size == 0 {
        Some(0)
    } else {
        Some((1u128 << size) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < limit).then_some(nxt)
        };
        Some(Subset(cur as u64))
    })
}

/// A part-multiplicity vector `(λ_1, ..., λ_k)`.
///
/// The ordering is the canonical row order: lexicographically *decreasing*
/// on `(λ_k, λ_{k-1}, ..., λ_1)`, so the first element in ascending `Ord`
/// is the one with the most parts of the largest size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeVector {
    lambda: Vec<u32>,
    size: u32,
}

impl TypeVector {
    pub fn new(lambda: Vec<u32>) -> Self {
        let size = lambda.iter().sum();
        Self { lambda, size }
    }

    /// `λ_j` for `1 <= j <= k`; zero outside that range.
    pub fn get(&self, j: usize) -> u32 {
        if j == 0 {
            0
        } else {
            self.lambda.get(j - 1).copied().unwrap_or(0)
        }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.lambda
    }

    /// Number of parts `|λ|`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// `k`, the number of coordinates.
    pub fn width(&self) -> usize {
        self.lambda.len()
    }

    /// `Σ j·λ_j`.
    pub fn weight(&self) -> usize {
        self.lambda
            .iter()
            .enumerate()
            .map(|(i, &l)| (i + 1) * l as usize)
            .sum()
    }

    /// True when `λ` is an `(n, L)`-type with `k = max L` coordinates.
    pub fn is_type_of(&self, n: usize, levels: &LevelSet) -> bool {
        self.width() == levels.max()
            && self.weight() == n
            && self
                .lambda
                .iter()
                .enumerate()
                .all(|(i, &l)| l == 0 || levels.contains(i + 1))
    }
}

impl Ord for TypeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lambda
            .len()
            .cmp(&other.lambda.len())
            .then_with(|| other.lambda.iter().rev().cmp(self.lambda.iter().rev()))
    }
}

impl PartialOrd for TypeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambda.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Calls `visit` on every `(n, L)`-type in canonical order without
/// materialising the list. The slice passed to `visit` has `k` entries.
pub fn for_each_type(n: usize, levels: &LevelSet, mut visit: impl FnMut(&[u32])) {
    let k = levels.max();
    if k == 0 {
        return;
    }
    let desc: Vec<usize> = levels.iter().rev().collect();
    let mut buf = vec![0u32; k];
    walk_types(&desc, 0, n, &mut buf, &mut visit);
}

/// Same traversal as [`for_each_type`] but starting from a fixed prefix of
/// the largest levels; used to split the enumeration across threads.
pub(crate) fn for_each_type_with_prefix(
    n: usize,
    levels: &LevelSet,
    prefix: &[u32],
    mut visit: impl FnMut(&[u32]),
) {
    let k = levels.max();
    let desc: Vec<usize> = levels.iter().rev().collect();
    let mut buf = vec![0u32; k];
    let mut remaining = n;
    for (pos, &v) in prefix.iter().enumerate() {
        let level = desc[pos];
        buf[level - 1] = v;
        remaining -= level * v as usize;
    }
    walk_types(&desc, prefix.len(), remaining, &mut buf, &mut visit);
}

/// Prefixes of length `depth` over the largest levels, in canonical order.
pub(crate) fn type_prefixes(n: usize, levels: &LevelSet, depth: usize) -> Vec<Vec<u32>> {
    let desc: Vec<usize> = levels.iter().rev().collect();
    let depth = depth.min(desc.len().saturating_sub(1));
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(depth);
    fn rec(desc: &[usize], depth: usize, rem: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == depth {
            out.push(cur.clone());
            return;
        }
        let level = desc[cur.len()];
        for v in (0..=rem / level).rev() {
            cur.push(v as u32);
            rec(desc, depth, rem - level * v, cur, out);
            cur.pop();
        }
    }
    rec(&desc, depth, n, &mut cur, &mut out);
    out
}

fn walk_types(
    desc: &[usize],
    pos: usize,
    remaining: usize,
    buf: &mut [u32],
    visit: &mut impl FnMut(&[u32]),
) {
    let level = desc[pos];
    if pos + 1 == desc.len() {
        if remaining % level == 0 {
            buf[level - 1] = (remaining / level) as u32;
            visit(buf);
            buf[level - 1] = 0;
        }
        return;
    }
    for v in (0..=remaining / level).rev() {
        buf[level - 1] = v as u32;
        walk_types(desc, pos + 1, remaining - level * v, buf, visit);
    }
    buf[level - 1] = 0;
}

/// Every `(n, L)`-type exactly once, in canonical order.
pub fn enumerate_types(n: usize, levels: &LevelSet) -> Vec<TypeVector> {
    let mut out = Vec::new();
    for_each_type(n, levels, |l| out.push(TypeVector::new(l.to_vec())));
    out
}

/// Number of `(n, L)`-types, counted without enumerating them.
pub fn count_types(n: usize, levels: &LevelSet) -> u128 {
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for l in levels.iter() {
        for s in l..=n {
            ways[s] = ways[s].saturating_add(ways[s - l]);
        }
    }
    ways[n]
}

/// `M = Σ_{j ∈ L} C(n-1, j-1)`, the number of factors in any 1-factorization.
pub fn factor_count(n: usize, levels: &LevelSet) -> BigUint {
    levels
        .iter()
        .map(|j| binomial(n as i64 - 1, j as i64 - 1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(5, -1), BigUint::zero());
        assert_eq!(binomial(-3, 0), BigUint::zero());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(12, 3), BigUint::from(220u32));
        assert_eq!(binomial(18, 6), BigUint::from(18564u32));
    }

    #[test]
    fn pascal_identity_with_boundary() {
        for a in 1i64..=40 {
            for b in -2i64..=42 {
                assert_eq!(
                    binomial(a, b),
                    binomial(a - 1, b - 1) + binomial(a - 1, b),
                    "C({a},{b})"
                );
            }
        }
    }

    #[test]
    fn pascal_table_matches_bigint() {
        let t = PascalTable::new(64);
        for a in 0..=64i64 {
            for b in -1..=65i64 {
                assert_eq!(BigUint::from(t.get(a, b)), binomial(a, b));
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(2, &BigUint::from(40u32)).unwrap(), 3);
        assert_eq!(padic_valuation(3, &BigUint::from(40u32)).unwrap(), 0);
        assert_eq!(padic_valuation(5, &BigUint::from(250u32)).unwrap(), 3);
        assert!(padic_valuation(1, &BigUint::from(4u32)).is_err());
        assert!(padic_valuation(4, &BigUint::from(4u32)).is_err());
        assert!(padic_valuation(3, &BigUint::zero()).is_err());
    }

    #[test]
    fn example_rows_in_canonical_order() {
        let rows: Vec<Vec<u32>> = enumerate_types(7, &LevelSet::up_to(3))
            .into_iter()
            .map(|t| t.as_slice().to_vec())
            .collect();
        let expected = vec![
            vec![1, 0, 2],
            vec![0, 2, 1],
            vec![2, 1, 1],
            vec![4, 0, 1],
            vec![1, 3, 0],
            vec![3, 2, 0],
            vec![5, 1, 0],
            vec![7, 0, 0],
        ];
        assert_eq!(rows, expected);
    }

    #[test]
    fn enumeration_edge_cases() {
        assert!(enumerate_types(7, &LevelSet::new([3]).unwrap()).is_empty());
        assert_eq!(enumerate_types(12, &LevelSet::up_to(3)).len(), 19);
        assert_eq!(count_types(12, &LevelSet::up_to(3)), 19);
        let sorted = {
            let mut v = enumerate_types(15, &LevelSet::new([2, 3, 5]).unwrap());
            let orig = v.clone();
            v.sort();
            (orig, v)
        };
        assert_eq!(sorted.0, sorted.1);
    }

    #[test]
    fn factor_counts() {
        assert_eq!(factor_count(4, &LevelSet::new([2]).unwrap()), BigUint::from(3u32));
        assert_eq!(factor_count(12, &LevelSet::up_to(3)), BigUint::from(67u32));
        assert_eq!(factor_count(7, &LevelSet::up_to(3)), BigUint::from(22u32));
    }

    #[test]
    fn level_set_parsing_and_checks() {
        let l: LevelSet = "4, 2,2".parse().unwrap();
        assert_eq!(l.levels(), &[2, 4]);
        assert_eq!(l.to_string(), "2,4");
        assert!("".parse::<LevelSet>().is_err());
        assert!("0,1".parse::<LevelSet>().is_err());
        assert!(l.check_for(3).is_err());
        assert!(l.check_for(65).is_err());
        assert!(LevelSet::up_to(3).is_initial_segment());
        assert!(!l.is_initial_segment());
    }

    #[test]
    fn subset_basics() {
        let s = Subset::from_elements([3, 1, 5]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "{1,3,5}");
        assert_eq!(s.complement(5).to_string(), "{2,4}");
        assert_eq!(s.min(), Some(1));
        assert_eq!(s.max(), Some(5));
        assert_eq!(Subset::full(64).len(), 64);
        assert!(Subset::from_elements([65]).is_err());
        let all: Vec<Subset> = subsets_of_size(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsets_of_size(4, 0).count(), 1);
        assert_eq!(subsets_of_size(3, 4).count(), 0);
        assert_eq!(subsets_of_size(64, 1).count(), 64);
        assert_eq!(subsets_of_size(64, 64).count(), 1);
    }
}
