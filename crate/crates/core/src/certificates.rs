//! Closed-form Farkas vectors for the infeasible congruence classes.
//!
//! The builders here only produce candidates. [`make_certificate`] checks
//! every candidate against the full system before returning it, so a
//! builder used outside the range where its inequality is known to hold
//! simply yields nothing.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::combinatorics::{count_types, LevelSet};
use crate::exec::Execution;
use crate::system::{verify_certificate_streaming, FarkasCertificate};

/// Systems with more rows than this are not checked, and so get no
/// closed-form certificate.
pub const MAX_CHECKED_TYPES: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateFamily {
    /// `L = [k]`, `n = jk + r`, `1 <= r <= k-2`, `j >= 3`.
    Residue,
    /// `L = [k]`, `n = 2k + r`, `1 <= r <= k-2`.
    ResidueDoubled,
    /// `L = [k]`, `n = jk + k`, `2 <= j <= k-4`.
    DivisibleShort,
    /// `L = [k]`, `n = jk + k - 1`, `2 <= j <= ⌈k/2⌉ - 3`.
    MinusOneShort,
    /// Any `L`, `n = jk + r`, `1 <= r <= k-2`.
    GeneralResidue,
    /// Any `L` without `k-1`, `n = jk + k - 1`.
    MissingPenultimate,
    /// `L = {2, 3, 4}`, `n ≡ 3 (mod 4)`.
    TwoThreeFour,
}

impl CertificateFamily {
    pub fn tag(self) -> &'static str {
        match self {
            CertificateFamily::Residue => "RESIDUE",
            CertificateFamily::ResidueDoubled => "RESIDUE_DOUBLED",
            CertificateFamily::DivisibleShort => "DIVISIBLE_SHORT",
            CertificateFamily::MinusOneShort => "MINUS1_SHORT",
            CertificateFamily::GeneralResidue => "GENERAL_RESIDUE",
            CertificateFamily::MissingPenultimate => "MISSING_PENULTIMATE",
            CertificateFamily::TwoThreeFour => "TWO_THREE_FOUR",
        }
    }

    /// One-line description of the situation the family covers.
    pub fn describe(self) -> &'static str {
        match self {
            CertificateFamily::Residue | CertificateFamily::ResidueDoubled => {
                "n is neither 0 nor -1 modulo k"
            }
            CertificateFamily::DivisibleShort => "k divides n but n < k(k-2)",
            CertificateFamily::MinusOneShort => "n ≡ -1 (mod k) but n < k(⌈k/2⌉-1)-1",
            CertificateFamily::GeneralResidue => "n is neither 0 nor -1 modulo max L",
            CertificateFamily::MissingPenultimate => "n ≡ -1 (mod k) and k-1 is not a level",
            CertificateFamily::TwoThreeFour => "L = {2,3,4} and n ≡ 3 (mod 4)",
        }
    }
}

impl fmt::Display for CertificateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A certificate that has been checked against its system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certified {
    pub family: CertificateFamily,
    pub certificate: FarkasCertificate,
}

fn half(v: i64) -> BigRational {
    BigRational::new(BigInt::from(v), BigInt::from(2))
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `L = [k]`, `n = jk + r` with `1 <= r <= k-2` and `j >= 2`.
pub fn residue_candidate(n: usize, k: usize) -> Option<(CertificateFamily, FarkasCertificate)> {
    if k < 3 {
        return None;
    }
    let (j, r) = (n / k, n % k);
    if r == 0 || r > k - 2 || j < 2 {
        return None;
    }
    let ji = j as i64;
    let mut y = vec![int(0); k];
    if j >= 3 {
        for v in y.iter_mut().take(r - 1) {
            *v = half(ji);
        }
        y[r - 1] = int(ji);
        for v in y.iter_mut().take(k - 1).skip(r) {
            *v = half(ji - 1);
        }
        y[k - 1] = int(-1);
        return Some((CertificateFamily::Residue, FarkasCertificate::new(y)));
    }
    for v in y.iter_mut().take(r - 1) {
        *v = int(1);
    }
    y[r - 1] = int(2);
    let mid = (r + k) / 2;
    if (k - r) % 2 == 1 {
        for v in y.iter_mut().take(mid).skip(r) {
            *v = int(1);
        }
    } else {
        for v in y.iter_mut().take(mid - 1).skip(r) {
            *v = int(1);
        }
        y[mid - 1] = half(1);
    }
    y[k - 1] = int(-1);
    Some((CertificateFamily::ResidueDoubled, FarkasCertificate::new(y)))
}

/// `L = [k]`, `n = jk + k` with `2 <= j <= k-4`.
pub fn divisible_short_candidate(n: usize, k: usize) -> Option<(CertificateFamily, FarkasCertificate)> {
    if k < 6 || n % k != 0 || n / k < 3 {
        return None;
    }
    let j = n / k - 1;
    if j + 4 > k {
        return None;
    }
    let ji = j as i64;
    let mut y = Vec::with_capacity(k);
    y.extend(std::iter::repeat_n(int(ji + 1), j + 1));
    y.extend(std::iter::repeat_n(half(ji), k - j - 3));
    y.push(int(-1));
    y.push(int(0));
    Some((CertificateFamily::DivisibleShort, FarkasCertificate::new(y)))
}

/// `L = [k]`, `n = jk + k - 1` with `2 <= j <= ⌈k/2⌉ - 3`.
pub fn minus_one_short_candidate(n: usize, k: usize) -> Option<(CertificateFamily, FarkasCertificate)> {
    if k < 2 || (n + 1) % k != 0 || (n + 1) / k < 3 {
        return None;
    }
    let j = (n + 1) / k - 1;
    if j + 3 > k.div_ceil(2) {
        return None;
    }
    let ji = j as i64;
    let mut y = Vec::with_capacity(k);
    y.extend(std::iter::repeat_n(int(ji + 1), 2 * j + 1));
    y.extend(std::iter::repeat_n(half(ji), k - 2 * j - 4));
    y.extend([int(-1), int(ji), int(-1)]);
    Some((CertificateFamily::MinusOneShort, FarkasCertificate::new(y)))
}

/// Any `L` with `k = max L`, `n = jk + r`, `1 <= r <= k-2`, `j >= 2`:
/// `y_k = -1`, `y_r = j`, every other coordinate `j/2`.
pub fn general_residue_candidate(
    n: usize,
    levels: &LevelSet,
) -> Option<(CertificateFamily, FarkasCertificate)> {
    let k = levels.max();
    if k < 3 {
        return None;
    }
    let (j, r) = (n / k, n % k);
    if r == 0 || r > k - 2 || j < 2 {
        return None;
    }
    let ji = j as i64;
    let mut y = vec![half(ji); k];
    y[r - 1] = int(ji);
    y[k - 1] = int(-1);
    Some((CertificateFamily::GeneralResidue, FarkasCertificate::new(y)))
}

/// Any `L` with `k = max L`, `k - 1 ∉ L`, `n = jk + k - 1`, `j >= 2`:
/// `y_ℓ = j/2` on the other levels, `y_k = -1`, zero elsewhere.
pub fn missing_penultimate_candidate(
    n: usize,
    levels: &LevelSet,
) -> Option<(CertificateFamily, FarkasCertificate)> {
    let k = levels.max();
    if k < 2 || levels.contains(k - 1) || (n + 1) % k != 0 || (n + 1) / k < 3 {
        return None;
    }
    let j = ((n + 1) / k - 1) as i64;
    let mut y = vec![int(0); k];
    for l in levels.iter().filter(|&l| l != k) {
        y[l - 1] = half(j);
    }
    y[k - 1] = int(-1);
    Some((CertificateFamily::MissingPenultimate, FarkasCertificate::new(y)))
}

/// `L = {2, 3, 4}`, `n = 4j - 1`: `y = (0, -1/2, j-1, -1)`.
pub fn two_three_four_candidate(
    n: usize,
    levels: &LevelSet,
) -> Option<(CertificateFamily, FarkasCertificate)> {
    if levels.levels() != [2, 3, 4] || n % 4 != 3 {
        return None;
    }
    let j = ((n + 1) / 4) as i64;
    let y = vec![int(0), half(-1), int(j - 1), int(-1)];
    Some((CertificateFamily::TwoThreeFour, FarkasCertificate::new(y)))
}

/// Every closed-form candidate that applies to `(n, L)`, unchecked, in the
/// order [`make_certificate`] tries them.
pub fn candidates(n: usize, levels: &LevelSet) -> Vec<(CertificateFamily, FarkasCertificate)> {
    let mut out = Vec::new();
    let k = levels.max();
    if levels.check_for(n).is_err() {
        return out;
    }
    if levels.is_initial_segment() && 2 * k < n {
        out.extend(residue_candidate(n, k));
        out.extend(divisible_short_candidate(n, k));
        out.extend(minus_one_short_candidate(n, k));
    }
    out.extend(general_residue_candidate(n, levels));
    out.extend(missing_penultimate_candidate(n, levels));
    out.extend(two_three_four_candidate(n, levels));
    out
}

/// The first closed-form certificate for `(n, L)` that survives a full
/// check against the system, if any.
pub fn make_certificate(n: usize, levels: &LevelSet) -> Option<Certified> {
    make_certificate_with(n, levels, Execution::default())
}

pub fn make_certificate_with(n: usize, levels: &LevelSet, exec: Execution) -> Option<Certified> {
    if levels.check_for(n).is_err() || count_types(n, levels) > MAX_CHECKED_TYPES {
        return None;
    }
    candidates(n, levels).into_iter().find_map(|(family, cert)| {
        let ok = verify_certificate_streaming(n, levels, &cert, exec)
            .map(|c| c.is_valid())
            .unwrap_or(false);
        if !ok {
            log::debug!("{family} candidate rejected for n={n}, L={{{levels}}}");
        }
        ok.then_some(Certified {
            family,
            certificate: cert,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shown(c: &Certified) -> String {
        c.certificate.to_string()
    }

    #[test]
    fn known_vectors() {
        let c = make_certificate(18, &LevelSet::up_to(6)).unwrap();
        assert_eq!(c.family, CertificateFamily::DivisibleShort);
        assert_eq!(shown(&c), "3 3 3 1 -1 0");

        let c = make_certificate(26, &LevelSet::up_to(9)).unwrap();
        assert_eq!(c.family, CertificateFamily::MinusOneShort);
        assert_eq!(shown(&c), "3 3 3 3 3 1 -1 2 -1");

        let c = make_certificate(7, &LevelSet::up_to(3)).unwrap();
        assert_eq!(c.family, CertificateFamily::ResidueDoubled);
        assert_eq!(shown(&c), "2 1/2 -1");
    }

    #[test]
    fn residue_with_large_quotient() {
        // n = 3·4 + 1
        let (f, c) = residue_candidate(13, 4).unwrap();
        assert_eq!(f, CertificateFamily::Residue);
        assert_eq!(c.to_string(), "3 1 1 -1");
    }

    #[test]
    fn two_three_four() {
        let c = make_certificate(11, &LevelSet::new([2, 3, 4]).unwrap()).unwrap();
        assert_eq!(c.family, CertificateFamily::TwoThreeFour);
        let (_, c) = two_three_four_candidate(11, &LevelSet::new([2, 3, 4]).unwrap()).unwrap();
        assert_eq!(c.to_string(), "0 -1/2 2 -1");
    }

    #[test]
    fn nothing_for_factorable_cases() {
        assert!(make_certificate(12, &LevelSet::up_to(3)).is_none());
        assert!(make_certificate(11, &LevelSet::up_to(3)).is_none());
        assert!(make_certificate(12, &LevelSet::new([2, 4]).unwrap()).is_none());
    }
}
