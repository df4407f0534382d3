//! The counting system `A_L^T x = b_L`: one row of `A_L` per `(n, L)`-type,
//! `b_i = C(n, i)` on the levels of `L`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinatorics::{binomial, count_types, enumerate_types, LevelSet, TypeVector};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Refuse to materialise systems with more rows than this.
pub const MAX_SYSTEM_TYPES: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    n: usize,
    levels: LevelSet,
    types: Vec<TypeVector>,
    b: Vec<BigUint>,
}

/// Right-hand side `b_L` of length `k`.
pub fn target_vector(n: usize, levels: &LevelSet) -> Vec<BigUint> {
    (1..=levels.max())
        .map(|i| {
            if levels.contains(i) {
                binomial(n as i64, i as i64)
            } else {
                BigUint::zero()
            }
        })
        .collect()
}

/// Assembles the system for `binom([n], L)`.
pub fn build_system(n: usize, levels: &LevelSet) -> Result<LinearSystem> {
    levels.check_for(n)?;
    let rows = count_types(n, levels);
    if rows > MAX_SYSTEM_TYPES {
        return Err(Error::LimitExceeded(format!(
            "system for n={n}, L={{{levels}}} has {rows} rows (limit {MAX_SYSTEM_TYPES})"
        )));
    }
    Ok(LinearSystem {
        n,
        levels: levels.clone(),
        types: enumerate_types(n, levels),
        b: target_vector(n, levels),
    })
}

impl LinearSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &LevelSet {
        &self.levels
    }

    /// `k = max L`, the number of coordinates.
    pub fn width(&self) -> usize {
        self.levels.max()
    }

    /// Rows of `A_L` in canonical order.
    pub fn types(&self) -> &[TypeVector] {
        &self.types
    }

    pub fn b(&self) -> &[BigUint] {
        &self.b
    }

    /// Canonical index of `t`, if it is a row of this system.
    pub fn index_of(&self, t: &TypeVector) -> Option<usize> {
        self.types.binary_search(t).ok()
    }
}

/// Non-negative integer multiplicities per type. Zero entries are not stored;
/// iteration follows the canonical type order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolutionVector {
    entries: BTreeMap<TypeVector, BigUint>,
}

impl SolutionVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (TypeVector, BigUint)>) -> Self {
        let mut x = Self::new();
        for (t, v) in pairs {
            x.add(t, v);
        }
        x
    }

    /// Adds `v` to the multiplicity of `t`.
    pub fn add(&mut self, t: TypeVector, v: BigUint) {
        if v.is_zero() {
            return;
        }
        *self.entries.entry(t).or_default() += v;
    }

    pub fn set(&mut self, t: TypeVector, v: BigUint) {
        if v.is_zero() {
            self.entries.remove(&t);
        } else {
            self.entries.insert(t, v);
        }
    }

    pub fn get(&self, t: &TypeVector) -> BigUint {
        self.entries.get(t).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TypeVector, &BigUint)> {
        self.entries.iter()
    }

    /// Number of types with non-zero multiplicity.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ x_λ`, the number of factors this solution describes.
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    /// `(A^T x)_i` for `i = 1..=k`, computed from the stored types alone.
    pub fn level_totals(&self, k: usize) -> Vec<BigUint> {
        let mut totals = vec![BigUint::zero(); k];
        for (t, v) in &self.entries {
            for (i, total) in totals.iter_mut().enumerate() {
                let l = t.get(i + 1);
                if l > 0 {
                    *total += v * BigUint::from(l);
                }
            }
        }
        totals
    }

    /// Dense vector over the rows of `sys`.
    pub fn to_dense(&self, sys: &LinearSystem) -> Result<Vec<BigUint>> {
        let mut dense = vec![BigUint::zero(); sys.types().len()];
        for (t, v) in &self.entries {
            let idx = sys
                .index_of(t)
                .ok_or_else(|| Error::UnknownType(t.to_string()))?;
            dense[idx] = v.clone();
        }
        Ok(dense)
    }
}

impl fmt::Display for SolutionVector {
    /// One `type-vector: multiplicity` line per non-zero entry.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, v) in &self.entries {
            writeln!(f, "{t}: {v}")?;
        }
        Ok(())
    }
}

/// `A^T x - b` for a solution whose types need not be materialised as a
/// system. Fails if some stored vector is not an `(n, L)`-type.
pub fn residual(n: usize, levels: &LevelSet, x: &SolutionVector) -> Result<Vec<BigInt>> {
    for (t, _) in x.iter() {
        if !t.is_type_of(n, levels) {
            return Err(Error::UnknownType(format!("{t} for n={n}, L={{{levels}}}")));
        }
    }
    let totals = x.level_totals(levels.max());
    let b = target_vector(n, levels);
    Ok(totals
        .into_iter()
        .zip(b)
        .map(|(t, b)| BigInt::from(t) - BigInt::from(b))
        .collect())
}

/// `A^T x - b` componentwise; all zeros means `x` solves the system.
pub fn evaluate_solution(sys: &LinearSystem, x: &SolutionVector) -> Result<Vec<BigInt>> {
    for (t, _) in x.iter() {
        if t.width() != sys.width() {
            return Err(Error::DimensionMismatch {
                expected: sys.width(),
                got: t.width(),
            });
        }
        if sys.index_of(t).is_none() {
            return Err(Error::UnknownType(t.to_string()));
        }
    }
    residual(sys.n, &sys.levels, x)
}

/// A rational vector `y` meant to satisfy `A y >= 0` and `b^T y < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FarkasCertificate {
    y: Vec<BigRational>,
}

impl FarkasCertificate {
    pub fn new(y: Vec<BigRational>) -> Self {
        Self { y }
    }

    pub fn from_integers(y: &[i64]) -> Self {
        Self::new(y.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn y(&self) -> &[BigRational] {
        &self.y
    }

    pub fn width(&self) -> usize {
        self.y.len()
    }

    /// Common denominator `D > 0` and the integer vector `D·y`.
    pub fn scaled(&self) -> (BigInt, Vec<BigInt>) {
        let denom = self
            .y
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints = self
            .y
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        (denom, ints)
    }

    /// Positive rescaling to a primitive integer vector. Validity is
    /// unaffected since both sign conditions are homogeneous.
    pub fn normalized(&self) -> Self {
        let (_, ints) = self.scaled();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if g.is_zero() {
            return self.clone();
        }
        Self::new(
            ints.into_iter()
                .map(|v| BigRational::from_integer(v / &g))
                .collect(),
        )
    }
}

impl fmt::Display for FarkasCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.y.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Outcome of checking a Farkas certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateCheck {
    Valid { objective: BigRational },
    /// First row (in canonical order) with `λ · y < 0`.
    RowViolation { lambda: TypeVector, value: BigRational },
    /// All rows are fine but `b^T y >= 0`.
    ObjectiveNotNegative { objective: BigRational },
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CertificateCheck::Valid { .. })
    }
}

/// Row evaluator on the integer-scaled certificate; uses `i128` whenever the
/// entries are small enough that no row sum can overflow.
enum ScaledRows {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl ScaledRows {
    fn new(ints: Vec<BigInt>) -> Self {
        let limit = BigInt::from(1i128 << 90);
        if ints.iter().all(|v| v.abs() < limit) {
            ScaledRows::Small(ints.iter().map(|v| v.to_i128().unwrap()).collect())
        } else {
            ScaledRows::Big(ints)
        }
    }

    fn is_negative(&self, row: &[u32]) -> bool {
        match self {
            ScaledRows::Small(z) => {
                let s: i128 = row
                    .iter()
                    .zip(z)
                    .map(|(&l, &v)| l as i128 * v)
                    .sum();
                s < 0
            }
            ScaledRows::Big(z) => {
                let s: BigInt = row
                    .iter()
                    .zip(z)
                    .map(|(&l, v)| BigInt::from(l) * v)
                    .sum();
                s.sign() == Sign::Minus
            }
        }
    }
}

fn row_value(row: &[u32], y: &[BigRational]) -> BigRational {
    row.iter()
        .zip(y)
        .map(|(&l, v)| v * BigRational::from_integer(l.into()))
        .sum()
}

fn objective(b: &[BigUint], y: &[BigRational]) -> BigRational {
    b.iter()
        .zip(y)
        .map(|(b, v)| v * BigRational::from_integer(BigInt::from(b.clone())))
        .sum()
}

fn finish_check(
    first_bad: Option<Vec<u32>>,
    b: &[BigUint],
    y: &[BigRational],
) -> CertificateCheck {
    if let Some(row) = first_bad {
        let value = row_value(&row, y);
        return CertificateCheck::RowViolation {
            lambda: TypeVector::new(row),
            value,
        };
    }
    let objective = objective(b, y);
    if objective.is_negative() {
        CertificateCheck::Valid { objective }
    } else {
        CertificateCheck::ObjectiveNotNegative { objective }
    }
}

/// Checks `λ · y >= 0` for every row and `b^T y < 0`, in exact arithmetic.
pub fn verify_certificate(sys: &LinearSystem, cert: &FarkasCertificate) -> Result<CertificateCheck> {
    verify_certificate_with(sys, cert, Execution::default())
}

pub fn verify_certificate_with(
    sys: &LinearSystem,
    cert: &FarkasCertificate,
    exec: Execution,
) -> Result<CertificateCheck> {
    if cert.width() != sys.width() {
        return Err(Error::DimensionMismatch {
            expected: sys.width(),
            got: cert.width(),
        });
    }
    let rows = ScaledRows::new(cert.scaled().1);
    const CHUNK: usize = 4096;
    let chunks = sys.types.len().div_ceil(CHUNK);
    let firsts = exec.map_range(chunks, |c| {
        sys.types[c * CHUNK..((c + 1) * CHUNK).min(sys.types.len())]
            .iter()
            .find(|t| rows.is_negative(t.as_slice()))
            .map(|t| t.as_slice().to_vec())
    });
    let first_bad = firsts.into_iter().flatten().next();
    Ok(finish_check(first_bad, &sys.b, cert.y()))
}

/// Same check as [`verify_certificate`] but streams the rows instead of
/// materialising `A_L`; suitable for systems with millions of types.
pub fn verify_certificate_streaming(
    n: usize,
    levels: &LevelSet,
    cert: &FarkasCertificate,
    exec: Execution,
) -> Result<CertificateCheck> {
    levels.check_for(n)?;
    if cert.width() != levels.max() {
        return Err(Error::DimensionMismatch {
            expected: levels.max(),
            got: cert.width(),
        });
    }
    let rows = ScaledRows::new(cert.scaled().1);
    let prefixes = crate::combinatorics::type_prefixes(n, levels, 2);
    let firsts = exec.map(&prefixes, |prefix| {
        let mut bad: Option<Vec<u32>> = None;
        crate::combinatorics::for_each_type_with_prefix(n, levels, prefix, |row| {
            if bad.is_none() && rows.is_negative(row) {
                bad = Some(row.to_vec());
            }
        });
        bad
    });
    let first_bad = firsts.into_iter().flatten().next();
    Ok(finish_check(first_bad, &target_vector(n, levels), cert.y()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn tv(v: &[u32]) -> TypeVector {
        TypeVector::new(v.to_vec())
    }

    #[test]
    fn builds_small_systems() {
        let sys = build_system(7, &LevelSet::up_to(3)).unwrap();
        assert_eq!(sys.types().len(), 8);
        let b: Vec<u32> = vec![7, 21, 35];
        assert_eq!(sys.b(), &b.into_iter().map(BigUint::from).collect::<Vec<_>>()[..]);

        let sys = build_system(4, &LevelSet::new([2]).unwrap()).unwrap();
        assert_eq!(sys.types(), &[tv(&[0, 2])]);
        assert_eq!(sys.b(), &[BigUint::zero(), BigUint::from(6u32)]);

        let sys = build_system(18, &LevelSet::up_to(6)).unwrap();
        assert_eq!(sys.b()[5], BigUint::from(18564u32));

        assert!(matches!(
            build_system(65, &LevelSet::up_to(2)),
            Err(Error::GroundSetTooLarge { .. })
        ));
    }

    #[test]
    fn residuals() {
        let sys = build_system(12, &LevelSet::up_to(3)).unwrap();
        let x = SolutionVector::from_pairs([
            (tv(&[3, 0, 3]), BigUint::from(4u32)),
            (tv(&[0, 3, 2]), BigUint::from(22u32)),
            (tv(&[0, 0, 4]), BigUint::from(41u32)),
        ]);
        assert!(evaluate_solution(&sys, &x).unwrap().iter().all(|r| r.is_zero()));

        let sys = build_system(4, &LevelSet::new([2]).unwrap()).unwrap();
        let r = evaluate_solution(&sys, &SolutionVector::new()).unwrap();
        assert_eq!(r, vec![BigInt::zero(), BigInt::from(-6)]);

        let sys = build_system(7, &LevelSet::up_to(3)).unwrap();
        let x = SolutionVector::from_pairs([(tv(&[7, 0, 0]), BigUint::one())]);
        let r = evaluate_solution(&sys, &x).unwrap();
        assert_eq!(r, vec![BigInt::zero(), BigInt::from(-21), BigInt::from(-35)]);
    }

    #[test]
    fn residual_rejects_foreign_types() {
        let sys = build_system(7, &LevelSet::up_to(3)).unwrap();
        let x = SolutionVector::from_pairs([(tv(&[1, 1, 1]), BigUint::one())]);
        assert!(matches!(evaluate_solution(&sys, &x), Err(Error::UnknownType(_))));
        let x = SolutionVector::from_pairs([(tv(&[7, 0]), BigUint::one())]);
        assert!(matches!(
            evaluate_solution(&sys, &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn certificate_checks() {
        let sys = build_system(7, &LevelSet::up_to(3)).unwrap();
        let cert = FarkasCertificate::new(vec![q(2, 1), q(1, 2), q(-1, 1)]);
        let check = verify_certificate(&sys, &cert).unwrap();
        assert_eq!(check, CertificateCheck::Valid { objective: q(-21, 2) });

        let sys = build_system(18, &LevelSet::up_to(6)).unwrap();
        let cert = FarkasCertificate::from_integers(&[3, 3, 3, 1, -1, 0]);
        assert!(verify_certificate(&sys, &cert).unwrap().is_valid());

        let sys = build_system(12, &LevelSet::up_to(3)).unwrap();
        let zero = FarkasCertificate::from_integers(&[0, 0, 0]);
        assert_eq!(
            verify_certificate(&sys, &zero).unwrap(),
            CertificateCheck::ObjectiveNotNegative { objective: q(0, 1) }
        );
        let bad = FarkasCertificate::from_integers(&[0, 0, -1]);
        match verify_certificate(&sys, &bad).unwrap() {
            CertificateCheck::RowViolation { lambda, value } => {
                assert_eq!(lambda, tv(&[0, 0, 4]));
                assert_eq!(value, q(-4, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
        let short = FarkasCertificate::from_integers(&[1, 1]);
        assert!(verify_certificate(&sys, &short).is_err());
    }

    #[test]
    fn streaming_agrees_with_materialised() {
        for (n, k) in [(7, 3), (18, 6), (12, 3), (13, 4)] {
            let levels = LevelSet::up_to(k);
            let sys = build_system(n, &levels).unwrap();
            for y in [[1i64, 0, 0], [-1, 2, 0], [3, 1, -1]] {
                let mut v = y.to_vec();
                v.resize(k, -1);
                let cert = FarkasCertificate::from_integers(&v);
                let a = verify_certificate_with(&sys, &cert, Execution::Sequential).unwrap();
                let b = verify_certificate_streaming(n, &levels, &cert, Execution::Parallel).unwrap();
                assert_eq!(a, b, "n={n} k={k} y={v:?}");
            }
        }
    }

    #[test]
    fn normalization_clears_denominators() {
        let cert = FarkasCertificate::new(vec![q(2, 1), q(1, 2), q(-1, 1)]);
        assert_eq!(cert.normalized(), FarkasCertificate::from_integers(&[4, 1, -2]));
        assert_eq!(cert.to_string(), "2 1/2 -1");
    }
}
