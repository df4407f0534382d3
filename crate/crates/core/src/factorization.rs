use std::fmt;

use crate::combinatorics::{LevelSet, Subset};

/// A list of factors over `[n]`, each factor a list of sets.
///
/// Nothing here guarantees validity; see
/// [`verify_factorization`](crate::verifier::verify_factorization). The
/// constructor sorts the sets of every factor by smallest element, which is
/// the order the file format uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: usize,
    levels: LevelSet,
    factors: Vec<Vec<Subset>>,
}

pub(crate) fn sort_factor(factor: &mut [Subset]) {
    factor.sort_by_key(|&s| (s.min().unwrap_or(0), s.bits()));
}

impl Factorization {
    pub fn new(n: usize, levels: LevelSet, mut factors: Vec<Vec<Subset>>) -> Self {
        for f in &mut factors {
            sort_factor(f);
        }
        Self { n, levels, factors }
    }

    /// No factors; the factorization of an empty family.
    pub fn empty(n: usize, levels: LevelSet) -> Self {
        Self::new(n, levels, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &LevelSet {
        &self.levels
    }

    pub fn factors(&self) -> &[Vec<Subset>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn into_factors(self) -> Vec<Vec<Subset>> {
        self.factors
    }

    /// Total number of sets over all factors.
    pub fn set_count(&self) -> usize {
        self.factors.iter().map(Vec::len).sum()
    }

    /// Every set, factor by factor.
    pub fn sets(&self) -> impl Iterator<Item = Subset> + '_ {
        self.factors.iter().flatten().copied()
    }
}

impl fmt::Display for Factorization {
    /// One factor per line, sets separated by ` | `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.factors {
            for (i, s) in factor.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{s}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> Subset {
        Subset::from_elements(e.iter().copied()).unwrap()
    }

    #[test]
    fn factors_sorted_by_minimum() {
        let f = Factorization::new(
            4,
            LevelSet::new([2]).unwrap(),
            vec![vec![set(&[2, 4]), set(&[1, 3])]],
        );
        assert_eq!(f.factors()[0], vec![set(&[1, 3]), set(&[2, 4])]);
        assert_eq!(f.to_string(), "{1,3} | {2,4}\n");
        assert_eq!(f.set_count(), 2);
    }
}
