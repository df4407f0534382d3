//! Exhaustive depth-first search for non-negative integer solutions of a
//! small counting system. Serves as a brute-force oracle at desk scale.
//!
//! By default the root is first screened with the exact rational
//! relaxation: a system with no non-negative real solution has no integer
//! one either, and the depth-first search cannot prove that quickly once
//! the budgets reach the thousands.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::simplex::{lp_feasible, LpOutcome};
use crate::system::{FarkasCertificate, LinearSystem, SolutionVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Refuse systems with more rows than this.
    pub max_types: usize,
    /// Give up after this many search nodes.
    pub max_nodes: u64,
    /// Run the rational relaxation before searching.
    pub rational_precheck: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_types: 200,
            max_nodes: 20_000_000,
            rational_precheck: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(SolutionVector),
    /// The whole tree was explored without finding a solution.
    Exhausted { nodes: u64 },
    /// The rational relaxation is already infeasible; the certificate has
    /// been checked against the system.
    RationallyInfeasible(FarkasCertificate),
}

impl SearchOutcome {
    pub fn solution(&self) -> Option<&SolutionVector> {
        match self {
            SearchOutcome::Found(x) => Some(x),
            SearchOutcome::Exhausted { .. } | SearchOutcome::RationallyInfeasible(_) => None,
        }
    }
}

/// Failed `(depth, budgets)` states are remembered up to this many entries.
const MEMO_CAPACITY: usize = 1 << 21;

struct Searcher<'a> {
    rows: &'a [Vec<u64>],
    k: usize,
    /// `last_cover[i]`: last row index with a positive entry on level `i`.
    last_cover: Vec<Option<usize>>,
    bound: Option<u64>,
    nodes: u64,
    max_nodes: u64,
    chosen: Vec<u64>,
    failed: HashSet<(usize, Vec<u64>)>,
}

impl Searcher<'_> {
    fn cap(&self, row: &[u64], budget: &[u64]) -> u64 {
        let mut cap = self.bound.unwrap_or(u64::MAX);
        for (l, r) in row.iter().zip(budget) {
            if *l > 0 {
                cap = cap.min(r / l);
            }
        }
        cap
    }

    /// False when some level can no longer be filled by the remaining rows,
    /// even if each row were used as often as its own budget allows.
    fn reachable(&self, idx: usize, budget: &[u64]) -> bool {
        let mut cover = vec![0u128; self.k];
        for row in &self.rows[idx..] {
            let c = self.cap(row, budget) as u128;
            if c == 0 {
                continue;
            }
            for (i, l) in row.iter().enumerate() {
                cover[i] += *l as u128 * c;
            }
        }
        cover.iter().zip(budget).all(|(c, r)| *c >= *r as u128)
    }

    fn dfs(&mut self, idx: usize, budget: &mut Vec<u64>) -> Result<bool> {
        if budget.iter().all(|r| *r == 0) {
            for c in self.chosen[idx..].iter_mut() {
                *c = 0;
            }
            return Ok(true);
        }
        if idx == self.rows.len() {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::LimitExceeded(format!(
                "integer search exceeded {} nodes",
                self.max_nodes
            )));
        }
        if !self.reachable(idx, budget) {
            return Ok(false);
        }
        let key = (idx, budget.clone());
        if self.failed.contains(&key) {
            return Ok(false);
        }

        let row = &self.rows[idx];
        let cap = self.cap(row, budget);
        // A row that is the last one touching some unfinished level must
        // finish that level by itself.
        let mut forced: Option<u64> = None;
        for i in 0..self.k {
            if self.last_cover[i] == Some(idx) && budget[i] > 0 {
                if budget[i] % row[i] != 0 {
                    return self.fail(key);
                }
                let v = budget[i] / row[i];
                if forced.is_some_and(|f| f != v) || v > cap {
                    return self.fail(key);
                }
                forced = Some(v);
            }
        }
        let (hi, lo) = match forced {
            Some(v) => (v, v),
            None => (cap, 0),
        };
        let mut v = hi;
        loop {
            for (r, l) in budget.iter_mut().zip(row) {
                *r -= l * v;
            }
            self.chosen[idx] = v;
            let found = self.dfs(idx + 1, budget)?;
            for (r, l) in budget.iter_mut().zip(row) {
                *r += l * v;
            }
            if found {
                return Ok(true);
            }
            if v == lo {
                break;
            }
            v -= 1;
        }
        self.fail(key)
    }

    fn fail(&mut self, key: (usize, Vec<u64>)) -> Result<bool> {
        if self.failed.len() < MEMO_CAPACITY {
            self.failed.insert(key);
        }
        Ok(false)
    }
}

/// Searches for `x >= 0` integral with `A^T x = b`, trying types in
/// canonical order and larger multiplicities first. `bound` caps every
/// individual multiplicity.
pub fn integer_search_small(
    sys: &LinearSystem,
    bound: Option<&BigUint>,
    limits: SearchLimits,
) -> Result<SearchOutcome> {
    let types = sys.types();
    if types.len() > limits.max_types {
        return Err(Error::LimitExceeded(format!(
            "{} types exceed the search limit of {}",
            types.len(),
            limits.max_types
        )));
    }
    if limits.rational_precheck {
        if let LpOutcome::Infeasible(cert) = lp_feasible(sys) {
            return Ok(SearchOutcome::RationallyInfeasible(cert));
        }
    }
    let k = sys.width();
    let rows: Vec<Vec<u64>> = types
        .iter()
        .map(|t| t.as_slice().iter().map(|&v| v as u64).collect())
        .collect();
    let mut budget: Vec<u64> = sys
        .b()
        .iter()
        .map(|b| {
            b.to_u64()
                .ok_or_else(|| Error::LimitExceeded("level budget exceeds 64 bits".into()))
        })
        .collect::<Result<_>>()?;
    let last_cover = (0..k)
        .map(|i| rows.iter().rposition(|r| r[i] > 0))
        .collect();
    let bound = bound.map(|b| b.to_u64().unwrap_or(u64::MAX));
    let mut s = Searcher {
        rows: &rows,
        k,
        last_cover,
        bound,
        nodes: 0,
        max_nodes: limits.max_nodes,
        chosen: vec![0; rows.len()],
        failed: HashSet::new(),
    };
    if s.dfs(0, &mut budget)? {
        let x = SolutionVector::from_pairs(
            types
                .iter()
                .zip(&s.chosen)
                .map(|(t, &v)| (t.clone(), BigUint::from(v))),
        );
        Ok(SearchOutcome::Found(x))
    } else {
        Ok(SearchOutcome::Exhausted { nodes: s.nodes })
    }
}
