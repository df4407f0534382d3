//! The characterization table over a range of `(n, k)`, decided pair by
//! pair, optionally cross-checked against exhaustive integer search.

use crate::decide::{decide, Status};
use crate::error::Result;
use crate::exec::Execution;
use crate::search::{integer_search_small, SearchLimits};
use crate::system::build_system;
use crate::combinatorics::LevelSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub status: Status,
    pub reason: String,
    /// Whether bounded search finds an integer solution; only for
    /// `2k < n` and only when the search was requested.
    pub search_found: Option<bool>,
}

impl SweepRow {
    /// False when search ran and disagrees with the verdict.
    pub fn consistent(&self) -> bool {
        match self.search_found {
            None => true,
            Some(found) => found == (self.status == Status::Factorable),
        }
    }
}

/// Every `1 <= k <= n` for `n` in `1..=max_n`, in order of `n` then `k`.
pub fn sweep(max_n: usize, with_search: bool, exec: Execution) -> Result<Vec<SweepRow>> {
    let pairs: Vec<(usize, usize)> = (1..=max_n).flat_map(|n| (1..=n).map(move |k| (n, k))).collect();
    exec.map(&pairs, |&(n, k)| row(n, k, with_search))
        .into_iter()
        .collect()
}

fn row(n: usize, k: usize, with_search: bool) -> Result<SweepRow> {
    let v = decide(n, k)?;
    let search_found = if with_search && 2 * k < n {
        let sys = build_system(n, &LevelSet::up_to(k))?;
        let limits = SearchLimits {
            max_types: usize::MAX,
            ..SearchLimits::default()
        };
        Some(integer_search_small(&sys, None, limits)?.solution().is_some())
    } else {
        None
    };
    Ok(SweepRow {
        n,
        k,
        status: v.status,
        reason: v.reason,
        search_found,
    })
}

/// One line per row: `n k STATUS`.
pub fn render(rows: &[SweepRow]) -> String {
    rows.iter()
        .map(|r| format!("{} {} {}\n", r.n, r.k, r.status))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        let rows = sweep(8, true, Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 36);
        assert!(rows.iter().all(SweepRow::consistent));
        assert_eq!(rows, sweep(8, true, Execution::Parallel).unwrap());
        let seven_three = rows.iter().find(|r| (r.n, r.k) == (7, 3)).unwrap();
        assert_eq!(seven_three.status, Status::NotFactorable);
    }
}
