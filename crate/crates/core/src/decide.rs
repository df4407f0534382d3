//! Deciding whether `binom([n], L)` has a 1-factorization, with a witness
//! either way.
//!
//! For `L = [k]` the answer follows from the arithmetic of `n` and `k`:
//!
//! * `k = 1` always, `k = n` whenever `k = n-1` is;
//! * `n/2 <= k <= n-1` exactly when `[n-k-1]` is (the empty family is);
//! * `k < n/2` exactly when `k | n` and `n >= k(k-2)`, or `k | n+1` and
//!   `n >= k(⌈k/2⌉-1)-1`.
//!
//! Negative answers carry a Farkas certificate that has been checked
//! against the whole system. Other level sets are decided by certificates,
//! constructions and bounded search; when all of them run out the verdict
//! says so.

use std::fmt;

use crate::certificates::{make_certificate, CertificateFamily};
use crate::combinatorics::{count_types, LevelSet, MAX_N};
use crate::constructors::{construct_general_l_div, plan, plan_general_div, Branch, ConstructionPlan};
use crate::error::{Error, Result};
use crate::flow::FlowOptions;
use crate::pipeline::construct_from_solution;
use crate::search::{integer_search_small, SearchLimits, SearchOutcome};
use crate::simplex::{lp_feasible, LpOutcome};
use crate::system::{build_system, verify_certificate, FarkasCertificate, SolutionVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Factorable,
    NotFactorable,
    /// The rational relaxation is feasible but no integer answer was reached.
    RationallyFeasibleUnknownIntegral,
    Unknown,
}

impl Status {
    pub fn tag(self) -> &'static str {
        match self {
            Status::Factorable => "FACTORABLE",
            Status::NotFactorable => "NOT_FACTORABLE",
            Status::RationallyFeasibleUnknownIntegral => "RATIONALLY_FEASIBLE_UNKNOWN_INTEGRAL",
            Status::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// How [`construct`](crate::pipeline::construct) will build it.
    Plan(ConstructionPlan),
    /// A checked certificate for the system of `(n, levels)`, which for
    /// `n/2 <= k` is the reduced problem rather than the one asked about.
    Certificate {
        n: usize,
        levels: LevelSet,
        family: Option<CertificateFamily>,
        certificate: FarkasCertificate,
    },
    /// A non-negative integer solution of the system.
    Solution(SolutionVector),
    /// The integer search explored every branch.
    SearchExhausted { nodes: u64 },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Witness,
    pub reason: String,
}

impl Verdict {
    fn new(status: Status, witness: Witness, reason: impl Into<String>) -> Self {
        Self {
            status,
            witness,
            reason: reason.into(),
        }
    }

    pub fn certificate(&self) -> Option<&FarkasCertificate> {
        match &self.witness {
            Witness::Certificate { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.status, self.reason)
    }
}

/// Budgets for the general-level-set fallbacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideLimits {
    pub search: SearchLimits,
    /// Skip the exact simplex on systems with more rows than this.
    pub max_lp_types: u128,
    pub flow: FlowOptions,
}

impl Default for DecideLimits {
    fn default() -> Self {
        Self {
            search: SearchLimits::default(),
            max_lp_types: 5_000,
            flow: FlowOptions {
                check_invariants: false,
                ..FlowOptions::default()
            },
        }
    }
}

fn branch_reason(p: &ConstructionPlan) -> String {
    let (n, k) = (p.n, p.k);
    let words = match p.branch {
        Branch::TrivialSmall => "k = 1, all singletons form one factor (outside the range of the characterization)".to_string(),
        Branch::WholeSet => format!("k = n, [{n}] forms its own factor and the rest is k = {} (outside the range of the characterization)", n - 1),
        Branch::ComplementReduction => format!(
            "n/2 <= k <= n-1, complement pairs reduce to k' = {}",
            n - k - 1
        ),
        Branch::DivGeneric => format!("{k} divides {n} and {n} > k(k-2) = {}", k * (k - 2)),
        Branch::DivEdge => format!("{k} divides {n} = k(k-2)"),
        Branch::Minus1EvenLift | Branch::Minus1OddLift | Branch::Minus1OddAbc | Branch::Minus1OddRst => format!(
            "{n} ≡ -1 (mod {k}) and {n} >= k(⌈k/2⌉-1)-1 = {}",
            (k * (k.div_ceil(2) - 1)) as i64 - 1
        ),
        Branch::GeneralLDiv => format!("{k} divides {n}, divisible pattern"),
    };
    format!("{}: {words}", p.branch)
}

/// Certificate for `(n, [k])` known not to be factorable: a closed form if
/// one checks out, else the exact simplex on small systems.
fn negative(n: usize, levels: &LevelSet, why: &str) -> Result<Verdict> {
    if let Some(c) = make_certificate(n, levels) {
        return Ok(Verdict::new(
            Status::NotFactorable,
            Witness::Certificate {
                n,
                levels: levels.clone(),
                family: Some(c.family),
                certificate: c.certificate,
            },
            format!("{}: {why}", c.family),
        ));
    }
    if count_types(n, levels) <= DecideLimits::default().max_lp_types {
        let sys = build_system(n, levels)?;
        if let LpOutcome::Infeasible(cert) = lp_feasible(&sys) {
            return Ok(Verdict::new(
                Status::NotFactorable,
                Witness::Certificate {
                    n,
                    levels: levels.clone(),
                    family: None,
                    certificate: cert,
                },
                format!("LP_INFEASIBLE: {why}"),
            ));
        }
        if let SearchOutcome::Exhausted { nodes } = integer_search_small(&sys, None, SearchLimits::default())? {
            return Ok(Verdict::new(
                Status::NotFactorable,
                Witness::SearchExhausted { nodes },
                format!("SEARCH_EXHAUSTED: {why}"),
            ));
        }
    }
    Err(Error::Internal(format!(
        "no certificate found for n={n}, L={{{levels}}} although {why}"
    )))
}

/// Decides `binom([n], ≤k)` for `1 <= k <= n <= 64`.
pub fn decide(n: usize, k: usize) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::InvalidGroundSet(n));
    }
    if n > MAX_N {
        return Err(Error::GroundSetTooLarge { n, max: MAX_N });
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k must satisfy 1 <= k <= n, got k={k}, n={n}")));
    }
    match plan(n, k) {
        Ok(p) if p.branch == Branch::ComplementReduction => {
            let lower = n - k - 1;
            if lower == 0 {
                let reason = format!("{}: only complement pairs are needed", branch_reason(&p));
                return Ok(Verdict::new(Status::Factorable, Witness::Plan(p), reason));
            }
            let inner = decide(n, lower)?;
            let reason = format!("{}; for k' = {lower}: {}", branch_reason(&p), inner.reason);
            let witness = match inner.status {
                Status::Factorable => Witness::Plan(p),
                _ => inner.witness,
            };
            Ok(Verdict::new(inner.status, witness, reason))
        }
        Ok(p) => {
            let reason = branch_reason(&p);
            Ok(Verdict::new(Status::Factorable, Witness::Plan(p), reason))
        }
        Err(Error::NotFactorable(why)) => negative(n, &LevelSet::up_to(k), &why),
        Err(e) => Err(e),
    }
}

pub fn decide_general(n: usize, levels: &LevelSet) -> Result<Verdict> {
    decide_general_with(n, levels, &DecideLimits::default())
}

/// Decides `binom([n], L)`.
///
/// Initial segments are handed to [`decide`]. Otherwise, in order: closed
/// form certificates, the divisible pattern, bounded integer search, and
/// the exact rational relaxation. A solution counts only once the flow
/// construction from it has been verified, unless the construction is
/// beyond the work limits, in which case the checked solution itself is
/// the witness.
pub fn decide_general_with(n: usize, levels: &LevelSet, limits: &DecideLimits) -> Result<Verdict> {
    levels.check_for(n)?;
    if levels.is_initial_segment() {
        return decide(n, levels.max());
    }
    if let Some(c) = make_certificate(n, levels) {
        let reason = format!("{}: {}", c.family, c.family.describe());
        return Ok(Verdict::new(
            Status::NotFactorable,
            Witness::Certificate {
                n,
                levels: levels.clone(),
                family: Some(c.family),
                certificate: c.certificate,
            },
            reason,
        ));
    }

    if let Ok(x) = construct_general_l_div(n, levels) {
        let p = plan_general_div(n, levels);
        return positive(n, levels, x, limits, branch_reason(&p));
    }

    let types = count_types(n, levels);
    let mut notes = Vec::new();
    if types <= limits.search.max_types as u128 {
        let sys = build_system(n, levels)?;
        match integer_search_small(&sys, None, limits.search) {
            Ok(SearchOutcome::Found(x)) => {
                return positive(n, levels, x, limits, "SEARCH: integer solution found by bounded search".into())
            }
            Ok(SearchOutcome::Exhausted { nodes }) => {
                return Ok(Verdict::new(
                    Status::NotFactorable,
                    Witness::SearchExhausted { nodes },
                    format!("SEARCH_EXHAUSTED: no integer solution among {nodes} search nodes"),
                ))
            }
            Ok(SearchOutcome::RationallyInfeasible(cert)) => return Ok(infeasible(n, levels, cert)),
            Err(Error::LimitExceeded(m)) => notes.push(m),
            Err(e) => return Err(e),
        }
    } else {
        notes.push(format!("{types} types exceed the search limit of {}", limits.search.max_types));
    }

    if types <= limits.max_lp_types {
        let sys = build_system(n, levels)?;
        return Ok(match lp_feasible(&sys) {
            LpOutcome::Infeasible(cert) => infeasible(n, levels, cert),
            LpOutcome::Feasible(_) => Verdict::new(
                Status::RationallyFeasibleUnknownIntegral,
                Witness::None,
                format!("LP_FEASIBLE: the rational relaxation is feasible; {}", notes.join("; ")),
            ),
        });
    }
    notes.push(format!("{types} types exceed the LP limit of {}", limits.max_lp_types));
    Ok(Verdict::new(Status::Unknown, Witness::None, format!("UNKNOWN: {}", notes.join("; "))))
}

fn infeasible(n: usize, levels: &LevelSet, cert: FarkasCertificate) -> Verdict {
    Verdict::new(
        Status::NotFactorable,
        Witness::Certificate {
            n,
            levels: levels.clone(),
            family: None,
            certificate: cert,
        },
        "LP_INFEASIBLE: the rational relaxation has no non-negative solution",
    )
}

fn positive(n: usize, levels: &LevelSet, x: SolutionVector, limits: &DecideLimits, reason: String) -> Result<Verdict> {
    match construct_from_solution(n, levels, &x, &limits.flow, &mut |_, _| {}) {
        Ok(_) => Ok(Verdict::new(
            Status::Factorable,
            Witness::Solution(x),
            format!("{reason}; flow construction verified"),
        )),
        Err(Error::LimitExceeded(m)) => Ok(Verdict::new(
            Status::Factorable,
            Witness::Solution(x),
            format!("{reason}; construction skipped ({m})"),
        )),
        Err(e) => Err(e),
    }
}

/// Re-checks a certificate witness against its own system.
pub fn check_witness(v: &Verdict) -> Result<bool> {
    match &v.witness {
        Witness::Certificate { n, levels, certificate, .. } => {
            let sys = build_system(*n, levels)?;
            Ok(verify_certificate(&sys, certificate)?.is_valid())
        }
        _ => Ok(true),
    }
}
