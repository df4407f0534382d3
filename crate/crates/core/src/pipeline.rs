//! From `(n, k)` or `(n, L)` to a verified factorization.
//!
//! A solution of the counting system is chosen (closed form, or found by
//! search for general level sets), turned into factors by the flow
//! evolution, and adjusted by the reducer where the construction works on a
//! related problem. Nothing is returned without passing
//! [`verify_factorization`](crate::verifier::verify_factorization).

use crate::combinatorics::{LevelSet, Subset};
use crate::constructors::{construct_div, construct_general_l_div, construct_minus1, plan, Branch, Construction};
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::flow::{run_observed, EvolutionState, FlowOptions, StepReport};
use crate::reducer::{extend_by_complements, project_lift};
use crate::search::{integer_search_small, SearchLimits, SearchOutcome};
use crate::system::{build_system, SolutionVector};
use crate::verifier::ensure_valid;

/// Called after every flow step with the ground size reached and the
/// current partitions. Sub-problems report their own steps.
pub type Observer<'a> = dyn FnMut(&StepReport, &EvolutionState) + 'a;

pub fn construct(n: usize, k: usize) -> Result<Factorization> {
    construct_with(n, k, &FlowOptions::default(), &mut |_, _| {})
}

/// A verified factorization of `binom([n], ≤k)`.
pub fn construct_with(n: usize, k: usize, options: &FlowOptions, observer: &mut Observer<'_>) -> Result<Factorization> {
    let f = build(n, k, options, observer)?;
    ensure_valid(&f).map_err(internal)?;
    Ok(f)
}

pub fn construct_general(n: usize, levels: &LevelSet) -> Result<Factorization> {
    construct_general_with(n, levels, &FlowOptions::default(), &mut |_, _| {})
}

/// A verified factorization of `binom([n], L)`.
///
/// Initial segments go through [`construct_with`]. Other level sets use
/// the divisible pattern when it applies and otherwise a solution found by
/// bounded search; a system with no solution is [`Error::NotFactorable`].
pub fn construct_general_with(
    n: usize,
    levels: &LevelSet,
    options: &FlowOptions,
    observer: &mut Observer<'_>,
) -> Result<Factorization> {
    levels.check_for(n)?;
    if levels.is_initial_segment() {
        return construct_with(n, levels.max(), options, observer);
    }
    let x = match construct_general_l_div(n, levels) {
        Ok(x) => x,
        Err(Error::NotApplicable(why) | Error::Precondition(why)) => {
            log::debug!("divisible pattern does not apply ({why}); searching");
            let sys = build_system(n, levels)?;
            match integer_search_small(&sys, None, SearchLimits::default())? {
                SearchOutcome::Found(x) => x,
                SearchOutcome::Exhausted { .. } => {
                    return Err(Error::NotFactorable(format!(
                        "the system for n={n}, L={{{levels}}} has no non-negative integer solution"
                    )))
                }
                SearchOutcome::RationallyInfeasible(_) => {
                    return Err(Error::NotFactorable(format!(
                        "the system for n={n}, L={{{levels}}} has no non-negative solution"
                    )))
                }
            }
        }
        Err(e) => return Err(e),
    };
    construct_from_solution(n, levels, &x, options, observer)
}

/// Runs the flow evolution on a given solution and verifies the result.
pub fn construct_from_solution(
    n: usize,
    levels: &LevelSet,
    x: &SolutionVector,
    options: &FlowOptions,
    observer: &mut Observer<'_>,
) -> Result<Factorization> {
    let f = run_observed(n, levels, x, options, &mut *observer)?;
    ensure_valid(&f).map_err(internal)?;
    Ok(f)
}

fn internal(e: Error) -> Error {
    match e {
        Error::InvalidFactorization(m) => Error::Internal(format!("constructed factorization fails verification: {m}")),
        other => other,
    }
}

fn build(n: usize, k: usize, options: &FlowOptions, observer: &mut Observer<'_>) -> Result<Factorization> {
    let p = plan(n, k)?;
    log::debug!("construct n={n}, k={k}: {p}");
    let levels = LevelSet::up_to(k);
    match p.branch {
        Branch::TrivialSmall => {
            let singletons = (1..=n).map(|e| Subset::EMPTY.with(e)).collect();
            Ok(Factorization::new(n, levels, vec![singletons]))
        }
        Branch::WholeSet => {
            let inner = build(n, n - 1, options, observer)?;
            let mut factors = inner.into_factors();
            factors.push(vec![Subset::full(n)]);
            Ok(Factorization::new(n, levels, factors))
        }
        Branch::ComplementReduction => {
            let lower = n - k - 1;
            let inner = if lower == 0 {
                Factorization::empty(n, LevelSet::up_to(0))
            } else {
                build(n, lower, options, observer)?
            };
            extend_by_complements(&inner, k)
        }
        Branch::DivGeneric | Branch::DivEdge => {
            let x = construct_div(n, k)?;
            run_observed(n, &levels, &x, options, &mut *observer)
        }
        _ => match construct_minus1(n, k)? {
            Construction::Direct(x) => run_observed(n, &levels, &x, options, &mut *observer),
            Construction::Lifted { levels: lifted, x } => {
                let big = run_observed(n + 1, &lifted, &x, options, &mut *observer)?;
                let f = project_lift(&big)?;
                if *f.levels() != levels {
                    return Err(Error::Internal(format!(
                        "lift over {{{lifted}}} projects to {{{}}}, not [{k}]",
                        f.levels()
                    )));
                }
                Ok(f)
            }
            Construction::Split { levels: upper, x, lower } => {
                let top = run_observed(n, &upper, &x, options, &mut *observer)?;
                let bottom = build(n, lower, options, observer)?;
                let mut factors = top.into_factors();
                factors.extend(bottom.into_factors());
                Ok(Factorization::new(n, levels, factors))
            }
        },
    }
}
