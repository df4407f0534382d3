//! Growing `M` labeled partitions from `[0]` to `[n]`, one element per step.
//!
//! Every part carries a potential: the size it will have at the end. At
//! step `ℓ -> ℓ+1` each partition hands the new element to exactly one of
//! its parts, chosen by an integral maximum flow so that afterwards every
//! `S ⊆ [ℓ+1]` with potential `j` occurs exactly `C(n-ℓ-1, j-|S|)` times.
//! After `n` steps every set of `binom([n], L)` occurs exactly once.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{ToPrimitive, Zero};

use super::network::FlowNetwork;
use crate::combinatorics::{factor_count, LevelSet, PascalTable, Subset, TypeVector};
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::system::{residual, SolutionVector};

/// A growing set and the size it is destined to reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabeledSet {
    pub set: Subset,
    pub potential: usize,
}

impl LabeledSet {
    fn key(self) -> (u64, usize) {
        (self.set.bits(), self.potential)
    }
}

/// A partition of `[ℓ]` into labeled parts. Empty parts may repeat, so
/// the parts are a list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPartition {
    pub parts: Vec<LabeledSet>,
    pub lambda: TypeVector,
}

#[derive(Debug, Clone)]
pub struct EvolutionState {
    pub n: usize,
    pub levels: LevelSet,
    pub ell: usize,
    pub partitions: Vec<LabeledPartition>,
}

/// What one step did; `ell` is the ground size after the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepReport {
    pub ell: usize,
    pub flow_value: u128,
    pub occurrence_nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowOptions {
    /// Recount occurrences after every step.
    pub check_invariants: bool,
    /// Refuse solutions describing more factors than this.
    pub max_factors: u128,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            check_invariants: cfg!(debug_assertions),
            max_factors: 250_000,
        }
    }
}

/// The flow network of one step, with enough bookkeeping to decode it.
#[derive(Debug, Clone)]
pub struct StepNetwork {
    pub network: FlowNetwork,
    pub source: usize,
    pub sink: usize,
    /// Node of partition `i` is `partition_nodes[i]`.
    pub partition_nodes: Vec<usize>,
    /// Occurrence node for each `(bits, potential)` key, in canonical order.
    pub occurrences: BTreeMap<(u64, usize), usize>,
}

/// `x_λ` partitions of `|λ|` empty parts each, potentials taken from `λ`.
pub fn init_state(n: usize, levels: &LevelSet, x: &SolutionVector, options: &FlowOptions) -> Result<EvolutionState> {
    levels.check_for(n)?;
    let r = residual(n, levels, x)?;
    if let Some(i) = r.iter().position(|v| !v.is_zero()) {
        return Err(Error::Precondition(format!(
            "solution does not solve the system for n={n}, L={{{levels}}}: level {} is off by {}",
            i + 1,
            r[i]
        )));
    }
    let m = factor_count(n, levels);
    let total = x.total();
    assert_eq!(total, m, "a zero-residual solution describes exactly M factors");
    let m = m
        .to_u128()
        .filter(|&m| m <= options.max_factors)
        .ok_or_else(|| {
            Error::LimitExceeded(format!(
                "{total} factors for n={n}, L={{{levels}}} exceed the work limit of {}",
                options.max_factors
            ))
        })?;

    let mut partitions = Vec::with_capacity(m as usize);
    for (lambda, mult) in x.iter() {
        let mut parts = Vec::new();
        for j in levels.iter() {
            for _ in 0..lambda.get(j) {
                parts.push(LabeledSet {
                    set: Subset::EMPTY,
                    potential: j,
                });
            }
        }
        let p = LabeledPartition {
            parts,
            lambda: lambda.clone(),
        };
        let mult = mult.to_usize().expect("bounded by max_factors");
        partitions.extend(std::iter::repeat_n(p, mult));
    }
    Ok(EvolutionState {
        n,
        levels: levels.clone(),
        ell: 0,
        partitions,
    })
}

/// Source → partition (1), partition → `S^(j)` (`M + 1`), `S^(j)` → sink
/// (`C(n-ℓ-1, j-1-|S|)`), with occurrence nodes only for keys present.
pub fn build_step_network(state: &EvolutionState, pascal: &PascalTable) -> StepNetwork {
    let m = state.partitions.len();
    let keys: BTreeSet<(u64, usize)> = state
        .partitions
        .iter()
        .flat_map(|p| p.parts.iter().map(|s| s.key()))
        .collect();

    let mut network = FlowNetwork::new(2);
    let (source, sink) = (0, 1);
    let partition_nodes: Vec<usize> = (0..m).map(|_| network.add_node()).collect();
    let mut occurrences = BTreeMap::new();
    let rest = (state.n - state.ell - 1) as i64;
    for &(bits, j) in &keys {
        let node = network.add_node();
        occurrences.insert((bits, j), node);
        let size = bits.count_ones() as i64;
        network.add_arc(node, sink, pascal.get(rest, j as i64 - 1 - size));
    }
    let unbounded = m as u128 + 1;
    for (p, &node) in state.partitions.iter().zip(&partition_nodes) {
        network.add_arc(source, node, 1);
        let mine: BTreeSet<(u64, usize)> = p.parts.iter().map(|s| s.key()).collect();
        for key in mine {
            network.add_arc(node, occurrences[&key], unbounded);
        }
    }
    StepNetwork {
        network,
        source,
        sink,
        partition_nodes,
        occurrences,
    }
}

/// Adds element `ℓ+1` to one part of every partition.
pub fn evolve_step(state: &mut EvolutionState, pascal: &PascalTable, check: bool) -> Result<StepReport> {
    if state.ell >= state.n {
        return Err(Error::Precondition(format!("already at ℓ = n = {}", state.n)));
    }
    let mut step = build_step_network(state, pascal);
    let m = state.partitions.len() as u128;
    let value = step.network.max_flow(step.source, step.sink);
    if check {
        let net = step.network.check_flow(step.source, step.sink)?;
        if net != value {
            return Err(Error::Internal(format!("flow value {value} differs from net outflow {net}")));
        }
    }
    if value != m {
        return Err(Error::Internal(format!(
            "step ℓ={}: maximum flow {value} is below M = {m}",
            state.ell
        )));
    }

    let node_key: HashMap<usize, (u64, usize)> = step.occurrences.iter().map(|(&k, &v)| (v, k)).collect();
    let element = state.ell + 1;
    for (i, &node) in step.partition_nodes.iter().enumerate() {
        let mut chosen = None;
        for arc in step.network.out_arcs(node) {
            if step.network.flow(arc) == 0 {
                continue;
            }
            let key = node_key[&step.network.head(arc)];
            if step.network.flow(arc) != 1 || chosen.replace(key).is_some() {
                return Err(Error::Internal(format!(
                    "step ℓ={}: partition {i} does not send exactly one unit",
                    state.ell
                )));
            }
        }
        let (bits, j) = chosen.ok_or_else(|| {
            Error::Internal(format!("step ℓ={}: partition {i} receives no flow", state.ell))
        })?;
        if j <= bits.count_ones() as usize {
            return Err(Error::Internal(format!(
                "step ℓ={}: partition {i} would grow the full set {} with potential {j}",
                state.ell,
                Subset::from_bits(bits)
            )));
        }
        let part = state.partitions[i]
            .parts
            .iter_mut()
            .find(|s| s.key() == (bits, j))
            .expect("arc exists only for keys present in the partition");
        part.set.insert(element);
    }
    state.ell = element;
    if check {
        check_occurrences(state, pascal)?;
    }
    Ok(StepReport {
        ell: state.ell,
        flow_value: value,
        occurrence_nodes: step.occurrences.len(),
    })
}

/// Checks that every partition is a labeled partition of `[ℓ]` of its own
/// type, and that every `(S, j)` occurs exactly `C(n-ℓ, j-|S|)` times.
pub fn check_occurrences(state: &EvolutionState, pascal: &PascalTable) -> Result<()> {
    let full = Subset::full(state.ell);
    let mut counts: BTreeMap<(u64, usize), u128> = BTreeMap::new();
    for (i, p) in state.partitions.iter().enumerate() {
        let mut union = Subset::EMPTY;
        let mut per_level = vec![0u32; p.lambda.width()];
        for s in &p.parts {
            if !state.levels.contains(s.potential) || s.set.len() > s.potential {
                return Err(Error::Internal(format!(
                    "partition {i}: part {} has potential {}",
                    s.set, s.potential
                )));
            }
            if !union.is_disjoint(s.set) {
                return Err(Error::Internal(format!("partition {i}: parts overlap at {}", s.set)));
            }
            union = union.union(s.set);
            per_level[s.potential - 1] += 1;
            *counts.entry(s.key()).or_default() += 1;
        }
        if union != full {
            return Err(Error::Internal(format!("partition {i} covers {union}, not [{}]", state.ell)));
        }
        if per_level != p.lambda.as_slice() {
            return Err(Error::Internal(format!("partition {i} no longer has type {}", p.lambda)));
        }
    }

    let rest = (state.n - state.ell) as i64;
    let mut distinct: HashMap<(usize, usize), u128> = HashMap::new();
    for (&(bits, j), &c) in &counts {
        let size = bits.count_ones() as usize;
        let want = pascal.get(rest, (j - size) as i64);
        if c != want {
            return Err(Error::Internal(format!(
                "after ℓ={}: {} with potential {j} occurs {c} times, expected {want}",
                state.ell,
                Subset::from_bits(bits)
            )));
        }
        *distinct.entry((size, j)).or_default() += 1;
    }
    // Every S ⊆ [ℓ] that should occur does.
    for j in state.levels.iter() {
        for size in 0..=j.min(state.ell) {
            if pascal.get(rest, (j - size) as i64) == 0 {
                continue;
            }
            let have = distinct.get(&(size, j)).copied().unwrap_or(0);
            let want = pascal.get(state.ell as i64, size as i64);
            if have != want {
                return Err(Error::Internal(format!(
                    "after ℓ={}: {have} distinct {size}-sets carry potential {j}, expected {want}",
                    state.ell
                )));
            }
        }
    }
    Ok(())
}

/// Runs all `n` steps; see [`run_observed`].
pub fn run(n: usize, levels: &LevelSet, x: &SolutionVector, options: &FlowOptions) -> Result<Factorization> {
    run_observed(n, levels, x, options, |_, _| {})
}

/// Runs all `n` steps, calling `observer` after each one, and strips the
/// potentials from the final state.
pub fn run_observed(
    n: usize,
    levels: &LevelSet,
    x: &SolutionVector,
    options: &FlowOptions,
    mut observer: impl FnMut(&StepReport, &EvolutionState),
) -> Result<Factorization> {
    let mut state = init_state(n, levels, x, options)?;
    let pascal = PascalTable::new(n);
    if options.check_invariants {
        check_occurrences(&state, &pascal)?;
    }
    while state.ell < n {
        let report = evolve_step(&mut state, &pascal, options.check_invariants)?;
        log::trace!(
            "step ℓ={} flow={} occurrence nodes={}",
            report.ell,
            report.flow_value,
            report.occurrence_nodes
        );
        observer(&report, &state);
    }
    let mut factors = Vec::with_capacity(state.partitions.len());
    for p in state.partitions {
        let mut factor = Vec::with_capacity(p.parts.len());
        for s in p.parts {
            if s.set.len() != s.potential {
                return Err(Error::Internal(format!(
                    "final set {} has size {} but potential {}",
                    s.set,
                    s.set.len(),
                    s.potential
                )));
            }
            factor.push(s.set);
        }
        factors.push(factor);
    }
    Ok(Factorization::new(n, levels.clone(), factors))
}
