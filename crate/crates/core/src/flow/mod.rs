//! The flow-driven construction of a factorization from a solution of the
//! counting system.

pub mod evolution;
pub mod network;

pub use evolution::{
    build_step_network, check_occurrences, evolve_step, init_state, run, run_observed, EvolutionState,
    FlowOptions, LabeledPartition, LabeledSet, StepNetwork, StepReport,
};
pub use network::FlowNetwork;
