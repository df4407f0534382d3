pub mod certificates;
pub mod combinatorics;
pub mod constructors;
pub mod decide;
pub mod error;
pub mod exec;
pub mod factorization;
pub mod format;
pub mod flow;
pub mod pipeline;
pub mod reducer;
pub mod search;
pub mod simplex;
pub mod sweep;
pub mod system;
pub mod verifier;
