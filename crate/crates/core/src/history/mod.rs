//! Schedules, history vectors and their probability diagnostics.

pub mod diagnostics;
pub mod schedule;
pub mod vector;

pub use diagnostics::{decoherence_functional, is_consistent_set, marginal_check, ConsistencyReport, MarginalReport};
pub use schedule::{HistoryIndex, MeasurementEvent, Outcome, Schedule, STRUCTURAL_TOL};
pub use vector::{amplitude, build_history_vector, chain_operator, probability, HistoryTerm, HistoryVector};
