//! History density matrices, space and time reductions, separability and
//! entanglement entropies.

pub mod density;
pub mod partition;
pub mod separability;
pub mod signaling;

/// Relative threshold `σ₂/σ₁` below which a matrix counts as rank one.
pub const RANK_ONE_TOL: f64 = 1e-10;

pub use density::{
    density_from_history, mix, sequence_probabilities, sequence_probability, space_entanglement_entropy, space_reduce,
    temporal_entanglement_entropy, time_reduce, HistoryDensity,
};
pub use partition::{Side, SpacePartition};
pub use separability::{space_separability, time_separability, HistoryFactor, SeparabilityReport};
pub use signaling::{alice_only_schedule, no_signaling_check, SignalingReport, SignalingRow};
