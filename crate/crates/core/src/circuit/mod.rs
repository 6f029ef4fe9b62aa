//! Gate library and the canonical circuits.

pub mod fixtures;
pub mod gates;
pub mod spec;

pub use fixtures::{
    double_slit_schedule, entangler_circuit, entangler_schedule, teleportation_circuit, teleportation_schedule,
    teleportation_schedule_p,
};
pub use gates::{gate_matrix, layer_unitary, GateSpec};
pub use spec::{basis_state, bell_state, qubit_state, CircuitSpec, Layer, MeasureSpec};
