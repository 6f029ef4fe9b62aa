//! Canonical schedules: the two-qubit entangler, three-qubit teleportation
//! and the single-qubit double slit (H, measure, H, measure).

use crate::circuit::gates::GateSpec;
use crate::circuit::spec::{basis_state, bell_state, qubit_state, CircuitSpec, Layer, MeasureSpec};
use crate::error::Result;
use crate::history::Schedule;
use crate::linalg::C64;

/// `|00⟩`, then `H⊗I` and a computational measurement at `t_1`, then
/// `CNOT` and a computational measurement at `t_2`.
pub fn entangler_circuit() -> Result<CircuitSpec> {
    CircuitSpec::new(
        2,
        basis_state("00")?,
        vec![
            Layer::measured(&[("H", &[0])])?,
            Layer::measured(&[("CNOT", &[0, 1])])?,
        ],
    )
}

pub fn entangler_schedule() -> Result<Schedule> {
    entangler_circuit()?.to_schedule()
}

/// `(α|0⟩ + β|1⟩) ⊗ |β₀₀⟩` measured at `t_1`, then `CNOT₁,₂` and a
/// measurement at `t_2`, then `H₁` and a measurement at `t_3`. Qubits 0 and 1
/// are Alice's, qubit 2 is Bob's. No classically controlled corrections
/// follow `t_3`.
pub fn teleportation_circuit(alpha: C64, beta: C64) -> Result<CircuitSpec> {
    let initial = qubit_state(alpha, beta)?.tensor(&bell_state("00")?);
    CircuitSpec::new(
        3,
        initial,
        vec![
            Layer::new(vec![], MeasureSpec::Computational),
            Layer::measured(&[("CNOT", &[0, 1])])?,
            Layer::measured(&[("H", &[0])])?,
        ],
    )
}

pub fn teleportation_schedule(alpha: C64, beta: C64) -> Result<Schedule> {
    teleportation_circuit(alpha, beta)?.to_schedule()
}

/// Teleportation with `α = √p`, `β = √(1 − p)`.
pub fn teleportation_schedule_p(p: f64) -> Result<Schedule> {
    teleportation_schedule(C64::new(p.sqrt(), 0.0), C64::new((1.0 - p).sqrt(), 0.0))
}

/// `|0⟩`, `H`, measure, `H`, measure: the two paths to the final outcome
/// interfere, so the histories do not form a consistent set.
pub fn double_slit_schedule() -> Result<Schedule> {
    let h = || GateSpec::named("H", &[0]);
    CircuitSpec::new(
        1,
        basis_state("0")?,
        vec![
            Layer::new(vec![h()?], MeasureSpec::Computational),
            Layer::new(vec![h()?], MeasureSpec::Computational),
        ],
    )?
    .to_schedule()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid_schedules() {
        let e = entangler_schedule().unwrap();
        assert_eq!((e.dim(), e.n_events()), (4, 2));
        let t = teleportation_schedule_p(0.3).unwrap();
        assert_eq!((t.dim(), t.n_events()), (8, 3));
        assert_eq!(t.potential_histories(), 512);
        let d = double_slit_schedule().unwrap();
        assert_eq!((d.dim(), d.n_events()), (2, 2));
    }

    #[test]
    fn unnormalized_teleportation_input_is_rejected() {
        assert!(teleportation_schedule(C64::new(1.0, 0.0), C64::new(0.5, 0.0)).is_err());
    }
}
