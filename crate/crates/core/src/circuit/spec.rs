//! Circuits as alternating gate layers and measurement events.

use crate::error::{Error, Result};
use crate::circuit::gates::{layer_unitary, GateSpec};
use crate::history::{MeasurementEvent, Outcome, Schedule};
use crate::linalg::{ComplexMatrix, SpaceFactorization, StateVector, C64};

/// What is measured after a layer.
#[derive(Clone, Debug)]
pub enum MeasureSpec {
    /// Every qubit in the computational basis.
    Computational,
    /// Only these qubits, computational basis, identity on the others.
    Qubits(Vec<usize>),
    /// An explicit complete projector family.
    Custom(Vec<Outcome>),
}

#[derive(Clone, Debug)]
pub struct Layer {
    pub gates: Vec<GateSpec>,
    pub measure: MeasureSpec,
}

impl Layer {
    pub fn new(gates: Vec<GateSpec>, measure: MeasureSpec) -> Self {
        Self { gates, measure }
    }

    /// Layer of named gates, e.g. `&[("H", &[0])]`, followed by a full
    /// computational measurement.
    pub fn measured(gates: &[(&str, &[usize])]) -> Result<Self> {
        let gates = gates
            .iter()
            .map(|(name, targets)| GateSpec::named(name, targets))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(gates, MeasureSpec::Computational))
    }
}

#[derive(Clone, Debug)]
pub struct CircuitSpec {
    pub n_qubits: usize,
    pub initial: StateVector,
    pub layers: Vec<Layer>,
}

impl CircuitSpec {
    pub fn new(n_qubits: usize, initial: StateVector, layers: Vec<Layer>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        let dim = 1usize << n_qubits;
        if initial.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: format!("initial state of {n_qubits} qubits"),
                expected: dim,
                found: initial.dim(),
            });
        }
        Ok(Self {
            n_qubits,
            initial,
            layers,
        })
    }

    /// Compiles to a schedule with events at `t_1 … t_n`.
    pub fn to_schedule(&self) -> Result<Schedule> {
        let factors = SpaceFactorization::qubits(self.n_qubits)?;
        let steps = self
            .layers
            .iter()
            .enumerate()
            .map(|(i, layer)| {
                let time = i + 1;
                let u = layer_unitary(&layer.gates, self.n_qubits)?;
                let event = match &layer.measure {
                    MeasureSpec::Computational => MeasurementEvent::computational(time, &factors)?,
                    MeasureSpec::Qubits(q) => MeasurementEvent::computational_on(time, &factors, q)?,
                    MeasureSpec::Custom(outcomes) => MeasurementEvent::new(time, outcomes.clone())?,
                };
                Ok((u, event))
            })
            .collect::<Result<Vec<_>>>()?;
        Schedule::new(self.initial.clone(), steps)?.with_factors(factors)
    }
}

/// `|b₀b₁…⟩` for a bitstring, qubit 0 leftmost.
pub fn basis_state(bits: &str) -> Result<StateVector> {
    if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Parse(format!("basis state {bits:?} is not a bitstring")));
    }
    let index = usize::from_str_radix(bits, 2).map_err(|e| Error::Parse(e.to_string()))?;
    StateVector::basis(1usize << bits.len(), index)
}

/// Bell state `|β_xy⟩ = (|0y⟩ + (-1)^x |1ȳ⟩)/√2`, named by `xy`.
pub fn bell_state(name: &str) -> Result<StateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![C64::new(0.0, 0.0); 4];
    let (x, y) = match name {
        "00" => (0, 0),
        "01" => (0, 1),
        "10" => (1, 0),
        "11" => (1, 1),
        _ => return Err(Error::Parse(format!("unknown Bell state {name:?}"))),
    };
    v[y] = C64::new(h, 0.0);
    v[2 + (1 - y)] = C64::new(if x == 0 { h } else { -h }, 0.0);
    StateVector::new(v)
}

/// Single qubit `α|0⟩ + β|1⟩`; `|α|² + |β|²` must be one within `1e-12`.
pub fn qubit_state(alpha: C64, beta: C64) -> Result<StateVector> {
    StateVector::new(vec![alpha, beta])
}

/// Measurement projectors from explicit matrices.
pub fn custom_measurement(outcomes: Vec<(String, ComplexMatrix)>) -> MeasureSpec {
    MeasureSpec::Custom(outcomes.into_iter().map(|(l, p)| Outcome::new(l, p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states() {
        assert_eq!(basis_state("10").unwrap().amplitudes()[2], C64::new(1.0, 0.0));
        assert!(basis_state("12").is_err());
        let b = bell_state("00").unwrap();
        assert!((b.amplitudes()[0] - b.amplitudes()[3]).norm() < 1e-15);
        let b11 = bell_state("11").unwrap();
        assert!((b11.amplitudes()[1] + b11.amplitudes()[2]).norm() < 1e-15);
        assert!(qubit_state(C64::new(1.0, 0.0), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn initial_state_size_must_match() {
        assert!(CircuitSpec::new(2, basis_state("0").unwrap(), vec![]).is_err());
    }

    #[test]
    fn layers_compose_in_declared_order() {
        // X then H on |0⟩ gives |−⟩; measuring in the computational basis
        // leaves equal weights
        let spec = CircuitSpec::new(
            1,
            basis_state("0").unwrap(),
            vec![Layer::measured(&[("X", &[0]), ("H", &[0])]).unwrap()],
        )
        .unwrap();
        let s = spec.to_schedule().unwrap();
        let u = &s.evolutions()[0];
        assert!(u[(1, 0)].re < 0.0);
        assert!(u[(0, 1)].re > 0.0);
    }
}
