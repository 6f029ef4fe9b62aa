//! Named and custom qubit gates, embedded into `n`-qubit registers.
//!
//! Qubit 0 is the leftmost label and the most significant bit of a basis
//! index, so `H` on qubit 0 of three is `H ⊗ I ⊗ I`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::history::STRUCTURAL_TOL;
use crate::linalg::{ComplexMatrix, C64};

#[derive(Clone, Debug)]
pub struct GateSpec {
    name: String,
    targets: Vec<usize>,
    matrix: ComplexMatrix,
}

fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).expect("static gate table")
}

/// Matrix of a named gate and the number of qubits it acts on.
pub fn named_gate(name: &str) -> Option<ComplexMatrix> {
    let h = FRAC_1_SQRT_2;
    let i = C64::new(0.0, 1.0);
    let m = match name.to_ascii_uppercase().as_str() {
        "I" | "ID" => ComplexMatrix::identity(2),
        "H" => real(&[&[h, h], &[h, -h]]),
        "X" | "NOT" => real(&[&[0.0, 1.0], &[1.0, 0.0]]),
        "Y" => ComplexMatrix::from_rows(&[[C64::new(0.0, 0.0), -i], [i, C64::new(0.0, 0.0)]]).ok()?,
        "Z" => real(&[&[1.0, 0.0], &[0.0, -1.0]]),
        "S" => ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), i]),
        "T" => ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(h, h)]),
        "CNOT" | "CX" => real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]),
        "CZ" => real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
        ]),
        "SWAP" => real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]),
        _ => return None,
    };
    Some(m)
}

impl GateSpec {
    /// A gate from the built-in table: H, X, Y, Z, S, T, I, CNOT/CX
    /// (control first), CZ, SWAP.
    pub fn named(name: &str, targets: &[usize]) -> Result<Self> {
        let matrix = named_gate(name).ok_or_else(|| Error::InvalidArgument(format!("unknown gate {name:?}")))?;
        Self::custom(name.to_ascii_uppercase(), targets, matrix)
    }

    pub fn custom(name: impl Into<String>, targets: &[usize], matrix: ComplexMatrix) -> Result<Self> {
        let name = name.into();
        if targets.is_empty() {
            return Err(Error::InvalidArgument(format!("gate {name} has no targets")));
        }
        let mut sorted = targets.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != targets.len() {
            return Err(Error::InvalidArgument(format!("gate {name} has repeated targets {targets:?}")));
        }
        let dim = 1usize << targets.len();
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                context: format!("gate {name} on {} qubits", targets.len()),
                expected: dim,
                found: matrix.rows(),
            });
        }
        let deviation = matrix.unitary_deviation();
        if deviation > STRUCTURAL_TOL {
            return Err(Error::NotUnitary {
                what: format!("gate {name}"),
                deviation,
            });
        }
        Ok(Self {
            name,
            targets: targets.to_vec(),
            matrix,
        })
    }

    /// Parses `NAME(q0,q1,…)`, e.g. `H(0)` or `CNOT(0,1)`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Parse(format!("malformed gate {text:?}, expected NAME(q,...)"));
        let open = text.find('(').ok_or_else(bad)?;
        let inner = text[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let targets = inner
            .split(',')
            .map(|q| q.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::named(text[..open].trim(), &targets)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.targets.iter().map(|q| q.to_string()).collect();
        write!(f, "{}({})", self.name, t.join(","))
    }
}

/// `2ⁿ × 2ⁿ` unitary applying `g` to its targets and the identity elsewhere.
pub fn gate_matrix(g: &GateSpec, n_qubits: usize) -> Result<ComplexMatrix> {
    if let Some(&q) = g.targets.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::InvalidArgument(format!(
            "gate {g} targets qubit {q} of a {n_qubits}-qubit register"
        )));
    }
    let dim = 1usize << n_qubits;
    let bit = |index: usize, q: usize| (index >> (n_qubits - 1 - q)) & 1;
    let target_mask: usize = g.targets.iter().map(|&q| 1usize << (n_qubits - 1 - q)).sum();
    let local = |index: usize| g.targets.iter().fold(0usize, |acc, &q| (acc << 1) | bit(index, q));
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| {
        if (r & !target_mask) != (c & !target_mask) {
            C64::new(0.0, 0.0)
        } else {
            g.matrix[(local(r), local(c))]
        }
    }))
}

/// Product of the gates applied in the given order (first gate acts first).
pub fn layer_unitary(gates: &[GateSpec], n_qubits: usize) -> Result<ComplexMatrix> {
    gates.iter().try_fold(ComplexMatrix::identity(1usize << n_qubits), |acc, g| {
        gate_matrix(g, n_qubits)?.matmul(&acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    #[test]
    fn hadamard_on_first_of_three() {
        let h = GateSpec::named("H", &[0]).unwrap();
        let expected = kron(&kron(h.matrix(), &ComplexMatrix::identity(2)), &ComplexMatrix::identity(2));
        assert!(gate_matrix(&h, 3).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn cnot_on_first_pair_of_three() {
        let cnot = GateSpec::named("CNOT", &[0, 1]).unwrap();
        let expected = kron(cnot.matrix(), &ComplexMatrix::identity(2));
        assert!(gate_matrix(&cnot, 3).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn reversed_cnot_matches_conjugation_by_hadamards() {
        let rev = gate_matrix(&GateSpec::named("CNOT", &[1, 0]).unwrap(), 2).unwrap();
        let hh = layer_unitary(
            &[GateSpec::named("H", &[0]).unwrap(), GateSpec::named("H", &[1]).unwrap()],
            2,
        )
        .unwrap();
        let fwd = gate_matrix(&GateSpec::named("CNOT", &[0, 1]).unwrap(), 2).unwrap();
        let conj = hh.matmul(&fwd).unwrap().matmul(&hh).unwrap();
        assert!(rev.max_abs_diff(&conj) < 1e-15);
    }

    #[test]
    fn embedded_x_is_an_involution() {
        let x = gate_matrix(&GateSpec::named("X", &[2]).unwrap(), 3).unwrap();
        assert!(x.matmul(&x).unwrap().max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);
    }

    #[test]
    fn invalid_specs() {
        assert!(gate_matrix(&GateSpec::named("H", &[3]).unwrap(), 3).is_err());
        assert!(GateSpec::named("CNOT", &[1, 1]).is_err());
        assert!(GateSpec::named("CNOT", &[0]).is_err());
        assert!(GateSpec::named("FOO", &[0]).is_err());
        assert!(GateSpec::custom("bad", &[0], ComplexMatrix::identity(2).scale(C64::new(2.0, 0.0))).is_err());
        assert!(GateSpec::parse("H0").is_err());
        assert_eq!(GateSpec::parse(" cx(1, 0) ").unwrap().to_string(), "CX(1,0)");
    }
}
