//! Bipartitions of a factorized space and the induced split of joint
//! measurement outcomes into per-subsystem outcomes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::history::{MeasurementEvent, Outcome, STRUCTURAL_TOL};
use crate::linalg::{kron, partial_trace, permute_factors, svd, ComplexMatrix, SpaceFactorization, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(Error::Parse(format!("expected side A or B, got {other:?}"))),
        }
    }
}

/// Subsystems `A` and `B` as two disjoint sets of tensor factors covering
/// all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacePartition {
    factors: SpaceFactorization,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl SpacePartition {
    pub fn new(factors: SpaceFactorization, a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
        all.sort_unstable();
        if a.is_empty() || b.is_empty() || all != (0..factors.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument(format!(
                "partition A={a:?} B={b:?} must split factors 0..{} into two non-empty disjoint sets",
                factors.len()
            )));
        }
        let (mut a, mut b) = (a, b);
        a.sort_unstable();
        b.sort_unstable();
        Ok(Self { factors, a, b })
    }

    /// Qubits `a` versus the rest.
    pub fn qubits(n: usize, a: &[usize]) -> Result<Self> {
        let b = (0..n).filter(|q| !a.contains(q)).collect();
        Self::new(SpaceFactorization::qubits(n)?, a.to_vec(), b)
    }

    pub fn factors(&self) -> &SpaceFactorization {
        &self.factors
    }

    pub fn side(&self, side: Side) -> &[usize] {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            factors: self.factors.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn side_dim(&self, side: Side) -> usize {
        self.side(side).iter().map(|&f| self.factors.dims()[f]).product()
    }

    /// Splits a joint outcome label into one part per factor: comma-separated
    /// labels split on commas, otherwise one character per factor.
    pub fn split_label(&self, label: &str) -> Option<Vec<String>> {
        let parts: Vec<String> = if label.contains(',') {
            label.split(',').map(|s| s.trim().to_string()).collect()
        } else {
            label.chars().map(String::from).collect()
        };
        (parts.len() == self.factors.len()).then_some(parts)
    }

    /// The part of a joint label that belongs to `side`.
    pub fn side_label(&self, label: &str, side: Side) -> Option<String> {
        let parts = self.split_label(label)?;
        let picked: Vec<&str> = self.side(side).iter().map(|&f| parts[f].as_str()).collect();
        Some(if label.contains(',') { picked.join(",") } else { picked.concat() })
    }

    /// Operator on the side's factors lifted to the full space as
    /// `op ⊗ I` (in original factor order).
    pub fn embed(&self, op: &ComplexMatrix, side: Side) -> Result<ComplexMatrix> {
        let other = ComplexMatrix::identity(self.side_dim(side.other()));
        let (first, second) = match side {
            Side::A => (op, &other),
            Side::B => (&other, op),
        };
        self.ungroup(&kron(first, second))
    }

    /// Reorders an operator from factor order `A ++ B` back to the original
    /// factor order.
    fn ungroup(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let grouped: Vec<usize> = self.a.iter().chain(&self.b).copied().collect();
        let grouped_dims = SpaceFactorization::new(grouped.iter().map(|&f| self.factors.dims()[f]).collect())?;
        let order: Vec<usize> = (0..self.factors.len())
            .map(|f| grouped.iter().position(|&g| g == f).expect("partition covers all factors"))
            .collect();
        permute_factors(m, &grouped_dims, &order)
    }

    fn to_grouped(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let grouped: Vec<usize> = self.a.iter().chain(&self.b).copied().collect();
        permute_factors(m, &self.factors, &grouped)
    }

    /// `(σ₂/σ₁, factors)` of the operator-Schmidt decomposition of `m` across
    /// the cut; `m = X ⊗ Y` exactly when the ratio vanishes.
    pub fn operator_schmidt_ratio(&self, m: &ComplexMatrix) -> Result<f64> {
        let grouped = self.to_grouped(m)?;
        let (da, db) = (self.side_dim(Side::A), self.side_dim(Side::B));
        let realigned = ComplexMatrix::from_fn(da * da, db * db, |r, c| {
            let (ia, ja) = (r / da, r % da);
            let (ib, jb) = (c / db, c % db);
            grouped[(ia * db + ib, ja * db + jb)]
        });
        let s = svd(&realigned)?;
        let s1 = s.singular_values.first().copied().unwrap_or(0.0);
        let s2 = s.singular_values.get(1).copied().unwrap_or(0.0);
        Ok(if s1 == 0.0 { 0.0 } else { s2 / s1 })
    }

    /// Whether `U = U_A ⊗ U_B` up to `σ₂/σ₁ ≤ 1e-10`.
    pub fn factorizes(&self, m: &ComplexMatrix) -> Result<bool> {
        Ok(self.operator_schmidt_ratio(m)? <= super::RANK_ONE_TOL)
    }

    /// The measurement a subsystem sees when the joint event is a product
    /// measurement `P_{ab} = Q_a ⊗ R_b`. Fails when some projector does not
    /// factorize, or labels do not split consistently with the projectors.
    pub fn reduce_event(&self, event: &MeasurementEvent, side: Side) -> Result<MeasurementEvent> {
        if event.dim() != self.factors.total_dim() {
            return Err(Error::DimensionMismatch {
                context: format!("measurement at {} versus partition", event.time_name()),
                expected: self.factors.total_dim(),
                found: event.dim(),
            });
        }
        let time = event.time_name();
        let mut reduced: Vec<(String, ComplexMatrix)> = Vec::new();
        for outcome in event.outcomes() {
            let label = outcome.label();
            let not_factorizable = |reason: String| Error::NotFactorizable {
                time: time.clone(),
                label: label.to_string(),
                reason,
            };
            let a_label = self
                .side_label(label, Side::A)
                .ok_or_else(|| not_factorizable(format!("label does not have one part per factor ({})", self.factors.len())))?;
            let b_label = self.side_label(label, Side::B).expect("split succeeded above");
            let q = local_projector(outcome.projector(), &self.factors, &self.a);
            let r = local_projector(outcome.projector(), &self.factors, &self.b);
            let product = self.ungroup(&kron(&q, &r))?;
            let deviation = product.max_abs_diff(outcome.projector());
            if deviation > STRUCTURAL_TOL {
                return Err(not_factorizable(format!(
                    "projector is not a product across the cut (deviation {deviation:.3e})"
                )));
            }
            let (side_label, side_proj) = match side {
                Side::A => (a_label, q),
                Side::B => (b_label, r),
            };
            match reduced.iter().find(|(l, _)| *l == side_label) {
                Some((_, existing)) => {
                    let deviation = existing.max_abs_diff(&side_proj);
                    if deviation > STRUCTURAL_TOL {
                        return Err(not_factorizable(format!(
                            "subsystem outcome {side_label:?} appears with different projectors"
                        )));
                    }
                }
                None => reduced.push((side_label, side_proj)),
            }
        }
        let outcomes = reduced.into_iter().map(|(l, p)| Outcome::new(l, p)).collect();
        MeasurementEvent::new(event.time(), outcomes).map_err(|e| Error::NotFactorizable {
            time,
            label: "*".into(),
            reason: format!("subsystem outcomes do not form a measurement: {e}"),
        })
    }
}

/// For a product projector `P = Q ⊗ R` recovers `Q` on `keep`:
/// `X = Tr_rest P = Q·Tr R` and `Tr R = Tr X² / Tr X`.
fn local_projector(p: &ComplexMatrix, factors: &SpaceFactorization, keep: &[usize]) -> ComplexMatrix {
    let x = partial_trace(p, factors, keep).expect("partition factors are valid");
    let tr = x.trace().re;
    if tr.abs() < STRUCTURAL_TOL {
        return x;
    }
    let tr_sq = x.matmul(&x).expect("square").trace().re;
    x.scale(C64::new(tr / tr_sq, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gate_matrix, GateSpec};

    #[test]
    fn partition_validation() {
        let f = SpaceFactorization::qubits(3).unwrap();
        assert!(SpacePartition::new(f.clone(), vec![0], vec![1]).is_err());
        assert!(SpacePartition::new(f.clone(), vec![0, 1], vec![1, 2]).is_err());
        assert!(SpacePartition::new(f.clone(), vec![], vec![0, 1, 2]).is_err());
        let p = SpacePartition::new(f, vec![2, 0], vec![1]).unwrap();
        assert_eq!(p.side(Side::A), &[0, 2]);
        assert_eq!(p.side_label("011", Side::A).unwrap(), "01");
        assert_eq!(p.side_label("011", Side::B).unwrap(), "1");
        assert!(p.side_label("01", Side::A).is_none());
    }

    #[test]
    fn computational_event_reduces_per_side() {
        let f = SpaceFactorization::qubits(3).unwrap();
        let p = SpacePartition::new(f.clone(), vec![0, 2], vec![1]).unwrap();
        let e = MeasurementEvent::computational(1, &f).unwrap();
        let ra = p.reduce_event(&e, Side::A).unwrap();
        let labels: Vec<&str> = ra.outcomes().iter().map(|o| o.label()).collect();
        assert_eq!(labels, ["00", "01", "10", "11"]);
        let rb = p.reduce_event(&e, Side::B).unwrap();
        assert_eq!(rb.outcomes().len(), 2);
        assert!(rb.is_rank_one());
    }

    #[test]
    fn bell_measurement_is_not_factorizable() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| C64::new(x, 0.0);
        let kets = vec![
            ("00".to_string(), vec![c(h), c(0.0), c(0.0), c(h)]),
            ("01".to_string(), vec![c(h), c(0.0), c(0.0), c(-h)]),
            ("10".to_string(), vec![c(0.0), c(h), c(h), c(0.0)]),
            ("11".to_string(), vec![c(0.0), c(h), c(-h), c(0.0)]),
        ];
        let e = MeasurementEvent::from_kets(1, kets).unwrap();
        let p = SpacePartition::qubits(2, &[0]).unwrap();
        assert!(matches!(p.reduce_event(&e, Side::A), Err(Error::NotFactorizable { .. })));
    }

    #[test]
    fn operator_factorization() {
        let p = SpacePartition::qubits(2, &[0]).unwrap();
        let hh = gate_matrix(&GateSpec::named("H", &[0]).unwrap(), 2)
            .unwrap()
            .matmul(&gate_matrix(&GateSpec::named("X", &[1]).unwrap(), 2).unwrap())
            .unwrap();
        assert!(p.factorizes(&hh).unwrap());
        let cnot = gate_matrix(&GateSpec::named("CNOT", &[0, 1]).unwrap(), 2).unwrap();
        assert!(!p.factorizes(&cnot).unwrap());
        // X on B has zero trace, so trace-based factor recovery would fail here
        let x_on_b = gate_matrix(&GateSpec::named("X", &[1]).unwrap(), 2).unwrap();
        assert!(p.factorizes(&x_on_b).unwrap());
    }

    #[test]
    fn embed_places_operator_on_its_side() {
        let f = SpaceFactorization::qubits(3).unwrap();
        let p = SpacePartition::new(f, vec![1], vec![0, 2]).unwrap();
        let x = gate_matrix(&GateSpec::named("X", &[0]).unwrap(), 1).unwrap();
        let embedded = p.embed(&x, Side::A).unwrap();
        let expected = gate_matrix(&GateSpec::named("X", &[1]).unwrap(), 3).unwrap();
        assert!(embedded.max_abs_diff(&expected) < 1e-15);
    }
}
