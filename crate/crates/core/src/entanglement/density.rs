//! History density matrices and their space and time partial traces.
//!
//! Densities live on the span of the retained histories only (the pruned
//! basis), ordered lexicographically, so teleportation's eight histories give
//! an 8×8 matrix rather than a 512×512 one.

use std::collections::BTreeMap;

use crate::entanglement::partition::{Side, SpacePartition};
use crate::error::{Error, Result};
use crate::history::{HistoryIndex, HistoryVector, MeasurementEvent};
use crate::linalg::eigen::{POSITIVITY_TOL, TRACE_TOL};
use crate::linalg::{hermitian_eigenvalues, von_neumann_entropy, ComplexMatrix, C64, ZERO};

#[derive(Clone, Debug)]
pub struct HistoryDensity {
    events: Vec<MeasurementEvent>,
    basis: Vec<HistoryIndex>,
    matrix: ComplexMatrix,
}

impl HistoryDensity {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(events: Vec<MeasurementEvent>, basis: Vec<HistoryIndex>, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != basis.len() || !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                context: "history density versus its basis".into(),
                expected: basis.len(),
                found: matrix.rows(),
            });
        }
        for idx in &basis {
            idx.validate(&events)?;
        }
        if basis.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("density basis must be strictly increasing".into()));
        }
        let hd = Self { events, basis, matrix };
        hd.check_invariants()?;
        Ok(hd)
    }

    /// Hermitian within `1e-10`, eigenvalues `≥ -1e-10`, trace `1 ± 1e-9`.
    pub fn check_invariants(&self) -> Result<()> {
        let deviation = self.matrix.hermitian_deviation();
        if deviation > crate::linalg::eigen::HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                what: "history density".into(),
                deviation,
            });
        }
        let trace = self.matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceMismatch { trace });
        }
        if let Some(&min) = hermitian_eigenvalues(&self.matrix)?.last() {
            if min < -POSITIVITY_TOL {
                return Err(Error::NegativeEigenvalue { value: min });
            }
        }
        Ok(())
    }

    /// Measurement events of the retained times.
    pub fn events(&self) -> &[MeasurementEvent] {
        &self.events
    }

    /// Original time labels of the retained times.
    pub fn times(&self) -> Vec<usize> {
        self.events.iter().map(|e| e.time()).collect()
    }

    pub fn basis(&self) -> &[HistoryIndex] {
        &self.basis
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.basis.iter().map(|b| b.display(&self.events)).collect()
    }

    /// Entry `⟨α|ρ|β⟩` by history labels; zero outside the retained basis.
    pub fn entry(&self, alpha: &[&str], beta: &[&str]) -> Result<C64> {
        let a = HistoryIndex::from_labels(&self.events, alpha)?;
        let b = HistoryIndex::from_labels(&self.events, beta)?;
        Ok(match (self.position(&a), self.position(&b)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => ZERO,
        })
    }

    fn position(&self, alpha: &HistoryIndex) -> Option<usize> {
        self.basis.binary_search(alpha).ok()
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        von_neumann_entropy(&self.matrix)
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Whether this density is `|Ψ⟩⟨Ψ|` within `tol` on `Tr ρ² = 1`.
    pub fn is_pure(&self, tol: f64) -> bool {
        let purity = self.matrix.trace_inner(&self.matrix).map(|z| z.re).unwrap_or(0.0);
        (purity - 1.0).abs() <= tol
    }

    /// Partial trace over histories: entries with equal traced keys are
    /// summed into the cell given by their kept keys.
    fn reduce<K: Ord + Clone>(
        &self,
        events: Vec<MeasurementEvent>,
        split: impl Fn(&HistoryIndex) -> Result<(HistoryIndex, K)>,
    ) -> Result<HistoryDensity> {
        let keys = self.basis.iter().map(&split).collect::<Result<Vec<_>>>()?;
        let mut kept: Vec<HistoryIndex> = keys.iter().map(|(k, _)| k.clone()).collect();
        kept.sort();
        kept.dedup();
        let row_of: Vec<usize> = keys
            .iter()
            .map(|(k, _)| kept.binary_search(k).expect("collected above"))
            .collect();
        let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for (i, (_, t)) in keys.iter().enumerate() {
            groups.entry(t.clone()).or_default().push(i);
        }
        let mut out = ComplexMatrix::zeros(kept.len(), kept.len());
        for members in groups.values() {
            for &i in members {
                for &j in members {
                    out[(row_of[i], row_of[j])] += self.matrix[(i, j)];
                }
            }
        }
        Ok(HistoryDensity {
            events,
            basis: kept,
            matrix: out,
        })
    }
}

/// `ρ = |Ψ⟩⟨Ψ|` on the retained histories.
pub fn density_from_history(hv: &HistoryVector) -> Result<HistoryDensity> {
    let amplitudes = hv
        .terms()
        .iter()
        .map(|t| {
            t.amplitude.ok_or_else(|| Error::AmplitudeUndefined {
                history: hv.label(&t.index),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HistoryDensity {
        events: hv.events().to_vec(),
        basis: hv.terms().iter().map(|t| t.index.clone()).collect(),
        matrix: ComplexMatrix::outer(&amplitudes, &amplitudes),
    })
}

fn same_alphabets(a: &[MeasurementEvent], b: &[MeasurementEvent]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.time() == y.time()
                && x.outcomes().len() == y.outcomes().len()
                && x.outcomes().iter().zip(y.outcomes()).all(|(o, p)| o.label() == p.label())
        })
}

/// `Σ wᵢ ρᵢ` on the union of the retained bases.
pub fn mix(densities: &[(f64, &HistoryDensity)]) -> Result<HistoryDensity> {
    let Some((_, first)) = densities.first() else {
        return Err(Error::InvalidArgument("cannot mix an empty list of densities".into()));
    };
    if densities.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidArgument("mixture weights must be non-negative".into()));
    }
    let total: f64 = densities.iter().map(|(w, _)| w).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("mixture weights sum to {total}, expected 1")));
    }
    if let Some((_, odd)) = densities.iter().find(|(_, d)| !same_alphabets(&d.events, &first.events)) {
        return Err(Error::ScheduleMismatch(format!(
            "cannot mix densities over times {:?} and {:?} with different outcome alphabets",
            first.times(),
            odd.times()
        )));
    }
    let mut basis: Vec<HistoryIndex> = densities.iter().flat_map(|(_, d)| d.basis.iter().cloned()).collect();
    basis.sort();
    basis.dedup();
    let mut out = ComplexMatrix::zeros(basis.len(), basis.len());
    for (w, d) in densities {
        let map: Vec<usize> = d
            .basis
            .iter()
            .map(|b| basis.binary_search(b).expect("union contains every basis"))
            .collect();
        for (i, &r) in map.iter().enumerate() {
            for (j, &c) in map.iter().enumerate() {
                out[(r, c)] += d.matrix[(i, j)] * *w;
            }
        }
    }
    Ok(HistoryDensity {
        events: first.events.clone(),
        basis,
        matrix: out,
    })
}

/// `ρ^A = Tr_B ρ` (or `ρ^B`): traces out the other subsystem's outcomes at
/// every retained time. Every event must be a product measurement across the
/// partition.
pub fn space_reduce(hd: &HistoryDensity, part: &SpacePartition, keep: Side) -> Result<HistoryDensity> {
    let kept_events = hd
        .events
        .iter()
        .map(|e| part.reduce_event(e, keep))
        .collect::<Result<Vec<_>>>()?;
    let traced_events = hd
        .events
        .iter()
        .map(|e| part.reduce_event(e, keep.other()))
        .collect::<Result<Vec<_>>>()?;
    // outcome position -> (kept position, traced position), per time
    let tables: Vec<Vec<(usize, usize)>> = hd
        .events
        .iter()
        .zip(kept_events.iter().zip(&traced_events))
        .map(|(e, (ke, te))| {
            e.outcomes()
                .iter()
                .map(|o| {
                    let k = part.side_label(o.label(), keep).expect("validated by reduce_event");
                    let t = part.side_label(o.label(), keep.other()).expect("validated by reduce_event");
                    (ke.position(&k).expect("reduced"), te.position(&t).expect("reduced"))
                })
                .collect()
        })
        .collect();
    hd.reduce(kept_events, |idx| {
        let (k, t): (Vec<usize>, Vec<usize>) = idx
            .positions()
            .iter()
            .zip(&tables)
            .map(|(&p, table)| table[p])
            .unzip();
        Ok((HistoryIndex(k), t))
    })
}

/// `ρ^{J} = Tr_{K} ρ`: keeps the outcomes at the given time labels and
/// traces the rest. `keep_times` must be a non-empty strict subset of the
/// density's times.
pub fn time_reduce(hd: &HistoryDensity, keep_times: &[usize]) -> Result<HistoryDensity> {
    let times = hd.times();
    if keep_times.is_empty() {
        return Err(Error::InvalidArgument("time reduction needs at least one kept time".into()));
    }
    let mut keep: Vec<usize> = Vec::with_capacity(keep_times.len());
    for t in keep_times {
        let pos = times.iter().position(|x| x == t).ok_or_else(|| {
            Error::InvalidArgument(format!("time t{t} is not among the density's times {times:?}"))
        })?;
        if keep.contains(&pos) {
            return Err(Error::InvalidArgument(format!("time t{t} listed twice")));
        }
        keep.push(pos);
    }
    keep.sort_unstable();
    if keep.len() == times.len() {
        return Err(Error::InvalidArgument(
            "keeping every time is the identity; pass a strict subset".into(),
        ));
    }
    let traced: Vec<usize> = (0..times.len()).filter(|p| !keep.contains(p)).collect();
    let events = keep.iter().map(|&p| hd.events[p].clone()).collect();
    hd.reduce(events, |idx| {
        let k = keep.iter().map(|&p| idx.positions()[p]).collect();
        let t: Vec<usize> = traced.iter().map(|&p| idx.positions()[p]).collect();
        Ok((HistoryIndex(k), t))
    })
}

/// `p(α) = Tr(P_α ρ)` for a sequence over exactly the density's times.
pub fn sequence_probability(hd: &HistoryDensity, labels: &[&str]) -> Result<f64> {
    let alpha = HistoryIndex::from_labels(&hd.events, labels)?;
    Ok(hd.position(&alpha).map_or(0.0, |i| hd.matrix[(i, i)].re))
}

/// Every sequence with nonzero probability, in basis order.
pub fn sequence_probabilities(hd: &HistoryDensity) -> Vec<(String, f64)> {
    hd.basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.display(&hd.events), hd.matrix[(i, i)].re))
        .collect()
}

/// Von Neumann entropy of the time-reduced density.
pub fn temporal_entanglement_entropy(hd: &HistoryDensity, keep_times: &[usize]) -> Result<f64> {
    time_reduce(hd, keep_times)?.entropy()
}

/// Von Neumann entropy of the space-reduced density.
pub fn space_entanglement_entropy(hd: &HistoryDensity, part: &SpacePartition, keep: Side) -> Result<f64> {
    space_reduce(hd, part, keep)?.entropy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{entangler_schedule, teleportation_schedule_p};
    use crate::history::build_history_vector;

    fn entangler_density() -> HistoryDensity {
        density_from_history(&build_history_vector(&entangler_schedule().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn pure_density_has_zero_entropy() {
        let rho = entangler_density();
        assert_eq!(rho.dim(), 2);
        assert!(rho.is_pure(1e-12));
        assert!(rho.entropy().unwrap().abs() < 1e-9);
        let off = rho.entry(&["00", "00"], &["10", "11"]).unwrap();
        assert!((off.re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn entangler_reductions_are_maximally_mixed() {
        let rho = entangler_density();
        let part = SpacePartition::qubits(2, &[0]).unwrap();
        for side in [Side::A, Side::B] {
            let r = space_reduce(&rho, &part, side).unwrap();
            assert!((r.entropy().unwrap() - 1.0).abs() < 1e-9);
        }
        for t in [1, 2] {
            assert!((temporal_entanglement_entropy(&rho, &[t]).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn time_reduction_keeps_marginal_probabilities() {
        let rho = density_from_history(&build_history_vector(&teleportation_schedule_p(0.3).unwrap()).unwrap()).unwrap();
        let r = time_reduce(&rho, &[1]).unwrap();
        assert_eq!(r.times(), vec![1]);
        let p000 = sequence_probability(&r, &["000"]).unwrap();
        assert!((p000 - 0.15).abs() < 1e-12);
        let total: f64 = sequence_probabilities(&r).iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reductions_reject_bad_arguments() {
        let rho = entangler_density();
        assert!(time_reduce(&rho, &[]).is_err());
        assert!(time_reduce(&rho, &[1, 2]).is_err());
        assert!(time_reduce(&rho, &[3]).is_err());
        assert!(time_reduce(&rho, &[1, 1]).is_err());
    }

    #[test]
    fn equal_mixture_of_orthogonal_histories() {
        let rho = entangler_density();
        let swapped = HistoryDensity::new(
            rho.events().to_vec(),
            rho.basis().to_vec(),
            ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), ZERO]),
        )
        .unwrap();
        let m = mix(&[(0.5, &rho), (0.5, &swapped)]).unwrap();
        assert!(!m.is_pure(1e-6));
        assert!(m.entropy().unwrap() > 0.0);
        assert!(mix(&[(0.7, &rho), (0.7, &swapped)]).is_err());
    }

    #[test]
    fn new_rejects_non_density() {
        let rho = entangler_density();
        let bad = ComplexMatrix::diagonal(&[C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]);
        assert!(matches!(
            HistoryDensity::new(rho.events().to_vec(), rho.basis().to_vec(), bad),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }
}
