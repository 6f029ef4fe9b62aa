//! History vectors: amplitudes of every outcome sequence of a schedule.

use crate::error::{Error, Result};
use crate::history::schedule::{HistoryIndex, MeasurementEvent, Schedule, STRUCTURAL_TOL};
use crate::linalg::{inner, ComplexMatrix, C64};

/// Histories with `|A| ≤ 1e-14` are not stored.
pub const PRUNE_AMPLITUDE: f64 = 1e-14;
const PRUNE_PROBABILITY: f64 = PRUNE_AMPLITUDE * PRUNE_AMPLITUDE;

/// `C_α = P_{α_n} U_n ⋯ P_{α_1} U_1 P_ψ`
pub fn chain_operator(s: &Schedule, alpha: &HistoryIndex) -> Result<ComplexMatrix> {
    alpha.validate(s.events())?;
    let psi = s.initial().amplitudes();
    let mut c = ComplexMatrix::outer(psi, psi);
    for ((u, event), &k) in s.steps().zip(alpha.positions()) {
        c = event.outcomes()[k].projector().matmul(&u.matmul(&c)?)?;
    }
    Ok(c)
}

/// Unnormalized state after evolving and projecting along `alpha`.
fn branch_state(s: &Schedule, alpha: &HistoryIndex) -> Result<Vec<C64>> {
    alpha.validate(s.events())?;
    let mut v = s.initial().amplitudes().to_vec();
    for ((u, event), &k) in s.steps().zip(alpha.positions()) {
        v = event.outcomes()[k].projector().apply(&u.apply(&v)?)?;
    }
    Ok(v)
}

/// `⟨α_n| U_n P_{α_{n-1}} ⋯ P_{α_1} U_1 |ψ⟩`. Defined only when every
/// projector along the history has rank one.
pub fn amplitude(s: &Schedule, alpha: &HistoryIndex) -> Result<C64> {
    let v = branch_state(s, alpha)?;
    let ket = rank_one_final_ket(s.events(), alpha).ok_or_else(|| Error::AmplitudeUndefined {
        history: alpha.display(s.events()),
    })?;
    Ok(inner(&ket, &v))
}

fn rank_one_final_ket(events: &[MeasurementEvent], alpha: &HistoryIndex) -> Option<Vec<C64>> {
    let all_rank_one = events
        .iter()
        .zip(alpha.positions())
        .all(|(e, &k)| e.outcomes()[k].rank() == 1);
    if !all_rank_one {
        return None;
    }
    let last = events.last()?;
    last.outcomes()[*alpha.positions().last()?].basis_ket()
}

/// One stored history.
#[derive(Clone, Debug, PartialEq)]
pub struct HistoryTerm {
    pub index: HistoryIndex,
    pub probability: f64,
    /// Absent when some projector along the history has rank > 1.
    pub amplitude: Option<C64>,
}

/// `|Ψ⟩ = Σ_α A(α) |α_1⟩⊙⋯⊙|α_n⟩`, zero-amplitude histories omitted.
#[derive(Clone, Debug)]
pub struct HistoryVector {
    events: Vec<MeasurementEvent>,
    terms: Vec<HistoryTerm>,
}

impl HistoryVector {
    /// Wraps explicit amplitudes over the given events, e.g. to build
    /// product or hand-made history states.
    pub fn from_amplitudes(events: Vec<MeasurementEvent>, amplitudes: Vec<(HistoryIndex, C64)>) -> Result<Self> {
        let mut terms: Vec<HistoryTerm> = Vec::with_capacity(amplitudes.len());
        for (index, a) in amplitudes {
            index.validate(&events)?;
            if a.norm() <= PRUNE_AMPLITUDE {
                continue;
            }
            terms.push(HistoryTerm {
                index,
                probability: a.norm_sqr(),
                amplitude: Some(a),
            });
        }
        terms.sort_by(|a, b| a.index.cmp(&b.index));
        if terms.windows(2).any(|w| w[0].index == w[1].index) {
            return Err(Error::InvalidArgument("duplicate history in amplitude list".into()));
        }
        let hv = Self { events, terms };
        hv.check_normalization()?;
        Ok(hv)
    }

    fn check_normalization(&self) -> Result<()> {
        let total = self.total_probability();
        if (total - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NormalizationFailure { total });
        }
        Ok(())
    }

    pub fn events(&self) -> &[MeasurementEvent] {
        &self.events
    }

    pub fn n_times(&self) -> usize {
        self.events.len()
    }

    /// Stored histories in lexicographic order.
    pub fn terms(&self) -> &[HistoryTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, alpha: &HistoryIndex) -> Option<&HistoryTerm> {
        self.terms
            .binary_search_by(|t| t.index.cmp(alpha))
            .ok()
            .map(|i| &self.terms[i])
    }

    /// Amplitude of `alpha`: zero for pruned histories, `None` when the
    /// history has no scalar amplitude.
    pub fn amplitude(&self, alpha: &HistoryIndex) -> Option<C64> {
        match self.term(alpha) {
            Some(t) => t.amplitude,
            None => Some(C64::new(0.0, 0.0)),
        }
    }

    /// True when every stored history carries a scalar amplitude.
    pub fn has_amplitudes(&self) -> bool {
        self.terms.iter().all(|t| t.amplitude.is_some())
    }

    pub fn total_probability(&self) -> f64 {
        self.terms.iter().map(|t| t.probability).sum()
    }

    pub fn label(&self, alpha: &HistoryIndex) -> String {
        alpha.display(&self.events)
    }
}

/// Enumerates every outcome sequence depth-first in lexicographic order,
/// pruning a branch as soon as its state norm drops to the threshold (later
/// evolutions and projections cannot increase it).
pub fn build_history_vector(s: &Schedule) -> Result<HistoryVector> {
    let mut terms = Vec::new();
    let mut prefix = Vec::with_capacity(s.n_events());
    descend(s, 0, s.initial().amplitudes().to_vec(), &mut prefix, &mut terms)?;
    let hv = HistoryVector {
        events: s.events().to_vec(),
        terms,
    };
    hv.check_normalization()?;
    Ok(hv)
}

fn descend(
    s: &Schedule,
    depth: usize,
    state: Vec<C64>,
    prefix: &mut Vec<usize>,
    terms: &mut Vec<HistoryTerm>,
) -> Result<()> {
    let evolved = s.evolutions()[depth].apply(&state)?;
    let event = &s.events()[depth];
    for (k, outcome) in event.outcomes().iter().enumerate() {
        let branch = outcome.projector().apply(&evolved)?;
        let p: f64 = branch.iter().map(|z| z.norm_sqr()).sum();
        if p <= PRUNE_PROBABILITY {
            continue;
        }
        prefix.push(k);
        if depth + 1 == s.n_events() {
            let index = HistoryIndex(prefix.clone());
            let amplitude = rank_one_final_ket(s.events(), &index).map(|ket| inner(&ket, &branch));
            terms.push(HistoryTerm {
                index,
                probability: p,
                amplitude,
            });
        } else {
            descend(s, depth + 1, branch, prefix, terms)?;
        }
        prefix.pop();
    }
    Ok(())
}

/// `p(α) = |A(α)|²`, zero for histories not stored.
pub fn probability(hv: &HistoryVector, alpha: &HistoryIndex) -> f64 {
    hv.term(alpha).map_or(0.0, |t| t.probability)
}
