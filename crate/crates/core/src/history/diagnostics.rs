//! Decoherence functional, consistency test and probability sum rules.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::history::schedule::{HistoryIndex, Schedule, STRUCTURAL_TOL};
use crate::history::vector::{build_history_vector, chain_operator, HistoryVector};
use crate::linalg::{ComplexMatrix, C64};

/// `D(α, β) = Tr(C_α C_β†)`
pub fn decoherence_functional(s: &Schedule, alpha: &HistoryIndex, beta: &HistoryIndex) -> Result<C64> {
    chain_operator(s, alpha)?.trace_inner(&chain_operator(s, beta)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct Interference {
    pub first: String,
    pub second: String,
    /// `Re Tr(C_α C_β†)`; the decoherence condition asks for zero.
    pub real: f64,
    pub magnitude: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub histories: usize,
    pub pairs_checked: usize,
    /// Largest `|Re D(α, β)|` over distinct pairs.
    pub max_real: f64,
    /// Largest `|D(α, β)|` over distinct pairs, for information.
    pub max_magnitude: f64,
    pub violations: Vec<Interference>,
}

/// Weak decoherence test: `Re Tr(C_α C_β†) = 0` for every `α ≠ β` within
/// `tol`. Histories with vanishing amplitude have vanishing chain operators
/// and are skipped.
pub fn is_consistent_set(s: &Schedule, tol: f64) -> Result<ConsistencyReport> {
    let hv = build_history_vector(s)?;
    let chains: Vec<(String, ComplexMatrix)> = hv
        .terms()
        .iter()
        .map(|t| Ok((hv.label(&t.index), chain_operator(s, &t.index)?)))
        .collect::<Result<_>>()?;

    let mut report = ConsistencyReport {
        consistent: true,
        histories: chains.len(),
        pairs_checked: 0,
        max_real: 0.0,
        max_magnitude: 0.0,
        violations: Vec::new(),
    };
    for (i, (la, ca)) in chains.iter().enumerate() {
        for (lb, cb) in &chains[i + 1..] {
            let d = ca.trace_inner(cb)?;
            report.pairs_checked += 1;
            report.max_real = report.max_real.max(d.re.abs());
            report.max_magnitude = report.max_magnitude.max(d.norm());
            if d.re.abs() > tol {
                report.consistent = false;
                report.violations.push(Interference {
                    first: la.clone(),
                    second: lb.clone(),
                    real: d.re,
                    magnitude: d.norm(),
                });
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginalRow {
    pub history: String,
    /// Marginal of the full schedule's probabilities.
    pub summed: f64,
    /// Probability when the marginalized measurements are not performed.
    pub direct: f64,
}

impl MarginalRow {
    pub fn discrepancy(&self) -> f64 {
        (self.summed - self.direct).abs()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginalComparison {
    /// 1-based positions of the events summed over.
    pub summed_events: Vec<usize>,
    pub rows: Vec<MarginalRow>,
    pub max_discrepancy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginalReport {
    /// Sum over the last `drop_last` outcomes against the truncated schedule.
    pub last_time: MarginalComparison,
    /// Whether `last_time` agrees within the structural tolerance.
    pub last_time_holds: bool,
    /// Sum over each non-final event against the schedule without it.
    pub intermediate: Vec<MarginalComparison>,
}

impl MarginalReport {
    pub fn max_intermediate_discrepancy(&self) -> f64 {
        self.intermediate
            .iter()
            .map(|c| c.max_discrepancy)
            .fold(0.0, f64::max)
    }
}

fn compare(
    full: &HistoryVector,
    reduced: &HistoryVector,
    summed_events: &[usize],
) -> MarginalComparison {
    let keep: Vec<usize> = (0..full.n_times()).filter(|i| !summed_events.contains(i)).collect();
    let mut summed: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for t in full.terms() {
        let key: Vec<usize> = keep.iter().map(|&i| t.index.positions()[i]).collect();
        *summed.entry(key).or_default() += t.probability;
    }
    let mut direct: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for t in reduced.terms() {
        direct.insert(t.index.positions().to_vec(), t.probability);
    }
    let keys: std::collections::BTreeSet<Vec<usize>> = summed.keys().chain(direct.keys()).cloned().collect();
    let rows: Vec<MarginalRow> = keys
        .into_iter()
        .map(|k| MarginalRow {
            history: HistoryIndex(k.clone()).display(reduced.events()),
            summed: summed.get(&k).copied().unwrap_or(0.0),
            direct: direct.get(&k).copied().unwrap_or(0.0),
        })
        .collect();
    let max_discrepancy = rows.iter().map(MarginalRow::discrepancy).fold(0.0, f64::max);
    MarginalComparison {
        summed_events: summed_events.iter().map(|i| i + 1).collect(),
        rows,
        max_discrepancy,
    }
}

/// Compares marginals of the full schedule's probabilities against
/// schedules where the marginalized measurements are never made.
pub fn marginal_check(s: &Schedule, drop_last: usize) -> Result<MarginalReport> {
    let n = s.n_events();
    if drop_last == 0 || drop_last >= n {
        return Err(Error::InvalidArgument(format!(
            "drop_last must be in 1..{n}, got {drop_last}"
        )));
    }
    let full = build_history_vector(s)?;
    let truncated = build_history_vector(&s.truncated(n - drop_last)?)?;
    let dropped: Vec<usize> = (n - drop_last..n).collect();
    let last_time = compare(&full, &truncated, &dropped);
    let last_time_holds = last_time.max_discrepancy <= STRUCTURAL_TOL;

    let intermediate = (0..n - 1)
        .map(|i| {
            let without = build_history_vector(&s.without_event(i)?)?;
            Ok(compare(&full, &without, &[i]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarginalReport {
        last_time,
        last_time_holds,
        intermediate,
    })
}
