//! Alice's sequence statistics with and without Bob's measurements.
//!
//! With Bob measuring, Alice's probability is the `B`-marginal
//! `Σ_β |A(α, β)|²`; without, it is `|Σ_β A(α, β)|²`. The two agree whenever
//! every evolution factorizes as `U_A ⊗ U_B`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::entanglement::partition::{Side, SpacePartition};
use crate::error::{Error, Result};
use crate::history::{build_history_vector, MeasurementEvent, Outcome, Schedule, STRUCTURAL_TOL};

#[derive(Clone, Debug, Serialize)]
pub struct SignalingRow {
    pub history: String,
    /// Alice's marginal when Bob measures too.
    pub with_bob: f64,
    /// Alice's probability when only she measures.
    pub alice_only: f64,
}

impl SignalingRow {
    pub fn discrepancy(&self) -> f64 {
        (self.with_bob - self.alice_only).abs()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SignalingReport {
    /// Every evolution is a product across the cut.
    pub factorized_evolution: bool,
    pub rows: Vec<SignalingRow>,
    pub max_discrepancy: f64,
    /// False only when the evolution factorizes and the statistics still
    /// differ beyond `1e-10`, which would be a numerical fault.
    pub holds: bool,
}

/// The joint schedule with Bob's measuring devices switched off: each
/// product event `Q_a ⊗ R_b` becomes `Q_a ⊗ I`.
pub fn alice_only_schedule(joint: &Schedule, part: &SpacePartition) -> Result<Schedule> {
    let events = joint
        .events()
        .iter()
        .map(|e| {
            let reduced = part.reduce_event(e, Side::A)?;
            let outcomes = reduced
                .outcomes()
                .iter()
                .map(|o| Ok(Outcome::new(o.label(), part.embed(o.projector(), Side::A)?)))
                .collect::<Result<Vec<_>>>()?;
            MeasurementEvent::new(e.time(), outcomes)
        })
        .collect::<Result<Vec<_>>>()?;
    joint.with_events(events)
}

fn check_pairing(joint: &Schedule, alice: &Schedule, part: &SpacePartition) -> Result<Vec<MeasurementEvent>> {
    let mismatch = |what: String| Error::ScheduleMismatch(what);
    if joint.dim() != alice.dim() || joint.dim() != part.factors().total_dim() {
        return Err(mismatch(format!(
            "dimensions differ: joint {}, alice-only {}, partition {}",
            joint.dim(),
            alice.dim(),
            part.factors().total_dim()
        )));
    }
    if joint.n_events() != alice.n_events() {
        return Err(mismatch(format!(
            "joint schedule has {} events, alice-only has {}",
            joint.n_events(),
            alice.n_events()
        )));
    }
    let psi_diff = joint
        .initial()
        .amplitudes()
        .iter()
        .zip(alice.initial().amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if psi_diff > STRUCTURAL_TOL {
        return Err(mismatch("initial states differ".into()));
    }
    let mut reduced_events = Vec::new();
    for (i, ((uj, ej), (ua, ea))) in joint.steps().zip(alice.steps()).enumerate() {
        if uj.max_abs_diff(ua) > STRUCTURAL_TOL {
            return Err(mismatch(format!("evolutions before event {} differ", i + 1)));
        }
        let reduced = part.reduce_event(ej, Side::A)?;
        for o in ea.outcomes() {
            let q = reduced.position(o.label()).ok_or_else(|| {
                mismatch(format!(
                    "alice-only outcome {:?} at {} has no counterpart in the joint event",
                    o.label(),
                    ea.time_name()
                ))
            })?;
            let expected = part.embed(reduced.outcomes()[q].projector(), Side::A)?;
            if expected.max_abs_diff(o.projector()) > STRUCTURAL_TOL {
                return Err(mismatch(format!(
                    "alice-only projector {:?} at {} is not the joint A-projector tensored with the identity",
                    o.label(),
                    ea.time_name()
                )));
            }
        }
        if ea.outcomes().len() != reduced.outcomes().len() {
            return Err(mismatch(format!("outcome sets at {} differ", ea.time_name())));
        }
        reduced_events.push(reduced);
    }
    Ok(reduced_events)
}

/// Compares Alice's statistics in `joint` (product `A ⊗ B` events, Bob's
/// outcomes summed out) with those in `alice_only` (her projectors ⊗ `I`).
pub fn no_signaling_check(joint: &Schedule, alice_only: &Schedule, part: &SpacePartition) -> Result<SignalingReport> {
    check_pairing(joint, alice_only, part)?;
    let hv_joint = build_history_vector(joint)?;
    let hv_alice = build_history_vector(alice_only)?;

    let mut with_bob: BTreeMap<Vec<String>, f64> = BTreeMap::new();
    for t in hv_joint.terms() {
        let key: Vec<String> = t
            .index
            .labels(hv_joint.events())
            .iter()
            .map(|l| part.side_label(l, Side::A).expect("validated"))
            .collect();
        *with_bob.entry(key).or_default() += t.probability;
    }
    let alone: BTreeMap<Vec<String>, f64> = hv_alice
        .terms()
        .iter()
        .map(|t| {
            let key = t.index.labels(hv_alice.events()).iter().map(|s| s.to_string()).collect();
            (key, t.probability)
        })
        .collect();

    // order rows by alice-only outcome positions
    let keys: BTreeSet<Vec<usize>> = with_bob
        .keys()
        .chain(alone.keys())
        .map(|k| {
            k.iter()
                .zip(alice_only.events())
                .map(|(l, e)| e.position(l).expect("paired outcome sets"))
                .collect()
        })
        .collect();
    let rows: Vec<SignalingRow> = keys
        .into_iter()
        .map(|pos| {
            let labels: Vec<String> = pos
                .iter()
                .zip(alice_only.events())
                .map(|(&p, e)| e.outcomes()[p].label().to_string())
                .collect();
            SignalingRow {
                history: format!("({})", labels.join(",")),
                with_bob: with_bob.get(&labels).copied().unwrap_or(0.0),
                alice_only: alone.get(&labels).copied().unwrap_or(0.0),
            }
        })
        .collect();

    let factorized_evolution = joint
        .evolutions()
        .iter()
        .map(|u| part.factorizes(u))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|f| f);
    let max_discrepancy = rows.iter().map(SignalingRow::discrepancy).fold(0.0, f64::max);
    Ok(SignalingReport {
        factorized_evolution,
        holds: !factorized_evolution || max_discrepancy <= STRUCTURAL_TOL,
        rows,
        max_discrepancy,
    })
}
