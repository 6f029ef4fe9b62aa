//! Rank-one tests on amplitude matrices: space separability
//! `A(α, β) = A(φ, α) A(χ, β)` and time separability
//! `A(α_{J∪K}) = A(α_J) A(α_K)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::entanglement::partition::{Side, SpacePartition};
use crate::entanglement::RANK_ONE_TOL;
use crate::error::{Error, Result};
use crate::history::HistoryVector;
use crate::linalg::{svd, ComplexMatrix, C64, ZERO};

/// One factor of a separable history state: amplitudes keyed by outcome
/// label sequences.
#[derive(Clone, Debug, Serialize)]
pub struct HistoryFactor {
    pub entries: Vec<(Vec<String>, (f64, f64))>,
}

impl HistoryFactor {
    pub fn amplitude(&self, labels: &[&str]) -> C64 {
        self.entries
            .iter()
            .find(|(k, _)| k.iter().map(String::as_str).eq(labels.iter().copied()))
            .map_or(ZERO, |(_, (re, im))| C64::new(*re, *im))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub sigma1: f64,
    pub sigma2: f64,
    /// `σ₂/σ₁`; separable when at most `1e-10`.
    pub ratio: f64,
    /// Present when separable. The first nonzero entry of `left` is real
    /// positive and `left ⊗ right` reproduces the amplitudes.
    pub factors: Option<(HistoryFactor, HistoryFactor)>,
}

/// Builds `M[row][col] = A` from keyed amplitudes and tests its rank.
fn rank_one_split(entries: Vec<(Vec<String>, Vec<String>, C64)>) -> Result<SeparabilityReport> {
    let mut rows: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    let mut cols: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    for (r, c, _) in &entries {
        let n = rows.len();
        rows.entry(r.clone()).or_insert(n);
        let n = cols.len();
        cols.entry(c.clone()).or_insert(n);
    }
    let mut m = ComplexMatrix::zeros(rows.len(), cols.len());
    for (r, c, a) in &entries {
        m[(rows[r], cols[c])] += *a;
    }
    let s = svd(&m)?;
    let sigma1 = s.singular_values.first().copied().unwrap_or(0.0);
    let sigma2 = s.singular_values.get(1).copied().unwrap_or(0.0);
    let ratio = if sigma1 > 0.0 { sigma2 / sigma1 } else { 0.0 };
    let separable = ratio <= RANK_ONE_TOL;

    let factors = separable.then(|| {
        // M ≈ σ₁ u v†: left = u·e^{-iθ}, right = σ₁ v̄·e^{iθ}
        let u = s.u.column(0);
        let v = s.v.column(0);
        let phase = u
            .iter()
            .find(|z| z.norm() > 1e-12)
            .map_or(C64::new(1.0, 0.0), |z| z / z.norm());
        let sorted = |keys: &BTreeMap<Vec<String>, usize>, values: &dyn Fn(usize) -> C64| HistoryFactor {
            entries: {
                let mut e: Vec<(Vec<String>, usize)> = keys.iter().map(|(k, &i)| (k.clone(), i)).collect();
                e.sort();
                e.into_iter()
                    .map(|(k, i)| {
                        let z = values(i);
                        (k, (z.re, z.im))
                    })
                    .collect()
            },
        };
        let left = sorted(&rows, &|i| u[i] * phase.conj());
        let right = sorted(&cols, &|j| v[j].conj() * sigma1 * phase);
        (left, right)
    });
    Ok(SeparabilityReport {
        separable,
        sigma1,
        sigma2,
        ratio,
        factors,
    })
}

fn require_amplitudes(hv: &HistoryVector) -> Result<()> {
    match hv.terms().iter().find(|t| t.amplitude.is_none()) {
        Some(t) => Err(Error::AmplitudeUndefined {
            history: hv.label(&t.index),
        }),
        None => Ok(()),
    }
}

/// Whether `A(α, β)` factorizes into an `A`-subsystem history state times a
/// `B`-subsystem one.
pub fn space_separability(hv: &HistoryVector, part: &SpacePartition) -> Result<SeparabilityReport> {
    require_amplitudes(hv)?;
    for e in hv.events() {
        part.reduce_event(e, Side::A)?;
    }
    let entries = hv
        .terms()
        .iter()
        .map(|t| {
            let labels = t.index.labels(hv.events());
            let side = |s: Side| -> Vec<String> {
                labels
                    .iter()
                    .map(|l| part.side_label(l, s).expect("validated by reduce_event"))
                    .collect()
            };
            (side(Side::A), side(Side::B), t.amplitude.expect("checked"))
        })
        .collect();
    rank_one_split(entries)
}

/// Whether the amplitudes factorize across the time bipartition
/// `times_j | rest`, with sub-histories merged back in time order.
pub fn time_separability(hv: &HistoryVector, times_j: &[usize]) -> Result<SeparabilityReport> {
    require_amplitudes(hv)?;
    let times: Vec<usize> = hv.events().iter().map(|e| e.time()).collect();
    let mut j: Vec<usize> = Vec::new();
    for t in times_j {
        let p = times
            .iter()
            .position(|x| x == t)
            .ok_or_else(|| Error::InvalidArgument(format!("time t{t} is not among {times:?}")))?;
        if j.contains(&p) {
            return Err(Error::InvalidArgument(format!("time t{t} listed twice")));
        }
        j.push(p);
    }
    j.sort_unstable();
    if j.is_empty() || j.len() == times.len() {
        return Err(Error::InvalidArgument(
            "time split needs both sides non-empty".into(),
        ));
    }
    let entries = hv
        .terms()
        .iter()
        .map(|t| {
            let labels = t.index.labels(hv.events());
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (p, l) in labels.iter().enumerate() {
                if j.contains(&p) {
                    left.push(l.to_string());
                } else {
                    right.push(l.to_string());
                }
            }
            (left, right, t.amplitude.expect("checked"))
        })
        .collect();
    rank_one_split(entries)
}
