//! Measurement events and schedules: the data a history vector is built from.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::tensor::{flat_index, product_basis_ket};
use crate::linalg::{kron, norm, ComplexMatrix, SpaceFactorization, StateVector, C64};

/// Default tolerance for unitarity, Hermiticity, idempotence, orthogonality
/// and completeness checks.
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// One possible result of a measurement: a label and the projector onto its
/// eigensubspace.
#[derive(Clone, Debug)]
pub struct Outcome {
    label: String,
    projector: ComplexMatrix,
    ket: Option<Vec<C64>>,
}

impl Outcome {
    pub fn new(label: impl Into<String>, projector: ComplexMatrix) -> Self {
        Self {
            label: label.into(),
            projector,
            ket: None,
        }
    }

    /// Rank-one outcome with a fixed basis vector (which also fixes the
    /// phase convention of history amplitudes ending in it).
    pub fn from_ket(label: impl Into<String>, ket: Vec<C64>) -> Result<Self> {
        let label = label.into();
        let n = norm(&ket);
        if (n - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized {
                what: format!("basis vector of outcome {label:?}"),
                norm: n,
            });
        }
        Ok(Self {
            projector: ComplexMatrix::outer(&ket, &ket),
            label,
            ket: Some(ket),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn projector(&self) -> &ComplexMatrix {
        &self.projector
    }

    pub fn rank(&self) -> usize {
        self.projector.projector_rank()
    }

    pub fn stored_ket(&self) -> Option<&[C64]> {
        self.ket.as_deref()
    }

    /// Unit vector spanning a rank-one projector. Without a stored ket the
    /// phase is fixed by making the largest component real positive.
    pub fn basis_ket(&self) -> Option<Vec<C64>> {
        if let Some(k) = &self.ket {
            return Some(k.clone());
        }
        if self.rank() != 1 {
            return None;
        }
        let p = &self.projector;
        let best = (0..p.cols())
            .max_by(|&a, &b| p[(a, a)].re.total_cmp(&p[(b, b)].re))
            .expect("non-empty projector");
        let col = p.column(best);
        let n = norm(&col);
        Some(col.into_iter().map(|z| z / n).collect())
    }
}

/// A complete family of mutually orthogonal projectors measured at one time.
#[derive(Clone, Debug)]
pub struct MeasurementEvent {
    time: usize,
    outcomes: Vec<Outcome>,
}

impl MeasurementEvent {
    pub fn new(time: usize, outcomes: Vec<Outcome>) -> Result<Self> {
        Self::with_tolerance(time, outcomes, STRUCTURAL_TOL)
    }

    pub fn with_tolerance(time: usize, outcomes: Vec<Outcome>, tol: f64) -> Result<Self> {
        let event = Self { time, outcomes };
        event.validate(tol)?;
        Ok(event)
    }

    /// Orthonormal rank-one family.
    pub fn from_kets(time: usize, kets: Vec<(String, Vec<C64>)>) -> Result<Self> {
        let outcomes = kets
            .into_iter()
            .map(|(label, ket)| Outcome::from_ket(label, ket))
            .collect::<Result<Vec<_>>>()?;
        Self::new(time, outcomes)
    }

    /// Computational-basis measurement of every factor. Labels are the
    /// per-factor digits, concatenated (or comma-separated when some factor
    /// has more than ten levels).
    pub fn computational(time: usize, factors: &SpaceFactorization) -> Result<Self> {
        let all: Vec<usize> = (0..factors.len()).collect();
        Self::computational_on(time, factors, &all)
    }

    /// Computational-basis measurement of the `measured` factors only; the
    /// projectors act as the identity on the rest.
    pub fn computational_on(time: usize, factors: &SpaceFactorization, measured: &[usize]) -> Result<Self> {
        if measured.is_empty() || measured.iter().any(|&f| f >= factors.len()) {
            return Err(Error::InvalidArgument(format!(
                "measured factors {measured:?} invalid for {} factors",
                factors.len()
            )));
        }
        let dims = factors.dims();
        let full = measured.len() == factors.len() && measured.iter().enumerate().all(|(i, &f)| i == f);
        let mut outcomes = Vec::new();
        for digits in digit_sequences(&measured.iter().map(|&f| dims[f]).collect::<Vec<_>>()) {
            let label = digits_label(&digits, measured.iter().map(|&f| dims[f]));
            if full {
                outcomes.push(Outcome::from_ket(label, product_basis_ket(factors, &digits))?);
            } else {
                let local: Vec<ComplexMatrix> = (0..factors.len())
                    .map(|f| match measured.iter().position(|&m| m == f) {
                        Some(k) => {
                            let mut p = ComplexMatrix::zeros(dims[f], dims[f]);
                            p[(digits[k], digits[k])] = C64::new(1.0, 0.0);
                            p
                        }
                        None => ComplexMatrix::identity(dims[f]),
                    })
                    .collect();
                let projector = local.iter().fold(ComplexMatrix::identity(1), |acc, m| kron(&acc, m));
                outcomes.push(Outcome::new(label, projector));
            }
        }
        Self::new(time, outcomes)
    }

    /// Trivial event with the single outcome `I`.
    pub fn identity(time: usize, dim: usize) -> Result<Self> {
        Self::new(time, vec![Outcome::new("I", ComplexMatrix::identity(dim))])
    }

    fn validate(&self, tol: f64) -> Result<()> {
        let time = self.time_name();
        let Some(first) = self.outcomes.first() else {
            return Err(Error::InvalidArgument(format!("measurement at {time} has no outcomes")));
        };
        let dim = first.projector.rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, o) in self.outcomes.iter().enumerate() {
            if !o.projector.is_square() || o.projector.rows() != dim {
                return Err(Error::DimensionMismatch {
                    context: format!("projector {:?} at {time}", o.label),
                    expected: dim,
                    found: o.projector.rows(),
                });
            }
            if self.outcomes[..i].iter().any(|p| p.label == o.label) {
                return Err(Error::InvalidArgument(format!("duplicate outcome label {:?} at {time}", o.label)));
            }
            let deviation = o.projector.projector_deviation();
            if deviation > tol {
                return Err(Error::NotProjector {
                    what: format!("outcome {:?} at {time}", o.label),
                    deviation,
                });
            }
            for other in &self.outcomes[..i] {
                let deviation = o.projector.matmul(&other.projector)?.max_abs();
                if deviation > tol {
                    return Err(Error::NonOrthogonalProjectors {
                        time: time.clone(),
                        first: other.label.clone(),
                        second: o.label.clone(),
                        deviation,
                    });
                }
            }
            sum.add_scaled_mut(C64::new(1.0, 0.0), &o.projector)?;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > tol {
            return Err(Error::IncompleteProjectors { time, deviation });
        }
        Ok(())
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn time_name(&self) -> String {
        format!("t{}", self.time)
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].projector.rows()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o.label == label)
    }

    pub fn is_rank_one(&self) -> bool {
        self.outcomes.iter().all(|o| o.rank() == 1)
    }
}

/// Every digit sequence over the given radices, lexicographic.
pub(crate) fn digit_sequences(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |d| {
                    let mut p = prefix.clone();
                    p.push(d);
                    p
                })
            })
            .collect();
    }
    out
}

fn digits_label(digits: &[usize], radices: impl Iterator<Item = usize>) -> String {
    let radices: Vec<usize> = radices.collect();
    if radices.iter().all(|&r| r <= 10) {
        digits.iter().map(|d| d.to_string()).collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Position of each outcome in its event's declared outcome list, one per
/// time. Ordering is lexicographic in (event order, declared outcome order).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HistoryIndex(pub Vec<usize>);

impl HistoryIndex {
    pub fn new(positions: Vec<usize>) -> Self {
        Self(positions)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses outcome labels against the given events.
    pub fn from_labels<S: AsRef<str>>(events: &[MeasurementEvent], labels: &[S]) -> Result<Self> {
        if labels.len() != events.len() {
            return Err(Error::HistoryLength {
                expected: events.len(),
                found: labels.len(),
            });
        }
        labels
            .iter()
            .zip(events)
            .map(|(l, e)| {
                e.position(l.as_ref()).ok_or_else(|| Error::UnknownOutcome {
                    time: e.time_name(),
                    label: l.as_ref().to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(HistoryIndex)
    }

    pub fn labels<'a>(&self, events: &'a [MeasurementEvent]) -> Vec<&'a str> {
        self.0
            .iter()
            .zip(events)
            .map(|(&k, e)| e.outcomes[k].label.as_str())
            .collect()
    }

    /// `(l1,l2,…)`
    pub fn display(&self, events: &[MeasurementEvent]) -> String {
        format!("({})", self.labels(events).join(","))
    }

    pub fn validate(&self, events: &[MeasurementEvent]) -> Result<()> {
        if self.0.len() != events.len() {
            return Err(Error::HistoryLength {
                expected: events.len(),
                found: self.0.len(),
            });
        }
        for (&k, e) in self.0.iter().zip(events) {
            if k >= e.outcomes.len() {
                return Err(Error::UnknownOutcome {
                    time: e.time_name(),
                    label: format!("#{k}"),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for HistoryIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Initial state, measurement events at `t_1 … t_n`, and the evolution
/// `U(t_i, t_{i-1})` preceding each event.
#[derive(Clone, Debug)]
pub struct Schedule {
    initial: StateVector,
    events: Vec<MeasurementEvent>,
    evolutions: Vec<ComplexMatrix>,
    factors: Option<SpaceFactorization>,
}

impl Schedule {
    pub fn new(initial: StateVector, steps: Vec<(ComplexMatrix, MeasurementEvent)>) -> Result<Self> {
        Self::with_tolerance(initial, steps, STRUCTURAL_TOL)
    }

    pub fn with_tolerance(
        initial: StateVector,
        steps: Vec<(ComplexMatrix, MeasurementEvent)>,
        tol: f64,
    ) -> Result<Self> {
        let dim = initial.dim();
        if steps.is_empty() {
            return Err(Error::InvalidArgument("schedule has no measurement events".into()));
        }
        let mut events = Vec::with_capacity(steps.len());
        let mut evolutions = Vec::with_capacity(steps.len());
        for (u, e) in steps {
            let time = e.time_name();
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: format!("evolution before {time}"),
                    expected: dim,
                    found: u.rows().max(u.cols()),
                });
            }
            let deviation = u.unitary_deviation();
            if deviation > tol {
                return Err(Error::NotUnitary {
                    what: format!("evolution before {time}"),
                    deviation,
                });
            }
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: format!("projectors at {time}"),
                    expected: dim,
                    found: e.dim(),
                });
            }
            if let Some(prev) = events.last() {
                let prev: &MeasurementEvent = prev;
                if prev.time >= e.time {
                    return Err(Error::InvalidArgument(format!(
                        "events must be strictly ordered in time: {} follows {}",
                        time,
                        prev.time_name()
                    )));
                }
            }
            evolutions.push(u);
            events.push(e);
        }
        Ok(Self {
            initial,
            events,
            evolutions,
            factors: None,
        })
    }

    /// Records the tensor-factor structure of the underlying space.
    pub fn with_factors(mut self, factors: SpaceFactorization) -> Result<Self> {
        if factors.total_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "schedule factorization".into(),
                expected: self.dim(),
                found: factors.total_dim(),
            });
        }
        self.factors = Some(factors);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn events(&self) -> &[MeasurementEvent] {
        &self.events
    }

    pub fn evolutions(&self) -> &[ComplexMatrix] {
        &self.evolutions
    }

    pub fn factors(&self) -> Option<&SpaceFactorization> {
        self.factors.as_ref()
    }

    pub fn n_events(&self) -> usize {
        self.events.len()
    }

    pub fn steps(&self) -> impl Iterator<Item = (&ComplexMatrix, &MeasurementEvent)> {
        self.evolutions.iter().zip(&self.events)
    }

    pub fn history(&self, labels: &[&str]) -> Result<HistoryIndex> {
        HistoryIndex::from_labels(&self.events, labels)
    }

    /// Number of outcome sequences before pruning.
    pub fn potential_histories(&self) -> usize {
        self.events.iter().map(|e| e.outcomes.len()).product()
    }

    /// The first `m` events with their evolutions.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.events.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot keep {m} of {} events",
                self.events.len()
            )));
        }
        Ok(Self {
            initial: self.initial.clone(),
            events: self.events[..m].to_vec(),
            evolutions: self.evolutions[..m].to_vec(),
            factors: self.factors.clone(),
        })
    }

    /// The schedule with event `i` (0-based) not performed: its evolution is
    /// merged into the following one. Removing the final event drops its
    /// evolution too.
    pub fn without_event(&self, i: usize) -> Result<Self> {
        let n = self.events.len();
        if n < 2 || i >= n {
            return Err(Error::InvalidArgument(format!("cannot remove event {i} of {n}")));
        }
        if i == n - 1 {
            return self.truncated(n - 1);
        }
        let mut events = self.events.clone();
        let mut evolutions = self.evolutions.clone();
        events.remove(i);
        let merged = evolutions[i + 1].matmul(&evolutions[i])?;
        evolutions.remove(i);
        evolutions[i] = merged;
        Ok(Self {
            initial: self.initial.clone(),
            events,
            evolutions,
            factors: self.factors.clone(),
        })
    }

    /// Same evolutions and initial state with different measurement events.
    pub fn with_events(&self, events: Vec<MeasurementEvent>) -> Result<Self> {
        if events.len() != self.events.len() {
            return Err(Error::ScheduleMismatch(format!(
                "expected {} events, got {}",
                self.events.len(),
                events.len()
            )));
        }
        let steps = self.evolutions.iter().cloned().zip(events).collect();
        let mut s = Self::new(self.initial.clone(), steps)?;
        s.factors = self.factors.clone();
        Ok(s)
    }
}

/// Flat basis index of a computational-basis digit string.
pub fn basis_index(factors: &SpaceFactorization, digits: &[usize]) -> usize {
    flat_index(factors, digits)
}
