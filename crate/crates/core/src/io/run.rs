//! Command dispatch for the `histent` binary.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::entanglement::{
    alice_only_schedule, density_from_history, no_signaling_check, sequence_probabilities, space_reduce,
    space_separability, time_reduce, time_separability, HistoryDensity, SeparabilityReport, Side, SpacePartition,
};
use crate::error::{Error, Result};
use crate::history::{build_history_vector, is_consistent_set, marginal_check, HistoryVector, STRUCTURAL_TOL};
use crate::io::format::{Cell, Document, Format};
use crate::io::schema::{parse_circuit_file, ScheduleFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Amplitudes,
    Probs,
    Entropy,
    Consistency,
    Marginals,
    Separability,
    Nosignal,
    Report,
}

/// `name=start..end:points`, a linear grid including both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == self.points - 1 {
                    self.end
                } else {
                    self.start + (self.end - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("sweep {s:?} is not of the form name=start..end:points"));
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let (bounds, points) = range.rsplit_once(':').ok_or_else(bad)?;
        let (start, end) = bounds.split_once("..").ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<f64>().ok().filter(|x| x.is_finite());
        let sweep = Sweep {
            name: name.trim().to_string(),
            start: num(start).ok_or_else(bad)?,
            end: num(end).ok_or_else(bad)?,
            points: points.trim().parse().map_err(|_| bad())?,
        };
        if sweep.name.is_empty() || sweep.points == 0 {
            return Err(bad());
        }
        Ok(sweep)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub space: Option<Side>,
    /// Time labels, e.g. `[3]` for `t3`.
    pub times: Option<Vec<usize>>,
    pub sweep: Option<Sweep>,
    pub params: BTreeMap<String, f64>,
    /// Defaults to CSV for sweeps and text otherwise.
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    /// Number of trailing events summed in the last-time marginal check.
    pub drop_last: usize,
    pub tol: f64,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        Self {
            command,
            input: input.into(),
            space: None,
            times: None,
            sweep: None,
            params: BTreeMap::new(),
            format: None,
            out: None,
            drop_last: 1,
            tol: STRUCTURAL_TOL,
        }
    }

    /// Option combinations each command accepts.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tolerance must be a positive number");
        }
        if self.sweep.is_some() && self.command != Command::Entropy {
            return bad("--sweep is only supported by the entropy command");
        }
        if let Some(sw) = &self.sweep {
            if self.params.contains_key(&sw.name) {
                return bad("the swept parameter cannot also be fixed with --param");
            }
        }
        let both = self.space.is_some() && self.times.is_some();
        match self.command {
            Command::Entropy if self.space.is_some() == self.times.is_some() => {
                bad("entropy requires exactly one of --space and --times")
            }
            Command::Amplitudes | Command::Consistency | Command::Marginals | Command::Nosignal | Command::Report
                if self.space.is_some() || self.times.is_some() =>
            {
                bad("this command takes neither --space nor --times")
            }
            Command::Probs | Command::Separability if both => bad("pass at most one of --space and --times"),
            _ => Ok(()),
        }
    }
}

/// Result of a run: the process exit code and the rendered report (empty
/// when written to `--out`) or error message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

/// Runs one command. Exit codes: 0 success, 1 input error, 2 numerical
/// invariant failure.
pub fn run(config: &RunConfig) -> RunOutcome {
    let fail = |e: Error| RunOutcome {
        exit_code: exit_code(&e),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    };
    let (doc, verdict) = match config.validate().and_then(|_| dispatch(config)) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let format = config
        .format
        .unwrap_or(if config.sweep.is_some() { Format::Csv } else { Format::Text });
    let rendered = doc.render(format);
    let stdout = match &config.out {
        Some(path) => match std::fs::write(path, &rendered) {
            Ok(()) => String::new(),
            Err(e) => return fail(Error::Io(e)),
        },
        None => rendered,
    };
    let (exit_code, stderr) = match verdict {
        Ok(()) => (0, String::new()),
        Err(msg) => (2, format!("error: {msg}\n")),
    };
    RunOutcome {
        exit_code,
        stdout,
        stderr,
    }
}

/// The document, and `Err` with a message when a numerical invariant that
/// must hold was found violated.
type Dispatched = (Document, std::result::Result<(), String>);

fn dispatch(c: &RunConfig) -> Result<Dispatched> {
    if let Some(sw) = &c.sweep {
        return sweep_entropy(c, sw).map(|d| (d, Ok(())));
    }
    let file = parse_circuit_file(&c.input, &c.params, c.tol)?;
    let ok = |d: Document| Ok((d, Ok(())));
    match c.command {
        Command::Amplitudes => ok(amplitudes(&file)?),
        Command::Probs => ok(probs(c, &file)?),
        Command::Entropy => ok(Document::default().value("entropy", entropy(c, &file)?)),
        Command::Consistency => ok(consistency(c, &file)?),
        Command::Marginals => marginals(c, &file),
        Command::Separability => ok(separability(c, &file)?),
        Command::Nosignal => nosignal(c, &file),
        Command::Report => ok(report(c, &file)?),
    }
}

fn partition(file: &ScheduleFile) -> Result<&SpacePartition> {
    file.partition
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("the schedule has no bipartition (needs at least two factors)".into()))
}

fn history_and_density(file: &ScheduleFile) -> Result<(HistoryVector, HistoryDensity)> {
    let hv = build_history_vector(&file.schedule)?;
    let rho = density_from_history(&hv)?;
    Ok((hv, rho))
}

fn reduced(c: &RunConfig, file: &ScheduleFile, rho: &HistoryDensity) -> Result<HistoryDensity> {
    match (c.space, &c.times) {
        (Some(side), None) => space_reduce(rho, partition(file)?, side),
        (None, Some(t)) => time_reduce(rho, t),
        (None, None) => Ok(rho.clone()),
        (Some(_), Some(_)) => Err(Error::InvalidArgument("pass at most one of --space and --times".into())),
    }
}

fn amplitudes(file: &ScheduleFile) -> Result<Document> {
    let hv = build_history_vector(&file.schedule)?;
    let rows = hv
        .terms()
        .iter()
        .map(|t| {
            let a = t.amplitude.ok_or_else(|| Error::AmplitudeUndefined {
                history: hv.label(&t.index),
            })?;
            Ok(vec![hv.label(&t.index).into(), a.re.into(), a.im.into(), t.probability.into()])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Document::default().table("amplitudes", &["history", "re", "im", "probability"], rows))
}

fn probs(c: &RunConfig, file: &ScheduleFile) -> Result<Document> {
    let hv = build_history_vector(&file.schedule)?;
    let rows: Vec<Vec<Cell>> = if c.space.is_none() && c.times.is_none() {
        hv.terms()
            .iter()
            .map(|t| vec![hv.label(&t.index).into(), t.probability.into()])
            .collect()
    } else {
        let rho = density_from_history(&hv)?;
        sequence_probabilities(&reduced(c, file, &rho)?)
            .into_iter()
            .map(|(h, p)| vec![h.into(), p.into()])
            .collect()
    };
    Ok(Document::default().table("probabilities", &["history", "probability"], rows))
}

fn entropy(c: &RunConfig, file: &ScheduleFile) -> Result<f64> {
    let (_, rho) = history_and_density(file)?;
    reduced(c, file, &rho)?.entropy()
}

fn sweep_entropy(c: &RunConfig, sw: &Sweep) -> Result<Document> {
    let rows = sw
        .grid()
        .into_iter()
        .map(|x| {
            let mut params = c.params.clone();
            params.insert(sw.name.clone(), x);
            let file = parse_circuit_file(&c.input, &params, c.tol)?;
            Ok(vec![x.into(), entropy(c, &file)?.into()])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Document::default().table("sweep", &[sw.name.as_str(), "entropy"], rows))
}

fn consistency(c: &RunConfig, file: &ScheduleFile) -> Result<Document> {
    let r = is_consistent_set(&file.schedule, c.tol)?;
    let verdict = if r.consistent { "CONSISTENT" } else { "INCONSISTENT" };
    let mut doc = Document::default().value("verdict", verdict).fields(
        "consistency",
        vec![
            ("histories", r.histories.into()),
            ("pairs_checked", r.pairs_checked.into()),
            ("max_abs_re_d", r.max_real.into()),
            ("max_abs_d", r.max_magnitude.into()),
            ("tolerance", format!("{:e}", c.tol).into()),
        ],
    );
    if !r.consistent {
        let rows = r
            .violations
            .iter()
            .map(|v| vec![v.first.clone().into(), v.second.clone().into(), v.real.into(), v.magnitude.into()])
            .collect();
        doc = doc.table("violations", &["first", "second", "re_d", "abs_d"], rows);
    }
    Ok(doc)
}

fn marginals(c: &RunConfig, file: &ScheduleFile) -> Result<Dispatched> {
    let r = marginal_check(&file.schedule, c.drop_last)?;
    let holds = r.last_time.max_discrepancy <= c.tol;
    let rows = |m: &crate::history::diagnostics::MarginalComparison| -> Vec<Vec<Cell>> {
        m.rows
            .iter()
            .map(|row| vec![row.history.clone().into(), row.summed.into(), row.direct.into(), row.discrepancy().into()])
            .collect()
    };
    let headers = ["history", "summed", "unmeasured", "discrepancy"];
    let mut doc = Document::default()
        .fields(
            "marginals",
            vec![
                ("last_time_summed_events", format!("{:?}", r.last_time.summed_events).into()),
                ("last_time_max_discrepancy", r.last_time.max_discrepancy.into()),
                ("last_time_holds", holds.into()),
                ("intermediate_max_discrepancy", r.max_intermediate_discrepancy().into()),
            ],
        )
        .table("last_time", &headers, rows(&r.last_time));
    for m in &r.intermediate {
        doc = doc.table(&format!("without_event_{}", m.summed_events[0]), &headers, rows(m));
    }
    let verdict = if holds {
        Ok(())
    } else {
        Err(format!(
            "last-time marginal law violated by {:.3e}",
            r.last_time.max_discrepancy
        ))
    };
    Ok((doc, verdict))
}

fn separability_fields(r: &SeparabilityReport) -> Vec<(&'static str, Cell)> {
    vec![
        ("separable", r.separable.into()),
        ("sigma1", r.sigma1.into()),
        ("sigma2", r.sigma2.into()),
        ("ratio", r.ratio.into()),
    ]
}

fn factor_rows(doc: Document, title: &str, r: &SeparabilityReport) -> Document {
    let Some((left, right)) = &r.factors else {
        return doc;
    };
    let rows = |f: &crate::entanglement::HistoryFactor| -> Vec<Vec<Cell>> {
        f.entries
            .iter()
            .map(|(k, (re, im))| vec![format!("({})", k.join(",")).into(), (*re).into(), (*im).into()])
            .collect()
    };
    doc.table(&format!("{title}_left"), &["history", "re", "im"], rows(left))
        .table(&format!("{title}_right"), &["history", "re", "im"], rows(right))
}

fn separability(c: &RunConfig, file: &ScheduleFile) -> Result<Document> {
    let hv = build_history_vector(&file.schedule)?;
    let mut doc = Document::default();
    if c.times.is_none() {
        let r = space_separability(&hv, partition(file)?)?;
        doc = doc.fields("space", separability_fields(&r));
        doc = factor_rows(doc, "space", &r);
    }
    if c.space.is_none() {
        let splits: Vec<Vec<usize>> = match &c.times {
            Some(t) => vec![t.clone()],
            None => {
                let times: Vec<usize> = file.schedule.events().iter().map(|e| e.time()).collect();
                if times.len() < 2 {
                    vec![]
                } else {
                    times.iter().map(|&t| vec![t]).collect()
                }
            }
        };
        for j in splits {
            let r = time_separability(&hv, &j)?;
            let title = format!("time_{}", j.iter().map(|t| format!("t{t}")).collect::<Vec<_>>().join("_"));
            doc = doc.fields(&title, separability_fields(&r));
            doc = factor_rows(doc, &title, &r);
        }
    }
    Ok(doc)
}

fn nosignal(c: &RunConfig, file: &ScheduleFile) -> Result<Dispatched> {
    let part = partition(file)?;
    let alice = alice_only_schedule(&file.schedule, part)?;
    let r = no_signaling_check(&file.schedule, &alice, part)?;
    let holds = !r.factorized_evolution || r.max_discrepancy <= c.tol;
    let rows = r
        .rows
        .iter()
        .map(|row| vec![row.history.clone().into(), row.with_bob.into(), row.alice_only.into(), row.discrepancy().into()])
        .collect();
    let doc = Document::default()
        .fields(
            "nosignal",
            vec![
                ("factorized_evolution", r.factorized_evolution.into()),
                ("max_discrepancy", r.max_discrepancy.into()),
                ("holds", holds.into()),
            ],
        )
        .table("alice", &["history", "with_bob", "alice_only", "discrepancy"], rows);
    let verdict = if holds {
        Ok(())
    } else {
        Err(format!(
            "factorized evolution but Alice's statistics differ by {:.3e}",
            r.max_discrepancy
        ))
    };
    Ok((doc, verdict))
}

fn report(c: &RunConfig, file: &ScheduleFile) -> Result<Document> {
    let s = &file.schedule;
    let hv = build_history_vector(s)?;
    let times: Vec<usize> = s.events().iter().map(|e| e.time()).collect();
    let mut doc = Document::default().fields(
        "schedule",
        vec![
            ("dim", s.dim().into()),
            ("events", s.n_events().into()),
            (
                "times",
                times.iter().map(|t| format!("t{t}")).collect::<Vec<_>>().join(",").into(),
            ),
            ("potential_histories", s.potential_histories().into()),
            ("nonzero_histories", hv.len().into()),
        ],
    );
    let rows: Vec<Vec<Cell>> = hv
        .terms()
        .iter()
        .map(|t| match t.amplitude {
            Some(a) => vec![hv.label(&t.index).into(), a.re.into(), a.im.into(), t.probability.into()],
            None => vec![hv.label(&t.index).into(), "n/a".into(), "n/a".into(), t.probability.into()],
        })
        .collect();
    doc = doc.table("histories", &["history", "re", "im", "probability"], rows);

    let cons = is_consistent_set(s, c.tol)?;
    doc = doc.fields(
        "consistency",
        vec![
            ("verdict", if cons.consistent { "CONSISTENT" } else { "INCONSISTENT" }.into()),
            ("max_abs_re_d", cons.max_real.into()),
        ],
    );

    let mut entropies: Vec<Vec<Cell>> = Vec::new();
    match density_from_history(&hv) {
        Ok(rho) => {
            entropies.push(vec!["full".into(), rho.entropy()?.into()]);
            if let Some(part) = &file.partition {
                for (side, name) in [(Side::A, "A"), (Side::B, "B")] {
                    let factors = format!("{name} = {:?}", part.side(side));
                    let cell: Cell = match space_reduce(&rho, part, side) {
                        Ok(r) => r.entropy()?.into(),
                        Err(e) if e.is_numerical() => return Err(e),
                        Err(_) => "n/a".into(),
                    };
                    entropies.push(vec![format!("space {factors}").into(), cell]);
                }
            }
            if times.len() >= 2 {
                for &t in &times {
                    entropies.push(vec![format!("time t{t}").into(), time_reduce(&rho, &[t])?.entropy()?.into()]);
                }
            }
        }
        Err(Error::AmplitudeUndefined { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(doc.table("entropies", &["reduction", "entropy_bits"], entropies))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing_and_grid() {
        let sw: Sweep = "p=0..1:5".parse().unwrap();
        assert_eq!(sw.grid(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g: Sweep = "p=0..1:101".parse().unwrap();
        let grid = g.grid();
        assert_eq!(grid.len(), 101);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*grid.last().unwrap(), 1.0);
        for bad in ["p=0..1", "p0..1:3", "=0..1:3", "p=0..x:3", "p=0..1:0"] {
            assert!(bad.parse::<Sweep>().is_err(), "{bad}");
        }
    }

    #[test]
    fn option_validation() {
        let mut c = RunConfig::new(Command::Entropy, "entangler.json");
        assert!(c.validate().is_err());
        c.times = Some(vec![1]);
        assert!(c.validate().is_ok());
        c.space = Some(Side::A);
        assert!(c.validate().is_err());
        let mut a = RunConfig::new(Command::Amplitudes, "entangler.json");
        a.sweep = Some("p=0..1:3".parse().unwrap());
        assert!(a.validate().is_err());
    }

    #[test]
    fn entangler_commands() {
        let out = run(&RunConfig::new(Command::Consistency, "entangler.json"));
        assert_eq!(out.exit_code, 0, "{}", out.stderr);
        assert!(out.stdout.starts_with("CONSISTENT\n"));
        let mut e = RunConfig::new(Command::Entropy, "entangler.json");
        e.space = Some(Side::A);
        assert_eq!(run(&e).stdout, "1.000000\n");
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let out = run(&RunConfig::new(Command::Probs, "/nonexistent/other.json"));
        assert_eq!(out.exit_code, 1);
        assert!(out.stderr.starts_with("error:"));
    }
}
