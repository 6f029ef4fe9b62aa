//! JSON schedule files.
//!
//! ```json
//! {
//!   "qubits": 3,
//!   "params": { "p": 0.5 },
//!   "initial": { "product": ["chi_p:p", "bell:00"] },
//!   "steps": [
//!     { "measure": "computational" },
//!     { "unitary": "CNOT(0,1)", "measure": "computational" },
//!     { "unitary": ["H(0)"], "measure": "computational" }
//!   ],
//!   "partition": { "A": [0, 1], "B": [2] }
//! }
//! ```
//!
//! `"dim": n` (optionally with `"factors": [d0, d1, …]`) replaces `"qubits"`
//! for general spaces. Complex numbers are `[re, im]` pairs or plain reals.
//! Initial states: `"basis:<bits>"`, `"bell:<xy>"`,
//! `"chi:<a_re>,<a_im>,<b_re>,<b_im>"` (each entry a number or a parameter
//! name), `"chi_p:<x>"` for `√x|0⟩ + √(1−x)|1⟩`, `{"product": [...]}` and
//! `{"amplitudes": [...]}`. A step's `"unitary"` is a gate such as
//! `"CNOT(0,1)"`, a list of gates applied first to last, or
//! `{"matrix": rows}`; omitted means the identity. `"measure"` is
//! `"computational"`, `{"qubits": [...]}`, `"identity"`, or a list of
//! `{"label", "projector" | "ket"}` outcomes. Steps may carry an explicit
//! integer `"time"`; by default times run `1, 2, …`.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::circuit::{basis_state, bell_state, layer_unitary, GateSpec};
use crate::entanglement::SpacePartition;
use crate::error::{Error, Result};
use crate::history::{MeasurementEvent, Outcome, Schedule};
use crate::linalg::{ComplexMatrix, SpaceFactorization, StateVector, C64};

pub const ENTANGLER_JSON: &str = include_str!("../../fixtures/entangler.json");
pub const TELEPORTATION_JSON: &str = include_str!("../../fixtures/teleportation.json");
pub const DOUBLESLIT_JSON: &str = include_str!("../../fixtures/doubleslit.json");

/// Bundled fixture by file name, with or without a directory or the
/// `.json` extension.
pub fn bundled_fixture(name: &str) -> Option<&'static str> {
    let base = Path::new(name).file_name()?.to_str()?;
    match base.strip_suffix(".json").unwrap_or(base) {
        "entangler" => Some(ENTANGLER_JSON),
        "teleportation" => Some(TELEPORTATION_JSON),
        "doubleslit" => Some(DOUBLESLIT_JSON),
        _ => None,
    }
}

/// A parsed schedule file.
#[derive(Clone, Debug)]
pub struct ScheduleFile {
    pub schedule: Schedule,
    /// The declared bipartition, or factors `0..k-1 | k-1` when none is
    /// given and the space has at least two factors.
    pub partition: Option<SpacePartition>,
    /// File parameters after command-line overrides.
    pub params: BTreeMap<String, f64>,
}

/// Reads `path`, falling back to a bundled fixture of the same name when
/// the path does not exist.
pub fn parse_circuit_file(path: &Path, overrides: &BTreeMap<String, f64>, tol: f64) -> Result<ScheduleFile> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => match path.to_str().and_then(bundled_fixture) {
            Some(t) => t.to_string(),
            None => return Err(Error::Io(e)),
        },
        Err(e) => return Err(Error::Io(e)),
    };
    parse_schedule_str(&text, overrides, tol).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_schedule_str(text: &str, overrides: &BTreeMap<String, f64>, tol: f64) -> Result<ScheduleFile> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let lines = step_lines(text);
    Parser { overrides, tol, lines }.file(&root)
}

struct Parser<'a> {
    overrides: &'a BTreeMap<String, f64>,
    tol: f64,
    lines: Vec<usize>,
}

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn as_obj<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn index_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_index(x, &format!("{path}[{i}]")))
        .collect()
}

fn complex(v: &Value, path: &str) -> Result<C64> {
    if let Some(x) = v.as_f64() {
        return Ok(C64::new(x, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(err(path, "complex entries must be numbers")),
        },
        _ => Err(err(path, "expected a number or a [re, im] pair")),
    }
}

fn complex_vec(v: &Value, path: &str) -> Result<Vec<C64>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, z)| complex(z, &format!("{path}[{i}]")))
        .collect()
}

fn matrix(v: &Value, path: &str) -> Result<ComplexMatrix> {
    let rows = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| complex_vec(r, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    ComplexMatrix::from_rows(&rows).map_err(|e| err(path, e))
}

impl Parser<'_> {
    fn file(&self, root: &Value) -> Result<ScheduleFile> {
        let obj = as_obj(root, "file")?;
        for key in obj.keys() {
            if !["qubits", "dim", "factors", "params", "initial", "steps", "partition", "name", "description"]
                .contains(&key.as_str())
            {
                return Err(err("file", format!("unknown key {key:?}")));
            }
        }
        let (dim, factors, n_qubits) = self.space(obj)?;
        let params = self.params(obj)?;
        let initial = self.initial(
            obj.get("initial").ok_or_else(|| err("file", "missing \"initial\""))?,
            "initial",
            &params,
        )?;
        if initial.dim() != dim {
            return Err(err("initial", format!("state has dimension {}, space has {dim}", initial.dim())));
        }
        let steps_v = as_array(obj.get("steps").ok_or_else(|| err("file", "missing \"steps\""))?, "steps")?;
        if steps_v.is_empty() {
            return Err(err("steps", "at least one step is required"));
        }
        let mut steps = Vec::with_capacity(steps_v.len());
        let mut time = 0usize;
        for (i, step) in steps_v.iter().enumerate() {
            let path = match self.lines.get(i) {
                Some(line) => format!("line {line}, steps[{i}]"),
                None => format!("steps[{i}]"),
            };
            let step_obj = as_obj(step, &path)?;
            time = match step_obj.get("time") {
                Some(t) => as_index(t, &format!("{path}.time"))?,
                None => time + 1,
            };
            let path = format!("{path} (t{time})");
            for key in step_obj.keys() {
                if !["time", "unitary", "measure"].contains(&key.as_str()) {
                    return Err(err(&path, format!("unknown key {key:?}")));
                }
            }
            let u = self.unitary(step_obj.get("unitary"), &path, dim, n_qubits)?;
            let deviation = u.unitary_deviation();
            if deviation > self.tol {
                return Err(err(&path, format!("unitary is not unitary (deviation {deviation:.3e})")));
            }
            let measure = step_obj
                .get("measure")
                .ok_or_else(|| err(&path, "missing \"measure\""))?;
            let event = self.measure(measure, &path, time, dim, factors.as_ref())?;
            steps.push((u, event));
        }
        let mut schedule = Schedule::with_tolerance(initial, steps, self.tol).map_err(|e| err("steps", e))?;
        if let Some(f) = &factors {
            schedule = schedule.with_factors(f.clone())?;
        }
        let partition = match (obj.get("partition"), &factors) {
            (Some(p), Some(f)) => Some(self.partition(p, f)?),
            (Some(_), None) => return Err(err("partition", "needs \"qubits\" or \"factors\"")),
            (None, Some(f)) if f.len() >= 2 => {
                let last = f.len() - 1;
                Some(SpacePartition::new(f.clone(), (0..last).collect(), vec![last])?)
            }
            (None, _) => None,
        };
        Ok(ScheduleFile {
            schedule,
            partition,
            params,
        })
    }

    fn space(&self, obj: &Map<String, Value>) -> Result<(usize, Option<SpaceFactorization>, Option<usize>)> {
        match (obj.get("qubits"), obj.get("dim")) {
            (Some(q), None) => {
                if obj.contains_key("factors") {
                    return Err(err("factors", "not allowed together with \"qubits\""));
                }
                let n = as_index(q, "qubits")?;
                if n == 0 || n > 12 {
                    return Err(err("qubits", format!("expected 1..=12 qubits, got {n}")));
                }
                Ok((1 << n, Some(SpaceFactorization::qubits(n)?), Some(n)))
            }
            (None, Some(d)) => {
                let dim = as_index(d, "dim")?;
                if dim == 0 {
                    return Err(err("dim", "must be positive"));
                }
                let factors = match obj.get("factors") {
                    Some(f) => {
                        let f = SpaceFactorization::new(index_list(f, "factors")?).map_err(|e| err("factors", e))?;
                        if f.total_dim() != dim {
                            return Err(err("factors", format!("product {} differs from dim {dim}", f.total_dim())));
                        }
                        Some(f)
                    }
                    None => None,
                };
                let n_qubits = factors
                    .as_ref()
                    .filter(|f| f.dims().iter().all(|&d| d == 2))
                    .map(SpaceFactorization::len);
                Ok((dim, factors, n_qubits))
            }
            _ => Err(err("file", "exactly one of \"qubits\" and \"dim\" is required")),
        }
    }

    fn params(&self, obj: &Map<String, Value>) -> Result<BTreeMap<String, f64>> {
        let mut params = BTreeMap::new();
        if let Some(p) = obj.get("params") {
            for (k, v) in as_obj(p, "params")? {
                let x = v.as_f64().ok_or_else(|| err(&format!("params.{k}"), "expected a number"))?;
                params.insert(k.clone(), x);
            }
        }
        for (k, v) in self.overrides {
            if !params.contains_key(k) {
                return Err(Error::InvalidArgument(format!(
                    "parameter {k:?} is not declared by the file (declared: {:?})",
                    params.keys().collect::<Vec<_>>()
                )));
            }
            params.insert(k.clone(), *v);
        }
        Ok(params)
    }

    fn scalar(&self, token: &str, path: &str, params: &BTreeMap<String, f64>) -> Result<f64> {
        let token = token.trim();
        token
            .parse::<f64>()
            .ok()
            .or_else(|| params.get(token).copied())
            .ok_or_else(|| err(path, format!("{token:?} is neither a number nor a declared parameter")))
    }

    fn initial(&self, v: &Value, path: &str, params: &BTreeMap<String, f64>) -> Result<StateVector> {
        if let Some(s) = v.as_str() {
            let (kind, arg) = s.split_once(':').ok_or_else(|| err(path, format!("malformed state {s:?}")))?;
            return match kind.trim() {
                "basis" => basis_state(arg.trim()).map_err(|e| err(path, e)),
                "bell" => bell_state(arg.trim()).map_err(|e| err(path, e)),
                "chi" => {
                    let x = arg
                        .split(',')
                        .map(|t| self.scalar(t, path, params))
                        .collect::<Result<Vec<_>>>()?;
                    let [ar, ai, br, bi] = x[..] else {
                        return Err(err(path, "chi needs four numbers a_re,a_im,b_re,b_im"));
                    };
                    StateVector::new(vec![C64::new(ar, ai), C64::new(br, bi)]).map_err(|e| err(path, e))
                }
                "chi_p" => {
                    let p = self.scalar(arg, path, params)?;
                    if !(0.0..=1.0).contains(&p) {
                        return Err(err(path, format!("chi_p needs 0 <= p <= 1, got {p}")));
                    }
                    StateVector::new(vec![C64::new(p.sqrt(), 0.0), C64::new((1.0 - p).sqrt(), 0.0)])
                        .map_err(|e| err(path, e))
                }
                other => Err(err(path, format!("unknown state kind {other:?}"))),
            };
        }
        let obj = as_obj(v, path)?;
        if let Some(parts) = obj.get("product") {
            let parts = as_array(parts, &format!("{path}.product"))?;
            if parts.is_empty() {
                return Err(err(path, "empty product"));
            }
            let mut state: Option<StateVector> = None;
            for (i, p) in parts.iter().enumerate() {
                let s = self.initial(p, &format!("{path}.product[{i}]"), params)?;
                state = Some(match state {
                    Some(acc) => acc.tensor(&s),
                    None => s,
                });
            }
            return Ok(state.expect("non-empty"));
        }
        if let Some(a) = obj.get("amplitudes") {
            let amps = complex_vec(a, &format!("{path}.amplitudes"))?;
            return StateVector::new(amps).map_err(|e| err(path, e));
        }
        Err(err(path, "expected a state string, {\"product\": ...} or {\"amplitudes\": ...}"))
    }

    fn unitary(&self, v: Option<&Value>, path: &str, dim: usize, n_qubits: Option<usize>) -> Result<ComplexMatrix> {
        let path = format!("{path}.unitary");
        let gates = |names: Vec<&str>| -> Result<ComplexMatrix> {
            let n = n_qubits.ok_or_else(|| err(&path, "named gates need a qubit register"))?;
            let gates = names
                .into_iter()
                .map(|g| GateSpec::parse(g).map_err(|e| err(&path, e)))
                .collect::<Result<Vec<_>>>()?;
            layer_unitary(&gates, n).map_err(|e| err(&path, e))
        };
        match v {
            None | Some(Value::Null) => Ok(ComplexMatrix::identity(dim)),
            Some(Value::String(g)) => gates(vec![g]),
            Some(Value::Array(list)) => {
                let names = list
                    .iter()
                    .enumerate()
                    .map(|(i, g)| g.as_str().ok_or_else(|| err(&format!("{path}[{i}]"), "expected a gate string")))
                    .collect::<Result<Vec<_>>>()?;
                gates(names)
            }
            Some(Value::Object(o)) => {
                let m = matrix(o.get("matrix").ok_or_else(|| err(&path, "expected {\"matrix\": rows}"))?, &path)?;
                if m.rows() != dim || m.cols() != dim {
                    return Err(err(&path, format!("matrix is {}x{}, space has dimension {dim}", m.rows(), m.cols())));
                }
                Ok(m)
            }
            Some(_) => Err(err(&path, "expected a gate, a gate list or {\"matrix\": rows}")),
        }
    }

    fn measure(
        &self,
        v: &Value,
        path: &str,
        time: usize,
        dim: usize,
        factors: Option<&SpaceFactorization>,
    ) -> Result<MeasurementEvent> {
        let path = format!("{path}.measure");
        let need_factors = || factors.ok_or_else(|| err(&path, "computational measurements need a factorization"));
        let event = match v {
            Value::String(s) if s == "computational" => MeasurementEvent::computational(time, need_factors()?),
            Value::String(s) if s == "identity" => MeasurementEvent::identity(time, dim),
            Value::Object(o) if o.contains_key("qubits") => {
                let q = index_list(&o["qubits"], &format!("{path}.qubits"))?;
                MeasurementEvent::computational_on(time, need_factors()?, &q)
            }
            Value::Array(list) => {
                let outcomes = list
                    .iter()
                    .enumerate()
                    .map(|(i, o)| self.outcome(o, &format!("{path}[{i}]"), dim))
                    .collect::<Result<Vec<_>>>()?;
                MeasurementEvent::with_tolerance(time, outcomes, self.tol)
            }
            _ => return Err(err(&path, "expected \"computational\", {\"qubits\": [...]}, \"identity\" or an outcome list")),
        };
        event.map_err(|e| err(&path, e))
    }

    fn outcome(&self, v: &Value, path: &str, dim: usize) -> Result<Outcome> {
        let o = as_obj(v, path)?;
        let label = o
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| err(path, "outcome needs a string \"label\""))?;
        let path = format!("{path} ({label:?})");
        match (o.get("projector"), o.get("ket")) {
            (Some(p), None) => {
                let m = matrix(p, &path)?;
                if m.rows() != dim || m.cols() != dim {
                    return Err(err(&path, format!("projector is {}x{}, space has dimension {dim}", m.rows(), m.cols())));
                }
                Ok(Outcome::new(label, m))
            }
            (None, Some(k)) => {
                let ket = complex_vec(k, &path)?;
                if ket.len() != dim {
                    return Err(err(&path, format!("ket has {} entries, space has dimension {dim}", ket.len())));
                }
                Outcome::from_ket(label, ket).map_err(|e| err(&path, e))
            }
            _ => Err(err(&path, "outcome needs exactly one of \"projector\" and \"ket\"")),
        }
    }

    fn partition(&self, v: &Value, factors: &SpaceFactorization) -> Result<SpacePartition> {
        let o = as_obj(v, "partition")?;
        let side = |k: &str| -> Result<Vec<usize>> {
            index_list(o.get(k).ok_or_else(|| err("partition", format!("missing {k:?}")))?, &format!("partition.{k}"))
        };
        SpacePartition::new(factors.clone(), side("A")?, side("B")?).map_err(|e| err("partition", e))
    }
}

/// 1-based line on which each element of the top-level `"steps"` array
/// starts.
fn step_lines(text: &str) -> Vec<usize> {
    let bytes = text.as_bytes();
    let mut line = 1;
    let mut depth = 0usize;
    let mut i = 0;
    let mut last_key: Option<(usize, usize)> = None;
    let mut steps_depth: Option<usize> = None;
    let mut expect_element = false;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => line += 1,
            b'"' => {
                let start = i + 1;
                i += 1;
                while i < bytes.len() && bytes[i] != b'"' {
                    if bytes[i] == b'\\' {
                        i += 1;
                    } else if bytes[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
                if expect_element {
                    out.push(line);
                    expect_element = false;
                }
                last_key = Some((start, i.min(bytes.len())));
            }
            b'{' | b'[' => {
                if expect_element {
                    out.push(line);
                    expect_element = false;
                }
                depth += 1;
                if c == b'[' && depth == 2 && steps_depth.is_none() {
                    if let Some((s, e)) = last_key {
                        if &text[s..e] == "steps" {
                            steps_depth = Some(depth);
                            expect_element = true;
                        }
                    }
                }
            }
            b'}' | b']' => {
                if steps_depth == Some(depth) && c == b']' {
                    steps_depth = Some(usize::MAX);
                    expect_element = false;
                }
                depth = depth.saturating_sub(1);
            }
            b',' if steps_depth == Some(depth) => expect_element = true,
            c if expect_element && !c.is_ascii_whitespace() && c != b':' => {
                out.push(line);
                expect_element = false;
            }
            _ => {}
        }
        i += 1;
    }
    out
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|&z| complex_json(z)).collect()))
            .collect(),
    )
}

/// Serializes a schedule with explicit amplitudes, matrices and kets, so
/// that re-parsing reproduces it bit for bit.
pub fn emit_schedule(s: &Schedule, partition: Option<&SpacePartition>) -> String {
    let mut root = Map::new();
    root.insert("dim".into(), json!(s.dim()));
    if let Some(f) = s.factors() {
        root.insert("factors".into(), json!(f.dims()));
    }
    root.insert(
        "initial".into(),
        json!({ "amplitudes": s.initial().amplitudes().iter().map(|&z| complex_json(z)).collect::<Vec<_>>() }),
    );
    let steps: Vec<Value> = s
        .steps()
        .map(|(u, e)| {
            let outcomes: Vec<Value> = e
                .outcomes()
                .iter()
                .map(|o| match o.stored_ket() {
                    Some(k) => json!({ "label": o.label(), "ket": k.iter().map(|&z| complex_json(z)).collect::<Vec<_>>() }),
                    None => json!({ "label": o.label(), "projector": matrix_json(o.projector()) }),
                })
                .collect();
            json!({ "time": e.time(), "unitary": { "matrix": matrix_json(u) }, "measure": outcomes })
        })
        .collect();
    root.insert("steps".into(), Value::Array(steps));
    if let Some(p) = partition {
        root.insert(
            "partition".into(),
            json!({ "A": p.side(crate::entanglement::Side::A), "B": p.side(crate::entanglement::Side::B) }),
        );
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::STRUCTURAL_TOL;

    fn parse(text: &str) -> Result<ScheduleFile> {
        parse_schedule_str(text, &BTreeMap::new(), STRUCTURAL_TOL)
    }

    #[test]
    fn bundled_fixtures_parse() {
        for name in ["entangler.json", "teleportation", "some/dir/doubleslit.json"] {
            let text = bundled_fixture(name).unwrap();
            parse(text).unwrap();
        }
        assert!(bundled_fixture("other.json").is_none());
    }

    #[test]
    fn step_lines_track_array_elements() {
        let text = "{\n \"steps\": [\n  {\"measure\": \"x\"},\n\n  {\"measure\": [1, 2]}\n ]\n}";
        assert_eq!(step_lines(text), vec![3, 5]);
    }

    #[test]
    fn incomplete_projectors_name_the_time() {
        let text = r#"{
  "dim": 2,
  "initial": { "amplitudes": [1, 0] },
  "steps": [
    { "measure": [ { "label": "0", "ket": [1, 0] }, { "label": "1", "ket": [0, 1] } ] },
    { "measure": [ { "label": "0", "projector": [[1, 0], [0, 0]] } ] }
  ]
}"#;
        let msg = parse(text).unwrap_err().to_string();
        assert!(msg.contains("t2") && msg.contains("line 6"), "{msg}");
    }

    #[test]
    fn non_unitary_matrix_is_rejected() {
        let text = r#"{"dim": 2, "initial": {"amplitudes": [1, 0]},
            "steps": [{"unitary": {"matrix": [[1, 1], [0, 1]]}, "measure": "identity"}]}"#;
        let msg = parse(text).unwrap_err().to_string();
        assert!(msg.contains("t1") && msg.contains("unitary"), "{msg}");
    }

    #[test]
    fn parameters_and_overrides() {
        let text = r#"{"qubits": 1, "params": {"p": 0.25}, "initial": "chi_p:p", "steps": [{"measure": "computational"}]}"#;
        let f = parse(text).unwrap();
        assert!((f.schedule.initial().amplitudes()[0].re - 0.5).abs() < 1e-15);
        let over = BTreeMap::from([("p".to_string(), 1.0)]);
        let f = parse_schedule_str(text, &over, STRUCTURAL_TOL).unwrap();
        assert_eq!(f.schedule.initial().amplitudes()[1].re, 0.0);
        let unknown = BTreeMap::from([("q".to_string(), 1.0)]);
        assert!(parse_schedule_str(text, &unknown, STRUCTURAL_TOL).is_err());
    }

    #[test]
    fn schema_errors() {
        assert!(parse("{").is_err());
        assert!(parse(r#"{"qubits": 1, "dim": 2, "initial": "basis:0", "steps": []}"#).is_err());
        assert!(parse(r#"{"qubits": 1, "initial": "basis:0", "steps": []}"#).is_err());
        assert!(parse(r#"{"qubits": 1, "initial": "basis:00", "steps": [{"measure": "computational"}]}"#).is_err());
        assert!(parse(r#"{"qubits": 1, "initial": "basis:0", "steps": [{"measure": "computational", "x": 1}]}"#).is_err());
        assert!(parse(r#"{"qubits": 2, "initial": "basis:00", "steps": [{"unitary": "CNOT(0,2)", "measure": "computational"}]}"#).is_err());
    }

    #[test]
    fn emitted_schedule_round_trips() {
        let f = parse(TELEPORTATION_JSON).unwrap();
        let text = emit_schedule(&f.schedule, f.partition.as_ref());
        let g = parse(&text).unwrap();
        assert_eq!(g.schedule.n_events(), 3);
        assert_eq!(g.partition, f.partition);
        for (a, b) in f.schedule.evolutions().iter().zip(g.schedule.evolutions()) {
            assert_eq!(a.max_abs_diff(b), 0.0);
        }
    }
}
