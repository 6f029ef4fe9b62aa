//! Command-line arguments.

use std::path::PathBuf;

use clap::Parser;

use crate::entanglement::Side;
use crate::error::{Error, Result};
use crate::history::STRUCTURAL_TOL;
use crate::io::format::Format;
use crate::io::run::{Command, RunConfig, Sweep};

/// Environment variable overriding the structural tolerance.
pub const TOL_ENV: &str = "HISTENT_TOL";

#[derive(Debug, Parser)]
#[command(name = "histent", version, about = "History vectors, decoherence and space/temporal entanglement entropy")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Schedule file; entangler.json, teleportation.json and doubleslit.json
    /// are bundled.
    pub input: PathBuf,
    /// Keep subsystem A or B of the file's bipartition.
    #[arg(long)]
    pub space: Option<Side>,
    /// Comma-separated time labels to keep, e.g. `3` or `t1,t2`.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<String>>,
    /// Parameter grid `name=start..end:points` (entropy only).
    #[arg(long)]
    pub sweep: Option<Sweep>,
    /// Overrides a file parameter, `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trailing events summed over in the last-time marginal check.
    #[arg(long, default_value_t = 1)]
    pub drop_last: usize,
}

fn parse_time(t: &str) -> Result<usize> {
    let t = t.trim();
    t.strip_prefix('t')
        .unwrap_or(t)
        .parse()
        .map_err(|_| Error::Parse(format!("time label {t:?} is not of the form 3 or t3")))
}

impl Cli {
    /// Builds the run configuration; `env_tol` is the value of
    /// `HISTENT_TOL`, if set.
    pub fn into_config(self, env_tol: Option<&str>) -> Result<RunConfig> {
        let tol = match env_tol {
            Some(s) => s
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|x| *x > 0.0 && x.is_finite())
                .ok_or_else(|| Error::Parse(format!("{TOL_ENV}={s:?} is not a positive number")))?,
            None => STRUCTURAL_TOL,
        };
        let times = self
            .times
            .map(|ts| ts.iter().map(|t| parse_time(t)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let mut params = std::collections::BTreeMap::new();
        for p in &self.params {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("--param {p:?} is not NAME=VALUE")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("--param {p:?}: {v:?} is not a number")))?;
            params.insert(k.trim().to_string(), v);
        }
        Ok(RunConfig {
            command: self.command,
            input: self.input,
            space: self.space,
            times,
            sweep: self.sweep,
            params,
            format: self.format,
            out: self.out,
            drop_last: self.drop_last,
            tol,
        })
    }
}
