//! Schedule files, the command runner and report rendering.

pub mod cli;
pub mod format;
pub mod run;
pub mod schema;

pub use cli::Cli;
pub use format::{fmt_g17, fmt_text, Document, Format};
pub use run::{run, Command, RunConfig, RunOutcome, Sweep};
pub use schema::{bundled_fixture, emit_schedule, parse_circuit_file, parse_schedule_str, ScheduleFile};
