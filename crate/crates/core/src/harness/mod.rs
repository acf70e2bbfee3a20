//! Reproducible experiment runs: a TOML-serializable config in, a record of
//! raw rows, summaries and bound checks out.
//!
//! Checks are a pure function of the config and the rows, so a stored
//! record can be re-verified without rerunning it.

mod config;
mod figures;
mod record;
mod run;

pub use config::{ExperimentConfig, ExperimentKind, TauRule};
pub use figures::{emit_figure_data, FigureKind, FigureParams};
pub use record::{BoundCheck, Cell, Comparison, ResultRecord, Table, Verdict, SCHEMA_VERSION};
pub use run::{default_budget, derive, recheck, run};
