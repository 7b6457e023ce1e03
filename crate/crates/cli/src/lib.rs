//! Scenario runner behind the `gh-lab` command line: manifests, task
//! execution, deterministic CSV/JSON/SVG artifacts and run summaries.

pub mod manifest;
pub mod output;
pub mod svg;
pub mod tasks;

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use manifest::{resolve_config, validate, Manifest, Scenario};
use output::{to_json, write_atomic, Cell, Csv};
pub use tasks::{Artifact, Check};

#[derive(Debug, Clone, thiserror::Error)]
pub enum RunError {
    /// Bad input: malformed manifest or configuration, unknown names.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The computation itself failed.
    #[error("{0}")]
    Failed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Passed,
    Failed,
    Invalid,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub task: &'static str,
    pub status: Status,
    pub message: Option<String>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub artifacts: Vec<Artifact>,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Overrides the manifest seed.
    pub seed: Option<u64>,
    pub jobs: usize,
    pub precision: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: None, jobs: 1, precision: output::DEFAULT_PRECISION }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub seed: u64,
    pub scenarios: Vec<ScenarioReport>,
}

impl RunReport {
    /// 0 if every scenario passed, 2 if any input was invalid, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.scenarios.iter().any(|s| s.status == Status::Invalid) {
            2
        } else if self.scenarios.iter().any(|s| s.status == Status::Failed) {
            1
        } else {
            0
        }
    }

    pub fn summary_csv(&self, precision: usize) -> Vec<u8> {
        let mut csv = Csv::new(&["scenario", "task", "status", "check", "value", "tolerance", "passed"], precision);
        for s in &self.scenarios {
            let status = match s.status {
                Status::Passed => "passed",
                Status::Failed => "failed",
                Status::Invalid => "invalid",
            };
            if s.checks.is_empty() {
                csv.row(&[
                    Cell::Text(&s.name),
                    Cell::Text(s.task),
                    Cell::Text(status),
                    Cell::Text(""),
                    Cell::Text(""),
                    Cell::Text(""),
                    Cell::Bool(s.status == Status::Passed),
                ]);
            }
            for c in &s.checks {
                csv.row(&[
                    Cell::Text(&s.name),
                    Cell::Text(s.task),
                    Cell::Text(status),
                    Cell::Text(&c.name),
                    Cell::Num(c.value),
                    c.tolerance.map_or(Cell::Text(""), Cell::Num),
                    Cell::Bool(c.passed),
                ]);
            }
        }
        csv.into_bytes()
    }

    /// Writes `DIR/<scenario>/<artifact>` for every artifact, then
    /// `summary.csv` and `summary.json`. An empty run writes nothing.
    pub fn write(&self, dir: &Path, precision: usize) -> std::io::Result<()> {
        if self.scenarios.is_empty() {
            return Ok(());
        }
        for s in &self.scenarios {
            for a in &s.artifacts {
                write_atomic(&dir.join(&s.name).join(&a.name), &a.bytes)?;
            }
        }
        write_atomic(&dir.join("summary.csv"), &self.summary_csv(precision))?;
        write_atomic(&dir.join("summary.json"), &to_json(self, precision))
    }
}

pub fn run_scenario(scenario: &Scenario, base: &Path, seed: u64, precision: usize) -> ScenarioReport {
    let ctx = tasks::Context { base, seed, precision };
    let result = resolve_config(&scenario.config, base).and_then(|cfg| tasks::run_task(&cfg, &scenario.task, &ctx));
    let (status, message, checks, artifacts) = match result {
        Ok(out) => {
            let ok = out.checks.iter().all(|c| c.passed);
            (if ok { Status::Passed } else { Status::Failed }, None, out.checks, out.artifacts)
        }
        Err(e @ RunError::Invalid(_)) => (Status::Invalid, Some(e.to_string()), Vec::new(), Vec::new()),
        Err(e @ RunError::Failed(_)) => (Status::Failed, Some(e.to_string()), Vec::new(), Vec::new()),
    };
    ScenarioReport { name: scenario.name.clone(), task: scenario.task.kind(), status, message, checks, artifacts }
}

/// Runs every scenario on `jobs` worker threads. Results come back in
/// manifest order and do not depend on the number of workers.
pub fn run_manifest(manifest: &Manifest, base: &Path, opts: RunOptions) -> Result<RunReport, RunError> {
    validate(manifest)?;
    let seed = opts.seed.or(manifest.seed).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| RunError::Failed(e.to_string()))?;
    let scenarios = pool.install(|| {
        manifest.scenarios.par_iter().map(|s| run_scenario(s, base, seed, opts.precision)).collect()
    });
    Ok(RunReport { seed, scenarios })
}
