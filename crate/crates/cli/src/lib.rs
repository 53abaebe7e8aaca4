//! Experiment harness: named experiments over the conformal-Laplacian toolkit,
//! each producing deterministic CSV/JSON artifacts and a pass/fail summary.

pub mod config;
pub mod experiments;

use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub use config::{Experiment, ExperimentConfig, Params};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or parameters; nothing was computed.
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] conflap_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// One declared tolerance and the value measured against it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"<="`, `">="`, `"<"`, `">"` or `"=="`.
    pub relation: String,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: &str, limit: f64) -> Self {
        let pass = match relation {
            "<=" => value <= limit,
            ">=" => value >= limit,
            "<" => value < limit,
            ">" => value > limit,
            _ => value == limit,
        };
        Check {
            name: name.into(),
            value,
            relation: relation.into(),
            limit,
            pass,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, f64::from(u8::from(ok)), "==", 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub file: String,
    #[serde(skip)]
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub experiment: String,
    /// The statement being exercised.
    pub cite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    fn new(e: Experiment, cite: &str, checks: Vec<Check>, artifacts: Vec<(String, String)>) -> Self {
        Outcome {
            experiment: e.name().into(),
            cite: cite.into(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            artifacts: artifacts
                .into_iter()
                .map(|(file, contents)| Artifact { file, contents })
                .collect(),
        }
    }

    pub fn artifact(&self, file: &str) -> Option<&str> {
        self.artifacts.iter().find(|a| a.file == file).map(|a| a.contents.as_str())
    }

    /// The experiment's CSV table.
    pub fn csv(&self) -> &str {
        self.artifacts
            .iter()
            .find(|a| a.file.ends_with(".csv"))
            .map_or("", |a| a.contents.as_str())
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn summary_text(&self) -> String {
        let mut s = format!(
            "{} [{}]\n  {}\n",
            self.experiment,
            if self.pass { "PASS" } else { "FAIL" },
            self.cite
        );
        for c in &self.checks {
            s.push_str(&format!(
                "  {} {}: {:.6e} {} {:.6e}\n",
                if c.pass { "ok  " } else { "FAIL" },
                c.name,
                c.value,
                c.relation,
                c.limit
            ));
        }
        s
    }

    /// Writes every artifact plus `<experiment>.summary.json` into `dir`,
    /// each through a temporary file and a rename.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir)?;
        let summary = (format!("{}.summary.json", self.experiment), self.summary_json());
        let mut written = Vec::new();
        for (file, contents) in self
            .artifacts
            .iter()
            .map(|a| (&a.file, &a.contents))
            .chain(std::iter::once((&summary.0, &summary.1)))
        {
            let path = dir.join(file);
            let tmp = dir.join(format!(".{file}.tmp"));
            std::fs::write(&tmp, contents)?;
            std::fs::rename(&tmp, &path)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Validates `params` for `e` and runs it.
pub fn run(e: Experiment, params: &Params) -> Result<Outcome, CliError> {
    let stray: Vec<&str> = params
        .present()
        .into_iter()
        .filter(|f| !e.accepts().contains(f))
        .collect();
    if !stray.is_empty() {
        return Err(CliError::Usage(format!(
            "{} does not take {}",
            e.name(),
            stray.join(", ")
        )));
    }
    match e {
        Experiment::Spectrum => experiments::spectrum(params),
        Experiment::ConformalCheck => experiments::conformal_check(params),
        Experiment::NeckSweep => experiments::neck_sweep(params),
        Experiment::C1Continuity => experiments::c1_continuity(params),
        Experiment::Kato => experiments::kato(params),
        Experiment::Kappa => experiments::kappa(params),
        Experiment::Subcritical => experiments::subcritical(params),
        Experiment::Cheeger => experiments::cheeger(params),
    }
}
