use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spectrum,
    ConformalCheck,
    NeckSweep,
    C1Continuity,
    Kato,
    Kappa,
    Subcritical,
    Cheeger,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Spectrum,
        Experiment::ConformalCheck,
        Experiment::NeckSweep,
        Experiment::C1Continuity,
        Experiment::Kato,
        Experiment::Kappa,
        Experiment::Subcritical,
        Experiment::Cheeger,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::ConformalCheck => "conformal-check",
            Experiment::NeckSweep => "neck-sweep",
            Experiment::C1Continuity => "c1-continuity",
            Experiment::Kato => "kato",
            Experiment::Kappa => "kappa",
            Experiment::Subcritical => "subcritical",
            Experiment::Cheeger => "cheeger",
        }
    }

    /// Parameter names the experiment reads.
    pub fn accepts(self) -> &'static [&'static str] {
        match self {
            Experiment::Spectrum => &["seed", "model", "n", "c", "k", "tol", "grid", "samples"],
            Experiment::ConformalCheck => &["seed", "grids", "amplitude"],
            Experiment::NeckSweep => &["seed", "n", "c", "k", "radii", "samples"],
            Experiment::C1Continuity => &["seed", "c", "k", "tol", "grid", "deltas"],
            Experiment::Kato => &["seed", "n", "l", "samples"],
            Experiment::Kappa => &["seed", "n", "ahat", "alpha_nonzero", "spin", "simply_connected"],
            Experiment::Subcritical => &["seed", "c", "tol", "grid", "grids", "amplitude"],
            Experiment::Cheeger => &["seed", "n", "radii", "samples"],
        }
    }
}

/// Experiment parameters; every field is optional and falls back to the
/// experiment's default.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// RNG seed for random inputs
    #[arg(long)]
    pub seed: Option<u64>,
    /// Model for `spectrum`: torus or sphere
    #[arg(long)]
    pub model: Option<String>,
    /// Dimension
    #[arg(long)]
    pub n: Option<usize>,
    /// Coefficient of the scalar curvature term
    #[arg(long)]
    pub c: Option<f64>,
    /// Number of eigenvalues (or highest index for the neck sweep)
    #[arg(long)]
    pub k: Option<usize>,
    /// Eigensolver tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Grid points per axis
    #[arg(long)]
    pub grid: Option<usize>,
    /// Grid refinement sequence
    #[arg(long, value_delimiter = ',')]
    pub grids: Option<Vec<usize>>,
    /// Neck radii, strictly descending
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Profile samples or random inputs
    #[arg(long)]
    pub samples: Option<usize>,
    /// Perturbation sizes, strictly descending
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
    /// Amplitude of the conformal exponent
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Â-genus
    #[arg(long, allow_negative_numbers = true)]
    pub ahat: Option<i64>,
    /// Nontrivial mod-2 α (dimensions 1, 2 mod 8)
    #[arg(long)]
    pub alpha_nonzero: Option<bool>,
    /// Spin manifold
    #[arg(long)]
    pub spin: Option<bool>,
    /// Simply connected manifold
    #[arg(long)]
    pub simply_connected: Option<bool>,
    /// Degree in the spectral-comparison constant C(n, l)
    #[arg(long)]
    pub l: Option<usize>,
}

macro_rules! fields {
    ($($f:ident),*) => {
        impl Params {
            /// `self` wins where set.
            pub fn overlay(self, base: Params) -> Params {
                Params { $($f: self.$f.or(base.$f)),* }
            }

            /// Names of the fields that are set.
            pub fn present(&self) -> Vec<&'static str> {
                let mut out = Vec::new();
                $(if self.$f.is_some() { out.push(stringify!($f)); })*
                out
            }
        }
    };
}

fields!(
    seed,
    model,
    n,
    c,
    k,
    tol,
    grid,
    grids,
    radii,
    samples,
    deltas,
    amplitude,
    ahat,
    alpha_nonzero,
    spin,
    simply_connected,
    l
);

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: Params,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let cfg = Params {
            n: Some(4),
            c: Some(0.1),
            ..Params::default()
        };
        let flags = Params {
            n: Some(8),
            ..Params::default()
        };
        let p = flags.overlay(cfg);
        assert_eq!((p.n, p.c), (Some(8), Some(0.1)));
        assert_eq!(p.present(), vec!["n", "c"]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let ok: ExperimentConfig =
            serde_json::from_str(r#"{"experiment": "neck-sweep", "params": {"radii": [0.2, 0.1]}}"#).unwrap();
        assert_eq!(ok.experiment, Some(Experiment::NeckSweep));
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"params": {"radius": 0.2}}"#).is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"threads": 2}"#).is_err());
    }
}
