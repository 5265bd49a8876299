use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mldeg_core::solver::TrackerConfig;

/// Maximum likelihood degrees of sparse polynomial models.
///
/// Every command reads a JSON system document and writes a JSON report to
/// stdout (or `--out`). Reports record the input digest, seed and tracker
/// configuration, so a fixed seed reproduces a report byte for byte.
#[derive(Debug, Parser)]
#[command(name = "mldeg", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for all random choices. Overrides a seed stored in the input.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a system document and check its invariants.
    Validate { input: PathBuf },

    /// Emit the likelihood system 𝓛(F) as a system document.
    MlSystem {
        input: PathBuf,
        /// Multiply every model polynomial by x₁⋯xₙ first.
        #[arg(long)]
        hat: bool,
    },

    /// Mixed volume of the Newton polytopes of a square system.
    MixedVolume {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VolumeMethod::Both)]
        method: VolumeMethod,
        /// Use the polytopes of 𝓛(F) instead of those of the input.
        #[arg(long)]
        ml: bool,
    },

    /// ML degree by mixed volume, by numerical solving, or both.
    MlDegree {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DegreeMethod::Both)]
        method: DegreeMethod,
        /// Do not re-run with a fresh seed when the count disagrees.
        #[arg(long)]
        no_retry: bool,
        #[command(flatten)]
        tracker: TrackerArgs,
    },

    /// Classify exposed faces of Newt(ℓ̂₁) by weight vector.
    Classify {
        input: PathBuf,
        /// One weight vector in ℤⁿ⁺ᵏ, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            conflicts_with = "radius",
            required_unless_present = "radius"
        )]
        weight: Option<Vec<i64>>,
        /// Scan every nonzero weight vector in [-r, r]ⁿ⁺ᵏ.
        #[arg(long)]
        radius: Option<i64>,
        /// Include one row per weight vector in a scan report.
        #[arg(long)]
        rows: bool,
    },

    /// Random sparse square systems: torus solution count against mixed volume.
    BkkCheck {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Trials cycle through n = 1, …, max-n.
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Monomials per polynomial, at least 2.
        #[arg(long, default_value_t = 5)]
        max_terms: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: i64,
        #[command(flatten)]
        tracker: TrackerArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    /// Inclusion–exclusion over Minkowski sums.
    Ie,
    /// Mixed cells of a random fine lifting.
    Cells,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeMethod {
    MixedVolume,
    Solve,
    Both,
}

/// Overrides for the path tracker defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct TrackerArgs {
    #[arg(long)]
    pub initial_step: Option<f64>,
    #[arg(long)]
    pub min_step: Option<f64>,
    #[arg(long)]
    pub newton_tolerance: Option<f64>,
    #[arg(long)]
    pub max_newton_iters: Option<usize>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub torus_threshold: Option<f64>,
    #[arg(long)]
    pub dedup_distance: Option<f64>,
}

impl TrackerArgs {
    pub fn config(&self) -> TrackerConfig {
        let mut c = TrackerConfig::default();
        if let Some(v) = self.initial_step {
            c.initial_step = v;
        }
        if let Some(v) = self.min_step {
            c.min_step = v;
        }
        if let Some(v) = self.newton_tolerance {
            c.newton_tolerance = v;
        }
        if let Some(v) = self.max_newton_iters {
            c.max_newton_iters = v;
        }
        if let Some(v) = self.max_steps {
            c.max_steps = v;
        }
        if let Some(v) = self.torus_threshold {
            c.torus_threshold = v;
        }
        if let Some(v) = self.dedup_distance {
            c.dedup_distance = v;
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_weights_parse() {
        let cli = Cli::try_parse_from(["mldeg", "classify", "f.json", "--weight", "-3,14,3"]).unwrap();
        match cli.command {
            Command::Classify { weight, .. } => assert_eq!(weight, Some(vec![-3, 14, 3])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weight_and_radius_exclusive() {
        assert!(Cli::try_parse_from(["mldeg", "classify", "f.json", "--weight", "1,0", "--radius", "2"]).is_err());
        assert!(Cli::try_parse_from(["mldeg", "classify", "f.json"]).is_err());
    }

    #[test]
    fn overrides_apply() {
        let cli = Cli::try_parse_from(["mldeg", "ml-degree", "f.json", "--min-step", "1e-9", "--seed", "5"]).unwrap();
        assert_eq!(cli.seed, Some(5));
        match cli.command {
            Command::MlDegree { tracker, method, .. } => {
                assert_eq!(method, DegreeMethod::Both);
                let c = tracker.config();
                assert_eq!(c.min_step, 1e-9);
                assert_eq!(c.initial_step, TrackerConfig::default().initial_step);
            }
            other => panic!("{other:?}"),
        }
    }
}
