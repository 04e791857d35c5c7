//! Model flags and JSON config files. A flag that is present always wins
//! over the same field in a file.

use std::fs;
use std::path::{Path, PathBuf};

use cergraph::codec::CodecConfig;
use cergraph::model::{DistributionSpec, MatrixSpec, SourceVariant};
use cergraph::rng::DEFAULT_SEED;
use cergraph::{entropy_report, Error, JointEdgeDistribution, Result};
use clap::Args;
use serde::Deserialize;

const DEFAULT_P: f64 = 0.5;
const DEFAULT_GAMMA: f64 = 0.5;
const DEFAULT_DELTA: f64 = 0.5;
const DEFAULT_TRIALS: u64 = 1000;

#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Named model; `subsampling` uses --p and --gamma.
    #[arg(long, value_parser = ["subsampling"])]
    pub model: Option<String>,
    /// Edge density of the parent graph.
    #[arg(long)]
    pub p: Option<f64>,
    /// Probability that each copy keeps a parent edge.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Explicit joint matrix as JSON rows, e.g. `[[0.6,0.1],[0.1,0.2]]`.
    #[arg(long, conflicts_with_all = ["model", "p", "gamma"])]
    pub matrix: Option<String>,
}

impl ModelArgs {
    /// `None` when no model flag was given.
    pub fn spec(&self) -> Result<Option<DistributionSpec>> {
        if let Some(text) = &self.matrix {
            let p: Vec<Vec<f64>> = serde_json::from_str(text)?;
            let rows = p.len();
            let cols = p.first().map_or(0, Vec::len);
            if rows < 2 || cols < 2 || rows > 256 || cols > 256 {
                return Err(Error::InvalidDistribution(format!("matrix is {rows}x{cols}")));
            }
            return Ok(Some(DistributionSpec::Matrix(MatrixSpec {
                ka: (rows - 1) as u8,
                kb: (cols - 1) as u8,
                p,
            })));
        }
        if self.model.is_none() && self.p.is_none() && self.gamma.is_none() {
            return Ok(None);
        }
        Ok(Some(DistributionSpec::subsampling(
            self.p.unwrap_or(DEFAULT_P),
            self.gamma.unwrap_or(DEFAULT_GAMMA),
        )))
    }

    pub fn build(&self) -> Result<JointEdgeDistribution> {
        self.spec()?
            .unwrap_or_else(|| DistributionSpec::subsampling(DEFAULT_P, DEFAULT_GAMMA))
            .build()
    }
}

/// `codec-sim` settings; every field optional so files and flags can be layered.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodecSimFile {
    pub n: Option<usize>,
    pub model: Option<DistributionSpec>,
    pub variant: Option<SourceVariant>,
    pub rate: Option<f64>,
    pub delta: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl CodecSimFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fields of `self`, falling back to `base`.
    pub fn over(self, base: CodecSimFile) -> CodecSimFile {
        CodecSimFile {
            n: self.n.or(base.n),
            model: self.model.or(base.model),
            variant: self.variant.or(base.variant),
            rate: self.rate.or(base.rate),
            delta: self.delta.or(base.delta),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            output: self.output.or(base.output),
        }
    }

    pub fn resolve(self) -> Result<(CodecConfig, u64, Option<PathBuf>)> {
        let n = self.n.ok_or_else(|| Error::InvalidArgument("n is required".into()))?;
        let dist = self
            .model
            .unwrap_or_else(|| DistributionSpec::subsampling(DEFAULT_P, DEFAULT_GAMMA))
            .build()?;
        let delta = self.delta.unwrap_or(DEFAULT_DELTA);
        let rate = self
            .rate
            .unwrap_or_else(|| entropy_report(&dist).h_a_given_b + 2.0 * delta);
        let trials = self.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        let config = CodecConfig {
            n,
            dist,
            variant: self.variant.unwrap_or(SourceVariant::GraphGivenStructure),
            rate,
            delta,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        };
        config.validate()?;
        Ok((config, trials, self.output))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: CodecSimFile = serde_json::from_str(
            r#"{"n": 4, "trials": 50, "delta": 0.25, "model": {"model": "subsampling", "p": 0.3, "gamma": 0.9}}"#,
        )
        .unwrap();
        let flags = CodecSimFile {
            trials: Some(7),
            ..CodecSimFile::default()
        };
        let (config, trials, _) = flags.over(file).resolve().unwrap();
        assert_eq!(trials, 7);
        assert_eq!(config.n, 4);
        assert_eq!(config.delta, 0.25);
        assert_eq!(config.dist, DistributionSpec::subsampling(0.3, 0.9).build().unwrap());
        assert_eq!(config.seed, DEFAULT_SEED);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<CodecSimFile>(r#"{"n": 3, "trails": 4}"#).is_err());
    }

    #[test]
    fn matrix_flag() {
        let args = ModelArgs {
            matrix: Some("[[0.6,0.1],[0.1,0.2]]".into()),
            ..ModelArgs::default()
        };
        let d = args.build().unwrap();
        assert_eq!((d.ka(), d.kb()), (1, 1));
        assert_eq!(d.prob(1, 1), 0.2);
        assert!(ModelArgs::default().spec().unwrap().is_none());
    }
}
