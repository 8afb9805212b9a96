//! The pinned acceptance suite configuration. The same file backs the CLI
//! presets, so a bare `sparsketch embed-l2` reproduces the acceptance run.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sparsketch::{Error, Result};

use crate::config::{ExperimentConfig, ExperimentId};

pub const ACCEPTANCE_VERSION: u32 = 1;

const BUILTIN: &str = include_str!("../configs/acceptance.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    pub d: usize,
    pub k: usize,
    pub t: usize,
    pub c_overlap: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedParams {
    pub k: usize,
    pub eps: f64,
    pub n: usize,
    /// Overlap of the off-planted support as a fraction of `k`, rounded up.
    pub overlap_fraction: f64,
    /// Allowed deviation from the closed form, in units of `eps^2`.
    pub tolerance_eps_sq: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuntimeLimits {
    pub embed_l2_seconds: f64,
    pub calibrate_seconds: f64,
    pub recover_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptanceConfig {
    pub version: u32,
    pub embed_l2: ExperimentConfig,
    pub calibrate_stable: ExperimentConfig,
    /// Fixed-vector median estimator runs, one per `p`.
    pub median_fixed: Vec<ExperimentConfig>,
    /// Numerator of the fixed-vector sketch size `ceil(numerator / eps^2)`.
    pub median_fixed_numerator: f64,
    pub embed_lp: ExperimentConfig,
    pub max_c_gauss: f64,
    pub max_c_med: f64,
    pub embed_relu: ExperimentConfig,
    pub embed_hinge: ExperimentConfig,
    pub recover: ExperimentConfig,
    pub lasso: ExperimentConfig,
    pub sampling_fail: ExperimentConfig,
    pub family: FamilyParams,
    pub planted: PlantedParams,
    pub sketched_min: ExperimentConfig,
    /// CLI preset only; not an acceptance criterion.
    pub support_sweep: ExperimentConfig,
    pub runtime: RuntimeLimits,
}

impl AcceptanceConfig {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("built-in acceptance config is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn experiments(&self) -> impl Iterator<Item = &ExperimentConfig> {
        [
            &self.embed_l2,
            &self.calibrate_stable,
            &self.embed_lp,
            &self.embed_relu,
            &self.embed_hinge,
            &self.recover,
            &self.lasso,
            &self.sampling_fail,
            &self.sketched_min,
            &self.support_sweep,
        ]
        .into_iter()
        .chain(&self.median_fixed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != ACCEPTANCE_VERSION {
            return Err(Error::InvalidArgument(format!(
                "acceptance config version {} is not {ACCEPTANCE_VERSION}",
                self.version
            )));
        }
        for cfg in self.experiments() {
            cfg.validate()?;
        }
        let misfiled = self.median_fixed.iter().find(|c| c.experiment != ExperimentId::EmbedLp);
        if let Some(c) = misfiled {
            return Err(Error::InvalidArgument(format!("median_fixed entry runs {}", c.experiment)));
        }
        Ok(())
    }

    /// The preset behind a CLI subcommand.
    pub fn preset(&self, id: ExperimentId) -> &ExperimentConfig {
        match id {
            ExperimentId::EmbedL2 => &self.embed_l2,
            ExperimentId::EmbedLp => &self.embed_lp,
            ExperimentId::EmbedRelu => &self.embed_relu,
            ExperimentId::EmbedHinge => &self.embed_hinge,
            ExperimentId::Recover => &self.recover,
            ExperimentId::Lasso => &self.lasso,
            ExperimentId::SamplingFail => &self.sampling_fail,
            ExperimentId::SupportSweep => &self.support_sweep,
            ExperimentId::CalibrateStable => &self.calibrate_stable,
            ExperimentId::SketchedMin => &self.sketched_min,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses_and_presets_match_ids() {
        let acc = AcceptanceConfig::builtin();
        for id in ExperimentId::ALL {
            assert_eq!(acc.preset(id).experiment, id);
        }
    }

    #[test]
    fn unknown_keys_and_wrong_version_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(BUILTIN).unwrap();
        v["surprise"] = 1.into();
        assert!(AcceptanceConfig::from_json(&v.to_string()).is_err());
        let mut v: serde_json::Value = serde_json::from_str(BUILTIN).unwrap();
        v["version"] = 99.into();
        assert!(AcceptanceConfig::from_json(&v.to_string()).is_err());
    }
}
