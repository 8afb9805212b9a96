use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use sparsketch::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    EmbedL2,
    EmbedLp,
    EmbedRelu,
    EmbedHinge,
    Recover,
    Lasso,
    SamplingFail,
    SupportSweep,
    CalibrateStable,
    SketchedMin,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        ExperimentId::EmbedL2,
        ExperimentId::EmbedLp,
        ExperimentId::EmbedRelu,
        ExperimentId::EmbedHinge,
        ExperimentId::Recover,
        ExperimentId::Lasso,
        ExperimentId::SamplingFail,
        ExperimentId::SupportSweep,
        ExperimentId::CalibrateStable,
        ExperimentId::SketchedMin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::EmbedL2 => "embed-l2",
            ExperimentId::EmbedLp => "embed-lp",
            ExperimentId::EmbedRelu => "embed-relu",
            ExperimentId::EmbedHinge => "embed-hinge",
            ExperimentId::Recover => "recover",
            ExperimentId::Lasso => "lasso",
            ExperimentId::SamplingFail => "sampling-fail",
            ExperimentId::SupportSweep => "support-sweep",
            ExperimentId::CalibrateStable => "calibrate-stable",
            ExperimentId::SketchedMin => "sketched-min",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown experiment id {s:?}")))
    }
}

/// Everything needed to replay one experiment. Fields that an experiment
/// does not read are echoed but otherwise ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "defaults::trials")]
    pub trials: usize,

    #[serde(default = "defaults::n")]
    pub n: usize,
    #[serde(default = "defaults::d")]
    pub d: usize,
    #[serde(default = "defaults::k")]
    pub k: usize,
    #[serde(default = "defaults::eps")]
    pub eps: f64,
    #[serde(default = "defaults::delta")]
    pub delta: f64,
    #[serde(default = "defaults::p")]
    pub p: f64,
    #[serde(default = "defaults::lambda")]
    pub lambda: f64,
    /// Imbalance bound of the ReLU and hinge instances.
    #[serde(default = "defaults::mu")]
    pub mu: f64,
    /// Standard deviation of the additive noise in Gaussian sparse instances.
    #[serde(default = "defaults::noise")]
    pub noise: f64,
    /// Power-law exponent of recovery signals.
    #[serde(default = "defaults::decay")]
    pub decay: f64,

    #[serde(default = "defaults::c_gauss")]
    pub c_gauss: f64,
    #[serde(default = "defaults::c_med")]
    pub c_med: f64,
    #[serde(default = "defaults::c_relu_m1")]
    pub c_relu_m1: f64,
    #[serde(default = "defaults::c_hinge_m2")]
    pub c_hinge_m2: f64,
    #[serde(default = "defaults::c_a")]
    pub c_a: f64,
    #[serde(default = "defaults::c_b")]
    pub c_b: f64,
    #[serde(default = "defaults::c_l")]
    pub c_l: f64,

    /// Overrides the formula-derived sketch size.
    #[serde(default)]
    pub m: Option<usize>,
    /// Sketch sizes visited by the support sweep.
    #[serde(default)]
    pub m_grid: Vec<usize>,
    /// Monte-Carlo draws per trial of the stable calibration.
    #[serde(default = "defaults::samples")]
    pub samples: usize,
    /// Probe points per embedding trial, split 50/25/25 between random,
    /// near-optimal and axis-aligned families.
    #[serde(default = "defaults::probes")]
    pub probes: usize,
    /// Draw a fresh instance in every trial instead of one per experiment.
    #[serde(default)]
    pub instance_per_trial: bool,

    /// Acceptance thresholds on the success rate.
    #[serde(default)]
    pub min_success_rate: Option<f64>,
    #[serde(default)]
    pub max_success_rate: Option<f64>,

    #[serde(default)]
    pub output: Option<PathBuf>,
}

mod defaults {
    pub fn trials() -> usize {
        100
    }
    pub fn n() -> usize {
        1000
    }
    pub fn d() -> usize {
        30
    }
    pub fn k() -> usize {
        2
    }
    pub fn eps() -> f64 {
        0.25
    }
    pub fn delta() -> f64 {
        0.1
    }
    pub fn p() -> f64 {
        1.0
    }
    pub fn lambda() -> f64 {
        0.1
    }
    pub fn mu() -> f64 {
        2.0
    }
    pub fn noise() -> f64 {
        0.5
    }
    pub fn decay() -> f64 {
        1.0
    }
    pub fn c_gauss() -> f64 {
        6.0
    }
    pub fn c_med() -> f64 {
        20.0
    }
    pub fn c_relu_m1() -> f64 {
        4.0
    }
    pub fn c_hinge_m2() -> f64 {
        4.0
    }
    pub fn c_a() -> f64 {
        2.0
    }
    pub fn c_b() -> f64 {
        1.0
    }
    pub fn c_l() -> f64 {
        0.045
    }
    pub fn samples() -> usize {
        1_000_000
    }
    pub fn probes() -> usize {
        200
    }
}

impl ExperimentConfig {
    /// Defaults for every field except the experiment id.
    pub fn new(experiment: ExperimentId) -> Self {
        serde_json::from_value(serde_json::json!({ "experiment": experiment }))
            .expect("defaults deserialize")
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

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n == 0 || self.d == 0 {
            return bad(format!("n and d must be at least 1 (n={}, d={})", self.n, self.d));
        }
        if self.k > self.d {
            return bad(format!("k = {} exceeds d = {}", self.k, self.d));
        }
        for (name, v) in [("eps", self.eps), ("delta", self.delta), ("lambda", self.lambda)] {
            if !(v > 0.0 && v < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {v}"));
            }
        }
        let constants = [
            ("c_gauss", self.c_gauss),
            ("c_med", self.c_med),
            ("c_relu_m1", self.c_relu_m1),
            ("c_hinge_m2", self.c_hinge_m2),
            ("c_a", self.c_a),
            ("c_b", self.c_b),
            ("c_l", self.c_l),
        ];
        for (name, v) in constants {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return bad(format!("noise must be nonnegative, got {}", self.noise));
        }
        if !(1.0..=2.0).contains(&self.p) {
            return bad(format!("p must lie in [1, 2], got {}", self.p));
        }
        if !(self.mu >= 1.0 && self.mu.is_finite()) {
            return bad(format!("mu must be >= 1, got {}", self.mu));
        }
        if !(self.decay > 0.5) {
            return bad(format!("decay must exceed 0.5, got {}", self.decay));
        }
        if self.m == Some(0) || self.m_grid.contains(&0) {
            return bad("sketch sizes must be at least 1".into());
        }
        if self.samples == 0 || self.probes < 4 {
            return bad("samples must be >= 1 and probes >= 4".into());
        }
        for rate in [self.min_success_rate, self.max_success_rate].into_iter().flatten() {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("success-rate thresholds must lie in [0, 1], got {rate}"));
            }
        }
        if self.experiment == ExperimentId::SupportSweep && self.m_grid.is_empty() {
            return bad("support-sweep needs a non-empty m_grid".into());
        }
        Ok(())
    }

    /// Whether a success rate meets the configured thresholds.
    pub fn thresholds_met(&self, success_rate: f64) -> bool {
        self.min_success_rate.is_none_or(|t| success_rate >= t)
            && self.max_success_rate.is_none_or(|t| success_rate <= t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_through_strings_and_json() {
        for id in ExperimentId::ALL {
            assert_eq!(id.as_str().parse::<ExperimentId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{id}\""));
        }
        assert!("embed-l3".parse::<ExperimentId>().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_json(r#"{"experiment": "lasso", "lamda": 0.2}"#);
        assert!(err.is_err());
    }

    #[test]
    fn missing_fields_take_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "recover", "d": 500}"#).unwrap();
        assert_eq!(cfg.d, 500);
        assert_eq!(cfg.trials, 100);
        assert_eq!(cfg, {
            let mut c = ExperimentConfig::new(ExperimentId::Recover);
            c.d = 500;
            c
        });
    }

    #[test]
    fn invalid_values_are_rejected() {
        let base = ExperimentConfig::new(ExperimentId::EmbedL2);
        let cases: Vec<Box<dyn Fn(&mut ExperimentConfig)>> = vec![
            Box::new(|c| c.trials = 0),
            Box::new(|c| c.eps = 1.0),
            Box::new(|c| c.delta = 0.0),
            Box::new(|c| c.c_gauss = -1.0),
            Box::new(|c| c.k = c.d + 1),
            Box::new(|c| c.m = Some(0)),
            Box::new(|c| c.min_success_rate = Some(1.5)),
            Box::new(|c| c.p = 2.5),
        ];
        assert!(base.validate().is_ok());
        for mutate in cases {
            let mut c = base.clone();
            mutate(&mut c);
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn thresholds_in_both_directions() {
        let mut c = ExperimentConfig::new(ExperimentId::SamplingFail);
        assert!(c.thresholds_met(0.0));
        c.max_success_rate = Some(0.4);
        assert!(c.thresholds_met(0.4));
        assert!(!c.thresholds_met(0.41));
        c.min_success_rate = Some(0.1);
        assert!(!c.thresholds_met(0.05));
    }
}
