//! One runner per experiment id. Every runner derives its randomness from
//! `(master_seed, trial, purpose)` streams, so trials can run in any order.

mod calibrate;
mod embedding;
mod lasso;
mod recovery;
mod sampling;
mod sketched_min;
mod sweep;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use sparsketch::numerics::RngStream;
use sparsketch::Result;

use crate::config::{ExperimentConfig, ExperimentId};
use crate::report::{aux_columns, CurvePoint, ExperimentReport, TrialRecord};

pub use embedding::universal_l2_distortion;

/// Stream purposes within a trial.
pub(crate) mod purpose {
    pub const INSTANCE: u16 = 0;
    pub const SKETCH: u16 = 1;
    pub const PROBES: u16 = 2;
    pub const SIGNAL: u16 = 3;
    pub const SAMPLE: u16 = 4;
    pub const FAMILY: u16 = 5;
}

/// Trial index reserved for experiment-wide draws such as a shared instance.
pub(crate) const SHARED_TRIAL: u64 = (1 << 47) - 1;

pub(crate) fn stream(cfg: &ExperimentConfig, trial: u64, purpose: u16) -> RngStream {
    RngStream::for_trial(cfg.master_seed, trial, purpose)
}

/// What one trial reports besides its index and timing.
pub(crate) struct Outcome {
    pub value: f64,
    pub success: bool,
    pub aux: BTreeMap<String, f64>,
}

impl Outcome {
    pub fn new(value: f64, success: bool, aux: &[(&str, f64)]) -> Self {
        Self {
            value,
            success,
            aux: aux.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Runs `trial` for every index in parallel and returns records in index
/// order.
pub(crate) fn run_trials<F>(cfg: &ExperimentConfig, trial: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(usize) -> Result<Outcome> + Sync,
{
    let columns = aux_columns(cfg.experiment);
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            let out = trial(t)?;
            debug_assert!(columns.iter().all(|c| out.aux.contains_key(*c)));
            Ok(TrialRecord {
                trial: t,
                stream: stream(cfg, t as u64, purpose::SKETCH).stream_index(),
                value: out.value,
                success: out.success,
                wall_seconds: start.elapsed().as_secs_f64(),
                aux: out.aux,
            })
        })
        .collect()
}

pub(crate) fn finish(
    cfg: &ExperimentConfig,
    records: Vec<TrialRecord>,
    extras: &[(&str, f64)],
    curve: Vec<CurvePoint>,
) -> ExperimentReport {
    let extras = extras.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    ExperimentReport::assemble(cfg.clone(), records, extras, curve)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    log::info!("running {} with {} trials", cfg.experiment, cfg.trials);
    match cfg.experiment {
        ExperimentId::EmbedL2
        | ExperimentId::EmbedLp
        | ExperimentId::EmbedRelu
        | ExperimentId::EmbedHinge => embedding::run_embedding_experiment(cfg),
        ExperimentId::Recover => recovery::run_sparse_recovery_experiment(cfg),
        ExperimentId::Lasso => lasso::run_lasso_experiment(cfg),
        ExperimentId::SamplingFail => sampling::run_sampling_failure_experiment(cfg),
        ExperimentId::SupportSweep => sweep::run_support_recovery_sweep(cfg),
        ExperimentId::CalibrateStable => calibrate::run_calibration_experiment(cfg),
        ExperimentId::SketchedMin => sketched_min::run_sketched_min_experiment(cfg),
    }
}
