use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use sparsketch::{Error, Result};

use crate::config::{ExperimentConfig, ExperimentId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// Stream index of the trial's sketch RNG (the seed is the master seed).
    pub stream: u64,
    /// Distortion, cost ratio or error, depending on the experiment.
    pub value: f64,
    pub success: bool,
    pub wall_seconds: f64,
    /// Experiment-specific columns, keyed as listed by [`aux_columns`].
    pub aux: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub m: usize,
    pub trials: usize,
    pub mean_value: f64,
    pub success_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub success_rate: f64,
    pub max_value: f64,
    pub q10: f64,
    pub q50: f64,
    pub q90: f64,
    pub thresholds_met: bool,
    /// Experiment-level numbers such as the sketch size used.
    pub extras: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curve: Vec<CurvePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

/// Fixed extra CSV columns of each experiment, in order.
pub fn aux_columns(id: ExperimentId) -> &'static [&'static str] {
    match id {
        ExperimentId::EmbedL2 => &["m", "exact_max_distortion"],
        ExperimentId::EmbedLp => &["m"],
        ExperimentId::EmbedRelu => &["m", "l1_bound_ok"],
        ExperimentId::EmbedHinge => &["m1", "m2", "lower_bound_ok"],
        ExperimentId::Recover => &["measurements", "error", "tail"],
        ExperimentId::Lasso => &["m", "opt", "sketched_cost", "sketched_opt", "l1_norm", "norm_bound_ok"],
        ExperimentId::SamplingFail => &["m", "planted_index", "sampled"],
        ExperimentId::SupportSweep => &["m", "recovered"],
        ExperimentId::CalibrateStable => &["p", "median"],
        ExperimentId::SketchedMin => &["m", "opt", "true_cost"],
    }
}

/// Linear-interpolation quantile of sorted values.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

impl ExperimentReport {
    pub fn assemble(
        config: ExperimentConfig,
        records: Vec<TrialRecord>,
        extras: BTreeMap<String, f64>,
        curve: Vec<CurvePoint>,
    ) -> Self {
        let mut values: Vec<f64> = records.iter().map(|r| r.value).collect();
        values.sort_by(|a, b| a.total_cmp(b));
        let successes = records.iter().filter(|r| r.success).count();
        let success_rate = if records.is_empty() {
            0.0
        } else {
            successes as f64 / records.len() as f64
        };
        let summary = Summary {
            success_rate,
            max_value: values.last().copied().unwrap_or(0.0),
            q10: quantile(&values, 0.1),
            q50: quantile(&values, 0.5),
            q90: quantile(&values, 0.9),
            thresholds_met: config.thresholds_met(success_rate),
            extras,
            curve,
        };
        Self {
            config,
            records,
            summary,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The report with wall times zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.records.iter_mut().for_each(|t| t.wall_seconds = 0.0);
        r
    }

    pub fn csv_header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["trial", "stream", "value", "success", "wall_seconds"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        h.extend(aux_columns(self.config.experiment).iter().map(|s| s.to_string()));
        h
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        w.write_record(self.csv_header()).map_err(io)?;
        for r in &self.records {
            let mut row = vec![
                r.trial.to_string(),
                r.stream.to_string(),
                float17(r.value),
                r.success.to_string(),
                float17(r.wall_seconds),
            ];
            for col in aux_columns(self.config.experiment) {
                let v = r
                    .aux
                    .get(*col)
                    .ok_or_else(|| Error::InvalidArgument(format!("trial {} lacks column {col}", r.trial)))?;
                row.push(float17(*v));
            }
            w.write_record(&row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Histogram of per-trial values as a standalone SVG document.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 360.0;
        const PAD: f64 = 48.0;
        const BINS: usize = 20;
        let values: Vec<f64> = self.records.iter().map(|r| r.value).collect();
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if values.is_empty() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        };
        let mut counts = [0usize; BINS];
        for v in &values {
            let b = (((v - lo) / (hi - lo)) * BINS as f64) as usize;
            counts[b.min(BINS - 1)] += 1;
        }
        let top = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
        let bar_w = (W - 2.0 * PAD) / BINS as f64;
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(
            svg,
            r#"<title>{} value histogram ({} trials)</title>"#,
            self.config.experiment,
            values.len()
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{PAD}" y1="{y}" x2="{x2}" y2="{y}" stroke="black"/>"#,
            y = H - PAD,
            x2 = W - PAD
        );
        for (i, c) in counts.iter().enumerate() {
            let h = (H - 2.0 * PAD) * *c as f64 / top;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue"/>"#,
                PAD + i as f64 * bar_w,
                H - PAD - h,
                bar_w * 0.9,
                h
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{PAD}" y="{y}" font-size="12">{lo:.4}</text>"#,
            y = H - PAD / 3.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" font-size="12" text-anchor="end">{hi:.4}</text>"#,
            x = W - PAD,
            y = H - PAD / 3.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{PAD}" y="{y}" font-size="12">max count {top}</text>"#,
            y = PAD / 2.0
        );
        svg.push_str("</svg>\n");
        svg
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

/// Writes `<dir>/<experiment>.<ext>` and returns its path.
pub fn emit_report(report: &ExperimentReport, format: Format, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(format!("{}.{}", report.config.experiment, format.extension()));
    let body = match format {
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json()?,
        Format::Svg => report.to_svg(),
    };
    std::fs::write(&path, body)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
