//! JSON result documents.
//!
//! Every document starts with the resolved run configuration so a result
//! file alone is enough to reproduce it. Maps are ordered and floats use
//! the shortest round-trip representation, so equal runs give equal bytes.

use std::collections::BTreeMap;

use serde::Serialize;
use tailfit_core::analysis::{KeyPlayerReport, Peak, RateAnalysis};
use tailfit_core::{CountSample, Family, FitResult, GofResult};

/// Everything that determines a run's output. Thread count and progress
/// reporting are deliberately absent: they cannot change results.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    pub seed: u64,
    /// `flag`, `env` or `generated`.
    pub seed_source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub years: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prominence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub plot_data: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint_out: Option<String>,
}

impl RunConfig {
    /// One-line JSON, for `#` headers of text outputs.
    pub fn header_line(&self) -> String {
        format!("config: {}", serde_json::to_string(self).expect("config serializes"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelInfo {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub n_min: u64,
}

impl ModelInfo {
    pub fn new(spec: &tailfit_core::ModelSpec) -> Self {
        let family = spec.family();
        let params = family
            .param_names()
            .iter()
            .zip(spec.param_vec())
            .map(|(name, v)| (name.to_string(), v))
            .collect();
        ModelInfo { family: family.short_name().into(), params, n_min: spec.n_min() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusInfo {
    pub label: String,
    pub n_authors: u64,
    pub distinct_values: usize,
    pub min_value: u64,
    pub max_value: u64,
}

impl CorpusInfo {
    pub fn new(data: &CountSample) -> Self {
        CorpusInfo {
            label: data.label().into(),
            n_authors: data.total(),
            distinct_values: data.distinct(),
            min_value: data.min_value(),
            max_value: data.max_value(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitRow {
    pub family: String,
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub n_min: u64,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    pub diagnostics: Vec<f64>,
}

impl FitRow {
    pub fn new(fit: &FitResult) -> Self {
        let model = ModelInfo::new(&fit.spec);
        FitRow {
            family: model.family,
            name: fit.spec.family().to_string(),
            params: model.params,
            n_min: model.n_min,
            log_likelihood: fit.log_likelihood,
            iterations: fit.iterations,
            converged: fit.converged,
            diagnostics: fit.diagnostics.clone(),
        }
    }
}

/// A per-family outcome: either a result or the error that prevented it.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Ok(T),
    Failed { family: String, error: String },
}

impl<T> Outcome<T> {
    pub fn failed(family: Family, error: impl ToString) -> Self {
        Outcome::Failed { family: family.short_name().into(), error: error.to_string() }
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, Outcome::Failed { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub config: RunConfig,
    pub corpus: CorpusInfo,
    pub fits: Vec<Outcome<FitRow>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GofRow {
    #[serde(flatten)]
    pub fit: FitRow,
    pub observed_ks: f64,
    pub p_value: f64,
    /// The p-value as a percentage with two decimals, or `< 100/R %` when
    /// no replicate exceeded the observed distance.
    pub p_percent: String,
    pub rejected: bool,
    pub exceedances: usize,
    pub replicates: usize,
    pub effective_replicates: usize,
    pub failed_replicates: Vec<u64>,
    pub seed: u64,
}

impl GofRow {
    pub fn new(r: &GofResult) -> Self {
        GofRow {
            fit: FitRow::new(&r.fitted),
            observed_ks: r.observed_ks,
            p_value: r.p_value,
            p_percent: p_percent(r.p_value, r.effective_replicates()),
            rejected: r.rejected(),
            exceedances: r.exceedances(),
            replicates: r.replicates,
            effective_replicates: r.effective_replicates(),
            failed_replicates: r.failed.clone(),
            seed: r.seed,
        }
    }
}

/// `12.34%`, or `< 0.02%` for a zero p-value from 5000 replicates.
pub fn p_percent(p: f64, replicates: usize) -> String {
    if p == 0.0 && replicates > 0 {
        format!("< {}%", trim_zeros(100.0 / replicates as f64))
    } else {
        format!("{:.2}%", 100.0 * p)
    }
}

fn trim_zeros(x: f64) -> String {
    let s = format!("{x:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct GofReport {
    pub config: RunConfig,
    pub corpus: CorpusInfo,
    pub tests: Vec<Outcome<GofRow>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KeyPlayerJson {
    pub n_max: f64,
    pub fitted_alpha: f64,
    pub n_authors: u64,
    pub exceeders: Vec<ValueCount>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ValueCount {
    pub count: u64,
    pub multiplicity: u64,
}

impl From<&KeyPlayerReport> for KeyPlayerJson {
    fn from(r: &KeyPlayerReport) -> Self {
        KeyPlayerJson {
            n_max: r.n_max,
            fitted_alpha: r.fitted_alpha,
            n_authors: r.n_authors,
            exceeders: r.exceeders.iter().map(|&(count, multiplicity)| ValueCount { count, multiplicity }).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PeakJson {
    pub value: u64,
    pub height: f64,
}

impl From<&Peak> for PeakJson {
    fn from(p: &Peak) -> Self {
        PeakJson { value: p.value, height: p.height }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusAnalysis {
    pub corpus: CorpusInfo,
    pub power_law: Outcome<FitRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub key_players: Option<KeyPlayerJson>,
    pub peaks: Vec<PeakJson>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cell {
    pub count_a: u64,
    pub count_b: u64,
    pub n_authors: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct JointSummary {
    pub shared_authors: u64,
    pub occupied_cells: usize,
    pub top_cells: Vec<Cell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub config: RunConfig,
    pub corpora: Vec<CorpusAnalysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint: Option<JointSummary>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatePointJson {
    pub k: u64,
    pub year: i32,
    pub n_k: u64,
    pub m_k: u64,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrefAttachReport {
    pub config: RunConfig,
    pub label: String,
    /// `null` when the correlation is undefined (fewer than two points or
    /// zero variance); see `pearson_defined`.
    pub pearson_r: Option<f64>,
    pub pearson_defined: bool,
    pub n_points: usize,
    pub points: Vec<RatePointJson>,
}

impl PrefAttachReport {
    pub fn new(config: RunConfig, label: &str, rates: &RateAnalysis) -> Self {
        PrefAttachReport {
            config,
            label: label.into(),
            pearson_r: rates.pearson_defined.then_some(rates.pearson_r),
            pearson_defined: rates.pearson_defined,
            n_points: rates.points.len(),
            points: rates
                .points
                .iter()
                .map(|p| RatePointJson { k: p.k, year: p.year, n_k: p.n_k, m_k: p.m_k, rate: p.rate })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
