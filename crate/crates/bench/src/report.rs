//! JSON and CSV reports. Wall-clock figures live only in the JSON `timing`
//! section so the rest of a report is reproducible byte for byte.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use copq_core::ising::BitString;
use copq_core::{Permutation, ProblemInstance};
use copq_qsim::variational::{Method, TrialRecord};
use copq_qsim::ShotDistribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{ExperimentConfig, ExperimentOutcome};
use crate::metrics::{format_percent, MetricsSummary, SuccessRule, Uncertainty};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 14] = [
    "problem", "n", "method", "par", "sr99", "sr95", "feas", "at_s", "mt_s", "n_feas", "unc_mean",
    "unc_max", "unc_min", "unc_std",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Validation(format!("unknown report format '{s}'"))),
        }
    }
}

impl ReportFormat {
    /// Guess from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        }
    }
}

/// A trial without its wall-clock time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialEntry {
    pub seed: u64,
    pub method: Method,
    pub params: Vec<f64>,
    pub best_bits: Option<BitString>,
    pub pi: Option<Permutation>,
    pub cost: Option<f64>,
    pub probability: f64,
    pub feasible: bool,
    pub distribution: Option<ShotDistribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualitySection {
    pub sr99: f64,
    pub sr95: f64,
    pub feasibility: f64,
    pub success_rule: SuccessRule,
    pub uncertainty: Uncertainty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingSection {
    pub at_s: f64,
    pub mt_s: f64,
    pub trial_elapsed_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub instance: ProblemInstance,
    pub optimum: f64,
    pub summary: QualitySection,
    pub trials: Vec<TrialEntry>,
    /// Kept last; excluded from reproducibility comparisons.
    pub timing: TimingSection,
}

impl Report {
    pub fn from_outcome(o: &ExperimentOutcome) -> Self {
        let s = &o.summary;
        Report {
            schema_version: SCHEMA_VERSION,
            config: o.config.clone(),
            instance: o.instance.clone(),
            optimum: o.optimum,
            summary: QualitySection {
                sr99: s.sr99,
                sr95: s.sr95,
                feasibility: s.feasibility,
                success_rule: s.success_rule,
                uncertainty: s.uncertainty,
            },
            trials: o
                .records
                .iter()
                .map(|r| TrialEntry {
                    seed: r.seed,
                    method: r.method,
                    params: r.params.clone(),
                    best_bits: r.best_bits.clone(),
                    pi: r.pi.clone(),
                    cost: r.cost,
                    probability: r.probability,
                    feasible: r.feasible,
                    distribution: r.distribution.clone(),
                })
                .collect(),
            timing: TimingSection {
                at_s: s.at_seconds,
                mt_s: s.mt_seconds,
                trial_elapsed_s: o.records.iter().map(|r| r.elapsed_s).collect(),
            },
        }
    }

    pub fn summary(&self) -> MetricsSummary {
        MetricsSummary {
            sr99: self.summary.sr99,
            sr95: self.summary.sr95,
            feasibility: self.summary.feasibility,
            at_seconds: self.timing.at_s,
            mt_seconds: self.timing.mt_s,
            uncertainty: self.summary.uncertainty,
            success_rule: self.summary.success_rule,
        }
    }

    pub fn records(&self) -> Vec<TrialRecord> {
        self.trials
            .iter()
            .zip(&self.timing.trial_elapsed_s)
            .map(|(t, &elapsed_s)| TrialRecord {
                seed: t.seed,
                method: t.method,
                params: t.params.clone(),
                best_bits: t.best_bits.clone(),
                pi: t.pi.clone(),
                cost: t.cost,
                probability: t.probability,
                distribution: t.distribution.clone(),
                elapsed_s,
                feasible: t.feasible,
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!(
                "unsupported report schema version {}",
                r.schema_version
            )));
        }
        Ok(r)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Report::from_json(&text)
    }
}

/// One table row per experiment.
pub fn csv_row(o: &ExperimentOutcome) -> Vec<String> {
    let s = &o.summary;
    let u = &s.uncertainty;
    vec![
        o.config.problem.to_string(),
        o.config.n.to_string(),
        o.config.method.to_string(),
        o.config.par_label(),
        format!("{:.1}", s.sr99),
        format!("{:.1}", s.sr95),
        format!("{:.1}", s.feasibility),
        format!("{:.6}", s.at_seconds),
        format!("{:.6}", s.mt_seconds),
        u.n_feasible.to_string(),
        format_percent(u.mean),
        format_percent(u.max),
        format_percent(u.min),
        format_percent(u.std),
    ]
}

pub fn render_csv(outcomes: &[&ExperimentOutcome]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for o in outcomes {
        w.write_record(csv_row(o))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Validation(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(o: &ExperimentOutcome, format: ReportFormat) -> Result<String> {
    if o.records.is_empty() {
        return Err(Error::Validation("no trial records to report".into()));
    }
    match format {
        ReportFormat::Json => Report::from_outcome(o).to_json(),
        ReportFormat::Csv => render_csv(&[o]),
    }
}

/// Writes the report; nothing is written when there are no records.
pub fn emit_report(o: &ExperimentOutcome, format: ReportFormat, path: &Path) -> Result<()> {
    let text = render(o, format)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
