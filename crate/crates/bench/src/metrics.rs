//! Success rates, feasibility, uncertainty percentage and timing averages.

use copq_qsim::variational::TrialRecord;
use serde::{Deserialize, Serialize};

/// How a trial was judged successful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessRule {
    /// `optimum / cost >= level`.
    Ratio,
    /// Used when the optimum is not positive: `cost == optimum`.
    ExactMatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessRates {
    pub sr99: f64,
    pub sr95: f64,
    pub rule: SuccessRule,
}

fn percent(hits: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * hits as f64 / total as f64
    }
}

/// Percentage of trials whose feasible cost reaches 99% / 95% of the
/// optimum; infeasible trials count as failures.
pub fn success_rates(records: &[TrialRecord], optimum: f64) -> SuccessRates {
    let rule = if optimum > 0.0 {
        SuccessRule::Ratio
    } else {
        SuccessRule::ExactMatch
    };
    let hits = |level: f64| {
        records
            .iter()
            .filter_map(|r| r.cost.filter(|_| r.feasible))
            .filter(|&cost| match rule {
                SuccessRule::Ratio => cost > 0.0 && optimum / cost >= level,
                SuccessRule::ExactMatch => (cost - optimum).abs() <= 1e-9 * optimum.abs().max(1.0),
            })
            .count()
    };
    SuccessRates {
        sr99: percent(hits(0.99), records.len()),
        sr95: percent(hits(0.95), records.len()),
        rule,
    }
}

pub fn feasibility(records: &[TrialRecord]) -> f64 {
    percent(records.iter().filter(|r| r.feasible).count(), records.len())
}

/// Statistics of `probability * 100` over feasible trials that produced a
/// shot distribution. All fields are `None` when there are no such trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uncertainty {
    pub n_feasible: usize,
    pub mean: Option<f64>,
    pub max: Option<f64>,
    pub min: Option<f64>,
    /// Population standard deviation.
    pub std: Option<f64>,
}

pub fn uncertainty_stats(records: &[TrialRecord]) -> Uncertainty {
    let v: Vec<f64> = records
        .iter()
        .filter(|r| r.feasible && r.distribution.is_some())
        .map(|r| r.probability * 100.0)
        .collect();
    if v.is_empty() {
        return Uncertainty {
            n_feasible: 0,
            mean: None,
            max: None,
            min: None,
            std: None,
        };
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Uncertainty {
        n_feasible: v.len(),
        mean: Some(mean),
        max: Some(v.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        min: Some(v.iter().copied().fold(f64::INFINITY, f64::min)),
        std: Some(var.sqrt()),
    }
}

/// Two decimals, or `-` for an absent statistic.
pub fn format_percent(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"))
}

/// Quantile with linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// `(AT, MT)`: mean elapsed time, and the mean after dropping values above
/// the upper Tukey fence `Q3 + 1.5 IQR`.
pub fn average_times(records: &[TrialRecord]) -> (f64, f64) {
    let times: Vec<f64> = records.iter().map(|r| r.elapsed_s).collect();
    average_times_of(&times)
}

pub fn average_times_of(times: &[f64]) -> (f64, f64) {
    if times.is_empty() {
        return (0.0, 0.0);
    }
    let at = times.iter().sum::<f64>() / times.len() as f64;
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (q1, q3) = (quantile(&sorted, 0.25), quantile(&sorted, 0.75));
    let fence = q3 + 1.5 * (q3 - q1);
    let kept: Vec<f64> = times.iter().copied().filter(|&t| t <= fence).collect();
    let mt = kept.iter().sum::<f64>() / kept.len() as f64;
    (at, mt)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub sr99: f64,
    pub sr95: f64,
    pub feasibility: f64,
    pub at_seconds: f64,
    pub mt_seconds: f64,
    pub uncertainty: Uncertainty,
    pub success_rule: SuccessRule,
}

pub fn summarize(records: &[TrialRecord], optimum: f64) -> MetricsSummary {
    let sr = success_rates(records, optimum);
    let (at, mt) = average_times(records);
    MetricsSummary {
        sr99: sr.sr99,
        sr95: sr.sr95,
        feasibility: feasibility(records),
        at_seconds: at,
        mt_seconds: mt,
        uncertainty: uncertainty_stats(records),
        success_rule: sr.rule,
    }
}
