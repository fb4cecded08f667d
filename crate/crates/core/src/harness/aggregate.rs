//! Cross-seed aggregation of run summaries.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::mean_std;
use super::store::{LoadedRun, SummaryFile};
use crate::error::{Error, Result};

pub const HEADLINE_METRIC: &str = "cumulative_mean_episode_reward";

pub const IMPROVEMENT_DEFINITION: &str =
    "normalized_improvement(A over B) = (R_A - R_B) / |R_B|, R = seed-mean cumulative_mean_episode_reward";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub experiment: String,
    pub variant: String,
    pub metric: String,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation across seeds (n − 1 denominator).
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementRow {
    pub variant: String,
    pub baseline: String,
    pub improvement: f64,
}

pub fn normalized_improvement(r_a: f64, r_b: f64) -> f64 {
    (r_a - r_b) / r_b.abs()
}

/// Mean ± std of every metric, grouped by (experiment, variant).
pub fn aggregate(summaries: &[SummaryFile]) -> Result<Vec<AggregateRow>> {
    if summaries.is_empty() {
        return Err(Error::InvalidArgument("nothing to aggregate".into()));
    }
    let mut groups: BTreeMap<(String, String, String), Vec<f64>> = BTreeMap::new();
    for s in summaries {
        for (metric, value) in &s.metrics {
            groups
                .entry((s.experiment.clone(), s.variant.clone(), metric.clone()))
                .or_default()
                .push(*value);
        }
    }
    Ok(groups
        .into_iter()
        .map(|((experiment, variant, metric), values)| {
            let (mean, std) = mean_std(&values);
            AggregateRow { experiment, variant, metric, n: values.len(), mean, std }
        })
        .collect())
}

/// Headline improvement of every variant over `baseline`, when present.
pub fn improvements_over(rows: &[AggregateRow], baseline: &str) -> Vec<ImprovementRow> {
    let headline = |r: &&AggregateRow| r.metric == HEADLINE_METRIC;
    let Some(base) = rows.iter().filter(headline).find(|r| r.variant == baseline) else {
        return Vec::new();
    };
    rows.iter()
        .filter(headline)
        .filter(|r| r.variant != baseline)
        .map(|r| ImprovementRow {
            variant: r.variant.clone(),
            baseline: baseline.into(),
            improvement: normalized_improvement(r.mean, base.mean),
        })
        .collect()
}

pub fn write_aggregate(dir: &Path, rows: &[AggregateRow], improvements: &[ImprovementRow]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut buf = Vec::new();
    writeln!(buf, "# experiment,variant,metric: run grouping and metric name")?;
    writeln!(buf, "# n: number of seeds; mean: seed mean; std: sample standard deviation (n-1)")?;
    writeln!(buf, "# {IMPROVEMENT_DEFINITION}")?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    fs::write(dir.join("aggregate.csv"), buf)?;

    let json = serde_json::json!({
        "rows": rows,
        "improvements": improvements,
        "improvement_definition": IMPROVEMENT_DEFINITION,
    });
    fs::write(dir.join("aggregate.json"), serde_json::to_string_pretty(&json)? + "\n")?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestPerTaskRow {
    pub task_index: u64,
    pub best_variant: String,
    pub mean_reward: f64,
}

/// For each task, the variant whose seed-mean episode reward in that task
/// is highest. Episodes are attributed to the task they ended in.
pub fn best_variant_per_task(runs: &[LoadedRun]) -> Vec<BestPerTaskRow> {
    // variant -> task -> per-seed means
    let mut table: BTreeMap<String, BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    for run in runs {
        let mut per_task: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
        for e in &run.episodes {
            let slot = per_task.entry(e.end_task).or_default();
            slot.0 += e.reward;
            slot.1 += 1;
        }
        let by_task = table.entry(run.summary.variant.clone()).or_default();
        for (task, (sum, n)) in per_task {
            by_task.entry(task).or_default().push(sum / n as f64);
        }
    }
    let mut best: BTreeMap<u64, (String, f64)> = BTreeMap::new();
    for (variant, tasks) in &table {
        for (task, seeds) in tasks {
            let (mean, _) = mean_std(seeds);
            match best.get(task) {
                Some((_, m)) if *m >= mean => {}
                _ => {
                    best.insert(*task, (variant.clone(), mean));
                }
            }
        }
    }
    best.into_iter()
        .map(|(task_index, (best_variant, mean_reward))| BestPerTaskRow { task_index, best_variant, mean_reward })
        .collect()
}

pub fn write_best_per_task(path: &Path, rows: &[BestPerTaskRow]) -> Result<()> {
    super::store::write_rows(path, rows)
}
