//! Tidy CSV series for external plotting tools.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::stats::mean_std;
use super::store::LoadedRun;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PlotKind {
    /// `variant,update,env_step,mean_reward,std_reward`
    RewardCurve,
    /// `variant,step,mean_S,std_S`
    ScalingTrace,
    /// `lambda,mean_cumulative_reward,std_cumulative_reward`
    LambdaBars,
}

impl PlotKind {
    pub fn header(self) -> &'static str {
        match self {
            PlotKind::RewardCurve => {
                "# reward_curve: per-update mean episode reward across seeds (std: sample, n-1)\nvariant,update,env_step,mean_reward,std_reward"
            }
            PlotKind::ScalingTrace => {
                "# scaling_trace: TRAC scale S per optimizer step across seeds (std: sample, n-1)\nvariant,step,mean_S,std_S"
            }
            PlotKind::LambdaBars => {
                "# lambda_bars: cumulative mean episode reward per L2 strength (std: sample, n-1)\nlambda,mean_cumulative_reward,std_cumulative_reward"
            }
        }
    }
}

fn push_series(
    out: &mut Vec<u8>,
    groups: BTreeMap<(String, u64), (u64, Vec<f64>)>,
) -> Result<()> {
    for ((variant, key), (extra, values)) in groups {
        let (m, s) = mean_std(&values);
        if extra == u64::MAX {
            writeln!(out, "{variant},{key},{m},{s}")?;
        } else {
            writeln!(out, "{variant},{key},{extra},{m},{s}")?;
        }
    }
    Ok(())
}

/// Write one plot series built from `runs` to `path`.
pub fn emit_plot_data(runs: &[LoadedRun], kind: PlotKind, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "{}", kind.header())?;
    match kind {
        PlotKind::RewardCurve => {
            let mut groups: BTreeMap<(String, u64), (u64, Vec<f64>)> = BTreeMap::new();
            for run in runs {
                for u in &run.updates {
                    let e = groups.entry((run.summary.variant.clone(), u.update)).or_insert((u.env_step, Vec::new()));
                    e.1.push(u.mean_episode_reward);
                }
            }
            if groups.is_empty() {
                return Err(Error::MissingSeries("per-update rewards".into()));
            }
            push_series(&mut out, groups)?;
        }
        PlotKind::ScalingTrace => {
            let mut groups: BTreeMap<(String, u64), (u64, Vec<f64>)> = BTreeMap::new();
            for run in runs {
                for s in &run.scales {
                    groups
                        .entry((run.summary.variant.clone(), s.step))
                        .or_insert((u64::MAX, Vec::new()))
                        .1
                        .push(s.scale);
                }
            }
            if groups.is_empty() {
                return Err(Error::MissingSeries("scaling trace".into()));
            }
            push_series(&mut out, groups)?;
        }
        PlotKind::LambdaBars => {
            let mut groups: BTreeMap<String, (f64, Vec<f64>)> = BTreeMap::new();
            for run in runs {
                let Some(lambda) = run.summary.variant.strip_prefix("lambda_") else { continue };
                let lambda: f64 = lambda
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad lambda variant {}", run.summary.variant)))?;
                let Some(r) = run.summary.metric(super::aggregate::HEADLINE_METRIC) else { continue };
                groups.entry(run.summary.variant.clone()).or_insert((lambda, Vec::new())).1.push(r);
            }
            if groups.is_empty() {
                return Err(Error::MissingSeries("L2 sweep cumulative rewards".into()));
            }
            let mut bars: Vec<(f64, Vec<f64>)> = groups.into_values().collect();
            bars.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (lambda, values) in bars {
                let (m, s) = mean_std(&values);
                writeln!(out, "{lambda},{m},{s}")?;
            }
        }
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, out)?;
    Ok(())
}
