//! Run directories: CSV metric rows plus a JSON summary.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ppo::{EpisodeRow, RunRecord, ScaleRow, UpdateRow};

pub const SUMMARY_FILE: &str = "summary.json";
pub const UPDATES_FILE: &str = "updates.csv";
pub const EPISODES_FILE: &str = "episodes.csv";
pub const SCALING_FILE: &str = "scaling.csv";

/// Terminal summary of one (experiment, variant, seed) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryFile {
    pub experiment: String,
    pub variant: String,
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
    #[serde(default)]
    pub mean_scale_per_task: Vec<Option<f64>>,
    #[serde(default)]
    pub task_count: u64,
}

impl SummaryFile {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }
}

pub fn write_summary(dir: &Path, summary: &SummaryFile) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = BufWriter::new(File::create(dir.join(SUMMARY_FILE))?);
    serde_json::to_writer_pretty(&mut f, summary)?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// `step,task_index,S,s_1..s_n`
pub fn write_scales(path: &Path, rows: &[ScaleRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let n = rows.first().map(|r| r.tuner_outputs.len()).unwrap_or(0);
    let mut header = vec!["step".to_string(), "task_index".into(), "S".into()];
    header.extend((1..=n).map(|j| format!("s_{j}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.step.to_string(), r.task_index.to_string(), r.scale.to_string()];
        rec.extend(r.tuner_outputs.iter().map(|s| s.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scales(path: &Path) -> Result<Vec<ScaleRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::InvalidArgument(format!("bad scale value {s}: {e}")));
        let int = |s: &str| s.parse::<u64>().map_err(|e| Error::InvalidArgument(format!("bad integer {s}: {e}")));
        rows.push(ScaleRow {
            step: int(&rec[0])?,
            task_index: int(&rec[1])?,
            scale: parse(&rec[2])?,
            tuner_outputs: rec.iter().skip(3).map(parse).collect::<Result<_>>()?,
        });
    }
    Ok(rows)
}

/// Persist a PPO run. Wall time goes to `timing.json` so the metric files
/// stay reproducible byte for byte.
pub fn write_run(dir: &Path, record: &RunRecord, summary: &SummaryFile) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_rows(&dir.join(UPDATES_FILE), &record.updates)?;
    write_rows(&dir.join(EPISODES_FILE), &record.episodes)?;
    if !record.scales.is_empty() {
        write_scales(&dir.join(SCALING_FILE), &record.scales)?;
    }
    write_summary(dir, summary)?;
    let timing = serde_json::json!({ "wall_time_secs": record.wall_time_secs });
    fs::write(dir.join("timing.json"), serde_json::to_string_pretty(&timing)? + "\n")?;
    Ok(())
}

/// A run read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedRun {
    pub dir: PathBuf,
    pub summary: SummaryFile,
    pub updates: Vec<UpdateRow>,
    pub episodes: Vec<EpisodeRow>,
    pub scales: Vec<ScaleRow>,
}

pub fn load_run(dir: &Path) -> Result<LoadedRun> {
    let summary: SummaryFile = serde_json::from_reader(File::open(dir.join(SUMMARY_FILE))?)?;
    let opt = |name: &str| {
        let p = dir.join(name);
        p.exists().then_some(p)
    };
    Ok(LoadedRun {
        dir: dir.to_path_buf(),
        summary,
        updates: opt(UPDATES_FILE).map(|p| read_rows(&p)).transpose()?.unwrap_or_default(),
        episodes: opt(EPISODES_FILE).map(|p| read_rows(&p)).transpose()?.unwrap_or_default(),
        scales: opt(SCALING_FILE).map(|p| read_scales(&p)).transpose()?.unwrap_or_default(),
    })
}

/// Every directory below `root` holding a run summary, sorted.
pub fn find_runs(root: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    walk(root, &mut out)?;
    out.sort();
    Ok(out)
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    if dir.join(SUMMARY_FILE).is_file() {
        out.push(dir.to_path_buf());
    }
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            walk(&path, out)?;
        }
    }
    Ok(())
}
