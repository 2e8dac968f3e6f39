//! Result files: one CSV table plus a JSON sidecar with the resolved
//! configuration and the full per-point counts.
//!
//! The CSV holds nothing that depends on timing or on the worker count, so
//! runs with equal seeds give byte-identical tables.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::SimConfig;
use crate::error::Result;
use crate::experiment::{CapacityPoint, SweepPoint};
use crate::runner::PointStats;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub protocol: String,
    #[serde(rename = "K_a")]
    pub k_a: usize,
    /// Empty for saturated capacity points.
    pub ebn0_db: Option<f64>,
    pub pupe: f64,
    /// Half-width of the 95% confidence interval.
    pub ci: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Row {
    fn new(protocol: &str, k_a: usize, ebn0_db: Option<f64>, stats: &PointStats, seed: u64) -> Self {
        let est = stats.estimate();
        Row { protocol: protocol.to_string(), k_a, ebn0_db, pupe: est.pupe(), ci: est.ci95(), trials: est.trials, seed }
    }
}

pub fn sweep_rows(name: &str, points: &[SweepPoint], seed: u64) -> Vec<Row> {
    points.iter().map(|p| Row::new(name, p.k_a, Some(p.ebn0_db), &p.stats, seed)).collect()
}

/// One row per `K_a`: the required Eb/N0 with the PUPE measured at the lowest
/// passing SNR, or an empty SNR and the PUPE at the bracket top when
/// saturated.
pub fn capacity_rows(name: &str, points: &[CapacityPoint], seed: u64) -> Vec<Row> {
    points
        .iter()
        .map(|p| match &p.search {
            Some(r) => {
                let stats = r.best_passing().map(|e| e.stats).unwrap_or_default();
                Row::new(name, p.k_a, Some(r.ebn0_db), &stats, seed)
            }
            None => Row::new(name, p.k_a, None, &PointStats::default(), seed),
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

#[derive(Debug, Serialize)]
pub struct Sidecar<'a, P: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a SimConfig,
    pub seed: u64,
    pub workers: usize,
    pub wall_clock_s: f64,
    pub points: &'a P,
}

/// Writes `rows` to `csv_path` and `sidecar` next to it.
pub fn write_outputs<P: Serialize>(csv_path: &Path, rows: &[Row], sidecar: &Sidecar<'_, P>) -> Result<()> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_csv(std::fs::File::create(csv_path)?, rows)?;
    std::fs::write(sidecar_path(csv_path), serde_json::to_string_pretty(sidecar)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_saturated_rows() {
        let stats = PointStats { misses: 1, users: 100, trials: 10, ..Default::default() };
        let rows = vec![
            Row::new("table1_gaussian", 10, Some(14.0), &stats, 7),
            Row::new("table1_gaussian", 50, None, &PointStats::default(), 7),
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("protocol,K_a,ebn0_db,pupe,ci,trials,seed"));
        assert!(lines.next().unwrap().starts_with("table1_gaussian,10,14.0,0.01,"));
        assert_eq!(lines.next(), Some("table1_gaussian,50,,NaN,NaN,0,7"));
    }

    #[test]
    fn writes_both_files() {
        let dir = tempfile::tempdir().unwrap();
        let csv_path = dir.path().join("sub/out.csv");
        let cfg = SimConfig::from_preset("table3_ldpc").unwrap();
        let points: Vec<SweepPoint> = Vec::new();
        let side = Sidecar { tool: "t", version: "0", command: "sweep", config: &cfg, seed: 1, workers: 1, wall_clock_s: 0.0, points: &points };
        write_outputs(&csv_path, &[], &side).unwrap();
        assert!(csv_path.exists());
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&csv_path)).unwrap()).unwrap();
        assert_eq!(v["config"]["name"], "table3_ldpc");
    }
}
