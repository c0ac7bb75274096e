//! The configuration-matrix benchmark runner and its CSV schema.

use std::fs::{self, File};
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use posat_core::config::PRESET_LABELS;
use posat_core::dimacs::parse_cnf;
use posat_core::{RawFormula, SolveStats, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::run::solve_with_timeout;

/// First line of every results file.
pub const RESULTS_HEADER: &str =
    "# posat-bench results v1: one row per (instance, config); timed-out rows report wall_time = limit";

/// Verdict column value of instances that could not be read.
pub const ERROR: &str = "ERROR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub family: String,
    pub config: String,
    /// SAT, UNSAT, UNKNOWN or ERROR.
    pub verdict: String,
    pub timeout: bool,
    pub wall_time: f64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub clause_checks: u64,
    pub undone_total: u64,
    pub conflicts_multi_candidate: u64,
    pub candidate_count_sum_when_multi: u64,
    pub locally_saved_total: u64,
    pub restarts: u64,
    pub learned: u64,
    pub deleted: u64,
    pub error: String,
}

impl BenchRow {
    pub fn new(
        instance: &str,
        family: &str,
        config: &str,
        verdict: &str,
        stats: &SolveStats,
    ) -> BenchRow {
        BenchRow {
            instance: instance.to_string(),
            family: family.to_string(),
            config: config.to_string(),
            verdict: verdict.to_string(),
            timeout: false,
            wall_time: stats.wall_time,
            conflicts: stats.conflicts,
            decisions: stats.decisions,
            propagations: stats.propagations,
            clause_checks: stats.clause_checks,
            undone_total: stats.undone_total,
            conflicts_multi_candidate: stats.conflicts_multi_candidate,
            candidate_count_sum_when_multi: stats.candidate_count_sum_when_multi,
            locally_saved_total: stats.locally_saved_total,
            restarts: stats.restarts,
            learned: stats.learned,
            deleted: stats.deleted,
            error: String::new(),
        }
    }

    pub fn error(instance: &str, family: &str, config: &str, message: &str) -> BenchRow {
        BenchRow {
            error: message.to_string(),
            ..BenchRow::new(instance, family, config, ERROR, &SolveStats::default())
        }
    }

    pub fn stats(&self) -> SolveStats {
        SolveStats {
            conflicts: self.conflicts,
            decisions: self.decisions,
            propagations: self.propagations,
            clause_checks: self.clause_checks,
            undone_total: self.undone_total,
            conflicts_multi_candidate: self.conflicts_multi_candidate,
            candidate_count_sum_when_multi: self.candidate_count_sum_when_multi,
            locally_saved_total: self.locally_saved_total,
            restarts: self.restarts,
            learned: self.learned,
            deleted: self.deleted,
            wall_time: self.wall_time,
        }
    }

    pub fn is_solved(&self) -> bool {
        self.verdict == "SAT" || self.verdict == "UNSAT"
    }

    pub fn is_error(&self) -> bool {
        self.verdict == ERROR
    }
}

/// Resolves a comma separated list of preset labels, or `all`.
pub fn parse_config_list(list: &str) -> Result<Vec<(String, SolverConfig)>> {
    let labels: Vec<&str> = if list.trim() == "all" {
        PRESET_LABELS.to_vec()
    } else {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect()
    };
    if labels.is_empty() {
        bail!("no configuration given");
    }
    labels
        .into_iter()
        .map(|label| match SolverConfig::preset(label) {
            Some(config) => Ok((label.to_string(), config)),
            None => bail!(
                "unknown configuration {:?} (expected one of {})",
                label,
                PRESET_LABELS.join(", ")
            ),
        })
        .collect()
}

/// An instance file with its display name and family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub path: PathBuf,
    pub name: String,
    pub family: String,
}

/// All `.cnf` files below `dir`, sorted by name.
///
/// The family of an instance is its first subdirectory, or for files directly in `dir` the
/// file stem without a trailing number (`pipe-03.cnf` belongs to `pipe`).
pub fn find_instances(dir: &Path) -> Result<Vec<Instance>> {
    let mut files = Vec::new();
    collect_cnf(dir, &mut files).with_context(|| format!("reading {}", dir.display()))?;
    let mut instances: Vec<Instance> = files
        .into_iter()
        .map(|path| {
            let rel = path.strip_prefix(dir).unwrap_or(&path);
            let parts: Vec<String> = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .collect();
            let family = if parts.len() > 1 {
                parts[0].clone()
            } else {
                family_of_stem(&rel.file_stem().unwrap_or_default().to_string_lossy())
            };
            Instance {
                name: parts.join("/"),
                family,
                path,
            }
        })
        .collect();
    instances.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(instances)
}

fn collect_cnf(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_cnf(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "cnf") {
            out.push(path);
        }
    }
    Ok(())
}

fn family_of_stem(stem: &str) -> String {
    let trimmed = stem.trim_end_matches(|c: char| c.is_ascii_digit());
    let trimmed = trimmed.trim_end_matches(['-', '_', '.']);
    if trimmed.is_empty() {
        stem.to_string()
    } else {
        trimmed.to_string()
    }
}

fn load(path: &Path) -> Result<RawFormula, String> {
    let file = File::open(path).map_err(|e| e.to_string())?;
    parse_cnf(BufReader::new(file)).map_err(|e| e.to_string())
}

/// Runs every (instance, config) pair on `workers` threads, one solver per worker.
///
/// Rows come back sorted by instance, then by the order of `configs`.
pub fn run_bench(
    instances: &[Instance],
    configs: &[(String, SolverConfig)],
    timeout: Option<Duration>,
    workers: usize,
) -> Vec<BenchRow> {
    let formulas: Vec<Result<RawFormula, String>> =
        instances.iter().map(|i| load(&i.path)).collect();
    let jobs: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..configs.len()).map(move |c| (i, c)))
        .collect();
    let next = AtomicUsize::new(0);
    let (send, receive) = mpsc::channel();

    thread::scope(|scope| {
        for _ in 0..workers.max(1) {
            let send = send.clone();
            let (jobs, next, formulas) = (&jobs, &next, &formulas);
            scope.spawn(move || loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, c)) = jobs.get(k) else { break };
                let (inst, (label, config)) = (&instances[i], &configs[c]);
                let row = match &formulas[i] {
                    Err(e) => BenchRow::error(&inst.name, &inst.family, label, e),
                    Ok(formula) => {
                        let out = solve_with_timeout(formula, config.clone(), timeout);
                        let mut row = BenchRow::new(
                            &inst.name,
                            &inst.family,
                            label,
                            out.verdict.label(),
                            &out.stats,
                        );
                        if out.timed_out {
                            row.timeout = true;
                            row.wall_time = timeout.unwrap().as_secs_f64();
                        }
                        row
                    }
                };
                if send.send((k, row)).is_err() {
                    break;
                }
            });
        }
    });
    drop(send);

    let mut rows: Vec<(usize, BenchRow)> = receive.into_iter().collect();
    rows.sort_by_key(|(k, _)| *k);
    rows.into_iter().map(|(_, row)| row).collect()
}

pub fn write_rows(out: impl Write, rows: &[BenchRow]) -> Result<()> {
    write_csv(out, RESULTS_HEADER, rows)
}

pub(crate) fn write_csv<T: Serialize>(mut out: impl Write, header: &str, rows: &[T]) -> Result<()> {
    writeln!(out, "{}", header)?;
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_rows(input: impl Read) -> Result<Vec<BenchRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let mut rows = Vec::new();
    for (i, row) in reader.deserialize().enumerate() {
        rows.push(row.with_context(|| format!("malformed results row {}", i + 1))?);
    }
    Ok(rows)
}
