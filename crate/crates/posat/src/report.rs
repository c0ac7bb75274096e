//! Per-family summary tables and cactus series built from benchmark rows.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use crate::bench::{write_csv, BenchRow};

pub const SUMMARY_HEADER: &str =
    "# posat-bench summary v1: time totals count timed-out runs at the limit; \
a timed-out run counts the fewest checks among the timed-out runs of its instance";

pub const CACTUS_HEADER: &str =
    "# posat-bench cactus v1: k-th fastest solved instance per config; unsolved runs excluded";

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Metric {
    Time,
    Checks,
}

impl FromStr for Metric {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Metric> {
        match s {
            "time" => Ok(Metric::Time),
            "checks" => Ok(Metric::Checks),
            _ => bail!("unknown metric {:?} (expected time or checks)", s),
        }
    }
}

/// One (family, config) line of the summary table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: String,
    pub config: String,
    pub inst: u64,
    #[serde(rename = "#to")]
    pub timeouts: u64,
    pub errors: u64,
    pub time: f64,
    pub checks: u64,
    pub conflicts: u64,
    #[serde(rename = "undos/conflict")]
    pub undos_per_conflict: f64,
    #[serde(rename = "checks/conflict")]
    pub checks_per_conflict: f64,
    /// Fraction of conflicts with several candidate assertion levels.
    pub multi_candidate: f64,
    #[serde(rename = "saved/conflict")]
    pub saved_per_conflict: f64,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Aggregates rows per family and config, in order of first appearance.
pub fn summarize(rows: &[BenchRow]) -> Vec<SummaryRow> {
    let mut min_timeout_checks: HashMap<&str, u64> = HashMap::new();
    for r in rows.iter().filter(|r| r.timeout) {
        let e = min_timeout_checks.entry(&r.instance).or_insert(u64::MAX);
        *e = (*e).min(r.clause_checks);
    }

    struct Acc {
        row: SummaryRow,
        undone: u64,
        multi: u64,
        saved: u64,
    }
    let mut order: Vec<(String, String)> = Vec::new();
    let mut acc: BTreeMap<(String, String), Acc> = BTreeMap::new();
    for r in rows {
        let key = (r.family.clone(), r.config.clone());
        let a = acc.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            Acc {
                row: SummaryRow {
                    family: r.family.clone(),
                    config: r.config.clone(),
                    inst: 0,
                    timeouts: 0,
                    errors: 0,
                    time: 0.0,
                    checks: 0,
                    conflicts: 0,
                    undos_per_conflict: 0.0,
                    checks_per_conflict: 0.0,
                    multi_candidate: 0.0,
                    saved_per_conflict: 0.0,
                },
                undone: 0,
                multi: 0,
                saved: 0,
            }
        });
        a.row.inst += 1;
        if r.is_error() {
            a.row.errors += 1;
            continue;
        }
        if r.timeout {
            a.row.timeouts += 1;
            a.row.checks += min_timeout_checks[r.instance.as_str()];
        } else {
            a.row.checks += r.clause_checks;
        }
        a.row.time += r.wall_time;
        a.row.conflicts += r.conflicts;
        a.undone += r.undone_total;
        a.multi += r.conflicts_multi_candidate;
        a.saved += r.locally_saved_total;
    }

    order
        .into_iter()
        .map(|key| {
            let a = acc.remove(&key).unwrap();
            let mut row = a.row;
            row.undos_per_conflict = ratio(a.undone, row.conflicts);
            row.checks_per_conflict = ratio(row.checks, row.conflicts);
            row.multi_candidate = ratio(a.multi, row.conflicts);
            row.saved_per_conflict = ratio(a.saved, row.conflicts);
            row
        })
        .collect()
}

/// The k-th best solved run of one config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CactusPoint {
    pub config: String,
    /// SAT, UNSAT, or ALL when series are not split.
    pub verdict: String,
    pub k: usize,
    pub value: f64,
}

/// Cactus series: for each config (and verdict when `split_sat`), solved runs sorted by the
/// metric.
pub fn cactus(rows: &[BenchRow], metric: Metric, split_sat: bool) -> Vec<CactusPoint> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut series: HashMap<(String, String), Vec<f64>> = HashMap::new();
    for r in rows.iter().filter(|r| r.is_solved() && !r.timeout) {
        let verdict = if split_sat {
            r.verdict.clone()
        } else {
            "ALL".to_string()
        };
        let key = (r.config.clone(), verdict);
        let value = match metric {
            Metric::Time => r.wall_time,
            Metric::Checks => r.clause_checks as f64,
        };
        series
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(value);
    }
    let mut points = Vec::new();
    for key in order {
        let mut values = series.remove(&key).unwrap();
        values.sort_by(f64::total_cmp);
        points.extend(
            values
                .into_iter()
                .enumerate()
                .map(|(i, value)| CactusPoint {
                    config: key.0.clone(),
                    verdict: key.1.clone(),
                    k: i + 1,
                    value,
                }),
        );
    }
    points
}

pub fn write_summary(out: impl Write, rows: &[SummaryRow]) -> Result<()> {
    write_csv(out, SUMMARY_HEADER, rows)
}

pub fn write_cactus(out: impl Write, points: &[CactusPoint]) -> Result<()> {
    write_csv(out, CACTUS_HEADER, points)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// A bare-bones SVG line chart of the series, one panel per verdict.
pub fn cactus_svg(points: &[CactusPoint], metric: Metric) -> String {
    let (w, h, margin) = (480.0, 320.0, 50.0);
    let mut panels: Vec<String> = Vec::new();
    for p in points {
        if !panels.contains(&p.verdict) {
            panels.push(p.verdict.clone());
        }
    }
    let mut configs: Vec<String> = Vec::new();
    for p in points {
        if !configs.contains(&p.config) {
            configs.push(p.config.clone());
        }
    }
    let label = match metric {
        Metric::Time => "seconds",
        Metric::Checks => "clause checks",
    };

    let mut svg = String::new();
    let total_w = w * panels.len().max(1) as f64;
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">"#,
        total_w,
        h + 20.0 * configs.len() as f64
    );
    for (pi, panel) in panels.iter().enumerate() {
        let x0 = pi as f64 * w;
        let in_panel: Vec<&CactusPoint> = points.iter().filter(|p| &p.verdict == panel).collect();
        let max_k = in_panel.iter().map(|p| p.k).max().unwrap_or(1).max(1) as f64;
        let max_v = in_panel
            .iter()
            .map(|p| p.value)
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let sx = |k: f64| x0 + margin + (k / max_k) * (w - 2.0 * margin);
        let sy = |v: f64| h - margin - (v / max_v) * (h - 2.0 * margin);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="20">{}</text><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            x0 + margin,
            panel,
            sx(0.0),
            sy(0.0),
            sx(max_k),
            sy(0.0),
            sx(0.0),
            sy(0.0),
            sx(0.0),
            sy(max_v)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}">solved instances ({})</text><text x="{}" y="{}">{} (max {:.3})</text>"#,
            x0 + margin,
            h - margin + 25.0,
            max_k,
            x0 + 5.0,
            margin - 10.0,
            label,
            max_v
        );
        for (ci, config) in configs.iter().enumerate() {
            let coords: Vec<String> = in_panel
                .iter()
                .filter(|p| &p.config == config)
                .map(|p| format!("{:.1},{:.1}", sx(p.k as f64), sy(p.value)))
                .collect();
            if coords.is_empty() {
                continue;
            }
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" points="{}"/>"#,
                PALETTE[ci % PALETTE.len()],
                coords.join(" ")
            );
        }
    }
    for (ci, config) in configs.iter().enumerate() {
        let y = h + 15.0 + 20.0 * ci as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{}" width="12" height="4" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            margin,
            y - 4.0,
            PALETTE[ci % PALETTE.len()],
            margin + 18.0,
            y,
            config
        );
    }
    svg.push_str("</svg>\n");
    svg
}
