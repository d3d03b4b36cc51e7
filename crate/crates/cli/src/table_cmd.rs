use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use singcurve::pointset::{classify_generic, generic_invariants, m_bound};
use singcurve::{Outcome, Verdict};

use crate::error::CliError;

/// Largest `r` scanned for `n ∈ {4, 5}`, where no `M(n)` cut-off exists.
const LOW_DIMENSION_TOP: i64 = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Column {
    D,
    Delta,
    Type,
    E,
    Moduli,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Ambient dimension plus one: a single value or an inclusive range A..B
    #[arg(long, value_name = "RANGE")]
    pub n: String,
    /// Per-r columns; switches to one row per (n, r)
    #[arg(long, value_delimiter = ',')]
    pub columns: Vec<Column>,
    /// Range of r for per-r rows (default: n+1 up to the last classified r)
    #[arg(long, value_name = "RANGE")]
    pub r: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Serialize)]
pub struct SummaryRow {
    pub n: i64,
    /// `M(n)` as an exact rational, `null` below `n = 6`.
    pub m_bound: Option<String>,
    pub non_smoothable: String,
    pub count: usize,
    pub provenance: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CellRow {
    pub n: i64,
    pub r: i64,
    pub outcome: Outcome,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<i64>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moduli: Option<i64>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum TableReport {
    Summary(Vec<SummaryRow>),
    Cells(Vec<CellRow>),
}

pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, CliError> {
    let bad = || CliError::Usage(format!("bad range {s:?}; expected A or A..B"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let a: i64 = a.parse().map_err(|_| bad())?;
    let b: i64 = b.parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn scan_top(n: i64) -> Result<i64, CliError> {
    if n < 6 {
        Ok(LOW_DIMENSION_TOP)
    } else {
        Ok(m_bound(n)?.floor().to_integer())
    }
}

/// `{10,12}∪[15,42]`: runs of length one are collected in braces, longer
/// runs are written as closed intervals.
pub fn format_set(rs: &[i64]) -> String {
    let mut runs: Vec<(i64, i64)> = Vec::new();
    for &r in rs {
        match runs.last_mut() {
            Some((_, hi)) if *hi + 1 == r => *hi = r,
            _ => runs.push((r, r)),
        }
    }
    let mut parts = Vec::new();
    let mut singles: Vec<String> = Vec::new();
    for (lo, hi) in runs {
        if lo == hi {
            singles.push(lo.to_string());
        } else {
            if !singles.is_empty() {
                parts.push(format!("{{{}}}", singles.join(",")));
                singles.clear();
            }
            parts.push(format!("[{lo},{hi}]"));
        }
    }
    if !singles.is_empty() {
        parts.push(format!("{{{}}}", singles.join(",")));
    }
    if parts.is_empty() {
        "∅".to_string()
    } else {
        parts.join("∪")
    }
}

fn classify(cells: Vec<(i64, i64)>) -> Result<Vec<(i64, i64, Verdict)>, CliError> {
    cells
        .into_par_iter()
        .map(|(n, r)| Ok((n, r, classify_generic(n, r)?)))
        .collect()
}

pub fn report(args: &TableArgs) -> Result<TableReport, CliError> {
    let ns = parse_range(&args.n)?;
    if *ns.start() < 4 {
        return Err(CliError::Usage(format!("the table starts at n = 4, got {}", ns.start())));
    }
    let mut cells = Vec::new();
    for n in ns.clone() {
        let rs = match &args.r {
            Some(s) => parse_range(s)?,
            None => n + 1..=scan_top(n)?,
        };
        cells.extend(rs.filter(|&r| r > n).map(|r| (n, r)));
    }
    let classified = classify(cells)?;
    if args.columns.is_empty() {
        let rows = ns
            .map(|n| {
                let members: Vec<&(i64, i64, Verdict)> = classified
                    .iter()
                    .filter(|(m, _, v)| *m == n && v.outcome == Outcome::NonSmoothableGeneric)
                    .collect();
                let rs: Vec<i64> = members.iter().map(|(_, r, _)| *r).collect();
                let provenance: BTreeSet<String> = members.iter().map(|(_, _, v)| v.provenance.clone()).collect();
                SummaryRow {
                    n,
                    m_bound: m_bound(n).ok().map(|m| m.to_string()),
                    non_smoothable: format_set(&rs),
                    count: rs.len(),
                    provenance: provenance.into_iter().collect(),
                }
            })
            .collect();
        return Ok(TableReport::Summary(rows));
    }
    let want = |c: Column| args.columns.contains(&c);
    let rows = classified
        .into_iter()
        .map(|(n, r, v)| {
            let inv = generic_invariants(n, r)?;
            Ok(CellRow {
                n,
                r,
                outcome: v.outcome,
                provenance: v.provenance,
                d: want(Column::D).then_some(inv.d),
                delta: want(Column::Delta).then_some(inv.delta),
                type_t: want(Column::Type).then_some(inv.type_t),
                e: want(Column::E).then_some(inv.deligne_e),
                moduli: want(Column::Moduli).then_some(inv.moduli),
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(TableReport::Cells(rows))
}

fn header_and_records(report: &TableReport) -> (Vec<String>, Vec<Vec<String>>) {
    match report {
        TableReport::Summary(rows) => (
            ["n", "M(n)", "non-smoothable r", "count", "provenance"].map(String::from).to_vec(),
            rows.iter()
                .map(|row| {
                    vec![
                        row.n.to_string(),
                        row.m_bound.clone().unwrap_or_else(|| "-".into()),
                        row.non_smoothable.clone(),
                        row.count.to_string(),
                        row.provenance.join("; "),
                    ]
                })
                .collect(),
        ),
        TableReport::Cells(rows) => {
            let mut header: Vec<String> = ["n", "r", "outcome"].map(String::from).to_vec();
            let first = rows.first();
            let optional: [(&str, fn(&CellRow) -> Option<String>); 5] = [
                ("d", |c| c.d.map(|x| x.to_string())),
                ("delta", |c| c.delta.map(|x| x.to_string())),
                ("type", |c| c.type_t.map(|x| x.to_string())),
                ("e", |c| c.e.map(|x| x.to_string())),
                ("moduli", |c| c.moduli.map(|x| x.to_string())),
            ];
            let present: Vec<_> = optional
                .iter()
                .filter(|(_, f)| first.is_some_and(|c| f(c).is_some()))
                .collect();
            header.extend(present.iter().map(|(name, _)| name.to_string()));
            header.push("provenance".into());
            let records = rows
                .iter()
                .map(|c| {
                    let mut rec = vec![c.n.to_string(), c.r.to_string(), c.outcome.to_string()];
                    rec.extend(present.iter().map(|(_, f)| f(c).unwrap_or_default()));
                    rec.push(c.provenance.clone());
                    rec
                })
                .collect();
            (header, records)
        }
    }
}

pub fn render(report: &TableReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("table serializes") + "\n",
        Format::Csv => {
            let (header, records) = header_and_records(report);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory csv");
            for rec in &records {
                w.write_record(rec).expect("in-memory csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
        }
        Format::Table => {
            let (header, records) = header_and_records(report);
            let width = |i: usize| {
                records
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([header[i].chars().count()])
                    .max()
                    .unwrap_or(0)
            };
            let widths: Vec<usize> = (0..header.len()).map(width).collect();
            let fmt_row = |row: &[String]| {
                let cells: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                    .collect();
                cells.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = fmt_row(&header);
            for r in &records {
                out.push_str(&fmt_row(r));
            }
            out
        }
    }
}
