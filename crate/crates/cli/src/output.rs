use clap::ValueEnum;
use serde::Serialize;

use mzv_core::verify::{TableReport, VerdictReport};

use crate::{ConjectureReport, NumericReport, RankReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

fn json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_of(header: &[String], rows: &[Vec<String>]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn md_of(header: &[String], rows: &[Vec<String>]) -> String {
    let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
    let mut out = line(header);
    out += &line(&vec!["---".to_string(); header.len()]);
    for r in rows {
        out += &line(r);
    }
    out
}

fn tabular(header: Vec<String>, rows: Vec<Vec<String>>, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Csv => csv_of(&header, &rows),
        Format::Md => Ok(md_of(&header, &rows)),
        Format::Json => unreachable!("json handled by caller"),
    }
}

fn strings<I: IntoIterator<Item = S>, S: ToString>(items: I) -> Vec<String> {
    items.into_iter().map(|s| s.to_string()).collect()
}

/// Rows 1..7 by weight; skipped cells are left blank.
pub fn table(report: &TableReport, format: Format) -> anyhow::Result<String> {
    if format == Format::Json {
        return json(report);
    }
    let mut header = strings(["row", "label"]);
    header.extend(report.weights.iter().map(u32::to_string));
    let rows = report
        .rows
        .iter()
        .map(|r| {
            let mut cells = vec![r.index.to_string(), r.label.clone()];
            cells.extend(r.values.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()));
            cells
        })
        .collect();
    tabular(header, rows, format)
}

pub fn rank(report: &RankReport, format: Format) -> anyhow::Result<String> {
    if format == Format::Json {
        return json(report);
    }
    let header = strings(["family", "weight", "rank", "rows", "columns"]);
    let row = vec![
        report.family.clone(),
        report.weight.to_string(),
        report.rank.map(|r| r.to_string()).unwrap_or_default(),
        report.rows.to_string(),
        report.columns.to_string(),
    ];
    tabular(header, vec![row], format)
}

pub fn verdict(report: &VerdictReport, format: Format) -> anyhow::Result<String> {
    if format == Format::Json {
        return json(report);
    }
    let params = report
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";");
    let residual = report
        .residual_terms
        .iter()
        .map(|t| format!("{}*{}", t.coeff, t.word))
        .collect::<Vec<_>>()
        .join(" ");
    let header = strings(["claim", "params", "cutoff", "verdict", "residual"]);
    let row = vec![
        report.claim.clone(),
        params,
        report.cutoff.map(|c| c.to_string()).unwrap_or_default(),
        report.verdict.to_string(),
        residual,
    ];
    tabular(header, vec![row], format)
}

pub fn conjecture(report: &ConjectureReport, format: Format) -> anyhow::Result<String> {
    if format == Format::Json {
        return json(report);
    }
    let header = strings(["m", "n", "weight", "verdict"]);
    let rows = report
        .entries
        .iter()
        .map(|e| strings([e.m.to_string(), e.n.to_string(), e.weight.to_string(), e.verdict.to_string()]))
        .collect();
    tabular(header, rows, format)
}

pub fn numeric(report: &NumericReport, format: Format) -> anyhow::Result<String> {
    if format == Format::Json {
        return json(report);
    }
    let header = strings(["word", "coeff", "value", "tail_bound"]);
    let mut rows: Vec<Vec<String>> = report
        .terms
        .iter()
        .map(|t| strings([t.word.clone(), t.coeff.clone(), format!("{:.15e}", t.value), format!("{:.3e}", t.tail_bound)]))
        .collect();
    rows.push(strings([
        "total".to_string(),
        String::new(),
        format!("{:.15e}", report.value),
        format!("{:.3e}", report.tail_bound),
    ]));
    tabular(header, rows, format)
}
