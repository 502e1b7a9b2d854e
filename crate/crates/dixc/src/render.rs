//! Text, CSV and JSON renderings of command results.

use std::fmt::Write;
use std::str::FromStr;

use dixc_core::rational::{render, render_decimal};
use dixc_core::{DecodingConfig, LinearInequality, Polyhedron, Rational, ServerGrouping};
use serde_json::{json, Value};

use crate::bound::BoundResult;
use crate::enumerate::Listing;
use crate::error::{Error, Result};
use crate::expected::column_label;
use crate::format::{config_to_json, grouping_to_json, polyhedron_to_json, problem_to_json};
use crate::repro::ReproReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Usage(format!("unknown format {s:?} (json, csv or text)"))),
        }
    }
}

/// `15/2 (7.5)` for terminating fractions, the exact value otherwise.
fn human(r: &Rational) -> String {
    let exact = render(r);
    let decimal = render_decimal(r);
    if decimal == exact || decimal.contains('/') {
        exact
    } else {
        format!("{exact} ({decimal})")
    }
}

fn rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(render).collect()
}

/// Nonnegativity rows read `R_1 >= 0` in human output.
fn human_row(row: &LinearInequality) -> String {
    match row.nonnegativity_of() {
        Some(v) => format!("{v} >= 0"),
        None => row.to_string(),
    }
}

fn region_text(region: &Polyhedron, out: &mut String) {
    let rows: Vec<(String, String)> = region
        .constraints()
        .iter()
        .map(|r| (human_row(r), r.origin.clone().unwrap_or_default()))
        .collect();
    let width = rows.iter().map(|(r, _)| r.len()).max().unwrap_or(0);
    for (row, origin) in rows {
        if origin.is_empty() {
            let _ = writeln!(out, "  {row}");
        } else {
            let _ = writeln!(out, "  {row:width$}   [{origin}]");
        }
    }
}

fn group_text(grouping: &ServerGrouping, configs: &[DecodingConfig]) -> Vec<String> {
    grouping
        .groups()
        .iter()
        .enumerate()
        .map(|(i, servers)| {
            let names: Vec<String> = servers.iter().map(|s| s.to_string()).collect();
            let sets: Vec<String> = configs
                .get(i)
                .map(|c| c.iter().map(|(j, d)| format!("D_{}={d}", j + 1)).collect())
                .unwrap_or_default();
            format!("{}  {}", names.join(" "), sets.join(" "))
        })
        .collect()
}

fn csv_string(records: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

pub fn bound_json(r: &BoundResult) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("scheme".into(), json!(r.scheme.name()));
    out.insert("problem".into(), json!(r.problem.to_compact()));
    out.insert("instance".into(), problem_to_json(&r.problem));
    match (&r.direction, &r.value, &r.region) {
        (Some(w), Some(v), _) => {
            out.insert("direction".into(), json!(rationals(w)));
            out.insert("value".into(), json!(render(v)));
        }
        (_, _, Some(region)) => {
            out.insert("region".into(), polyhedron_to_json(region));
        }
        _ => {}
    }
    if let Some(point) = &r.point {
        out.insert("point".into(), json!(rationals(point)));
    }
    if let Some(g) = &r.grouping {
        out.insert("grouping".into(), grouping_to_json(g));
    }
    if !r.configs.is_empty() {
        out.insert("decoding".into(), Value::Array(r.configs.iter().map(config_to_json).collect()));
    }
    out.insert("notes".into(), json!(r.notes));
    Value::Object(out)
}

pub fn render_bound(r: &BoundResult, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&bound_json(r)).expect("JSON values serialize")),
        Format::Csv => match &r.region {
            Some(region) => {
                let mut records = vec![vec!["lhs".into(), "rel".into(), "rhs".into(), "origin".into()]];
                for row in region.constraints() {
                    let lhs = LinearInequality { relation: dixc_core::Relation::Le, rhs: Rational::default(), origin: None, ..row.clone() };
                    let text = lhs.to_string();
                    let lhs_text = text.rsplit_once(" <= ").map(|(l, _)| l.to_string()).unwrap_or(text);
                    records.push(vec![
                        lhs_text,
                        row.relation.symbol().into(),
                        render(&row.rhs),
                        row.origin.clone().unwrap_or_default(),
                    ]);
                }
                csv_string(records)
            }
            None => csv_string(vec![
                vec!["scheme".into(), "problem".into(), "direction".into(), "value".into()],
                vec![
                    r.scheme.name().into(),
                    r.problem.to_compact(),
                    rationals(r.direction.as_deref().unwrap_or_default()).join(","),
                    r.value.as_ref().map(render).unwrap_or_default(),
                ],
            ]),
        },
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "problem    {}", r.problem.to_compact());
            if !r.problem.has_unit_capacities() {
                let caps: Vec<String> = crate::format::server_order(r.problem.n())
                    .into_iter()
                    .map(|s| format!("C{s}={}", render(&r.problem.capacity(s))))
                    .collect();
                let _ = writeln!(out, "capacities {}", caps.join(" "));
            }
            let _ = writeln!(out, "scheme     {}", r.scheme);
            if let (Some(w), Some(v)) = (&r.direction, &r.value) {
                let _ = writeln!(out, "direction  {}", rationals(w).join(","));
                let _ = writeln!(out, "value      {}", human(v));
            }
            if let Some(point) = &r.point {
                let parts: Vec<String> = point
                    .iter()
                    .enumerate()
                    .map(|(j, x)| format!("R_{}={}", j + 1, render(x)))
                    .collect();
                let _ = writeln!(out, "point      {}", parts.join(" "));
            }
            if let Some(g) = &r.grouping {
                let lines = group_text(g, &r.configs);
                let _ = writeln!(out, "groups     {}", lines.len());
                for line in lines {
                    let _ = writeln!(out, "  {line}");
                }
            }
            if let Some(region) = &r.region {
                let _ = writeln!(out, "region     {} rows", region.constraints().len());
                region_text(region, &mut out);
            }
            for note in &r.notes {
                let _ = writeln!(out, "note: {note}");
            }
            out
        }
    }
}

fn cell_text(expected: &Rational, computed: Option<&Rational>) -> String {
    match computed {
        Some(c) if c == expected => render_decimal(c),
        Some(c) => format!("{}!={}", render_decimal(c), render_decimal(expected)),
        None => format!("absent!={}", render_decimal(expected)),
    }
}

pub fn report_json(r: &ReproReport) -> Value {
    json!({
        "table": r.id.name(),
        "passed": r.passed(),
        "cells": r.cells.iter().map(|c| json!({
            "row": c.row,
            "column": c.column,
            "expected": render(&c.expected),
            "computed": c.computed.as_ref().map(render),
            "match": c.matches(),
        })).collect::<Vec<_>>(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn render_reports(reports: &[ReproReport], format: Format) -> String {
    match format {
        Format::Json => {
            let all: Vec<Value> = reports.iter().map(report_json).collect();
            format!("{}\n", serde_json::to_string_pretty(&all).expect("JSON values serialize"))
        }
        Format::Csv => {
            let mut records = vec![["table", "row", "column", "expected", "computed", "match"]
                .map(String::from)
                .to_vec()];
            for r in reports {
                for c in &r.cells {
                    records.push(vec![
                        r.id.name().into(),
                        c.row.clone(),
                        c.column.clone(),
                        render(&c.expected),
                        c.computed.as_ref().map(render).unwrap_or_default(),
                        c.matches().to_string(),
                    ]);
                }
            }
            csv_string(records)
        }
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{}  {status}", r.id);
                let rows = r.rows();
                let mut grid: Vec<Vec<String>> = Vec::new();
                let mut header = vec![String::new()];
                header.extend(r.columns.iter().cloned());
                grid.push(header);
                for row in &rows {
                    let mut line = vec![row.to_string()];
                    for col in &r.columns {
                        let text = r
                            .cells
                            .iter()
                            .find(|c| c.row == *row && c.column == *col)
                            .map(|c| cell_text(&c.expected, c.computed.as_ref()))
                            .unwrap_or_default();
                        line.push(text);
                    }
                    grid.push(line);
                }
                let widths: Vec<usize> = (0..grid[0].len())
                    .map(|i| grid.iter().map(|l| l[i].len()).max().unwrap_or(0))
                    .collect();
                for line in grid {
                    let mut text = String::from(" ");
                    for (i, field) in line.iter().enumerate() {
                        let _ = write!(text, " {:w$}", field, w = widths[i]);
                    }
                    let _ = writeln!(out, "{}", text.trim_end());
                }
                for c in &r.checks {
                    let mark = if c.passed { "ok  " } else { "FAIL" };
                    let _ = writeln!(out, "  {mark} {}  ({})", c.name, c.detail);
                }
            }
            out
        }
    }
}

pub fn render_listing(list: &[Listing], format: Format) -> String {
    match format {
        Format::Json => {
            let all: Vec<Value> = list
                .iter()
                .map(|l| {
                    let mut v = json!({ "problem": l.problem.to_compact() });
                    if let Some(regions) = &l.regions {
                        v["outer"] = polyhedron_to_json(&regions.outer);
                        v["directions"] = Value::Array(
                            regions
                                .values
                                .iter()
                                .map(|(s, inner, outer)| json!({
                                    "direction": column_label(*s),
                                    "inner": render(inner),
                                    "outer": render(outer),
                                }))
                                .collect(),
                        );
                        v["coincide"] = json!(regions.coincide());
                    }
                    v
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&all).expect("JSON values serialize"))
        }
        Format::Csv => {
            let mut records = vec![vec!["problem".to_string(), "direction".into(), "inner".into(), "outer".into()]];
            for l in list {
                match &l.regions {
                    None => records.push(vec![l.problem.to_compact(), String::new(), String::new(), String::new()]),
                    Some(regions) => {
                        for (s, inner, outer) in &regions.values {
                            records.push(vec![l.problem.to_compact(), column_label(*s), render(inner), render(outer)]);
                        }
                    }
                }
            }
            csv_string(records)
        }
        Format::Text => {
            let mut out = String::new();
            for l in list {
                match &l.regions {
                    None => {
                        let _ = writeln!(out, "{}", l.problem.to_compact());
                    }
                    Some(regions) => {
                        let verdict = if regions.coincide() { "inner = outer" } else { "gap" };
                        let _ = writeln!(out, "{}  {verdict}", l.problem.to_compact());
                        for row in regions.outer.constraints().iter().filter(|r| r.nonnegativity_of().is_none()) {
                            let _ = writeln!(out, "  {row}");
                        }
                    }
                }
            }
            out
        }
    }
}
