//! Regenerates the published tables and sum rates and diffs them exactly
//! against the stored expectations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use dixc_core::inner::{group_support, search_group};
use dixc_core::outer::unit_rows;
use dixc_core::{
    enumerate_problems, grouped_region, outer_region, outer_support, parse_problem,
    scheme_grouped, scheme_joint, scheme_separate, Decoding, DecodingConfig, LinearInequality,
    OuterBoundKind, Polyhedron, ProblemInstance, Rational, ServerGrouping, SubsetId, VariableId,
};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expected::{self, column_label, column_weights, rational, subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReproId {
    Table1,
    Table2,
    Table3,
    Example1,
    Eq9,
    N4text,
}

impl ReproId {
    pub const ALL: [ReproId; 6] = [
        ReproId::Table1,
        ReproId::Table2,
        ReproId::Table3,
        ReproId::Example1,
        ReproId::Eq9,
        ReproId::N4text,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReproId::Table1 => "table1",
            ReproId::Table2 => "table2",
            ReproId::Table3 => "table3",
            ReproId::Example1 => "example1",
            ReproId::Eq9 => "eq9",
            ReproId::N4text => "n4text",
        }
    }
}

impl fmt::Display for ReproId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReproId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReproId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown repro id {s:?}")))
    }
}

/// One compared value. `computed` is `None` when the region lacks the row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub row: String,
    pub column: String,
    pub expected: Rational,
    pub computed: Option<Rational>,
}

impl Cell {
    pub fn matches(&self) -> bool {
        self.computed.as_ref() == Some(&self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproReport {
    pub id: ReproId,
    pub columns: Vec<String>,
    pub cells: Vec<Cell>,
    pub checks: Vec<Check>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(Cell::matches) && self.checks.iter().all(|c| c.passed)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.matches())
    }

    /// Row labels in first-seen order.
    pub fn rows(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.cells
            .iter()
            .map(|c| c.row.as_str())
            .filter(|r| seen.insert(*r))
            .collect()
    }
}

pub fn run(id: ReproId, budget: u128) -> Result<ReproReport> {
    match id {
        ReproId::Table1 => table1(budget),
        ReproId::Table2 => table2(),
        ReproId::Table3 => table3(),
        ReproId::Example1 => example1(),
        ReproId::Eq9 => eq9(budget),
        ReproId::N4text => n4text(),
    }
}

fn problem(text: &str) -> Result<ProblemInstance> {
    Ok(parse_problem(text, &[])?)
}

fn cell(row: &str, column: &str, expected: &str, computed: Rational) -> Result<Cell> {
    Ok(Cell {
        row: row.to_string(),
        column: column.to_string(),
        expected: rational(expected)?,
        computed: Some(computed),
    })
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn check_widths(columns: &[String], cells: &[String], row: &str) -> Result<()> {
    if columns.len() != cells.len() {
        return Err(Error::Format(format!(
            "expected-value row {row} has {} cells for {} columns",
            cells.len(),
            columns.len()
        )));
    }
    Ok(())
}

fn table1(budget: u128) -> Result<ReproReport> {
    let doc: expected::SeparateTable = expected::load(expected::TABLE1)?;
    let p = problem(&doc.problem)?;
    let mut jobs = Vec::new();
    for row in &doc.rows {
        check_widths(&doc.columns, &row.cells, &row.label)?;
        let servers = row.servers.iter().map(|k| subset(k)).collect::<Result<Vec<_>>>()?;
        for (column, want) in doc.columns.iter().zip(&row.cells) {
            jobs.push((row.label.clone(), Some(servers.clone()), column.clone(), want.clone()));
        }
    }
    check_widths(&doc.columns, &doc.sum.cells, "sum")?;
    for (column, want) in doc.columns.iter().zip(&doc.sum.cells) {
        jobs.push(("Sum rates".into(), None, column.clone(), want.clone()));
    }
    let cells = jobs
        .par_iter()
        .map(|(row, servers, column, want)| {
            let w = column_weights(column, p.n())?;
            let got = match servers {
                Some(servers) => search_group(&p, servers, &w)?.0,
                None => scheme_separate(&p, &Decoding::Search, &w, budget)?.value,
            };
            cell(row, column, want, got)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReproReport {
        id: ReproId::Table1,
        columns: doc.columns,
        cells,
        checks: Vec::new(),
    })
}

/// Rows with origins dropped and scaling normalized, for exact set comparison.
fn row_set(region: &Polyhedron) -> BTreeSet<String> {
    region
        .constraints()
        .iter()
        .map(|r| {
            let mut r: LinearInequality = r.normalized();
            r.origin = None;
            r.to_string()
        })
        .collect()
}

fn table2() -> Result<ReproReport> {
    let doc: expected::ClassTable = expected::load(expected::TABLE2)?;
    struct Job {
        text: String,
        rule: String,
        cells: Vec<String>,
    }
    let mut jobs = Vec::new();
    for (i, row) in doc.rows.iter().enumerate() {
        check_widths(&doc.columns, &row.cells, &format!("{}", i + 1))?;
        for text in &row.problems {
            jobs.push(Job {
                text: text.clone(),
                rule: row.rule.clone(),
                cells: row.cells.clone(),
            });
        }
    }
    let results = jobs
        .par_iter()
        .map(|job| -> Result<(Vec<Cell>, Vec<Check>, ProblemInstance)> {
            let p = problem(&job.text)?;
            let rule = DecodingConfig::table2_rule(&p);
            let named = match job.rule.as_str() {
                "complement" => DecodingConfig::complement_rule(&p),
                "isolated-singleton" => DecodingConfig::from_sets((0..p.n()).map(|j| {
                    let a = p.side_info(j);
                    let d = if a.is_empty() { SubsetId::singleton(j) } else { SubsetId::full(p.n()).difference(a) };
                    (j, d)
                })),
                other => return Err(Error::Format(format!("unknown decoding rule {other:?}"))),
            };
            let mut checks = vec![check(
                &format!("{} decoding rule", job.text),
                rule == named,
                format!("row names the {} rule", job.rule),
            )];
            let fixed = Decoding::Fixed(vec![rule.clone()]);
            let mut cells = Vec::new();
            for (column, want) in doc.columns.iter().zip(&job.cells) {
                let w = column_weights(column, p.n())?;
                let inner = scheme_joint(&p, &fixed, &w, 1)?.value;
                let outer = outer_support(&p, OuterBoundKind::PolymatroidPlusCustom, &w)?;
                cells.push(cell(&format!("{} inner", job.text), column, want, inner)?);
                cells.push(cell(&format!("{} outer", job.text), column, want, outer)?);
            }
            let inner = grouped_region(&p, &ServerGrouping::single(p.n()), &[rule])?;
            let outer = outer_region(&p, OuterBoundKind::PolymatroidPlusCustom)?;
            checks.push(check(
                &format!("{} inner region = outer region", job.text),
                row_set(&inner) == row_set(&outer),
                format!("{} vs {} rows", inner.constraints().len(), outer.constraints().len()),
            ));
            Ok((cells, checks, p))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::new();
    let mut checks = Vec::new();
    let mut listed = Vec::new();
    for (c, k, p) in results {
        cells.extend(c);
        checks.extend(k);
        listed.push(p.canonical_form().0.to_compact());
    }
    let distinct: BTreeSet<&String> = listed.iter().collect();
    checks.push(check(
        "listed problems are pairwise non-isomorphic",
        distinct.len() == listed.len(),
        format!("{} listed, {} distinct classes", listed.len(), distinct.len()),
    ));
    let labeled = enumerate_problems(3, false)?;
    let reached: BTreeSet<String> = labeled
        .par_iter()
        .map(|q| q.canonical_form().0.to_compact())
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let listed_set: BTreeSet<String> = listed.into_iter().collect();
    checks.push(check(
        "labeled problems canonicalize into the listed classes",
        reached == listed_set && listed_set.len() == 16,
        format!("{} labeled problems, {} classes", labeled.len(), reached.len()),
    ));
    Ok(ReproReport {
        id: ReproId::Table2,
        columns: doc.columns,
        cells,
        checks,
    })
}

fn group_label(servers: &[SubsetId]) -> String {
    let names: Vec<String> = servers.iter().map(|s| s.to_string()).collect();
    names.join(" ")
}

fn table3() -> Result<ReproReport> {
    let doc: expected::GroupTable = expected::load(expected::TABLE3)?;
    let p = problem(&doc.problem)?;
    let (grouping, configs) = crate::presets::table3()?;
    let mut jobs = Vec::new();
    let mut covered = Vec::new();
    for row in &doc.rows {
        let mut servers = row.servers.iter().map(|k| subset(k)).collect::<Result<Vec<_>>>()?;
        let label = group_label(&servers);
        check_widths(&doc.columns, &row.cells, &label)?;
        servers.sort();
        let at = grouping
            .groups()
            .iter()
            .position(|g| *g == servers)
            .ok_or_else(|| Error::Format(format!("group {label} is not in the preset grouping")))?;
        covered.push(at);
        for (column, want) in doc.columns.iter().zip(&row.cells) {
            jobs.push((label.clone(), Some(at), column.clone(), want.clone()));
        }
    }
    check_widths(&doc.columns, &doc.sum.cells, "sum")?;
    for (column, want) in doc.columns.iter().zip(&doc.sum.cells) {
        jobs.push(("Sum rates".into(), None, column.clone(), want.clone()));
    }
    let fixed = Decoding::Fixed(configs.clone());
    let mut cells = jobs
        .par_iter()
        .map(|(row, at, column, want)| {
            let w = column_weights(column, p.n())?;
            let got = match at {
                Some(at) => group_support(&p, &grouping.groups()[*at], &configs[*at], &w)?.0,
                None => scheme_grouped(&p, &grouping, &fixed, &w, 1)?.value,
            };
            cell(row, column, want, got)
        })
        .collect::<Result<Vec<_>>>()?;
    let all = vec![dixc_core::rational::int(1); p.n()];
    let total = scheme_grouped(&p, &grouping, &fixed, &all, 1)?.value;
    let outer = outer_support(&p, OuterBoundKind::Polymatroid, &all)?;
    cells.push(cell("Total", "grouped R1+R2+R3+R4", &doc.total.sum_rate, total)?);
    cells.push(cell("Total", "polymatroid R1+R2+R3+R4", &doc.total.polymatroid, outer)?);
    covered.sort();
    covered.dedup();
    let checks = vec![check(
        "rows cover every group of the preset",
        covered.len() == grouping.groups().len() && covered.len() == doc.rows.len(),
        format!("{} rows, {} groups", doc.rows.len(), grouping.groups().len()),
    )];
    Ok(ReproReport {
        id: ReproId::Table3,
        columns: doc.columns.into_iter().chain(["grouped R1+R2+R3+R4".into(), "polymatroid R1+R2+R3+R4".into()]).collect(),
        cells,
        checks,
    })
}

fn unit_set(row: &LinearInequality) -> Option<SubsetId> {
    let mut set = SubsetId::EMPTY;
    for (v, c) in &row.coefficients {
        match v {
            VariableId::Rate(j) if *c == dixc_core::rational::int(1) => set = set.with(*j),
            _ => return None,
        }
    }
    Some(set)
}

/// Compares a region row by row against `Σ_{j∈S} R_j ≤ rhs` expectations and
/// checks that nothing beyond them and nonnegativity remains.
fn region_report(id: ReproId, doc: &expected::RegionTable, region: &Polyhedron) -> Result<ReproReport> {
    let rows = unit_rows(region);
    let mut cells = Vec::new();
    let mut expected_sets = BTreeSet::new();
    for row in &doc.rows {
        let set = subset(&row.set)?;
        expected_sets.insert(set);
        let computed = rows.iter().find(|(s, _)| *s == set).map(|(_, r)| r.clone());
        cells.push(Cell {
            row: column_label(set),
            column: "rhs".into(),
            expected: rational(&row.rhs)?,
            computed,
        });
    }
    let extra: Vec<String> = region
        .constraints()
        .iter()
        .filter(|r| r.nonnegativity_of().is_none())
        .filter(|r| unit_set(r).is_none_or(|s| !expected_sets.contains(&s)))
        .map(|r| r.to_string())
        .collect();
    let nonneg = region.constraints().iter().filter(|r| r.nonnegativity_of().is_some()).count();
    let n = region.variables().len();
    let checks = vec![
        check(
            "no rows beyond the expected ones",
            extra.is_empty(),
            if extra.is_empty() { "none".to_string() } else { extra.join("; ") },
        ),
        check("nonnegativity rows", nonneg == n, format!("{nonneg} of {n}")),
    ];
    Ok(ReproReport {
        id,
        columns: vec!["rhs".into()],
        cells,
        checks,
    })
}

fn example1() -> Result<ReproReport> {
    let doc: expected::RegionTable = expected::load(expected::EXAMPLE1)?;
    let p = problem(&doc.problem)?;
    let region = outer_region(&p, OuterBoundKind::Mais)?;
    region_report(ReproId::Example1, &doc, &region)
}

fn n4text() -> Result<ReproReport> {
    let doc: expected::RegionTable = expected::load(expected::N4TEXT)?;
    let p = problem(&doc.problem)?;
    let mut config = DecodingConfig::new();
    for (j, set) in &doc.decoding {
        let j: usize = j.parse().map_err(|_| Error::Format(format!("bad receiver {j:?}")))?;
        config.insert(j - 1, SubsetId::from_indices(set.iter().map(|i| i - 1)));
    }
    let region = grouped_region(&p, &ServerGrouping::single(p.n()), &[config])?;
    region_report(ReproId::N4text, &doc, &region)
}

fn eq9(budget: u128) -> Result<ReproReport> {
    let doc: expected::SumRates = expected::load(expected::EQ9)?;
    let p = problem(&doc.problem)?;
    let all = vec![dixc_core::rational::int(1); p.n()];
    let poly = outer_support(&p, OuterBoundKind::Polymatroid, &all)?;
    let custom = outer_support(&p, OuterBoundKind::PolymatroidPlusCustom, &all)?;
    let rule = Decoding::Fixed(vec![DecodingConfig::table2_rule(&p)]);
    let inner = scheme_joint(&p, &rule, &all, budget)?.value;
    let searched = scheme_joint(&p, &Decoding::Search, &all, budget)?.value;
    let row = "R1+R2+R3";
    let nine = dixc_core::rational::int(9);
    let checks = vec![
        check("polymatroid bound exceeds 9", poly > nine, format!("{poly}")),
        check("custom cut meets the inner bound", custom == inner, format!("{custom} vs {inner}")),
        check("decoding-set search agrees", searched == inner, format!("{searched}")),
    ];
    Ok(ReproReport {
        id: ReproId::Eq9,
        columns: vec!["polymatroid".into(), "polymatroid+custom".into(), "cc-joint".into()],
        cells: vec![
            cell(row, "polymatroid", &doc.polymatroid, poly)?,
            cell(row, "polymatroid+custom", &doc.polymatroid_custom, custom)?,
            cell(row, "cc-joint", &doc.inner_joint, inner)?,
        ],
        checks,
    })
}
