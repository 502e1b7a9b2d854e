//! Stored expectations for the reproduction harness, embedded at build time.

use std::collections::BTreeMap;

use dixc_core::rational::parse as parse_rational;
use dixc_core::{Rational, SubsetId};
use serde::Deserialize;

use crate::error::{format_err, Result};

pub const TABLE1: &str = include_str!("../expected/table1.toml");
pub const TABLE2: &str = include_str!("../expected/table2.toml");
pub const TABLE3: &str = include_str!("../expected/table3.toml");
pub const EXAMPLE1: &str = include_str!("../expected/example1.toml");
pub const EQ9: &str = include_str!("../expected/eq9.toml");
pub const N4TEXT: &str = include_str!("../expected/n4text.toml");

#[derive(Debug, Deserialize)]
pub struct Cells {
    pub cells: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct ServerRow {
    pub label: String,
    pub servers: Vec<String>,
    pub cells: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct SeparateTable {
    pub problem: String,
    pub columns: Vec<String>,
    pub rows: Vec<ServerRow>,
    pub sum: Cells,
}

#[derive(Debug, Deserialize)]
pub struct ClassRow {
    pub problems: Vec<String>,
    pub rule: String,
    pub cells: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct ClassTable {
    pub columns: Vec<String>,
    pub rows: Vec<ClassRow>,
}

#[derive(Debug, Deserialize)]
pub struct GroupRow {
    pub servers: Vec<String>,
    pub cells: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct Totals {
    pub sum_rate: String,
    pub polymatroid: String,
}

#[derive(Debug, Deserialize)]
pub struct GroupTable {
    pub problem: String,
    pub columns: Vec<String>,
    pub rows: Vec<GroupRow>,
    pub sum: Cells,
    pub total: Totals,
}

#[derive(Debug, Deserialize)]
pub struct RegionRow {
    pub set: String,
    pub rhs: String,
}

#[derive(Debug, Deserialize)]
pub struct RegionTable {
    pub problem: String,
    #[serde(default)]
    pub decoding: BTreeMap<String, Vec<usize>>,
    pub rows: Vec<RegionRow>,
}

#[derive(Debug, Deserialize)]
pub struct SumRates {
    pub problem: String,
    pub polymatroid: String,
    pub polymatroid_custom: String,
    pub inner_joint: String,
}

pub fn load<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| format_err(format!("expected-value file: {e}")))
}

pub fn rational(text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| format_err(format!("expected-value file: bad rational {text:?}")))
}

pub fn subset(key: &str) -> Result<SubsetId> {
    SubsetId::parse_key(key).ok_or_else(|| format_err(format!("expected-value file: bad subset {key:?}")))
}

/// Weights for a column header such as `R1+R3`.
pub fn column_weights(column: &str, n: usize) -> Result<Vec<Rational>> {
    let mut w = vec![dixc_core::rational::int(0); n];
    for term in column.split('+') {
        let j: usize = term
            .trim()
            .strip_prefix('R')
            .and_then(|d| d.parse().ok())
            .filter(|j| (1..=n).contains(j))
            .ok_or_else(|| format_err(format!("expected-value file: bad column {column:?}")))?;
        w[j - 1] = dixc_core::rational::int(1);
    }
    Ok(w)
}

/// Column header for the direction `Σ_{j∈S} R_j`.
pub fn column_label(set: SubsetId) -> String {
    set.elements()
        .map(|j| format!("R{}", j + 1))
        .collect::<Vec<_>>()
        .join("+")
}
