//! Embedded golden coefficient tables and the diffing logic behind the
//! `table` subcommand.
//!
//! Table 1 carries the two rank-8 theta columns (reproduced here through
//! the weight-8 span combinations E_4^2 - 5760 chi_8 and E_4^2 - 3072
//! chi_8).  Table 2 lists every nonzero rank-2 coefficient class of the
//! Leech theta series up to trace 6; indices whose class is absent must
//! vanish, which the checker verifies index by index.

use std::sync::OnceLock;

use crate::lambda2::HermIndex;
use crate::number_theory::{rat, QuadField};
use crate::qseries::FourierExpansion;

const TABLE1_TEXT: &str = include_str!("../data/table1_rank8.txt");
const TABLE2_TEXT: &str = include_str!("../data/table2_leech.txt");

#[derive(Debug, Clone)]
pub struct Table1Row {
    pub index: HermIndex,
    pub ndet4: i64,
    pub values: [i64; 2],
}

#[derive(Debug, Clone)]
pub struct Table2Row {
    pub index: HermIndex,
    pub ndet4: i64,
    pub value: i64,
}

/// Parse a golden file with `1 + values_per_row` numeric columns after the
/// bracket label.
fn parse_rows(
    text: &str,
    values_per_row: usize,
) -> Result<Vec<(HermIndex, i64, Vec<i64>)>, String> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let label = toks
            .next()
            .ok_or_else(|| format!("line {}: empty", lineno + 1))?;
        let index = HermIndex::parse_qi(label)
            .ok_or_else(|| format!("line {}: bad index {label}", lineno + 1))?;
        let ndet4: i64 = toks
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("line {}: bad 4det column", lineno + 1))?;
        let values: Vec<i64> = toks
            .map(|s| s.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("line {}: bad value ({e})", lineno + 1))?;
        if values.len() != values_per_row {
            return Err(format!(
                "line {}: expected {values_per_row} values, got {}",
                lineno + 1,
                values.len()
            ));
        }
        out.push((index, ndet4, values));
    }
    Ok(out)
}

pub fn parse_table1(text: &str) -> Result<Vec<Table1Row>, String> {
    Ok(parse_rows(text, 2)?
        .into_iter()
        .map(|(index, ndet4, v)| Table1Row {
            index,
            ndet4,
            values: [v[0], v[1]],
        })
        .collect())
}

pub fn parse_table2(text: &str) -> Result<Vec<Table2Row>, String> {
    Ok(parse_rows(text, 1)?
        .into_iter()
        .map(|(index, ndet4, v)| Table2Row {
            index,
            ndet4,
            value: v[0],
        })
        .collect())
}

pub fn table1_rows() -> &'static [Table1Row] {
    static ROWS: OnceLock<Vec<Table1Row>> = OnceLock::new();
    ROWS.get_or_init(|| parse_table1(TABLE1_TEXT).expect("embedded table 1 parses"))
}

pub fn table2_rows() -> &'static [Table2Row] {
    static ROWS: OnceLock<Vec<Table2Row>> = OnceLock::new();
    ROWS.get_or_init(|| parse_table2(TABLE2_TEXT).expect("embedded table 2 parses"))
}

/// Compare the two theta columns against the golden rows; returns one
/// message per mismatch (empty = clean).
pub fn check_table1(theta_h1: &FourierExpansion, theta_h2: &FourierExpansion) -> Vec<String> {
    check_table1_rows(table1_rows(), theta_h1, theta_h2)
}

pub fn check_table1_rows(
    rows: &[Table1Row],
    theta_h1: &FourierExpansion,
    theta_h2: &FourierExpansion,
) -> Vec<String> {
    let field = QuadField::gaussian();
    let mut diffs = Vec::new();
    for row in rows {
        if field.ndet(&row.index) != row.ndet4 {
            diffs.push(format!(
                "{}: transcribed 4det {} but computed {}",
                row.index.render_qi(),
                row.ndet4,
                field.ndet(&row.index)
            ));
            continue;
        }
        for (col, (f, name)) in [(theta_h1, "theta_H1"), (theta_h2, "theta_H2")]
            .into_iter()
            .enumerate()
        {
            let got = f.coeff(&row.index);
            let want = rat(row.values[col]);
            if got != want {
                diffs.push(format!(
                    "{} at {}: computed {got}, table {want}",
                    name,
                    row.index.render_qi()
                ));
            }
        }
    }
    diffs
}

/// Compare the Leech theta series against the golden rows: every listed
/// class must match, and every rank-2 index of trace <= 6 whose class is
/// not listed must vanish.
pub fn check_table2(theta_leech: &FourierExpansion) -> Vec<String> {
    check_table2_rows(table2_rows(), theta_leech)
}

pub fn check_table2_rows(rows: &[Table2Row], theta_leech: &FourierExpansion) -> Vec<String> {
    let field = QuadField::gaussian();
    let mut diffs = Vec::new();
    // Coefficients of the (symmetric, plain-character) theta series are
    // constant on GL_2(O_K)-classes, so the listed rows pin their whole
    // classes and unlisted classes must vanish.
    let mut classes = std::collections::BTreeMap::new();
    for row in rows {
        if field.ndet(&row.index) != row.ndet4 {
            diffs.push(format!(
                "{}: transcribed 4det {} but computed {}",
                row.index.render_qi(),
                row.ndet4,
                field.ndet(&row.index)
            ));
        }
        let rep = field.reduced_rep(&row.index);
        if let Some(prev) = classes.insert(rep, row.value) {
            if prev != row.value {
                diffs.push(format!(
                    "{}: equivalent to an earlier row with a different value",
                    row.index.render_qi()
                ));
            }
        }
    }
    let bound = theta_leech.trace_bound.min(6);
    for h in field.enumerate_psd(bound) {
        if field.ndet(&h) <= 0 {
            continue;
        }
        let want = rat(*classes.get(&field.reduced_rep(&h)).unwrap_or(&0));
        let got = theta_leech.coeff(&h);
        if got != want {
            diffs.push(format!(
                "a(theta_Leech; {}) = {got}, table says {want}",
                h.render_qi()
            ));
        }
    }
    diffs
}
