//! Plain-text tables of exact integers.
//!
//! `c_table.txt`: one `n<TAB>C_n` record per line.
//! `p_table.txt`: one `n<TAB>c_0,c_1,...,c_n` record per line, zeros included.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{CoeffTable, IntPolynomial};

/// Odd `C_n` for `n = 1, 3, …, 41`.
pub const C_TABLE: &str = include_str!("../data/c_table.txt");
/// Coefficients of `P_0 … P_10`.
pub const P_TABLE: &str = include_str!("../data/p_table.txt");

fn bad(line: usize, reason: impl Into<String>) -> Error {
    Error::Golden {
        line,
        reason: reason.into(),
    }
}

fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn split_record(line_no: usize, line: &str) -> Result<(usize, &str)> {
    let (n, rest) = line
        .split_once('\t')
        .ok_or_else(|| bad(line_no, "missing tab separator"))?;
    let n = n
        .parse::<usize>()
        .map_err(|e| bad(line_no, format!("index: {e}")))?;
    Ok((n, rest))
}

fn parse_int(line_no: usize, s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|e| bad(line_no, format!("integer {s:?}: {e}")))
}

pub fn parse_c_table(text: &str) -> Result<Vec<(usize, BigInt)>> {
    records(text)
        .map(|(line_no, line)| {
            let (n, value) = split_record(line_no, line)?;
            Ok((n, parse_int(line_no, value)?))
        })
        .collect()
}

pub fn parse_p_table(text: &str) -> Result<Vec<(usize, Vec<BigInt>)>> {
    records(text)
        .map(|(line_no, line)| {
            let (n, body) = split_record(line_no, line)?;
            let coeffs = body
                .split(',')
                .map(|c| parse_int(line_no, c))
                .collect::<Result<Vec<_>>>()?;
            if coeffs.len() != n + 1 {
                return Err(bad(
                    line_no,
                    format!("P_{n} needs {} coefficients, found {}", n + 1, coeffs.len()),
                ));
            }
            Ok((n, coeffs))
        })
        .collect()
}

pub fn format_c_line(n: usize, c: &BigInt) -> String {
    format!("{n}\t{c}")
}

/// Record for `P_n`, padded with zeros up to index `n`.
pub fn format_p_line(n: usize, p: &IntPolynomial) -> String {
    let body = (0..=n)
        .map(|k| p.coeff(k).to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{n}\t{body}")
}

/// All odd entries of `table` in `c_table.txt` layout, newline-terminated.
pub fn render_c_table(table: &CoeffTable) -> String {
    table
        .odd_entries()
        .map(|(n, c)| format_c_line(n, c) + "\n")
        .collect()
}
