//! Raw bivariate samples, rank transforms, and the two-column text format.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::table::fmt_f64;

/// Raw `n x 2` data matrix with finite entries, `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSample {
    rows: Vec<[f64; 2]>,
}

impl BivariateSample {
    pub fn new(rows: Vec<[f64; 2]>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyData);
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        row: i + 1,
                        column: j + 1,
                        value: v,
                    });
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[[f64; 2]] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[j])
    }

    /// Applies `g1`, `g2` columnwise. Intended for monotone re-expressions.
    pub fn map_columns(&self, g1: impl Fn(f64) -> f64, g2: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.rows.iter().map(|r| [g1(r[0]), g2(r[1])]).collect())
    }
}

/// Rank-based pseudo-observations `U_ij = (n + 1 - R_ij) / n`.
///
/// Stored as the integer reverse ranks `n + 1 - R_ij` so that downstream
/// selection rules can be evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoObservations {
    n: usize,
    reverse_ranks: Vec<[usize; 2]>,
    tie_flag: bool,
}

impl PseudoObservations {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// True when some raw column contained repeated values.
    pub fn has_ties(&self) -> bool {
        self.tie_flag
    }

    /// `n + 1 - R_ij` for each row, in `1..=n`.
    pub fn reverse_ranks(&self) -> &[[usize; 2]] {
        &self.reverse_ranks
    }

    pub fn get(&self, i: usize) -> [f64; 2] {
        let n = self.n as f64;
        let [a, b] = self.reverse_ranks[i];
        [a as f64 / n, b as f64 / n]
    }

    pub fn iter(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.n).map(|i| self.get(i))
    }
}

/// Ranks `R_ij = #{l : X_lj <= X_ij}` per column, computed by sorting.
/// Tied values all receive the largest rank of their group.
pub fn pseudo_observations(sample: &BivariateSample) -> PseudoObservations {
    let n = sample.len();
    let mut reverse_ranks = vec![[0usize; 2]; n];
    let mut tie_flag = false;
    let mut order: Vec<usize> = (0..n).collect();
    for j in [0, 1] {
        let value = |i: usize| sample.rows[i][j];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)));
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && value(order[end]) == value(order[start]) {
                end += 1;
            }
            if end - start > 1 {
                tie_flag = true;
            }
            // `end` elements are <= every member of this group.
            for &i in &order[start..end] {
                reverse_ranks[i][j] = n + 1 - end;
            }
            start = end;
        }
    }
    PseudoObservations {
        n,
        reverse_ranks,
        tie_flag,
    }
}

/// Parses the two-column comma-separated format. A single header line is
/// skipped when its first field is not numeric; blank lines are ignored.
pub fn read_sample<R: BufRead>(reader: R) -> Result<BivariateSample> {
    let mut rows = Vec::new();
    let mut first = true;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if first {
            first = false;
            if fields[0].parse::<f64>().is_err() {
                continue;
            }
        }
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let mut row = [0.0f64; 2];
        for (column, (slot, field)) in row.iter_mut().zip(&fields).enumerate() {
            *slot = field.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("cannot parse {field:?} as a number"),
            })?;
            if !slot.is_finite() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("column {}: non-finite value {field:?}", column + 1),
                });
            }
        }
        rows.push(row);
    }
    BivariateSample::new(rows)
}

pub fn read_sample_file(path: impl AsRef<Path>) -> Result<BivariateSample> {
    read_sample(BufReader::new(File::open(path)?))
}

/// Writes `sample` in the format accepted by [`read_sample`], with header `x1,x2`.
pub fn write_sample<W: Write>(mut w: W, sample: &BivariateSample) -> Result<()> {
    writeln!(w, "x1,x2")?;
    for r in sample.rows() {
        writeln!(w, "{},{}", fmt_f64(r[0]), fmt_f64(r[1]))?;
    }
    Ok(())
}
