//! Comma-delimited output tables.
//!
//! Numbers are written in scientific notation with 17 significant digits,
//! which round-trips every finite `f64`. Lines starting with `#` carry
//! key/value metadata and are ignored by [`read_table`].

use std::io::BufRead;

use crate::error::{Error, Result};

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// A parsed table: header names and string cells, metadata kept separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Column `name` parsed as floats.
    pub fn floats(&self, name: &str) -> Result<Vec<f64>> {
        let j = self
            .column(name)
            .ok_or_else(|| Error::Parameter(format!("no column {name:?}")))?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r[j].parse::<f64>().map_err(|_| Error::Parse {
                    line: i + 2,
                    message: format!("column {name}: cannot parse {:?}", r[j]),
                })
            })
            .collect()
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn read_table<R: BufRead>(reader: R) -> Result<Table> {
    let mut meta = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let cells: Vec<String> = t.split(',').map(|c| c.trim().to_string()).collect();
        match &header {
            None => header = Some(cells),
            Some(h) if h.len() != cells.len() => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {} fields, found {}", h.len(), cells.len()),
                })
            }
            Some(_) => rows.push(cells),
        }
    }
    let header = header.ok_or(Error::EmptyData)?;
    Ok(Table { meta, header, rows })
}
