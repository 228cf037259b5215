//! CSV readers and writers. Floats are written in Rust's shortest
//! round-trip form, so re-parsing recovers the exact bits.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};
use ndarray::{Array2, ArrayView2};
use sha2::{Digest, Sha256};
use sparse_gft::{Graph, LabeledDataset, SignalMatrix};

use crate::error::CliError;

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::input(path, e.to_string()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn line_of(record: &StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    record: &StringRecord,
    idx: usize,
    what: &str,
) -> Result<T, CliError> {
    let raw = record.get(idx).unwrap_or("");
    raw.parse().map_err(|_| {
        CliError::input(
            path,
            format!("line {}: invalid {what} {raw:?}", line_of(record)),
        )
    })
}

/// Edge list `u,v,w`, one edge per line. An optional header `u,v,w` and
/// `#` comments are allowed.
pub fn parse_graph(path: &Path, bytes: &[u8], vertices: Option<usize>) -> Result<Graph, CliError> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(Trim::All)
        .flexible(true)
        .from_reader(bytes);
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(path, e.to_string()))?;
        let line = line_of(&record);
        if i == 0 && record.get(0) == Some("u") {
            continue;
        }
        if record.len() != 3 {
            return Err(CliError::input(
                path,
                format!(
                    "line {line}: expected 3 fields u,v,w, found {}",
                    record.len()
                ),
            ));
        }
        let u: usize = parse_field(path, &record, 0, "vertex")?;
        let v: usize = parse_field(path, &record, 1, "vertex")?;
        let w: f64 = parse_field(path, &record, 2, "weight")?;
        let fail = |msg: String| Err(CliError::input(path, format!("line {line}: {msg}")));
        if u == v {
            return fail(format!("self-loop at vertex {u}"));
        }
        if !(w.is_finite() && w > 0.0) {
            return fail(format!("weight must be positive and finite, got {w}"));
        }
        if let Some(p) = vertices {
            if u.max(v) >= p {
                return fail(format!("vertex {} out of range for {p} vertices", u.max(v)));
            }
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return fail(format!("duplicate edge {u}-{v}"));
        }
        edges.push((u, v, w));
    }
    let p = match vertices {
        Some(p) => p,
        None => edges
            .iter()
            .map(|&(u, v, _)| u.max(v) + 1)
            .max()
            .ok_or_else(|| {
                CliError::input(path, "no edges; pass --vertices for an edgeless graph")
            })?,
    };
    Graph::new(p, edges).map_err(|e| CliError::input(path, e.to_string()))
}

fn parse_table(path: &Path, bytes: &[u8]) -> Result<(Vec<String>, Vec<StringRecord>), CliError> {
    let mut reader = ReaderBuilder::new().trim(Trim::All).from_reader(bytes);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::input(path, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let records = reader
        .records()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::input(path, e.to_string()))?;
    if records.is_empty() {
        return Err(CliError::input(path, "no data rows"));
    }
    Ok((headers, records))
}

fn values_from(
    path: &Path,
    records: &[StringRecord],
    cols: usize,
) -> Result<Array2<f64>, CliError> {
    let mut values = Array2::zeros((records.len(), cols));
    for (i, record) in records.iter().enumerate() {
        for j in 0..cols {
            values[[i, j]] = parse_field(path, record, j, "value")?;
        }
    }
    Ok(values)
}

/// Signal CSV: a header of source names, then one row per observation.
pub fn parse_signals(path: &Path, bytes: &[u8]) -> Result<SignalMatrix, CliError> {
    let (names, records) = parse_table(path, bytes)?;
    let values = values_from(path, &records, names.len())?;
    SignalMatrix::new(values, Some(names)).map_err(|e| CliError::input(path, e.to_string()))
}

/// Signal CSV whose last column is `label` with values 0 or 1.
pub fn parse_labeled(path: &Path, bytes: &[u8]) -> Result<LabeledDataset, CliError> {
    let (mut names, records) = parse_table(path, bytes)?;
    if names.last().map(String::as_str) != Some("label") {
        return Err(CliError::input(path, "last column must be named `label`"));
    }
    names.pop();
    let values = values_from(path, &records, names.len())?;
    let labels = records
        .iter()
        .map(|r| match r.get(names.len()) {
            Some("0") => Ok(false),
            Some("1") => Ok(true),
            other => Err(CliError::input(
                path,
                format!(
                    "line {}: label must be 0 or 1, got {:?}",
                    line_of(r),
                    other.unwrap_or("")
                ),
            )),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let signals =
        SignalMatrix::new(values, Some(names)).map_err(|e| CliError::input(path, e.to_string()))?;
    LabeledDataset::new(signals, labels).map_err(|e| CliError::input(path, e.to_string()))
}

fn push_row(out: &mut String, row: impl IntoIterator<Item = f64>) {
    for (j, x) in row.into_iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x}");
    }
    out.push('\n');
}

pub fn matrix_csv(m: ArrayView2<f64>) -> String {
    let mut out = String::new();
    for row in m.rows() {
        push_row(&mut out, row.iter().copied());
    }
    out
}

pub fn signals_csv(signals: &SignalMatrix, labels: Option<&[bool]>) -> String {
    let mut out = signals.names().join(",");
    if labels.is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for (i, row) in signals.values().rows().into_iter().enumerate() {
        push_row(&mut out, row.iter().copied());
        if let Some(labels) = labels {
            out.pop();
            out.push_str(if labels[i] { ",1\n" } else { ",0\n" });
        }
    }
    out
}
