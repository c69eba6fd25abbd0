//! Result rows and the CSV sink.

use std::fs::OpenOptions;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const HEADER: &str =
    "experiment,scheme,bem,mode,sweep_var,sweep_value,metric,value,trials,seed,config_hash";

/// One metric at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub scheme: String,
    pub bem: String,
    pub mode: String,
    pub sweep_var: String,
    pub sweep_value: f64,
    pub metric: String,
    pub value: f64,
    pub trials: usize,
    pub seed: u64,
    pub config_hash: String,
}

fn check_hashes(rows: &[ResultRow], expected: Option<&str>) -> Result<()> {
    let Some(first) = expected.or_else(|| rows.first().map(|r| r.config_hash.as_str())) else {
        return Ok(());
    };
    match rows.iter().find(|r| r.config_hash != first) {
        Some(r) => Err(HarnessError::ConfigMismatch {
            expected: first.to_string(),
            found: r.config_hash.clone(),
        }),
        None => Ok(()),
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow]) -> Result<()> {
    check_hashes(rows, None)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_string(rows: &[ResultRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != HEADER {
        return Err(HarnessError::Csv(format!("unexpected header {}", header.join(","))));
    }
    let rows = r.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?;
    check_hashes(&rows, None)?;
    Ok(rows)
}

/// Concatenates row sets, rejecting any mix of config hashes.
pub fn merge(sets: Vec<Vec<ResultRow>>) -> Result<Vec<ResultRow>> {
    let all: Vec<ResultRow> = sets.into_iter().flatten().collect();
    check_hashes(&all, None)?;
    Ok(all)
}

/// Appends to an existing file (or creates it), refusing rows whose config
/// hash differs from what the file already holds.
pub fn append_file(path: &Path, rows: &[ResultRow]) -> Result<()> {
    if path.exists() && std::fs::metadata(path)?.len() > 0 {
        let existing = read_rows(std::fs::File::open(path)?)?;
        if let Some(first) = existing.first() {
            check_hashes(rows, Some(&first.config_hash))?;
        }
        let file = OpenOptions::new().append(true).open(path)?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    } else {
        write_rows(std::fs::File::create(path)?, rows)
    }
}
