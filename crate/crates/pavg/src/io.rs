//! Sample CSV input and atomic file output.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use pavg_core::WeightedSample;
use serde::Serialize;

/// Reads `value[,weight]` rows (weight defaults to 1). Blank lines and `#`
/// comments are skipped; a leading `value[,weight]` header is allowed.
pub fn read_sample_csv(path: &Path) -> Result<WeightedSample> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_sample_csv(&text).with_context(|| format!("malformed sample file {}", path.display()))
}

pub fn parse_sample_csv(text: &str) -> Result<WeightedSample> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut weights = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(row + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if row == 0 && record.get(0) == Some("value") {
            continue;
        }
        if record.len() > 2 {
            bail!(
                "line {line}: expected `value[,weight]`, found {} fields",
                record.len()
            );
        }
        let value: f64 = record[0].parse().with_context(|| {
            format!(
                "line {line}: field `value` is not a number: `{}`",
                &record[0]
            )
        })?;
        let weight: f64 = match record.get(1) {
            Some(w) if !w.is_empty() => w
                .parse()
                .with_context(|| format!("line {line}: field `weight` is not a number: `{w}`"))?,
            _ => 1.0,
        };
        values.push(value);
        weights.push(weight);
    }
    Ok(WeightedSample::new(values, weights)?)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
/// Existing non-regular targets (devices, pipes) are written in place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if fs::metadata(path).is_ok_and(|m| !m.is_file() && !m.is_dir()) {
        return fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()));
    }
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// JSON to `path`, or to stdout without one.
pub fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = to_json(value)?;
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// CSV table with a header row.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|x| format!("{x:e}")))?;
    }
    Ok(w.into_inner()?)
}
