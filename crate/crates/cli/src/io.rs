//! CSV formats.
//!
//! * tuples: `ts,te,payload` per line, ids assigned by line order; a first
//!   line whose first field is not an integer is taken as a header;
//! * pairs: `r_id,s_id`, written sorted;
//! * endpoint dumps: `timestamp,kind,tuple_id`.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use sweepjoin::{EndpointIndex, InvalidRelation, Relation, TupleId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Invalid(#[from] InvalidRelation),
}

fn open(path: &Path) -> Result<File, CsvError> {
    File::open(path).map_err(|source| CsvError::Io { path: path.display().to_string(), source })
}

fn create(path: &Path) -> Result<File, CsvError> {
    File::create(path).map_err(|source| CsvError::Io { path: path.display().to_string(), source })
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).comment(Some(b'#')).from_reader(input)
}

fn field<F: std::str::FromStr>(record: &csv::StringRecord, i: usize, line: u64, what: &str) -> Result<F, CsvError> {
    let raw = record.get(i).ok_or_else(|| CsvError::Parse { line, message: format!("missing {what}") })?;
    raw.parse().map_err(|_| CsvError::Parse { line, message: format!("bad {what} `{raw}`") })
}

fn is_header(record: &csv::StringRecord) -> bool {
    record.get(0).is_some_and(|f| f.parse::<i64>().is_err())
}

/// Parses tuples from any reader.
pub fn parse_relation<R: Read>(name: &str, input: R) -> Result<Relation<i64>, CsvError> {
    let mut rows = Vec::new();
    for (i, record) in reader(input).records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 && is_header(&record) {
            continue;
        }
        if record.len() < 2 || record.len() > 3 {
            return Err(CsvError::Parse { line, message: format!("expected 2 or 3 fields, got {}", record.len()) });
        }
        let ts: i64 = field(&record, 0, line, "ts")?;
        let te: i64 = field(&record, 1, line, "te")?;
        let payload: u32 = if record.len() == 3 { field(&record, 2, line, "payload")? } else { 0 };
        rows.push((ts, te, payload));
    }
    Ok(Relation::new(name, rows)?)
}

pub fn read_csv(path: &Path) -> Result<Relation<i64>, CsvError> {
    let name = path.file_stem().map_or_else(|| "relation".into(), |s| s.to_string_lossy().into_owned());
    parse_relation(&name, open(path)?)
}

pub fn write_relation<W: Write>(rel: &Relation<i64>, out: W) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["ts", "te", "payload"])?;
    for t in rel.iter() {
        w.serialize((t.ts, t.te, t.payload))?;
    }
    w.flush().map_err(|source| CsvError::Io { path: "<output>".into(), source })?;
    Ok(())
}

pub fn write_csv(path: &Path, rel: &Relation<i64>) -> Result<(), CsvError> {
    write_relation(rel, create(path)?)
}

pub fn write_pairs<W: Write>(pairs: &BTreeSet<(TupleId, TupleId)>, out: W) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r_id", "s_id"])?;
    for (r, s) in pairs {
        w.serialize((r.0, s.0))?;
    }
    w.flush().map_err(|source| CsvError::Io { path: "<output>".into(), source })?;
    Ok(())
}

pub fn write_pairs_csv(path: &Path, pairs: &BTreeSet<(TupleId, TupleId)>) -> Result<(), CsvError> {
    write_pairs(pairs, create(path)?)
}

pub fn parse_pairs<R: Read>(input: R) -> Result<BTreeSet<(TupleId, TupleId)>, CsvError> {
    let mut out = BTreeSet::new();
    for (i, record) in reader(input).records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 && is_header(&record) {
            continue;
        }
        let r: u32 = field(&record, 0, line, "r_id")?;
        let s: u32 = field(&record, 1, line, "s_id")?;
        out.insert((TupleId(r), TupleId(s)));
    }
    Ok(out)
}

pub fn read_pairs_csv(path: &Path) -> Result<BTreeSet<(TupleId, TupleId)>, CsvError> {
    parse_pairs(open(path)?)
}

pub fn write_index<W: Write>(idx: &EndpointIndex<i64>, out: W) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["timestamp", "kind", "tuple_id"])?;
    for e in idx.events() {
        w.write_record([e.timestamp.to_string(), e.kind.to_string(), e.tuple_id.0.to_string()])?;
    }
    w.flush().map_err(|source| CsvError::Io { path: "<output>".into(), source })?;
    Ok(())
}
