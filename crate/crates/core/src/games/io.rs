//! Payoff CSV format: the first record holds the strategy labels, every
//! following record one row of the matrix.

use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::payoff::Matrix;

pub fn write_payoff_csv<W: Write>(w: W, labels: &[String], m: &Matrix) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(labels)?;
    for i in 0..m.rows() {
        // `{:?}` prints the shortest representation that round-trips.
        wr.write_record(m.row(i).iter().map(|v| format!("{v:?}")))?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_payoff_csv<R: Read>(r: R) -> Result<(Vec<String>, Matrix)> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(r);
    let mut records = rd.records();
    let labels: Vec<String> = match records.next() {
        Some(rec) => rec?.iter().map(|s| s.trim().to_string()).collect(),
        None => return Err(Error::invalid("empty payoff CSV")),
    };
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("row {}: cannot parse {s:?}", i + 1)))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::invalid(format!("row {}: non-finite entry", i + 1)))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != labels.len() {
            return Err(Error::NotSquare {
                rows: labels.len(),
                cols: row.len(),
            });
        }
        rows.push(row);
    }
    if rows.len() != labels.len() {
        return Err(Error::NotSquare {
            rows: rows.len(),
            cols: labels.len(),
        });
    }
    Ok((labels, Matrix::from_rows(&rows)?))
}

pub fn load_payoff_csv(path: &Path) -> Result<(Vec<String>, Matrix)> {
    read_payoff_csv(std::fs::File::open(path)?)
}

pub fn save_payoff_csv(path: &Path, labels: &[String], m: &Matrix) -> Result<()> {
    write_payoff_csv(std::io::BufWriter::new(std::fs::File::create(path)?), labels, m)
}

/// Pretty JSON with a trailing newline.
pub fn save_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}
