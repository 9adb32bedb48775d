//! Field serialization: `x,value` CSV and a little-endian binary snapshot.
//!
//! Snapshot layout: `L: f64`, `n: u64`, `t: f64`, then `n` samples as `f64`,
//! all little-endian.

use std::io::{self, BufRead, Read, Write};

use thiserror::Error;

use super::grid::{Field, Grid, GridError};

#[derive(Debug, Error)]
pub enum FieldIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub const SNAPSHOT_HEADER_BYTES: usize = 24;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(field: &Field, mut w: W) -> io::Result<()> {
    writeln!(w, "x,value")?;
    for (x, v) in field.grid().points().zip(field.values()) {
        writeln!(w, "{},{}", fmt_f64(x), fmt_f64(*v))?;
    }
    Ok(())
}

/// Reads `x,value` rows (header optional). A single-column file is read as
/// bare values. The point count must be a power of two; `length` is the
/// domain length since it cannot be recovered from the samples alone.
pub fn read_csv<R: BufRead>(r: R, length: f64) -> Result<Field, FieldIoError> {
    let mut values = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let last = line.rsplit(',').next().unwrap_or(line).trim();
        match last.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(FieldIoError::Parse {
                    line: i + 1,
                    msg: format!("{e}: {last:?}"),
                })
            }
        }
    }
    let grid = Grid::new(length, values.len())?;
    Ok(Field::new_finite(grid, values)?)
}

pub fn write_snapshot<W: Write>(field: &Field, t: f64, mut w: W) -> io::Result<()> {
    w.write_all(&field.grid().length().to_le_bytes())?;
    w.write_all(&(field.len() as u64).to_le_bytes())?;
    w.write_all(&t.to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<(Field, f64), FieldIoError> {
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let length = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let t = f64::from_le_bytes(b8);
    let grid = Grid::new(length, n)?;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        r.read_exact(&mut b8)?;
        values.push(f64::from_le_bytes(b8));
    }
    Ok((Field::new(grid, values)?, t))
}
