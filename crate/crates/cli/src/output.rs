use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::failure::Failure;

/// Seventeen significant digits, enough to round-trip any double.
pub fn num(v: f64) -> String {
    // no negative zero in the output
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| num(v)).collect());
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(Failure::io)?;
        for r in &self.rows {
            w.write_record(r).map_err(Failure::io)?;
        }
        w.into_inner().map_err(|e| Failure::io(e.into_error()))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(Failure::io)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes through a sibling temporary file and a rename, so a failed run
/// never leaves a partial file behind.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), Failure> {
    let Some(path) = out else {
        let mut stdout = io::stdout().lock();
        return stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(Failure::io);
    };
    let name = path
        .file_name()
        .ok_or_else(|| Failure::usage(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let written = fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = written {
        let _ = fs::remove_file(&tmp);
        return Err(Failure::io(e));
    }
    Ok(())
}
