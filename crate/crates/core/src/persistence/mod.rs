//! Readers and writers for every artifact the toolkit produces.
//!
//! All formats are UTF-8 text with LF line endings. Readers are strict:
//! they accept exactly what the matching writer emits and report the line
//! and field of the first problem.

mod dataset;
mod folds;
mod model;
mod report;
mod trace;

pub use dataset::{dataset_header, read_dataset, write_dataset, load_dataset, save_dataset};
pub use folds::{load_fold_plan, read_fold_plan, save_fold_plan, write_fold_plan, FOLD_PLAN_VERSION};
pub use model::{load_model, read_model, save_model, write_model, MODEL_VERSION};
pub use report::{
    load_report, read_metrics, read_report, save_report, write_metrics, write_report, Report, ReportBody,
    REPORT_VERSION,
};
pub use trace::{read_events, read_trace, write_events, write_trace, EventRecord};

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Writes `contents` to a sibling temporary file, then renames it over
/// `path`, so readers never see a half-written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidInput(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Shortest decimal that parses back to the same `f64`.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn join_f64(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",")
}

/// Parses a number written by `fmt_f64`, rejecting other spellings.
pub(crate) fn parse_f64(line: usize, field: &str, text: &str) -> Result<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| Error::format(line, field, format!("not a number: `{text}`")))?;
    if !v.is_finite() {
        return Err(Error::format(line, field, "number must be finite"));
    }
    if fmt_f64(v) != text {
        return Err(Error::format(line, field, format!("non-canonical number `{text}`")));
    }
    Ok(v)
}

pub(crate) fn parse_f64_list(line: usize, field: &str, text: &str, expected: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != expected {
        return Err(Error::format(
            line,
            field,
            format!("expected {expected} values, found {}", parts.len()),
        ));
    }
    parts
        .iter()
        .enumerate()
        .map(|(i, p)| parse_f64(line, &format!("{field}[{i}]"), p))
        .collect()
}

/// Splits text into lines, requiring LF endings and a final newline.
pub(crate) struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Result<Self> {
        if text.contains('\r') {
            let line = text[..text.find('\r').unwrap_or(0)].matches('\n').count() + 1;
            return Err(Error::format(line, "line ending", "CR characters are not allowed"));
        }
        let body = match text.strip_suffix('\n') {
            Some(b) => b,
            None if text.is_empty() => "",
            None => {
                let line = text.matches('\n').count() + 1;
                return Err(Error::format(line, "line ending", "file must end with a newline"));
            }
        };
        let lines = if text.is_empty() { Vec::new() } else { body.split('\n').collect() };
        Ok(Self { lines, pos: 0 })
    }

    /// 1-based number of the line most recently returned.
    pub fn line_no(&self) -> usize {
        self.pos
    }

    pub fn next_line(&mut self, what: &str) -> Result<&'a str> {
        let line = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::format(self.pos + 1, what, "unexpected end of file"))?;
        self.pos += 1;
        Ok(line)
    }

    pub fn remaining(&self) -> usize {
        self.lines.len() - self.pos
    }

    /// Reads a `key: value` header line with the given key.
    pub fn expect_kv(&mut self, key: &str) -> Result<&'a str> {
        let line = self.next_line(key)?;
        let n = self.line_no();
        match line.split_once(": ") {
            Some((k, v)) if k == key => Ok(v),
            _ => Err(Error::format(n, key, format!("expected `{key}: …`, found `{line}`"))),
        }
    }

    pub fn expect_usize(&mut self, key: &str) -> Result<usize> {
        let v = self.expect_kv(key)?;
        let n = self.line_no();
        parse_canonical_int(n, key, v)
    }

    pub fn expect_f64(&mut self, key: &str) -> Result<f64> {
        let v = self.expect_kv(key)?;
        parse_f64(self.line_no(), key, v)
    }

    /// Reads and checks the `format-version` line.
    pub fn expect_version(&mut self, kind: &'static str, supported: u32) -> Result<()> {
        let found: u32 = self.expect_usize("format-version")?.try_into().unwrap_or(u32::MAX);
        if found == 0 {
            return Err(Error::format(self.line_no(), "format-version", "version 0 does not exist"));
        }
        if found > supported {
            return Err(Error::Version {
                kind,
                found,
                supported,
            });
        }
        Ok(())
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.remaining() > 0 {
            return Err(Error::format(self.pos + 1, "end of file", "unexpected trailing content"));
        }
        Ok(())
    }
}

pub(crate) fn parse_canonical_int<T>(line: usize, field: &str, text: &str) -> Result<T>
where
    T: std::str::FromStr + ToString,
{
    let v: T = text
        .parse()
        .map_err(|_| Error::format(line, field, format!("not an integer: `{text}`")))?;
    if v.to_string() != text {
        return Err(Error::format(line, field, format!("non-canonical integer `{text}`")));
    }
    Ok(v)
}
