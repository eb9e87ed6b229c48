use std::fmt::Write as _;
use std::path::Path;

use super::{write_atomic, Lines};
use crate::dataset::{ConditionTag, Dataset, Label, LabeledSample};
use crate::error::{Error, Result};
use crate::frame::{is_sensor_value, ThermalFrame, GRID, PIXELS};

/// `p00,p01,…,p77,label,condition`
pub fn dataset_header() -> String {
    let mut cols: Vec<String> = (0..GRID)
        .flat_map(|r| (0..GRID).map(move |c| format!("p{r}{c}")))
        .collect();
    cols.push("label".into());
    cols.push("condition".into());
    cols.join(",")
}

pub fn write_dataset(ds: &Dataset) -> String {
    let mut out = String::with_capacity((ds.len() + 1) * (PIXELS * 6 + 24));
    out.push_str(&dataset_header());
    out.push('\n');
    for s in &ds.samples {
        for v in s.features() {
            let _ = write!(out, "{v:.2},");
        }
        let _ = writeln!(out, "{},{}", s.label, s.condition);
    }
    out
}

pub fn read_dataset(text: &str, name: &str) -> Result<Dataset> {
    let mut lines = Lines::new(text)?;
    let header = lines.next_line("header")?;
    if header != dataset_header() {
        return Err(Error::format(1, "header", "expected p00,…,p77,label,condition"));
    }
    let mut samples = Vec::with_capacity(lines.remaining());
    while lines.remaining() > 0 {
        let line = lines.next_line("sample")?;
        let n = lines.line_no();
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != PIXELS + 2 {
            return Err(Error::format(
                n,
                "sample",
                format!("expected {} fields, found {}", PIXELS + 2, fields.len()),
            ));
        }
        let mut pixels = [0.0; PIXELS];
        for (i, (px, text)) in pixels.iter_mut().zip(&fields).enumerate() {
            let field = format!("p{}{}", i / GRID, i % GRID);
            let v: f64 = text
                .parse()
                .map_err(|_| Error::format(n, &field, format!("not a number: `{text}`")))?;
            if format!("{v:.2}") != *text || !is_sensor_value(v) {
                return Err(Error::format(
                    n,
                    &field,
                    format!("`{text}` is not a two-decimal quarter-degree value in [20, 100]"),
                ));
            }
            *px = v;
        }
        let label: Label = fields[PIXELS]
            .parse()
            .map_err(|e: String| Error::format(n, "label", e))?;
        let condition: ConditionTag = fields[PIXELS + 1]
            .parse()
            .map_err(|e: String| Error::format(n, "condition", e))?;
        let frame = ThermalFrame::new(pixels).map_err(|e| Error::format(n, "sample", e.to_string()))?;
        samples.push(LabeledSample::new(frame, label, condition));
    }
    Ok(Dataset::new(name, samples))
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    write_atomic(path, write_dataset(ds).as_bytes())
}

/// Loads a dataset, naming it after the file stem.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    read_dataset(&text, &name)
}
