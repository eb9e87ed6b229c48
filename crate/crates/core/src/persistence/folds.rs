use std::path::Path;

use super::{parse_canonical_int, write_atomic, Lines};
use crate::dataset::FoldPlan;
use crate::error::{Error, Result};

pub const FOLD_PLAN_VERSION: u32 = 1;

/// ```text
/// format-version: 1
/// kind: fold-plan
/// num-folds: K
/// samples: N
/// <fold of sample 0>
/// …
/// ```
pub fn write_fold_plan(plan: &FoldPlan) -> String {
    let mut out = format!(
        "format-version: {FOLD_PLAN_VERSION}\nkind: fold-plan\nnum-folds: {}\nsamples: {}\n",
        plan.num_folds,
        plan.assignment.len()
    );
    for f in &plan.assignment {
        out.push_str(&f.to_string());
        out.push('\n');
    }
    out
}

pub fn read_fold_plan(text: &str) -> Result<FoldPlan> {
    let mut lines = Lines::new(text)?;
    lines.expect_version("fold-plan", FOLD_PLAN_VERSION)?;
    if lines.expect_kv("kind")? != "fold-plan" {
        return Err(Error::format(lines.line_no(), "kind", "expected `fold-plan`"));
    }
    let k = lines.expect_usize("num-folds")?;
    if k < 2 {
        return Err(Error::format(lines.line_no(), "num-folds", "need at least 2 folds"));
    }
    let n = lines.expect_usize("samples")?;
    let mut assignment = Vec::with_capacity(n);
    for _ in 0..n {
        let text = lines.next_line("fold")?;
        let f: usize = parse_canonical_int(lines.line_no(), "fold", text)?;
        if f >= k {
            return Err(Error::format(lines.line_no(), "fold", format!("{f} is not below {k}")));
        }
        assignment.push(f);
    }
    lines.expect_end()?;
    FoldPlan::new(k, assignment)
}

pub fn save_fold_plan(plan: &FoldPlan, path: &Path) -> Result<()> {
    write_atomic(path, write_fold_plan(plan).as_bytes())
}

pub fn load_fold_plan(path: &Path) -> Result<FoldPlan> {
    read_fold_plan(&std::fs::read_to_string(path)?)
}
