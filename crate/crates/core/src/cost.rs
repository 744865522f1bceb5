//! Analytical search-cost model.
//!
//! The page space is modelled as a tree in which every domain splits into
//! `r` subdomains. With `n` pages in total the tree height is
//! `h = log_r(n(r - 1) + 1)`. A query that follows a single domain path costs
//! about `h` searches (best case); one that must try all `r` subdomains at
//! each level costs `r(h - 1)` (worst case). A flat keyword engine scans all
//! `n` pages.
//!
//! The formulas are applied exactly as stated, with a real-valued height.
//! Note that for `n = 1000, r = 50` the worst case is about 88.0 searches,
//! while `r * h` is about 138.0; the latter is the figure usually quoted for
//! that configuration, see [`r_times_height`].

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("page count must be at least 1, got {0}")]
    PageCount(f64),
    #[error("branching factor must be at least 2, got {0}")]
    Branching(f64),
    #[error("curve needs 1 <= n_min < n_max and at least 2 steps (got n_min={n_min}, n_max={n_max}, steps={steps})")]
    CurveRange {
        n_min: f64,
        n_max: f64,
        steps: usize,
    },
}

fn check(n: f64, r: f64) -> Result<(), CostError> {
    if !n.is_finite() || n < 1.0 {
        return Err(CostError::PageCount(n));
    }
    if !r.is_finite() || r < 2.0 {
        return Err(CostError::Branching(r));
    }
    Ok(())
}

/// `log_r(n(r - 1) + 1)`.
pub fn tree_height(n: f64, r: f64) -> Result<f64, CostError> {
    check(n, r)?;
    Ok((n * (r - 1.0) + 1.0).ln() / r.ln())
}

pub fn best_case(n: f64, r: f64) -> Result<f64, CostError> {
    tree_height(n, r)
}

/// `r(h - 1)`.
pub fn worst_case(n: f64, r: f64) -> Result<f64, CostError> {
    Ok(r * (tree_height(n, r)? - 1.0))
}

/// `r * h`, the value that matches the commonly reported "about 138" for
/// `n = 1000, r = 50`. Kept next to [`worst_case`] for comparison only.
pub fn r_times_height(n: f64, r: f64) -> Result<f64, CostError> {
    Ok(r * tree_height(n, r)?)
}

pub fn keyword_cost(n: f64) -> Result<f64, CostError> {
    check(n, 2.0)?;
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub n: f64,
    pub best_case: f64,
    pub worst_case: f64,
    pub keyword: f64,
}

/// Samples the three costs at `steps` geometrically spaced page counts from
/// `n_min` to `n_max` inclusive.
pub fn emit_curves(
    n_min: f64,
    n_max: f64,
    steps: usize,
    r: f64,
) -> Result<Vec<CurveRow>, CostError> {
    check(n_min, r)?;
    if !n_max.is_finite() || n_max <= n_min || steps < 2 {
        return Err(CostError::CurveRange {
            n_min,
            n_max,
            steps,
        });
    }
    let ratio = (n_max / n_min).ln();
    (0..steps)
        .map(|i| {
            let n = if i == steps - 1 {
                n_max
            } else {
                snap(n_min * (ratio * i as f64 / (steps - 1) as f64).exp())
            };
            Ok(CurveRow {
                n,
                best_case: best_case(n, r)?,
                worst_case: worst_case(n, r)?,
                keyword: keyword_cost(n)?,
            })
        })
        .collect()
}

/// Rounds away float noise so that e.g. 10 * 100^1.5 prints as 10000.
fn snap(x: f64) -> f64 {
    let rounded = x.round();
    if (x - rounded).abs() <= 1e-9 * x.abs() {
        rounded
    } else {
        x
    }
}

/// Writes rows as CSV with the header `n,best_case,worst_case,keyword`.
pub fn write_csv(rows: &[CurveRow], out: impl Write) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["n", "best_case", "worst_case", "keyword"])?;
    for row in rows {
        writer.write_record([
            row.n.to_string(),
            row.best_case.to_string(),
            row.worst_case.to_string(),
            row.keyword.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
