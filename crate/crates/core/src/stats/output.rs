//! CSV emitters. Each file starts with a `# master_seed=` comment line,
//! followed by a header row.

use std::io::Write;

use super::{ComponentScaling, CurvePoint, OverheadPoint, RuntimeScaling, ThresholdEstimate};
use crate::error::Result;

fn table<W: Write>(mut out: W, master_seed: u64, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    writeln!(out, "# master_seed={master_seed}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_crossing_csv<W: Write>(out: W, master_seed: u64, points: &[CurvePoint]) -> Result<()> {
    let rows = points
        .iter()
        .map(|c| vec![c.size.to_string(), c.p.to_string(), c.estimate.to_string(), c.stderr.to_string(), c.trials.to_string()])
        .collect();
    table(out, master_seed, &["L", "p", "crossing_probability", "stderr", "trials"], rows)
}

pub fn write_overhead_csv<W: Write>(out: W, master_seed: u64, points: &[OverheadPoint]) -> Result<()> {
    let rows = points
        .iter()
        .map(|o| {
            vec![
                o.size.to_string(),
                o.p.to_string(),
                o.mean_ml_over_l.to_string(),
                o.stderr.to_string(),
                o.trials.to_string(),
                o.achieved_pipeline_count.to_string(),
            ]
        })
        .collect();
    table(out, master_seed, &["L", "p", "mean_mL_over_L", "stderr", "trials", "achieved_pipeline_count"], rows)
}

/// Per-size rows, then one row with `L = inf` holding the extrapolation
/// when there is one.
pub fn write_threshold_csv<W: Write>(out: W, master_seed: u64, t: &ThresholdEstimate) -> Result<()> {
    let mut rows: Vec<Vec<String>> = t
        .per_size
        .iter()
        .map(|r| vec![r.size.to_string(), r.p_half.to_string(), r.stderr.to_string(), r.trials.to_string()])
        .collect();
    if let (Some(e), Some(s)) = (t.estimate, t.stderr) {
        let trials: usize = t.per_size.iter().map(|r| r.trials).sum();
        rows.push(vec!["inf".into(), e.to_string(), s.to_string(), trials.to_string()]);
    }
    table(out, master_seed, &["L", "p_half", "stderr", "trials"], rows)
}

pub fn write_components_csv<W: Write>(out: W, master_seed: u64, s: &ComponentScaling) -> Result<()> {
    let rows = s
        .rows
        .iter()
        .map(|r| {
            let fit = s.fits.iter().find(|f| f.p == r.p);
            vec![
                r.size.to_string(),
                r.p.to_string(),
                r.sites.to_string(),
                r.mean_largest.to_string(),
                r.stderr.to_string(),
                r.max_largest.to_string(),
                r.trials.to_string(),
                fit.map_or(String::new(), |f| f.slope.to_string()),
                fit.map_or(String::new(), |f| f.r_squared.to_string()),
            ]
        })
        .collect();
    table(
        out,
        master_seed,
        &["L", "p", "N", "mean_largest", "stderr", "max_largest", "trials", "log_slope", "r_squared"],
        rows,
    )
}

pub fn write_runtime_csv<W: Write>(out: W, master_seed: u64, s: &RuntimeScaling) -> Result<()> {
    let rows = s
        .rows
        .iter()
        .map(|r| {
            let spread = s.spread.iter().find(|x| x.0 == r.p).map_or(f64::NAN, |x| x.1);
            vec![
                r.size.to_string(),
                r.p.to_string(),
                r.sites.to_string(),
                r.work_per_site.to_string(),
                r.stderr.to_string(),
                r.max_visits_per_occupied.to_string(),
                r.visit_violations.to_string(),
                r.applicable.to_string(),
                r.trials.to_string(),
                spread.to_string(),
            ]
        })
        .collect();
    table(
        out,
        master_seed,
        &[
            "L",
            "p",
            "N",
            "work_per_site",
            "stderr",
            "max_visits_per_occupied",
            "visit_violations",
            "applicable",
            "trials",
            "spread",
        ],
        rows,
    )
}
