use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use super::replay::Mode;
use super::stream::BatchKind;

/// One processed minibatch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchRow {
    pub index: usize,
    pub kind: BatchKind,
    pub size: usize,
    pub wall_seconds: f64,
    /// Edges or queries per second.
    pub per_second: f64,
    pub components_after: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub update_edges: usize,
    pub update_seconds: f64,
    /// Total update edges over total update time.
    pub update_throughput: f64,
    pub queries: usize,
    pub query_seconds: f64,
    pub query_throughput: f64,
    pub total_seconds: f64,
    pub final_components: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub mode: Mode,
    pub threads: usize,
    pub n: usize,
    pub rows: Vec<BatchRow>,
    /// Answers of each query batch, in stream order.
    pub answers: Vec<Vec<bool>>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("no runs to combine")]
    NoRuns,
    #[error("runs differ in {0}")]
    Mismatch(&'static str),
}

pub(crate) fn throughput(size: usize, seconds: f64) -> f64 {
    if size == 0 {
        0.0
    } else {
        size as f64 / seconds
    }
}

impl RunReport {
    pub(crate) fn new(mode: Mode, threads: usize, n: usize, rows: Vec<BatchRow>, answers: Vec<Vec<bool>>) -> Self {
        let summary = Summary::from_rows(n, &rows);
        Self {
            mode,
            threads,
            n,
            rows,
            answers,
            summary,
        }
    }
}

impl Summary {
    fn from_rows(n: usize, rows: &[BatchRow]) -> Self {
        let total = |kind: BatchKind| -> (usize, f64) {
            rows.iter()
                .filter(|r| r.kind == kind)
                .fold((0, 0.0), |(s, t), r| (s + r.size, t + r.wall_seconds))
        };
        let (update_edges, update_seconds) = total(BatchKind::Update);
        let (queries, query_seconds) = total(BatchKind::Query);
        Self {
            update_edges,
            update_seconds,
            update_throughput: throughput(update_edges, update_seconds),
            queries,
            query_seconds,
            query_throughput: throughput(queries, query_seconds),
            total_seconds: update_seconds + query_seconds,
            final_components: rows.last().map_or(n, |r| r.components_after),
        }
    }
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    }
}

/// Combines repeated runs of one configuration into a report whose per-row
/// wall time is the median across runs. An even number of runs takes the
/// mean of the two middle values.
pub fn median_of_trials(runs: &[RunReport]) -> Result<RunReport, ReportError> {
    let first = runs.first().ok_or(ReportError::NoRuns)?;
    for r in &runs[1..] {
        if r.mode != first.mode {
            return Err(ReportError::Mismatch("mode"));
        }
        if r.threads != first.threads {
            return Err(ReportError::Mismatch("thread count"));
        }
        if r.n != first.n {
            return Err(ReportError::Mismatch("vertex count"));
        }
        let same_rows = r.rows.len() == first.rows.len()
            && r.rows.iter().zip(&first.rows).all(|(a, b)| {
                (a.index, a.kind, a.size, a.components_after) == (b.index, b.kind, b.size, b.components_after)
            });
        if !same_rows {
            return Err(ReportError::Mismatch("batch sequence"));
        }
        if r.answers != first.answers {
            return Err(ReportError::Mismatch("query answers"));
        }
    }
    let rows = first
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut times: Vec<f64> = runs.iter().map(|r| r.rows[i].wall_seconds).collect();
            let wall_seconds = median(&mut times);
            BatchRow {
                wall_seconds,
                per_second: throughput(row.size, wall_seconds),
                ..row.clone()
            }
        })
        .collect();
    Ok(RunReport::new(
        first.mode,
        first.threads,
        first.n,
        rows,
        first.answers.clone(),
    ))
}

/// A point of the component-count curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    /// Share of the stream's update edges inserted so far, in percent.
    pub percent: f64,
    pub components: usize,
}

/// Component count after each update batch, starting from `(0, n)`.
pub fn component_curve(report: &RunReport) -> Vec<CurvePoint> {
    let total = report.summary.update_edges;
    let mut seen = 0;
    let mut curve = vec![CurvePoint {
        percent: 0.0,
        components: report.n,
    }];
    for row in report.rows.iter().filter(|r| r.kind == BatchKind::Update) {
        seen += row.size;
        curve.push(CurvePoint {
            percent: if total == 0 {
                100.0
            } else {
                100.0 * seen as f64 / total as f64
            },
            components: row.components_after,
        });
    }
    curve
}

#[derive(Serialize)]
struct CsvRow<'a> {
    index: usize,
    kind: &'a str,
    size: usize,
    wall_seconds: f64,
    per_second: f64,
    components_after: usize,
}

/// Writes `index,kind,size,wall_seconds,per_second,components_after`.
pub fn write_rows_csv<W: Write>(report: &RunReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if report.rows.is_empty() {
        w.write_record([
            "index",
            "kind",
            "size",
            "wall_seconds",
            "per_second",
            "components_after",
        ])?;
    }
    for r in &report.rows {
        w.serialize(CsvRow {
            index: r.index,
            kind: r.kind.as_str(),
            size: r.size,
            wall_seconds: r.wall_seconds,
            per_second: r.per_second,
            components_after: r.components_after,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `percent,components`.
pub fn write_curve_csv<W: Write>(curve: &[CurvePoint], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if curve.is_empty() {
        w.write_record(["percent", "components"])?;
    }
    for p in curve {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}
