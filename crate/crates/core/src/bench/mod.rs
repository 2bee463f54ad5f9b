//! Benchmark and validation harness: stream files, replay through the bulk
//! structure or a sequential baseline, lockstep oracle checking, and CSV
//! reports.

mod replay;
mod report;
mod stream;

pub use replay::{replay, Mode, ReplayError, ReplayOptions};
pub use report::{
    component_curve, median_of_trials, write_curve_csv, write_rows_csv, BatchRow, CurvePoint, ReportError, RunReport,
    Summary,
};
pub use stream::{Batch, BatchKind, StreamError, StreamFile, STREAM_MAGIC, STREAM_VERSION};
