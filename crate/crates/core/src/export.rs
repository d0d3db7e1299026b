//! Shared helpers for CSV and JSON output.

use std::path::PathBuf;

use crate::error::Error;

/// Versioned schema tags embedded in JSON documents.
pub const MEAN_SERIES_SCHEMA: &str = "cesaro.mean-series/1";
pub const BLOCK_SERIES_SCHEMA: &str = "cesaro.block-series/1";
pub const BLOCK_TABLE_SCHEMA: &str = "cesaro.block-table/1";
pub const W1_NORM_SCHEMA: &str = "cesaro.w1-norm/1";
pub const DENSITY_SCHEMA: &str = "cesaro.density-report/1";
pub const THEOREM_SCHEMA: &str = "cesaro.theorem-report/1";
pub const DEMO_SCHEMA: &str = "cesaro.counterexample-demo/1";

/// Formats a real for CSV: `.` decimal separator, no grouping, and the
/// shortest digits that parse back to the same `f64`.
pub fn csv_f64(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn io_err(source: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<output>"),
        source,
    }
}

/// A serializable body tagged with its schema version.
#[derive(Debug, serde::Serialize)]
pub struct Document<'a, T: serde::Serialize> {
    pub schema: &'static str,
    #[serde(flatten)]
    pub body: &'a T,
}

impl<'a, T: serde::Serialize> Document<'a, T> {
    pub fn new(schema: &'static str, body: &'a T) -> Self {
        Self { schema, body }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report types always serialize")
    }
}
