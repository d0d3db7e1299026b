//! Counting functions and finite-horizon estimates of upper and lower
//! asymptotic density.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_f64, io_err};
use crate::seqcore::{IndicatorSet, SequenceSource};
use crate::summability::{block_mean, Normalization};

/// Default trailing-window fraction for the liminf/limsup surrogates.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.5;

/// `#(A ∩ [1, n])`.
pub fn counting(set: &IndicatorSet, n: u64) -> u64 {
    match set.runs_up_to(n) {
        Some(runs) => runs.count_up_to(n),
        None => (1..=n).filter(|&i| set.contains(i)).count() as u64,
    }
}

/// Extremes of `#(A ∩ [1, n]) / n` over the trailing window
/// `n ∈ [ceil((1 - window_fraction)·N), N]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub horizon: u64,
    pub count: u64,
    pub lower: f64,
    pub upper: f64,
    pub argmin_n: u64,
    pub argmax_n: u64,
    pub window_start: u64,
}

impl DensityReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "horizon,count,lower,upper,argmin_n,argmax_n").map_err(io_err)?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            self.horizon,
            self.count,
            csv_f64(self.lower),
            csv_f64(self.upper),
            self.argmin_n,
            self.argmax_n
        )
        .map_err(io_err)
    }
}

pub(crate) fn check_window(window_fraction: f64) -> Result<()> {
    if window_fraction > 0.0 && window_fraction <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(
            "window_fraction",
            format!("{window_fraction} is outside (0, 1]"),
        ))
    }
}

/// First position of the trailing window over `1..=len`.
pub(crate) fn window_start(len: u64, window_fraction: f64) -> u64 {
    (((1.0 - window_fraction) * len as f64).ceil() as u64).clamp(1, len)
}

pub fn density_band(
    set: &IndicatorSet,
    horizon: u64,
    window_fraction: f64,
) -> Result<DensityReport> {
    if horizon < 2 {
        return Err(Error::param("N", "density horizon must be at least 2"));
    }
    check_window(window_fraction)?;
    let start = window_start(horizon, window_fraction);
    let mut count = 0u64;
    let mut report = DensityReport {
        horizon,
        count: 0,
        lower: f64::INFINITY,
        upper: f64::NEG_INFINITY,
        argmin_n: start,
        argmax_n: start,
        window_start: start,
    };
    for n in 1..=horizon {
        if set.contains(n) {
            count += 1;
        }
        if n >= start {
            let ratio = count as f64 / n as f64;
            if ratio < report.lower {
                report.lower = ratio;
                report.argmin_n = n;
            }
            if ratio > report.upper {
                report.upper = ratio;
                report.argmax_n = n;
            }
        }
    }
    report.count = count;
    Ok(report)
}

/// `(1/w_j)·#(A ∩ I_(alpha,j))`, computed as the cardinality-mode block mean
/// of the indicator sequence.
pub fn block_density(set: &IndicatorSet, alpha: f64, j: u64) -> Result<f64> {
    let src = SequenceSource::indicator(set.clone());
    block_mean(&src, alpha, j, Normalization::Cardinality)?
        .value
        .ok_or_else(|| Error::NotApplicable(format!("block {j} is empty for alpha = {alpha}")))
}

/// Closed-form `(lower, upper)` asymptotic densities of `A_s`:
/// `(1/(2+s), 2/(3+s))`.
pub fn a_s_density_formulas(s: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::param("s", format!("{s} is outside [0, 1]")));
    }
    Ok((1.0 / (2.0 + s), 2.0 / (3.0 + s)))
}
