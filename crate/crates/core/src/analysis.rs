//! Finite-truncation limit estimates and the equivalence checks between
//! Cesàro convergence and convergence of geometric block means.
//!
//! A limit is approximated by the band `[min, max]` of a series over a
//! trailing window. The verdict is `converged` when the band is no wider than
//! `2·tol` (the midpoint is reported), `oscillating` otherwise, and
//! `inconclusive` when the window holds no defined entry. This is a surrogate,
//! not a decision procedure, so reports always carry the raw band.

use serde::Serialize;

use crate::blocks::validate_alpha;
use crate::density::{check_window, window_start, DEFAULT_WINDOW_FRACTION};
use crate::error::{Error, Result};
use crate::seqcore::SequenceSource;
use crate::summability::{
    BlockAccumulator, BlockMeanSeries, CesaroAccumulator, MeanSeries, Normalization,
};

/// Default grid of bases for multi-base checks.
pub const DEFAULT_BASES: [f64; 6] = [1.2, 1.5, 2.0, std::f64::consts::E, 3.0, 10.0];

/// A series addressed by 1-based position; entries may be undefined.
pub trait SeriesView {
    fn len(&self) -> u64;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// `(index, value)` of the entry at `pos`.
    fn entry(&self, pos: u64) -> (u64, Option<f64>);
}

impl SeriesView for MeanSeries {
    fn len(&self) -> u64 {
        MeanSeries::len(self)
    }

    fn entry(&self, pos: u64) -> (u64, Option<f64>) {
        (pos, self.get(pos))
    }
}

impl SeriesView for BlockMeanSeries {
    fn len(&self) -> u64 {
        self.records.len() as u64
    }

    fn entry(&self, pos: u64) -> (u64, Option<f64>) {
        let r = &self.records[(pos - 1) as usize];
        (r.j, r.value)
    }
}

impl SeriesView for [f64] {
    fn len(&self) -> u64 {
        <[f64]>::len(self) as u64
    }

    fn entry(&self, pos: u64) -> (u64, Option<f64>) {
        (pos, Some(self[(pos - 1) as usize]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Converged { value: f64, tol: f64 },
    Inconclusive,
    Oscillating { low: f64, high: f64 },
}

impl Verdict {
    pub fn converged_value(&self) -> Option<f64> {
        match self {
            Verdict::Converged { value, .. } => Some(*value),
            _ => None,
        }
    }

    /// Converged to a value within `tol` of `limit`.
    pub fn tends_to(&self, limit: f64, tol: f64) -> bool {
        self.converged_value()
            .is_some_and(|v| (v - limit).abs() <= tol)
    }
}

/// Which entries a tail band was taken over, as indices of the underlying
/// series (`n` for running means, `j` for block means).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailWindow {
    pub first: u64,
    pub last: u64,
    pub defined: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// `NaN` (serialized as `null`) when the verdict is inconclusive.
    pub tail_min: f64,
    pub tail_max: f64,
    pub argmin: u64,
    pub argmax: u64,
    pub window: TailWindow,
    pub verdict: Verdict,
}

impl LimitEstimate {
    pub fn width(&self) -> f64 {
        self.tail_max - self.tail_min
    }
}

/// Band of the defined entries in the trailing `window_fraction` of `series`.
pub fn tail_band<S: SeriesView + ?Sized>(
    series: &S,
    window_fraction: f64,
    tol: f64,
) -> Result<LimitEstimate> {
    check_window(window_fraction)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param("tol", format!("{tol} must be positive")));
    }
    let len = series.len();
    if len == 0 {
        return Err(Error::param(
            "series",
            "cannot estimate a limit of an empty series",
        ));
    }
    let start = window_start(len, window_fraction);
    let mut est = LimitEstimate {
        tail_min: f64::INFINITY,
        tail_max: f64::NEG_INFINITY,
        argmin: 0,
        argmax: 0,
        window: TailWindow {
            first: series.entry(start).0,
            last: series.entry(len).0,
            defined: 0,
        },
        verdict: Verdict::Inconclusive,
    };
    for pos in start..=len {
        let (idx, value) = series.entry(pos);
        let Some(v) = value else { continue };
        est.window.defined += 1;
        if v < est.tail_min {
            est.tail_min = v;
            est.argmin = idx;
        }
        if v > est.tail_max {
            est.tail_max = v;
            est.argmax = idx;
        }
    }
    if est.window.defined == 0 {
        est.tail_min = f64::NAN;
        est.tail_max = f64::NAN;
        return Ok(est);
    }
    est.verdict = if est.width() <= 2.0 * tol {
        Verdict::Converged {
            value: 0.5 * (est.tail_min + est.tail_max),
            tol,
        }
    } else {
        Verdict::Oscillating {
            low: est.tail_min,
            high: est.tail_max,
        }
    };
    Ok(est)
}

/// Settings shared by the theorem checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremConfig {
    /// Number of terms streamed.
    pub n: u64,
    /// Optional cap on the number of blocks per base.
    pub max_blocks: Option<u64>,
    pub tol: f64,
    pub window_fraction: f64,
}

impl TheoremConfig {
    pub fn new(n: u64, tol: f64) -> Self {
        Self {
            n,
            max_blocks: None,
            tol,
            window_fraction: DEFAULT_WINDOW_FRACTION,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("N", "must be at least 1"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::param(
                "tol",
                format!("{} must be positive", self.tol),
            ));
        }
        if self.max_blocks == Some(0) {
            return Err(Error::param("J", "must be at least 1"));
        }
        check_window(self.window_fraction)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseResult {
    pub alpha: f64,
    pub completed_blocks: u64,
    pub band: LimitEstimate,
    pub verdict: Verdict,
}

/// A base whose block means contradict the Cesàro verdict, with its series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub alpha: f64,
    pub blocks: Vec<(u64, Option<f64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: &'static str,
    pub source: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub tol: f64,
    pub cesaro: LimitEstimate,
    pub bases: Vec<BaseResult>,
    pub consistent: bool,
    pub notes: Vec<String>,
    pub witness: Option<Witness>,
}

/// Streams `x_1..=x_n` once, feeding the running mean and one block
/// accumulator per base. Only blocks completed within `[1, n]` are kept.
fn stream_all(
    src: &SequenceSource,
    bases: &[f64],
    cfg: &TheoremConfig,
    mode: Normalization,
) -> Result<(MeanSeries, Vec<BlockMeanSeries>)> {
    for &alpha in bases {
        validate_alpha(alpha)?;
    }
    let mut ces = CesaroAccumulator::new();
    let mut means = Vec::with_capacity(cfg.n as usize);
    let mut accs = bases
        .iter()
        .map(|&a| BlockAccumulator::new(a, mode, cfg.max_blocks))
        .collect::<Result<Vec<_>>>()?;
    for x in src.values(cfg.n) {
        let x = x?;
        means.push(ces.push(x));
        for acc in &mut accs {
            acc.push(x)?;
        }
    }
    let series = MeanSeries::from_parts(means, ces.sum());
    let blocks = accs
        .into_iter()
        .zip(bases)
        .map(|(acc, &alpha)| acc.into_series(alpha))
        .collect();
    Ok((series, blocks))
}

fn base_result(series: &BlockMeanSeries, cfg: &TheoremConfig) -> Result<BaseResult> {
    let band = if series.records.is_empty() {
        let nan = f64::NAN;
        LimitEstimate {
            tail_min: nan,
            tail_max: nan,
            argmin: 0,
            argmax: 0,
            window: TailWindow {
                first: 0,
                last: 0,
                defined: 0,
            },
            verdict: Verdict::Inconclusive,
        }
    } else {
        tail_band(series, cfg.window_fraction, cfg.tol)?
    };
    Ok(BaseResult {
        alpha: series.alpha,
        completed_blocks: series.records.len() as u64,
        verdict: band.verdict,
        band,
    })
}

fn witness(series: &BlockMeanSeries) -> Witness {
    Witness {
        alpha: series.alpha,
        blocks: series.records.iter().map(|r| (r.j, r.value)).collect(),
    }
}

/// Checks the all-bases equivalence on a finite prefix. Block means use
/// real-length normalization.
///
/// The report is inconsistent when the running means converge to some `ℓ`
/// while the block means of a listed base do not converge to `ℓ` within
/// `tol`. A base whose block means converge while the running means do not
/// is recorded in the notes; it does not contradict the equivalence, which
/// quantifies over every base.
pub fn check_theorem1(
    src: &SequenceSource,
    bases: &[f64],
    cfg: &TheoremConfig,
) -> Result<TheoremReport> {
    cfg.validate()?;
    if bases.is_empty() {
        return Err(Error::param("bases", "at least one base is required"));
    }
    let (means, blocks) = stream_all(src, bases, cfg, Normalization::RealLength)?;
    let cesaro = tail_band(&means, cfg.window_fraction, cfg.tol)?;
    let results = blocks
        .iter()
        .map(|s| base_result(s, cfg))
        .collect::<Result<Vec<_>>>()?;

    let mut consistent = true;
    let mut notes = Vec::new();
    let mut wit = None;
    match cesaro.verdict.converged_value() {
        Some(limit) => {
            for (r, series) in results.iter().zip(&blocks) {
                if r.verdict == Verdict::Inconclusive {
                    notes.push(format!(
                        "base {}: no completed blocks in the window",
                        r.alpha
                    ));
                } else if !r.verdict.tends_to(limit, cfg.tol) {
                    consistent = false;
                    notes.push(format!(
                        "base {}: block means do not converge to the Cesàro limit {limit}",
                        r.alpha
                    ));
                    wit.get_or_insert_with(|| witness(series));
                }
            }
        }
        None => {
            let converging: Vec<String> = results
                .iter()
                .filter_map(|r| {
                    r.verdict
                        .converged_value()
                        .map(|v| format!("{} (→ {v})", r.alpha))
                })
                .collect();
            if !converging.is_empty() {
                notes.push(format!(
                    "block means converge for base(s) {} while the Cesàro means do not; a single base does not determine Cesàro convergence",
                    converging.join(", ")
                ));
            }
            if results
                .iter()
                .any(|r| matches!(r.verdict, Verdict::Oscillating { .. }))
            {
                notes.push(
                    "some base has oscillating block means, as expected without Cesàro convergence"
                        .into(),
                );
            }
        }
    }
    Ok(TheoremReport {
        theorem: "theorem1",
        source: src.describe(),
        n: cfg.n,
        tol: cfg.tol,
        cesaro,
        bases: results,
        consistent,
        notes,
        witness: wit,
    })
}

/// Factor applied to `tol` when block means tending to 0 must imply running
/// means tending to 0.
pub const THEOREM2_CESARO_SLACK: f64 = 5.0;

/// Checks the single-base equivalence for nonnegative sequences: block means
/// tend to 0 iff the running means do.
///
/// Finite-prefix slack: block means within `tol` of 0 must come with running
/// means within `5·tol` of 0, and running means within `tol` of 0 must come
/// with block means within `tol·(alpha+1)/(alpha-1)` of 0 (the ratio between a
/// block sum and the two partial sums around it).
pub fn check_theorem2(
    src: &SequenceSource,
    alpha: f64,
    cfg: &TheoremConfig,
) -> Result<TheoremReport> {
    cfg.validate()?;
    validate_alpha(alpha)?;
    for (n, x) in (1..).zip(src.values(cfg.n)) {
        let x = x?;
        if x < 0.0 {
            return Err(Error::Negative { index: n, value: x });
        }
    }
    let (means, blocks) = stream_all(src, &[alpha], cfg, Normalization::RealLength)?;
    let cesaro = tail_band(&means, cfg.window_fraction, cfg.tol)?;
    let base = base_result(&blocks[0], cfg)?;

    let blocks_zero = base.verdict.tends_to(0.0, cfg.tol);
    let cesaro_zero = cesaro.verdict.tends_to(0.0, cfg.tol);
    let block_slack = (alpha + 1.0) / (alpha - 1.0);
    let forward = !blocks_zero
        || cesaro
            .verdict
            .tends_to(0.0, THEOREM2_CESARO_SLACK * cfg.tol);
    let backward = !cesaro_zero || base.verdict.tends_to(0.0, block_slack * cfg.tol);
    let consistent = forward && backward;

    let describe = |zero: bool| {
        if zero {
            "tend to 0"
        } else {
            "do not tend to 0"
        }
    };
    let mut notes = vec![
        format!("block means (base {alpha}) {}", describe(blocks_zero)),
        format!("Cesàro means {}", describe(cesaro_zero)),
    ];
    if !forward {
        notes.push(format!(
            "block means tend to 0 but Cesàro means exceed {}·tol",
            THEOREM2_CESARO_SLACK
        ));
    }
    if !backward {
        notes.push("Cesàro means tend to 0 but block means do not".into());
    }
    Ok(TheoremReport {
        theorem: "theorem2",
        source: src.describe(),
        n: cfg.n,
        tol: cfg.tol,
        cesaro,
        witness: (!consistent).then(|| witness(&blocks[0])),
        bases: vec![base],
        consistent,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSample {
    pub n: u64,
    pub mean: f64,
}

/// Behaviour of the `±1` counterexample on `[1, n]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleDemo {
    #[serde(rename = "N")]
    pub n: u64,
    /// Number of base-2 blocks completed within `[1, n]`.
    pub completed_blocks: u64,
    pub first_block_mean: f64,
    /// `max |b_j|` over completed base-2 blocks with `j >= 2`.
    pub max_abs_block_mean: f64,
    pub cesaro_band: LimitEstimate,
    pub limsup_estimate: f64,
    pub liminf_estimate: f64,
    pub final_mean: f64,
    /// `a_n` along `n = 3·2^k`, `k >= 1`.
    pub along_three_times_power: Vec<MeanSample>,
    /// `a_n` along `n = 3·2^(k-1) - 1`, `k >= 1`, the ends of the `+1` runs.
    pub along_run_ends: Vec<MeanSample>,
}

pub const DEMO_MIN_N: u64 = 1 << 10;

pub fn counterexample_demo(n: u64) -> Result<CounterexampleDemo> {
    if n < DEMO_MIN_N {
        return Err(Error::param("N", format!("must be at least {DEMO_MIN_N}")));
    }
    let src = SequenceSource::Counterexample;
    let cfg = TheoremConfig::new(n, 0.01);
    let (means, blocks) = stream_all(&src, &[2.0], &cfg, Normalization::Cardinality)?;
    let blocks = &blocks[0];
    let first_block_mean = blocks.records[0].value.expect("block 1 is {1}");
    let max_abs_block_mean = blocks
        .defined_values()
        .filter(|&(j, _)| j >= 2)
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max);
    let cesaro_band = tail_band(&means, cfg.window_fraction, cfg.tol)?;
    let sample = |idx: u64| MeanSample {
        n: idx,
        mean: means.get(idx).expect("sample index within prefix"),
    };
    let along_three_times_power = (1..63)
        .map(|k| 3u64 << k)
        .take_while(|&i| i <= n)
        .map(sample)
        .collect();
    let along_run_ends = (1..63)
        .map(|k| (3u64 << (k - 1)) - 1)
        .take_while(|&i| i <= n)
        .map(sample)
        .collect();
    Ok(CounterexampleDemo {
        n,
        completed_blocks: blocks.records.len() as u64,
        first_block_mean,
        max_abs_block_mean,
        limsup_estimate: cesaro_band.tail_max,
        liminf_estimate: cesaro_band.tail_min,
        final_mean: means.last().unwrap(),
        cesaro_band,
        along_three_times_power,
        along_run_ends,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::IndicatorSet;
    use crate::summability::{block_means, cesaro_means};

    #[test]
    fn constant_series_converges() {
        let v = vec![0.7; 100];
        let est = tail_band(v.as_slice(), 0.5, 1e-9).unwrap();
        assert_eq!(
            est.verdict,
            Verdict::Converged {
                value: 0.7,
                tol: 1e-9
            }
        );
        assert_eq!(est.window.first, 50);
        assert_eq!(est.window.defined, 51);
    }

    #[test]
    fn counterexample_means_oscillate() {
        let m = cesaro_means(&SequenceSource::Counterexample, 1 << 20).unwrap();
        let est = tail_band(&m, 0.5, 0.01).unwrap();
        assert!(matches!(est.verdict, Verdict::Oscillating { .. }));
        assert!(est.tail_max >= 0.30);
        assert_eq!(est.argmax, 3 * (1 << 18) - 1);
    }

    #[test]
    fn counterexample_block_means_converge() {
        let b = block_means(
            &SequenceSource::Counterexample,
            2.0,
            20,
            Normalization::Cardinality,
        )
        .unwrap();
        let est = tail_band(&b, 0.5, 0.01).unwrap();
        assert_eq!(
            est.verdict,
            Verdict::Converged {
                value: 0.0,
                tol: 0.01
            }
        );
        assert_eq!((est.window.first, est.window.last), (10, 20));
    }

    #[test]
    fn undefined_window_is_inconclusive() {
        let b = block_means(
            &SequenceSource::constant(1.0),
            1.01,
            2,
            Normalization::Cardinality,
        )
        .unwrap();
        // blocks 1 = {1}, 2 = empty; the window holds only block 2
        let est = tail_band(&b, 0.4, 0.1).unwrap();
        assert_eq!(est.verdict, Verdict::Inconclusive);
        assert!(tail_band(&[][..], 0.5, 0.1).is_err());
        assert!(tail_band(&[1.0][..], 0.0, 0.1).is_err());
        assert!(tail_band(&[1.0][..], 0.5, 0.0).is_err());
    }

    #[test]
    fn theorem1_constant() {
        let cfg = TheoremConfig::new(1 << 16, 0.01);
        let r = check_theorem1(&SequenceSource::constant(0.4), &[1.5, 2.0, 3.0], &cfg).unwrap();
        assert!(r.consistent);
        assert!(r.cesaro.verdict.tends_to(0.4, 1e-12));
        for b in &r.bases {
            assert!(b.verdict.tends_to(0.4, 0.01), "{b:?}");
        }
    }

    #[test]
    fn theorem1_single_base_counterexample() {
        let cfg = TheoremConfig::new(1 << 20, 0.01);
        let r = check_theorem1(&SequenceSource::Counterexample, &[2.0], &cfg).unwrap();
        assert!(r.consistent);
        assert!(matches!(r.cesaro.verdict, Verdict::Oscillating { .. }));
        assert!(r.bases[0].verdict.tends_to(0.0, 1e-12));
        assert!(r.notes.iter().any(|n| n.contains("single base")));
    }

    #[test]
    fn theorem1_counterexample_other_bases_oscillate() {
        let cfg = TheoremConfig::new(1 << 20, 0.01);
        let r = check_theorem1(&SequenceSource::Counterexample, &DEFAULT_BASES, &cfg).unwrap();
        assert!(r.consistent);
        let oscillating: Vec<f64> = r
            .bases
            .iter()
            .filter(|b| matches!(b.verdict, Verdict::Oscillating { .. }))
            .map(|b| b.alpha)
            .collect();
        assert!(oscillating.contains(&1.5), "{oscillating:?}");
    }

    #[test]
    fn theorem1_paper_example() {
        let cfg = TheoremConfig::new(1 << 20, 0.02);
        let src = SequenceSource::indicator(IndicatorSet::PaperExample);
        let r = check_theorem1(&src, &[1.5, 2.0, std::f64::consts::E], &cfg).unwrap();
        assert!(r.consistent, "{:?}", r.notes);
        assert!(r.cesaro.verdict.tends_to(0.0, 0.001));
        for b in &r.bases {
            assert!(b.verdict.tends_to(0.0, 0.02));
        }
    }

    #[test]
    fn theorem1_flags_contradiction() {
        // tol is loose enough for the running means of this density-zero set
        // but too tight for its base-1.2 block means at this horizon.
        let cfg = TheoremConfig {
            n: 1 << 20,
            max_blocks: None,
            tol: 0.0005,
            window_fraction: 0.5,
        };
        let src = SequenceSource::indicator(IndicatorSet::PaperExample);
        let r = check_theorem1(&src, &[1.2], &cfg).unwrap();
        assert!(!r.consistent);
        assert_eq!(r.witness.as_ref().unwrap().alpha, 1.2);
    }

    #[test]
    fn theorem2_examples() {
        let cfg = TheoremConfig::new(1 << 20, 0.01);
        let sparse = SequenceSource::indicator(IndicatorSet::PaperExample);
        let r = check_theorem2(&sparse, 2.0, &cfg).unwrap();
        assert!(r.consistent);
        assert!(r.bases[0].verdict.tends_to(0.0, 0.01));
        assert!(r.cesaro.verdict.tends_to(0.0, 0.01));

        let r = check_theorem2(&SequenceSource::constant(0.3), 2.0, &cfg).unwrap();
        assert!(r.consistent);
        assert!(r.cesaro.verdict.tends_to(0.3, 1e-12));
        assert!(r.bases[0].verdict.tends_to(0.3, 1e-12));

        let a0 = SequenceSource::indicator(IndicatorSet::a_s(0.0).unwrap());
        let r = check_theorem2(&a0, 2.0, &cfg).unwrap();
        assert!(r.consistent);
        assert!(r.bases[0].verdict.tends_to(0.5, 1e-12));
        match r.cesaro.verdict {
            Verdict::Oscillating { low, high } => {
                assert!((low - 0.5).abs() < 0.01 && (high - 2.0 / 3.0).abs() < 0.01);
            }
            v => panic!("expected oscillation, got {v:?}"),
        }
    }

    #[test]
    fn theorem2_rejects_negative_values() {
        let cfg = TheoremConfig::new(100, 0.01);
        match check_theorem2(&SequenceSource::Counterexample, 2.0, &cfg) {
            Err(Error::Negative { index, value }) => assert_eq!((index, value), (1, -1.0)),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn demo_small_and_large() {
        assert!(counterexample_demo(1000).is_err());
        let d = counterexample_demo(1 << 10).unwrap();
        let at_24 = d
            .along_three_times_power
            .iter()
            .find(|s| s.n == 24)
            .unwrap();
        assert_eq!(at_24.mean, 0.25);
        assert_eq!(d.first_block_mean, -1.0);
        assert_eq!(d.max_abs_block_mean, 0.0);

        let d = counterexample_demo(1 << 20).unwrap();
        assert_eq!(d.completed_blocks, 20);
        assert_eq!(d.max_abs_block_mean, 0.0);
        assert!((0.30..=0.34).contains(&d.limsup_estimate));
        // both sampled subsequences approach 1/3 from below
        for s in d
            .along_three_times_power
            .iter()
            .chain(&d.along_run_ends)
            .filter(|s| s.n > 1 << 12)
        {
            assert!((s.mean - 1.0 / 3.0).abs() < 1e-3, "{s:?}");
        }
    }
}
