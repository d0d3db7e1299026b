//! Streaming Cesàro means, strong Cesàro means, geometric block means and the
//! dyadic `w1` norm, plus residual checks for the exact identities that link
//! running means to block means.
//!
//! Every accumulator consumes `x_1, x_2, ...` once, in order, and sums with
//! Neumaier compensation.

use std::io::Write;

use serde::Serialize;

use crate::blocks::{validate_alpha, Boundaries, Boundary, GeometricPartition};
use crate::compensated::NeumaierSum;
use crate::error::{Error, Result};
use crate::export::{csv_f64, io_err};
use crate::seqcore::SequenceSource;

/// How a block sum is turned into a block mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Divide by the number of integers in the block, `w_j`.
    #[default]
    Cardinality,
    /// Divide by the real length `alpha^j - alpha^(j-1)`.
    RealLength,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Cardinality => "cardinality",
            Normalization::RealLength => "real-length",
        }
    }
}

/// Running mean `a_n = (1/n) Σ_{i<=n} x_i`.
#[derive(Debug, Clone, Default)]
pub struct CesaroAccumulator {
    sum: NeumaierSum,
    count: u64,
}

impl CesaroAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the next term and returns the updated mean.
    #[inline]
    pub fn push(&mut self, x: f64) -> f64 {
        self.sum.add(x);
        self.count += 1;
        self.sum.value() / self.count as f64
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn sum(&self) -> f64 {
        self.sum.value()
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum() / self.count as f64)
    }
}

/// Means `a_1, ..., a_N` of one streamed prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSeries {
    means: Vec<f64>,
    total: f64,
}

impl MeanSeries {
    pub(crate) fn from_parts(means: Vec<f64>, total: f64) -> Self {
        Self { means, total }
    }

    pub fn len(&self) -> u64 {
        self.means.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// `a_n`, 1-based.
    pub fn get(&self, n: u64) -> Option<f64> {
        n.checked_sub(1)
            .and_then(|i| self.means.get(i as usize).copied())
    }

    pub fn last(&self) -> Option<f64> {
        self.means.last().copied()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.means
    }

    /// Compensated sum of all streamed terms.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// `n · a_n`, with `0 · a_0 := 0`.
    pub fn partial_sum(&self, n: u64) -> Option<f64> {
        if n == 0 {
            return Some(0.0);
        }
        self.get(n).map(|a| a * n as f64)
    }

    pub fn write_csv<W: Write>(&self, mut out: W, value_column: &str) -> Result<()> {
        writeln!(out, "n,{value_column}").map_err(io_err)?;
        for (n, a) in (1u64..).zip(&self.means) {
            writeln!(out, "{n},{}", csv_f64(*a)).map_err(io_err)?;
        }
        Ok(())
    }
}

fn stream_means<F>(src: &SequenceSource, len: u64, map: F) -> Result<MeanSeries>
where
    F: Fn(f64) -> f64,
{
    if len == 0 {
        return Err(Error::param("N", "must be at least 1"));
    }
    let mut acc = CesaroAccumulator::new();
    let mut means = Vec::with_capacity(len as usize);
    for x in src.values(len) {
        means.push(acc.push(map(x?)));
    }
    Ok(MeanSeries {
        means,
        total: acc.sum(),
    })
}

/// `a_n = (1/n) Σ_{i<=n} x_i` for `n = 1..=len`, in one pass.
pub fn cesaro_means(src: &SequenceSource, len: u64) -> Result<MeanSeries> {
    stream_means(src, len, |x| x)
}

/// `(1/n) Σ_{i<=n} |x_i - ell|` for `n = 1..=len`.
pub fn strong_cesaro_means(src: &SequenceSource, ell: f64, len: u64) -> Result<MeanSeries> {
    stream_means(src, len, |x| (x - ell).abs())
}

/// One completed block of a block-mean series. `value` is `None` exactly when
/// the block is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockRecord {
    pub j: u64,
    pub lo: u64,
    pub hi: u64,
    pub weight: u64,
    pub sum: f64,
    pub value: Option<f64>,
}

impl BlockRecord {
    pub fn defined(&self) -> bool {
        self.value.is_some()
    }
}

/// Streaming block sums over the geometric partition in base `alpha`.
///
/// Records are emitted as soon as the last index of a block has been pushed;
/// empty blocks are emitted (undefined) as they are passed over.
#[derive(Debug, Clone)]
pub struct BlockAccumulator {
    mode: Normalization,
    cursor: Boundaries,
    lo: Boundary,
    hi: Boundary,
    sum: NeumaierSum,
    next_index: u64,
    max_blocks: Option<u64>,
    records: Vec<BlockRecord>,
}

impl BlockAccumulator {
    /// `max_blocks` caps the number of recorded blocks; later terms are
    /// ignored.
    pub fn new(alpha: f64, mode: Normalization, max_blocks: Option<u64>) -> Result<Self> {
        let mut cursor = Boundaries::new(alpha)?;
        let range = || Error::Range {
            what: format!("block 1 for alpha = {alpha}"),
        };
        let lo = cursor.next().ok_or_else(range)?;
        let hi = cursor.next().ok_or_else(range)?;
        Ok(Self {
            mode,
            cursor,
            lo,
            hi,
            sum: NeumaierSum::new(),
            next_index: 1,
            max_blocks,
            records: Vec::new(),
        })
    }

    fn full(&self) -> bool {
        self.max_blocks
            .is_some_and(|m| self.records.len() as u64 >= m)
    }

    fn close_current(&mut self) -> Result<()> {
        let weight = self.hi.iota - self.lo.iota;
        let sum = self.sum.value();
        let value = (weight > 0).then(|| match self.mode {
            Normalization::Cardinality => sum / weight as f64,
            Normalization::RealLength => sum / (self.hi.power - self.lo.power),
        });
        self.records.push(BlockRecord {
            j: self.lo.j,
            lo: self.lo.iota,
            hi: self.hi.iota,
            weight,
            sum,
            value,
        });
        self.sum = NeumaierSum::new();
        if self.full() {
            return Ok(());
        }
        let next = self.cursor.next().ok_or_else(|| Error::Range {
            what: format!("block {} boundary", self.hi.j),
        })?;
        self.lo = self.hi;
        self.hi = next;
        Ok(())
    }

    /// Adds the term with the next index.
    pub fn push(&mut self, x: f64) -> Result<()> {
        if self.full() {
            self.next_index += 1;
            return Ok(());
        }
        self.sum.add(x);
        self.next_index += 1;
        while !self.full() && self.next_index >= self.hi.iota {
            self.close_current()?;
        }
        Ok(())
    }

    pub fn records(&self) -> &[BlockRecord] {
        &self.records
    }

    /// Index `j` and partial sum of the block currently being filled.
    pub fn open_block(&self) -> (u64, f64) {
        (self.lo.j, self.sum.value())
    }

    pub fn into_series(self, alpha: f64) -> BlockMeanSeries {
        BlockMeanSeries {
            alpha,
            mode: self.mode,
            records: self.records,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockMeanSeries {
    pub alpha: f64,
    pub mode: Normalization,
    pub records: Vec<BlockRecord>,
}

impl BlockMeanSeries {
    pub fn get(&self, j: u64) -> Option<&BlockRecord> {
        j.checked_sub(1).and_then(|i| self.records.get(i as usize))
    }

    pub fn defined_values(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.records
            .iter()
            .filter_map(|r| r.value.map(|v| (r.j, v)))
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "j,w_j,b_j,defined").map_err(io_err)?;
        for r in &self.records {
            let value = r.value.map(csv_f64).unwrap_or_default();
            writeln!(out, "{},{},{},{}", r.j, r.weight, value, r.defined()).map_err(io_err)?;
        }
        Ok(())
    }
}

/// Block means `b_1..=b_count` in base `alpha`, streaming `x_1, ..., x_(ι_(count+1) - 1)`.
pub fn block_means(
    src: &SequenceSource,
    alpha: f64,
    count: u64,
    mode: Normalization,
) -> Result<BlockMeanSeries> {
    if count == 0 {
        return Err(Error::param("J", "must be at least 1"));
    }
    let end = GeometricPartition::new(alpha)?.iota(count + 1)?;
    let mut acc = BlockAccumulator::new(alpha, mode, Some(count))?;
    for x in src.values(end - 1) {
        acc.push(x?)?;
    }
    debug_assert_eq!(acc.records().len() as u64, count);
    Ok(acc.into_series(alpha))
}

/// Mean of the single block `j`, summing only that block.
pub fn block_mean(
    src: &SequenceSource,
    alpha: f64,
    j: u64,
    mode: Normalization,
) -> Result<BlockRecord> {
    let p = GeometricPartition::new(alpha)?;
    let b = p.block(j)?;
    let mut sum = NeumaierSum::new();
    for n in b.lo..b.hi {
        sum.add(src.eval(n)?);
    }
    let sum = sum.value();
    let value = if b.is_empty() {
        None
    } else {
        Some(match mode {
            Normalization::Cardinality => sum / b.weight() as f64,
            Normalization::RealLength => sum / p.real_length(j)?,
        })
    };
    Ok(BlockRecord {
        j,
        lo: b.lo,
        hi: b.hi,
        weight: b.weight(),
        sum,
        value,
    })
}

/// Running `sup_m (1/2^m) Σ_{2^m <= k < 2^(m+1)} |x_k|` over completed dyadic
/// blocks, `m >= 1`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct W1NormState {
    pub value: f64,
    pub completed: u32,
    /// Average of `|x_k|` over each completed block, in order of `m`.
    pub block_averages: Vec<f64>,
    #[serde(skip)]
    next_index: u64,
    #[serde(skip)]
    sum: NeumaierSum,
}

impl W1NormState {
    pub fn new() -> Self {
        Self {
            next_index: 1,
            ..Self::default()
        }
    }

    pub fn push(&mut self, x: f64) {
        let n = self.next_index;
        self.next_index += 1;
        if n < 2 {
            return;
        }
        self.sum.add(x.abs());
        if self.next_index.is_power_of_two() {
            let m = self.completed + 1;
            let avg = self.sum.value() / (1u64 << m) as f64;
            self.block_averages.push(avg);
            self.value = self.value.max(avg);
            self.completed = m;
            self.sum = NeumaierSum::new();
        }
    }
}

/// The `w1` norm restricted to dyadic blocks `m = 1..=max_level`.
pub fn w1_norm_partial(src: &SequenceSource, max_level: u32) -> Result<W1NormState> {
    if max_level == 0 {
        return Err(Error::param("M", "must be at least 1"));
    }
    if max_level > 62 {
        return Err(Error::Range {
            what: format!("dyadic level {max_level}"),
        });
    }
    let mut state = W1NormState::new();
    for x in src.values((1u64 << (max_level + 1)) - 1) {
        state.push(x?);
    }
    Ok(state)
}

/// Default tolerance for the exact identities: `1e-9 · n · θ`.
pub fn identity_tolerance(n: u64, theta: f64) -> f64 {
    1e-9 * n as f64 * theta
}

/// `|n·a_n - (Σ_{j<k} w_j b_j + Σ_{i ∈ I_k, i <= n} x_i)|` with `k` the block
/// containing `n` and `b_j` in cardinality mode. Zero in exact arithmetic.
pub fn decomposition_residual(src: &SequenceSource, alpha: f64, n: u64) -> Result<f64> {
    validate_alpha(alpha)?;
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let k = GeometricPartition::new(alpha)?.block_index_of(n)?;
    let mut ces = CesaroAccumulator::new();
    let mut blocks = BlockAccumulator::new(alpha, Normalization::Cardinality, Some(k))?;
    for x in src.values(n) {
        let x = x?;
        ces.push(x);
        blocks.push(x)?;
    }
    let mut rhs = NeumaierSum::new();
    let mut tail_done = false;
    for r in blocks.records() {
        if r.j < k {
            if let Some(b) = r.value {
                rhs.add(r.weight as f64 * b);
            }
        } else if r.j == k {
            rhs.add(r.sum);
            tail_done = true;
        }
    }
    if !tail_done {
        let (open_j, open_sum) = blocks.open_block();
        debug_assert_eq!(open_j, k);
        rhs.add(open_sum);
    }
    Ok((ces.sum() - rhs.value()).abs())
}

/// `|(ι_(k+1) - ι_k)·b_k - (a_(ι_(k+1)-1)·(ι_(k+1)-1) - a_(ι_k - 1)·(ι_k - 1))|`.
/// Zero in exact arithmetic; not applicable to empty blocks.
pub fn telescoping_residual(src: &SequenceSource, alpha: f64, k: u64) -> Result<f64> {
    let p = GeometricPartition::new(alpha)?;
    let block = p.block(k)?;
    if block.is_empty() {
        return Err(Error::NotApplicable(format!(
            "block {k} is empty for alpha = {alpha}"
        )));
    }
    let means = cesaro_means(src, block.hi - 1)?;
    let b_k = block_means(src, alpha, k, Normalization::Cardinality)?
        .get(k)
        .and_then(|r| r.value)
        .expect("nonempty block has a mean");
    let lhs = block.weight() as f64 * b_k;
    let rhs = means.partial_sum(block.hi - 1).unwrap() - means.partial_sum(block.lo - 1).unwrap();
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::IndicatorSet;
    use proptest::prelude::*;

    fn naive_prefix_sums(src: &SequenceSource, len: u64) -> Vec<f64> {
        let mut out = vec![0.0];
        let mut s = 0.0;
        for n in 1..=len {
            s += src.eval(n).unwrap();
            out.push(s);
        }
        out
    }

    #[test]
    fn cesaro_examples() {
        let c = cesaro_means(&SequenceSource::constant(2.5), 1000).unwrap();
        assert!(c.as_slice().iter().all(|&a| a == 2.5));

        let alt = cesaro_means(&SequenceSource::Alternating, 1000).unwrap();
        for m in 1..=500 {
            assert_eq!(alt.get(2 * m).unwrap(), 0.5);
        }

        // x_1..x_12 = -1, +1, -1, -1, +1, -1, -1, -1, +1, +1, +1, +1 (sum 2)
        let ce = cesaro_means(&SequenceSource::Counterexample, 24).unwrap();
        let brute: f64 = (1..=12).map(crate::seqcore::counterexample_value).sum();
        assert_eq!(brute, 2.0);
        assert!((ce.get(12).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(ce.get(24).unwrap(), 0.25);
        assert!(cesaro_means(&SequenceSource::Alternating, 0).is_err());
    }

    #[test]
    fn strong_cesaro_examples() {
        let s = strong_cesaro_means(&SequenceSource::constant(-1.25), -1.25, 100).unwrap();
        assert!(s.as_slice().iter().all(|&v| v == 0.0));
        let s = strong_cesaro_means(&SequenceSource::Counterexample, 0.0, 1000).unwrap();
        assert!(s.as_slice().iter().all(|&v| v == 1.0));

        let n = 1u64 << 16;
        let src = SequenceSource::indicator(IndicatorSet::PaperExample);
        let s = strong_cesaro_means(&src, 0.0, n).unwrap();
        let count = (1..=n)
            .filter(|&i| crate::seqcore::paper_example_member(i).unwrap())
            .count();
        assert_eq!(count, 120);
        assert_eq!(s.last().unwrap(), 120.0 / n as f64);
        assert!(s.last().unwrap() < 0.01);
    }

    #[test]
    fn compensated_means_match_reference() {
        let src = SequenceSource::random_bounded(3, 1.0, 200_000).unwrap();
        let series = cesaro_means(&src, 200_000).unwrap();
        let naive = naive_prefix_sums(&src, 200_000);
        for n in (1..=200_000u64).step_by(997) {
            let got = series.partial_sum(n).unwrap();
            let want = naive[n as usize];
            assert!((got - want).abs() <= 1e-12 * n as f64, "n = {n}");
        }
    }

    #[test]
    fn w1_norm_examples() {
        for m in [1, 5, 12] {
            assert_eq!(
                w1_norm_partial(&SequenceSource::constant(1.0), m)
                    .unwrap()
                    .value,
                1.0
            );
            assert_eq!(
                w1_norm_partial(&SequenceSource::constant(0.0), m)
                    .unwrap()
                    .value,
                0.0
            );
            assert_eq!(
                w1_norm_partial(&SequenceSource::Counterexample, m)
                    .unwrap()
                    .value,
                1.0
            );
        }
        let sparse = SequenceSource::indicator(IndicatorSet::PaperExample);
        let st = w1_norm_partial(&sparse, 10).unwrap();
        assert_eq!(st.completed, 10);
        for (m, avg) in (1..).zip(&st.block_averages) {
            assert_eq!(*avg, m as f64 / (1u64 << m) as f64);
        }
        assert_eq!(st.value, 0.5);
        assert!(w1_norm_partial(&sparse, 0).is_err());
    }

    #[test]
    fn block_mean_examples() {
        let s = block_means(
            &SequenceSource::Counterexample,
            2.0,
            20,
            Normalization::Cardinality,
        )
        .unwrap();
        assert_eq!(s.records.len(), 20);
        assert_eq!(s.get(1).unwrap().value, Some(-1.0));
        for r in &s.records[1..] {
            assert_eq!(r.value, Some(0.0), "j = {}", r.j);
        }

        let half = SequenceSource::indicator(IndicatorSet::a_s(0.5).unwrap());
        let s = block_means(&half, 2.0, 18, Normalization::Cardinality).unwrap();
        for r in &s.records[1..] {
            assert_eq!(r.value, Some(0.5));
        }

        for alpha in [1.1, 1.5, 2.0, 3.0] {
            let count = GeometricPartition::new(alpha)
                .unwrap()
                .block_index_of(100_000)
                .unwrap();
            let s = block_means(
                &SequenceSource::constant(-0.75),
                alpha,
                count,
                Normalization::Cardinality,
            )
            .unwrap();
            for r in &s.records {
                assert_eq!(r.defined(), r.weight > 0);
                if let Some(v) = r.value {
                    assert!((v + 0.75).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn empty_blocks_are_undefined() {
        let s = block_means(
            &SequenceSource::constant(1.0),
            1.1,
            10,
            Normalization::Cardinality,
        )
        .unwrap();
        let r2 = s.get(2).unwrap();
        assert_eq!((r2.lo, r2.hi, r2.weight, r2.value), (2, 2, 0, None));
        let real = block_means(
            &SequenceSource::constant(1.0),
            1.1,
            10,
            Normalization::RealLength,
        )
        .unwrap();
        assert_eq!(real.get(2).unwrap().value, None);
    }

    #[test]
    fn real_length_mode() {
        let s = block_means(
            &SequenceSource::constant(1.0),
            3.0,
            5,
            Normalization::RealLength,
        )
        .unwrap();
        // [3, 9) has 6 integers and real length 6.
        assert_eq!(s.get(2).unwrap().value, Some(1.0));
        // [1, 3) has 2 integers but real length 2 as well.
        assert_eq!(s.get(1).unwrap().value, Some(1.0));
        let s = block_means(
            &SequenceSource::constant(1.0),
            1.5,
            5,
            Normalization::RealLength,
        )
        .unwrap();
        // block 5 = {6, 7}, real length 1.5^5 - 1.5^4 = 2.53125
        assert!((s.get(5).unwrap().value.unwrap() - 2.0 / 2.53125).abs() < 1e-12);
    }

    #[test]
    fn normalization_bridge() {
        for alpha in [1.2, 1.5, 2.0, std::f64::consts::E, 3.0, 10.0] {
            let p = GeometricPartition::new(alpha).unwrap();
            for j in 1..p.horizon() {
                if p.power(j).unwrap() > 1e4 {
                    let ratio = p.weight(j).unwrap() as f64 / p.real_length(j).unwrap();
                    assert!((ratio - 1.0).abs() < 1e-3, "alpha {alpha}, j {j}");
                }
            }
        }
    }

    #[test]
    fn single_block_matches_streamed_series() {
        let src = SequenceSource::random_bounded(11, 1.0, 100_000).unwrap();
        for alpha in [1.2, 2.0, std::f64::consts::E] {
            let count = GeometricPartition::new(alpha)
                .unwrap()
                .block_index_of(100_000)
                .unwrap()
                - 1;
            for mode in [Normalization::Cardinality, Normalization::RealLength] {
                let series = block_means(&src, alpha, count, mode).unwrap();
                for r in &series.records {
                    let one = block_mean(&src, alpha, r.j, mode).unwrap();
                    assert_eq!(one.value, r.value);
                }
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let c = SequenceSource::constant(0.3);
        assert!(decomposition_residual(&c, 2.0, 100).unwrap() <= 1e-9);
        let r = decomposition_residual(&SequenceSource::Counterexample, 1.5, 100_000).unwrap();
        assert!(r <= 1e-9 * 1e5);
        let rnd = SequenceSource::random_bounded(7, 1.0, 20_000).unwrap();
        let r = decomposition_residual(&rnd, 3.0, 12_345).unwrap();
        assert!(r <= 1e-9 * 12_345.0);
        // n at the very end of a block and at the start of one
        for n in [7, 8, 15, 16, 1, 2] {
            assert!(decomposition_residual(&rnd, 2.0, n).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn telescoping_examples() {
        let c = SequenceSource::constant(-4.0);
        assert!(telescoping_residual(&c, 2.0, 10).unwrap() <= identity_tolerance(1 << 10, 4.0));
        let r = telescoping_residual(&SequenceSource::Counterexample, 2.0, 12).unwrap();
        assert!(r <= identity_tolerance(1 << 12, 1.0));
        let rnd = SequenceSource::random_bounded(1, 2.0, 10_000).unwrap();
        let hi = GeometricPartition::new(1.5).unwrap().iota(21).unwrap();
        let r = telescoping_residual(&rnd, 1.5, 20).unwrap();
        assert!(r <= identity_tolerance(hi, 2.0));
        assert!(matches!(
            telescoping_residual(&c, 1.1, 2),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn nonnegative_sources_have_identical_strong_means() {
        let sources = [
            SequenceSource::indicator(IndicatorSet::PaperExample),
            SequenceSource::Counterexample.shifted(-1.0),
            SequenceSource::Alternating,
        ];
        for src in &sources {
            let a = cesaro_means(src, 50_000).unwrap();
            let s = strong_cesaro_means(src, 0.0, 50_000).unwrap();
            assert_eq!(a, s);
        }
    }

    proptest! {
        #[test]
        fn block_means_stay_within_theta(seed in any::<u64>(), bound in 0.1f64..5.0, alpha in 1.05f64..6.0) {
            let src = SequenceSource::random_bounded(seed, bound, 5000).unwrap();
            let count = (GeometricPartition::new(alpha).unwrap().block_index_of(4000).unwrap() - 1).max(1);
            let s = block_means(&src, alpha, count, Normalization::Cardinality).unwrap();
            for (_, v) in s.defined_values() {
                prop_assert!(v.abs() <= bound * (1.0 + 1e-12));
            }
        }

        #[test]
        fn w1_norm_is_monotone(seed in any::<u64>(), m in 1u32..10) {
            let src = SequenceSource::random_bounded(seed, 1.0, 1 << 12).unwrap();
            let a = w1_norm_partial(&src, m).unwrap().value;
            let b = w1_norm_partial(&src, m + 1).unwrap().value;
            prop_assert!(a <= b);
        }

        #[test]
        fn means_are_bounded_by_prefix_sup(seed in any::<u64>(), len in 1u64..3000) {
            let src = SequenceSource::random_bounded(seed, 2.0, 3000).unwrap();
            let m = cesaro_means(&src, len).unwrap();
            let mut sup = 0.0f64;
            for n in 1..=len {
                sup = sup.max(src.eval(n).unwrap().abs());
                prop_assert!(m.get(n).unwrap().abs() <= sup * (1.0 + 1e-12));
            }
        }

        #[test]
        fn decomposition_holds_for_random_inputs(seed in any::<u64>(), alpha in 1.05f64..12.0, n in 1u64..20_000) {
            let src = SequenceSource::random_bounded(seed, 1.0, 20_000).unwrap();
            prop_assert!(decomposition_residual(&src, alpha, n).unwrap() <= identity_tolerance(n, 1.0));
        }
    }
}
