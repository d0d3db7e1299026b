//! Bounded real sequences indexed from 1, and the generators used by the
//! analyses.
//!
//! A [`SequenceSource`] is a pure mapping `n -> x_n` for `n >= 1`. Sources are
//! immutable once built; file-backed and seeded-random sources keep their
//! values in a shared in-memory table, so cloning is cheap and evaluation is
//! safe from any number of threads.

mod indicator;

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) use indicator::counterexample_value;
pub use indicator::{a_s_member, counterexample_sign, paper_example_member, IndicatorSet, RunList};

use crate::error::{Error, Result};

/// Where the values of a table-backed source came from.
#[derive(Debug, Clone, PartialEq)]
pub enum TableOrigin {
    File(PathBuf),
    /// Uniform draws on `[-bound, bound]`.
    Random {
        seed: u64,
        bound: f64,
    },
}

#[derive(Debug, Clone)]
pub enum SequenceSource {
    Constant(f64),
    /// `1, 0, 1, 0, ...` starting with `x_1 = 1`.
    Alternating,
    /// `+1` on `[2^k, 3·2^(k-1))` for some `k >= 1`, `-1` otherwise.
    Counterexample,
    Indicator(IndicatorSet),
    Table {
        origin: TableOrigin,
        values: Arc<[f64]>,
    },
    /// `x_n - shift`.
    Shifted {
        inner: Box<SequenceSource>,
        shift: f64,
    },
    /// `Σ weight·x_n` over the listed components.
    Linear(Vec<(f64, SequenceSource)>),
}

impl SequenceSource {
    pub fn constant(c: f64) -> Self {
        SequenceSource::Constant(c)
    }

    pub fn indicator(set: IndicatorSet) -> Self {
        SequenceSource::Indicator(set)
    }

    /// Loads a sequence file: one decimal real per line, in index order from
    /// 1. Blank lines and lines starting with `#` are skipped.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        let values = parse_sequence(std::io::BufReader::new(file), path)?;
        Ok(SequenceSource::Table {
            origin: TableOrigin::File(path.to_owned()),
            values: values.into(),
        })
    }

    /// `len` uniform values on `[-bound, bound]`, drawn in index order from a
    /// ChaCha8 stream seeded with `ChaCha8Rng::seed_from_u64(seed)`.
    pub fn random_bounded(seed: u64, bound: f64, len: u64) -> Result<Self> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::param(
                "bound",
                format!("{bound} must be a positive finite real"),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..len).map(|_| rng.random_range(-bound..=bound)).collect();
        Ok(SequenceSource::Table {
            origin: TableOrigin::Random { seed, bound },
            values: values.into(),
        })
    }

    /// The source `x_n - shift`. Its declared bound grows by `|shift|`.
    pub fn shifted(self, shift: f64) -> Self {
        SequenceSource::Shifted {
            inner: Box::new(self),
            shift,
        }
    }

    pub fn eval(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain {
                index: 0,
                limit: self.len(),
            });
        }
        self.eval_positive(n)
    }

    fn eval_positive(&self, n: u64) -> Result<f64> {
        Ok(match self {
            SequenceSource::Constant(c) => *c,
            SequenceSource::Alternating => (n % 2) as f64,
            SequenceSource::Counterexample => counterexample_value(n),
            SequenceSource::Indicator(set) => {
                if set.contains(n) {
                    1.0
                } else {
                    0.0
                }
            }
            SequenceSource::Table { values, .. } => {
                *values.get((n - 1) as usize).ok_or(Error::Domain {
                    index: n,
                    limit: Some(values.len() as u64),
                })?
            }
            SequenceSource::Shifted { inner, shift } => inner.eval_positive(n)? - shift,
            SequenceSource::Linear(parts) => {
                let mut acc = 0.0;
                for (w, src) in parts {
                    acc += w * src.eval_positive(n)?;
                }
                acc
            }
        })
    }

    /// Number of evaluable indices, for finite sources.
    pub fn len(&self) -> Option<u64> {
        match self {
            SequenceSource::Table { values, .. } => Some(values.len() as u64),
            SequenceSource::Shifted { inner, .. } => inner.len(),
            SequenceSource::Linear(parts) => parts.iter().filter_map(|(_, s)| s.len()).min(),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// A bound `θ` with `|x_n| <= θ` for every `n`, when one is known up
    /// front.
    pub fn declared_bound(&self) -> Option<f64> {
        match self {
            SequenceSource::Constant(c) => Some(c.abs()),
            SequenceSource::Alternating
            | SequenceSource::Counterexample
            | SequenceSource::Indicator(_) => Some(1.0),
            SequenceSource::Table { origin, .. } => match origin {
                TableOrigin::File(_) => None,
                TableOrigin::Random { bound, .. } => Some(*bound),
            },
            SequenceSource::Shifted { inner, shift } => {
                inner.declared_bound().map(|t| t + shift.abs())
            }
            SequenceSource::Linear(parts) => parts
                .iter()
                .map(|(w, s)| s.declared_bound().map(|t| w.abs() * t))
                .sum(),
        }
    }

    /// `max_{1<=n<=len} |x_n|`.
    pub fn sup_abs_prefix(&self, len: u64) -> Result<f64> {
        if len == 0 {
            return Err(Error::param("N", "prefix length must be at least 1"));
        }
        let mut sup = 0.0f64;
        for n in 1..=len {
            sup = sup.max(self.eval_positive(n)?.abs());
        }
        Ok(sup)
    }

    /// The bound used by analyses over `[1, len]`: the declared bound when
    /// there is one, otherwise the observed supremum of the prefix.
    pub fn theta(&self, len: u64) -> Result<f64> {
        match self.declared_bound() {
            Some(t) => Ok(t),
            None => self.sup_abs_prefix(len),
        }
    }

    /// Iterates `x_1, ..., x_len`.
    pub fn values(&self, len: u64) -> impl Iterator<Item = Result<f64>> + '_ {
        (1..=len).map(move |n| self.eval_positive(n))
    }

    /// Short generator tag with parameters, used in report metadata.
    pub fn describe(&self) -> String {
        match self {
            SequenceSource::Constant(c) => format!("constant(c={c})"),
            SequenceSource::Alternating => "alternating".into(),
            SequenceSource::Counterexample => "counterexample".into(),
            SequenceSource::Indicator(set) => format!("indicator({})", set.describe()),
            SequenceSource::Table { origin, values } => match origin {
                TableOrigin::File(p) => format!("file(path={},len={})", p.display(), values.len()),
                TableOrigin::Random { seed, bound } => {
                    format!("random(seed={seed},bound={bound},len={})", values.len())
                }
            },
            SequenceSource::Shifted { inner, shift } => {
                format!("shifted({},{shift})", inner.describe())
            }
            SequenceSource::Linear(parts) => {
                let terms: Vec<String> = parts
                    .iter()
                    .map(|(w, s)| format!("{w}*{}", s.describe()))
                    .collect();
                format!("linear({})", terms.join("+"))
            }
        }
    }
}

/// Parses the sequence file format. `origin` is only used in error messages.
pub fn parse_sequence<R: BufRead>(reader: R, origin: &Path) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: origin.to_owned(),
            source,
        })?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let parse_err = |reason: String| Error::Parse {
            path: origin.to_owned(),
            line: i + 1,
            reason,
        };
        let v: f64 = text
            .parse()
            .map_err(|e| parse_err(format!("`{text}` is not a real number ({e})")))?;
        if !v.is_finite() {
            return Err(parse_err(format!("`{text}` is not finite")));
        }
        values.push(v);
    }
    Ok(values)
}

/// Writes `x_1..=x_len` in the sequence file format. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_sequence<W: Write>(src: &SequenceSource, len: u64, mut out: W) -> Result<()> {
    let io = |source| Error::Io {
        path: PathBuf::from("<output>"),
        source,
    };
    writeln!(out, "# {}", src.describe()).map_err(io)?;
    for x in src.values(len) {
        writeln!(out, "{}", x?).map_err(io)?;
    }
    Ok(())
}
