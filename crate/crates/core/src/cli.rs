//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a parameter error, 2 on a runtime error
//! (I/O, parse failures, out-of-range evaluation). Relative `--output` and
//! `--emit` paths are resolved against `$CESARO_OUTPUT_DIR` when it is set.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{self, TheoremConfig, TheoremReport, Verdict, DEFAULT_BASES};
use crate::blocks::{validate_alpha, GeometricPartition};
use crate::density::{self, DEFAULT_WINDOW_FRACTION};
use crate::error::{Error, Result};
use crate::export::{self, csv_f64, io_err, Document};
use crate::seqcore::{self, IndicatorSet, SequenceSource};
use crate::summability::{self, Normalization};

/// Environment variable naming the directory for relative output paths.
pub const OUTPUT_DIR_ENV: &str = "CESARO_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "cesaro",
    version,
    about = "Cesàro means, geometric block means and asymptotic densities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a prefix of a sequence in the sequence file format.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        n: u64,
        /// Destination file (standard output when omitted).
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Running Cesàro means a_n.
    Means {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Running strong Cesàro means (1/n) Σ |x_i - ell|.
    StrongMeans {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ell: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Table of geometric blocks.
    Blocks {
        #[arg(long, value_parser = parse_base)]
        alpha: f64,
        #[arg(long)]
        j: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Block means b_j over the geometric partition.
    BlockMeans {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, value_parser = parse_base)]
        alpha: f64,
        #[arg(long)]
        j: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Cardinality)]
        mode: ModeArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dyadic w1 norm over levels 1..=M.
    W1norm {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Upper/lower density band of an indicator generator.
    Density {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_WINDOW_FRACTION)]
        window: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Multi-base equivalence check.
    CheckThm1 {
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        check: CheckArgs,
        /// Comma-separated bases (default: 1.2,1.5,2,e,3,10).
        #[arg(long, value_delimiter = ',', value_parser = parse_base)]
        bases: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Single-base check for nonnegative sequences.
    CheckThm2 {
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long, value_parser = parse_base, default_value = "2")]
        alpha: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Block means and running means of the ±1 counterexample.
    DemoCounterexample {
        #[arg(long, default_value_t = 1 << 20)]
        n: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenName {
    Constant,
    Alternating,
    Counterexample,
    #[value(name = "a_s")]
    ASet,
    PaperExample,
    File,
    Random,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Generator name.
    #[arg(long = "gen", value_enum)]
    gen: GenName,
    /// Value of the constant generator.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c: f64,
    /// Parameter of the a_s generator, in [0, 1].
    #[arg(long)]
    s: Option<f64>,
    /// Sequence file for the file generator.
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    bound: f64,
    /// Subtract this value from every term.
    #[arg(long, allow_negative_numbers = true)]
    shift: Option<f64>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 1 << 20)]
    n: u64,
    /// Cap on the number of blocks per base.
    #[arg(long)]
    j: Option<u64>,
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_WINDOW_FRACTION)]
    window: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Cardinality,
    RealLength,
}

impl From<ModeArg> for Normalization {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Cardinality => Normalization::Cardinality,
            ModeArg::RealLength => Normalization::RealLength,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (standard output when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Omit the CSV header row.
    #[arg(long)]
    no_header: bool,
}

fn parse_base(s: &str) -> std::result::Result<f64, String> {
    let v = match s.trim() {
        "e" => std::f64::consts::E,
        t => t
            .parse::<f64>()
            .map_err(|e| format!("`{t}` is not a real number ({e})"))?,
    };
    validate_alpha(v).map_err(|_| format!("base {v} must be greater than 1"))?;
    Ok(v)
}

impl GenArgs {
    /// Builds the source; `len` sizes the random generator.
    fn build(&self, len: u64) -> Result<SequenceSource> {
        let src = match self.gen {
            GenName::Constant => SequenceSource::constant(self.c),
            GenName::Alternating => SequenceSource::Alternating,
            GenName::Counterexample => SequenceSource::Counterexample,
            GenName::ASet => {
                let s = self
                    .s
                    .ok_or_else(|| Error::param("s", "required by --gen a_s"))?;
                SequenceSource::indicator(IndicatorSet::a_s(s)?)
            }
            GenName::PaperExample => SequenceSource::indicator(IndicatorSet::PaperExample),
            GenName::File => {
                let path = self
                    .path
                    .as_ref()
                    .ok_or_else(|| Error::param("path", "required by --gen file"))?;
                SequenceSource::from_file(path)?
            }
            GenName::Random => SequenceSource::random_bounded(self.seed, self.bound, len)?,
        };
        Ok(match self.shift {
            Some(l) => src.shifted(l),
            None => src,
        })
    }

    fn indicator_set(&self) -> Result<IndicatorSet> {
        if self.shift.is_some() {
            return Err(Error::param(
                "shift",
                "density requires an unshifted indicator generator",
            ));
        }
        match self.gen {
            GenName::ASet => {
                let s = self
                    .s
                    .ok_or_else(|| Error::param("s", "required by --gen a_s"))?;
                IndicatorSet::a_s(s)
            }
            GenName::PaperExample => Ok(IndicatorSet::PaperExample),
            GenName::Alternating => IndicatorSet::residue(2, 1),
            _ => Err(Error::param(
                "gen",
                "density needs an indicator generator (a_s, paper-example, alternating)",
            )),
        }
    }
}

fn flag_for(name: &str) -> String {
    match name {
        "N" => "--n".into(),
        "J" => "--j".into(),
        "M" => "--m".into(),
        "window_fraction" => "--window".into(),
        "alpha" | "bases" => "--alpha/--bases".into(),
        other => format!("--{other}"),
    }
}

fn report_error(err: &Error, stderr: &mut dyn Write) -> i32 {
    let _ = match err {
        Error::Parameter { name, reason } => {
            writeln!(
                stderr,
                "error: invalid value for {}: {reason}",
                flag_for(name)
            )
        }
        Error::Negative { .. } => writeln!(stderr, "error: invalid value for --gen: {err}"),
        _ => writeln!(stderr, "error: {err}"),
    };
    if err.is_parameter_error() {
        1
    } else {
        2
    }
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_owned(),
    }
}

fn deliver(bytes: &[u8], dest: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match dest {
        Some(p) => {
            let p = resolve(p);
            std::fs::write(&p, bytes).map_err(|source| Error::Io { path: p, source })
        }
        None => stdout.write_all(bytes).map_err(io_err),
    }
}

/// Drops the first line of a CSV buffer.
fn strip_header(buf: Vec<u8>) -> Vec<u8> {
    match buf.iter().position(|&b| b == b'\n') {
        Some(i) => buf[i + 1..].to_vec(),
        None => Vec::new(),
    }
}

fn finish(out: &OutArgs, buf: Vec<u8>, stdout: &mut dyn Write) -> Result<()> {
    let buf = if out.format == Format::Csv && out.no_header {
        strip_header(buf)
    } else {
        buf
    };
    deliver(&buf, out.output.as_deref(), stdout)
}

fn json_bytes<T: Serialize>(schema: &'static str, body: &T) -> Vec<u8> {
    let mut s = Document::new(schema, body).to_json();
    s.push('\n');
    s.into_bytes()
}

#[derive(Serialize)]
struct MeanSeriesDoc<'a> {
    generator: String,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<f64>,
    #[serde(rename = "N")]
    n: u64,
    series: &'a [f64],
}

#[derive(Serialize)]
struct BlockTableDoc<'a> {
    alpha: f64,
    blocks: &'a [crate::blocks::Block],
}

#[derive(Serialize)]
struct BlockSeriesDoc<'a> {
    generator: String,
    alpha: f64,
    mode: &'static str,
    #[serde(rename = "J")]
    j: u64,
    #[serde(rename = "N")]
    n: u64,
    records: &'a [summability::BlockRecord],
}

#[derive(Serialize)]
struct W1Doc<'a> {
    generator: String,
    #[serde(rename = "M")]
    m: u32,
    norm: f64,
    block_averages: &'a [f64],
}

#[derive(Serialize)]
struct DensityDoc<'a> {
    generator: String,
    window_fraction: f64,
    #[serde(flatten)]
    report: &'a density::DensityReport,
}

fn verdict_cells(v: &Verdict) -> (&'static str, String) {
    match v {
        Verdict::Converged { value, .. } => ("converged", csv_f64(*value)),
        Verdict::Inconclusive => ("inconclusive", String::new()),
        Verdict::Oscillating { .. } => ("oscillating", String::new()),
    }
}

fn theorem_csv(r: &TheoremReport) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let opt = |v: f64| {
        if v.is_nan() {
            String::new()
        } else {
            csv_f64(v)
        }
    };
    writeln!(
        buf,
        "series,alpha,completed,tail_min,tail_max,verdict,value,consistent"
    )
    .map_err(io_err)?;
    let (verdict, value) = verdict_cells(&r.cesaro.verdict);
    writeln!(
        buf,
        "cesaro,,{},{},{},{verdict},{value},{}",
        r.n,
        opt(r.cesaro.tail_min),
        opt(r.cesaro.tail_max),
        r.consistent
    )
    .map_err(io_err)?;
    for b in &r.bases {
        let (verdict, value) = verdict_cells(&b.verdict);
        writeln!(
            buf,
            "blocks,{},{},{},{},{verdict},{value},{}",
            csv_f64(b.alpha),
            b.completed_blocks,
            opt(b.band.tail_min),
            opt(b.band.tail_max),
            r.consistent
        )
        .map_err(io_err)?;
    }
    Ok(buf)
}

fn check_config(c: &CheckArgs) -> TheoremConfig {
    TheoremConfig {
        n: c.n,
        max_blocks: c.j,
        tol: c.tol,
        window_fraction: c.window,
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Gen { gen, n, emit } => {
            if n == 0 {
                return Err(Error::param("N", "must be at least 1"));
            }
            let src = gen.build(n)?;
            let mut buf = Vec::new();
            seqcore::write_sequence(&src, n, &mut buf)?;
            deliver(&buf, emit.as_deref(), stdout)
        }
        Command::Means { gen, n, out } => {
            let src = gen.build(n)?;
            let series = summability::cesaro_means(&src, n)?;
            let buf = match out.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    series.write_csv(&mut buf, "a_n")?;
                    buf
                }
                Format::Json => json_bytes(
                    export::MEAN_SERIES_SCHEMA,
                    &MeanSeriesDoc {
                        generator: src.describe(),
                        kind: "cesaro",
                        ell: None,
                        n,
                        series: series.as_slice(),
                    },
                ),
            };
            finish(&out, buf, stdout)
        }
        Command::StrongMeans { gen, n, ell, out } => {
            let src = gen.build(n)?;
            let series = summability::strong_cesaro_means(&src, ell, n)?;
            let buf = match out.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    series.write_csv(&mut buf, "strong_mean")?;
                    buf
                }
                Format::Json => json_bytes(
                    export::MEAN_SERIES_SCHEMA,
                    &MeanSeriesDoc {
                        generator: src.describe(),
                        kind: "strong-cesaro",
                        ell: Some(ell),
                        n,
                        series: series.as_slice(),
                    },
                ),
            };
            finish(&out, buf, stdout)
        }
        Command::Blocks { alpha, j, out } => {
            if j == 0 {
                return Err(Error::param("J", "must be at least 1"));
            }
            let blocks = GeometricPartition::new(alpha)?.blocks(j)?;
            let buf = match out.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    writeln!(buf, "j,lo,hi,weight").map_err(io_err)?;
                    for b in &blocks {
                        writeln!(buf, "{},{},{},{}", b.j, b.lo, b.hi, b.weight())
                            .map_err(io_err)?;
                    }
                    buf
                }
                Format::Json => json_bytes(
                    export::BLOCK_TABLE_SCHEMA,
                    &BlockTableDoc {
                        alpha,
                        blocks: &blocks,
                    },
                ),
            };
            finish(&out, buf, stdout)
        }
        Command::BlockMeans {
            gen,
            alpha,
            j,
            mode,
            out,
        } => {
            if j == 0 {
                return Err(Error::param("J", "must be at least 1"));
            }
            let end = GeometricPartition::new(alpha)?.iota(j + 1)? - 1;
            let src = gen.build(end)?;
            let series = summability::block_means(&src, alpha, j, mode.into())?;
            let buf = match out.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    series.write_csv(&mut buf)?;
                    buf
                }
                Format::Json => json_bytes(
                    export::BLOCK_SERIES_SCHEMA,
                    &BlockSeriesDoc {
                        generator: src.describe(),
                        alpha,
                        mode: series.mode.as_str(),
                        j,
                        n: end,
                        records: &series.records,
                    },
                ),
            };
            finish(&out, buf, stdout)
        }
        Command::W1norm { gen, m, out } => {
            let len = if (1..=62).contains(&m) {
                (1u64 << (m + 1)) - 1
            } else {
                1
            };
            let src = gen.build(len)?;
            let state = summability::w1_norm_partial(&src, m)?;
            let buf = match out.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    writeln!(buf, "m,block_average,norm").map_err(io_err)?;
                    let mut sup = 0.0f64;
                    for (level, avg) in (1..).zip(&state.block_averages) {
                        sup = sup.max(*avg);
                        writeln!(buf, "{level},{},{}", csv_f64(*avg), csv_f64(sup))
                            .map_err(io_err)?;
                    }
                    buf
                }
                Format::Json => json_bytes(
                    export::W1_NORM_SCHEMA,
                    &W1Doc {
                        generator: src.describe(),
                        m,
                        norm: state.value,
                        block_averages: &state.block_averages,
                    },
                ),
            };
            finish(&out, buf, stdout)
        }
        Command::Density {
            gen,
            n,
            window,
            out,
        } => {
            let set = gen.indicator_set()?;
            let report = density::density_band(&set, n, window)?;
            let buf = match out.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    report.write_csv(&mut buf)?;
                    buf
                }
                Format::Json => json_bytes(
                    export::DENSITY_SCHEMA,
                    &DensityDoc {
                        generator: set.describe(),
                        window_fraction: window,
                        report: &report,
                    },
                ),
            };
            finish(&out, buf, stdout)
        }
        Command::CheckThm1 {
            gen,
            check,
            bases,
            out,
        } => {
            let cfg = check_config(&check);
            let src = gen.build(cfg.n)?;
            let bases = if bases.is_empty() {
                DEFAULT_BASES.to_vec()
            } else {
                bases
            };
            let report = analysis::check_theorem1(&src, &bases, &cfg)?;
            let buf = match out.format {
                Format::Csv => theorem_csv(&report)?,
                Format::Json => json_bytes(export::THEOREM_SCHEMA, &report),
            };
            finish(&out, buf, stdout)
        }
        Command::CheckThm2 {
            gen,
            check,
            alpha,
            out,
        } => {
            let cfg = check_config(&check);
            let src = gen.build(cfg.n)?;
            let report = analysis::check_theorem2(&src, alpha, &cfg)?;
            let buf = match out.format {
                Format::Csv => theorem_csv(&report)?,
                Format::Json => json_bytes(export::THEOREM_SCHEMA, &report),
            };
            finish(&out, buf, stdout)
        }
        Command::DemoCounterexample { n, out } => {
            let demo = analysis::counterexample_demo(n)?;
            let buf = match out.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    writeln!(buf, "subsequence,n,a_n").map_err(io_err)?;
                    for (name, samples) in [
                        ("three_times_power", &demo.along_three_times_power),
                        ("run_end", &demo.along_run_ends),
                    ] {
                        for s in samples {
                            writeln!(buf, "{name},{},{}", s.n, csv_f64(s.mean)).map_err(io_err)?;
                        }
                    }
                    buf
                }
                Format::Json => json_bytes(export::DEMO_SCHEMA, &demo),
            };
            finish(&out, buf, stdout)
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    return 0;
                }
                _ => 1,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => report_error(&e, stderr),
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run_with(argv, &mut out, &mut err);
    let _ = out.flush();
    code
}
