//! `monolab`: single-state reports, seeded sampling runs, preset grid scans,
//! boundary bisection and the self-check suite.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use monogamy_core::linalg::Complex;
use monogamy_core::monogamy::{
    batch_evaluate, evaluate, find_boundary, scan_region, BatchSummary, CasePreset, GridSpec,
    MeasureRecord, ScoreKind, DEFAULT_GRID, DEFAULT_R_SLICES,
};
use monogamy_core::states::{FamilyTag, GhzParams, ParamRecord, SampleSpec, WParams};
use monogamy_core::table::{parse_float_list, parse_g_list, write_csv};
use monogamy_core::verify::{self, VerifyConfig};
use serde::Serialize;

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "monolab", version, about = "Three-qubit monogamy laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every measure of one state and print it as JSON.
    State(StateArgs),
    /// Evaluate seeded random states of one family.
    Sample(SampleArgs),
    /// Evaluate a preset parameter grid.
    Scan(ScanArgs),
    /// Bisect the sign change of a score along a preset's first axis.
    Boundary(BoundaryArgs),
    /// Run the self-check suite; exits nonzero if any check fails.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("class").required(true).args(["w", "ghz"]))]
struct StateArgs {
    /// W-class state √t|000⟩ + √x|100⟩ + √y|010⟩ + √z|001⟩.
    #[arg(long)]
    w: bool,
    /// GHZ-class state with coordinates (g1, g2, g3, z).
    #[arg(long)]
    ghz: bool,
    #[arg(long, requires = "w")]
    t: Option<f64>,
    #[arg(long, requires = "w")]
    x: Option<f64>,
    #[arg(long, requires = "w")]
    y: Option<f64>,
    #[arg(long, requires = "w", allow_hyphen_values = true)]
    z: Option<f64>,
    /// Comma-separated g1,g2,g3.
    #[arg(long, requires = "ghz")]
    g: Option<String>,
    #[arg(long = "z-re", requires = "ghz", allow_hyphen_values = true)]
    z_re: Option<f64>,
    #[arg(
        long = "z-im",
        requires = "ghz",
        allow_hyphen_values = true,
        default_value_t = 0.0
    )]
    z_im: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SampleArgs {
    /// Family tag, e.g. ghz-generic, ghz-mes-nonzero, w.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file; rows go to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ScanArgs {
    /// Preset: case1, case2, case2-r1, case3, case3-r1, appendix-b,
    /// appendix-d1, appendix-d2, appendix-d3, appendix-e.
    #[arg(long = "case")]
    case: String,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// `r` values of the case3 slices, comma-separated.
    #[arg(long = "r-slices")]
    r_slices: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct BoundaryArgs {
    #[arg(long = "case")]
    case: String,
    /// Values of the remaining axes, comma-separated (e.g. `0.5` for r).
    #[arg(long)]
    fixed: Option<String>,
    #[arg(long, default_value = "m1")]
    score: String,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// States per family in the oracle, CKW and tangle sweeps.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Monte-Carlo draws per volume test point.
    #[arg(long = "volume-samples", default_value_t = 200_000)]
    volume_samples: usize,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_records<'a>(
    out: Option<&Path>,
    format: Format,
    records: impl IntoIterator<Item = &'a MeasureRecord>,
) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => write_csv(sink, records)?,
        Format::Json => {
            let mut sink = sink;
            let all: Vec<&MeasureRecord> = records.into_iter().collect();
            serde_json::to_writer(&mut sink, &all)?;
            writeln!(sink)?;
            sink.flush()?;
        }
    }
    Ok(())
}

/// Summary goes to stdout when rows went to a file, stderr otherwise.
fn report<T: Serialize>(value: &T, rows_on_stdout: bool) -> Result<()> {
    if rows_on_stdout {
        eprintln!("{}", serde_json::to_string_pretty(value)?);
        Ok(())
    } else {
        print_json(value)
    }
}

fn cmd_state(a: StateArgs) -> Result<()> {
    let params = if a.w {
        let need = |v: Option<f64>, name: &str| v.with_context(|| format!("--w needs --{name}"));
        ParamRecord::W(WParams::new(
            need(a.t, "t")?,
            need(a.x, "x")?,
            need(a.y, "y")?,
            need(a.z, "z")?,
        )?)
    } else {
        let g = parse_g_list(a.g.as_deref().context("--ghz needs --g g1,g2,g3")?)?;
        let z_re = a.z_re.context("--ghz needs --z-re")?;
        ParamRecord::Ghz(GhzParams::new(g, Complex::new(z_re, a.z_im))?)
    };
    let record = evaluate(&params)?;
    match a.format {
        Format::Json => print_json(&record),
        Format::Csv => write_records(None, Format::Csv, [&record]),
    }
}

#[derive(Serialize)]
struct SampleReport<'a> {
    command: &'static str,
    family: FamilyTag,
    n: usize,
    seed: u64,
    format: Format,
    out: Option<&'a Path>,
    summary: BatchSummary,
}

fn cmd_sample(a: SampleArgs) -> Result<()> {
    let family: FamilyTag = a.family.parse()?;
    let spec = SampleSpec::new(family, a.n, a.seed)?;
    let batch = batch_evaluate(&spec)?;
    write_records(a.out.as_deref(), a.format, &batch.records)?;
    report(
        &SampleReport {
            command: "sample",
            family,
            n: a.n,
            seed: a.seed,
            format: a.format,
            out: a.out.as_deref(),
            summary: batch.summary,
        },
        a.out.is_none(),
    )
}

#[derive(Serialize)]
struct ScanReport<'a> {
    command: &'static str,
    case: CasePreset,
    grid: usize,
    r_slices: &'a [f64],
    axes: Vec<&'a str>,
    cells: usize,
    format: Format,
    out: Option<&'a Path>,
    summary: BatchSummary,
}

fn cmd_scan(a: ScanArgs) -> Result<()> {
    let case: CasePreset = a.case.parse()?;
    let r_slices = match &a.r_slices {
        Some(s) => parse_float_list(s)?,
        None => DEFAULT_R_SLICES.to_vec(),
    };
    if a.grid < 2 {
        bail!("--grid must be at least 2, got {}", a.grid);
    }
    let grid = GridSpec {
        resolution: a.grid,
        r_slices,
    };
    let scan = scan_region(case, &grid)?;
    write_records(a.out.as_deref(), a.format, scan.records())?;
    let records: Vec<MeasureRecord> = scan.records().cloned().collect();
    report(
        &ScanReport {
            command: "scan",
            case,
            grid: a.grid,
            r_slices: &grid.r_slices,
            axes: scan.axes.iter().map(|x| x.name.as_str()).collect(),
            cells: scan.cells.len(),
            format: a.format,
            out: a.out.as_deref(),
            summary: BatchSummary::from_records(&records).context("empty scan")?,
        },
        a.out.is_none(),
    )
}

#[derive(Serialize)]
struct BoundaryReport {
    command: &'static str,
    case: CasePreset,
    score: ScoreKind,
    fixed: Vec<f64>,
    grid: usize,
    root: f64,
}

fn cmd_boundary(a: BoundaryArgs) -> Result<()> {
    let case: CasePreset = a.case.parse()?;
    let score: ScoreKind = a.score.parse()?;
    let fixed = match &a.fixed {
        Some(s) => parse_float_list(s)?,
        None => Vec::new(),
    };
    let grid = GridSpec::new(a.grid)?;
    let root = find_boundary(case, &fixed, score, &grid)?;
    print_json(&BoundaryReport {
        command: "boundary",
        case,
        score,
        fixed,
        grid: a.grid,
        root,
    })
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let cfg = VerifyConfig {
        seed: a.seed,
        samples_per_family: a.samples.max(1),
        volume_samples: a.volume_samples.max(2),
    };
    let report = verify::run(&cfg)?;
    print_json(&report)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::State(a) => cmd_state(a).map(|_| true),
        Command::Sample(a) => cmd_sample(a).map(|_| true),
        Command::Scan(a) => cmd_scan(a).map(|_| true),
        Command::Boundary(a) => cmd_boundary(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
