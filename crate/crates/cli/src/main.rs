mod render;
mod verify;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use symtri::analysis::{discrepancy_report, reference, table_report, ComputedCounts, Discrepancy, TableId, TableReport};
use symtri::bounds::{bounds_row, sandwich_check, BoundsRow, SandwichReport};
use symtri::enumeration::{
    enumerate, enumerate_region_with, validate, Emit, EnumerationConfig, EnumerationResult, Limits,
    Mode, Pruning, Triangulation,
};
use symtri::geometry::{lattice_points, PointConfiguration, Region};

/// Counts and audits reflection-symmetric triangulations of dilated triangles.
#[derive(Parser, Debug)]
#[command(name = "symtri", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count triangulations.
    Count(CountArgs),
    /// Stream triangulations: a JSON header line, then one line each.
    Enumerate(EnumerateArgs),
    /// Closed-form lower bounds, point/edge counts and upper-bound exponents.
    Bounds(BoundsArgs),
    /// Compare computed values with the reference tables.
    Tables(TablesArgs),
    /// Run the consistency checks up to a dilation.
    Verify(VerifyArgs),
    /// Draw one triangulation as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RegionArg {
    Full,
    Half,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Unimodular,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PruningArg {
    Off,
    Verbatim,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WhichTable {
    Table1,
    Table2,
    Both,
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// Dilation factor.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    d: u32,
    /// Reflection-invariant triangulations of the full triangle.
    #[arg(long)]
    symmetric: bool,
    #[arg(long, value_enum, default_value = "full")]
    region: RegionArg,
    #[arg(long, value_enum, default_value = "unimodular")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "full")]
    pruning: PruningArg,
    /// Worker threads.
    #[arg(long, env = "SYMTRI_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    jobs: u32,
    /// Abort after this many search nodes.
    #[arg(long)]
    max_nodes: Option<u64>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Write the stream here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DRange {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=200))]
    d: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=200))]
    d_max: Option<u32>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    range: DRange,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(long, value_enum, default_value = "both")]
    which: WhichTable,
    /// Last dilation shown.
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u32).range(1..=20))]
    d_max: u32,
    /// Enumerate counts up to this dilation; reference values fill the rest.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(0..=7))]
    compute_max: u32,
    #[arg(long, env = "SYMTRI_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    jobs: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    d_max: u32,
    #[arg(long, env = "SYMTRI_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    jobs: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Enumerate at this dilation and draw the triangulation at --index.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12), conflicts_with = "file")]
    d: Option<u32>,
    #[arg(long, requires = "d")]
    symmetric: bool,
    #[arg(long, value_enum, default_value = "full")]
    region: RegionArg,
    /// Read a stream written by `enumerate`.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Zero-based position in the stream.
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long)]
    out: PathBuf,
    /// Draw the symmetry axis dashed.
    #[arg(long)]
    axis: bool,
}

/// A problem with the arguments rather than the computation.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Count(a) => cmd_count(&a),
        Command::Enumerate(a) => cmd_enumerate(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Tables(a) => cmd_tables(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Render(a) => cmd_render(&a),
    }
}

fn region_of(d: u32, region: RegionArg) -> Region {
    match region {
        RegionArg::Full => Region::full(d),
        RegionArg::Half => Region::half(d),
    }
}

fn region_name(region: Region) -> &'static str {
    match region.kind {
        symtri::geometry::RegionKind::FullTriangle => "full",
        symtri::geometry::RegionKind::HalfRegion => "half",
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Unimodular => "unimodular",
        Mode::All => "all",
    }
}

fn config_of(s: &SearchArgs) -> anyhow::Result<(EnumerationConfig, Region)> {
    if s.symmetric && s.region == RegionArg::Half {
        return Err(usage("--symmetric applies to the full triangle only"));
    }
    let mode = match s.mode {
        ModeArg::Unimodular => Mode::Unimodular,
        ModeArg::All => Mode::All,
    };
    let mut cfg = if s.symmetric {
        EnumerationConfig::symmetric(s.d, mode)
    } else {
        EnumerationConfig::plain(s.d, mode)
    };
    cfg = cfg.with_workers(s.jobs as usize).with_pruning(match s.pruning {
        PruningArg::Off => Pruning::Off,
        PruningArg::Verbatim => Pruning::Verbatim,
        PruningArg::Full => Pruning::Full,
    });
    cfg.limits = Limits {
        max_nodes: s.max_nodes,
        ..Limits::default()
    };
    Ok((cfg, region_of(s.d, s.region)))
}

fn run_search(
    cfg: &EnumerationConfig,
    region: Region,
    visitor: Option<&mut dyn FnMut(&Triangulation)>,
) -> anyhow::Result<EnumerationResult> {
    let result = if cfg.symmetric || region.kind == symtri::geometry::RegionKind::FullTriangle {
        enumerate(cfg, visitor)
    } else {
        enumerate_region_with(region, cfg, visitor)
    };
    Ok(result?)
}

#[derive(Serialize)]
struct CountOutput {
    d: u32,
    region: &'static str,
    mode: &'static str,
    symmetric: bool,
    count: String,
    raw_count: String,
    nodes: u64,
    pool_size: usize,
    group_order: usize,
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_count(a: &CountArgs) -> anyhow::Result<ExitCode> {
    let (cfg, region) = config_of(&a.search)?;
    let r = run_search(&cfg, region, None)?;
    match a.format {
        Format::Plain => println!("{}", r.count),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            w.write_record(["d", "region", "mode", "symmetric", "count", "raw_count"])?;
            w.write_record([
                cfg.d.to_string(),
                region_name(region).into(),
                mode_name(cfg.mode).into(),
                cfg.symmetric.to_string(),
                r.count.to_string(),
                r.raw_count.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Json => print_json(&CountOutput {
            d: cfg.d,
            region: region_name(region),
            mode: mode_name(cfg.mode),
            symmetric: cfg.symmetric,
            count: r.count.to_string(),
            raw_count: r.raw_count.to_string(),
            nodes: r.nodes,
            pool_size: r.pool_size,
            group_order: r.group_order,
        })?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize, serde::Deserialize)]
struct StreamHeader {
    d: u32,
    region: String,
    mode: String,
    symmetric: bool,
    points: Vec<[i64; 2]>,
}

fn cmd_enumerate(a: &EnumerateArgs) -> anyhow::Result<ExitCode> {
    let (mut cfg, region) = config_of(&a.search)?;
    cfg.emit = Emit::Stream;
    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let config = lattice_points(region);
    let header = StreamHeader {
        d: cfg.d,
        region: region_name(region).into(),
        mode: mode_name(cfg.mode).into(),
        symmetric: cfg.symmetric,
        points: config.points().iter().map(|p| [p.x, p.y]).collect(),
    };
    serde_json::to_writer(&mut out, &header)?;
    writeln!(out)?;
    let mut failure: Option<io::Error> = None;
    run_search(&cfg, region, Some(&mut |t: &Triangulation| {
        if failure.is_none() {
            if let Err(e) = writeln!(out, "{}", t.to_line()) {
                failure = Some(e);
            }
        }
    }))?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BoundsOutputRow {
    #[serde(flatten)]
    row: BoundsRow,
    sandwich: Option<SandwichReport>,
}

const BOUNDS_COLUMNS: [&str; 13] = [
    "d",
    "l1",
    "l2",
    "l2_as_printed",
    "f_half_ref",
    "printed_u",
    "anclin_interior",
    "total_edges",
    "theorem_cap",
    "rough_rectangle",
    "f_tilde_ref",
    "sandwich_lower_slack",
    "sandwich_upper_slack",
];

fn cmd_bounds(a: &BoundsArgs) -> anyhow::Result<ExitCode> {
    let ds = match (a.range.d, a.range.d_max) {
        (Some(d), _) => d..=d,
        (None, Some(m)) => 1..=m,
        (None, None) => unreachable!("clap requires one of --d and --d-max"),
    };
    let t1 = &reference::tables().table1;
    let mut rows = Vec::new();
    for d in ds {
        let row = bounds_row(d);
        let sandwich = match (&row.f_half_ref, t1.f_tilde(d)) {
            (Some(h), Some(s)) => Some(sandwich_check(d, h, &s)?),
            _ => None,
        };
        rows.push(BoundsOutputRow { row, sandwich });
    }
    match a.format {
        Format::Json | Format::Plain => print_json(&serde_json::json!({ "rows": rows }))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            w.write_record(BOUNDS_COLUMNS)?;
            for BoundsOutputRow { row, sandwich } in &rows {
                let opt = |v: Option<&BigUint>| v.map(|x| x.to_string()).unwrap_or_default();
                let e = &row.exponents;
                w.write_record([
                    row.d.to_string(),
                    row.l1.to_string(),
                    row.l2.to_string(),
                    row.l2_as_printed.to_string(),
                    opt(row.f_half_ref.as_ref()),
                    e.printed_u.to_string(),
                    e.anclin_interior.to_string(),
                    e.total_edges.to_string(),
                    e.theorem_cap.to_string(),
                    e.rough_rectangle.to_string(),
                    opt(sandwich.as_ref().map(|s| &s.f_sym)),
                    opt(sandwich.as_ref().map(|s| &s.lower_slack)),
                    opt(sandwich.as_ref().map(|s| &s.upper_slack)),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TablesOutput {
    compute_max: u32,
    tables: Vec<TableReport>,
    discrepancies: Vec<Discrepancy>,
}

fn cmd_tables(a: &TablesArgs) -> anyhow::Result<ExitCode> {
    let mut computed = ComputedCounts {
        bounds: true,
        reference_fill: true,
        ..Default::default()
    };
    for d in 1..=a.compute_max.min(a.d_max) {
        let sym = EnumerationConfig::symmetric(d, Mode::Unimodular).with_workers(a.jobs as usize);
        computed.f_tilde.insert(d, enumerate(&sym, None)?.count);
        let plain = EnumerationConfig::plain(d, Mode::Unimodular).with_workers(a.jobs as usize);
        computed.f_half.insert(d, enumerate_region_with(Region::half(d), &plain, None)?.count);
    }
    let which: &[TableId] = match a.which {
        WhichTable::Table1 => &[TableId::Table1],
        WhichTable::Table2 => &[TableId::Table2],
        WhichTable::Both => &[TableId::Table1, TableId::Table2],
    };
    let tables: Vec<TableReport> = which.iter().map(|&t| table_report(t, a.d_max, &computed)).collect();
    match a.format {
        Format::Json | Format::Plain => print_json(&TablesOutput {
            compute_max: a.compute_max,
            tables,
            discrepancies: discrepancy_report(a.d_max, &computed),
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            w.write_record(["table", "row", "d", "computed", "reference", "status", "note"])?;
            for t in &tables {
                let table = serde_json::to_value(t.table)?;
                for (row, cell) in t.cells() {
                    let status = serde_json::to_value(cell.status)?;
                    w.write_record([
                        table.as_str().unwrap_or_default(),
                        &row.key,
                        &cell.d.to_string(),
                        cell.computed.as_deref().unwrap_or_default(),
                        cell.reference.as_deref().unwrap_or_default(),
                        status.as_str().unwrap_or_default(),
                        cell.note.as_deref().unwrap_or_default(),
                    ])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<ExitCode> {
    if a.d_max > verify::VERIFY_MAX_D {
        return Err(usage(format!(
            "verify is limited to --d-max {}; got {}",
            verify::VERIFY_MAX_D,
            a.d_max
        )));
    }
    let summary = verify::run(a.d_max, a.jobs as usize)?;
    match a.format {
        Format::Json => print_json(&summary)?,
        Format::Plain | Format::Csv => {
            for c in &summary.checks {
                let status = serde_json::to_value(c.status)?;
                println!("{} {}: {}", status.as_str().unwrap_or_default(), c.name, c.detail);
            }
            let status = serde_json::to_value(summary.status)?;
            println!("{}", status.as_str().unwrap_or_default());
        }
    }
    Ok(if summary.status == verify::Status::Fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn read_stream(path: &PathBuf, index: usize) -> anyhow::Result<(PointConfiguration, Triangulation)> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines();
    let header: StreamHeader = serde_json::from_str(lines.next().ok_or_else(|| anyhow!("empty stream file"))?)
        .context("malformed stream header")?;
    let region = match header.region.as_str() {
        "full" => Region::full(header.d),
        "half" => Region::half(header.d),
        other => bail!("unknown region {other:?} in stream header"),
    };
    if header.d == 0 {
        bail!("stream header has d = 0");
    }
    let config = lattice_points(region);
    let expected: Vec<[i64; 2]> = config.points().iter().map(|p| [p.x, p.y]).collect();
    if header.points != expected {
        bail!("stream header points do not match the {} lattice points of {region}", expected.len());
    }
    let line = lines
        .filter(|l| !l.trim().is_empty())
        .nth(index)
        .ok_or_else(|| anyhow!("stream has no triangulation at index {index}"))?;
    let t = Triangulation::from_line(region, line).map_err(|e| anyhow!("line {}: {e}", index + 2))?;
    let mode = if header.mode == "all" { Mode::All } else { Mode::Unimodular };
    let defects = validate(&config, &t, mode);
    if !defects.is_empty() {
        bail!("triangulation at index {index} is invalid: {defects:?}");
    }
    Ok((config, t))
}

fn cmd_render(a: &RenderArgs) -> anyhow::Result<ExitCode> {
    let (config, t) = match (&a.file, a.d) {
        (Some(path), _) => read_stream(path, a.index)?,
        (None, Some(d)) => {
            if a.symmetric && a.region == RegionArg::Half {
                return Err(usage("--symmetric applies to the full triangle only"));
            }
            let region = region_of(d, a.region);
            let mut cfg = if a.symmetric {
                EnumerationConfig::symmetric(d, Mode::Unimodular)
            } else {
                EnumerationConfig::plain(d, Mode::Unimodular)
            };
            cfg.emit = Emit::Stream;
            let mut found = None;
            let mut seen = 0usize;
            run_search(&cfg, region, Some(&mut |t: &Triangulation| {
                if seen == a.index {
                    found = Some(t.clone());
                }
                seen += 1;
            }))?;
            let t = found.ok_or_else(|| anyhow!("index {} out of range: {seen} triangulations", a.index))?;
            (lattice_points(region), t)
        }
        (None, None) => return Err(usage("render needs --d or --file")),
    };
    fs::write(&a.out, render::svg(&config, &t, a.axis))
        .with_context(|| format!("cannot write {}", a.out.display()))?;
    Ok(ExitCode::SUCCESS)
}
