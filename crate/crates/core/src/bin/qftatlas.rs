use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qftatlas::bench::{generate, run_bench, to_csv, to_markdown};
use qftatlas::circuit::{export_json, export_qasm, import_json};
use qftatlas::faults::FaultModel;
use qftatlas::synth::{cross_validate, line_len, sketch_for, solve_capped, HoleDecl, Shape, SynthSpec, DEFAULT_CAP};
use qftatlas::topology::build_architecture;
use qftatlas::verify::{verify, verify_file};
use qftatlas::{ArchKind, Mode};

#[derive(Parser)]
#[command(name = "qftatlas", version, about = "Linear-depth QFT schedules for constrained qubit topologies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a schedule and verify it.
    Gen(GenArgs),
    /// Verify a circuit file and print the JSON report.
    Verify {
        path: PathBuf,
        #[arg(long)]
        mode: Option<ModeArg>,
    },
    /// Fill the holes of a built-in sketch.
    Synth(SynthArgs),
    /// Generate a size sweep and print CSV and a markdown table.
    Bench(BenchArgs),
    /// Convert a circuit file to another format.
    Export {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "qasm")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Relaxed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Relaxed => Mode::Relaxed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Qasm,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArchArg {
    Lnn,
    Grid,
    Sycamore,
    Heavyhex,
}

impl From<ArchArg> for ArchKind {
    fn from(a: ArchArg) -> ArchKind {
        match a {
            ArchArg::Lnn => ArchKind::Lnn,
            ArchArg::Grid => ArchKind::Grid,
            ArchArg::Sycamore => ArchKind::Sycamore,
            ArchArg::Heavyhex => ArchKind::HeavyHex,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    arch: ArchArg,
    /// Grid or sycamore side length.
    #[arg(long, conflicts_with = "n")]
    m: Option<usize>,
    /// Qubit count for lnn and heavyhex.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "relaxed")]
    mode: ModeArg,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated faulty physical qubits.
    #[arg(long, value_delimiter = ',')]
    faulty: Vec<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    shape: String,
    /// Line length for lnn, side length otherwise.
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 10)]
    limit: usize,
    /// Sizes to cross-validate each assignment at.
    #[arg(long, value_delimiter = ',')]
    validate: Vec<usize>,
    /// Coefficient hole domain as lo,hi.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coef_range: Option<Vec<i64>>,
    /// Offset hole domain as lo,hi.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    offset_range: Option<Vec<i64>>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    arch: ArchArg,
    #[arg(long, value_delimiter = ',', conflicts_with = "n")]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_enum, default_value = "relaxed")]
    mode: ModeArg,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the markdown table here instead of stdout.
    #[arg(long)]
    markdown: Option<PathBuf>,
}

/// Bad input: exit 2. Verification failure: exit 1.
enum Outcome {
    Ok,
    Rejected,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Verify { path, mode } => {
            let report = verify_file(&path, mode.map(Mode::from)).with_context(|| format!("cannot verify {}", path.display()))?;
            say(&report.to_json());
            Ok(if report.ok { Outcome::Ok } else { Outcome::Rejected })
        }
        Command::Synth(args) => synth(args),
        Command::Bench(args) => bench(args),
        Command::Export { path, format, out } => {
            let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
            let circuit = import_json(&text)?;
            let body = match format {
                Format::Json => export_json(&circuit),
                Format::Qasm => export_qasm(&circuit),
            };
            emit(out.as_deref(), &body)?;
            Ok(Outcome::Ok)
        }
    }
}

/// Prints a line, treating a closed stdout as success.
fn say(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{text}");
}

fn emit(out: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            say(body);
            Ok(())
        }
    }
}

fn gen(args: GenArgs) -> anyhow::Result<Outcome> {
    let kind = ArchKind::from(args.arch);
    let size = match (kind, args.m, args.n) {
        (ArchKind::Grid | ArchKind::Sycamore, Some(m), None) => m,
        (ArchKind::Lnn | ArchKind::HeavyHex, None, Some(n)) => n,
        (ArchKind::Grid | ArchKind::Sycamore, _, _) => bail!("--arch {kind} takes --m"),
        _ => bail!("--arch {kind} takes --n"),
    };
    let mode = Mode::from(args.mode);
    let circuit = generate(kind, size, mode, &FaultModel::new(args.faulty))?;
    let body = match args.format {
        Format::Json => export_json(&circuit),
        Format::Qasm => export_qasm(&circuit),
    };
    emit(args.out.as_deref(), &body)?;
    if args.no_verify {
        return Ok(Outcome::Ok);
    }
    let graph = build_architecture(kind, size)?;
    let report = verify(&circuit, &graph, mode, None);
    if report.ok {
        return Ok(Outcome::Ok);
    }
    let report_path = match &args.out {
        Some(p) => p.with_extension("report.json"),
        None => PathBuf::from("qftatlas-report.json"),
    };
    fs::write(&report_path, report.to_json())?;
    eprintln!("verification failed; report at {}", report_path.display());
    Ok(Outcome::Rejected)
}

fn synth(args: SynthArgs) -> anyhow::Result<Outcome> {
    let shape: Shape = args.shape.parse()?;
    let spec = SynthSpec::for_shape(shape, args.size)?;
    let mut sketch = sketch_for(shape, line_len(shape, args.size));
    let set = |h: &mut HoleDecl, range: &Option<Vec<i64>>, offset: bool| {
        if let Some(r) = range {
            if h.name.ends_with("_c") == offset {
                h.lo = r[0];
                h.hi = r[1];
            }
        }
    };
    for r in [&args.coef_range, &args.offset_range].into_iter().flatten() {
        if r.len() != 2 {
            bail!("hole ranges take exactly two values, lo,hi");
        }
    }
    for h in &mut sketch.holes {
        set(h, &args.coef_range, false);
        set(h, &args.offset_range, true);
    }
    if let Some(h) = sketch.holes.iter().find(|h| h.lo > h.hi) {
        bail!("hole '{}' has an empty domain", h.name);
    }
    let found = solve_capped(&sketch, &spec, args.limit, args.cap)?;
    let found: Vec<serde_json::Value> = found
        .into_iter()
        .map(|mut a| {
            let report = cross_validate(&a, &sketch, &args.validate, |m| SynthSpec::for_shape(shape, m));
            for &m in &args.validate {
                if !a.sizes_tested.contains(&m) {
                    a.sizes_tested.push(m);
                }
            }
            serde_json::json!({ "assignment": a, "generalization": report })
        })
        .collect();
    say(&serde_json::to_string_pretty(&found)?);
    Ok(Outcome::Ok)
}

fn bench(args: BenchArgs) -> anyhow::Result<Outcome> {
    let kind = ArchKind::from(args.arch);
    let sizes = if args.m.is_empty() { args.n } else { args.m };
    if sizes.is_empty() {
        bail!("give a size list with --m or --n");
    }
    let rows = run_bench(kind, &sizes, args.mode.into())?;
    let csv = format!("# qftatlas bench {kind} {}\n{}", Mode::from(args.mode), to_csv(&rows));
    match &args.csv {
        Some(p) => fs::write(p, &csv)?,
        None => say(csv.trim_end()),
    }
    let md = to_markdown(&rows);
    match &args.markdown {
        Some(p) => fs::write(p, &md)?,
        None => say(&format!("\n{}", md.trim_end())),
    }
    Ok(Outcome::Ok)
}
