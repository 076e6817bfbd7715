use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use qroute::arch::DurationMap;
use qroute::initial::{InitialError, TraversalOptions};
use qroute::pipeline::{compare, InitialStrategy, RouterKind, RunConfig, RunError};
use qroute::report::{schedule_listing, RouteReport};
use qroute::router::RouteError;
use qroute::sched::{asap_schedule_with_origins, original_depth, validate_schedule};
use qroute::verify::{assign_origins, permutation_check, statevector_equiv, VerifyError};
use qroute::{qasm, Architecture, Circuit};

const EXIT_VERIFY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ARCH: u8 = 3;
const EXIT_CAPACITY: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

/// An error together with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

type CliResult<T> = Result<T, Failure>;

trait WithCode<T> {
    fn code(self, code: u8) -> CliResult<T>;
}

impl<T, E: Into<anyhow::Error>> WithCode<T> for Result<T, E> {
    fn code(self, code: u8) -> CliResult<T> {
        self.map_err(|e| Failure {
            code,
            error: e.into(),
        })
    }
}

fn run_error_code(e: &RunError) -> u8 {
    match e {
        RunError::Route(RouteError::Capacity { .. })
        | RunError::Initial(InitialError::Capacity { .. }) => EXIT_CAPACITY,
        RunError::Initial(InitialError::Route(RouteError::Capacity { .. })) => EXIT_CAPACITY,
        _ => EXIT_INTERNAL,
    }
}

#[derive(Parser)]
#[command(name = "qroute", version, about = "Duration-aware qubit routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route one circuit onto an architecture.
    Route(RouteArgs),
    /// Route every circuit in a directory with both routers and tabulate.
    Compare(CompareArgs),
    /// Inspect architectures.
    Arch {
        #[command(subcommand)]
        command: ArchCommand,
    },
    /// Check a routed circuit against its source.
    Verify(VerifyArgs),
    /// Print the weighted depth of a circuit ignoring coupling.
    Depth(DepthArgs),
}

#[derive(Subcommand)]
enum ArchCommand {
    /// List the named architectures.
    List,
    /// Describe one architecture.
    Show {
        /// Architecture name.
        name: Option<String>,
        #[arg(long)]
        arch_file: Option<PathBuf>,
        #[arg(long)]
        durations: Option<String>,
    },
}

#[derive(Args)]
struct ArchArgs {
    /// Named architecture: bundled device, line-N or grid-RxC.
    #[arg(
        long,
        conflicts_with = "arch_file",
        required_unless_present = "arch_file"
    )]
    arch: Option<String>,
    /// Architecture description file.
    #[arg(long)]
    arch_file: Option<PathBuf>,
    /// Duration table: a preset name, `default`, or a file.
    #[arg(long)]
    durations: Option<String>,
}

#[derive(Args)]
struct RoutingArgs {
    #[arg(long, default_value = "reverse-traversal")]
    initial: InitialStrategy,
    #[arg(long, default_value_t = 3)]
    rt_rounds: usize,
    #[arg(long, default_value_t = 12)]
    rt_restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Decay increment of the baseline router.
    #[arg(long)]
    baseline_delta: Option<f64>,
    /// Rank SWAPs by the basic priority only.
    #[arg(long)]
    no_fine: bool,
    /// Record wall-clock time in reports.
    #[arg(long)]
    timing: bool,
}

impl RoutingArgs {
    fn config(&self, router: RouterKind) -> CliResult<RunConfig> {
        let mut cfg = RunConfig {
            router,
            initial: self.initial,
            traversal: TraversalOptions {
                rounds: self.rt_rounds,
                restarts: self.rt_restarts,
                seed: self.seed,
            },
            ..Default::default()
        };
        cfg.comet.fine = !self.no_fine;
        if let Some(d) = self.baseline_delta {
            if !d.is_finite() || d < 0.0 {
                return Err(anyhow!("--baseline-delta must be a non-negative number"))
                    .code(EXIT_PARSE);
            }
            cfg.baseline.decay_delta = d;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct RouteArgs {
    #[command(flatten)]
    arch: ArchArgs,
    /// Input OpenQASM 2.0 file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Routed QASM output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Schedule listing output.
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(long, default_value = "comet")]
    router: RouterKind,
    /// Write every SWAP as three CX.
    #[arg(long)]
    decompose_swaps: bool,
    #[command(flatten)]
    routing: RoutingArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Directory of .qasm benchmarks.
    #[arg(long, default_value = "benchmarks")]
    dir: PathBuf,
    /// Architectures by name, comma separated or repeated.
    #[arg(long, value_delimiter = ',', default_values_t = ["grid-6x6".to_string(), "q20-tokyo".to_string()])]
    arch: Vec<String>,
    /// Additional architecture files.
    #[arg(long)]
    arch_file: Vec<PathBuf>,
    #[arg(long)]
    durations: Option<String>,
    /// JSON summary output.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    routing: RoutingArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    arch: ArchArgs,
    /// Source circuit.
    #[arg(long)]
    original: PathBuf,
    /// Routed circuit as written by `route`.
    #[arg(long)]
    routed: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct DepthArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    durations: Option<String>,
}

fn load_durations(choice: &str) -> CliResult<DurationMap> {
    if choice == "default" {
        return Ok(DurationMap::default());
    }
    if let Some(d) = DurationMap::preset(choice) {
        return Ok(d);
    }
    let text = fs::read_to_string(choice)
        .with_context(|| format!("durations `{choice}` is neither a preset nor a readable file"))
        .code(EXIT_ARCH)?;
    DurationMap::from_toml(&text)
        .with_context(|| format!("durations file {choice}"))
        .code(EXIT_ARCH)
}

fn load_arch(
    name: Option<&str>,
    file: Option<&Path>,
    durations: Option<&str>,
) -> CliResult<Architecture> {
    let arch = match (name, file) {
        (_, Some(path)) => Architecture::from_file(path).code(EXIT_ARCH)?,
        (Some(name), None) => Architecture::builtin(name).code(EXIT_ARCH)?,
        (None, None) => return Err(anyhow!("an architecture is required")).code(EXIT_ARCH),
    };
    Ok(match durations {
        Some(choice) => arch.with_durations(load_durations(choice)?),
        None => arch,
    })
}

impl ArchArgs {
    fn load(&self) -> CliResult<Architecture> {
        load_arch(
            self.arch.as_deref(),
            self.arch_file.as_deref(),
            self.durations.as_deref(),
        )
    }
}

fn read_circuit(path: &Path) -> CliResult<Circuit> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .code(EXIT_PARSE)?;
    qasm::parse(&text)
        .with_context(|| path.display().to_string())
        .code(EXIT_PARSE)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .code(EXIT_INTERNAL)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn cmd_route(args: &RouteArgs) -> CliResult<()> {
    let arch = args.arch.load()?;
    let c = read_circuit(&args.input)?;
    let cfg = args.routing.config(args.router)?;
    let started = Instant::now();
    let s = cfg.run(&c, &arch).map_err(|e| Failure {
        code: run_error_code(&e),
        error: e.into(),
    })?;
    let elapsed = started.elapsed();
    let mc = if args.decompose_swaps {
        qasm::decompose_swaps(&s.mapped_circuit)
    } else {
        s.mapped_circuit.clone()
    };
    let text = qasm::emit(&mc);
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.schedule {
        write_file(path, &schedule_listing(&s))?;
    }
    if let Some(path) = &args.report {
        let mut r = RouteReport::new(
            &stem(&args.input),
            &c,
            &arch,
            &cfg,
            &s,
            args.decompose_swaps,
        );
        if args.routing.timing {
            r.wall_clock_ms = Some(elapsed.as_secs_f64() * 1e3);
        }
        write_file(path, &r.to_json())?;
    }
    eprintln!(
        "{}: weighted depth {} (original {}), {} swaps",
        arch.name(),
        s.weighted_depth,
        original_depth(&c, arch.durations()),
        s.swap_count
    );
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    let mut archs = Vec::new();
    for name in &args.arch {
        archs.push(load_arch(Some(name), None, args.durations.as_deref())?);
    }
    for path in &args.arch_file {
        archs.push(load_arch(None, Some(path), args.durations.as_deref())?);
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(&args.dir)
        .with_context(|| format!("cannot read directory {}", args.dir.display()))
        .code(EXIT_PARSE)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
        .collect();
    paths.sort();
    let mut benchmarks = Vec::new();
    for p in &paths {
        // unreadable files are reported and skipped
        match read_circuit(p) {
            Ok(c) => benchmarks.push((stem(p), c)),
            Err(f) => eprintln!("skipping {}: {:#}", p.display(), f.error),
        }
    }
    let cfg = args.routing.config(RouterKind::Comet)?;
    let summary = compare(&benchmarks, &archs, &cfg);
    print!("{}", summary.table());
    if let Some(path) = &args.report {
        write_file(path, &summary.to_json())?;
    }
    Ok(())
}

fn cmd_arch(cmd: &ArchCommand) -> CliResult<()> {
    match cmd {
        ArchCommand::List => {
            for name in Architecture::builtin_names() {
                println!("{name}");
            }
            println!("line-N");
            println!("grid-RxC");
        }
        ArchCommand::Show {
            name,
            arch_file,
            durations,
        } => {
            let arch = load_arch(name.as_deref(), arch_file.as_deref(), durations.as_deref())?;
            print!("{}", describe(&arch));
        }
    }
    Ok(())
}

fn describe(arch: &Architecture) -> String {
    let mut out = String::new();
    let n = arch.num_qubits();
    let _ = writeln!(out, "{}", arch.name());
    let _ = writeln!(out, "{} qubits, {} edges", n, arch.edges().len());
    let edges: Vec<String> = arch
        .edges()
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    let _ = writeln!(out, "edges: {}", edges.join(" "));
    if arch.has_grid() {
        let coords: Vec<(i32, i32)> = (0..n).filter_map(|p| arch.coordinates(p)).collect();
        let rows = coords.iter().map(|c| c.0).max().unwrap_or(0) + 1;
        let cols = coords.iter().map(|c| c.1).max().unwrap_or(0) + 1;
        let _ = writeln!(out, "grid: {rows} x {cols}");
    } else {
        let _ = writeln!(out, "grid: none");
    }
    let durations: Vec<String> = arch
        .durations()
        .iter()
        .map(|(k, d)| format!("{k}={d}"))
        .collect();
    let _ = writeln!(out, "durations: {}", durations.join(" "));
    let d = arch.distances();
    let mut total = 0u64;
    let mut pairs = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            total += u64::from(d.get(a, b));
            pairs += 1;
        }
    }
    let mean = if pairs == 0 {
        0.0
    } else {
        total as f64 / pairs as f64
    };
    let _ = writeln!(out, "distance: diameter {}, mean {:.3}", d.diameter(), mean);
    out
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let arch = args.arch.load()?;
    let original = read_circuit(&args.original)?;
    let text = fs::read_to_string(&args.routed)
        .with_context(|| format!("cannot read {}", args.routed.display()))
        .code(EXIT_PARSE)?;
    let mc = qasm::parse_mapped(&text)
        .with_context(|| args.routed.display().to_string())
        .code(EXIT_PARSE)?;
    if mc.num_physical > arch.num_qubits() {
        return Err(anyhow!(
            "routed circuit uses {} qubits, {} has {}",
            mc.num_physical,
            arch.name(),
            arch.num_qubits()
        ))
        .code(EXIT_ARCH);
    }
    let mut failed = false;
    let origins = assign_origins(&original, &mc);
    match asap_schedule_with_origins(&mc, &arch, &origins) {
        Err(e) => {
            println!("compliance: FAIL ({e})");
            failed = true;
        }
        Ok(s) => {
            println!("compliance: ok");
            let violations = validate_schedule(&s, &arch);
            debug_assert!(violations.is_empty(), "asap schedules are valid");
            let report = permutation_check(&original, &s);
            if report.ok() {
                println!("permutation check: ok");
            } else {
                failed = true;
                println!("permutation check: FAIL");
                for m in &report.mismatches {
                    println!("  {m}");
                }
            }
        }
    }
    match statevector_equiv(&original, &mc, args.tol) {
        Ok(eq) => {
            println!(
                "statevector: {} (overlap {:.12}, max deviation {:.3e}, {} qubits)",
                if eq.passed { "ok" } else { "FAIL" },
                eq.overlap,
                eq.max_deviation,
                eq.qubits_simulated
            );
            failed |= !eq.passed;
        }
        Err(e @ VerifyError::TooLarge { .. }) => println!("statevector: skipped ({e})"),
        Err(e) => {
            println!("statevector: FAIL ({e})");
            failed = true;
        }
    }
    if failed {
        return Err(anyhow!("verification failed")).code(EXIT_VERIFY);
    }
    Ok(())
}

fn cmd_depth(args: &DepthArgs) -> CliResult<()> {
    let durations = match &args.durations {
        Some(choice) => load_durations(choice)?,
        None => DurationMap::default(),
    };
    let c = read_circuit(&args.input)?;
    println!("{}", original_depth(&c, &durations));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Route(a) => cmd_route(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Arch { command } => cmd_arch(command),
        Command::Verify(a) => cmd_verify(a),
        Command::Depth(a) => cmd_depth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
