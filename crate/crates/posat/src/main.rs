use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use posat_core::dimacs::{parse_cnf_with_warnings, write_result};
use posat_core::{
    verify_model, HeuristicPolicy, OrderMode, RestartStrategy, SolverConfig, Verdict,
};

use posat::bench::{find_instances, parse_config_list, read_rows, run_bench, write_rows};
use posat::report::{cactus, cactus_svg, summarize, write_cactus, write_summary, Metric};
use posat::run::solve_with_timeout;

#[derive(Parser)]
#[command(name = "posat", version, about = "Partial order CDCL SAT solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one DIMACS CNF file.
    Solve(SolveArgs),
    /// Run a set of configurations over every .cnf file of a directory.
    Bench(BenchArgs),
    /// Build cactus series and summary tables from benchmark results.
    Report(ReportArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum Order {
    Total,
    Partial,
}

#[derive(Copy, Clone, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        matches!(self, Switch::On)
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Restarts {
    Lbd,
    Luby,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Input file, or `-` for standard input.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "partial")]
    order: Order,
    /// chrono, least-undos, most-undos, least-deps or most-deps.
    #[arg(long, default_value = "chrono")]
    heuristic: HeuristicPolicy,
    #[arg(long, value_enum, default_value = "off")]
    phase_saving: Switch,
    /// Live level count beyond which the dependency bit matrix is dropped.
    #[arg(long)]
    matrix_threshold: Option<usize>,
    #[arg(long, value_enum, default_value = "lbd")]
    restarts: Restarts,
    #[arg(long, value_enum, default_value = "on")]
    minimize: Switch,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    conflict_budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Write the search statistics as JSON.
    #[arg(long)]
    stats_out: Option<PathBuf>,
    /// Check the model against the input before reporting SAT.
    #[arg(long)]
    verify: bool,
}

#[derive(clap::Args)]
struct BenchArgs {
    dir: PathBuf,
    /// Comma separated labels (TO, TO-phase, PO, PO-least-undos, PO-most-undos,
    /// PO-least-deps, PO-most-deps) or `all`.
    #[arg(long, default_value = "all")]
    configs: String,
    /// Per-run limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Per-family summary; defaults to the results path with a `.summary.csv` suffix.
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ReportArgs {
    results: PathBuf,
    #[arg(long, default_value = "time")]
    metric: Metric,
    /// Separate series for satisfiable and unsatisfiable instances.
    #[arg(long)]
    split_sat: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    summary_out: Option<PathBuf>,
    /// Also draw the series as an SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args).map(|_| 0),
        Command::Report(args) => report(args).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}

fn seconds(value: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(value).map_err(|_| anyhow::anyhow!("invalid timeout {}", value))
}

fn solve(args: SolveArgs) -> Result<i32> {
    let (formula, warnings) = if args.file == Path::new("-") {
        parse_cnf_with_warnings(io::stdin().lock())
    } else {
        let file =
            File::open(&args.file).with_context(|| format!("opening {}", args.file.display()))?;
        parse_cnf_with_warnings(BufReader::new(file))
    }
    .with_context(|| format!("parsing {}", args.file.display()))?;
    for w in warnings {
        eprintln!("warning: {}", w);
    }

    let defaults = SolverConfig::default();
    let config = SolverConfig {
        order_mode: match args.order {
            Order::Total => OrderMode::Total,
            Order::Partial => OrderMode::Partial,
        },
        heuristic: args.heuristic,
        phase_saving: args.phase_saving.on(),
        matrix_threshold: args.matrix_threshold.unwrap_or(defaults.matrix_threshold),
        restart_strategy: match args.restarts {
            Restarts::Lbd => RestartStrategy::LbdAdaptive,
            Restarts::Luby => RestartStrategy::Luby,
        },
        minimize: args.minimize.on(),
        random_seed: args.seed,
        conflict_budget: args.conflict_budget,
        ..defaults
    };
    let timeout = args.timeout.map(seconds).transpose()?;

    let outcome = solve_with_timeout(&formula, config, timeout);
    if let Verdict::Sat(model) = &outcome.verdict {
        if args.verify && !verify_model(&formula, model)? {
            bail!("the model found does not satisfy the formula");
        }
    }
    let mut stdout = io::stdout().lock();
    if args.verify && outcome.verdict.is_sat() {
        writeln!(stdout, "c model verified")?;
    }
    write!(stdout, "{}", write_result(&outcome.verdict))?;
    stdout.flush()?;

    if let Some(path) = &args.stats_out {
        let json = serde_json::to_string_pretty(&outcome.stats)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(outcome.verdict.exit_code())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn bench(args: BenchArgs) -> Result<()> {
    let configs = parse_config_list(&args.configs)?;
    let instances = find_instances(&args.dir)?;
    if instances.is_empty() {
        bail!("no .cnf files in {}", args.dir.display());
    }
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let timeout = seconds(args.timeout)?;
    eprintln!(
        "running {} instances x {} configs on {} workers",
        instances.len(),
        configs.len(),
        workers
    );
    let rows = run_bench(&instances, &configs, Some(timeout), workers);
    for r in rows.iter().filter(|r| r.is_error()) {
        eprintln!("error: {}: {}", r.instance, r.error);
    }
    write_rows(create(&args.out)?, &rows)?;

    let summary_path = args.summary_out.unwrap_or_else(|| {
        let stem = args.out.file_stem().unwrap_or_default().to_string_lossy();
        args.out.with_file_name(format!("{}.summary.csv", stem))
    });
    let summary = summarize(&rows);
    write_summary(create(&summary_path)?, &summary)?;

    println!(
        "{:<16} {:<16} {:>5} {:>4} {:>10} {:>14} {:>14} {:>16}",
        "family", "config", "inst", "#to", "time", "checks", "undos/conflict", "checks/conflict"
    );
    for s in &summary {
        println!(
            "{:<16} {:<16} {:>5} {:>4} {:>10.2} {:>14} {:>14.1} {:>16.1}",
            s.family,
            s.config,
            s.inst,
            s.timeouts,
            s.time,
            s.checks,
            s.undos_per_conflict,
            s.checks_per_conflict
        );
    }
    Ok(())
}

fn report(args: ReportArgs) -> Result<()> {
    let file =
        File::open(&args.results).with_context(|| format!("opening {}", args.results.display()))?;
    let rows = read_rows(BufReader::new(file))?;
    let points = cactus(&rows, args.metric, args.split_sat);
    write_cactus(create(&args.out)?, &points)?;
    if let Some(path) = &args.summary_out {
        write_summary(create(path)?, &summarize(&rows))?;
    }
    if let Some(path) = &args.svg {
        fs::write(path, cactus_svg(&points, args.metric))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
