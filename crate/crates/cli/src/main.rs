use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gluedwalk::harness::{
    emit_figure_data, recheck, run, ExperimentConfig, ExperimentKind, FigureKind, FigureParams,
    ResultRecord, TauRule,
};
use gluedwalk::oracle::{from_text, to_text, GluedTrees, GraphKind, WidthPolicy};

/// Exit status when a declared bound check fails.
const CHECK_FAILED: u8 = 1;
/// Exit status for bad input (invalid config, unreadable file, ...).
const USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "gluedwalk", version, about = "Glued-trees walk experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exit probability of the column chain over time.
    WalkCurve(RunArgs),
    /// Trotterized circuit against exact evolution over step counts.
    TrotterScan(RunArgs),
    /// Eigenvalues of the reduced chain from the quantization condition.
    Spectrum(RunArgs),
    /// Defect transmission curve and a wave-packet run.
    Scattering(RunArgs),
    /// Time-averaged exit probability against its lower bound.
    Hitting(RunArgs),
    /// Deterministic traversals of G_n and of the hypercube.
    ClassicalTraversal(RunArgs),
    /// Monte-Carlo win rates of the query games.
    LowerboundMc(RunArgs),
    /// Run whatever experiment a config file describes.
    Run(RunArgs),
    /// Plot-ready CSV series.
    Figure(FigureArgs),
    /// Generate or check graph files.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Recompute the bound checks of a stored JSON record.
    Recheck { record: PathBuf },
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// TOML config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    /// Inclusive depth range, `LOW:HIGH`.
    #[arg(long, value_parser = parse_range)]
    n_range: Option<[u32; 2]>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum)]
    tau_rule: Option<TauArg>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    time_step: Option<f64>,
    /// Trotter step counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    steps: Option<Vec<u64>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    momentum: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Output stem: writes `<out>.json` and `<out>.csv`.
    #[arg(long)]
    out: Option<String>,
    /// Print the merged config as TOML and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TauArg {
    Lemma,
    Theorem,
}

#[derive(Args, Debug)]
struct FigureArgs {
    #[arg(value_enum)]
    kind: FigureArg,
    #[arg(long, default_value_t = 5)]
    n: u32,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    alpha: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    time: Option<f64>,
    /// CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FigureArg {
    TransmissionCurve,
    ExitProbabilityCurve,
    QuantizationLhs,
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// Write a named, colored graph in the text format.
    Generate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = KindArg::RandomCycle)]
        kind: KindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a graph file, verify it, and regenerate it from its seeds.
    Check { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    RandomCycle,
    Identified,
}

fn parse_range(s: &str) -> Result<[u32; 2], String> {
    let (a, b) = s.split_once(':').ok_or("expected LOW:HIGH")?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("`{x}`: {e}"));
    Ok([p(a)?, p(b)?])
}

struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(USAGE, e.to_string())
    }
}

fn merged_config(kind: Option<ExperimentKind>, a: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_toml(&text)
                .map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    match kind {
        Some(k) => cfg.kind = k,
        None if a.config.is_none() => return Err(Failure(USAGE, "`run` needs --config".into())),
        None => {}
    }
    if a.n.is_some() {
        cfg.n = a.n;
        cfg.n_range = None;
    }
    if a.n_range.is_some() {
        cfg.n_range = a.n_range;
        cfg.n = None;
    }
    macro_rules! over {
        ($($f:ident),*) => { $( if let Some(v) = a.$f { cfg.$f = v; } )* };
    }
    over!(gamma, epsilon, trials, seed, alpha, momentum);
    macro_rules! over_opt {
        ($($f:ident),*) => { $( if a.$f.is_some() { cfg.$f = a.$f; } )* };
    }
    over_opt!(budget, time, time_step, tolerance);
    if let Some(t) = a.tau_rule {
        cfg.tau_rule = match t {
            TauArg::Lemma => TauRule::Lemma,
            TauArg::Theorem => TauRule::Theorem,
        };
    }
    if let Some(s) = &a.steps {
        cfg.steps = s.clone();
    }
    if a.out.is_some() {
        cfg.out = a.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configure_workers() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("GLUED_WORKERS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure(USAGE, format!("GLUED_WORKERS=`{v}` is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn experiment(kind: Option<ExperimentKind>, a: &RunArgs) -> Result<(), Failure> {
    let cfg = merged_config(kind, a)?;
    if a.print_config {
        print!("{}", cfg.to_toml()?);
        return Ok(());
    }
    configure_workers()?;
    let record = run(&cfg)?;
    print!("{}", record.report());
    if let Some(out) = &cfg.out {
        let (json, csv) = record.write_outputs(Path::new(out))?;
        println!("wrote {} and {}", json.display(), csv.display());
    }
    if record.passed() {
        Ok(())
    } else {
        Err(Failure(CHECK_FAILED, "bound checks failed".into()))
    }
}

fn figure(a: &FigureArgs) -> Result<(), Failure> {
    let kind = match a.kind {
        FigureArg::TransmissionCurve => FigureKind::TransmissionCurve,
        FigureArg::ExitProbabilityCurve => FigureKind::ExitProbabilityCurve,
        FigureArg::QuantizationLhs => FigureKind::QuantizationLhs,
    };
    let params = FigureParams {
        n: a.n,
        alpha: a.alpha,
        samples: a.samples,
        time: a.time,
    };
    let csv = emit_figure_data(kind, &params)?.to_csv();
    match &a.out {
        Some(p) => {
            std::fs::write(p, csv).map_err(|e| Failure(USAGE, format!("{}: {e}", p.display())))?
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn graph(cmd: &GraphCommand) -> Result<(), Failure> {
    match cmd {
        GraphCommand::Generate { n, seed, kind, out } => {
            let kind = match kind {
                KindArg::RandomCycle => GraphKind::RandomCycle,
                KindArg::Identified => GraphKind::Identified,
            };
            let g = GluedTrees::generate(kind, *n, *seed)?
                .with_names(*seed, WidthPolicy::Fitting)?
                .with_coloring(*seed)?;
            let text = to_text(&g);
            match out {
                Some(p) => std::fs::write(p, text)
                    .map_err(|e| Failure(USAGE, format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        GraphCommand::Check { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure(USAGE, format!("{}: {e}", file.display())))?;
            let g = from_text(&text)
                .map_err(|e| Failure(CHECK_FAILED, format!("{}: {e}", file.display())))?;
            println!(
                "{}: {} n = {}, {} vertices, {} edges",
                file.display(),
                g.kind().label(),
                g.n(),
                g.vertex_count(),
                g.edges().len()
            );
            let seeds = g.seeds();
            let mut again = GluedTrees::generate(g.kind(), g.n(), seeds.graph)?;
            if let (Some(s), Some(naming)) = (seeds.names, g.naming()) {
                again = again.with_names(s, WidthPolicy::Fixed(naming.width()))?;
            }
            if let Some(s) = seeds.coloring {
                again = again.with_coloring(s)?;
            }
            let reproducible = seeds.names.is_some() == g.naming().is_some()
                && seeds.coloring.is_some() == g.coloring().is_some()
                && to_text(&again) == text;
            if reproducible {
                println!("regenerated from its seeds: identical");
                Ok(())
            } else {
                Err(Failure(
                    CHECK_FAILED,
                    "file does not match the graph its seeds generate".into(),
                ))
            }
        }
    }
}

fn recheck_record(path: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))?;
    let record = ResultRecord::from_json(&text)?;
    if !recheck(&record)? {
        return Err(Failure(
            CHECK_FAILED,
            "stored verdicts do not match the rows".into(),
        ));
    }
    println!("verdicts match the rows ({} checks)", record.checks.len());
    if record.passed() {
        Ok(())
    } else {
        Err(Failure(CHECK_FAILED, "bound checks failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::WalkCurve(a) => experiment(Some(ExperimentKind::WalkCurve), a),
        Command::TrotterScan(a) => experiment(Some(ExperimentKind::TrotterScan), a),
        Command::Spectrum(a) => experiment(Some(ExperimentKind::Spectrum), a),
        Command::Scattering(a) => experiment(Some(ExperimentKind::Scattering), a),
        Command::Hitting(a) => experiment(Some(ExperimentKind::Hitting), a),
        Command::ClassicalTraversal(a) => experiment(Some(ExperimentKind::ClassicalTraversal), a),
        Command::LowerboundMc(a) => experiment(Some(ExperimentKind::LowerboundMc), a),
        Command::Run(a) => experiment(None, a),
        Command::Figure(a) => figure(a),
        Command::Graph(g) => graph(g),
        Command::Recheck { record } => recheck_record(record),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("gluedwalk: {msg}");
            ExitCode::from(code)
        }
    }
}
