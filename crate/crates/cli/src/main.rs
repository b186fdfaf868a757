use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mcgraph::bounds::{verify_bound, BoundCheck};
use mcgraph::graph::{parse_edge_list, parse_labeled_edge_list, ring_of_cliques, write_edge_list};
use mcgraph::models::{
    ActiveNodes, CompleteOrEmpty, Dependency, FitOptions, Gnp, GraphSampler, PlantedModel,
    UnionModel,
};
use mcgraph::overlap::estimate_overlap;
use mcgraph::rng;
use mcgraph::stats::{fmt_opt, stats_report, STATS_CSV_HEADER};
use mcgraph::sweep::{p_grid, run_sweep, write_sweep_csv, SweepConfig};
use mcgraph::{enumerate_maximal_cliques, Graph};

/// Maximal-clique graph generative models and overlap experiments.
#[derive(Parser, Debug)]
#[command(name = "mcgraph", version)]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = "MCGRAPH_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print evaluation statistics of a graph as one CSV row.
    Stats(StatsArgs),
    /// List maximal cliques, one per line.
    Cliques(InputArgs),
    /// Fit the odds-product residual for a planted model.
    Fit(FitArgs),
    /// Write union samples as numbered edge-list files.
    Sample(SampleArgs),
    /// Estimate overlap and volume of a model.
    Overlap(OverlapArgs),
    /// Check a model's mean k-cycle count against a dependency level's bound.
    VerifyBounds(VerifyArgs),
    /// Sweep the planting probability and summarize sample statistics.
    Sweep(SweepArgs),
    /// Generate a synthetic graph.
    #[command(subcommand)]
    GenSynthetic(Synthetic),
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Treat node tokens as arbitrary labels and renumber them densely.
    #[arg(long)]
    remap: bool,
    /// Where to write the label-to-id map when --remap is set.
    #[arg(long, requires = "remap")]
    id_map_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Graph to correlate and normalize against.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct FitFlags {
    /// Target for the L2 norm of the expected-degree error.
    #[arg(long, default_value_t = 1e-8)]
    epsilon: f64,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
}

impl From<FitFlags> for FitOptions {
    fn from(f: FitFlags) -> Self {
        FitOptions {
            epsilon: f.epsilon,
            max_iters: f.max_iters,
        }
    }
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    p: f64,
    /// ei, ni or fd.
    #[arg(long)]
    kind: Dependency,
    #[command(flatten)]
    fit: FitFlags,
    /// Logits file, one value per line (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    kind: Dependency,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    out_dir: PathBuf,
    /// Write only the planted graph, without the residual.
    #[arg(long)]
    planted_only: bool,
    #[command(flatten)]
    fit: FitFlags,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModelName {
    Mcei,
    Mcni,
    Mcfd,
    Gnp,
    CompleteOrEmpty,
    ActiveNodes,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelName,
    /// Input graph for the mc* models.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Node count for the reference models.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: f64,
    /// Sample the planted graph only (mc* models).
    #[arg(long)]
    planted_only: bool,
    #[command(flatten)]
    fit: FitFlags,
}

#[derive(Args, Debug)]
struct OverlapArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Dependency level whose bound is checked.
    #[arg(long)]
    kind: Dependency,
    /// Cycle length (3 = triangles).
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Flat key=value file; keys match the long flag names.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    kind: Option<Dependency>,
    /// Number of evenly spaced p values in [0, 1] (default 10).
    #[arg(long)]
    grid: Option<usize>,
    /// Explicit comma-separated p values (overrides --grid).
    #[arg(long, value_delimiter = ',')]
    p_values: Option<Vec<f64>>,
    /// Square the grid values.
    #[arg(long)]
    square_grid: bool,
    /// Samples per grid point (default 10).
    #[arg(long)]
    samples: Option<usize>,
    /// Sample pairs for pairwise overlap (default samples / 2).
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// CSV output (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Synthetic {
    /// Cliques joined in a ring by single edges.
    RingOfCliques {
        #[arg(long, default_value_t = 10)]
        cliques: usize,
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Erdős–Rényi G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring thread pool")?;
    }
    match cli.command {
        Command::Stats(args) => cmd_stats(args),
        Command::Cliques(args) => cmd_cliques(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Overlap(args) => cmd_overlap(args),
        Command::VerifyBounds(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::GenSynthetic(which) => cmd_synthetic(which),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let parsed =
        parse_edge_list(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
    if parsed.self_loops_dropped > 0 {
        log::warn!(
            "{}: dropped {} self-loop(s)",
            path.display(),
            parsed.self_loops_dropped
        );
    }
    Ok(parsed.graph)
}

fn load_input(args: &InputArgs) -> Result<Graph> {
    if !args.remap {
        return read_graph(&args.input);
    }
    let file = File::open(&args.input).with_context(|| format!("opening {}", args.input.display()))?;
    let (parsed, map) = parse_labeled_edge_list(BufReader::new(file))
        .with_context(|| format!("reading {}", args.input.display()))?;
    if let Some(path) = &args.id_map_out {
        let out = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(out);
        map.write(&mut out)?;
        out.flush()?;
    }
    Ok(parsed.graph)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let g = load_input(&args.input)?;
    let reference = args.reference.as_deref().map(read_graph).transpose()?;
    if let Some(r) = &reference {
        if r.node_count() != g.node_count() {
            log::warn!(
                "reference has {} nodes, input {}; sequence correlations are undefined",
                r.node_count(),
                g.node_count()
            );
        }
    }
    let report = stats_report(&g, reference.as_ref());
    let mut out = output(None)?;
    writeln!(out, "{}", STATS_CSV_HEADER.join(","))?;
    writeln!(out, "{}", report.csv_row().join(","))?;
    out.flush()?;
    Ok(())
}

fn cmd_cliques(args: InputArgs) -> Result<()> {
    let g = load_input(&args)?;
    let cliques = enumerate_maximal_cliques(&g)?;
    let mut out = output(None)?;
    for c in cliques.cliques() {
        let line: Vec<String> = c.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    writeln!(out, "# count={} max_size={}", cliques.len(), cliques.max_size())?;
    out.flush()?;
    Ok(())
}

fn fit_union(input: Graph, p: f64, kind: Dependency, fit: FitFlags) -> Result<UnionModel> {
    let planted = PlantedModel::new(input, p, kind)?;
    let model = UnionModel::fit(planted, fit.into())?;
    if !model.residual.converged {
        log::warn!(
            "residual fit did not converge (error {:e} after {} iterations)",
            model.residual.final_error,
            model.residual.iterations
        );
    }
    Ok(model)
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    let g = load_input(&args.input)?;
    let model = fit_union(g, args.p, args.kind, args.fit)?;
    let fitted = &model.residual;
    let mut out = output(args.out.as_deref())?;
    for l in &fitted.logits {
        writeln!(out, "{l}")?;
    }
    out.flush()?;
    drop(out);
    let summary = format!(
        "converged,iterations,final_error\n{},{},{}",
        fitted.converged, fitted.iterations, fitted.final_error
    );
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<()> {
    let g = load_input(&args.input)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let sampler: Box<dyn GraphSampler> = if args.planted_only {
        Box::new(PlantedModel::new(g, args.p, args.kind)?)
    } else {
        Box::new(fit_union(g, args.p, args.kind, args.fit)?)
    };
    let width = args.count.saturating_sub(1).to_string().len().max(4);
    for i in 0..args.count {
        let sample = sampler.sample(&mut rng::stream(args.seed, i as u64));
        let path = args.out_dir.join(format!("sample_{i:0width$}.txt"));
        let mut out = BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        );
        write_edge_list(&sample, &mut out)?;
        out.flush()?;
    }
    Ok(())
}

fn build_sampler(args: &ModelArgs) -> Result<Box<dyn GraphSampler>> {
    let kind = match args.model {
        ModelName::Mcei => Some(Dependency::EdgeIndependent),
        ModelName::Mcni => Some(Dependency::NodeIndependent),
        ModelName::Mcfd => Some(Dependency::FullyDependent),
        _ => None,
    };
    if let Some(kind) = kind {
        let path = args
            .input
            .as_deref()
            .ok_or_else(|| anyhow!("--input is required for {:?}", args.model))?;
        let g = read_graph(path)?;
        return Ok(if args.planted_only {
            Box::new(PlantedModel::new(g, args.p, kind)?)
        } else {
            Box::new(fit_union(g, args.p, kind, args.fit)?)
        });
    }
    let n = args
        .n
        .ok_or_else(|| anyhow!("--n is required for {:?}", args.model))?;
    Ok(match args.model {
        ModelName::Gnp => Box::new(Gnp::new(n, args.p)?),
        ModelName::CompleteOrEmpty => Box::new(CompleteOrEmpty::new(n, args.p)?),
        ModelName::ActiveNodes => Box::new(ActiveNodes::new(n, args.p)?),
        _ => unreachable!("clique models handled above"),
    })
}

fn cmd_overlap(args: OverlapArgs) -> Result<()> {
    let sampler = build_sampler(&args.model)?;
    let est = estimate_overlap(sampler.as_ref(), args.pairs, args.seed)?;
    let mut out = output(None)?;
    writeln!(out, "overlap,volume,std_error,pairs")?;
    writeln!(
        out,
        "{},{},{},{}",
        fmt_opt(est.overlap),
        est.volume,
        est.std_error,
        est.pairs_used
    )?;
    out.flush()?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let sampler = build_sampler(&args.model)?;
    let check = verify_bound(sampler.as_ref(), args.kind, args.k, args.samples, args.seed)?;
    let mut out = output(None)?;
    writeln!(out, "{}", BoundCheck::CSV_HEADER.join(","))?;
    writeln!(out, "{}", check.csv_row().join(","))?;
    out.flush()?;
    Ok(())
}

fn parse_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{}: expected key=value", path.display(), i + 1))?;
        map.insert(key.trim().replace('_', "-"), value.trim().to_string());
    }
    Ok(map)
}

fn from_config<T>(config: &HashMap<String, String>, key: &str) -> Result<Option<T>>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    config
        .get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|e| anyhow!("config key {key}: {e}"))
        })
        .transpose()
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => parse_config(path)?,
        None => HashMap::new(),
    };
    const KNOWN: &[&str] = &[
        "input", "kind", "grid", "p-values", "square-grid", "samples", "pairs", "seed",
        "epsilon", "max-iters", "out",
    ];
    if let Some(unknown) = config.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        bail!("unknown config key {unknown}");
    }

    let input = args
        .input
        .or(from_config::<PathBuf>(&config, "input")?)
        .ok_or_else(|| anyhow!("--input is required"))?;
    let kind = args
        .kind
        .or(from_config(&config, "kind")?)
        .ok_or_else(|| anyhow!("--kind is required"))?;
    let square = args.square_grid || from_config::<bool>(&config, "square-grid")?.unwrap_or(false);
    let explicit = match args.p_values {
        Some(v) => Some(v),
        None => config
            .get("p-values")
            .map(|s| {
                s.split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|e| anyhow!("p-values: {e}")))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?,
    };
    let p_values = match explicit {
        Some(v) if square => v.into_iter().map(|p| p * p).collect(),
        Some(v) => v,
        None => p_grid(args.grid.or(from_config(&config, "grid")?).unwrap_or(10), square),
    };
    let samples = args.samples.or(from_config(&config, "samples")?).unwrap_or(10);
    let pairs = args
        .pairs
        .or(from_config(&config, "pairs")?)
        .unwrap_or((samples / 2).max(1));
    let seed = args.seed.or(from_config(&config, "seed")?).unwrap_or(0);
    let defaults = FitOptions::default();
    let fit = FitOptions {
        epsilon: args
            .epsilon
            .or(from_config(&config, "epsilon")?)
            .unwrap_or(defaults.epsilon),
        max_iters: args
            .max_iters
            .or(from_config(&config, "max-iters")?)
            .unwrap_or(defaults.max_iters),
    };
    let out_path = args.out.or(from_config::<PathBuf>(&config, "out")?);

    let g = read_graph(&input)?;
    let cfg = SweepConfig {
        kind,
        p_grid: p_values,
        samples_per_point: samples,
        pairs_for_overlap: pairs,
        seed,
        fit,
    };
    let rows = run_sweep(&g, &cfg)?;
    let mut out = output(out_path.as_deref())?;
    write_sweep_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_synthetic(which: Synthetic) -> Result<()> {
    let (g, out) = match which {
        Synthetic::RingOfCliques { cliques, size, out } => (ring_of_cliques(cliques, size)?, out),
        Synthetic::Gnp { n, p, seed, out } => {
            (Gnp::new(n, p)?.sample(&mut rng::stream(seed, 0)), out)
        }
    };
    let mut w = output(out.as_deref())?;
    write_edge_list(&g, &mut w)?;
    w.flush()?;
    Ok(())
}
