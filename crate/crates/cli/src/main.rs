//! Command-line surface: clustering runs, synthetic benchmarks, sweeps,
//! model selection, projections, and scoring.

mod io;

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperclust_core::annealing::{run_restarts, ChainConfig, Initial, Schedule};
use hyperclust_core::compression::Clustering;
use hyperclust_core::entropy::ObjectiveKind;
use hyperclust_core::evaluation::{multi_projection, simple_projection, ContingencyTable};
use hyperclust_core::generator::{evaluate_cell, generate, grid_points, PlantedConfig};
use hyperclust_core::model_selection::{mdl_sweep, nats_to_bits, MDL_CAVEAT};

use crate::io::{
    read_assignment_file, read_edge_list_file, render_assignments, render_edge_list, sha256_hex,
    RunManifest, ScheduleManifest,
};

/// Environment variable overriding the worker thread count.
const THREADS_ENV: &str = "HYPERCLUST_THREADS";

#[derive(Parser)]
#[command(
    name = "hyperclust",
    version,
    about = "Hypergraph clustering by compression entropy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a hyperedge-list file by annealing.
    Cluster(ClusterArgs),
    /// Generate a two-community planted-partition hypergraph.
    Generate(GenerateArgs),
    /// Grid sweep of recovery scores over the planted proportions.
    Sweep(SweepArgs),
    /// Description-length selection of the cluster count.
    Mdl(MdlArgs),
    /// Project a hypergraph to a dyadic edge list.
    Project(ProjectArgs),
    /// Score a predicted partition against ground truth.
    Score(ScoreArgs),
    /// Convert the simplex triple format (nverts/simplices/labels) to an
    /// edge list plus truth TSV.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Simple,
    Multi,
    DegreeCorrected,
    RbGraph,
}

impl ObjectiveArg {
    fn kind(self) -> ObjectiveKind {
        match self {
            ObjectiveArg::Simple => ObjectiveKind::SimpleHypergraph,
            ObjectiveArg::Multi => ObjectiveKind::MultiHypergraph,
            ObjectiveArg::DegreeCorrected => ObjectiveKind::DegreeCorrected,
            ObjectiveArg::RbGraph => ObjectiveKind::RosvallBergstromGraph,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleArg {
    Constant,
    Geometric,
    Linear,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProjectionMode {
    Simple,
    Multi,
}

/// Annealing knobs shared by the run-producing subcommands.
#[derive(Args)]
struct AnnealOpts {
    /// Proposals per chain.
    #[arg(long, default_value_t = 20_000)]
    steps: u64,
    /// Independent chains; the lowest-entropy result wins.
    #[arg(long, default_value_t = 1)]
    restarts: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inverse temperature at the start of the schedule.
    #[arg(long, default_value_t = 0.1)]
    beta0: f64,
    /// Inverse temperature reached at the final step.
    #[arg(long = "beta-final", default_value_t = 10.0)]
    beta_final: f64,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Geometric)]
    schedule: ScheduleArg,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::DegreeCorrected)]
    objective: ObjectiveArg,
}

impl AnnealOpts {
    fn schedule(&self) -> Schedule {
        match self.schedule {
            ScheduleArg::Constant => Schedule::Constant { beta: self.beta0 },
            ScheduleArg::Geometric => {
                Schedule::geometric_reaching(self.beta0, self.beta_final, self.steps)
            }
            ScheduleArg::Linear => Schedule::Linear {
                beta0: self.beta0,
                beta1: self.beta_final,
                steps: self.steps,
            },
        }
    }

    fn chain_config(&self, m: usize) -> ChainConfig {
        ChainConfig {
            m,
            steps: self.steps,
            schedule: self.schedule(),
            seed: self.seed,
            objective: self.objective.kind(),
            initial: Initial::Random,
            trace_every: None,
        }
    }

    fn schedule_name(&self) -> &'static str {
        match self.schedule {
            ScheduleArg::Constant => "constant",
            ScheduleArg::Geometric => "geometric",
            ScheduleArg::Linear => "linear",
        }
    }
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    clusters: usize,
    #[command(flatten)]
    anneal: AnnealOpts,
    /// Drop duplicate hyperedge lines instead of keeping multiplicities.
    #[arg(long)]
    dedupe: bool,
    /// Permit a vertex to appear multiple times within one edge.
    #[arg(long)]
    allow_multi_inclusion: bool,
    /// Record a trace point every this many steps into `<prefix>.trace.csv`.
    #[arg(long)]
    trace_every: Option<u64>,
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    /// Vertices per community (two communities are planted).
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p2: f64,
    #[arg(long)]
    p3: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Vertices per community.
    #[arg(long)]
    n: usize,
    /// Lattice points per axis over [0, 1].
    #[arg(long)]
    resolution: usize,
    #[arg(long, default_value_t = 5)]
    graphs_per_cell: usize,
    #[command(flatten)]
    anneal: AnnealOpts,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MdlArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    m_min: usize,
    #[arg(long)]
    m_max: usize,
    #[command(flatten)]
    anneal: AnnealOpts,
    #[arg(long)]
    dedupe: bool,
    #[arg(long)]
    allow_multi_inclusion: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProjectArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: ProjectionMode,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    predicted: PathBuf,
}

#[derive(Args)]
struct ConvertArgs {
    /// File with one integer per line: the size of each simplex.
    #[arg(long)]
    nverts: PathBuf,
    /// File with the concatenated 1-based vertex ids, one per line.
    #[arg(long)]
    simplices: PathBuf,
    /// Optional per-vertex ground-truth labels (`label` or `id label` lines).
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> Result<()> {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .parse()
            .with_context(|| format!("{THREADS_ENV} must be a positive integer"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("thread pool setup failed")?;
    }
    match Cli::parse().command {
        Command::Cluster(args) => run_cluster(args),
        Command::Generate(args) => run_generate(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Mdl(args) => run_mdl(args),
        Command::Project(args) => run_project(args),
        Command::Score(args) => run_score(args),
        Command::Convert(args) => run_convert(args),
    }
}

fn run_cluster(args: ClusterArgs) -> Result<()> {
    let started = Instant::now();
    let (parsed, text) = read_edge_list_file(&args.input, args.allow_multi_inclusion, args.dedupe)?;
    let mut config = args.anneal.chain_config(args.clusters);
    config.trace_every = args.trace_every;
    let result = run_restarts(&parsed.hypergraph, &config, args.anneal.restarts)?;

    let manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        command: "cluster".to_string(),
        input_path: args.input.display().to_string(),
        input_sha256: sha256_hex(text.as_bytes()),
        objective: config.objective.name().to_string(),
        clusters: args.clusters,
        steps: args.anneal.steps,
        restarts: args.anneal.restarts,
        seed: args.anneal.seed,
        schedule: ScheduleManifest {
            kind: args.anneal.schedule_name().to_string(),
            beta0: args.anneal.beta0,
            beta_final: args.anneal.beta_final,
        },
        dedupe: args.dedupe,
        allow_multi_inclusion: args.allow_multi_inclusion,
        best_ln_z_nats: result.best_ln_z,
        best_entropy_bits: nats_to_bits(result.best_ln_z),
        accepted_count: result.accepted_count,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        vertex_labels: parsed.labels.clone(),
    };

    let assignments = render_assignments(&parsed.labels, result.best_clustering.labels());
    write_file(
        &with_suffix(&args.out_prefix, ".assignments.tsv"),
        &assignments,
    )?;
    write_file(
        &with_suffix(&args.out_prefix, ".manifest.json"),
        &format!("{}\n", serde_json::to_string_pretty(&manifest)?),
    )?;
    if args.trace_every.is_some() {
        let mut csv = String::from("t,current_ln_z,best_ln_z\n");
        for point in result.trace.as_deref().unwrap_or(&[]) {
            csv.push_str(&format!(
                "{},{},{}\n",
                point.t, point.current_ln_z, point.best_ln_z
            ));
        }
        write_file(&with_suffix(&args.out_prefix, ".trace.csv"), &csv)?;
    }
    println!(
        "best entropy {:.6} nats ({:.6} bits) over {} restarts",
        result.best_ln_z,
        nats_to_bits(result.best_ln_z),
        args.anneal.restarts
    );
    Ok(())
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    let (hypergraph, truth) = generate(&PlantedConfig {
        cluster_size: args.n,
        p2: args.p2,
        p3: args.p3,
        seed: args.seed,
    })?;
    let labels: Vec<String> = (0..hypergraph.vertex_count())
        .map(|v| v.to_string())
        .collect();
    write_file(&args.out, &render_edge_list(&hypergraph, &labels))?;
    write_file(
        &with_suffix(&args.out, ".truth.tsv"),
        &render_assignments(&labels, truth.labels()),
    )?;
    println!(
        "wrote {} edges over {} vertices",
        hypergraph.edge_count(),
        hypergraph.vertex_count()
    );
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    use rayon::prelude::*;

    let points = grid_points(args.resolution)?;
    let mut done: BTreeSet<(String, String)> = BTreeSet::new();
    let existing = match std::fs::read_to_string(&args.out) {
        Ok(text) => {
            for line in text.lines().skip(1) {
                let mut fields = line.split(',');
                if let (Some(p2), Some(p3)) = (fields.next(), fields.next()) {
                    done.insert((p2.to_string(), p3.to_string()));
                }
            }
            Some(text)
        }
        Err(_) => None,
    };

    let missing: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(p2, p3)| !done.contains(&(format_prob(p2), format_prob(p3))))
        .collect();
    if missing.is_empty() {
        println!("sweep already complete: {}", args.out.display());
        return Ok(());
    }

    let template = args.anneal.chain_config(2);
    let cells: Result<Vec<_>, _> = missing
        .par_iter()
        .map(|&(p2, p3)| {
            evaluate_cell(
                args.n,
                p2,
                p3,
                args.graphs_per_cell,
                &template,
                args.anneal.restarts,
            )
        })
        .collect();

    let mut out = match existing {
        Some(text) => text,
        None => String::from("p2,p3,mean_ari,n_graphs,n_restarts\n"),
    };
    for cell in cells? {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_prob(cell.p2),
            format_prob(cell.p3),
            cell.mean_ari,
            cell.n_graphs,
            cell.n_restarts
        ));
    }
    write_file(&args.out, &out)?;
    println!(
        "evaluated {} cells -> {}",
        missing.len(),
        args.out.display()
    );
    Ok(())
}

fn run_mdl(args: MdlArgs) -> Result<()> {
    if args.m_min < 1 || args.m_min > args.m_max {
        bail!("require 1 <= m-min <= m-max");
    }
    let (parsed, _) = read_edge_list_file(&args.input, args.allow_multi_inclusion, args.dedupe)?;
    let template = args.anneal.chain_config(args.m_min);
    let report = mdl_sweep(
        &parsed.hypergraph,
        args.m_min..=args.m_max,
        &template,
        args.anneal.restarts,
    )?;

    let mut csv = String::from("m,partition_bits,conditional_bits,total_bits\n");
    for record in &report.records {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            record.m, record.partition_bits, record.conditional_bits, record.total_bits
        ));
    }
    write_file(&args.out, &csv)?;
    println!("m* = {}", report.m_star);
    println!("{MDL_CAVEAT}");
    Ok(())
}

fn run_project(args: ProjectArgs) -> Result<()> {
    let (parsed, _) = read_edge_list_file(&args.input, true, false)?;
    let projected = match args.mode {
        ProjectionMode::Simple => simple_projection(&parsed.hypergraph),
        ProjectionMode::Multi => multi_projection(&parsed.hypergraph),
    };
    write_file(&args.out, &render_edge_list(&projected, &parsed.labels))?;
    println!("wrote {} dyadic edges", projected.edge_count());
    Ok(())
}

fn run_score(args: ScoreArgs) -> Result<()> {
    let truth_rows = read_assignment_file(&args.truth)?;
    let predicted_rows = read_assignment_file(&args.predicted)?;
    if truth_rows.len() != predicted_rows.len() {
        bail!(
            "partition length mismatch: {} vs {}",
            truth_rows.len(),
            predicted_rows.len()
        );
    }
    let predicted_by_label: HashMap<&str, &str> = predicted_rows
        .iter()
        .map(|(label, cluster)| (label.as_str(), cluster.as_str()))
        .collect();

    let mut truth_tokens = Interner::default();
    let mut predicted_tokens = Interner::default();
    let mut truth_labels = Vec::with_capacity(truth_rows.len());
    let mut predicted_labels = Vec::with_capacity(truth_rows.len());
    for (label, cluster) in &truth_rows {
        let Some(predicted) = predicted_by_label.get(label.as_str()) else {
            bail!("vertex `{label}` is missing from the predicted partition");
        };
        truth_labels.push(truth_tokens.intern(cluster));
        predicted_labels.push(predicted_tokens.intern(predicted));
    }

    let truth = Clustering::new(truth_labels, truth_tokens.len().max(1))
        .expect("interned labels are in range");
    let predicted = Clustering::new(predicted_labels, predicted_tokens.len().max(1))
        .expect("interned labels are in range");
    let table = ContingencyTable::new(&truth, &predicted)?;
    println!("ari\t{}", table.adjusted_rand_index());
    println!("truth_cluster,predicted_cluster,count");
    for (a, b, count) in table.cells() {
        println!(
            "{},{},{count}",
            truth_tokens.token(a),
            predicted_tokens.token(b)
        );
    }
    Ok(())
}

fn run_convert(args: ConvertArgs) -> Result<()> {
    let sizes = read_integers(&args.nverts)?;
    let vertices = read_integers(&args.simplices)?;
    let expected: usize = sizes.iter().sum();
    if vertices.len() != expected {
        bail!(
            "simplices file has {} ids, sizes sum to {expected}",
            vertices.len()
        );
    }
    let mut edges = String::new();
    let mut offset = 0usize;
    for &size in &sizes {
        let members: Vec<String> = vertices[offset..offset + size]
            .iter()
            .map(|id| id.to_string())
            .collect();
        edges.push_str(&members.join(" "));
        edges.push('\n');
        offset += size;
    }
    write_file(&with_suffix(&args.out, ".edges"), &edges)?;

    if let Some(labels_path) = &args.labels {
        let text = std::fs::read_to_string(labels_path)
            .with_context(|| format!("cannot read {}", labels_path.display()))?;
        let mut truth = String::new();
        for (index, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let first = parts.next().expect("nonempty line");
            match parts.next() {
                Some(label) => truth.push_str(&format!("{first}\t{label}\n")),
                None => truth.push_str(&format!("{}\t{first}\n", index + 1)),
            }
        }
        write_file(&with_suffix(&args.out, ".truth.tsv"), &truth)?;
    }
    println!("wrote {} edges", sizes.len());
    Ok(())
}

fn read_integers(path: &Path) -> Result<Vec<usize>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    text.split_whitespace()
        .map(|token| {
            token
                .parse::<usize>()
                .with_context(|| format!("{}: bad integer `{token}`", path.display()))
        })
        .collect()
}

#[derive(Default)]
struct Interner {
    by_token: HashMap<String, usize>,
    tokens: Vec<String>,
}

impl Interner {
    fn intern(&mut self, token: &str) -> usize {
        if let Some(&index) = self.by_token.get(token) {
            return index;
        }
        self.tokens.push(token.to_string());
        self.by_token
            .insert(token.to_string(), self.tokens.len() - 1);
        self.tokens.len() - 1
    }

    fn token(&self, index: usize) -> &str {
        &self.tokens[index]
    }

    fn len(&self) -> usize {
        self.tokens.len()
    }
}

fn format_prob(p: f64) -> String {
    format!("{p}")
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}
