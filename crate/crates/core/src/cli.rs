//! The `gwcut` command line: argument parsing, config-file merging and the
//! artifact layout of every subcommand.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::datasets::{gen_moons, gen_two_cubes, CubesParams, Labeled, MoonsParams};
use crate::error::{Error, Result};
use crate::io;
use crate::oracle::brute_force_maxcut;
use crate::pca::pca_project;
use crate::pipeline::{
    run_gwa_once, run_gwa_weights, run_recursive, IterationResult, PipelineConfig, RecurseOn,
    Warning,
};
use crate::relaxation::SolverConfig;
use crate::rounding::{alpha_constant, DEFAULT_TRIALS};
use crate::svg;
use crate::vectorizer::{vectorize_corpus, vectors_to_csv, Lexicons, TargetList, DEFAULT_WINDOW};
use crate::weights::{build_weight_matrix_with, validate_weights, Metric, PointSet};

const DEFAULT_OUT_DIR: &str = "gwcut-out";
const DEMO_SIDE_EFFECTS: &str = include_str!("../fixtures/lexicons/side_effects.txt");
const DEMO_HUMAN: &str = include_str!("../fixtures/lexicons/human.txt");

#[derive(Debug, Parser)]
#[command(name = "gwcut", version, about = "Goemans-Williamson MaxCut clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a point set or weight matrix into two clusters.
    Cluster(ClusterArgs),
    /// Re-run the clustering on the projected embedding of the previous pass.
    Recurse(RecurseArgs),
    /// Turn a corpus into anchored co-occurrence probability vectors.
    Vectorize(VectorizeArgs),
    /// Write a synthetic dataset with its planted labels.
    Gen(GenArgs),
    /// Exact MaxCut by enumeration (n <= 22).
    Oracle(OracleArgs),
    /// Print the approximation constant and its minimizing angle.
    Alpha(AlphaArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rounding trials (random hyperplanes).
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// JSON file supplying any flag by its snake_case name.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dataset {
    Cubes,
    Moons,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricArg {
    Euclidean,
    SquaredEuclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurseOnArg {
    Pca,
    RawEmbedding,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Points CSV, one point per row.
    #[arg(long, conflicts_with_all = ["matrix", "gen"])]
    pub points: Option<PathBuf>,
    /// Weight matrix CSV, n rows of n values.
    #[arg(long, conflicts_with = "gen")]
    pub matrix: Option<PathBuf>,
    /// Generate the input instead of reading it.
    #[arg(long, value_enum)]
    pub gen: Option<Dataset>,
    /// Skip the first row of the points CSV.
    #[arg(long)]
    pub header: bool,
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DataArgs {
    /// Generated point count (even).
    #[arg(long)]
    pub count: Option<usize>,
    /// Moons Gaussian noise scale.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Distance between cube centers.
    #[arg(long)]
    pub separation: Option<f64>,
    /// Cube side length.
    #[arg(long)]
    pub edge: Option<f64>,
    /// Seed of the generator; defaults to `--seed`.
    #[arg(long)]
    pub data_seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub pca_dim: Option<usize>,
    /// Zero-pad the weight matrix to this size before relaxing.
    #[arg(long)]
    pub pad_to: Option<usize>,
    #[arg(long, value_enum)]
    pub metric: Option<MetricArg>,
    /// Rows of the embedding (defaults to the padded size).
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub max_sweeps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RecurseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long, value_enum)]
    pub recurse_on: Option<RecurseOnArg>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VectorizeArgs {
    /// Directory of .txt files or a JSON-lines file of {id, text}.
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub lexicon_side_effects: Option<PathBuf>,
    #[arg(long)]
    pub lexicon_human: Option<PathBuf>,
    /// Total window span around the anchor (even).
    #[arg(long)]
    pub window: Option<usize>,
    /// Comma-separated anchor followed by context tokens.
    #[arg(long)]
    pub targets: Option<String>,
    /// Cluster the resulting vectors.
    #[arg(long)]
    pub then_cluster: bool,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub dataset: Dataset,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, conflicts_with = "points")]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub header: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AlphaArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Values a `--config` file may supply; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub points: Option<PathBuf>,
    pub matrix: Option<PathBuf>,
    pub gen: Option<Dataset>,
    pub header: Option<bool>,
    pub count: Option<usize>,
    pub noise: Option<f64>,
    pub separation: Option<f64>,
    pub edge: Option<f64>,
    pub data_seed: Option<u64>,
    pub pca_dim: Option<usize>,
    pub pad_to: Option<usize>,
    pub metric: Option<MetricArg>,
    pub rank: Option<usize>,
    pub max_sweeps: Option<usize>,
    pub iterations: Option<usize>,
    pub recurse_on: Option<RecurseOnArg>,
    pub corpus: Option<PathBuf>,
    pub lexicon_side_effects: Option<PathBuf>,
    pub lexicon_human: Option<PathBuf>,
    pub window: Option<usize>,
    pub targets: Option<String>,
    pub then_cluster: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| Error::file(path, format!("invalid config: {e}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub artifacts: Vec<String>,
    pub timings: Vec<Timing>,
}

struct Run {
    out_dir: PathBuf,
    artifacts: Vec<String>,
    timings: Vec<Timing>,
    clock: Instant,
}

impl Run {
    fn new(out_dir: PathBuf) -> Self {
        Self {
            out_dir,
            artifacts: Vec::new(),
            timings: Vec::new(),
            clock: Instant::now(),
        }
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        io::write_text(&self.out_dir.join(name), contents)?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn lap(&mut self, stage: &str) {
        self.timings.push(Timing {
            stage: stage.to_string(),
            seconds: self.clock.elapsed().as_secs_f64(),
        });
        self.clock = Instant::now();
    }

    fn finish(mut self, command: &str, config: Value, seed: u64) -> Result<RunManifest> {
        self.artifacts.push("manifest.json".to_string());
        let manifest = RunManifest {
            command: command.to_string(),
            config,
            seed,
            artifacts: self.artifacts,
            timings: self.timings,
        };
        io::write_text(&self.out_dir.join("manifest.json"), &io::to_json(&manifest)?)?;
        Ok(manifest)
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

struct Common {
    seed: u64,
    trials: usize,
    threads: usize,
    out_dir: PathBuf,
}

fn resolve_common(c: &CommonArgs, file: &ConfigFile) -> Result<Common> {
    let threads = pick(c.threads, file.threads, 1);
    if threads == 0 {
        return Err(Error::input("--threads must be >= 1"));
    }
    Ok(Common {
        seed: pick(c.seed, file.seed, 0),
        trials: pick(c.trials, file.trials, DEFAULT_TRIALS),
        threads,
        out_dir: pick(c.out_dir.clone(), file.out_dir.clone(), PathBuf::from(DEFAULT_OUT_DIR)),
    })
}

fn resolve_pipeline(s: &SolveArgs, file: &ConfigFile, common: &Common, iterations: usize) -> PipelineConfig {
    let metric = match pick(s.metric, file.metric, MetricArg::Euclidean) {
        MetricArg::Euclidean => Metric::Euclidean,
        MetricArg::SquaredEuclidean => Metric::SquaredEuclidean,
    };
    let defaults = SolverConfig::default();
    PipelineConfig {
        iterations,
        pca_dim: pick(s.pca_dim, file.pca_dim, 2),
        pad_to: s.pad_to.or(file.pad_to),
        trials: common.trials,
        seed: common.seed,
        threads: common.threads,
        metric,
        recurse_on: RecurseOn::Pca,
        solver: SolverConfig {
            rank: s.rank.or(file.rank),
            max_sweeps: pick(s.max_sweeps, file.max_sweeps, defaults.max_sweeps),
            seed: common.seed,
            ..defaults
        },
    }
}

enum Input {
    Points(PointSet, Option<Vec<u8>>),
    Matrix(Vec<Vec<f64>>),
}

fn generate(kind: Dataset, d: &DataArgs, file: &ConfigFile, seed: u64) -> Result<Labeled> {
    let seed = pick(d.data_seed, file.data_seed, seed);
    match kind {
        Dataset::Cubes => {
            let def = CubesParams::default();
            gen_two_cubes(&CubesParams {
                count: pick(d.count, file.count, def.count),
                separation: pick(d.separation, file.separation, def.separation),
                edge: pick(d.edge, file.edge, def.edge),
                seed,
            })
        }
        Dataset::Moons => {
            let def = MoonsParams::default();
            gen_moons(&MoonsParams {
                count: pick(d.count, file.count, def.count),
                noise: pick(d.noise, file.noise, def.noise),
                seed,
            })
        }
    }
}

fn resolve_input(a: &InputArgs, file: &ConfigFile, seed: u64, allow_matrix: bool) -> Result<Input> {
    let header = a.header || file.header.unwrap_or(false);
    let points = a.points.clone().or(file.points.clone());
    let matrix = a.matrix.clone().or(file.matrix.clone());
    let gen = a.gen.or(file.gen);
    match (points, matrix, gen) {
        (Some(p), None, None) => Ok(Input::Points(io::read_points_csv(&p, header)?, None)),
        (None, Some(m), None) if allow_matrix => Ok(Input::Matrix(io::read_matrix_csv(&m)?)),
        (None, Some(_), None) => Err(Error::input("this command does not accept --matrix")),
        (None, None, Some(kind)) => {
            let d = generate(kind, &a.data, file, seed)?;
            Ok(Input::Points(d.points, Some(d.labels)))
        }
        (None, None, None) => Err(Error::input("one of --points, --matrix or --gen is required")),
        _ => Err(Error::input("--points, --matrix and --gen are mutually exclusive")),
    }
}

fn pipeline_json(cfg: &PipelineConfig) -> Value {
    serde_json::to_value(cfg).unwrap_or(Value::Null)
}

fn axis_names(prefix: &str, dim: usize) -> Vec<String> {
    (1..=dim).map(|k| format!("{prefix}{k}")).collect()
}

/// Coordinates for plotting input points: as-is up to three dimensions,
/// otherwise their first two principal components.
fn plot_coords(points: &PointSet) -> Result<(PointSet, Vec<String>)> {
    if points.dim() <= 3 {
        Ok((points.clone(), axis_names("x", points.dim())))
    } else {
        Ok((pca_project(points, 2)?.coords, axis_names("PC", 2)))
    }
}

fn report_warnings(warnings: &[Warning]) {
    for w in warnings {
        match w {
            Warning::NotConverged { iteration, sweeps } => eprintln!(
                "warning: iteration {iteration}: relaxation did not converge in {sweeps} sweeps"
            ),
            Warning::DegenerateInput { iteration } => eprintln!(
                "warning: iteration {iteration}: all weights are zero (degenerate input)"
            ),
            Warning::DegenerateIteration { iteration } => eprintln!(
                "warning: iteration {iteration}: projected points collapsed, stopping early"
            ),
        }
    }
}

#[derive(Serialize)]
struct ClusterSummary<'a> {
    rounding: &'a crate::rounding::RoundingReport,
    converged: bool,
    sweeps: usize,
    quality: &'a crate::pipeline::ClusterQuality,
    explained_variance: &'a [f64],
    warnings: &'a [Warning],
    #[serde(skip_serializing_if = "Option::is_none")]
    label_agreement: Option<f64>,
}

fn label_agreement(result: &IterationResult, labels: Option<&[u8]>) -> Option<f64> {
    labels.map(|l| {
        let signs: Vec<i8> = l.iter().map(|&x| if x == 0 { 1 } else { -1 }).collect();
        result.partition.agreement(&signs)
    })
}

/// Writes the artifacts of one clustering pass under `prefix`.
fn write_cluster_outputs(
    run: &mut Run,
    result: &IterationResult,
    labels: Option<&[u8]>,
    plot: Option<(PointSet, Vec<String>)>,
    title: &str,
) -> Result<()> {
    run.write("partition.csv", &io::partition_to_csv(&result.partition))?;
    let summary = ClusterSummary {
        rounding: &result.report,
        converged: result.converged,
        sweeps: result.sweeps,
        quality: &result.quality,
        explained_variance: &result.projection.explained_variance,
        warnings: &result.warnings,
        label_agreement: label_agreement(result, labels),
    };
    run.write("report.json", &io::to_json(&summary)?)?;
    run.write("embedding.csv", &io::embedding_to_csv(&result.embedding))?;
    let sidecar = io::EmbeddingSidecar {
        ambient_dim: result.embedding.ambient_dim(),
        count: result.embedding.count(),
        objective: result.relaxed_objective,
        converged: result.converged,
        sweeps: result.sweeps,
    };
    run.write("embedding.json", &io::to_json(&sidecar)?)?;
    let (coords, names) = match plot {
        Some(p) => p,
        None => (
            result.projection.coords.clone(),
            axis_names("PC", result.projection.coords.dim()),
        ),
    };
    run.write(
        "scatter.svg",
        &svg::scatter(&coords, &result.partition.signs, title, &names),
    )?;
    Ok(())
}

fn print_cluster(result: &IterationResult) {
    let a = result.partition.signs.iter().filter(|&&s| s > 0).count();
    println!(
        "cut {} | relaxed objective {} | ratio {:.6} | clusters {} / {}",
        result.partition.cut_value,
        result.relaxed_objective,
        result.report.ratio_to_relaxation,
        a,
        result.partition.len() - a
    );
}

pub fn cmd_cluster(args: &ClusterArgs) -> Result<RunManifest> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let common = resolve_common(&args.common, &file)?;
    let cfg = resolve_pipeline(&args.solve, &file, &common, 1);
    cfg.validate()?;
    let mut run = Run::new(common.out_dir.clone());
    let input = resolve_input(&args.input, &file, common.seed, true)?;
    run.lap("load");
    let (result, labels, plot) = match input {
        Input::Points(points, labels) => {
            let r = run_gwa_once(&points, &cfg)?;
            (r, labels, Some(plot_coords(&points)?))
        }
        Input::Matrix(raw) => (run_gwa_weights(&validate_weights(&raw)?, &cfg)?, None, None),
    };
    run.lap("cluster");
    report_warnings(&result.warnings);
    write_cluster_outputs(&mut run, &result, labels.as_deref(), plot, "GWA clustering")?;
    if let Some(l) = &labels {
        run.write("labels.csv", &io::labels_to_csv(l))?;
    }
    run.lap("write");
    print_cluster(&result);
    run.finish("cluster", pipeline_json(&cfg), common.seed)
}

#[derive(Serialize)]
struct IterationSummary<'a> {
    iteration: usize,
    quality: &'a crate::pipeline::ClusterQuality,
    relaxed_objective: f64,
    cut_value: f64,
    converged: bool,
    sweeps: usize,
    explained_variance: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    label_agreement: Option<f64>,
}

pub fn cmd_recurse(args: &RecurseArgs) -> Result<RunManifest> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let common = resolve_common(&args.common, &file)?;
    let iterations = pick(args.iterations, file.iterations, 4);
    let mut cfg = resolve_pipeline(&args.solve, &file, &common, iterations);
    cfg.recurse_on = match pick(args.recurse_on, file.recurse_on, RecurseOnArg::Pca) {
        RecurseOnArg::Pca => RecurseOn::Pca,
        RecurseOnArg::RawEmbedding => RecurseOn::RawEmbedding,
    };
    cfg.validate()?;
    let mut run = Run::new(common.out_dir.clone());
    let Input::Points(points, labels) = resolve_input(&args.input, &file, common.seed, false)?
    else {
        return Err(Error::input("recurse needs --points or --gen"));
    };
    run.lap("load");
    let rec = run_recursive(&points, &cfg)?;
    run.lap("recurse");
    let warnings: Vec<Warning> = rec.warnings().cloned().collect();
    report_warnings(&warnings);

    let mut summaries = Vec::new();
    for it in &rec.iterations {
        let t = it.index;
        let input = it.points.as_ref().unwrap_or(&points);
        run.write(&format!("iter_{t}_points.csv"), &io::points_to_csv(input))?;
        run.write(
            &format!("iter_{t}_partition.csv"),
            &io::partition_to_csv(&it.partition),
        )?;
        run.write(&format!("iter_{t}_pca.csv"), &io::points_to_csv(it.pca_coords()))?;
        run.write(&format!("iter_{t}_quality.json"), &io::to_json(&it.quality)?)?;
        run.write(
            &format!("iter_{t}_scatter.svg"),
            &svg::scatter(
                it.pca_coords(),
                &it.partition.signs,
                &format!("Iteration {t}"),
                &axis_names("PC", it.pca_coords().dim()),
            ),
        )?;
        summaries.push(IterationSummary {
            iteration: t,
            quality: &it.quality,
            relaxed_objective: it.relaxed_objective,
            cut_value: it.partition.cut_value,
            converged: it.converged,
            sweeps: it.sweeps,
            explained_variance: &it.projection.explained_variance,
            label_agreement: label_agreement(it, labels.as_deref()),
        });
        println!(
            "iteration {t}: cut {} | separation ratio {:.6} | within variance {:e}",
            it.partition.cut_value, it.quality.separation_ratio, it.quality.within_cluster_variance
        );
    }
    let summary = json!({
        "iterations": summaries,
        "terminated_early": rec.terminated_early,
        "warnings": warnings,
    });
    run.write("summary.json", &io::to_json(&summary)?)?;
    if let Some(l) = &labels {
        run.write("labels.csv", &io::labels_to_csv(l))?;
    }
    run.lap("write");
    run.finish("recurse", pipeline_json(&cfg), common.seed)
}

fn load_lexicon(flag: &Option<PathBuf>, file: &Option<PathBuf>, demo: &str) -> Result<Vec<String>> {
    match flag.as_ref().or(file.as_ref()) {
        Some(path) => io::read_phrase_file(path),
        None => Ok(Lexicons::parse_phrase_list(demo)),
    }
}

pub fn cmd_vectorize(args: &VectorizeArgs) -> Result<RunManifest> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let common = resolve_common(&args.common, &file)?;
    let corpus = args
        .corpus
        .clone()
        .or(file.corpus.clone())
        .ok_or_else(|| Error::input("a corpus path is required"))?;
    let window = pick(args.window, file.window, DEFAULT_WINDOW);
    let targets = match args.targets.as_ref().or(file.targets.as_ref()) {
        Some(spec) => TargetList::parse(spec)?,
        None => TargetList::default(),
    };
    let side = load_lexicon(&args.lexicon_side_effects, &file.lexicon_side_effects, DEMO_SIDE_EFFECTS)?;
    let human = load_lexicon(&args.lexicon_human, &file.lexicon_human, DEMO_HUMAN)?;
    let lex = Lexicons::new(&side, &human)?;
    let then_cluster = args.then_cluster || file.then_cluster.unwrap_or(false);
    let cfg = resolve_pipeline(&args.solve, &file, &common, 1);
    if then_cluster {
        cfg.validate()?;
    }

    let mut run = Run::new(common.out_dir.clone());
    let docs = io::read_corpus(&corpus)?;
    run.lap("load");
    let vc = vectorize_corpus(&docs, &targets, &lex, window, common.threads)?;
    run.lap("vectorize");
    run.write("vectors.csv", &vectors_to_csv(&targets, &vc.vectors))?;
    println!("vectorized {} documents", vc.vectors.len());

    if then_cluster {
        let result = run_gwa_once(&vc.points, &cfg)?;
        run.lap("cluster");
        report_warnings(&result.warnings);
        let plot = (vc.points.clone(), targets.column_names());
        write_cluster_outputs(&mut run, &result, None, Some(plot), "Article clustering")?;
        print_cluster(&result);
    }
    run.lap("write");
    let config = json!({
        "corpus": corpus,
        "window": window,
        "targets": targets,
        "lexicon_side_effects": args.lexicon_side_effects.as_ref().or(file.lexicon_side_effects.as_ref()),
        "lexicon_human": args.lexicon_human.as_ref().or(file.lexicon_human.as_ref()),
        "side_effect_phrases": side.len(),
        "human_phrases": human.len(),
        "then_cluster": then_cluster,
        "pipeline": pipeline_json(&cfg),
    });
    run.finish("vectorize", config, common.seed)
}

pub fn cmd_gen(args: &GenArgs) -> Result<RunManifest> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let common = resolve_common(&args.common, &file)?;
    let mut run = Run::new(common.out_dir.clone());
    let d = generate(args.dataset, &args.data, &file, common.seed)?;
    run.lap("generate");
    run.write("points.csv", &io::points_to_csv(&d.points))?;
    run.write("labels.csv", &io::labels_to_csv(&d.labels))?;
    let (coords, names) = plot_coords(&d.points)?;
    let signs: Vec<i8> = d.labels.iter().map(|&l| if l == 0 { 1 } else { -1 }).collect();
    run.write("scatter.svg", &svg::scatter(&coords, &signs, "Planted labels", &names))?;
    run.lap("write");
    println!("generated {} points", d.points.len());
    let config = json!({
        "dataset": args.dataset,
        "count": d.points.len(),
        "noise": args.data.noise.or(file.noise),
        "separation": args.data.separation.or(file.separation),
        "edge": args.data.edge.or(file.edge),
        "data_seed": pick(args.data.data_seed, file.data_seed, common.seed),
    });
    run.finish("gen", config, common.seed)
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<RunManifest> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let common = resolve_common(&args.common, &file)?;
    let header = args.header || file.header.unwrap_or(false);
    let mut run = Run::new(common.out_dir.clone());
    let weights = match (
        args.matrix.clone().or(file.matrix.clone()),
        args.points.clone().or(file.points.clone()),
    ) {
        (Some(m), None) => validate_weights(&io::read_matrix_csv(&m)?)?,
        (None, Some(p)) => build_weight_matrix_with(&io::read_points_csv(&p, header)?, Metric::Euclidean)?,
        _ => return Err(Error::input("exactly one of --matrix or --points is required")),
    };
    run.lap("load");
    let exact = brute_force_maxcut(&weights)?;
    run.lap("enumerate");
    let out = json!({
        "value": exact.value,
        "signs": exact.partition.signs,
        "enumerated": exact.enumerated,
    });
    println!("maxcut value: {}", exact.value);
    println!(
        "partition: {}",
        exact
            .partition
            .signs
            .iter()
            .map(|s| if *s > 0 { "+1" } else { "-1" })
            .collect::<Vec<_>>()
            .join(" ")
    );
    run.write("oracle.json", &io::to_json(&out)?)?;
    run.write("partition.csv", &io::partition_to_csv(&exact.partition))?;
    run.finish("oracle", json!({ "n": weights.size() }), common.seed)
}

pub fn cmd_alpha(args: &AlphaArgs) -> Result<RunManifest> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let common = resolve_common(&args.common, &file)?;
    let mut run = Run::new(common.out_dir.clone());
    let a = alpha_constant();
    run.lap("minimize");
    println!("alpha {:.9}", a.alpha);
    println!("theta0 {:.9}", a.theta0);
    run.write("alpha.json", &io::to_json(&a)?)?;
    run.finish("alpha", json!({}), common.seed)
}

pub fn run(cli: &Cli) -> Result<RunManifest> {
    match &cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Recurse(a) => cmd_recurse(a),
        Command::Vectorize(a) => cmd_vectorize(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Alpha(a) => cmd_alpha(a),
    }
}
