//! Command-line front end: generate source networks, run bootstrap sampling
//! and sweeps, compute theory predictions, compare simulation against theory,
//! and run the cross-network analytics pipeline over TSV inputs.
//!
//! Every run writes a `run_meta.json` sidecar echoing the full configuration
//! (including seeds); CSV bodies are byte-identical for identical configs.
//! Exit codes: 0 success, 2 usage, 3 input parse error, 4 runtime error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use bootnet::clustering::{global_clustering, ClusteringMode};
use bootnet::components::{connected_components, ComponentKind};
use bootnet::crossnet::{
    self, binned_series, closeness_by_copy_status, copied_fraction_of_reciprocated, copy_ratios,
    fof_native_follow_stats, interaction_sampling_stats, interaction_subgraph, partition,
    reciprocity_ratios, similarity_by_link_class, social_interaction_ratios, AccountMapping,
    BinSpec, FriendSetMode, LinkClassSamples, Ratio, UserCategory,
};
use bootnet::generators::{generate, GeneratorSpec};
use bootnet::graph::{Graph, NodeId};
use bootnet::io::{
    self, csv_opt, induce_directed_from_requests, load_graph, read_edge_list, read_interactions,
    read_interests, read_mapping, read_requests, write_edge_list, write_sweep_cells_csv,
    write_sweep_csv, NodeIndex,
};
use bootnet::sampling::{derive_seed, measure, sample, SampleParams};
use bootnet::stats::{degree_stats, reciprocity};
use bootnet::theory::{
    gcc_predicate, gcc_threshold, predict_clustering_uncorrelated, predict_copied_clustering,
    predict_moments, predict_reciprocity, thinned_degree_pmf, InputsDigest, TheoryPrediction,
};

const OUT_DIR_ENV: &str = "BOOTNET_OUT_DIR";

#[derive(Parser, Serialize)]
#[command(name = "bootnet", version, about = "Bootstrapped-network sampling simulator and cross-network analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
enum Command {
    /// Generate a synthetic undirected source network.
    Generate(GenerateArgs),
    /// Run the bootstrap sampling process and emit the copied network.
    Sample(SampleArgs),
    /// Sweep the (p1, p2) grid with seeded replicas.
    Sweep(SweepArgs),
    /// Closed-form predictions from moments or a degree pmf.
    Theory(TheoryArgs),
    /// Join a sweep CSV with predictions and emit deviation columns.
    Compare(CompareArgs),
    /// Cross-network analytics over (target, source, mapping) files.
    Crossnet(CrossnetArgs),
    /// Structural measurements of a single graph.
    Metrics(MetricsArgs),
}

#[derive(Args, Serialize)]
struct CommonOut {
    /// Output directory (default: $BOOTNET_OUT_DIR or .)
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Which formats to emit (csv, json)
    #[arg(long, value_delimiter = ',', default_values_t = [String::from("csv"), String::from("json")])]
    emit: Vec<String>,
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    /// er | powerlaw | ring
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Mean degree (er)
    #[arg(long)]
    mean_degree: Option<f64>,
    /// Power-law exponent (powerlaw)
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    k_min: Option<u32>,
    /// Defaults to the structural cutoff sqrt(n * k_min)
    #[arg(long)]
    k_max: Option<u32>,
    /// Even lattice degree (ring)
    #[arg(long)]
    k: Option<u32>,
    /// Rewiring probability (ring)
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    /// Source edge-list TSV (undirected)
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    p1: f64,
    #[arg(long)]
    p2: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    replicas: u32,
    /// Copy each undirected link once instead of each direction independently
    #[arg(long, default_value_t = false)]
    undirected_copy: bool,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long)]
    source: PathBuf,
    /// Comma-separated node sampling rates
    #[arg(long, value_delimiter = ',')]
    p1_grid: Vec<f64>,
    /// Comma-separated link sampling rates
    #[arg(long, value_delimiter = ',')]
    p2_grid: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    replicas: u32,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args, Serialize)]
struct TheoryArgs {
    #[arg(long)]
    mean_k: Option<f64>,
    #[arg(long)]
    mean_k2: Option<f64>,
    /// Mixed in/out moment; defaults to mean_k2 (undirected source)
    #[arg(long)]
    mean_jk: Option<f64>,
    /// Degree pmf CSV with `degree,probability` rows
    #[arg(long)]
    pmf: Option<PathBuf>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    /// Source node count (for clustering predictions)
    #[arg(long)]
    n: Option<u64>,
    /// Source clustering coefficient (for the copied-clustering prediction)
    #[arg(long)]
    clustering_src: Option<f64>,
    /// Cap for the thinned pmf support
    #[arg(long)]
    k_max_out: Option<u32>,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args, Serialize)]
struct CompareArgs {
    /// Sweep CSV produced by the sweep subcommand
    #[arg(long)]
    sweep: PathBuf,
    /// Source mean degree
    #[arg(long)]
    mean_k: f64,
    /// Source second moment
    #[arg(long)]
    mean_k2: f64,
    /// Mixed moment; defaults to mean_k2
    #[arg(long)]
    mean_jk: Option<f64>,
    /// Source clustering (enables the clustering deviation column)
    #[arg(long)]
    clustering_src: Option<f64>,
    /// Giant-fraction cutoff for calling a GCC present empirically
    #[arg(long, default_value_t = 0.05)]
    giant_cutoff: f64,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args, Serialize)]
struct CrossnetArgs {
    /// Target edge-list TSV (directed unless --undirected-target)
    #[arg(long)]
    target: PathBuf,
    /// Source edge-list TSV (undirected)
    #[arg(long)]
    source: PathBuf,
    /// Mapping TSV `target_id<TAB>source_id`
    #[arg(long)]
    mapping: PathBuf,
    /// Treat the target file as undirected friendships (symmetrized)
    #[arg(long, default_value_t = false)]
    undirected_target: bool,
    /// Interaction log TSV `actor<TAB>author<TAB>kind<TAB>timestamp`
    #[arg(long)]
    interactions: Option<PathBuf>,
    /// Interest TSV `node<TAB>comma-separated labels`
    #[arg(long)]
    interests: Option<PathBuf>,
    /// Friend-request TSV `initiator<TAB>responder<TAB>outcome`; induces
    /// directionality for undirected targets
    #[arg(long)]
    requests: Option<PathBuf>,
    /// Friend set used by reciprocity ratios: copiable | copied
    #[arg(long, default_value = "copiable")]
    fr_mode: String,
    /// Bins for the activity/influence trend curves
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[command(flatten)]
    out: CommonOut,
}

#[derive(Args, Serialize)]
struct MetricsArgs {
    /// Edge-list TSV
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = false)]
    directed: bool,
    #[command(flatten)]
    out: CommonOut,
}

/// Tracks written files so a failed run removes its partial outputs.
struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
    emit_csv: bool,
    emit_json: bool,
}

#[derive(Debug)]
enum RunError {
    Parse(String),
    Runtime(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Parse(m) | RunError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<io::IoError> for RunError {
    fn from(e: io::IoError) -> Self {
        match e {
            io::IoError::Parse { .. } => RunError::Parse(e.to_string()),
            other => RunError::Runtime(other.to_string()),
        }
    }
}

macro_rules! runtime_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for RunError {
            fn from(e: $ty) -> Self {
                RunError::Runtime(e.to_string())
            }
        }
    )*};
}
runtime_from!(
    bootnet::graph::GraphError,
    bootnet::generators::GenError,
    bootnet::sampling::SampleError,
    bootnet::theory::TheoryError,
    crossnet::CrossnetError,
    std::io::Error,
    serde_json::Error
);

impl Outputs {
    fn new(common: &CommonOut) -> Result<Self, RunError> {
        let dir = common
            .out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir)?;
        Ok(Outputs {
            dir,
            written: Vec::new(),
            emit_csv: common.emit.iter().any(|e| e == "csv"),
            emit_json: common.emit.iter().any(|e| e == "json"),
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    fn write_text(&mut self, name: &str, body: &str) -> Result<(), RunError> {
        let p = self.path(name);
        fs::write(&p, body)?;
        Ok(())
    }

    fn write_json(&mut self, name: &str, value: &serde_json::Value) -> Result<(), RunError> {
        if !self.emit_json && name != "run_meta.json" {
            return Ok(());
        }
        let body = serde_json::to_string_pretty(value)?;
        self.write_text(name, &(body + "\n"))
    }

    fn write_csv(&mut self, name: &str, body: &str) -> Result<(), RunError> {
        if !self.emit_csv {
            return Ok(());
        }
        self.write_text(name, body)
    }

    fn cleanup(&self) {
        for p in &self.written {
            let _ = fs::remove_file(p);
        }
    }

    fn meta(&mut self, command: &str, config: &impl Serialize) -> Result<(), RunError> {
        let files: Vec<String> = self
            .written
            .iter()
            .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .collect();
        let value = json!({
            "tool": "bootnet",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": serde_json::to_value(config)?,
            "outputs": files,
        });
        self.write_json("run_meta.json", &value)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => run_tracked(&a.out, "generate", a, run_generate),
        Command::Sample(a) => run_tracked(&a.out, "sample", a, run_sample),
        Command::Sweep(a) => run_tracked(&a.out, "sweep", a, run_sweep),
        Command::Theory(a) => run_tracked(&a.out, "theory", a, run_theory),
        Command::Compare(a) => run_tracked(&a.out, "compare", a, run_compare),
        Command::Crossnet(a) => run_tracked(&a.out, "crossnet", a, run_crossnet),
        Command::Metrics(a) => run_tracked(&a.out, "metrics", a, run_metrics),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(RunError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run_tracked<A: Serialize>(
    common: &CommonOut,
    name: &str,
    args: &A,
    body: impl Fn(&A, &mut Outputs) -> Result<(), RunError>,
) -> Result<(), RunError> {
    let mut out = Outputs::new(common)?;
    match body(args, &mut out).and_then(|()| out.meta(name, args)) {
        Ok(()) => Ok(()),
        Err(e) => {
            out.cleanup();
            Err(e)
        }
    }
}

fn graph_summary(graph: &Graph) -> Result<serde_json::Value, RunError> {
    let stats = degree_stats(graph)?;
    let kind = if graph.is_directed() {
        ComponentKind::Weak
    } else {
        ComponentKind::Undirected
    };
    let comps = connected_components(graph, kind)?;
    Ok(json!({
        "node_count": graph.node_count(),
        "edge_count": graph.edge_count(),
        "directed": graph.is_directed(),
        "mean_k": stats.mean_k,
        "mean_k2": stats.mean_k2,
        "mean_jk": stats.mean_jk,
        "gcc_fraction": comps.gcc_fraction_of_nodes,
        "clustering_mean_local": global_clustering(graph, ClusteringMode::MeanLocal).ok(),
        "clustering_transitivity": global_clustering(graph, ClusteringMode::Transitivity).ok(),
    }))
}

fn run_generate(args: &GenerateArgs, out: &mut Outputs) -> Result<(), RunError> {
    let spec = match args.family.as_str() {
        "er" => GeneratorSpec::erdos_renyi(
            args.n,
            args.mean_degree
                .ok_or_else(|| RunError::Runtime("er requires --mean-degree".into()))?,
            args.seed,
        ),
        "powerlaw" => GeneratorSpec::powerlaw_config(
            args.n,
            args.gamma
                .ok_or_else(|| RunError::Runtime("powerlaw requires --gamma".into()))?,
            args.k_min
                .ok_or_else(|| RunError::Runtime("powerlaw requires --k-min".into()))?,
            args.k_max,
            args.seed,
        ),
        "ring" => GeneratorSpec::ring_rewire(
            args.n,
            args.k
                .ok_or_else(|| RunError::Runtime("ring requires --k".into()))?,
            args.beta
                .ok_or_else(|| RunError::Runtime("ring requires --beta".into()))?,
            args.seed,
        ),
        other => return Err(RunError::Runtime(format!("unknown family `{other}`"))),
    };
    let graph = generate(&spec)?;
    let path = out.path("edges.tsv");
    write_edge_list(&path, &graph, None)?;
    let summary = json!({
        "spec": serde_json::to_value(&spec)?,
        "realized": graph_summary(&graph)?,
    });
    out.write_json("generate_summary.json", &summary)
}

fn run_sample(args: &SampleArgs, out: &mut Outputs) -> Result<(), RunError> {
    let (source, index, _) = load_graph(&args.source, false)?;
    let mut replicas = Vec::new();
    for r in 0..args.replicas {
        let params = SampleParams::new(args.p1, args.p2, derive_seed(args.seed, 0, r as u64))?;
        let copied = if args.undirected_copy {
            bootnet::sampling::sample_undirected(&source, &params)?
        } else {
            sample(&source, &params)?
        };
        let suffix = if args.replicas == 1 {
            String::new()
        } else {
            format!("_r{r}")
        };
        let edge_path = out.path(&format!("copied_edges{suffix}.tsv"));
        write_copied_edges(&edge_path, &copied, &index)?;
        let node_body: String = copied
            .sampled_nodes
            .iter()
            .map(|&u| format!("{}\n", index.label(u)))
            .collect();
        let node_path = out.path(&format!("sampled_nodes{suffix}.tsv"));
        fs::write(&node_path, node_body)?;
        let m = measure(&copied);
        replicas.push(json!({
            "replica": r,
            "seed": params.seed,
            "sampled_nodes": copied.sampled_count(),
            "copied_edges": copied.graph.edge_count(),
            "gcc_weak_frac": m.gcc_weak_frac,
            "gcc_strong_frac": m.gcc_strong_frac,
            "reciprocity": m.reciprocity,
            "clustering_mean_local": m.clustering_mean_local,
            "clustering_transitivity": m.clustering_transitivity,
            "mean_k": m.mean_k,
            "mean_k2": m.mean_k2,
        }));
    }
    let summary = json!({
        "source": graph_summary(&source)?,
        "p1": args.p1,
        "p2": args.p2,
        "p_e": args.p1 * args.p2,
        "seed": args.seed,
        "undirected_copy": args.undirected_copy,
        "replicas": replicas,
    });
    out.write_json("sample_summary.json", &summary)
}

fn write_copied_edges(
    path: &Path,
    copied: &bootnet::sampling::CopiedNetwork,
    index: &NodeIndex,
) -> Result<(), RunError> {
    use std::io::Write;
    let file = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    let g = &copied.graph;
    for u in 0..g.node_count() as NodeId {
        for &v in g.out_neighbors(u) {
            if g.is_directed() || u < v {
                writeln!(
                    w,
                    "{}\t{}",
                    index.label(copied.sampled_nodes[u as usize]),
                    index.label(copied.sampled_nodes[v as usize])
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn run_sweep(args: &SweepArgs, out: &mut Outputs) -> Result<(), RunError> {
    let (source, _, _) = load_graph(&args.source, false)?;
    let report = bootnet::sampling::sweep(
        &source,
        &args.p1_grid,
        &args.p2_grid,
        args.replicas,
        args.seed,
    )?;
    if out.emit_csv {
        let rows_path = out.path("sweep.csv");
        write_sweep_csv(&rows_path, &report)?;
        let cells_path = out.path("sweep_cells.csv");
        write_sweep_cells_csv(&cells_path, &report)?;
    }
    out.write_json(
        "sweep_summary.json",
        &json!({
            "source": graph_summary(&source)?,
            "cells": report.cells.len(),
            "replicas": args.replicas,
            "seed": args.seed,
        }),
    )
}

fn read_pmf_csv(path: &Path) -> Result<BTreeMap<u32, f64>, RunError> {
    let body = fs::read_to_string(path)
        .map_err(|e| RunError::Parse(format!("{}: {e}", path.display())))?;
    let mut pmf = BTreeMap::new();
    for (lineno, line) in body.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with("degree") {
            continue;
        }
        let mut fields = t.split(',');
        let parse_err = || RunError::Parse(format!("{}:{}: expected `degree,probability`", path.display(), lineno + 1));
        let k: u32 = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(parse_err)?;
        let p: f64 = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(parse_err)?;
        pmf.insert(k, p);
    }
    if pmf.is_empty() {
        return Err(RunError::Parse(format!("{}: empty pmf", path.display())));
    }
    Ok(pmf)
}

fn run_theory(args: &TheoryArgs, out: &mut Outputs) -> Result<(), RunError> {
    let pmf = args.pmf.as_deref().map(read_pmf_csv).transpose()?;
    let (mean_k, mean_k2) = match (&pmf, args.mean_k, args.mean_k2) {
        (Some(p), _, _) => {
            let m1: f64 = p.iter().map(|(&k, &w)| k as f64 * w).sum();
            let m2: f64 = p.iter().map(|(&k, &w)| (k as f64) * (k as f64) * w).sum();
            (args.mean_k.unwrap_or(m1), args.mean_k2.unwrap_or(m2))
        }
        (None, Some(m1), Some(m2)) => (m1, m2),
        _ => {
            return Err(RunError::Runtime(
                "need --pmf or both --mean-k and --mean-k2".into(),
            ))
        }
    };
    let mean_jk = args.mean_jk.unwrap_or(mean_k2);
    let p_e = match (args.p1, args.p2) {
        (Some(p1), Some(p2)) => Some(p1 * p2),
        _ => None,
    };

    let mut predictions: Vec<TheoryPrediction> = Vec::new();
    let digest = |p_e: Option<f64>| InputsDigest {
        mean_k: Some(mean_k),
        mean_k2: Some(mean_k2),
        mean_jk: Some(mean_jk),
        p1: args.p1,
        p2: args.p2,
        p_e,
        n: args.n,
        clustering_src: args.clustering_src,
        pmf_support: pmf.as_ref().map(|p| p.len()),
    };

    let thr = gcc_threshold(mean_k, mean_jk)?;
    predictions.push(TheoryPrediction::GccThreshold {
        inputs: digest(p_e),
        raw: thr.raw,
        clamped: thr.clamped,
        achievable: thr.achievable,
        gcc_predicted: p_e.map(|pe| gcc_predicate(mean_k, mean_jk, pe)).transpose()?,
    });

    if let Some(pe) = p_e {
        let (m1c, m2c) = predict_moments(mean_k, mean_k2, pe)?;
        predictions.push(TheoryPrediction::Moments {
            inputs: digest(p_e),
            mean_k: m1c,
            mean_k2: m2c,
        });
        if let Some(src) = &pmf {
            let cap = args
                .k_max_out
                .unwrap_or_else(|| src.keys().max().copied().unwrap_or(0));
            let thinned = thinned_degree_pmf(src, pe, cap)?;
            predictions.push(TheoryPrediction::DegreePmf {
                inputs: digest(p_e),
                probs: thinned.probs.into_iter().collect(),
                truncated_mass: thinned.truncated_mass,
            });
        }
    }
    if let Some(p2) = args.p2 {
        predictions.push(TheoryPrediction::Reciprocity {
            inputs: digest(p_e),
            value: predict_reciprocity(p2)?,
        });
    }
    // clustering: the uncorrelated formula at the copied network's moments
    // (n_eff = p1 * n) when sampling rates are given, else at the source's
    let clustering_uncorrelated = match (args.n, p_e) {
        (Some(n), Some(pe)) => {
            let (m1c, m2c) = predict_moments(mean_k, mean_k2, pe)?;
            let n_eff = ((args.p1.unwrap_or(1.0) * n as f64).round() as u64).max(1);
            Some(predict_clustering_uncorrelated(n_eff, m1c, m2c)?)
        }
        (Some(n), None) => Some(predict_clustering_uncorrelated(n, mean_k, mean_k2)?),
        _ => None,
    };
    let copied_from_source = match (args.p2, args.clustering_src) {
        (Some(p2), Some(cs)) => Some(predict_copied_clustering(p2, cs)?),
        _ => None,
    };
    if clustering_uncorrelated.is_some() || copied_from_source.is_some() {
        predictions.push(TheoryPrediction::Clustering {
            inputs: digest(p_e),
            uncorrelated_raw: clustering_uncorrelated.map(|c| c.raw),
            uncorrelated_clamped: clustering_uncorrelated.map(|c| c.clamped),
            copied_from_source,
        });
    }

    out.write_json("theory.json", &serde_json::to_value(&predictions)?)
}

/// Cell means parsed back out of a sweep CSV (replica rows averaged).
struct SweepCell {
    p1: f64,
    p2: f64,
    p_e: f64,
    gcc_weak: f64,
    gcc_strong: f64,
    reciprocity: Option<f64>,
    clustering_mean_local: Option<f64>,
    mean_k: Option<f64>,
    mean_k2: Option<f64>,
}

fn parse_sweep_csv(path: &Path) -> Result<Vec<SweepCell>, RunError> {
    let body = fs::read_to_string(path)
        .map_err(|e| RunError::Parse(format!("{}: {e}", path.display())))?;
    let mut lines = body.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| RunError::Parse(format!("{}: empty file", path.display())))?;
    if header.1 != io::SWEEP_CSV_HEADER {
        return Err(RunError::Parse(format!(
            "{}: unexpected header (want `{}`)",
            path.display(),
            io::SWEEP_CSV_HEADER
        )));
    }
    // (p1, p2) -> accumulators
    let mut order: Vec<(String, String)> = Vec::new();
    let mut acc: BTreeMap<(String, String), Vec<Vec<Option<f64>>>> = BTreeMap::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(RunError::Parse(format!(
                "{}:{}: expected 11 columns",
                path.display(),
                lineno + 1
            )));
        }
        let key = (fields[0].to_string(), fields[1].to_string());
        if !acc.contains_key(&key) {
            order.push(key.clone());
        }
        let nums: Vec<Option<f64>> = fields
            .iter()
            .map(|f| if f.is_empty() { None } else { f.parse().ok() })
            .collect();
        acc.entry(key).or_default().push(nums);
    }
    let mean_of = |rows: &[Vec<Option<f64>>], idx: usize| -> Option<f64> {
        let vals: Vec<f64> = rows.iter().filter_map(|r| r[idx]).collect();
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    };
    let mut cells = Vec::new();
    for key in order {
        let rows = &acc[&key];
        let first = &rows[0];
        cells.push(SweepCell {
            p1: first[0].unwrap_or(f64::NAN),
            p2: first[1].unwrap_or(f64::NAN),
            p_e: first[2].unwrap_or(f64::NAN),
            gcc_weak: mean_of(rows, 4).unwrap_or(0.0),
            gcc_strong: mean_of(rows, 5).unwrap_or(0.0),
            reciprocity: mean_of(rows, 6),
            clustering_mean_local: mean_of(rows, 7),
            mean_k: mean_of(rows, 9),
            mean_k2: mean_of(rows, 10),
        });
    }
    Ok(cells)
}

fn run_compare(args: &CompareArgs, out: &mut Outputs) -> Result<(), RunError> {
    let cells = parse_sweep_csv(&args.sweep)?;
    let mean_jk = args.mean_jk.unwrap_or(args.mean_k2);
    let thr = gcc_threshold(args.mean_k, mean_jk)?;
    let mut body = String::from(
        "p1,p2,p_e,gcc_threshold,gcc_predicted,gcc_weak_mean,weak_gcc_present,weak_matches_prediction,gcc_strong_mean,strong_gcc_present,strong_matches_prediction,reciprocity_mean,reciprocity_predicted,reciprocity_dev,mean_k_mean,mean_k_predicted,mean_k_dev,mean_k2_mean,mean_k2_predicted,mean_k2_dev,clustering_mean_local_mean,clustering_predicted,clustering_dev\n",
    );
    for c in &cells {
        let predicted = gcc_predicate(args.mean_k, mean_jk, c.p_e.clamp(0.0, 1.0))?;
        let weak_present = c.gcc_weak > args.giant_cutoff;
        let strong_present = c.gcc_strong > args.giant_cutoff;
        let (mk_pred, mk2_pred) = predict_moments(args.mean_k, args.mean_k2, c.p_e.clamp(0.0, 1.0))?;
        let rec_pred = c.p2.clamp(0.0, 1.0);
        let clust_pred = args
            .clustering_src
            .map(|cs| predict_copied_clustering(rec_pred, cs))
            .transpose()?;
        let dev = |m: Option<f64>, p: f64| csv_opt(m.map(|m| m - p));
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            c.p1,
            c.p2,
            c.p_e,
            thr.raw,
            predicted,
            c.gcc_weak,
            weak_present,
            weak_present == predicted,
            c.gcc_strong,
            strong_present,
            strong_present == predicted,
            csv_opt(c.reciprocity),
            rec_pred,
            dev(c.reciprocity, rec_pred),
            csv_opt(c.mean_k),
            mk_pred,
            dev(c.mean_k, mk_pred),
            csv_opt(c.mean_k2),
            mk2_pred,
            dev(c.mean_k2, mk2_pred),
            csv_opt(c.clustering_mean_local),
            csv_opt(clust_pred),
            clust_pred
                .map(|cp| dev(c.clustering_mean_local, cp))
                .unwrap_or_default(),
        ));
    }
    out.write_csv("compare.csv", &body)?;
    out.write_json(
        "compare_summary.json",
        &json!({
            "cells": cells.len(),
            "gcc_threshold": thr.raw,
            "gcc_achievable": thr.achievable,
        }),
    )
}

fn ratio_cell(r: Option<Ratio>) -> String {
    r.map(|r| r.value().to_string()).unwrap_or_default()
}

fn cdf_csv(values: &mut Vec<f64>) -> String {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite metric values"));
    let n = values.len() as f64;
    let mut body = String::from("value,cumulative_fraction\n");
    for (i, v) in values.iter().enumerate() {
        body.push_str(&format!("{},{}\n", v, (i + 1) as f64 / n));
    }
    body
}

fn run_crossnet(args: &CrossnetArgs, out: &mut Outputs) -> Result<(), RunError> {
    let fr_mode = match args.fr_mode.as_str() {
        "copiable" => FriendSetMode::Copiable,
        "copied" => FriendSetMode::CopiedOnly,
        other => return Err(RunError::Runtime(format!("unknown fr-mode `{other}`"))),
    };
    // target ingestion: directed follows, or symmetrized friendships with
    // optional request-induced directionality
    let (target, tix) = if args.undirected_target {
        let parsed = read_edge_list(&args.target)?;
        let requests = args
            .requests
            .as_deref()
            .map(|p| read_requests(p, &parsed.index))
            .transpose()?
            .unwrap_or_default();
        let clean: Vec<(NodeId, NodeId)> = parsed
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| a != b)
            .collect();
        let (g, _) = induce_directed_from_requests(parsed.index.len(), &clean, &requests)?;
        (g, parsed.index)
    } else {
        let (g, ix, _) = load_graph(&args.target, true)?;
        (g, ix)
    };
    let (source, six, _) = load_graph(&args.source, false)?;
    let mapping = AccountMapping::new(read_mapping(&args.mapping, &tix, &six)?)?;
    let part = partition(&target, &source, &mapping)?;

    let log = args
        .interactions
        .as_deref()
        .map(|p| read_interactions(p, &tix))
        .transpose()?;
    let interests = args
        .interests
        .as_deref()
        .map(|p| read_interests(p, &tix))
        .transpose()?;

    let n = target.node_count();
    let fof = fof_native_follow_stats(&part, &target);
    let (inter_graph, non_social) = match &log {
        Some(log) => {
            let (g, ns) = interaction_subgraph(&target, log);
            (Some(g), ns)
        }
        None => (None, 0),
    };
    let inter_stats = inter_graph
        .as_ref()
        .map(|g| interaction_sampling_stats(&target, &part, g))
        .transpose()?;
    let social = log
        .as_ref()
        .map(|l| social_interaction_ratios(&target, &part, l));

    // per-user metrics CSV
    let mut body = String::from(
        "user,category,cr,cr_ind,cr_out,r_copied,r_native,copied_frac_of_reciprocated,frac_reciprocated_interacting,frac_unreciprocated_interacting,frac_copied_interacting,frac_native_interacting,clustering_target,clustering_interaction,social_ratio_activity,social_ratio_influence,fb_ratio_activity,fb_ratio_influence,activity_events,influence_events,copied_friends,native_fof_followers\n",
    );
    let mut cr_values = Vec::new();
    let mut cr_ind_values = Vec::new();
    let mut cr_out_values = Vec::new();
    let mut r_copied_values = Vec::new();
    let mut r_native_values = Vec::new();
    let mut cfr_values = Vec::new();
    let mut activity_totals = vec![0u64; n];
    let mut influence_totals = vec![0u64; n];
    let mut cr_by_user: Vec<Option<f64>> = vec![None; n];
    let mut social_act: Vec<Option<f64>> = vec![None; n];
    let mut social_inf: Vec<Option<f64>> = vec![None; n];
    let mut fb_act: Vec<Option<f64>> = vec![None; n];
    let mut fb_inf: Vec<Option<f64>> = vec![None; n];

    for u in 0..n as NodeId {
        let (cr, cr_ind, cr_out) = copy_ratios(&part, &target, &source, u)?;
        let (r_copied, r_native) = reciprocity_ratios(&part, &target, &source, u, fr_mode)?;
        let cfr = copied_fraction_of_reciprocated(&part, &target, &source, u)?;
        let category = UserCategory::from_copy_ratio(cr);
        let ustats = inter_stats.as_ref().map(|s| &s[u as usize]);
        let soc = social.as_ref().map(|s| &s[u as usize]);
        let (act_total, inf_total) = soc
            .map(|s| {
                (
                    s.activity_counts.values().sum::<u64>(),
                    s.influence_counts.values().sum::<u64>(),
                )
            })
            .unwrap_or((0, 0));
        activity_totals[u as usize] = act_total;
        influence_totals[u as usize] = inf_total;
        cr_by_user[u as usize] = cr.map(|r| r.value());
        if let Some(s) = soc {
            social_act[u as usize] = s.social_activity.map(|r| r.value());
            social_inf[u as usize] = s.social_influence.map(|r| r.value());
            fb_act[u as usize] = s.fb_activity.map(|r| r.value());
            fb_inf[u as usize] = s.fb_influence.map(|r| r.value());
        }
        let clust_target = ustats.and_then(|s| s.clustering_target);
        let clust_inter = ustats.and_then(|s| s.clustering_interaction);
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            tix.label(u),
            category.as_str(),
            ratio_cell(cr),
            ratio_cell(cr_ind),
            ratio_cell(cr_out),
            ratio_cell(r_copied),
            ratio_cell(r_native),
            ratio_cell(cfr),
            ratio_cell(ustats.and_then(|s| s.frac_reciprocated)),
            ratio_cell(ustats.and_then(|s| s.frac_unreciprocated)),
            ratio_cell(ustats.and_then(|s| s.frac_copied)),
            ratio_cell(ustats.and_then(|s| s.frac_native)),
            csv_opt(clust_target),
            csv_opt(clust_inter),
            ratio_cell(soc.and_then(|s| s.social_activity)),
            ratio_cell(soc.and_then(|s| s.social_influence)),
            ratio_cell(soc.and_then(|s| s.fb_activity)),
            ratio_cell(soc.and_then(|s| s.fb_influence)),
            act_total,
            inf_total,
            fof[u as usize].0,
            fof[u as usize].1,
        ));
        let push = |vec: &mut Vec<f64>, r: Option<Ratio>| {
            if let Some(r) = r {
                vec.push(r.value());
            }
        };
        push(&mut cr_values, cr);
        push(&mut cr_ind_values, cr_ind);
        push(&mut cr_out_values, cr_out);
        push(&mut r_copied_values, r_copied);
        push(&mut r_native_values, r_native);
        push(&mut cfr_values, cfr);
    }
    out.write_csv("user_metrics.csv", &body)?;

    for (name, values) in [
        ("cdf_cr.csv", &mut cr_values),
        ("cdf_cr_ind.csv", &mut cr_ind_values),
        ("cdf_cr_out.csv", &mut cr_out_values),
        ("cdf_r_copied.csv", &mut r_copied_values),
        ("cdf_r_native.csv", &mut r_native_values),
        ("cdf_copied_frac_reciprocated.csv", &mut cfr_values),
    ] {
        if !values.is_empty() {
            let csv = cdf_csv(values);
            out.write_csv(name, &csv)?;
        }
    }

    // similarity and closeness by link class
    let mut class_counts = json!({});
    if let Some(interests) = &interests {
        let samples = similarity_by_link_class(&part, &target, interests);
        write_class_cdfs(out, "similarity", &samples)?;
        class_counts["similarity_samples"] = json!({
            "copied": samples.copied.len(),
            "uncopied_copiable": samples.uncopied_copiable.len(),
            "native": samples.native.len(),
        });
    }
    let closeness = closeness_by_copy_status(&part, &target, &source);
    write_class_cdfs(out, "closeness", &closeness)?;

    // trend curves over activity and influence
    if log.is_some() {
        let xs_act: Vec<f64> = activity_totals.iter().map(|&c| c as f64).collect();
        let xs_inf: Vec<f64> = influence_totals.iter().map(|&c| c as f64).collect();
        let spec = BinSpec::log(args.bins);
        let curves: [(&str, &[f64], &[Option<f64>]); 5] = [
            ("binned_activity_vs_cr.csv", &xs_act, &cr_by_user),
            ("binned_influence_vs_cr.csv", &xs_inf, &cr_by_user),
            ("binned_activity_vs_social_ratio.csv", &xs_act, &social_act),
            ("binned_influence_vs_social_ratio.csv", &xs_inf, &social_inf),
            ("binned_influence_vs_fb_ratio.csv", &xs_inf, &fb_inf),
        ];
        for (name, xs, ys) in curves {
            // log bins: drop users with zero events
            let pairs: Vec<(f64, Option<f64>)> = xs
                .iter()
                .zip(ys)
                .filter(|&(&x, _)| x > 0.0)
                .map(|(&x, &y)| (x, y))
                .collect();
            if pairs.is_empty() {
                continue;
            }
            let (xs, ys): (Vec<f64>, Vec<Option<f64>>) = pairs.into_iter().unzip();
            let rows = binned_series(&xs, &ys, &spec)?;
            out.write_csv(name, &bin_rows_csv(&rows))?;
        }
    }
    // copied friends vs native FoF followers (raw counts)
    let xs: Vec<f64> = fof.iter().map(|&(x, _)| x as f64).collect();
    let ys: Vec<Option<f64>> = fof.iter().map(|&(_, y)| Some(y as f64)).collect();
    let fof_rows = binned_series(&xs, &ys, &BinSpec::linear(args.bins))?;
    out.write_csv("binned_copied_vs_fof.csv", &bin_rows_csv(&fof_rows))?;

    let summary = json!({
        "target": graph_summary(&target)?,
        "source": graph_summary(&source)?,
        "connected_nodes": part.connected_count(),
        "copied_links": part.copied_count(),
        "native_links": part.native_count(),
        "copiable_links": part.copiable_count(),
        "interaction_events": log.as_ref().map(|l| l.len()),
        "non_social_events": if log.is_some() { Some(non_social) } else { None },
        "interaction_edges": inter_graph.as_ref().map(|g| g.edge_count()),
        "fr_mode": args.fr_mode,
        "class_samples": class_counts,
    });
    out.write_json("crossnet_summary.json", &summary)
}

fn write_class_cdfs(out: &mut Outputs, prefix: &str, samples: &LinkClassSamples) -> Result<(), RunError> {
    for (class, list) in [
        ("copied", &samples.copied),
        ("uncopied_copiable", &samples.uncopied_copiable),
        ("native", &samples.native),
    ] {
        if list.is_empty() {
            continue;
        }
        let mut values: Vec<f64> = list.iter().map(|s| s.value.value()).collect();
        let csv = cdf_csv(&mut values);
        out.write_csv(&format!("cdf_{prefix}_{class}.csv"), &csv)?;
    }
    Ok(())
}

fn bin_rows_csv(rows: &[crossnet::BinRow]) -> String {
    let mut body = String::from("bin_center,mean,stderr,count\n");
    for r in rows {
        body.push_str(&format!(
            "{},{},{},{}\n",
            r.bin_center, r.mean_y, r.stderr, r.count
        ));
    }
    body
}

fn run_metrics(args: &MetricsArgs, out: &mut Outputs) -> Result<(), RunError> {
    let (graph, _, report) = load_graph(&args.graph, args.directed)?;
    let stats = degree_stats(&graph)?;
    let mut pmf_csv = String::from("degree,in_probability,out_probability\n");
    let degrees: std::collections::BTreeSet<u32> = stats
        .in_pmf
        .keys()
        .chain(stats.out_pmf.keys())
        .copied()
        .collect();
    for k in degrees {
        pmf_csv.push_str(&format!(
            "{},{},{}\n",
            k,
            stats.in_pmf.get(&k).copied().unwrap_or(0.0),
            stats.out_pmf.get(&k).copied().unwrap_or(0.0),
        ));
    }
    out.write_csv("degree_pmf.csv", &pmf_csv)?;

    let comps = if graph.is_directed() {
        let weak = connected_components(&graph, ComponentKind::Weak)?;
        let strong = connected_components(&graph, ComponentKind::Strong)?;
        vec![weak, strong]
    } else {
        vec![connected_components(&graph, ComponentKind::Undirected)?]
    };
    let mut comp_csv = String::from("kind,rank,size\n");
    for report in &comps {
        for (rank, size) in report.component_sizes.iter().enumerate() {
            comp_csv.push_str(&format!("{},{},{}\n", report.kind.as_str(), rank, size));
        }
    }
    out.write_csv("components.csv", &comp_csv)?;

    let mut summary = graph_summary(&graph)?;
    summary["dropped_self_loops"] = json!(report.self_loops_dropped);
    summary["dropped_duplicates"] = json!(report.duplicates_dropped);
    if graph.is_directed() {
        summary["reciprocity"] = json!(reciprocity(&graph).ok());
        summary["gcc_weak_fraction"] = json!(comps[0].gcc_fraction_of_nodes);
        summary["gcc_strong_fraction"] = json!(comps[1].gcc_fraction_of_nodes);
    }
    out.write_json("metrics.json", &summary)
}
