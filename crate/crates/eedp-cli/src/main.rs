//! `eedp` command-line interface: flatten graphs, build and run the
//! edge-prediction benchmarks, and aggregate reports.

mod config;

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use eedp_core::benchmark::{dataset_stats, generate_merged_like, BenchmarkSet, DatasetStats};
use eedp_core::compress::{compress, render};
use eedp_core::dag::{build_eedp_dag, endpoints};
use eedp_core::flatten::{flatten, FlattenMethod, FlattenOptions};
use eedp_core::graph::{Graph, HopBucket};
use eedp_core::paths::{extract_paths, PathBundle, PathLimits};
use eedp_core::tu::load_tu_dataset;
use eedp_harness::{
    aggregate, read_results, run_benchmark, AnswerClient, BpeTokenizer, HeuristicTokenizer,
    HttpClient, OracleClient, RandomClient, RunSettings, ScriptedClient, TokenCounter,
};

use config::{parse_config, RunConfig};

const MANIFEST_SCHEMA: &str = "eedp-manifest/1";

#[derive(Parser)]
#[command(name = "eedp", version, about = "End-to-end DAG-path graph flattening toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flatten one graph to text and write stats alongside
    Flatten {
        /// Graph file (.json)
        #[arg(long)]
        input: PathBuf,
        /// Method name, e.g. eedp, adj-list, gml (see --help-methods)
        #[arg(long, default_value = "eedp")]
        method: String,
        /// Merge each endpoint pair's paths into the generalized-list form
        #[arg(long)]
        compress: bool,
        /// Output directory; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Walk-sequence seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the stats JSON to stdout
        #[arg(long)]
        json: bool,
    },
    /// Build the oriented acyclic subgraph of a graph
    Dag {
        #[arg(long)]
        input: PathBuf,
        /// Start node for the traversal
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract all endpoint-pair simple paths as JSON
    Paths {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compress a paths dump into generalized-list trees
    Compress {
        /// Paths JSON produced by `eedp paths`
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a benchmark (graphs + cases + manifest) from a dataset
    BenchBuild {
        /// Directory with TU-format files (*_A.txt, *_graph_indicator.txt)
        #[arg(long, conflicts_with = "graphs")]
        tu_dir: Option<PathBuf>,
        /// Graphs file, one JSON graph per line
        #[arg(long)]
        graphs: Option<PathBuf>,
        /// Dataset name recorded in the manifest
        #[arg(long, default_value = "dataset")]
        name: String,
        /// Randomly subsample this many graphs before building
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pairs sampled per hop bucket per graph
        #[arg(long, default_value_t = 4)]
        per_bucket: usize,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a benchmark against an answer client
    BenchRun {
        /// Manifest file or benchmark directory from bench-build
        #[arg(long)]
        bench: PathBuf,
        /// Comma-separated method names
        #[arg(long, default_value = "eedp")]
        methods: String,
        /// oracle | random | scripted:FILE | http
        #[arg(long, default_value = "oracle")]
        client: String,
        /// Results JSONL (append-only; enables resuming)
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        concurrency: Option<usize>,
        /// Requests-per-minute cap for the endpoint
        #[arg(long)]
        rpm: Option<u32>,
        /// Seed for the random client
        #[arg(long)]
        seed: Option<u64>,
        /// heuristic | bpe:VOCAB_FILE
        #[arg(long)]
        tokenizer: Option<String>,
        /// Compress EEDP path sections
        #[arg(long)]
        compress: bool,
        /// TOML run configuration; flags override file values
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Aggregate a results file into report.txt / report.json
    Report {
        #[arg(long)]
        results: PathBuf,
        /// Output directory; stdout only when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print JSON instead of the text table
        #[arg(long)]
        json: bool,
    },
    /// Generate the synthetic sparse directed dataset
    GenMergedLike {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output graphs file (.jsonl)
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Io(String),
    Endpoint(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Endpoint(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Endpoint(m) => m,
        }
    }
}

fn io_err<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Io(format!("{context}: {e}"))
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Flatten {
            input,
            method,
            compress,
            out,
            seed,
            json,
        } => cmd_flatten(&input, &method, compress, out.as_deref(), seed, json),
        Command::Dag { input, start, out } => cmd_dag(&input, start, out.as_deref()),
        Command::Paths { input, out } => cmd_paths(&input, out.as_deref()),
        Command::Compress { input, out } => cmd_compress(&input, out.as_deref()),
        Command::BenchBuild {
            tu_dir,
            graphs,
            name,
            sample,
            seed,
            per_bucket,
            out,
        } => cmd_bench_build(
            tu_dir.as_deref(),
            graphs.as_deref(),
            &name,
            sample,
            seed,
            per_bucket,
            &out,
        ),
        Command::BenchRun {
            bench,
            methods,
            client,
            out,
            concurrency,
            rpm,
            seed,
            tokenizer,
            compress,
            config,
        } => cmd_bench_run(
            &bench,
            &methods,
            &client,
            &out,
            concurrency,
            rpm,
            seed,
            tokenizer.as_deref(),
            compress,
            config.as_deref(),
        ),
        Command::Report { results, out, json } => cmd_report(&results, out.as_deref(), json),
        Command::GenMergedLike { n, seed, out } => cmd_gen_merged_like(n, seed, &out),
    }
}

// --- shared helpers ---------------------------------------------------------

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(&format!("reading {path:?}")))?;
    Graph::from_json(text.trim()).map_err(|e| CliError::Config(format!("{path:?}: {e}")))
}

fn read_graphs_jsonl(path: &Path) -> Result<Vec<Graph>, CliError> {
    let file = std::fs::File::open(path).map_err(io_err(&format!("opening {path:?}")))?;
    let mut graphs = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err("reading graphs"))?;
        if line.trim().is_empty() {
            continue;
        }
        let g = Graph::from_json(&line)
            .map_err(|e| CliError::Config(format!("{path:?} line {}: {e}", lineno + 1)))?;
        graphs.push(g);
    }
    Ok(graphs)
}

fn write_graphs_jsonl(path: &Path, graphs: &[Graph]) -> Result<(), CliError> {
    let mut out = String::new();
    for g in graphs {
        out.push_str(&g.to_json());
        out.push('\n');
    }
    std::fs::write(path, out).map_err(io_err(&format!("writing {path:?}")))
}

fn sha256_hex(path: &Path) -> Result<String, CliError> {
    let data = std::fs::read(path).map_err(io_err(&format!("hashing {path:?}")))?;
    Ok(hex::encode(Sha256::digest(&data)))
}

fn write_or_print(out: Option<&Path>, name: &str, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let target = if path.is_dir() {
                path.join(name)
            } else {
                path.to_path_buf()
            };
            std::fs::write(&target, content).map_err(io_err(&format!("writing {target:?}")))
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn parse_methods(spec: &str) -> Result<Vec<FlattenMethod>, CliError> {
    let mut methods = Vec::new();
    for name in spec.split(',') {
        let name = name.trim();
        if name.is_empty() {
            continue;
        }
        let m = FlattenMethod::from_name(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown method {name:?}; known: {}",
                FlattenMethod::ALL
                    .iter()
                    .map(|m| m.name())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })?;
        methods.push(m);
    }
    if methods.is_empty() {
        return Err(CliError::Config("no methods given".to_string()));
    }
    Ok(methods)
}

// --- commands ---------------------------------------------------------------

#[derive(Serialize)]
struct FlattenStats {
    method: String,
    compressed: bool,
    text_bytes: usize,
    token_count_heuristic: usize,
    endpoint_count: usize,
    pair_group_count: usize,
    path_count: usize,
    overflow: bool,
    guard_skips: usize,
}

fn cmd_flatten(
    input: &Path,
    method_name: &str,
    compress_paths: bool,
    out: Option<&Path>,
    seed: u64,
    json: bool,
) -> Result<(), CliError> {
    let method = FlattenMethod::from_name(method_name)
        .ok_or_else(|| CliError::Config(format!("unknown method {method_name:?}")))?;
    let g = load_graph(input)?;
    let opts = FlattenOptions {
        compress_paths,
        walk_seed: seed,
        ..FlattenOptions::default()
    };
    let flat =
        flatten(&g, method, &opts).map_err(|e| CliError::Config(format!("flatten: {e}")))?;

    let dag = build_eedp_dag(&g, 0).map_err(|e| CliError::Config(e.to_string()))?;
    let ends = endpoints(&dag);
    let bundle = extract_paths(&g, &ends, PathLimits::default());
    let stats = FlattenStats {
        method: method.name().to_string(),
        compressed: flat.compressed,
        text_bytes: flat.text.len(),
        token_count_heuristic: flat.token_count,
        endpoint_count: ends.endpoints.len(),
        pair_group_count: bundle.groups.len(),
        path_count: bundle.path_count(),
        overflow: bundle.overflow,
        guard_skips: dag.guard_skips(),
    };
    let stats_json = serde_json::to_string_pretty(&stats).expect("stats serialize");

    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("graph");
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io_err("creating output directory"))?;
            let text_path = dir.join(format!("{stem}.{}.txt", method.name()));
            let stats_path = dir.join(format!("{stem}.{}.stats.json", method.name()));
            std::fs::write(&text_path, &flat.text).map_err(io_err("writing text"))?;
            std::fs::write(&stats_path, &stats_json).map_err(io_err("writing stats"))?;
            if json {
                println!("{stats_json}");
            } else {
                println!("wrote {} and {}", text_path.display(), stats_path.display());
            }
        }
        None => {
            if json {
                println!("{stats_json}");
            } else {
                println!("{}", flat.text);
            }
        }
    }
    Ok(())
}

fn cmd_dag(input: &Path, start: usize, out: Option<&Path>) -> Result<(), CliError> {
    let g = load_graph(input)?;
    let dag = build_eedp_dag(&g, start).map_err(|e| CliError::Config(e.to_string()))?;
    write_or_print(out, "dag.json", &dag.to_json())
}

fn cmd_paths(input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let g = load_graph(input)?;
    let dag = build_eedp_dag(&g, 0).map_err(|e| CliError::Config(e.to_string()))?;
    let bundle = extract_paths(&g, &endpoints(&dag), PathLimits::default());
    write_or_print(out, "paths.json", &bundle.to_json())
}

#[derive(Serialize)]
struct CompressedPairOut {
    start: usize,
    end: usize,
    tree: serde_json::Value,
    rendered: String,
}

fn cmd_compress(input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(input).map_err(io_err(&format!("reading {input:?}")))?;
    let bundle =
        PathBundle::from_json(&text).map_err(|e| CliError::Config(format!("{input:?}: {e}")))?;
    let mut pairs = Vec::new();
    for (&(start, end), paths) in &bundle.groups {
        let tree = compress(paths).map_err(|e| CliError::Config(e.to_string()))?;
        pairs.push(CompressedPairOut {
            start,
            end,
            tree: serde_json::from_str(&tree.to_json()).expect("tree json"),
            rendered: render(&tree),
        });
    }
    let doc = serde_json::json!({ "pairs": pairs });
    write_or_print(out, "compressed.json", &serde_json::to_string_pretty(&doc).expect("doc"))
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    schema: String,
    dataset: String,
    seed: u64,
    per_bucket: usize,
    graphs_file: String,
    graphs_sha256: String,
    benchmark_file: String,
    benchmark_sha256: String,
    stats: DatasetStats,
    bucket_counts: BTreeMap<HopBucket, usize>,
    /// Realized connectivity label balance over sampled pairs; recorded,
    /// not forced.
    label_balance: LabelBalance,
}

#[derive(Serialize, Deserialize, Default)]
struct LabelBalance {
    cp_yes: usize,
    cp_no: usize,
}

fn find_tu_files(dir: &Path) -> Result<(PathBuf, PathBuf), CliError> {
    let entries = std::fs::read_dir(dir).map_err(io_err(&format!("reading {dir:?}")))?;
    let mut adjacency = None;
    let mut indicator = None;
    for entry in entries {
        let entry = entry.map_err(io_err("reading directory"))?;
        let name = entry.file_name().to_string_lossy().to_string();
        if name.ends_with("_A.txt") {
            adjacency = Some(entry.path());
        } else if name.ends_with("_graph_indicator.txt") {
            indicator = Some(entry.path());
        }
    }
    match (adjacency, indicator) {
        (Some(a), Some(i)) => Ok((a, i)),
        _ => Err(CliError::Config(format!(
            "{dir:?} does not contain *_A.txt and *_graph_indicator.txt"
        ))),
    }
}

fn subsample(graphs: Vec<Graph>, sample: usize, seed: u64) -> Vec<Graph> {
    if sample >= graphs.len() {
        return graphs;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x73616d706c65);
    let mut indices: Vec<usize> = (0..graphs.len()).collect();
    for i in 0..sample {
        let j = rng.gen_range(i..indices.len());
        indices.swap(i, j);
    }
    let mut chosen = indices[..sample].to_vec();
    chosen.sort_unstable();
    let mut graphs: Vec<Option<Graph>> = graphs.into_iter().map(Some).collect();
    chosen
        .into_iter()
        .map(|i| graphs[i].take().expect("unique index"))
        .collect()
}

fn cmd_bench_build(
    tu_dir: Option<&Path>,
    graphs_file: Option<&Path>,
    name: &str,
    sample: Option<usize>,
    seed: u64,
    per_bucket: usize,
    out: &Path,
) -> Result<(), CliError> {
    let graphs = match (tu_dir, graphs_file) {
        (Some(dir), None) => {
            let (adjacency, indicator) = find_tu_files(dir)?;
            load_tu_dataset(&adjacency, &indicator)
                .map_err(|e| CliError::Config(format!("loading TU dataset: {e}")))?
        }
        (None, Some(path)) => read_graphs_jsonl(path)?,
        _ => {
            return Err(CliError::Config(
                "exactly one of --tu-dir and --graphs is required".to_string(),
            ))
        }
    };
    let graphs = match sample {
        Some(k) => subsample(graphs, k, seed),
        None => graphs,
    };
    if graphs.is_empty() {
        return Err(CliError::Config("dataset contains no graphs".to_string()));
    }

    std::fs::create_dir_all(out).map_err(io_err("creating output directory"))?;
    let graphs_path = out.join("graphs.jsonl");
    write_graphs_jsonl(&graphs_path, &graphs)?;

    let set = BenchmarkSet::build(&graphs, name, seed, per_bucket);
    let bench_path = out.join("benchmark.jsonl");
    let mut buf = Vec::new();
    set.write_jsonl(&mut buf).map_err(io_err("serializing benchmark"))?;
    std::fs::write(&bench_path, &buf).map_err(io_err("writing benchmark"))?;

    let mut label_balance = LabelBalance::default();
    for case in set
        .cases
        .iter()
        .filter(|c| c.task == eedp_core::benchmark::Task::EpCp)
    {
        if case.gold_cp {
            label_balance.cp_yes += 1;
        } else {
            label_balance.cp_no += 1;
        }
    }
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA.to_string(),
        dataset: name.to_string(),
        seed,
        per_bucket,
        graphs_file: "graphs.jsonl".to_string(),
        graphs_sha256: sha256_hex(&graphs_path)?,
        benchmark_file: "benchmark.jsonl".to_string(),
        benchmark_sha256: sha256_hex(&bench_path)?,
        stats: dataset_stats(&graphs),
        bucket_counts: set.per_bucket_counts.clone(),
        label_balance,
    };
    let manifest_path = out.join("manifest.json");
    std::fs::write(
        &manifest_path,
        serde_json::to_string_pretty(&manifest).expect("manifest"),
    )
    .map_err(io_err("writing manifest"))?;

    println!(
        "built {}: {} graphs, {} cases ({} pairs/bucket caps at {})",
        manifest_path.display(),
        manifest.stats.graphs,
        set.cases.len(),
        manifest
            .bucket_counts
            .values()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("/"),
        per_bucket
    );
    Ok(())
}

fn load_bench(bench: &Path) -> Result<(Vec<Graph>, BenchmarkSet), CliError> {
    let manifest_path = if bench.is_dir() {
        bench.join("manifest.json")
    } else {
        bench.to_path_buf()
    };
    let dir = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let manifest: Manifest = serde_json::from_str(
        &std::fs::read_to_string(&manifest_path)
            .map_err(io_err(&format!("reading {manifest_path:?}")))?,
    )
    .map_err(|e| CliError::Config(format!("{manifest_path:?}: {e}")))?;
    if manifest.schema != MANIFEST_SCHEMA {
        return Err(CliError::Config(format!(
            "unsupported manifest schema {:?}",
            manifest.schema
        )));
    }
    let graphs_path = dir.join(&manifest.graphs_file);
    let bench_path = dir.join(&manifest.benchmark_file);
    if sha256_hex(&graphs_path)? != manifest.graphs_sha256 {
        return Err(CliError::Config(format!(
            "{graphs_path:?} does not match the manifest hash"
        )));
    }
    if sha256_hex(&bench_path)? != manifest.benchmark_sha256 {
        return Err(CliError::Config(format!(
            "{bench_path:?} does not match the manifest hash"
        )));
    }
    let graphs = read_graphs_jsonl(&graphs_path)?;
    let file = std::fs::File::open(&bench_path).map_err(io_err("opening benchmark"))?;
    let set = BenchmarkSet::read_jsonl(BufReader::new(file))
        .map_err(|e| CliError::Config(format!("{bench_path:?}: {e}")))?;
    Ok((graphs, set))
}

fn make_tokenizer(spec: Option<&str>) -> Result<Box<dyn TokenCounter>, CliError> {
    match spec {
        None | Some("heuristic") => Ok(Box::new(HeuristicTokenizer)),
        Some(s) => match s.strip_prefix("bpe:") {
            Some(path) => Ok(Box::new(
                BpeTokenizer::from_vocab_file(Path::new(path))
                    .map_err(|e| CliError::Config(e.to_string()))?,
            )),
            None => Err(CliError::Config(format!(
                "unknown tokenizer {s:?}; use heuristic or bpe:FILE"
            ))),
        },
    }
}

fn make_client(
    spec: &str,
    seed: u64,
    cfg: &RunConfig,
) -> Result<Box<dyn AnswerClient>, CliError> {
    match spec {
        "oracle" => Ok(Box::new(OracleClient)),
        "random" => Ok(Box::new(RandomClient { seed })),
        "http" => {
            let mut endpoint = cfg
                .endpoint
                .clone()
                .unwrap_or_default()
                .to_client_config();
            if endpoint.api_key.is_none() {
                endpoint.api_key = std::env::var("OPENAI_API_KEY").ok();
            }
            Ok(Box::new(
                HttpClient::new(endpoint).map_err(|e| CliError::Endpoint(e.to_string()))?,
            ))
        }
        other => match other.strip_prefix("scripted:") {
            Some(path) => Ok(Box::new(
                ScriptedClient::from_jsonl_file(Path::new(path))
                    .map_err(|e| CliError::Config(e.to_string()))?,
            )),
            None => Err(CliError::Config(format!(
                "unknown client {other:?}; use oracle, random, scripted:FILE or http"
            ))),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench_run(
    bench: &Path,
    methods: &str,
    client_spec: &str,
    out: &Path,
    concurrency: Option<usize>,
    rpm: Option<u32>,
    seed: Option<u64>,
    tokenizer_spec: Option<&str>,
    compress_flag: bool,
    config_path: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = match config_path {
        Some(path) => parse_config(
            &std::fs::read_to_string(path).map_err(io_err(&format!("reading {path:?}")))?,
        )
        .map_err(CliError::Config)?,
        None => RunConfig::default(),
    };

    // Flags override config file values.
    let methods = if methods == "eedp" && cfg.methods.is_some() {
        parse_methods(&cfg.methods.as_ref().expect("checked").join(","))?
    } else {
        parse_methods(methods)?
    };
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let concurrency = concurrency.or(cfg.concurrency).unwrap_or(4);
    let rpm = rpm.or(cfg.requests_per_minute);
    let compress_paths = compress_flag || cfg.compress.unwrap_or(false);
    let tokenizer_spec = tokenizer_spec
        .map(str::to_string)
        .or_else(|| cfg.tokenizer.clone());

    let (graphs, set) = load_bench(bench)?;
    let client = make_client(client_spec, seed, &cfg)?;
    let tokenizer = make_tokenizer(tokenizer_spec.as_deref())?;

    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err("creating output directory"))?;
        }
    }
    let settings = RunSettings {
        methods,
        flatten_opts: FlattenOptions {
            compress_paths,
            ..FlattenOptions::default()
        },
        concurrency,
        requests_per_minute: rpm,
        results_path: Some(out.to_path_buf()),
    };
    // Effective configuration, serialized next to the results for
    // provenance.
    let effective = serde_json::json!({
        "bench": bench.display().to_string(),
        "methods": settings.methods.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "client": client.name(),
        "tokenizer": tokenizer.name(),
        "seed": seed,
        "concurrency": concurrency,
        "requests_per_minute": rpm,
        "compress_paths": compress_paths,
        "prompt_template": eedp_harness::TEMPLATE_VERSION,
    });
    let provenance = out.with_extension("run.json");
    std::fs::write(
        &provenance,
        serde_json::to_string_pretty(&effective).expect("provenance"),
    )
    .map_err(io_err("writing run provenance"))?;

    let records = run_benchmark(&graphs, &set, client.as_ref(), tokenizer.as_ref(), &settings)
        .map_err(|e| CliError::Endpoint(e.to_string()))?;

    let failures = records.iter().filter(|r| r.error.is_some()).count();
    let report = aggregate(&records);
    println!("{}", report.to_text());
    println!(
        "{} records in {} ({} client failures)",
        records.len(),
        out.display(),
        failures
    );
    Ok(())
}

fn cmd_report(results: &Path, out: Option<&Path>, json: bool) -> Result<(), CliError> {
    let records = read_results(&results.to_path_buf())
        .map_err(|e| CliError::Io(format!("reading {results:?}: {e}")))?;
    let report = aggregate(&records);
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(io_err("creating output directory"))?;
        std::fs::write(dir.join("report.txt"), report.to_text())
            .map_err(io_err("writing report.txt"))?;
        std::fs::write(dir.join("report.json"), report.to_json())
            .map_err(io_err("writing report.json"))?;
    }
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn cmd_gen_merged_like(n: usize, seed: u64, out: &Path) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Config("--n must be at least 1".to_string()));
    }
    let graphs = generate_merged_like(n, seed);
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err("creating output directory"))?;
        }
    }
    write_graphs_jsonl(out, &graphs)?;
    let stats = dataset_stats(&graphs);
    println!(
        "wrote {} graphs to {} (mean nodes {:.2}, mean arcs {:.2})",
        stats.graphs,
        out.display(),
        stats.mean_nodes,
        stats.mean_arcs
    );
    Ok(())
}
