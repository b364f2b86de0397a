//! Acceptance suite. One test per criterion; each prints a PASS/SKIP line
//! with measurements. Run with:
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```
//!
//! Criteria touching the ZINC_test distribution run in full when the TU
//! files are mounted (EEDP_ZINC_DIR, or data/ZINC_test under the repo
//! root); without the dataset they print SKIP for the dataset-bound part
//! and exercise the same machinery on a labeled synthetic surrogate.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use eedp_core::benchmark::{grade_dp, sample_cases, BenchmarkSet, Task, TestCase};
use eedp_core::compress::{compress, expand, render, render_uncompressed};
use eedp_core::dag::{build_eedp_dag, endpoints, is_acyclic};
use eedp_core::flatten::parse::{
    parse_adj_list, parse_adj_matrix, parse_edge_list, parse_ego_graph, parse_gml,
    parse_graphml, parse_natural_language,
};
use eedp_core::flatten::{flatten, flatten_eedp, FlattenMethod, FlattenOptions};
use eedp_core::graph::{shortest_distance, Graph, HopBucket};
use eedp_core::paths::{extract_paths, PathLimits};
use eedp_core::tu::load_tu_dataset;
use eedp_core::{dataset_stats, generate_merged_like};
use eedp_harness::{
    aggregate, build_prompt, run_benchmark, BpeTokenizer, HeuristicTokenizer, HttpClient,
    HttpClientConfig, OracleClient, RandomClient, RunSettings, TokenCounter,
};

// --- corpora -----------------------------------------------------------------

/// Criterion-1 corpus: seeded random graphs, directed and undirected,
/// 2-25 nodes, arc budget around n..1.3n (the density regime the method
/// targets).
fn acceptance_corpus() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97a9ce);
    let mut graphs = Vec::with_capacity(1000);
    for i in 0..1000 {
        let n = rng.gen_range(2..=25usize);
        let lo = n.saturating_sub(1);
        let hi = (n * 13).div_ceil(10).max(lo + 1);
        let target = rng.gen_range(lo..=hi);
        let mut pairs = BTreeSet::new();
        for _ in 0..target {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                pairs.insert((u, v));
            }
        }
        let arcs: Vec<_> = pairs.into_iter().collect();
        graphs.push(Graph::from_arcs(n, &arcs, i % 2 == 0).expect("valid corpus graph"));
    }
    graphs
}

/// Molecule-shaped surrogate: connected, degree <= 4, a spanning tree plus
/// 2-4 ring-closing edges, sized like the ZINC test molecules.
fn molecule_like(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(19..=27usize);
        let mut degree = vec![0usize; n];
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for v in 1..n {
            // Attach to a random earlier node that still has valence room.
            let candidates: Vec<usize> = (0..v).filter(|&u| degree[u] < 4).collect();
            let u = candidates[rng.gen_range(0..candidates.len())];
            edges.insert((u.min(v), u.max(v)));
            degree[u] += 1;
            degree[v] += 1;
        }
        let rings = rng.gen_range(2..=4usize);
        let mut added = 0;
        let mut attempts = 0;
        while added < rings && attempts < 200 {
            attempts += 1;
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            let key = (u.min(v), u.max(v));
            if u != v && degree[u] < 4 && degree[v] < 4 && !edges.contains(&key) {
                edges.insert(key);
                degree[u] += 1;
                degree[v] += 1;
                added += 1;
            }
        }
        let arcs: Vec<_> = edges.into_iter().collect();
        graphs.push(Graph::from_arcs(n, &arcs, true).expect("valid molecule"));
    }
    graphs
}

fn zinc_dir() -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("EEDP_ZINC_DIR") {
        let p = PathBuf::from(dir);
        if p.is_dir() {
            return Some(p);
        }
    }
    let repo_default = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/ZINC_test");
    if repo_default.is_dir() {
        return Some(repo_default);
    }
    None
}

fn load_zinc() -> Option<Vec<Graph>> {
    let dir = zinc_dir()?;
    let mut adjacency = None;
    let mut indicator = None;
    for entry in std::fs::read_dir(&dir).ok()? {
        let path = entry.ok()?.path();
        let name = path.file_name()?.to_string_lossy().to_string();
        if name.ends_with("_A.txt") {
            adjacency = Some(path);
        } else if name.ends_with("_graph_indicator.txt") {
            indicator = Some(path);
        }
    }
    load_tu_dataset(&adjacency?, &indicator?).ok()
}

fn seeded_subsample(graphs: &[Graph], k: usize, seed: u64) -> Vec<Graph> {
    if k >= graphs.len() {
        return graphs.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..graphs.len()).collect();
    for i in 0..k {
        let j = rng.gen_range(i..idx.len());
        idx.swap(i, j);
    }
    let mut chosen = idx[..k].to_vec();
    chosen.sort_unstable();
    chosen.into_iter().map(|i| graphs[i].clone()).collect()
}

fn sha_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

// --- criteria ----------------------------------------------------------------

#[test]
fn criterion_01_dag_properties() {
    let t0 = Instant::now();
    let mut corpora: Vec<(&str, Vec<Graph>)> = vec![("random", acceptance_corpus())];
    let zinc = load_zinc();
    let zinc_note = match &zinc {
        Some(graphs) => {
            corpora.push(("ZINC_test", graphs.clone()));
            format!("+ ZINC_test ({} graphs)", graphs.len())
        }
        None => "ZINC_test not mounted (set EEDP_ZINC_DIR) - random corpus only".to_string(),
    };

    let mut checked = 0;
    for (label, graphs) in &corpora {
        for g in graphs {
            let d = build_eedp_dag(g, 0).expect("dag builds");
            assert!(is_acyclic(&d), "[{label}] cyclic output for {g:?}");
            assert_eq!(d.node_count(), g.node_count(), "[{label}] node set changed");
            for &(u, v) in d.arcs() {
                assert!(g.has_arc(u, v), "[{label}] invented arc");
                assert!(!d.has_arc(v, u), "[{label}] mutual arc pair");
            }
            let ends = endpoints(&d);
            assert!(!ends.endpoints.is_empty(), "[{label}] empty endpoint set");
            checked += 1;
        }
    }
    let elapsed = t0.elapsed();
    assert!(checked >= 1000);
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "criterion 1: PASS - {checked} DAGs acyclic/node-preserving/mutual-free/endpointed ({zinc_note}) in {elapsed:.2?}"
    );
}

#[test]
fn criterion_02_path_extraction_oracle_equivalence() {
    fn enumerate_recursive(
        g: &Graph,
        current: usize,
        target: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current == target {
            out.push(path.clone());
            return;
        }
        for v in g.out_neighbors(current) {
            if !path.contains(&v) {
                path.push(v);
                enumerate_recursive(g, v, target, path, out);
                path.pop();
            }
        }
    }

    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c2);
    let mut checked = 0;
    while checked < 500 {
        let n = rng.gen_range(2..=9usize);
        let target_arcs = rng.gen_range(n.saturating_sub(1)..=2 * n);
        let mut pairs = BTreeSet::new();
        for _ in 0..target_arcs {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                pairs.insert((u, v));
            }
        }
        let arcs: Vec<_> = pairs.into_iter().collect();
        let g = Graph::from_arcs(n, &arcs, checked % 2 == 0).unwrap();

        let d = build_eedp_dag(&g, 0).unwrap();
        let ends = endpoints(&d);
        let bundle = extract_paths(&g, &ends, PathLimits::default());
        assert!(!bundle.overflow);

        // Independent enumeration filtered by the endpoint-pair predicate.
        let mut want: BTreeSet<Vec<usize>> = BTreeSet::new();
        for &a in &ends.endpoints {
            for &b in &ends.endpoints {
                if a == b {
                    continue;
                }
                let mut out = Vec::new();
                enumerate_recursive(&g, a, b, &mut vec![a], &mut out);
                want.extend(out);
            }
        }
        let got: BTreeSet<Vec<usize>> = bundle
            .groups
            .values()
            .flat_map(|ps| ps.iter().cloned())
            .collect();
        assert_eq!(got, want, "mismatch on {g:?}");
        checked += 1;
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("criterion 2: PASS - extract_paths equals brute-force enumeration on {checked} graphs (<=9 nodes) in {elapsed:.2?}");
}

#[test]
fn criterion_03_compression_losslessness() {
    let t0 = Instant::now();
    let corpus = acceptance_corpus();
    let mut groups = 0usize;
    for g in &corpus {
        let d = build_eedp_dag(g, 0).unwrap();
        let bundle = extract_paths(g, &endpoints(&d), PathLimits::default());
        for paths in bundle.groups.values() {
            let tree = compress(paths).expect("compressible group");
            let got: BTreeSet<_> = expand(&tree).into_iter().collect();
            let want: BTreeSet<_> = paths.iter().cloned().collect();
            assert_eq!(got, want, "lossy compression for {paths:?}");
            let c = render(&tree).len();
            let u = render_uncompressed(paths).len();
            assert!(c <= u, "compressed render longer ({c} > {u}) for {paths:?}");
            groups += 1;
        }
    }
    let elapsed = t0.elapsed();
    println!(
        "criterion 3: PASS - {groups} endpoint-pair groups round-trip losslessly with monotone size in {elapsed:.2?}"
    );
}

#[test]
fn criterion_04_token_reduction() {
    let t0 = Instant::now();
    let (graphs, source) = match load_zinc() {
        Some(all) => (seeded_subsample(&all, 100, 7), "ZINC_test subsample"),
        None => (molecule_like(100, 7), "synthetic molecule-like surrogate (ZINC not mounted)"),
    };

    let measure = |tok: &dyn TokenCounter| -> (f64, f64) {
        let mut compressed_sum = 0usize;
        let mut plain_sum = 0usize;
        let mut prompts = 0usize;
        for (gid, g) in graphs.iter().enumerate() {
            let plain = flatten_eedp(g, &FlattenOptions::default()).unwrap();
            let packed = flatten_eedp(
                g,
                &FlattenOptions {
                    compress_paths: true,
                    ..FlattenOptions::default()
                },
            )
            .unwrap();
            for case in sample_cases(g, gid, 7, 4)
                .into_iter()
                .filter(|c| c.task == Task::EpCp)
            {
                compressed_sum += build_prompt(&packed, &case, tok).token_count;
                plain_sum += build_prompt(&plain, &case, tok).token_count;
                prompts += 1;
            }
        }
        (
            compressed_sum as f64 / prompts as f64,
            plain_sum as f64 / prompts as f64,
        )
    };

    let (mean_c, mean_u) = measure(&HeuristicTokenizer);
    let ratio = mean_c / mean_u;
    assert!(
        ratio < 0.75,
        "heuristic ratio {ratio:.3} (compressed {mean_c:.1} / uncompressed {mean_u:.1})"
    );
    let mut note = format!(
        "heuristic ratio {ratio:.3} ({mean_c:.1}/{mean_u:.1} tokens) on {source}"
    );

    match std::env::var("EEDP_BPE_VOCAB") {
        Ok(path) => {
            let bpe = BpeTokenizer::from_vocab_file(std::path::Path::new(&path))
                .expect("EEDP_BPE_VOCAB loads");
            let (c, u) = measure(&bpe);
            let r = c / u;
            assert!(r < 0.60, "exact-BPE ratio {r:.3}");
            note.push_str(&format!("; exact-BPE ratio {r:.3} ({c:.1}/{u:.1})"));
        }
        Err(_) => note.push_str("; exact-BPE part SKIPPED (EEDP_BPE_VOCAB not set)"),
    }

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("criterion 4: PASS - {note} in {elapsed:.2?}");
}

#[test]
fn criterion_05_benchmark_statistics() {
    let t0 = Instant::now();
    match load_zinc() {
        Some(all) => {
            let stats = dataset_stats(&all);
            assert!(
                (stats.mean_nodes - 23.07).abs() <= 0.01,
                "mean nodes {:.4}",
                stats.mean_nodes
            );
            assert!(
                (stats.mean_arcs - 49.60).abs() <= 0.01,
                "mean arcs {:.4}",
                stats.mean_arcs
            );
            let sample = seeded_subsample(&all, 2500, 0);
            let set = BenchmarkSet::build(&sample, "ZINC_test_2500", 0, 4);
            let counts = &set.per_bucket_counts;
            assert_eq!(counts.get(&HopBucket::H1), Some(&10_000));
            assert_eq!(counts.get(&HopBucket::H2), Some(&10_000));
            assert_eq!(counts.get(&HopBucket::H3), Some(&10_000));
            let h5 = *counts.get(&HopBucket::H5plus).unwrap_or(&0);
            assert!((9_900..=10_000).contains(&h5), "H5plus count {h5}");
            println!(
                "criterion 5: PASS - ZINC load mean nodes {:.2}/arcs {:.2}; bucket counts 10000/10000/10000/{h5} in {:.2?}",
                stats.mean_nodes,
                stats.mean_arcs,
                t0.elapsed()
            );
        }
        None => {
            // The dataset cannot be fetched in this environment; verify the
            // counting machinery on a synthetic TU round-trip instead.
            let molecules = molecule_like(40, 3);
            let (adj, ind) = eedp_core::write_tu_dataset(&molecules);
            let reloaded = eedp_core::tu::load_tu_from_readers(
                std::io::BufReader::new(adj.as_bytes()),
                std::io::BufReader::new(ind.as_bytes()),
                "adj",
                "ind",
            )
            .unwrap();
            assert_eq!(reloaded, molecules);
            let set = BenchmarkSet::build(&reloaded, "surrogate", 0, 4);
            let pair_cases = set.cases.iter().filter(|c| c.task == Task::EpCp).count();
            let bucket_sum: usize = set.per_bucket_counts.values().sum();
            assert_eq!(pair_cases, bucket_sum);
            assert!(pair_cases <= 16 * reloaded.len());
            println!(
                "criterion 5: SKIP - ZINC_test not mounted (set EEDP_ZINC_DIR to the TU files); \
                 loader + bucket counting verified on a synthetic TU round-trip ({pair_cases} pairs) in {:.2?}",
                t0.elapsed()
            );
        }
    }
}

#[test]
fn criterion_06_grading_correctness() {
    let t0 = Instant::now();

    // Shortest-distance answers are always accepted when reachable.
    let graphs = generate_merged_like(150, 21);
    let mut reachable_cases = 0;
    for (gid, g) in graphs.iter().enumerate() {
        for case in sample_cases(g, gid, 21, 4)
            .into_iter()
            .filter(|c| c.task == Task::EpDp)
        {
            if case.gold_dp >= 1 {
                let d = shortest_distance(g, case.src, case.dst, true)
                    .unwrap()
                    .expect("reachable");
                assert!(grade_dp(g, &case, d as i64).correct, "shortest rejected");
                reachable_cases += 1;
            } else {
                assert!(grade_dp(g, &case, -1).correct);
                assert!(!grade_dp(g, &case, 1).correct);
            }
        }
    }
    assert!(reachable_cases > 100);

    // Explicit fixture with simple-path lengths exactly {2, 4}.
    let g = Graph::from_arcs(6, &[(0, 1), (1, 5), (0, 2), (2, 3), (3, 4), (4, 5)], false)
        .unwrap();
    let case = TestCase {
        graph: 0,
        src: 0,
        dst: 5,
        bucket: HopBucket::H2,
        task: Task::EpDp,
        gold_cp: true,
        gold_dp: 2,
    };
    assert!(grade_dp(&g, &case, 2).correct);
    assert!(grade_dp(&g, &case, 4).correct);
    for wrong in [1, 3, 5, 0, -1] {
        assert!(!grade_dp(&g, &case, wrong).correct, "accepted {wrong}");
    }
    let malformed = grade_dp(&g, &case, -3);
    assert!(!malformed.correct && malformed.malformed);

    // Unreachable fixture: -1 exactly.
    let chain = Graph::from_arcs(3, &[(0, 1), (1, 2)], false).unwrap();
    let unreachable = TestCase {
        graph: 0,
        src: 2,
        dst: 0,
        bucket: HopBucket::H2,
        task: Task::EpDp,
        gold_cp: false,
        gold_dp: -1,
    };
    assert!(grade_dp(&chain, &unreachable, -1).correct);
    for k in 1..=4 {
        assert!(!grade_dp(&chain, &unreachable, k).correct);
    }

    println!(
        "criterion 6: PASS - shortest accepted on {reachable_cases} reachable cases; {{2,4}} fixture, -1 semantics, malformed flag all exact in {:.2?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_07_mock_runs() {
    let t0 = Instant::now();

    // Oracle client: 100.00 for every method, task and bucket.
    let graphs = generate_merged_like(40, 5);
    let set = BenchmarkSet::build(&graphs, "mock", 5, 4);
    let settings = RunSettings {
        methods: FlattenMethod::ALL.to_vec(),
        flatten_opts: FlattenOptions {
            compress_paths: true,
            ..FlattenOptions::default()
        },
        ..RunSettings::default()
    };
    let records =
        run_benchmark(&graphs, &set, &OracleClient, &HeuristicTokenizer, &settings).unwrap();
    let report = aggregate(&records);
    assert_eq!(report.rows.len(), FlattenMethod::ALL.len() * 2);
    for row in &report.rows {
        assert_eq!(row.total.accuracy(), Some(100.0), "row {row:?}");
        for (bucket, cell) in &row.buckets {
            assert_eq!(cell.accuracy(), Some(100.0), "bucket {bucket:?}");
        }
        assert_eq!(row.malformed, 0);
    }
    let oracle_records = records.len();

    // Random client, EP-CP, >= 10,000 cases: Total within [48, 52].
    let big = generate_merged_like(1000, 6);
    let mut big_set = BenchmarkSet::build(&big, "mock-large", 6, 4);
    big_set.cases.retain(|c| c.task == Task::EpCp);
    let cp_cases = big_set.cases.len();
    assert!(cp_cases >= 10_000, "only {cp_cases} EP-CP cases");
    let settings = RunSettings {
        methods: vec![FlattenMethod::AdjList],
        ..RunSettings::default()
    };
    let records = run_benchmark(
        &big,
        &big_set,
        &RandomClient { seed: 17 },
        &HeuristicTokenizer,
        &settings,
    )
    .unwrap();
    let report = aggregate(&records);
    let cp_total = report.rows[0].total.accuracy().unwrap();
    assert!(
        (48.0..=52.0).contains(&cp_total),
        "random EP-CP total {cp_total:.2}"
    );

    // Random client, EP-DP: Total below 15.
    let mut dp_set = BenchmarkSet::build(&big, "mock-large", 6, 4);
    dp_set.cases.retain(|c| c.task == Task::EpDp);
    let records = run_benchmark(
        &big,
        &dp_set,
        &RandomClient { seed: 18 },
        &HeuristicTokenizer,
        &settings,
    )
    .unwrap();
    let report = aggregate(&records);
    let dp_total = report.rows[0].total.accuracy().unwrap();
    assert!(dp_total < 15.0, "random EP-DP total {dp_total:.2}");

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "criterion 7: PASS - oracle 100.00 on {oracle_records} records (12 methods x 2 tasks); random EP-CP {cp_total:.2} on {cp_cases} cases; random EP-DP {dp_total:.2} in {elapsed:.2?}"
    );
}

#[test]
fn criterion_08_determinism() {
    let t0 = Instant::now();

    let run_pipeline = || {
        let graphs = generate_merged_like(30, 12);
        let set = BenchmarkSet::build(&graphs, "determinism", 12, 4);
        let mut bench_bytes = Vec::new();
        set.write_jsonl(&mut bench_bytes).unwrap();

        let mut flat_bytes = Vec::new();
        let opts = FlattenOptions {
            compress_paths: true,
            walk_seed: 12,
            ..FlattenOptions::default()
        };
        for g in &graphs {
            for m in FlattenMethod::ALL {
                flat_bytes.extend_from_slice(flatten(g, m, &opts).unwrap().text.as_bytes());
                flat_bytes.push(b'\n');
            }
        }

        let settings = RunSettings {
            methods: vec![FlattenMethod::Eedp, FlattenMethod::AdjList],
            flatten_opts: opts,
            concurrency: 4,
            ..RunSettings::default()
        };
        let records =
            run_benchmark(&graphs, &set, &OracleClient, &HeuristicTokenizer, &settings).unwrap();
        let report = aggregate(&records);
        (
            sha_hex(&flat_bytes),
            sha_hex(&bench_bytes),
            sha_hex(report.to_text().as_bytes()),
            sha_hex(report.to_json().as_bytes()),
        )
    };

    let first = run_pipeline();
    let second = run_pipeline();
    assert_eq!(first, second, "pipeline hashes differ between runs");

    let elapsed = t0.elapsed();
    println!(
        "criterion 8: PASS - flattened texts {}.., benchmark {}.., reports {}../{}.. identical across two runs in {elapsed:.2?}",
        &first.0[..8],
        &first.1[..8],
        &first.2[..8],
        &first.3[..8]
    );
}

#[test]
fn criterion_09_serializer_round_trip() {
    let t0 = Instant::now();
    let corpus = acceptance_corpus();
    let opts = FlattenOptions::default();
    for g in &corpus {
        let arcs = g.arcs().to_vec();
        let adj = flatten(g, FlattenMethod::AdjList, &opts).unwrap();
        assert_eq!(parse_adj_list(&adj.text).unwrap(), arcs);
        let mat = flatten(g, FlattenMethod::AdjMatrix, &opts).unwrap();
        assert_eq!(parse_adj_matrix(&mat.text).unwrap(), (g.node_count(), arcs.clone()));
        let el = flatten(g, FlattenMethod::EdgeList, &opts).unwrap();
        assert_eq!(parse_edge_list(&el.text).unwrap(), arcs);
        let ego = flatten(g, FlattenMethod::EgoGraph, &opts).unwrap();
        assert_eq!(parse_ego_graph(&ego.text).unwrap(), (g.node_count(), arcs.clone()));
        let nat = flatten(g, FlattenMethod::Natural, &opts).unwrap();
        assert_eq!(parse_natural_language(&nat.text).unwrap(), arcs);
        let gml = flatten(g, FlattenMethod::Gml, &opts).unwrap();
        assert_eq!(parse_gml(&gml.text).unwrap(), (g.node_count(), arcs.clone(), true));
        let xml = flatten(g, FlattenMethod::GraphMl, &opts).unwrap();
        validate_graphml(&xml.text, g);
    }
    let elapsed = t0.elapsed();
    println!(
        "criterion 9: PASS - 6 lossless formats re-parse to the exact arc set on {} graphs; GraphML structurally valid in {elapsed:.2?}",
        corpus.len()
    );
}

/// Structural GraphML validation: well-formed tag nesting, the standard
/// namespace, unique node ids, and edges referencing declared nodes.
/// (Offline schema validation stands in for the XSD validator, which
/// needs network access to fetch the schema.)
fn validate_graphml(text: &str, g: &Graph) {
    assert!(text.starts_with("<?xml version=\"1.0\" encoding=\"UTF-8\"?>"));
    assert!(text.contains("xmlns=\"http://graphml.graphdrawing.org/xmlns\""));
    assert!(text.contains("<graph id=\"G\" edgedefault=\"directed\">"));
    let (n, arcs) = parse_graphml(text).expect("well-formed graphml");
    if g.node_count() > 0 {
        assert_eq!(n, g.node_count());
    }
    assert_eq!(arcs, g.arcs());
    // Node ids unique; every edge endpoint declared.
    let mut ids = BTreeSet::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("<node id=\"") {
            let id = rest.split('"').next().unwrap();
            assert!(ids.insert(id.to_string()), "duplicate node id {id}");
        }
    }
    for &(u, v) in g.arcs() {
        assert!(ids.contains(&format!("n{u}")));
        assert!(ids.contains(&format!("n{v}")));
    }
    // Balanced open/close of the document elements.
    assert_eq!(text.matches("<graphml").count(), 1);
    assert_eq!(text.matches("</graphml>").count(), 1);
    assert_eq!(text.matches("<graph ").count(), 1);
    assert_eq!(text.matches("</graph>").count(), 1);
}

/// Optional live-endpoint run (criterion 10): not gating, requires a
/// configured endpoint. Set EEDP_LIVE_BASE_URL, EEDP_LIVE_MODEL and
/// OPENAI_API_KEY, then run
/// `cargo test --test acceptance criterion_10 -- --ignored --nocapture`.
#[test]
#[ignore = "requires a live OpenAI-compatible endpoint"]
fn criterion_10_live_endpoint_resumability() {
    let base_url = std::env::var("EEDP_LIVE_BASE_URL").expect("EEDP_LIVE_BASE_URL not set");
    let model = std::env::var("EEDP_LIVE_MODEL").unwrap_or_else(|_| "gpt-4-turbo".to_string());
    let api_key = std::env::var("OPENAI_API_KEY").ok();

    let graphs = generate_merged_like(50, 99);
    let mut set = BenchmarkSet::build(&graphs, "live", 99, 1);
    set.cases.retain(|c| c.task == Task::EpCp);

    let client = HttpClient::new(HttpClientConfig {
        base_url,
        model,
        api_key,
        ..HttpClientConfig::default()
    })
    .expect("client config");

    let dir = std::env::temp_dir().join(format!("eedp-live-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let results = dir.join("results.jsonl");

    let settings = RunSettings {
        methods: vec![FlattenMethod::Eedp],
        results_path: Some(results.clone()),
        requests_per_minute: Some(60),
        concurrency: 2,
        ..RunSettings::default()
    };
    let full = run_benchmark(&graphs, &set, &client, &HeuristicTokenizer, &settings).unwrap();
    let report_full = aggregate(&full).to_text();

    // Drop the tail of the results file to simulate a killed run, resume,
    // and require the identical final report.
    let content = std::fs::read_to_string(&results).unwrap();
    let keep: Vec<&str> = content.lines().take(content.lines().count() / 2).collect();
    std::fs::write(&results, format!("{}\n", keep.join("\n"))).unwrap();
    let resumed = run_benchmark(&graphs, &set, &client, &HeuristicTokenizer, &settings).unwrap();
    let report_resumed = aggregate(&resumed).to_text();
    assert_eq!(report_full, report_resumed);
    println!("criterion 10: PASS - live run with kill+resume produced identical reports");
}
