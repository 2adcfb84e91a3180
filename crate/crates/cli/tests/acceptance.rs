//! Acceptance suite: one test per criterion, each printing a PASS line and
//! enforcing its runtime budget. Run with
//! `cargo test -p sixflow-cli --test acceptance -- --nocapture`.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sixflow::analysis::{
    brute_force_k_flow, cyclic_edge_connectivity, is_flow_admissible, maximum_matching,
    CyclicConnectivity,
};
use sixflow::convert::verify_flow;
use sixflow::ops::boundary;
use sixflow::reduce::{lift_flow, reduce_to_cubic};
use sixflow::small_graphs;
use sixflow::z6::{compose_z6, find_z2z3_flow, normalize_cubic, source_parity, z2z3_to_z6};
use sixflow::{EdgeId, Sign, SignedGraph, VertexId};
use sixflow_cli::formats::{bind_flw, parse_flw, parse_sgf};
use sixflow_cli::gen::random_cubic_signed;
use sixflow_cli::sweep::{run_sweep, Outcome, SweepMode};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sixflow"))
}

fn samples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn budget(start: Instant, limit: Duration, label: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= limit,
        "{label}: took {elapsed:?}, budget {limit:?}"
    );
}

/// Runs `flow` and `verify -k 6` through the binary, then re-checks the
/// emitted file exactly: sign-consistent orientation, values in ±1..±5, and
/// zero boundary at every vertex.
fn flow_and_verify_sample(name: &str) -> SignedGraph {
    let tmp = tempfile::tempdir().unwrap();
    let graph_path = samples_dir().join(name);
    let flw_path = tmp.path().join("out.flw");
    let out = bin()
        .args([
            "flow",
            graph_path.to_str().unwrap(),
            "-o",
            flw_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "flow failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = bin()
        .args([
            "verify",
            graph_path.to_str().unwrap(),
            flw_path.to_str().unwrap(),
            "-k",
            "6",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "verify failed");

    let g = parse_sgf(&std::fs::read_to_string(&graph_path).unwrap()).unwrap();
    let entries = parse_flw(&std::fs::read_to_string(&flw_path).unwrap()).unwrap();
    let (tau, f) = bind_flw(&g, &entries).unwrap();
    assert!(tau.is_sign_consistent(&g));
    for e in g.edge_ids() {
        assert!(f.get(e) != 0 && f.get(e).abs() <= 5, "value at edge {e}");
    }
    assert!(boundary(&g, &tau, &f).unwrap().is_zero());
    g
}

#[test]
fn criterion_1_all_negative_petersen_flows() {
    let start = Instant::now();
    let g = flow_and_verify_sample("petersen-allneg.sgf");
    assert_eq!(g.signature().len(), 15);
    budget(start, Duration::from_secs(10), "criterion 1");
    println!("acceptance 1 (all-negative Petersen flow + verify): PASS");
}

#[test]
fn criterion_2_all_positive_petersen_flows() {
    let start = Instant::now();
    let g = flow_and_verify_sample("petersen.sgf");
    // With every edge positive the result is an ordinary nowhere-zero
    // 6-flow: each edge has one away and one toward end.
    assert!(g.signature().is_empty());
    budget(start, Duration::from_secs(10), "criterion 2");
    println!("acceptance 2 (all-positive Petersen flow + verify): PASS");
}

#[test]
fn criterion_3_petersen_signature_sweep() {
    let start = Instant::now();
    let g = small_graphs::petersen();

    let exhaustive = run_sweep(&g, SweepMode::MaxNegatives(2));
    assert_eq!(exhaustive.summary.signatures, 121);
    let sampled = run_sweep(
        &g,
        SweepMode::Samples {
            count: 2000,
            seed: 0xC5,
        },
    );
    assert_eq!(sampled.summary.signatures, 2000);

    for report in [&exhaustive, &sampled] {
        assert_eq!(report.summary.breaches, 0, "invariant breach during sweep");
        assert_eq!(report.summary.errors, 0);
        assert_eq!(report.summary.failures, 0);
        for row in &report.rows {
            if row.admissible {
                assert_eq!(
                    row.outcome,
                    Outcome::Flowed,
                    "signature {:?}",
                    row.negatives
                );
            } else {
                assert_eq!(
                    row.outcome,
                    Outcome::NotAdmissible,
                    "signature {:?}",
                    row.negatives
                );
            }
        }
    }
    budget(start, Duration::from_secs(600), "criterion 3");
    println!(
        "acceptance 3 (Petersen sweep, 121 exhaustive + 2000 sampled, {} flowed, 0 breaches): PASS",
        exhaustive.summary.flowed + sampled.summary.flowed
    );
}

#[test]
fn criterion_4_isomorphism_table() {
    let table = [
        ((0, 0), 0),
        ((1, 1), 1),
        ((0, 2), 2),
        ((1, 0), 3),
        ((0, 1), 4),
        ((1, 2), 5),
    ];
    for ((a, b), z) in table {
        assert_eq!(z2z3_to_z6(a, b), z);
    }
    // Bijective homomorphism over all 36 pairs.
    let mut image = [false; 6];
    for a in 0..2u8 {
        for b in 0..3u8 {
            image[z2z3_to_z6(a, b) as usize] = true;
        }
    }
    assert!(image.iter().all(|&x| x));
    for a in 0..2u8 {
        for b in 0..3u8 {
            for a2 in 0..2u8 {
                for b2 in 0..3u8 {
                    assert_eq!(
                        z2z3_to_z6((a + a2) % 2, (b + b2) % 3),
                        (z2z3_to_z6(a, b) + z2z3_to_z6(a2, b2)) % 6
                    );
                }
            }
        }
    }
    println!("acceptance 4 (Z2xZ3 -> Z6 table, bijective homomorphism on 36 pairs): PASS");
}

fn assert_parity_law(g: &SignedGraph) {
    let (tau, z23) = find_z2z3_flow(g)
        .expect("search in guard")
        .expect("admissible instance has a flow");
    let phi6 = compose_z6(&z23);
    let (g2, norm) = normalize_cubic(g, &tau, &phi6).expect("normalization succeeds");
    let p = source_parity(&g2, &norm.orientation, &norm.values).unwrap();
    assert!(p.check, "parity law failed");
    assert_eq!(p.source_count % 2, 0);
    assert_eq!(
        6 * p.source_count as i64,
        2 * (p.x1 + p.x3) + 4 * p.x2 + 4 * p.x3,
        "exact integer equality"
    );
}

#[test]
fn criterion_5_source_parity_law() {
    let start = Instant::now();
    let mut checked = 0usize;

    // Generated instances that pass the cyclic-5 and admissibility gates.
    for seed in 0..400u64 {
        let n = 10 + 2 * ((seed as usize) % 4); // 10, 12, 14, 16
        let g = random_cubic_signed(n, 0.4, seed).unwrap();
        if !cyclic_edge_connectivity(&g).at_least(5) || !is_flow_admissible(&g) {
            continue;
        }
        assert_parity_law(&g);
        checked += 1;
    }

    // Petersen signatures until at least 500 instances are covered.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let petersen = small_graphs::petersen();
    while checked < 500 {
        let negs: Vec<EdgeId> = (0..15).filter(|_| rng.gen_bool(0.5)).collect();
        let g = small_graphs::with_signature(&petersen, &negs);
        if !is_flow_admissible(&g) {
            continue;
        }
        assert_parity_law(&g);
        checked += 1;
    }

    assert!(checked >= 500);
    budget(start, Duration::from_secs(600), "criterion 5");
    println!("acceptance 5 (source parity law on {checked} normalized valuations): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 6 oracles: independent of the library implementations.
// ---------------------------------------------------------------------------

/// Component partition by plain BFS, skipping the listed edges.
fn oracle_components(g: &SignedGraph, skip: &[EdgeId]) -> Vec<Vec<VertexId>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut comps = Vec::new();
    for &v in g.vertex_ids() {
        if seen.contains(&v) {
            continue;
        }
        let mut members = vec![v];
        seen.insert(v);
        let mut queue = vec![v];
        while let Some(x) = queue.pop() {
            for (e, end) in g.incidences(x) {
                if skip.contains(&e) {
                    continue;
                }
                let w = g.edge(e).unwrap().other_end(end);
                if seen.insert(w) {
                    members.push(w);
                    queue.push(w);
                }
            }
        }
        comps.push(members);
    }
    comps
}

fn oracle_is_cycle_separating(g: &SignedGraph, skip: &[EdgeId]) -> bool {
    let comps = oracle_components(g, skip);
    let cyclic = comps
        .iter()
        .filter(|members| {
            let edges = g
                .edges()
                .filter(|(e, edge)| !skip.contains(e) && members.contains(&edge.ends[0]))
                .count();
            edges >= members.len()
        })
        .count();
    cyclic >= 2
}

/// Plain subset enumeration by increasing size, with the cycle-rank
/// convention when no separating set exists.
fn oracle_cyclic_connectivity(g: &SignedGraph) -> CyclicConnectivity {
    let live: Vec<EdgeId> = g.edge_ids().collect();
    for k in 0..=live.len() {
        let mut chosen = vec![0usize; k];
        fn rec(
            g: &SignedGraph,
            live: &[EdgeId],
            chosen: &mut Vec<usize>,
            depth: usize,
            start: usize,
        ) -> bool {
            if depth == chosen.len() {
                let skip: Vec<EdgeId> = chosen.iter().map(|&i| live[i]).collect();
                return oracle_is_cycle_separating(g, &skip);
            }
            for i in start..live.len() {
                chosen[depth] = i;
                if rec(g, live, chosen, depth + 1, i + 1) {
                    return true;
                }
            }
            false
        }
        if rec(g, &live, &mut chosen, 0, 0) {
            return CyclicConnectivity::Finite(k);
        }
    }
    let comps = oracle_components(g, &[]).len();
    let rank = (g.edge_count() + comps).saturating_sub(g.vertex_count());
    if rank >= 1 {
        CyclicConnectivity::Finite(rank)
    } else {
        CyclicConnectivity::Infinite
    }
}

/// Exhaustive maximum matching on the simple underlying graph.
fn oracle_max_matching_size(g: &SignedGraph) -> usize {
    let verts = g.vertex_ids();
    let idx = |v: VertexId| verts.binary_search(&v).unwrap();
    let n = verts.len();
    let mut adj = vec![std::collections::BTreeSet::new(); n];
    for (_, edge) in g.edges() {
        if edge.is_loop() {
            continue;
        }
        let (a, b) = (idx(edge.ends[0]), idx(edge.ends[1]));
        adj[a].insert(b);
        adj[b].insert(a);
    }
    fn rec(v: usize, used: &mut [bool], adj: &[std::collections::BTreeSet<usize>]) -> usize {
        let n = adj.len();
        let mut v = v;
        while v < n && used[v] {
            v += 1;
        }
        if v >= n {
            return 0;
        }
        used[v] = true;
        let mut best = rec(v + 1, used, adj); // leave v unmatched
        for &w in &adj[v] {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + rec(v + 1, used, adj));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    rec(0, &mut vec![false; n], &adj)
}

/// Random multigraph on up to 10 vertices, loops and parallels included.
fn random_small_graph(rng: &mut ChaCha8Rng) -> SignedGraph {
    let n = rng.gen_range(2..=10);
    let m = rng.gen_range(0..=14);
    let mut g = SignedGraph::new(n);
    for _ in 0..m {
        let u = rng.gen_range(0..n);
        let v = if rng.gen_bool(0.08) {
            u
        } else {
            rng.gen_range(0..n)
        };
        let sign = if rng.gen_bool(0.5) {
            Sign::Negative
        } else {
            Sign::Positive
        };
        g.add_edge(u, v, sign).unwrap();
    }
    g
}

fn corpus_under_20_edges() -> Vec<SignedGraph> {
    let mut out = vec![
        small_graphs::dumbbell(),
        small_graphs::double_loop_vertex(),
        small_graphs::mixed_digon(),
        small_graphs::complete(4),
        small_graphs::complete_bipartite(3, 3),
        small_graphs::cycle(3),
        small_graphs::cycle(5),
        small_graphs::petersen(),
        small_graphs::petersen_all_negative(),
        small_graphs::with_signature(&small_graphs::petersen(), &[2, 5, 11]),
        small_graphs::with_signature(&small_graphs::complete(4), &[0, 5]),
        small_graphs::with_signature(&small_graphs::cycle(4), &[1, 3]),
    ];
    for seed in 0..20 {
        out.push(random_cubic_signed(6 + 2 * (seed as usize % 2), 0.4, seed).unwrap());
    }
    out
}

#[test]
fn criterion_6a_cyclic_connectivity_oracle_agreement() {
    let start = Instant::now();
    let named = [
        ("petersen", small_graphs::petersen(), 5),
        ("k4", small_graphs::complete(4), 3),
        ("k33", small_graphs::complete_bipartite(3, 3), 4),
    ];
    for (name, g, expected) in named {
        let got = cyclic_edge_connectivity(&g);
        assert_eq!(got, CyclicConnectivity::Finite(expected), "{name}");
        assert_eq!(got, oracle_cyclic_connectivity(&g), "{name} vs oracle");
    }
    budget(start, Duration::from_secs(100), "criterion 6a");
    println!("acceptance 6a (cyclic connectivity 5/3/4 on Petersen/K4/K3,3, oracle match): PASS");
}

#[test]
fn criterion_6b_matching_oracle_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for i in 0..200 {
        let g = random_small_graph(&mut rng);
        let got = maximum_matching(&g);
        let expected = oracle_max_matching_size(&g);
        assert_eq!(got.edges.len(), expected, "graph {i}: {g:?}");
        assert_eq!(got.perfect, 2 * expected == g.vertex_count());
        // Matched edges must form a matching: no loops, no shared vertices.
        let mut covered = std::collections::BTreeSet::new();
        for &e in &got.edges {
            let edge = g.edge(e).unwrap();
            assert!(!edge.is_loop());
            assert!(covered.insert(edge.ends[0]));
            assert!(covered.insert(edge.ends[1]));
        }
    }
    budget(start, Duration::from_secs(100), "criterion 6b");
    println!("acceptance 6b (matching vs exhaustive enumeration on 200 graphs): PASS");
}

#[test]
fn criterion_6c_flow_oracle_implies_admissible() {
    let start = Instant::now();
    for (i, g) in corpus_under_20_edges().into_iter().enumerate() {
        assert!(g.edge_count() <= 20, "corpus graph {i} too large");
        if brute_force_k_flow(&g, 6).unwrap().is_some() {
            assert!(is_flow_admissible(&g), "graph {i}: 6-flow but inadmissible");
        }
    }
    budget(start, Duration::from_secs(100), "criterion 6c");
    println!("acceptance 6c (6-flow existence implies admissibility on corpus): PASS");
}

#[test]
fn criterion_7_reduction_round_trip() {
    let start = Instant::now();
    let mut done = 0usize;
    let mut seed = 0u64;
    while done < 100 {
        let n = 6 + 2 * ((seed as usize) % 3); // 6, 8, 10
        let g = random_cubic_signed(n, 0.3, seed).unwrap();
        let extra = pick_nonadjacent_pair(&g, seed);
        seed += 1;
        let Some((u, v)) = extra else { continue };
        let mut g = g;
        g.add_edge(u, v, Sign::Positive).unwrap();
        if !g.is_connected() || !is_flow_admissible(&g) || g.is_cubic() {
            continue;
        }

        let (reduced, recipe) = reduce_to_cubic(&g).expect("reduction succeeds");
        assert!(reduced.is_cubic());
        assert!(is_flow_admissible(&reduced));

        // Any nowhere-zero k-flow with k <= 6 is a 6-flow; search small
        // bounds first.
        let found = [3i64, 4, 6]
            .iter()
            .find_map(|&k| brute_force_k_flow(&reduced, k).unwrap())
            .expect("reduced graph admits a 6-flow");
        let (tau, f) = lift_flow(&recipe, &g, &found.0, &found.1).expect("lift succeeds");
        assert!(verify_flow(&g, &tau, &f, 6));
        done += 1;
    }
    budget(start, Duration::from_secs(300), "criterion 7");
    println!("acceptance 7 (reduce + lift round trip on {done} instances): PASS");
}

fn pick_nonadjacent_pair(g: &SignedGraph, seed: u64) -> Option<(VertexId, VertexId)> {
    let n = g.vertex_count();
    let adjacent: std::collections::BTreeSet<(usize, usize)> = g
        .edges()
        .map(|(_, e)| (e.ends[0].min(e.ends[1]), e.ends[0].max(e.ends[1])))
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .filter(|p| !adjacent.contains(p))
        .collect();
    if pairs.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x70AD);
    let i = rng.gen_range(0..pairs.len());
    Some(pairs.swap_remove(i))
}

#[test]
fn criterion_8_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = samples_dir().join("petersen-allneg.sgf");
    let mut flws = Vec::new();
    for run in 0..2 {
        let path = tmp.path().join(format!("run{run}.flw"));
        let out = bin()
            .args([
                "flow",
                graph.to_str().unwrap(),
                "-o",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        flws.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(flws[0], flws[1], "flow files differ between runs");

    let mut reports = Vec::new();
    for _ in 0..2 {
        let out = bin()
            .args([
                "sweep",
                graph.to_str().unwrap(),
                "--samples",
                "60",
                "--seed",
                "9",
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        reports.push(out.stdout);
    }
    assert_eq!(reports[0], reports[1], "sweep reports differ between runs");
    println!("acceptance 8 (byte-identical flows and sweep reports): PASS");
}
