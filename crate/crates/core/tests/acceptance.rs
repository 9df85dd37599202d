//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use cascade_motifs::motif::build_catalog;
use cascade_motifs::percolation::percolate_traced;
use cascade_motifs::phase::evaluate_intensity;
use cascade_motifs::pipeline::{
    emit_report, generate_synthetic, run_pipeline, PipelineConfig, ReportFiles, SyntheticSpec,
};
use cascade_motifs::stats::{student_t_two_sided, welch_t_test};
use cascade_motifs::{
    build_window_graph, esu_enumerate, instances_by_pattern, percolate, segment, CorpusReport,
    Graph, MotifInstance, MotifPattern, PercolationOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed < Duration::from_secs(limit_s)
}

/// Adjacency code of `vertices` listed in `order`, pairs (0,1),(0,2),(1,2),(0,3)..
/// with the first pair as the most significant bit.
fn code_of(adj: &[Vec<bool>], order: &[usize]) -> u32 {
    let mut code = 0;
    for j in 1..order.len() {
        for i in 0..j {
            code = (code << 1) | adj[order[i]][order[j]] as u32;
        }
    }
    code
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn min_code(adj: &[Vec<bool>], vertices: &[usize], perms: &[Vec<usize>]) -> u32 {
    perms
        .iter()
        .map(|p| code_of(adj, &p.iter().map(|&i| vertices[i]).collect::<Vec<_>>()))
        .min()
        .unwrap()
}

fn connected(adj: &[Vec<bool>], vertices: &[usize]) -> bool {
    let mut seen = vec![false; vertices.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..vertices.len() {
            if !seen[j] && adj[vertices[i]][vertices[j]] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        let mut i = k;
        while i > 0 && c[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let perms = permutations(5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut total = 0usize;
    for g in 0..50 {
        let n = rng.gen_range(10..=25);
        let p = rng.gen_range(0.1..=0.5);
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    adj[u][v] = true;
                    adj[v][u] = true;
                    edges.push((u, v));
                }
            }
        }
        let graph = Graph::from_edges(n, edges);
        let mut oracle: BTreeMap<u32, BTreeSet<Vec<usize>>> = BTreeMap::new();
        combinations(n, 5, |c| {
            if connected(&adj, c) {
                oracle
                    .entry(min_code(&adj, c, &perms))
                    .or_default()
                    .insert(c.to_vec());
            }
        });
        let mut found: BTreeMap<u32, BTreeSet<Vec<usize>>> = BTreeMap::new();
        let mut duplicates = false;
        for m in esu_enumerate(&graph, 5).unwrap() {
            let set = found.entry(m.pattern.code()).or_default();
            duplicates |= !set.insert(m.vertices.to_vec());
        }
        if duplicates || found != oracle {
            return outcome(
                false,
                format!("graph {g} (n = {n}, p = {p:.2}) differs from the brute-force scan"),
            );
        }
        total += oracle.values().map(BTreeSet::len).sum::<usize>();
    }
    let elapsed = started.elapsed();
    outcome(
        within(elapsed, 60),
        format!(
            "50 graphs, {total} connected 5-sets matched per pattern, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let started = Instant::now();
    let mut detail = Vec::new();
    let mut pass = true;
    for (k, expected) in [(3, 2), (4, 6), (5, 21)] {
        let perms = permutations(k);
        let pairs: Vec<(usize, usize)> = (1..k).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let vertices: Vec<usize> = (0..k).collect();
        let mut classes = BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            let mut adj = vec![vec![false; k]; k];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
            if connected(&adj, &vertices) {
                classes.insert(min_code(&adj, &vertices, &perms));
            }
        }
        let built: BTreeSet<u32> = build_catalog(k)
            .unwrap()
            .iter()
            .map(MotifPattern::code)
            .collect();
        pass &= built.len() == expected && classes.len() == expected && built == classes;
        detail.push(format!(
            "k={k}: {} built, {} brute force",
            built.len(),
            classes.len()
        ));
    }
    let elapsed = started.elapsed();
    outcome(
        pass && within(elapsed, 5),
        format!("{}, {:.2} s", detail.join("; "), elapsed.as_secs_f64()),
    )
}

fn nc_from_every_seed(graph: &Graph, options: PercolationOptions) -> Vec<f64> {
    let by_pattern = instances_by_pattern(graph, 5).unwrap();
    assert_eq!(by_pattern.len(), 1, "expected a single pattern");
    let instances = by_pattern.into_values().next().unwrap();
    instances
        .iter()
        .map(|s| percolate::<f64>(graph, &instances, s, options).unwrap().nc)
        .collect()
}

fn exact_cases(options: PercolationOptions) -> (usize, Vec<String>) {
    let mut failures = Vec::new();
    let mut runs = 0;
    let mut check = |name: String, graph: Graph, expected: f64| {
        let ncs = nc_from_every_seed(&graph, options);
        runs += ncs.len();
        if ncs.iter().any(|&nc| nc != expected) {
            failures.push(name);
        }
    };
    for n in 5..=9 {
        check(format!("K{n}"), Graph::complete(n), 1.0);
    }
    for n in 6..=12 {
        check(format!("P{n}"), Graph::path(n), 1.0);
    }
    for m in 5..=10 {
        check(format!("S{m}"), Graph::star(m), 1.0);
    }
    check(
        "2K5".into(),
        Graph::complete(5).disjoint_union(&Graph::complete(5)),
        0.5,
    );
    (runs, failures)
}

fn criterion_3() -> Outcome {
    let (runs, failures) = exact_cases(PercolationOptions::default());
    let (_, strict) = exact_cases(PercolationOptions {
        strict_pseudocode: true,
    });
    let strict = if strict.is_empty() {
        "strict mode also exact".to_string()
    } else {
        format!("strict mode inexact on {}", strict.join(", "))
    };
    if failures.is_empty() {
        outcome(
            true,
            format!("K5..K9, P6..P12, S5..S10 at 1 and 2K5 at 0.5 from all {runs} seed choices ({strict})"),
        )
    } else {
        outcome(false, format!("inexact: {}", failures.join(", ")))
    }
}

/// Replays a percolation trace against its instance list.
fn audit(
    graph: &Graph,
    instances: &[MotifInstance],
    seed: usize,
    strict: bool,
) -> Result<(), String> {
    let options = PercolationOptions {
        strict_pseudocode: strict,
    };
    let run = percolate_traced(graph, instances, seed, options).map_err(|e| e.to_string())?;
    let k = instances[seed].k();
    if run.passes.len() > instances.len() {
        return Err(format!(
            "{} passes for {} instances",
            run.passes.len(),
            instances.len()
        ));
    }
    let mut vertices: BTreeSet<usize> = instances[seed].vertices.iter().copied().collect();
    let mut edges: BTreeSet<(usize, usize)> = instances[seed].edges(graph).into_iter().collect();
    let (mut last_v, mut last_e) = (vertices.len(), edges.len());
    for (p, pass) in run.passes.iter().enumerate() {
        let admitted: BTreeMap<usize, usize> = pass.admitted.iter().copied().collect();
        for (i, m) in instances.iter().enumerate() {
            let k_cov = m.vertices.iter().filter(|v| vertices.contains(v)).count();
            let eligible = k_cov + 1 == k || (!strict && k_cov == k);
            match admitted.get(&i) {
                Some(&recorded) if recorded != k_cov || !eligible => {
                    return Err(format!(
                        "pass {p}: instance {i} admitted with {recorded} covered, actual {k_cov}"
                    ))
                }
                None if eligible => {
                    return Err(format!("pass {p}: eligible instance {i} not admitted"))
                }
                _ => {}
            }
        }
        let before = edges.len();
        for &i in admitted.keys() {
            vertices.extend(instances[i].vertices.iter().copied());
            edges.extend(instances[i].edges(graph));
        }
        if edges.len() - before != pass.new_edges
            || vertices.len() != pass.covered_vertices
            || edges.len() != pass.covered_edges
        {
            return Err(format!(
                "pass {p}: recorded counts disagree with the replay"
            ));
        }
        if pass.covered_vertices < last_v || pass.covered_edges < last_e {
            return Err(format!("pass {p}: covered set shrank"));
        }
        (last_v, last_e) = (pass.covered_vertices, pass.covered_edges);
        let final_pass = p + 1 == run.passes.len();
        if (pass.new_edges == 0) != final_pass {
            return Err(format!(
                "pass {p}: loop did not stop exactly at the first pass without new edges"
            ));
        }
    }
    if run.covered_edges.iter().copied().collect::<BTreeSet<_>>() != edges
        || run
            .covered_edges
            .iter()
            .any(|&(u, v)| !graph.has_edge(u, v))
    {
        return Err("final covered edges differ from the replay".into());
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut graphs = Vec::new();
    for (i, density) in [0.0, 0.02, 0.05, 0.1, 0.2].into_iter().enumerate() {
        let corpus = generate_synthetic(&SyntheticSpec {
            n_cascades: 10,
            nodes_per_cascade: 160,
            window_size: 40,
            steep_density: density,
            inhib_density: density * 2.0,
            seed: 40 + i as u64,
            ..SyntheticSpec::default()
        })
        .unwrap();
        let social = corpus.social_network();
        for c in corpus.cascades() {
            for w in segment(&c, 40).unwrap() {
                graphs.push(build_window_graph(&c, &w, &social).graph().clone());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut audited = 0;
    let mut max_passes = 0;
    for (g, graph) in graphs.iter().enumerate() {
        for (pattern, instances) in instances_by_pattern(graph, 5).unwrap() {
            let seed = rng.gen_range(0..instances.len());
            for strict in [false, true] {
                if let Err(e) = audit(graph, &instances, seed, strict) {
                    return outcome(
                        false,
                        format!("graph {g}, pattern {}: {e}", pattern.catalog_index()),
                    );
                }
                audited += 1;
            }
            let run =
                percolate_traced(graph, &instances, seed, PercolationOptions::default()).unwrap();
            max_passes = max_passes.max(run.passes.len());
        }
    }
    outcome(
        graphs.len() == 200,
        format!(
            "{} window graphs, {audited} traced runs audited, at most {max_passes} passes",
            graphs.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut largest = 0;
    for s in 0..100 {
        let n = if s == 0 {
            2000
        } else {
            rng.gen_range(1..=2000)
        };
        largest = largest.max(n);
        let scale = 10f64.powf(rng.gen_range(-1.0..3.0));
        let mut t = 0.0;
        let events: Vec<f64> = (0..n)
            .map(|_| {
                t += if rng.gen_bool(0.1) {
                    0.0
                } else {
                    -scale * (1.0 - rng.gen::<f64>()).ln()
                };
                t
            })
            .collect();
        let theta = scale * 10f64.powf(rng.gen_range(-1.0..2.0));
        let horizon = t + theta;
        let grid: Vec<f64> = (0..512).map(|i| horizon * i as f64 / 511.0).collect();
        let fast = evaluate_intensity(&events, theta, &grid);
        for (&at, &v) in grid.iter().zip(&fast) {
            let direct: f64 = events
                .iter()
                .filter(|&&e| e < at)
                .map(|&e| (-(at - e) / theta).exp() / theta)
                .sum();
            let err = if direct == 0.0 {
                v.abs()
            } else {
                ((v - direct) / direct).abs()
            };
            worst = worst.max(err);
        }
    }
    let elapsed = started.elapsed();
    outcome(
        worst <= 1e-9 && within(elapsed, 30),
        format!(
            "100 sequences (up to {largest} events), worst relative error {worst:.2e}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Outcome {
    let grid = include_str!("data/t_tail_grid.csv");
    let mut worst = 0.0f64;
    let mut points = 0;
    for line in grid.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        worst = worst.max((student_t_two_sided(f[0], f[1]) - f[2]).abs());
        points += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut exact = true;
    for _ in 0..200 {
        let na = rng.gen_range(2..40);
        let nb = rng.gen_range(2..40);
        let shift = rng.gen_range(-1.0..1.0);
        let a: Vec<f64> = (0..na).map(|_| rng.gen::<f64>()).collect();
        let b: Vec<f64> = (0..nb).map(|_| rng.gen::<f64>() + shift).collect();
        let ab = welch_t_test(&a, &b, 0.01).unwrap();
        let ba = welch_t_test(&b, &a, 0.01).unwrap();
        let aa = welch_t_test(&a, &a, 0.01).unwrap();
        exact &= ab.t == -ba.t && ab.p == ba.p && ab.dof == ba.dof;
        exact &= aa.t == 0.0 && aa.p == 1.0 && !aa.significant;
    }
    outcome(
        points == 400 && worst <= 1e-6 && exact,
        format!(
            "{points} grid points, worst |p - oracle| = {worst:.2e}; swap and identical-sample identities {}",
            if exact { "exact" } else { "violated" }
        ),
    )
}

struct PipelineRun {
    report: CorpusReport<f64>,
    files: ReportFiles,
    elapsed: Duration,
}

fn pipeline_run(dir: &Path, spec: &SyntheticSpec, master_seed: u64) -> PipelineRun {
    let started = Instant::now();
    let corpus = generate_synthetic(spec).unwrap();
    let (cascades, social) = corpus.write(&dir.join("input")).unwrap();
    let config = PipelineConfig {
        seed: master_seed,
        cascades: Some(cascades),
        social: Some(social),
        ..PipelineConfig::default()
    };
    let report = run_pipeline::<f64>(&config).unwrap();
    let files = emit_report(&report, &dir.join("report")).unwrap();
    PipelineRun {
        report,
        files,
        elapsed: started.elapsed(),
    }
}

fn planted_spec(seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        steep_density: 0.01,
        inhib_density: 0.03,
        seed,
        ..SyntheticSpec::default()
    }
}

fn criterion_7(planted: &PipelineRun, tmp: &Path) -> Outcome {
    let flagged: Vec<String> = planted
        .report
        .significant()
        .filter(|t| t.pattern.has_triangle() && t.mean_inhib > t.mean_steep)
        .map(|t| format!("{}", t.pattern.catalog_index()))
        .collect();
    let mut clean = 0;
    let mut bonferroni_clean = 0;
    let mut dirty = Vec::new();
    for r in 0..20u64 {
        let spec = SyntheticSpec {
            steep_density: 0.02,
            inhib_density: 0.02,
            seed: r,
            ..SyntheticSpec::default()
        };
        let run = pipeline_run(&tmp.join(format!("null{r}")), &spec, r);
        let sig: Vec<String> = run
            .report
            .significant()
            .map(|t| format!("{}(p={:.4})", t.pattern.catalog_index(), t.test.unwrap().p))
            .collect();
        let bonferroni = run
            .report
            .tests
            .iter()
            .filter(|t| t.p_bonferroni.is_some_and(|p| p < 0.01))
            .count();
        bonferroni_clean += (bonferroni == 0) as usize;
        if sig.is_empty() {
            clean += 1;
        } else {
            dirty.push(format!("replication {r}: {}", sig.join(" ")));
        }
    }
    let counts = &planted.report.metadata.counts;
    let pass = !flagged.is_empty() && clean * 100 >= 95 * 20 && within(planted.elapsed, 300);
    let mut detail = format!(
        "planted: {} cascades retained, {} triad patterns significant with higher inhibition NC, {:.1} s; null: {clean}/20 replications clean ({bonferroni_clean}/20 with Bonferroni-adjusted p)",
        counts.cascades_retained,
        flagged.len(),
        planted.elapsed.as_secs_f64()
    );
    if !dirty.is_empty() {
        detail.push_str(&format!(" [{}]", dirty.join("; ")));
    }
    outcome(pass, detail)
}

fn criterion_8(first: &PipelineRun, tmp: &Path) -> Outcome {
    let second = pipeline_run(&tmp.join("repeat"), &planted_spec(0), 0);
    let mut differing = Vec::new();
    for (a, b) in first.files.csvs().iter().zip(second.files.csvs()) {
        if std::fs::read(a).unwrap() != std::fs::read(b).unwrap() {
            differing.push(a.file_name().unwrap().to_string_lossy().to_string());
        }
    }
    if std::fs::read(&first.files.phases).unwrap() != std::fs::read(&second.files.phases).unwrap() {
        differing.push("phases.json".into());
    }
    let bytes: u64 = first
        .files
        .csvs()
        .iter()
        .map(|p| std::fs::metadata(p).unwrap().len())
        .sum();
    if differing.is_empty() {
        outcome(
            true,
            format!("nc.csv, stats.csv, plot.csv and phases.json identical ({bytes} CSV bytes)"),
        )
    } else {
        outcome(false, format!("differing: {}", differing.join(", ")))
    }
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "enumeration oracle equivalence", criterion_1()),
        (2, "catalog cardinalities", criterion_2()),
        (3, "percolation exact cases", criterion_3()),
        (4, "percolation structural invariants", criterion_4()),
        (5, "intensity recursion vs direct sum", criterion_5()),
        (6, "Welch p-values vs numerical oracle", criterion_6()),
    ];
    let planted = pipeline_run(&tmp.path().join("planted"), &planted_spec(0), 0);
    results.push((
        7,
        "planted-difference end-to-end",
        criterion_7(&planted, tmp.path()),
    ));
    results.push((8, "determinism", criterion_8(&planted, tmp.path())));

    let mut failed = 0;
    for (n, name, o) in &results {
        println!(
            "{} criterion {n}: {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += !o.pass as usize;
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
