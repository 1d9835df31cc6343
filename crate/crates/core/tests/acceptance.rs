//! One test per acceptance criterion. Each prints a single `criterion N:`
//! line straight to the process stdout (bypassing the test harness capture)
//! and then asserts on the same verdict.

use std::io::Write;
use std::time::Instant;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use streamchroma_core::field::{choose_prime, decode_rows, decode_sparse, FieldParams, FingerprintSketch, SparseVec, VandermondeSketch};
use streamchroma_core::gadget::{build_gadget, count_colorings_pairing, decode_bit, IndexInstance};
use streamchroma_core::graph::{gen_planted_instance, gen_random_graph, has_clique_with_budget, verify_coloring, Graph, PlantSpec};
use streamchroma_core::harness::bench_memory;
use streamchroma_core::oracle::{brute_force_recover, check_serene, exact_color, stats::StatFixture, BruteForce, SlackFamily};
use streamchroma_core::pipeline::choosable::exhaustive_list_coloring;
use streamchroma_core::pipeline::{check_rt_invariants, choosable_color, reed_transform, run_pipeline, Bipartite, ChoosableError, PipelineOutcome};
use streamchroma_core::rng;
use streamchroma_core::stream::{run_stream, RunConfig};

fn report(n: u32, pass: bool, detail: impl AsRef<str>) {
    let line = format!("criterion {n:>2}: {} | {}\n", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn random_signed_sparse(f: &FieldParams, k: usize, r: &mut impl Rng) -> SparseVec {
    let mut support: Vec<usize> = rand::seq::index::sample(r, f.n(), k).into_vec();
    support.sort_unstable();
    support.into_iter().map(|j| (j, if r.random_bool(0.5) { 1 } else { f.neg(1) })).collect()
}

#[test]
fn criterion_01_sparse_recovery_exactness() {
    let start = Instant::now();
    let f = choose_prime(10_000, 3).unwrap();
    let mut r = rng::rng_for(1, "acceptance-1", 0);
    let mut exact = Vec::new();
    for k in [1, 2, 4, 8, 16, 32, 64] {
        let mut ok = 0;
        for _ in 0..1000 {
            let x = random_signed_sparse(&f, k, &mut r);
            let s = VandermondeSketch::encode(f, k, &x);
            if let Ok(y) = decode_sparse(&s) {
                if y == x && VandermondeSketch::encode(f, k, &y) == s {
                    ok += 1;
                }
            }
        }
        exact.push((k, ok));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = exact.iter().all(|&(_, ok)| ok == 1000) && secs < 60.0;
    report(1, pass, format!("p = {} >= n^3, exact per k {exact:?}, {secs:.2}s", f.p()));
    assert!(pass);
}

#[test]
fn criterion_02_oracle_equivalence() {
    let mut r = rng::rng_for(2, "acceptance-2", 0);
    let mut disagreements = 0;
    let mut decoded = 0;
    for _ in 0..1000 {
        let n = r.random_range(4..=30usize);
        let k = r.random_range(1..=3usize);
        let f = choose_prime(n as u64, 3).unwrap();
        // Up to k+2 entries so that the failure side is compared too.
        let w = r.random_range(0..=(k + 2).min(n));
        let mut support: Vec<usize> = rand::seq::index::sample(&mut r, n, w).into_vec();
        support.sort_unstable();
        let x: SparseVec = support.into_iter().map(|j| (j, r.random_range(1..f.p()))).collect();
        let rows = VandermondeSketch::encode(f, k, &x).rows().to_vec();
        let fast = decode_rows(&f, k, &rows);
        let slow = brute_force_recover(&rows, k, &f);
        let agree = match (&fast, &slow) {
            (Ok(a), BruteForce::Unique(b)) => a == b,
            (Err(_), BruteForce::NoSolution) => true,
            _ => false,
        };
        disagreements += !agree as usize;
        decoded += fast.is_ok() as usize;
        assert!(!matches!(slow, BruteForce::Ambiguous(_)), "2k rows never admit two k-sparse solutions");
    }
    let pass = disagreements == 0;
    report(2, pass, format!("1000 instances (n <= 30, k <= 3), {decoded} decodable, {disagreements} disagreements"));
    assert!(pass);
}

#[test]
fn criterion_03_fingerprint_soundness() {
    let n = 10_000usize;
    let f = choose_prime(n as u64, 3).unwrap();
    let mut r = rng::rng_for(3, "acceptance-3", 0);
    let mut false_accepts = 0;
    let trials = 100_000;
    for trial in 0..trials {
        let k = r.random_range(1..=8usize);
        let x = random_signed_sparse(&f, k, &mut r);
        let mut fp = FingerprintSketch::new(f, 3, rng::derive(3, "fp-seed", trial));
        for &(j, c) in &x {
            fp.add(j, c);
        }
        assert!(fp.verify(&x));
        let mut cand = x.clone();
        match trial % 3 {
            0 => {
                let i = r.random_range(0..cand.len());
                cand[i].1 = f.add(cand[i].1, r.random_range(1..f.p()));
            }
            1 => {
                let j = loop {
                    let j = r.random_range(0..n);
                    if cand.iter().all(|&(a, _)| a != j) {
                        break j;
                    }
                };
                cand.push((j, r.random_range(1..f.p())));
                cand.sort_unstable();
            }
            _ => {
                let i = r.random_range(0..cand.len());
                let j = loop {
                    let j = r.random_range(0..n);
                    if cand.iter().all(|&(a, _)| a != j) {
                        break j;
                    }
                };
                cand[i].0 = j;
                cand.sort_unstable();
            }
        }
        false_accepts += fp.verify(&cand) as usize;
    }
    let pass = false_accepts == 0;
    report(3, pass, format!("{trials} perturbed candidates, t = 3, p = {}, {false_accepts} false accepts", f.p()));
    assert!(pass);
}

/// A palette graph meeting the degree conditions of the matching lemma: most vertices see at least
/// `k` colours, a few see fewer with total deficit at most `k/4`.
fn palette_graph(k: usize, r: &mut impl Rng) -> (usize, Vec<Vec<u32>>) {
    let right = r.random_range(k..=2 * k);
    let mut budget = k / 4;
    let adj = (0..k)
        .map(|_| {
            let mut deg = r.random_range(k..=right);
            if budget > 0 && r.random_bool(0.05) {
                let cut = r.random_range(1..=budget.min(k / 3));
                deg = k - cut;
                budget -= cut;
            }
            let mut cols: Vec<u32> = rand::seq::index::sample(r, right, deg).into_iter().map(|c| c as u32).collect();
            cols.sort_unstable();
            cols
        })
        .collect();
    (right, adj)
}

fn meets_conditions(k: usize, right: usize, adj: &[Vec<u32>]) -> bool {
    let mut degs: Vec<usize> = adj.iter().map(Vec::len).collect();
    degs.sort_unstable();
    let c1 = adj.len() == k && (k..=2 * k).contains(&right);
    let c2 = degs.iter().all(|&d| 3 * d >= 2 * k);
    // The smallest prefix sums are the binding sets for (3).
    let mut sum = 0usize;
    let mut c3 = true;
    for (i, &d) in degs.iter().enumerate() {
        sum += d;
        let size = i + 1;
        if 2 * size >= k && 4 * sum + k < 4 * size * k {
            c3 = false;
        }
    }
    c1 && c2 && c3
}

#[test]
fn criterion_04_palette_graph_matching() {
    let k = 500usize;
    let delta_fail: f64 = 0.01;
    let rate = (20.0 / k as f64) * ((k as f64).ln() + (1.0 / delta_fail).ln());
    let mut r = rng::rng_for(4, "acceptance-4", 0);
    let mut matched = 0;
    for _ in 0..200 {
        let (right, adj) = palette_graph(k, &mut r);
        assert!(meets_conditions(k, right, &adj), "generator must satisfy the lemma's hypotheses");
        let mut b = Bipartite::new(k, right);
        for (v, cols) in adj.iter().enumerate() {
            for &c in cols {
                if r.random_bool(rate) {
                    b.add_edge(v, c as usize);
                }
            }
        }
        matched += b.left_perfect_matching().is_some() as usize;
    }
    let pass = matched >= 195;
    report(4, pass, format!("k = {k}, rate = {rate:.4}, L-perfect matchings in {matched}/200 (need >= 195)"));
    assert!(pass);
}

#[test]
fn criterion_05_lower_bound_gadget() {
    let mut r = rng::rng_for(5, "acceptance-5", 0);
    let mut cases = 0;
    let mut failures = Vec::new();
    for delta in 7..=12usize {
        for c in (delta + 1) / 2 + 1..=delta {
            if 2 * c <= delta + 1 {
                continue;
            }
            let t = delta * (delta - c + 1);
            for _ in 0..100 {
                let g_blocks = r.random_range(1..=2usize);
                let inst = IndexInstance::random(t * g_blocks, r.random());
                let (g, layout) = build_gadget(delta, c, &inst).unwrap();
                cases += 1;
                let ok_degree = g.max_degree() <= delta;
                let ok = match exact_color(&g, c, 20_000_000).coloring() {
                    Some(col) => ok_degree && decode_bit(&g, &layout, col, inst.i) == Ok(inst.bit()),
                    None => false,
                };
                if !ok {
                    failures.push((delta, c, inst.i));
                }
            }
        }
    }
    // Exhaustive check of the designated subgraph at Δ = 7, c = 6.
    let mut exhaustive = true;
    let mut counted = 0u64;
    for bit in [false, true] {
        let mut x = vec![false; 14];
        x[0] = bit;
        let inst = IndexInstance { x, i: 1 };
        let (g, layout) = build_gadget(7, 6, &inst).unwrap();
        let vs = layout.clique_minus_edge(1);
        let sub = g.induced(&vs);
        let (_, [a, b, ab, bb]) = layout.designated(1);
        let (u, v) = if bit { (ab, bb) } else { (a, b) };
        let pos = |w| vs.iter().position(|&z| z == w).unwrap();
        let (total, same) = count_colorings_pairing(&sub, 6, pos(u), pos(v));
        counted += total;
        exhaustive &= total > 0 && total == same;
    }
    let fig = IndexInstance::from_bits("10101011011000", 1).unwrap();
    let (fg, fl) = build_gadget(7, 6, &fig).unwrap();
    let figure = fl.block_size() == 31 && fg.n() == 31 && fl.t == 14;
    let pass = failures.is_empty() && exhaustive && figure;
    report(
        5,
        pass,
        format!(
            "{cases} gadgets over delta 7..12, {} failures; exhaustive (7,6): {counted} colourings all pair the missing edge = {exhaustive}; figure block size {}",
            failures.len(),
            fl.block_size()
        ),
    );
    assert!(pass, "{failures:?}");
}

fn pair_shape_instance(d: usize, r: &mut impl Rng) -> (Graph, Vec<Vec<u32>>) {
    let (s1, s2) = (d, d + 1);
    let mut k: Vec<usize> = (0..d).collect();
    k.shuffle(r);
    let (v, a1, a2) = (k[0], k[1], k[2]);
    // At d = 5 each s_i can reach only four members, so the s1–s2 edge
    // supplies the fifth incidence.
    let joined = d == 5 || r.random_bool(0.5);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            edges.push((a, b));
        }
    }
    for (s, a) in [(s1, a1), (s2, a2)] {
        let need = if joined { 4 } else { 5 };
        let mut pool: Vec<usize> = (0..d).filter(|&x| x != a && x != v).collect();
        pool.shuffle(r);
        let extra = r.random_range(need - 1..=pool.len());
        let mut nb = vec![v];
        nb.extend_from_slice(&pool[..extra]);
        edges.extend(nb.into_iter().map(|x| (x, s)));
    }
    if joined {
        edges.push((s1, s2));
    }
    let g = Graph::from_edges(d + 2, d + 1, edges).unwrap();
    let lists = random_lists(&g, r);
    (g, lists)
}

fn triple_shape_instance(d: usize, r: &mut impl Rng) -> (Graph, Vec<Vec<u32>>) {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            edges.push((a, b));
        }
        edges.extend([(a, d), (a, d + 1), (a, d + 2)]);
    }
    let g = Graph::from_edges(d + 3, d + 2, edges).unwrap();
    let lists = random_lists(&g, r);
    (g, lists)
}

/// Lists of size `deg − 1` from a palette small enough to force overlaps.
fn random_lists(g: &Graph, r: &mut impl Rng) -> Vec<Vec<u32>> {
    let max_deg = g.max_degree();
    let palette: Vec<u32> = (1..=r.random_range(max_deg..=2 * max_deg + 2) as u32).collect();
    (0..g.n())
        .map(|x| {
            let mut l: Vec<u32> = palette.choose_multiple(r, g.degree(x) - 1).copied().collect();
            l.sort_unstable();
            l
        })
        .collect()
}

#[test]
fn criterion_06_choosability() {
    let mut r = rng::rng_for(6, "acceptance-6", 0);
    let mut runs = 0;
    let mut failures = 0;
    let mut cross_feasible = 0;
    let mut fallbacks = 0;
    let mut cases = std::collections::BTreeMap::<&'static str, usize>::new();
    for d in [5usize, 6, 7] {
        let shapes: &[bool] = if d >= 6 { &[false, true] } else { &[false] };
        for &triple in shapes {
            for _ in 0..10_000 {
                let (g, lists) = if triple { triple_shape_instance(d, &mut r) } else { pair_shape_instance(d, &mut r) };
                runs += 1;
                match choosable_color(&g, &lists) {
                    Ok((out, stats)) => {
                        assert!(out.iter().enumerate().all(|(x, c)| lists[x].contains(c)));
                        assert!(g.edges().all(|(a, b)| out[a] != out[b]));
                        fallbacks += stats.search_fallback as usize;
                        *cases.entry(stats.case).or_default() += 1;
                    }
                    Err(ChoosableError::Failed { .. }) | Err(ChoosableError::ShapeMismatch(_)) => {
                        failures += 1;
                        cross_feasible += exhaustive_list_coloring(&g, &lists).is_some() as usize;
                    }
                }
            }
        }
    }
    let pass = failures == 0;
    report(
        6,
        pass,
        format!("{runs} list assignments over d in 5..=7, {failures} failures ({cross_feasible} feasible by search), {fallbacks} completions needed search, {} distinct cases", cases.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_07_reed_transform_invariants() {
    let mut built = 0;
    let mut aborted = 0;
    let mut transformed = 0;
    let mut bad = Vec::new();
    for delta in [32usize, 64] {
        for seed in 0..50u64 {
            let inst = gen_planted_instance(&PlantSpec::mixed(delta), 700 + seed).unwrap();
            let g = &inst.graph;
            let s = run_stream(g.n(), delta, RunConfig::desk(seed), g.edges(), None).unwrap();
            let Ok((removed, rec)) = reed_transform(&s) else {
                aborted += 1;
                continue;
            };
            built += 1;
            transformed += rec.entries.len();
            let rep = check_rt_invariants(g, &s, &removed, &rec);
            if !rep.holds() {
                bad.push((delta, seed, rep));
            }
        }
    }
    let pass = bad.is_empty() && built > 0;
    report(
        7,
        pass,
        format!("100 planted instances: H built for {built} ({transformed} cliques transformed), invariants violated on {}, {aborted} aborted with no candidate pair before H existed", bad.len()),
    );
    assert!(pass, "{bad:?}");
}

#[test]
fn criterion_08_end_to_end() {
    let mut success = 0;
    let mut unverified = 0;
    let mut incomplete = std::collections::BTreeMap::<String, usize>::new();
    let deltas = [24usize, 32, 48, 64];
    for trial in 0..200u64 {
        let delta = deltas[trial as usize % deltas.len()];
        let mut spec = PlantSpec::mixed(delta);
        spec.background = (5 + trial as usize % 20) * delta;
        let inst = gen_planted_instance(&spec, 8000 + trial).unwrap();
        let g = &inst.graph;
        assert!(g.n() <= 5000);
        let s = run_stream(g.n(), delta, RunConfig::desk(trial), g.edges(), None).unwrap();
        let out = run_pipeline(&s, g);
        match &out {
            PipelineOutcome::Colored(c) => {
                let rep = verify_coloring(g, c.coloring.coloring(), delta - 1);
                let serene = check_serene(&c.coloring, &s);
                if rep.is_valid_total() && rep.max_color as usize <= delta - 1 && serene.ok {
                    success += 1;
                } else {
                    unverified += 1;
                }
            }
            PipelineOutcome::Fallback { .. } => {
                match out.verified_coloring() {
                    Some(col) if verify_coloring(g, col, delta - 1).is_valid_total() => success += 1,
                    Some(_) => unverified += 1,
                    None => *incomplete.entry("fallback budget".into()).or_default() += 1,
                }
            }
            PipelineOutcome::Incomplete(r) => *incomplete.entry(format!("{:?}", r.step)).or_default() += 1,
        }
    }
    let pass = unverified == 0;
    report(8, pass, format!("200 planted instances: {success} verified, {unverified} unverified, completion {:.1}%, incomplete by step {incomplete:?}", success as f64 / 2.0));
    assert!(pass);
}

#[test]
fn criterion_09_space_scaling() {
    let sizes: Vec<usize> = (12..=16).map(|e| 1usize << e).collect();
    let rep = bench_memory(&sizes, 64, 16.0, &RunConfig::desk(9)).unwrap();
    let slope = rep.slope.unwrap();
    let identity = rep.points.iter().all(|p| p.bytes_sketches == p.sketch_identity && p.bytes_sketches > 0);
    let pass = (slope - 1.0).abs() <= 0.1 && identity;
    let peaks: Vec<usize> = rep.points.iter().map(|p| p.peak_total).collect();
    report(9, pass, format!("n = 2^12..2^16, delta 64, peaks {peaks:?}, slope {slope:.4}, sketch identity exact = {identity}"));
    assert!(pass);
}

#[test]
fn criterion_10_slack_statistics() {
    let text = include_str!("fixtures/slack_regression.json");
    let frozen: StatFixture = serde_json::from_str(text).unwrap();
    let rerun = StatFixture::calibrate(frozen.seed, frozen.trials, frozen.p_sg, frozen.rho);
    let reproduced = rerun.rows.iter().zip(&frozen.rows).all(|(a, b)| a.family == b.family && a.hits == b.hits)
        && rerun.rows.len() == frozen.rows.len();
    let fresh = StatFixture::calibrate(frozen.seed ^ 0x5eed_f00d, frozen.trials, frozen.p_sg, frozen.rho);
    let outside: Vec<String> = fresh
        .rows
        .iter()
        .zip(&frozen.rows)
        .filter(|(a, b)| a.hi < b.lo || b.hi < a.lo)
        .map(|(a, _)| format!("{}:{}", a.family.name(), a.family.param()))
        .collect();
    let mut monotone = true;
    for run in [&rerun, &fresh] {
        for w in run.rows.windows(2) {
            let same_family = std::mem::discriminant(&w[0].family) == std::mem::discriminant(&w[1].family)
                && w[0].family.delta() == w[1].family.delta();
            if same_family && w[0].family.param() < w[1].family.param() && w[0].hits > w[1].hits {
                monotone = false;
            }
        }
    }
    let edgeless = frozen.rows.iter().filter(|r| matches!(r.family, SlackFamily::Edgeless { .. })).all(|r| r.hits == r.trials);
    let pass = reproduced && outside.is_empty() && monotone && edgeless;
    report(
        10,
        pass,
        format!(
            "{} families x {} trials: fixed seed reproduced = {reproduced}, fresh seed outside 99% Wilson = {outside:?}, monotone = {monotone}",
            frozen.rows.len(),
            frozen.trials
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_11_stream_order_invariance() {
    let mut streams = 0;
    let mut identical = 0;
    let mut graphs: Vec<(Graph, usize)> = Vec::new();
    for seed in 0..4u64 {
        let delta = [32, 48][seed as usize % 2];
        graphs.push((gen_planted_instance(&PlantSpec::mixed(delta), 1100 + seed).unwrap().graph, delta));
    }
    graphs.push((gen_random_graph(2000, 40, 0.01, 11), 40));
    graphs.push((gen_random_graph(300, 12, 0.03, 12), 12));
    for (gi, (g, delta)) in graphs.iter().enumerate() {
        let cfg = RunConfig::desk(gi as u64);
        let base: Vec<(usize, usize)> = g.edges().collect();
        let reference = run_stream(g.n(), *delta, cfg.clone(), base.iter().copied(), None).unwrap().to_bytes();
        streams += 1;
        let mut all_same = true;
        for p in 0..3u64 {
            let mut perm = base.clone();
            perm.shuffle(&mut rng::rng_for(gi as u64, "permutation", p));
            for e in perm.iter_mut().filter(|_| p == 1) {
                *e = (e.1, e.0);
            }
            let bytes = run_stream(g.n(), *delta, cfg.clone(), perm, None).unwrap().to_bytes();
            all_same &= bytes == reference;
        }
        identical += all_same as usize;
    }
    let pass = identical == streams;
    report(11, pass, format!("{identical}/{streams} streams byte-identical under 3 permutations each"));
    assert!(pass);
}

#[test]
fn delta_clique_search_sees_planted_cliques() {
    // Sanity for the clique oracle used by criterion 7.
    assert!(has_clique_with_budget(&Graph::complete(6), 6, 1_000_000).unwrap());
    assert!(!has_clique_with_budget(&Graph::complete(6), 7, 1_000_000).unwrap());
}
