use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use streamchroma_core::gadget::{
    build_gadget, simulate_protocol, DummyAlg, GadgetLayout, IndexInstance, SimOutcome, StoreAllAlg, StreamChromaAlg,
};
use streamchroma_core::graph::{
    gen_planted_instance, gen_random_graph, load_graph, read_edge_stream, verify_coloring, write_edge_stream, PlantSpec,
};
use streamchroma_core::harness::bench_memory;
use streamchroma_core::oracle::stats::{slack_statistics, standard_families, stats_table, StatFixture};
use streamchroma_core::oracle::ExactOutcome;
use streamchroma_core::pipeline::PipelineOutcome;
use streamchroma_core::rng;
use streamchroma_core::stream::{AcdMode, StreamState};
use streamchroma_core::{run_pipeline, Graph, PartialColoring, RunConfig, StreamSummary};

use crate::config::{par_map, ConfigArgs};
use crate::GadgetParams;

type CmdResult = Result<u8, String>;

const VERIFIED: u8 = 0;
const UNVERIFIED: u8 = 2;

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), String> {
    fs::write(path, contents).map_err(io_err(path))
}

/// Streams `input` through one pass under the resolved configuration.
fn run_pass(input: &Path, args: &ConfigArgs) -> Result<(StreamSummary, RunConfig), String> {
    let open = || File::open(input).map(BufReader::new).map_err(io_err(input));
    let header = read_edge_stream(open()?, false).map_err(|e| e.to_string())?;
    let (n, delta) = (header.n(), header.delta());
    drop(header);
    let cfg = args.resolve(n)?;

    let edges = read_edge_stream(open()?, cfg.check_duplicates).map_err(|e| e.to_string())?;
    let mut state = StreamState::new(n, delta, cfg.clone()).map_err(|e| e.to_string())?;
    for edge in edges {
        let (u, v) = edge.map_err(|e| e.to_string())?;
        state.process_edge(u, v).map_err(|e| e.to_string())?;
    }
    // Oracle mode reads the graph a second time for exact clustering counts.
    let oracle = match cfg.acd_mode {
        AcdMode::Oracle => Some(load_graph(input).map_err(|e| e.to_string())?),
        AcdMode::Estimator => None,
    };
    let summary = state.finalize(oracle.as_ref()).map_err(|e| e.to_string())?;
    Ok((summary, cfg))
}

pub fn color(input: &Path, out: &Path, args: &ConfigArgs) -> CmdResult {
    let (summary, cfg) = run_pass(input, args)?;
    fs::create_dir_all(out).map_err(io_err(out))?;
    write(&out.join("config.txt"), cfg.to_kv())?;
    let space = serde_json::to_string_pretty(&summary.space).expect("serialisable");
    write(&out.join("space.json"), space + "\n")?;

    // Verification reads the stream again; the pass itself never held the graph.
    let g = load_graph(input).map_err(|e| e.to_string())?;
    let outcome = run_pipeline(&summary, &g);
    let coloring_path = out.join("coloring.txt");
    let mut result = format!("seed {}\nn {}\ndelta {}\nq {}\n", cfg.seed, summary.n, summary.delta, cfg.q(summary.delta));

    let verified: Option<&PartialColoring> = outcome.verified_coloring();
    match &outcome {
        PipelineOutcome::Colored(c) => {
            write(&out.join("attribution.txt"), c.attribution.to_text(&summary))?;
            let _ = writeln!(result, "status verified\ncolors_used {}", c.report.colors_used);
        }
        PipelineOutcome::Fallback { outcome: ExactOutcome::Colored(_), report: Some(r) } if r.is_valid_total() => {
            write(&out.join("attribution.txt"), "fallback exact\n")?;
            let _ = writeln!(
                result,
                "status verified\ncolors_used {}\nnote delta below the fallback threshold; exact search on the stored graph",
                r.colors_used
            );
        }
        PipelineOutcome::Fallback { outcome, report } => {
            let mut text = String::from("status incomplete\nstep Fallback\n");
            match outcome {
                ExactOutcome::Unsat(cert) => {
                    let _ = writeln!(text, "witness {}", serde_json::to_string(cert).expect("serialisable"));
                }
                ExactOutcome::BudgetExceeded { nodes } => {
                    let _ = writeln!(text, "witness search budget exhausted after {nodes} nodes");
                }
                ExactOutcome::Colored(_) => {
                    let _ = writeln!(text, "witness {}", serde_json::to_string(report).expect("serialisable"));
                }
            }
            write(&out.join("incomplete.txt"), &text)?;
            let _ = writeln!(result, "status incomplete\nstep Fallback");
        }
        PipelineOutcome::Incomplete(r) => {
            write(&out.join("incomplete.txt"), r.to_string())?;
            let _ = writeln!(result, "status incomplete\nstep {:?}", r.step);
        }
    }
    write(&out.join("result.txt"), &result)?;
    print!("{result}");
    match verified {
        Some(c) => {
            write(&coloring_path, c.to_text())?;
            Ok(VERIFIED)
        }
        None => {
            // A coloring file from an earlier run must not survive a failed one.
            if coloring_path.exists() {
                fs::remove_file(&coloring_path).map_err(io_err(&coloring_path))?;
            }
            Ok(UNVERIFIED)
        }
    }
}

pub fn verify(graph: &Path, coloring: &Path, q: Option<usize>) -> CmdResult {
    let g = load_graph(graph).map_err(|e| e.to_string())?;
    let q = q.unwrap_or(g.delta().saturating_sub(1));
    let text = fs::read_to_string(coloring).map_err(io_err(coloring))?;
    let c = PartialColoring::from_text(&text, g.n(), q).map_err(|e| format!("{}: {e}", coloring.display()))?;
    let report = verify_coloring(&g, &c, q);
    println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
    Ok(if report.is_valid_total() { VERIFIED } else { UNVERIFIED })
}

fn write_graph(g: &Graph, out: &Path) -> Result<(), String> {
    let file = File::create(out).map_err(io_err(out))?;
    let mut w = BufWriter::new(file);
    write_edge_stream(&mut w, g.n(), g.delta(), g.edges()).map_err(io_err(out))?;
    w.flush().map_err(io_err(out))
}

pub fn gen_planted(delta: usize, spec: Option<&Path>, seed: u64, out: &Path, blocks: Option<&Path>) -> CmdResult {
    let spec = match spec {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            serde_json::from_str::<PlantSpec>(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None if delta >= 12 => PlantSpec::mixed(delta),
        None => return Err(format!("mixed instances need delta >= 12, got {delta}")),
    };
    let inst = gen_planted_instance(&spec, seed).map_err(|e| e.to_string())?;
    write_graph(&inst.graph, out)?;
    if let Some(p) = blocks {
        write(p, serde_json::to_string_pretty(&inst.blocks).expect("serialisable") + "\n")?;
    }
    println!("seed {seed}\nn {}\ndelta {}\nedges {}", inst.graph.n(), inst.graph.delta(), inst.graph.edges().count());
    Ok(0)
}

pub fn gen_random(n: usize, delta: usize, p: f64, seed: u64, out: &Path) -> CmdResult {
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("p = {p} is not a probability"));
    }
    let g = gen_random_graph(n, delta, p, seed);
    write_graph(&g, out)?;
    println!("seed {seed}\nn {n}\ndelta {delta}\nedges {}", g.edges().count());
    Ok(0)
}

pub fn stream(input: &Path, out: &Path, args: &ConfigArgs) -> CmdResult {
    let (summary, cfg) = run_pass(input, args)?;
    summary.write_dir(out).map_err(io_err(out))?;
    write(&out.join("config.txt"), cfg.to_kv())?;
    println!("{}", summary.report_json());
    Ok(0)
}

pub fn bench_mem(sizes: &[usize], delta: usize, avg_degree: f64, json: bool, args: &ConfigArgs) -> CmdResult {
    let largest = sizes.iter().copied().max().ok_or("no sizes given")?;
    let cfg = args.resolve(largest)?;
    let report = bench_memory(sizes, delta, avg_degree, &cfg).map_err(|e| e.to_string())?;
    println!("seed {}", cfg.seed);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
    } else {
        print!("{}", report.to_text());
    }
    let exact = report.points.iter().all(|p| p.bytes_sketches == p.sketch_identity);
    println!("sketch identity {}", if exact { "exact" } else { "MISMATCH" });
    Ok(if exact { 0 } else { UNVERIFIED })
}

fn instance(params: &GadgetParams, m: Option<usize>) -> Result<Option<IndexInstance>, String> {
    let i = params.i;
    let inst = match (&params.x_hex, &params.x_bits) {
        (Some(hex), _) => {
            let m = m.ok_or("--x-hex needs --m")?;
            IndexInstance::from_hex(hex, m, i.ok_or("--x-hex needs --i")?)
        }
        (None, Some(bits)) => IndexInstance::from_bits(bits, i.ok_or("--x-bits needs --i")?),
        (None, None) => return Ok(None),
    }
    .map_err(|e| e.to_string())?;
    if inst.i == 0 || inst.i > inst.m() {
        return Err(format!("index {} outside 1..={}", inst.i, inst.m()));
    }
    Ok(Some(inst))
}

pub fn gadget_build(params: &GadgetParams, m: Option<usize>, out: Option<&Path>) -> CmdResult {
    let inst = match instance(params, m)? {
        Some(inst) => inst,
        None => return Err("gadget build needs --x-hex or --x-bits".into()),
    };
    let (g, layout) = build_gadget(params.delta, params.c, &inst).map_err(|e| e.to_string())?;
    if let Some(out) = out {
        write_graph(&g, out)?;
    }
    let (p, [a, b, abar, bbar]) = layout.designated(inst.i);
    println!("delta {}\nc {}\nm {}\nt {}\ng {}\nn {}", layout.delta, layout.c, layout.m, layout.t, layout.g, layout.n);
    println!("block_size {}\nedges {}\nmax_degree {}", layout.block_size(), g.edges().count(), g.max_degree());
    println!("alice_edges {}\nbob_edges {}", layout.alice_edges(&inst).len(), layout.bob_edges(inst.i).len());
    println!("designated block {p} a {a} b {b} abar {abar} bbar {bbar}\nbit {}", u8::from(inst.bit()));
    Ok(0)
}

fn run_alg(alg: &str, inst: &IndexInstance, delta: usize, c: usize, seed: u64, cfg: &RunConfig) -> Result<SimOutcome, String> {
    let n = GadgetLayout::new(delta, c, inst.m()).map_err(|e| e.to_string())?.n;
    let r = match alg {
        "storeall" => simulate_protocol(StoreAllAlg::new(n, delta, c), inst, delta, c, seed),
        "dummy" => simulate_protocol(DummyAlg::new(seed), inst, delta, c, seed),
        "streamchroma" => {
            let a = StreamChromaAlg::new(n, delta, RunConfig { seed, ..cfg.clone() })?;
            simulate_protocol(a, inst, delta, c, seed)
        }
        other => return Err(format!("unknown algorithm `{other}`")),
    };
    r.map_err(|e| e.to_string())
}

pub fn gadget_simulate(
    params: &GadgetParams,
    ms: &[usize],
    algs: &[String],
    trials: u64,
    workers: usize,
    args: &ConfigArgs,
) -> CmdResult {
    let (delta, c) = (params.delta, params.c);
    if c > delta {
        return Err(format!("need c <= delta, got c = {c}, delta = {delta}"));
    }
    if trials == 0 {
        return Err("--trials must be positive".into());
    }
    let t = delta * (delta - c + 1);
    let ms: Vec<usize> = if ms.is_empty() { vec![t, 2 * t, 4 * t] } else { ms.to_vec() };
    let largest = GadgetLayout::new(delta, c, *ms.iter().max().expect("non-empty")).map_err(|e| e.to_string())?.n;
    let cfg = args.resolve(largest)?;
    println!("seed {}", cfg.seed);

    if let Some(inst) = instance(params, ms.first().copied())? {
        for alg in algs {
            let o = run_alg(alg, &inst, delta, c, cfg.seed, &cfg)?;
            println!(
                "alg {} delta {} c {} m {} g {} n {} correct {} message_bytes {}",
                o.alg, o.delta, o.c, o.m, o.g, o.n, o.correct, o.message_bytes
            );
        }
        return Ok(0);
    }
    println!("{:<14} {:>6} {:>4} {:>6} {:>4} {:>6} {:>7} {:>8} {:>9} {:>14}", "alg", "delta", "c", "m", "g", "n", "trials", "correct", "rate", "message_bytes");
    let seeds: Vec<u64> = (0..trials).collect();
    for alg in algs {
        for &m in &ms {
            let outcomes = par_map(&seeds, workers, |&trial| {
                let inst = IndexInstance::random(m, rng::derive(cfg.seed, "gadget-instance", trial));
                run_alg(alg, &inst, delta, c, rng::derive(cfg.seed, "gadget-protocol", trial), &cfg)
            });
            let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
            let correct = outcomes.iter().filter(|o| o.correct).count();
            let bytes = outcomes.iter().map(|o| o.message_bytes).sum::<usize>() as f64 / trials.max(1) as f64;
            let first = &outcomes[0];
            println!(
                "{:<14} {:>6} {:>4} {:>6} {:>4} {:>6} {:>7} {:>8} {:>9.3} {:>14.1}",
                alg,
                delta,
                c,
                m,
                first.g,
                first.n,
                trials,
                correct,
                correct as f64 / trials as f64,
                bytes
            );
        }
    }
    Ok(0)
}

pub fn stats(trials: u64, seed: u64, p_sg: f64, rho: usize, workers: usize, freeze: Option<&Path>) -> CmdResult {
    println!("seed {seed}");
    let families = standard_families(rho);
    let rows = par_map(&families, workers, |f| slack_statistics(f.clone(), trials, seed, p_sg));
    print!("{}", stats_table(&rows));
    if let Some(path) = freeze {
        let fixture = StatFixture { seed, trials, p_sg, rho, rows };
        write(path, serde_json::to_string_pretty(&fixture).expect("serialisable") + "\n")?;
        println!("froze {}", path.display());
    }
    Ok(0)
}
