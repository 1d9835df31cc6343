//! `streamchroma`: run the one-pass colouring, verify colourings, generate
//! inputs and drive the memory, gadget and slack experiments.
//!
//! Exit codes: 0 for a verified result, 2 when a run finished without a
//! verified colouring (the report is written), 1 for usage and I/O errors.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ConfigArgs;

#[derive(Parser, Debug)]
#[command(name = "streamchroma", version, about = "One-pass (Δ−1)-colouring of edge streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the pass over an edge stream, colour, verify and write the outputs.
    Color {
        /// Edge stream: header `n delta`, then one `u v` per line.
        input: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Check a colouring file against a graph.
    Verify {
        graph: PathBuf,
        coloring: PathBuf,
        /// Colour budget; defaults to Δ−1.
        #[arg(long)]
        q: Option<usize>,
    },
    /// Write a generated graph as an edge stream.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run the pass only and write the stream summary.
    Stream {
        input: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Peak memory of the pass against n, with a log-log fit.
    BenchMem {
        #[arg(long, value_delimiter = ',', default_values_t = [4096usize, 8192, 16384, 32768, 65536])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 32)]
        delta: usize,
        #[arg(long, default_value_t = 8.0)]
        avg_degree: f64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Lower-bound gadget: build instances or run the one-way protocol.
    Gadget {
        #[command(subcommand)]
        action: GadgetAction,
    },
    /// Slack-generation frequencies over the standard graph families.
    Stats {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 20261016)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        p_sg: f64,
        #[arg(long, default_value_t = 3)]
        rho: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write the rows as a regression fixture.
        #[arg(long, value_name = "FILE")]
        freeze: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Planted almost-cliques of every kind on a sparse background.
    Planted {
        #[arg(long)]
        delta: usize,
        /// JSON block specification; defaults to the mixed instance.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
        /// Also write the planted block positions as JSON.
        #[arg(long, value_name = "FILE")]
        blocks: Option<PathBuf>,
    },
    /// Degree-capped G(n, p).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(clap::Args, Debug)]
pub struct GadgetParams {
    #[arg(long)]
    pub delta: usize,
    #[arg(long)]
    pub c: usize,
    /// Alice's string as hex, most significant bit first; needs `--m`.
    #[arg(long, conflicts_with = "x_bits")]
    pub x_hex: Option<String>,
    /// Alice's string as `0`/`1` characters.
    #[arg(long)]
    pub x_bits: Option<String>,
    /// Bob's index, 1-based.
    #[arg(long)]
    pub i: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum GadgetAction {
    /// Write one gadget as an edge stream and print its layout.
    Build {
        #[command(flatten)]
        params: GadgetParams,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the protocol for each algorithm and tabulate correctness against message size.
    Simulate {
        #[command(flatten)]
        params: GadgetParams,
        /// String lengths; multiples of Δ(Δ−c+1). Defaults to one, two and four blocks.
        #[arg(long, value_delimiter = ',')]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "storeall,dummy,streamchroma")]
        alg: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Color { input, out, cfg } => commands::color(&input, &out, &cfg),
        Command::Verify { graph, coloring, q } => commands::verify(&graph, &coloring, q),
        Command::Gen { kind } => match kind {
            GenKind::Planted { delta, spec, seed, out, blocks } => {
                commands::gen_planted(delta, spec.as_deref(), seed, &out, blocks.as_deref())
            }
            GenKind::Random { n, delta, p, seed, out } => commands::gen_random(n, delta, p, seed, &out),
        },
        Command::Stream { input, out, cfg } => commands::stream(&input, &out, &cfg),
        Command::BenchMem { sizes, delta, avg_degree, json, cfg } => {
            commands::bench_mem(&sizes, delta, avg_degree, json, &cfg)
        }
        Command::Gadget { action } => match action {
            GadgetAction::Build { params, m, out } => commands::gadget_build(&params, m, out.as_deref()),
            GadgetAction::Simulate { params, m, alg, trials, workers, cfg } => {
                commands::gadget_simulate(&params, &m, &alg, trials, workers, &cfg)
            }
        },
        Command::Stats { trials, seed, p_sg, rho, workers, freeze } => {
            commands::stats(trials, seed, p_sg, rho, workers, freeze.as_deref())
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
