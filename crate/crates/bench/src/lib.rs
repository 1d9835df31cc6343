//! Inputs shared by the engine benchmarks. Everything is derived from a seed
//! so that runs compare like with like.

use streamchroma_core::field::choose_prime;
use streamchroma_core::graph::{gen_planted_instance, PlantSpec};
use streamchroma_core::pipeline::Bipartite;
use streamchroma_core::rng;
use streamchroma_core::{FieldParams, Graph};

/// A ±1 vector with `k` distinct nonzero coordinates in `0..n`, over the
/// field chosen for `n` with exponent 3.
pub fn sparse_vector(n: usize, k: usize, seed: u64) -> (FieldParams, Vec<(usize, u64)>) {
    let f = choose_prime(n as u64, 3).expect("prime exists");
    let mut support = Vec::with_capacity(k);
    let mut idx = 0;
    while support.len() < k {
        let j = (rng::derive(seed, "bench-support", idx) % n as u64) as usize;
        if !support.iter().any(|&(s, _)| s == j) {
            let c = if rng::coin(seed, "bench-sign", idx, 0.5) { 1 } else { f.neg(1) };
            support.push((j, c));
        }
        idx += 1;
    }
    (f, support)
}

pub fn planted(delta: usize, seed: u64) -> Graph {
    gen_planted_instance(&PlantSpec::mixed(delta), seed).expect("mixed spec is valid").graph
}

/// Random bipartite graph with `k` vertices per side and about `deg` edges per
/// left vertex, plus the identity so a perfect matching exists.
pub fn bipartite(k: usize, deg: usize, seed: u64) -> Bipartite {
    let mut b = Bipartite::new(k, k);
    for l in 0..k {
        b.add_edge(l, l);
        for e in 0..deg as u64 {
            let r = rng::derive2(seed, "bench-edge", l as u64, e) % k as u64;
            b.add_edge(l, r as usize);
        }
    }
    b
}
