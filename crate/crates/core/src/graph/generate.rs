//! Synthetic instances: bounded-degree random graphs and planted blocks
//! (the almost-clique configurations the colouring pipeline must handle)
//! wired into a sparse background.

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};
use crate::rng;

/// Walks the pairs `u < v` in lexicographic order, visiting each with
/// probability `p` by geometric skipping. Calls `f(u, v)` on visited pairs.
fn for_sampled_pairs(n: usize, p: f64, rng: &mut impl Rng, mut f: impl FnMut(usize, usize)) {
    if n < 2 || p <= 0.0 {
        return;
    }
    let geo = Geometric::new(p.min(1.0)).expect("probability in (0, 1]");
    let (mut u, mut v) = (0usize, 0usize);
    loop {
        let mut skip = geo.sample(rng) + 1;
        // Advance `skip` positions from (u, v); row u holds n - u - 1 pairs.
        loop {
            let left = (n - 1 - v) as u64;
            if skip <= left {
                v += skip as usize;
                break;
            }
            skip -= left;
            u += 1;
            if u + 1 >= n {
                return;
            }
            v = u;
        }
        f(u, v);
    }
}

/// Erdős–Rényi pairs in lexicographic order, keeping an edge only if both
/// endpoints still have degree below `max_deg`.
pub fn gen_random_graph(n: usize, max_deg: usize, edge_prob: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&edge_prob), "edge_prob must lie in [0, 1]");
    let mut r = rng::rng_for(seed, "gen-random", 0);
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for_sampled_pairs(n, edge_prob, &mut r, |u, v| {
        if deg[u] < max_deg && deg[v] < max_deg {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    });
    Graph::from_edges(n, max_deg, edges).expect("generator respects its own invariants")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum BlockSpec {
    /// A (Δ+1)-clique with two disjoint edges removed.
    AntiMatchingClique,
    /// A (Δ−2)-clique plus three pairwise non-adjacent vertices joined to all of it.
    IndependentTriple,
    /// A (Δ−1)-clique plus a vertex `s` adjacent to `friend_degree` of its
    /// members; `s` gets `friend_externals` background neighbours.
    FriendClique { friend_degree: usize, friend_externals: usize },
    /// A (Δ−1)-clique plus two friends, each adjacent to `friend_degree`
    /// members, sharing exactly one member and missing different ones.
    Popular { friend_degree: usize },
    /// A plain clique; members are topped up to degree Δ from the background.
    Clique { size: usize },
    /// A clique of `size` with `anti_edges` random edges removed.
    Holey { size: usize, anti_edges: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlantSpec {
    pub delta: usize,
    pub blocks: Vec<BlockSpec>,
    pub background: usize,
    pub background_p: f64,
    /// Degree cap for background vertices.
    pub background_degree: usize,
    /// Maximum number of neighbours a background vertex may have inside one block.
    pub attach_cap: usize,
}

impl PlantSpec {
    pub fn new(delta: usize) -> Self {
        PlantSpec {
            delta,
            blocks: Vec::new(),
            background: 0,
            background_p: 0.0,
            background_degree: delta / 2,
            attach_cap: 1,
        }
    }

    /// One block of every kind the pipeline distinguishes, on a background
    /// large enough to absorb all attachments.
    pub fn mixed(delta: usize) -> Self {
        assert!(delta >= 12, "mixed instances need room for every block kind");
        PlantSpec {
            delta,
            blocks: vec![
                BlockSpec::AntiMatchingClique,
                BlockSpec::IndependentTriple,
                BlockSpec::FriendClique { friend_degree: delta / 2, friend_externals: 0 },
                BlockSpec::FriendClique { friend_degree: delta - 3, friend_externals: 1 },
                BlockSpec::Popular { friend_degree: delta / 3 },
                BlockSpec::Clique { size: delta - 1 },
                BlockSpec::Clique { size: delta - 3 },
            ],
            background: 5 * delta,
            background_p: 3.0 / (5.0 * delta as f64),
            background_degree: delta / 2,
            attach_cap: 1,
        }
    }
}

/// Positions of one planted block inside the generated graph.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PlantedBlock {
    pub vertices: Vec<usize>,
    /// The planted maximum clique.
    pub core: Vec<usize>,
    pub anti_edges: Vec<(usize, usize)>,
    pub independent: Vec<usize>,
    pub friends: Vec<usize>,
    /// For popular blocks: the core vertex adjacent to both friends.
    pub shared: Option<usize>,
    /// Edges internal to the block, in global ids.
    pub internal_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub blocks: Vec<PlantedBlock>,
    pub background: std::ops::Range<usize>,
}

struct Template {
    size: usize,
    edges: Vec<(usize, usize)>,
    /// Background neighbours each vertex must receive.
    externals: Vec<usize>,
    block: PlantedBlock,
}

fn clique_edges(vs: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let vs: Vec<usize> = vs.collect();
    let mut out = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

fn fill_to(delta: usize, size: usize, edges: &[(usize, usize)], fixed: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0usize; size];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let mut ext: Vec<usize> = deg.iter().map(|&d| delta.saturating_sub(d)).collect();
    for &(v, k) in fixed {
        ext[v] = k;
    }
    ext
}

fn template(spec: &BlockSpec, delta: usize, rng: &mut impl Rng) -> Result<Template, GraphError> {
    let bad = |why: &str| Err(GraphError::InfeasibleSpec(format!("{spec:?} at delta {delta}: {why}")));
    let mut block = PlantedBlock::default();
    let (size, edges, fixed): (usize, Vec<(usize, usize)>, Vec<(usize, usize)>) = match *spec {
        BlockSpec::AntiMatchingClique => {
            if delta < 4 {
                return bad("needs delta >= 4");
            }
            let size = delta + 1;
            let missing = [(0, 1), (2, 3)];
            let edges = clique_edges(0..size).into_iter().filter(|e| !missing.contains(e)).collect();
            block.anti_edges = missing.to_vec();
            block.core = (0..size).filter(|&v| v != 1 && v != 3).collect();
            (size, edges, vec![])
        }
        BlockSpec::IndependentTriple => {
            if delta < 4 {
                return bad("needs delta >= 4");
            }
            let k = delta - 2;
            let size = k + 3;
            let mut edges = clique_edges(0..k);
            for u in k..size {
                edges.extend((0..k).map(|w| (w, u)));
            }
            block.independent = (k..size).collect();
            block.core = (0..k).chain([k]).collect();
            (size, edges, vec![])
        }
        BlockSpec::FriendClique { friend_degree, friend_externals } => {
            let k = delta - 1;
            if friend_degree == 0 || friend_degree >= k {
                return bad("friend degree must lie in [1, delta-2]");
            }
            let mut edges = clique_edges(0..k);
            edges.extend((0..friend_degree).map(|w| (w, k)));
            block.core = (0..k).collect();
            block.friends = vec![k];
            (k + 1, edges, vec![(k, friend_externals)])
        }
        BlockSpec::Popular { friend_degree } => {
            let k = delta - 1;
            let f = friend_degree;
            if f < 2 || 2 * f > k {
                return bad("popular friends need 2 <= degree and 2*degree <= delta-1");
            }
            let (x1, x2) = (k, k + 1);
            let mut edges = clique_edges(0..k);
            edges.extend((0..f).map(|w| (w, x1)));
            edges.extend((f - 1..2 * f - 1).map(|w| (w, x2)));
            block.core = (0..k).collect();
            block.friends = vec![x1, x2];
            block.shared = Some(f - 1);
            (k + 2, edges, vec![(x1, 2), (x2, 2)])
        }
        BlockSpec::Clique { size } => {
            if size == 0 || size > delta + 1 {
                return bad("clique size must lie in [1, delta+1]");
            }
            block.core = (0..size).collect();
            (size, clique_edges(0..size), vec![])
        }
        BlockSpec::Holey { size, anti_edges } => {
            if size > delta + 1 || anti_edges > size * (size - 1) / 2 {
                return bad("too many anti-edges or too large");
            }
            let mut all = clique_edges(0..size);
            let mut removed = Vec::with_capacity(anti_edges);
            for _ in 0..anti_edges {
                let i = rng.random_range(0..all.len());
                removed.push(all.swap_remove(i));
            }
            removed.sort_unstable();
            block.anti_edges = removed;
            (size, all, vec![])
        }
    };
    let externals = fill_to(delta, size, &edges, &fixed);
    Ok(Template { size, edges, externals, block })
}

pub fn gen_planted_instance(spec: &PlantSpec, seed: u64) -> Result<PlantedInstance, GraphError> {
    let delta = spec.delta;
    let mut r = rng::rng_for(seed, "gen-planted", 0);
    let templates =
        spec.blocks.iter().map(|b| template(b, delta, &mut r)).collect::<Result<Vec<_>, _>>()?;
    let block_vertices: usize = templates.iter().map(|t| t.size).sum();
    let n = block_vertices + spec.background;
    let bg = block_vertices..n;

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    let mut add = |adj: &mut Vec<Vec<u32>>, a: usize, b: usize| {
        adj[a].push(b as u32);
        adj[b].push(a as u32);
        edges.push((a.min(b), a.max(b)));
    };

    let mut blocks = Vec::with_capacity(templates.len());
    let mut base = 0;
    let mut per_block = vec![0usize; n];
    for t in templates {
        let mut block = t.block;
        let g = |v: usize| base + v;
        block.vertices = (base..base + t.size).collect();
        block.core = block.core.iter().map(|&v| g(v)).collect();
        block.anti_edges = block.anti_edges.iter().map(|&(a, b)| (g(a), g(b))).collect();
        block.independent = block.independent.iter().map(|&v| g(v)).collect();
        block.friends = block.friends.iter().map(|&v| g(v)).collect();
        block.shared = block.shared.map(g);
        block.internal_edges = t.edges.iter().map(|&(a, b)| (g(a), g(b))).collect();
        for &(a, b) in &t.edges {
            add(&mut adj, g(a), g(b));
        }
        for v in 0..t.size {
            if adj[g(v)].len() > delta {
                return Err(GraphError::InfeasibleSpec(format!("block vertex {} exceeds delta internally", g(v))));
            }
        }
        // Bounded random attachment, in vertex order, reject-with-retry.
        per_block.iter_mut().for_each(|c| *c = 0);
        for v in 0..t.size {
            for _ in 0..t.externals[v] {
                if adj[g(v)].len() >= delta {
                    break;
                }
                let mut placed = false;
                for _ in 0..1000 {
                    if bg.is_empty() {
                        break;
                    }
                    let b = r.random_range(bg.clone());
                    if adj[b].len() < spec.background_degree
                        && per_block[b] < spec.attach_cap
                        && !adj[b].contains(&(g(v) as u32))
                    {
                        per_block[b] += 1;
                        add(&mut adj, g(v), b);
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    return Err(GraphError::InfeasibleSpec(format!(
                        "no background vertex can host another neighbour of {}",
                        g(v)
                    )));
                }
            }
        }
        base += t.size;
        blocks.push(block);
    }

    let cap = spec.background_degree.min(delta);
    let mut bg_edges = Vec::new();
    for_sampled_pairs(spec.background, spec.background_p, &mut r, |u, v| bg_edges.push((u + base, v + base)));
    for (u, v) in bg_edges {
        if adj[u].len() < cap && adj[v].len() < cap {
            add(&mut adj, u, v);
        }
    }
    let graph = Graph::from_edges(n, delta, edges)?;
    Ok(PlantedInstance { graph, blocks, background: bg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn random_graph_edge_cases() {
        assert_eq!(gen_random_graph(10, 9, 0.0, 1).edge_count(), 0);
        let k10 = gen_random_graph(10, 9, 1.0, 1);
        assert_eq!(k10, Graph::complete(10));
        assert_eq!(gen_random_graph(1000, 20, 0.01, 7), gen_random_graph(1000, 20, 0.01, 7));
        assert_ne!(gen_random_graph(1000, 20, 0.01, 7), gen_random_graph(1000, 20, 0.01, 8));
    }

    #[test]
    fn geometric_skipping_visits_every_pair_at_rate_one() {
        let mut r = rng::rng_for(0, "t", 0);
        let mut seen = Vec::new();
        for_sampled_pairs(5, 1.0, &mut r, |u, v| seen.push((u, v)));
        assert_eq!(seen, clique_edges(0..5));
    }

    #[test]
    fn anti_matching_block() {
        let mut spec = PlantSpec::new(8);
        spec.blocks.push(BlockSpec::AntiMatchingClique);
        spec.background = 10;
        let inst = gen_planted_instance(&spec, 3).unwrap();
        let b = &inst.blocks[0];
        assert_eq!(b.vertices.len(), 9);
        assert_eq!(b.anti_edges, vec![(0, 1), (2, 3)]);
        assert!(!inst.graph.adjacent(0, 1) && !inst.graph.adjacent(2, 3) && inst.graph.adjacent(0, 2));
    }

    #[test]
    fn empty_spec_is_empty_graph() {
        let inst = gen_planted_instance(&PlantSpec::new(5), 0).unwrap();
        assert_eq!(inst.graph.n(), 0);
        let mut spec = PlantSpec::new(5);
        spec.background = 20;
        assert_eq!(gen_planted_instance(&spec, 0).unwrap().graph.edge_count(), 0);
    }

    #[test]
    fn friend_degree_is_exact() {
        let mut spec = PlantSpec::new(10);
        spec.blocks.push(BlockSpec::FriendClique { friend_degree: 5, friend_externals: 0 });
        spec.background = 40;
        let inst = gen_planted_instance(&spec, 9).unwrap();
        let b = &inst.blocks[0];
        let s = b.friends[0];
        let into = b.core.iter().filter(|&&k| inst.graph.adjacent(s, k)).count();
        assert_eq!(into, 5);
        assert_eq!(inst.graph.degree(s), 5);
        assert!(b.core.iter().all(|&k| inst.graph.degree(k) == 10));
    }

    #[test]
    fn attachment_without_background_is_infeasible() {
        let mut spec = PlantSpec::new(10);
        spec.blocks.push(BlockSpec::Clique { size: 5 });
        assert!(matches!(gen_planted_instance(&spec, 0), Err(GraphError::InfeasibleSpec(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn planted_blocks_are_induced_exactly(delta in 12usize..40, seed in any::<u64>()) {
            let inst = gen_planted_instance(&PlantSpec::mixed(delta), seed).unwrap();
            let g = &inst.graph;
            prop_assert!(g.max_degree() <= delta);
            for b in &inst.blocks {
                let mut want: Vec<(usize, usize)> = b.internal_edges.clone();
                want.sort_unstable();
                let mut got = Vec::new();
                for (i, &u) in b.vertices.iter().enumerate() {
                    for &v in &b.vertices[i + 1..] {
                        if g.adjacent(u, v) {
                            got.push((u.min(v), u.max(v)));
                        }
                    }
                }
                got.sort_unstable();
                prop_assert_eq!(got, want);
            }
        }
    }
}
