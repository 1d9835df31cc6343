//! Direct check of an almost-clique decomposition against the full graph.

use serde::Serialize;

use crate::graph::Graph;
use crate::stream::Decomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcdViolationKind {
    /// `|C|` outside `[(1−ε/2)Δ, (1+ε/2)Δ]`.
    Size,
    /// A member misses more than `εΔ` of its clique.
    AntiNeighbors,
    /// A member has more than `εΔ` neighbours outside its clique.
    ExternalNeighbors,
    /// An outsider misses fewer than `δΔ` members.
    OutsideNonNeighbors,
    /// A vertex left sparse is not `ηε²Δ`-sparse.
    Sparsity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcdViolation {
    pub kind: AcdViolationKind,
    pub clique: Option<usize>,
    pub vertex: Option<usize>,
    pub measured: f64,
    pub threshold: f64,
}

/// Number of edges inside `G[N(v)]`.
pub fn neighborhood_edges(g: &Graph, v: usize) -> usize {
    let nv = g.neighbors(v);
    let mut twice = 0;
    for &u in nv {
        // Both lists are sorted: merge-count the intersection.
        let nu = g.neighbors(u as usize);
        let (mut i, mut j) = (0, 0);
        while i < nv.len() && j < nu.len() {
            match nv[i].cmp(&nu[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    twice += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    twice / 2
}

/// Every way the decomposition fails to be valid for `(η, ε, δ)`, with `Δ`
/// taken from the graph. An empty list means the partition is valid.
pub fn check_acd(g: &Graph, dec: &Decomposition, eta: f64, eps: f64, delta_frac: f64) -> Vec<AcdViolation> {
    let d = g.delta() as f64;
    let mut out = Vec::new();
    let mut push = |kind, clique, vertex, measured: f64, threshold: f64| {
        out.push(AcdViolation { kind, clique, vertex, measured, threshold })
    };

    let mut inside = vec![0u32; g.n()];
    let mut touched: Vec<usize> = Vec::new();
    for (ci, members) in dec.cliques.iter().enumerate() {
        let size = members.len() as f64;
        let (lo, hi) = ((1.0 - eps / 2.0) * d, (1.0 + eps / 2.0) * d);
        if size < lo {
            push(AcdViolationKind::Size, Some(ci), None, size, lo);
        } else if size > hi {
            push(AcdViolationKind::Size, Some(ci), None, size, hi);
        }
        for &m in members {
            for &u in g.neighbors(m as usize) {
                if inside[u as usize] == 0 {
                    touched.push(u as usize);
                }
                inside[u as usize] += 1;
            }
        }
        for &m in members {
            let m = m as usize;
            let within = g.neighbors(m).iter().filter(|&&u| dec.clique_of(u as usize) == Some(ci)).count();
            let anti = (members.len() - 1 - within) as f64;
            if anti > eps * d {
                push(AcdViolationKind::AntiNeighbors, Some(ci), Some(m), anti, eps * d);
            }
            let ext = (g.degree(m) - within) as f64;
            if ext > eps * d {
                push(AcdViolationKind::ExternalNeighbors, Some(ci), Some(m), ext, eps * d);
            }
        }
        touched.sort_unstable();
        for &u in &touched {
            if dec.clique_of(u) != Some(ci) {
                let missing = size - inside[u] as f64;
                if missing < delta_frac * d {
                    push(AcdViolationKind::OutsideNonNeighbors, Some(ci), Some(u), missing, delta_frac * d);
                }
            }
            inside[u] = 0;
        }
        // Outsiders with no neighbour in C miss all of it.
        if size < delta_frac * d && touched.len() + members.len() < g.n() {
            push(AcdViolationKind::OutsideNonNeighbors, Some(ci), None, size, delta_frac * d);
        }
        touched.clear();
    }

    let zeta = eta * eps * eps * d;
    let budget = d * (d - 1.0) / 2.0 - zeta * d;
    for v in dec.sparse() {
        let e = neighborhood_edges(g, v) as f64;
        if e > budget {
            push(AcdViolationKind::Sparsity, None, Some(v), e, budget);
        }
    }
    out
}
