//! Almost-clique decomposition from common-neighbour counts.
//!
//! Counts of `|N[u] ∩ N[w]|` are estimated through a random anchor set `T`
//! (every edge touching `T` is stored during the pass) and rescaled by the
//! anchor rate. Vertices whose count clears `(1 − ε/4)Δ` are similar; a
//! vertex similar to more than half its degree is a candidate; components of
//! the similarity graph on candidates are then pruned and grown against the
//! almost-clique conditions until nothing changes. The oracle variant runs
//! the same routine with `T = V`.

use serde::Serialize;

use super::config::RunConfig;
use super::AnchorSample;
use crate::graph::Graph;

pub const NOT_DENSE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(skip)]
    clique_of: Vec<u32>,
    /// Sorted member lists, ordered by smallest member.
    pub cliques: Vec<Vec<u32>>,
}

impl Decomposition {
    pub fn all_sparse(n: usize) -> Self {
        Decomposition { clique_of: vec![NOT_DENSE; n], cliques: Vec::new() }
    }

    /// Normalises the given disjoint cliques (sorting members and cliques).
    pub fn from_cliques(n: usize, mut cliques: Vec<Vec<u32>>) -> Self {
        for c in &mut cliques {
            c.sort_unstable();
            c.dedup();
        }
        cliques.retain(|c| !c.is_empty());
        cliques.sort_unstable_by_key(|c| c[0]);
        let mut clique_of = vec![NOT_DENSE; n];
        for (i, c) in cliques.iter().enumerate() {
            for &v in c {
                assert_eq!(clique_of[v as usize], NOT_DENSE, "cliques must be disjoint");
                clique_of[v as usize] = i as u32;
            }
        }
        Decomposition { clique_of, cliques }
    }

    pub fn n(&self) -> usize {
        self.clique_of.len()
    }

    pub fn clique_of(&self, v: usize) -> Option<usize> {
        match self.clique_of[v] {
            NOT_DENSE => None,
            i => Some(i as usize),
        }
    }

    pub fn is_sparse(&self, v: usize) -> bool {
        self.clique_of[v] == NOT_DENSE
    }

    pub fn sparse(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.is_sparse(v)).collect()
    }
}

/// Sampled closed neighbourhoods: `nt[u] = N[u] ∩ T`, `full[t] = N[t]` for
/// anchors `t`, and the scaling rate `p = P(t ∈ T)`.
struct AnchorView {
    nt: Vec<Vec<u32>>,
    full: Vec<Vec<u32>>,
    p: f64,
}

impl AnchorView {
    fn from_sample(n: usize, a: &AnchorSample) -> Self {
        let mut nt = vec![Vec::new(); n];
        let mut full = vec![Vec::new(); n];
        for v in 0..n {
            if a.contains(v) {
                nt[v].push(v as u32);
                full[v].push(v as u32);
            }
        }
        for &(x, y) in &a.edges {
            if a.contains(x as usize) {
                nt[y as usize].push(x);
                full[x as usize].push(y);
            }
            if a.contains(y as usize) {
                nt[x as usize].push(y);
                full[y as usize].push(x);
            }
        }
        AnchorView { nt, full, p: a.rate }
    }

    fn exact(g: &Graph) -> Self {
        let closed: Vec<Vec<u32>> = (0..g.n())
            .map(|v| {
                let mut c = g.neighbors(v).to_vec();
                c.push(v as u32);
                c
            })
            .collect();
        AnchorView { nt: closed.clone(), full: closed, p: 1.0 }
    }
}

pub fn estimate_decomposition(n: usize, delta: usize, cfg: &RunConfig, anchors: &AnchorSample, degrees: &[u32]) -> Decomposition {
    if anchors.rate <= 0.0 {
        return Decomposition::all_sparse(n);
    }
    cluster(&AnchorView::from_sample(n, anchors), delta, cfg.epsilon, degrees)
}

/// The same routine on exact counts.
pub fn exact_decomposition(g: &Graph, epsilon: f64) -> Decomposition {
    let degrees: Vec<u32> = (0..g.n()).map(|v| g.degree(v) as u32).collect();
    cluster(&AnchorView::exact(g), g.delta(), epsilon, &degrees)
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

fn cluster(view: &AnchorView, delta: usize, eps: f64, degrees: &[u32]) -> Decomposition {
    let n = degrees.len();
    let d = delta as f64;
    let p = view.p;
    let similar_at = (1.0 - eps / 4.0) * d;

    // Similarity lists, one scan of the sampled two-hop neighbourhood per vertex.
    let mut cnt = vec![0u32; n];
    let mut touched = Vec::new();
    let mut similar: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut candidate = vec![false; n];
    for u in 0..n {
        for &t in &view.nt[u] {
            for &w in &view.full[t as usize] {
                if cnt[w as usize] == 0 {
                    touched.push(w);
                }
                cnt[w as usize] += 1;
            }
        }
        for &w in &touched {
            if w as usize != u && cnt[w as usize] as f64 / p >= similar_at {
                similar[u].push(w);
            }
            cnt[w as usize] = 0;
        }
        touched.clear();
        candidate[u] = similar[u].len() as f64 > degrees[u] as f64 / 2.0;
    }

    let mut parent: Vec<u32> = (0..n as u32).collect();
    for u in 0..n {
        if !candidate[u] {
            continue;
        }
        for &w in &similar[u] {
            if candidate[w as usize] {
                let (a, b) = (find(&mut parent, u as u32), find(&mut parent, w));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<u32>> = vec![Vec::new(); n];
    for u in 0..n {
        if candidate[u] {
            let r = find(&mut parent, u as u32);
            groups[r as usize].push(u as u32);
        }
    }
    let mut comps: Vec<Vec<u32>> = groups.into_iter().filter(|g| g.len() > 1).collect();
    comps.sort_unstable_by_key(|c| c[0]);

    let mut owner = vec![NOT_DENSE; n];
    let mut out = Vec::new();
    let lo = (1.0 - eps / 2.0) * d;
    let hi = (1.0 + eps / 2.0) * d;
    for comp in comps {
        let id = out.len() as u32;
        let mut members = comp;
        members.retain(|&v| owner[v as usize] == NOT_DENSE);
        for &v in &members {
            owner[v as usize] = id;
        }
        for _round in 0..10 {
            let mut changed = false;
            let size = members.len() as f64;
            // Prune members that sit too far from the rest.
            let far: Vec<bool> = members
                .iter()
                .map(|&v| {
                    let inside = view.nt[v as usize].iter().filter(|&&t| owner[t as usize] == id).count() as f64 / p;
                    let anti = size - inside;
                    let ext = degrees[v as usize] as f64 + 1.0 - inside;
                    anti > eps * d || ext > eps * d
                })
                .collect();
            let mut kept = Vec::with_capacity(members.len());
            for (&v, &drop) in members.iter().zip(&far) {
                if drop {
                    owner[v as usize] = NOT_DENSE;
                    changed = true;
                } else {
                    kept.push(v);
                }
            }
            members = kept;
            // Pull in outsiders with fewer than δΔ = εΔ/2 non-neighbours inside.
            let size = members.len() as f64;
            for &t in &members {
                for &w in &view.full[t as usize] {
                    if owner[w as usize] == NOT_DENSE {
                        if cnt[w as usize] == 0 {
                            touched.push(w);
                        }
                        cnt[w as usize] += 1;
                    }
                }
            }
            touched.sort_unstable();
            for &w in &touched {
                if size - cnt[w as usize] as f64 / p < eps / 2.0 * d {
                    owner[w as usize] = id;
                    members.push(w);
                    changed = true;
                }
                cnt[w as usize] = 0;
            }
            touched.clear();
            members.sort_unstable();
            if !changed {
                break;
            }
        }
        let size = members.len() as f64;
        if members.is_empty() || size < lo || size > hi {
            for &v in &members {
                owner[v as usize] = NOT_DENSE;
            }
            continue;
        }
        out.push(members);
    }
    Decomposition::from_cliques(n, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_random_graph;

    fn disjoint_cliques(count: usize, size: usize, delta: usize) -> Graph {
        let mut edges = Vec::new();
        for c in 0..count {
            let base = c * size;
            for a in 0..size {
                for b in a + 1..size {
                    edges.push((base + a, base + b));
                }
            }
        }
        Graph::from_edges(count * size, delta, edges).unwrap()
    }

    #[test]
    fn disjoint_full_cliques_are_found_exactly() {
        let g = disjoint_cliques(4, 33, 32);
        let d = exact_decomposition(&g, 0.75);
        assert_eq!(d.cliques.len(), 4);
        assert!(d.sparse().is_empty());
        for (i, c) in d.cliques.iter().enumerate() {
            assert_eq!(c, &((i * 33) as u32..((i + 1) * 33) as u32).collect::<Vec<u32>>());
        }
    }

    #[test]
    fn random_and_empty_graphs_are_all_sparse() {
        let g = gen_random_graph(200, 100, 0.5, 3);
        assert!(exact_decomposition(&g, 0.75).cliques.is_empty());
        let e = Graph::empty(50, 10);
        assert_eq!(exact_decomposition(&e, 0.75).sparse().len(), 50);
    }

    #[test]
    fn full_rate_anchors_match_oracle() {
        let g = disjoint_cliques(3, 20, 20);
        let mut a = AnchorSample::sample(g.n(), 1.0, 0);
        a.edges = g.edges().map(|(u, v)| (u as u32, v as u32)).collect();
        let deg: Vec<u32> = (0..g.n()).map(|v| g.degree(v) as u32).collect();
        let est = estimate_decomposition(g.n(), 20, &RunConfig::desk(0), &a, &deg);
        assert_eq!(est, exact_decomposition(&g, 0.75));
    }
}
