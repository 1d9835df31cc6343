//! Exact clique detection for desk-scale graphs.
//!
//! Vertices that cannot lie in an `s`-clique are peeled off first (an
//! `s`-clique needs degree `s-1`), then each remaining vertex is tried as the
//! earliest member in a degeneracy order. The candidate set of a root is its
//! later neighbours, at most the degeneracy, and is searched with bitsets
//! and a greedy-colouring bound.

use super::{Graph, GraphError};

pub fn has_clique_of_size(g: &Graph, s: usize) -> Result<bool, GraphError> {
    has_clique_with_budget(g, s, 50_000_000)
}

pub fn has_clique_with_budget(g: &Graph, s: usize, budget: u64) -> Result<bool, GraphError> {
    let n = g.n();
    if s == 0 {
        return Ok(true);
    }
    if s == 1 {
        return Ok(n > 0);
    }
    if s == 2 {
        return Ok(g.edge_count() > 0);
    }
    let order = core_pruned_order(g, s - 1);
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut search = Search { budget, spent: 0 };
    for (i, &root) in order.iter().enumerate() {
        let cand: Vec<usize> = g
            .neighbors(root)
            .iter()
            .map(|&w| w as usize)
            .filter(|&w| pos[w] != usize::MAX && pos[w] > i)
            .collect();
        if cand.len() + 1 < s {
            continue;
        }
        let local = LocalGraph::new(g, &cand);
        let all = local.full();
        if search.expand(&local, all, 1, s)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Removes vertices of degree `< min_deg` until none remain, then returns the
/// survivors in smallest-last (degeneracy) order.
fn core_pruned_order(g: &Graph, min_deg: usize) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] < min_deg).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in g.neighbors(v) {
            let w = w as usize;
            if alive[w] {
                deg[w] -= 1;
                if deg[w] + 1 == min_deg {
                    stack.push(w);
                }
            }
        }
    }
    // Bucket-based smallest-last ordering over the survivors.
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    for v in (0..n).filter(|&v| alive[v]) {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::new();
    let mut d = 0;
    let total = alive.iter().filter(|&&a| a).count();
    while order.len() < total {
        d = d.min(maxd);
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().unwrap();
        if removed[v] || deg[v] != d {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            let w = w as usize;
            if alive[w] && !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
                d = d.min(deg[w]);
            }
        }
    }
    order
}

struct LocalGraph {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl LocalGraph {
    fn new(g: &Graph, verts: &[usize]) -> Self {
        let k = verts.len();
        let words = k.div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; k];
        for i in 0..k {
            for j in i + 1..k {
                if g.adjacent(verts[i], verts[j]) {
                    rows[i][j / 64] |= 1 << (j % 64);
                    rows[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        LocalGraph { words, rows }
    }

    fn full(&self) -> Vec<u64> {
        let k = self.rows.len();
        let mut v = vec![0u64; self.words];
        for i in 0..k {
            v[i / 64] |= 1 << (i % 64);
        }
        v
    }
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn first(set: &[u64]) -> Option<usize> {
    set.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

struct Search {
    budget: u64,
    spent: u64,
}

impl Search {
    fn expand(&mut self, g: &LocalGraph, cand: Vec<u64>, size: usize, target: usize) -> Result<bool, GraphError> {
        if size >= target {
            return Ok(true);
        }
        self.spent += 1;
        if self.spent > self.budget {
            return Err(GraphError::BudgetExceeded { budget: self.budget });
        }
        if size + count(&cand) < target || size + greedy_colour_bound(g, &cand) < target {
            return Ok(false);
        }
        let mut p = cand;
        while let Some(v) = first(&p) {
            if size + count(&p) < target {
                return Ok(false);
            }
            let next: Vec<u64> = p.iter().zip(&g.rows[v]).map(|(a, b)| a & b).collect();
            if self.expand(g, next, size + 1, target)? {
                return Ok(true);
            }
            p[v / 64] &= !(1 << (v % 64));
        }
        Ok(false)
    }
}

/// Number of colour classes used by a greedy sequential colouring of the
/// candidate set; an upper bound on its clique number.
fn greedy_colour_bound(g: &LocalGraph, cand: &[u64]) -> usize {
    let mut uncoloured = cand.to_vec();
    let mut classes = 0;
    while count(&uncoloured) > 0 {
        classes += 1;
        let mut avail = uncoloured.clone();
        while let Some(v) = first(&avail) {
            uncoloured[v / 64] &= !(1 << (v % 64));
            avail[v / 64] &= !(1 << (v % 64));
            for (a, r) in avail.iter_mut().zip(&g.rows[v]) {
                *a &= !r;
            }
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, 2, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Exhaustive subset enumeration, used as the reference.
    fn brute(g: &Graph, s: usize) -> bool {
        let n = g.n();
        (0u32..1 << n).filter(|m| m.count_ones() as usize == s).any(|m| {
            let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.adjacent(a, b)))
        })
    }

    #[test]
    fn small_cases() {
        let k6 = Graph::complete(6);
        assert!(has_clique_of_size(&k6, 6).unwrap());
        assert!(!has_clique_of_size(&k6, 7).unwrap());
        assert!(!has_clique_of_size(&cycle(5), 3).unwrap());
        assert!(has_clique_of_size(&cycle(5), 2).unwrap());
    }

    #[test]
    fn k8_minus_perfect_matching() {
        let edges = (0..8).flat_map(|u| (u + 1..8).map(move |v| (u, v))).filter(|&(u, v)| !(u % 2 == 0 && v == u + 1));
        let g = Graph::from_edges(8, 7, edges).unwrap();
        assert_eq!(has_clique_of_size(&g, 5).unwrap(), brute(&g, 5));
        assert_eq!(has_clique_of_size(&g, 4).unwrap(), brute(&g, 4));
        assert!(!has_clique_of_size(&g, 5).unwrap());
        assert!(has_clique_of_size(&g, 4).unwrap());
    }

    #[test]
    fn agrees_with_enumeration_on_random_graphs() {
        for seed in 0..40 {
            let g = super::super::gen_random_graph(14, 13, 0.55, seed);
            for s in 2..=7 {
                assert_eq!(has_clique_of_size(&g, s).unwrap(), brute(&g, s), "seed {seed} s {s}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::complete(30);
        assert!(matches!(has_clique_with_budget(&g, 30, 3), Err(GraphError::BudgetExceeded { budget: 3 })));
        assert!(has_clique_with_budget(&g, 30, 1000).unwrap());
    }
}
