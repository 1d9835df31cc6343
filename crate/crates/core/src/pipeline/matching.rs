//! Palette graphs and maximum bipartite matching.

use std::collections::VecDeque;

use super::context::Ctx;
use crate::stream::ListId;

/// Left side `0..left`, right side `0..right`, adjacency from the left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bipartite {
    pub right: usize,
    pub adj: Vec<Vec<u32>>,
}

const NIL: u32 = u32::MAX;

impl Bipartite {
    pub fn new(left: usize, right: usize) -> Self {
        Bipartite { right, adj: vec![Vec::new(); left] }
    }

    pub fn left(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, l: usize, r: usize) {
        debug_assert!(r < self.right);
        self.adj[l].push(r as u32);
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Hopcroft–Karp: BFS layers from free left vertices, then vertex-disjoint
    /// shortest augmenting paths by DFS, until no augmenting path is left.
    /// Returns the partner of every left vertex.
    pub fn max_matching(&self) -> Vec<Option<u32>> {
        let nl = self.left();
        let mut ml = vec![NIL; nl];
        let mut mr = vec![NIL; self.right];
        let mut dist = vec![u32::MAX; nl];
        let mut queue = VecDeque::new();
        loop {
            queue.clear();
            for l in 0..nl {
                if ml[l] == NIL {
                    dist[l] = 0;
                    queue.push_back(l);
                } else {
                    dist[l] = u32::MAX;
                }
            }
            let mut found = false;
            while let Some(l) = queue.pop_front() {
                for &r in &self.adj[l] {
                    let m = mr[r as usize];
                    if m == NIL {
                        found = true;
                    } else if dist[m as usize] == u32::MAX {
                        dist[m as usize] = dist[l] + 1;
                        queue.push_back(m as usize);
                    }
                }
            }
            if !found {
                break;
            }
            let mut it = vec![0usize; nl];
            for l in 0..nl {
                if ml[l] == NIL {
                    self.augment(l, &mut ml, &mut mr, &mut dist, &mut it);
                }
            }
        }
        ml.into_iter().map(|r| (r != NIL).then_some(r)).collect()
    }

    /// Iterative DFS along the BFS layers from `root`.
    fn augment(&self, root: usize, ml: &mut [u32], mr: &mut [u32], dist: &mut [u32], it: &mut [usize]) -> bool {
        let mut path: Vec<usize> = vec![root];
        while let Some(&l) = path.last() {
            if it[l] == self.adj[l].len() {
                dist[l] = u32::MAX;
                path.pop();
                continue;
            }
            let r = self.adj[l][it[l]] as usize;
            it[l] += 1;
            let m = mr[r];
            if m == NIL {
                // Flip the path: each left vertex takes the right vertex it
                // advanced through last.
                let mut r = r as u32;
                for &pl in path.iter().rev() {
                    let prev = ml[pl];
                    ml[pl] = r;
                    mr[r as usize] = pl as u32;
                    r = prev;
                }
                return true;
            }
            if dist[m as usize] == dist[l] + 1 {
                path.push(m as usize);
            }
        }
        false
    }

    /// A matching saturating the left side, or `None`.
    pub fn left_perfect_matching(&self) -> Option<Vec<u32>> {
        self.max_matching().into_iter().collect()
    }
}

/// Uncoloured members of a clique against the colours none of its members use.
#[derive(Clone, Debug)]
pub struct PaletteGraph {
    pub vertices: Vec<u32>,
    pub colors: Vec<u32>,
    /// Availability under the current colouring.
    pub full: Bipartite,
    /// Availability restricted to colours of the given list.
    pub sampled: Bipartite,
}

pub(crate) fn build_palette_graph(ctx: &Ctx, members: &[u32], list: ListId) -> PaletteGraph {
    let mut used = vec![false; ctx.q as usize + 1];
    let mut vertices = Vec::new();
    for &v in members {
        match ctx.phi.get(v as usize) {
            Some(c) => used[c as usize] = true,
            None => vertices.push(v),
        }
    }
    let colors: Vec<u32> = (1..=ctx.q).filter(|&c| !used[c as usize]).collect();
    let mut full = Bipartite::new(vertices.len(), colors.len());
    let mut sampled = Bipartite::new(vertices.len(), colors.len());
    for (i, &v) in vertices.iter().enumerate() {
        for (j, &c) in colors.iter().enumerate() {
            if ctx.free_at(v as usize, c) {
                full.add_edge(i, j);
                if ctx.s.palettes.contains(list, v as usize, c) {
                    sampled.add_edge(i, j);
                }
            }
        }
    }
    PaletteGraph { vertices, colors, full, sampled }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn matched(m: &[Option<u32>]) -> usize {
        m.iter().flatten().count()
    }

    #[test]
    fn identity_and_hall_violation() {
        let mut b = Bipartite::new(4, 4);
        for i in 0..4 {
            b.add_edge(i, i);
        }
        assert_eq!(b.left_perfect_matching(), Some(vec![0, 1, 2, 3]));
        let mut star = Bipartite::new(3, 1);
        for i in 0..3 {
            star.add_edge(i, 0);
        }
        assert_eq!(star.left_perfect_matching(), None);
        assert_eq!(matched(&star.max_matching()), 1);
        assert_eq!(Bipartite::new(0, 5).left_perfect_matching(), Some(vec![]));
    }

    #[test]
    fn needs_augmenting_through_matched_vertices() {
        // Greedy would match 0-0 and strand 1; the path 1-0-0-1 fixes it.
        let mut b = Bipartite::new(2, 2);
        b.add_edge(0, 0);
        b.add_edge(0, 1);
        b.add_edge(1, 0);
        let m = b.left_perfect_matching().unwrap();
        assert_eq!(m, vec![1, 0]);
    }

    /// Maximum matching size by exhaustive augmenting (Kuhn), as a check.
    fn kuhn(b: &Bipartite) -> usize {
        fn go(b: &Bipartite, l: usize, seen: &mut [bool], mr: &mut [usize]) -> bool {
            for &r in &b.adj[l] {
                let r = r as usize;
                if !seen[r] {
                    seen[r] = true;
                    if mr[r] == usize::MAX || go(b, mr[r], seen, mr) {
                        mr[r] = l;
                        return true;
                    }
                }
            }
            false
        }
        let mut mr = vec![usize::MAX; b.right];
        (0..b.left()).filter(|&l| go(b, l, &mut vec![false; b.right], &mut mr)).count()
    }

    #[test]
    fn agrees_with_simple_augmenting_paths() {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let (nl, nr) = (r.random_range(0..12), r.random_range(1..12));
            let mut b = Bipartite::new(nl, nr);
            for l in 0..nl {
                for c in 0..nr {
                    if r.random_bool(0.25) {
                        b.add_edge(l, c);
                    }
                }
            }
            let m = b.max_matching();
            let mut seen = vec![false; nr];
            for (l, p) in m.iter().enumerate() {
                if let Some(p) = p {
                    assert!(b.adj[l].contains(p));
                    assert!(!std::mem::replace(&mut seen[*p as usize], true));
                }
            }
            assert_eq!(matched(&m), kuhn(&b));
        }
    }
}
