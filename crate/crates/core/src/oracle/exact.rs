//! Exact q-colouring by DSATUR-ordered backtracking.
//!
//! Each connected component is searched on its own so that a dead end in
//! one component never forces re-exploration of another. A (q+1)-clique
//! found up front settles infeasibility without any search.

use serde::Serialize;

use crate::graph::{has_clique_with_budget, Graph, PartialColoring};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum UnsatReason {
    /// The graph contains a clique on `q + 1` vertices.
    Clique,
    /// The search tree of the component was exhausted.
    Exhausted { component_root: usize },
}

/// Evidence that no q-colouring exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnsatCertificate {
    pub q: usize,
    pub reason: UnsatReason,
    /// Colour assignments tried before giving up.
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Colored(PartialColoring),
    Unsat(UnsatCertificate),
    BudgetExceeded { nodes: u64 },
}

impl ExactOutcome {
    pub fn coloring(&self) -> Option<&PartialColoring> {
        match self {
            ExactOutcome::Colored(c) => Some(c),
            _ => None,
        }
    }
}

struct Dsatur<'a> {
    g: &'a Graph,
    q: usize,
    colors: Vec<u32>,
    /// `seen[v * (q + 1) + c]` counts neighbours of `v` coloured `c`.
    seen: Vec<u16>,
    sat: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Dsatur<'_> {
    fn assign(&mut self, v: usize, c: u32) {
        self.colors[v] = c;
        let w = self.q + 1;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.seen[u as usize * w + c as usize];
            if *slot == 0 {
                self.sat[u as usize] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = 0;
        let w = self.q + 1;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.seen[u as usize * w + c as usize];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u as usize] -= 1;
            }
        }
    }

    fn pick(&self, comp: &[usize]) -> Option<usize> {
        let mut best: Option<(u32, usize, usize)> = None;
        for &v in comp {
            if self.colors[v] != 0 {
                continue;
            }
            let free_deg = self.g.neighbors(v).iter().filter(|&&u| self.colors[u as usize] == 0).count();
            let key = (self.sat[v], free_deg, usize::MAX - v);
            if best.is_none_or(|b| key > b) {
                best = Some(key);
            }
        }
        best.map(|(_, _, inv)| usize::MAX - inv)
    }

    /// Next colour `≥ from` that no neighbour uses, capped one above the
    /// largest colour in use inside the component (colour symmetry).
    fn next_color(&self, v: usize, from: u32, cap: u32) -> Option<u32> {
        let w = self.q + 1;
        (from..=cap.min(self.q as u32)).find(|&c| self.seen[v * w + c as usize] == 0)
    }

    /// `Ok(true)` coloured, `Ok(false)` exhausted, `Err` budget.
    fn component(&mut self, comp: &[usize]) -> Result<bool, ()> {
        // Stack of (vertex, next colour to try, colour cap when chosen).
        let mut stack: Vec<(usize, u32, u32)> = Vec::new();
        let mut used_max = 0u32;
        let mut max_stack: Vec<u32> = Vec::new();
        let Some(first) = self.pick(comp) else { return Ok(true) };
        stack.push((first, 1, used_max + 1));
        loop {
            let Some(&mut (v, ref mut from, cap)) = stack.last_mut() else { return Ok(false) };
            if self.colors[v] != 0 {
                self.unassign(v);
                used_max = max_stack.pop().expect("paired with assignment");
            }
            match self.next_color(v, *from, cap) {
                Some(c) => {
                    *from = c + 1;
                    self.nodes += 1;
                    if self.nodes > self.budget {
                        return Err(());
                    }
                    self.assign(v, c);
                    max_stack.push(used_max);
                    used_max = used_max.max(c);
                    match self.pick(comp) {
                        Some(u) => stack.push((u, 1, used_max + 1)),
                        None => return Ok(true),
                    }
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
}

fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for r in 0..n {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut comp = vec![r];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &u in g.neighbors(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    comp.push(u as usize);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Decides q-colourability exactly within `budget` colour assignments.
pub fn exact_color(g: &Graph, q: usize, budget: u64) -> ExactOutcome {
    let n = g.n();
    if n > 0 && q == 0 {
        return ExactOutcome::Unsat(UnsatCertificate { q, reason: UnsatReason::Clique, nodes: 0 });
    }
    if matches!(has_clique_with_budget(g, q + 1, budget), Ok(true)) {
        return ExactOutcome::Unsat(UnsatCertificate { q, reason: UnsatReason::Clique, nodes: 0 });
    }
    let mut s = Dsatur {
        g,
        q,
        colors: vec![0; n],
        seen: vec![0; n * (q + 1)],
        sat: vec![0; n],
        nodes: 0,
        budget,
    };
    for comp in components(g) {
        match s.component(&comp) {
            Ok(true) => {}
            Ok(false) => {
                return ExactOutcome::Unsat(UnsatCertificate {
                    q,
                    reason: UnsatReason::Exhausted { component_root: comp[0] },
                    nodes: s.nodes,
                })
            }
            Err(()) => return ExactOutcome::BudgetExceeded { nodes: s.nodes },
        }
    }
    ExactOutcome::Colored(PartialColoring::from_vec(q, s.colors.into_iter().map(Some).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_random_graph, verify_coloring};

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, 2, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn small_cases() {
        let k4 = Graph::complete(4);
        assert!(exact_color(&k4, 4, 1000).coloring().is_some());
        assert!(matches!(exact_color(&k4, 3, 1000), ExactOutcome::Unsat(_)));
        assert!(matches!(exact_color(&cycle(7), 2, 1000), ExactOutcome::Unsat(_)));
        assert!(exact_color(&cycle(8), 2, 1000).coloring().is_some());
        assert!(exact_color(&Graph::empty(0, 0), 0, 10).coloring().is_some());
    }

    #[test]
    fn petersen_needs_three() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::from_edges(10, 3, outer.chain(spokes).chain(inner)).unwrap();
        match exact_color(&g, 2, 10_000) {
            ExactOutcome::Unsat(c) => assert!(matches!(c.reason, UnsatReason::Exhausted { .. })),
            o => panic!("{o:?}"),
        }
        let c = exact_color(&g, 3, 10_000);
        assert!(verify_coloring(&g, c.coloring().unwrap(), 3).is_valid_total());
    }

    #[test]
    fn results_always_verify() {
        for seed in 0..20 {
            let g = gen_random_graph(60, 6, 0.1, seed);
            if let ExactOutcome::Colored(c) = exact_color(&g, 4, 1_000_000) {
                assert!(verify_coloring(&g, &c, 4).is_valid_total());
            }
        }
    }
}
