//! Simple undirected graphs with a declared maximum degree.

pub mod clique;
pub mod coloring;
pub mod generate;
pub mod io;

pub use clique::{has_clique_of_size, has_clique_with_budget};
pub use coloring::{verify_coloring, ColoringReport, PartialColoring};
pub use generate::{gen_planted_instance, gen_random_graph, BlockSpec, PlantSpec, PlantedBlock, PlantedInstance};
pub use io::{load_graph, read_edge_stream, write_edge_stream, EdgeStreamReader};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed header on line {line}: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("malformed edge on line {line}: {reason}")]
    MalformedEdge { line: usize, reason: String },
    #[error("self-loop at vertex {v} (line {line})")]
    SelfLoop { line: usize, v: usize },
    #[error("vertex {v} out of range for n = {n} (line {line})")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {v} has degree {degree} > declared delta {delta}")]
    DegreeExceeded { v: usize, degree: usize, delta: usize },
    #[error("search budget of {budget} node expansions exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("infeasible plant spec: {0}")]
    InfeasibleSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Sorted adjacency lists plus the degree bound from the stream header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    delta: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn empty(n: usize, delta: usize) -> Self {
        Graph { delta, adj: vec![Vec::new(); n] }
    }

    /// Builds a graph, rejecting self-loops, out-of-range endpoints,
    /// duplicates (sorted-merge after collection) and degree overflow.
    pub fn from_edges<I>(n: usize, delta: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { line: 0, v: u });
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { line: 0, v: w, n });
                }
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0] as usize;
                return Err(GraphError::DuplicateEdge { u: u.min(v), v: u.max(v) });
            }
            if list.len() > delta {
                return Err(GraphError::DegreeExceeded { v: u, degree: list.len(), delta });
            }
        }
        Ok(Graph { delta, adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter().map(|&v| v as usize).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// The subgraph induced by `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = std::collections::HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            index.insert(v as u32, i as u32);
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut l: Vec<u32> = self.adj[v].iter().filter_map(|w| index.get(w).copied()).collect();
                l.sort_unstable();
                l
            })
            .collect();
        Graph { delta: self.delta, adj }
    }

    /// Same edges with a different declared degree bound.
    pub fn with_delta(mut self, delta: usize) -> Result<Self, GraphError> {
        if let Some(v) = (0..self.n()).find(|&v| self.degree(v) > delta) {
            return Err(GraphError::DegreeExceeded { v, degree: self.degree(v), delta });
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn complete(n: usize) -> Graph {
        let adj = (0..n).map(|v| (0..n as u32).filter(|&w| w as usize != v).collect()).collect();
        Graph { delta: n.saturating_sub(1), adj }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(matches!(Graph::from_edges(3, 2, [(0, 0)]), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(Graph::from_edges(3, 2, [(0, 3)]), Err(GraphError::VertexOutOfRange { .. })));
        assert!(matches!(
            Graph::from_edges(3, 2, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1 })
        ));
        assert!(matches!(
            Graph::from_edges(4, 2, [(0, 1), (0, 2), (0, 3)]),
            Err(GraphError::DegreeExceeded { v: 0, .. })
        ));
        let g = Graph::from_edges(4, 3, [(2, 1), (0, 1)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(g.adjacent(2, 1) && !g.adjacent(0, 2));
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn induced_relabels() {
        let g = Graph::complete(5);
        let h = g.induced(&[4, 2, 0]);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.neighbors(0), &[1, 2]);
    }
}
