use crate::graph::Graph;
use crate::stream::{Decomposition, Recovered};

/// Vertices whose full neighbourhood is available after the pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnownNeighborhoods {
    lists: Vec<Option<Vec<u32>>>,
}

impl KnownNeighborhoods {
    /// `N(v) = (C − A(v) − v) ∪ E(v)` for every recovered `v`.
    pub fn from_recovered(dec: &Decomposition, recovered: &[Option<Recovered>]) -> Self {
        let lists = recovered
            .iter()
            .enumerate()
            .map(|(v, r)| {
                let r = r.as_ref()?;
                let c = &dec.cliques[dec.clique_of(v)?];
                let mut l: Vec<u32> =
                    c.iter().copied().filter(|&u| u as usize != v && r.anti.binary_search(&u).is_err()).collect();
                l.extend_from_slice(&r.ext);
                l.sort_unstable();
                Some(l)
            })
            .collect();
        KnownNeighborhoods { lists }
    }

    /// Every neighbourhood known; used by the exact fallback and by tests.
    pub fn from_graph(g: &Graph) -> Self {
        KnownNeighborhoods { lists: (0..g.n()).map(|v| Some(g.neighbors(v).to_vec())).collect() }
    }

    pub fn none(n: usize) -> Self {
        KnownNeighborhoods { lists: vec![None; n] }
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn get(&self, v: usize) -> Option<&[u32]> {
        self.lists[v].as_deref()
    }

    pub fn is_known(&self, v: usize) -> bool {
        self.lists[v].is_some()
    }

    pub fn count(&self) -> usize {
        self.lists.iter().filter(|l| l.is_some()).count()
    }
}
