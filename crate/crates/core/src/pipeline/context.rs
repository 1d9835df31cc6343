//! What the colouring steps are allowed to look at.
//!
//! After the pass the algorithm knows two kinds of adjacency: edges of the
//! sparsified graph (endpoints share a list colour) and the full
//! neighbourhoods of recovered vertices. [`Ctx`] merges both into one
//! symmetric adjacency, plus the virtual edges added by the Reed Transform
//! while they are switched on. Every colour choice goes through
//! [`Ctx::fits`], which is sound in exactly the two serene cases: a known
//! vertex is checked against its whole neighbourhood, and a list colour of
//! an unknown vertex is checked against the sparsified edges, which contain
//! every edge whose endpoints could both hold it.

use super::{Provenance, SereneColoring};
use crate::stream::{ListId, StreamSummary};

pub(crate) struct Ctx<'a> {
    pub s: &'a StreamSummary,
    pub q: u32,
    adj: Vec<Vec<u32>>,
    extra: Vec<Vec<u32>>,
    pub extra_on: bool,
    pub phi: SereneColoring,
    /// Scratch marks, one per colour, cleared after each use.
    mark: Vec<bool>,
}

impl<'a> Ctx<'a> {
    pub fn new(s: &'a StreamSummary) -> Self {
        let n = s.n;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(a, b) in &s.sparsified {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for v in 0..n {
            if let Some(l) = s.known.get(v) {
                for &u in l {
                    adj[v].push(u);
                    adj[u as usize].push(v as u32);
                }
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        let q = s.config.q(s.delta) as u32;
        Ctx {
            s,
            q,
            adj,
            extra: vec![Vec::new(); n],
            extra_on: false,
            phi: SereneColoring::new(n, q as usize),
            mark: vec![false; q as usize + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.s.n
    }

    pub fn add_virtual_edge(&mut self, x: u32, y: u32) {
        self.extra[x as usize].push(y);
        self.extra[y as usize].push(x);
    }

    pub fn known(&self, v: usize) -> Option<&'a [u32]> {
        self.s.known.get(v)
    }

    pub fn is_known(&self, v: usize) -> bool {
        self.s.known.is_known(v)
    }

    pub fn list(&self, which: ListId, v: usize) -> &'a [u32] {
        self.s.palettes.list(which, v)
    }

    /// Adjacency as far as the summary can tell; exact when either end is known.
    pub fn adjacent(&self, a: u32, b: u32) -> bool {
        if let Some(l) = self.known(a as usize) {
            return l.binary_search(&b).is_ok();
        }
        if let Some(l) = self.known(b as usize) {
            return l.binary_search(&a).is_ok();
        }
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    pub fn virtual_degree(&self, v: usize) -> usize {
        self.extra[v].len()
    }

    pub fn for_each_neighbor(&self, v: usize, mut f: impl FnMut(u32)) {
        for &u in &self.adj[v] {
            f(u);
        }
        if self.extra_on {
            for &u in &self.extra[v] {
                f(u);
            }
        }
    }

    /// No visible neighbour of `v` holds `c`.
    pub fn free_at(&self, v: usize, c: u32) -> bool {
        let mut ok = true;
        self.for_each_neighbor(v, |u| ok &= self.phi.get(u as usize) != Some(c));
        ok
    }

    /// Whether `v` may take `c` serenely, and under which provenance. A list
    /// colour is preferred as provenance even for a known vertex.
    pub fn fits(&self, v: usize, c: u32, list: Option<ListId>) -> Option<Provenance> {
        let prov = match list {
            Some(l) if self.s.palettes.contains(l, v, c) => Provenance::FromList(l),
            _ if self.is_known(v) => Provenance::NeighborhoodKnown,
            _ => return None,
        };
        self.free_at(v, c).then_some(prov)
    }

    /// Colours in `1..=q` held by no visible neighbour of `v`.
    pub fn free_colors(&mut self, v: usize) -> Vec<u32> {
        let mut mark = std::mem::take(&mut self.mark);
        self.for_each_neighbor(v, |u| {
            if let Some(c) = self.phi.get(u as usize) {
                mark[c as usize] = true;
            }
        });
        let out: Vec<u32> = (1..=self.q).filter(|&c| !mark[c as usize]).collect();
        mark.iter_mut().for_each(|m| *m = false);
        self.mark = mark;
        out
    }

    /// Greedy first fit: a known vertex takes its smallest free colour, any
    /// other vertex the first free colour of `list`.
    pub fn first_fit(&mut self, v: usize, list: ListId) -> Option<(u32, Provenance)> {
        if self.is_known(v) {
            let c = *self.free_colors(v).first()?;
            return Some((c, Provenance::NeighborhoodKnown));
        }
        let l = self.list(list, v);
        l.iter().copied().find(|&c| self.free_at(v, c)).map(|c| (c, Provenance::FromList(list)))
    }

    pub fn color(&mut self, v: usize, c: u32, prov: Provenance) {
        debug_assert!(self.free_at(v, c), "colour {c} clashes at {v}");
        self.phi.set(v, c, prov);
    }

    /// Uncoloured neighbours of `v` with `pred`, over the visible adjacency.
    pub fn uncolored_neighbors(&self, v: usize, pred: impl Fn(usize) -> bool) -> usize {
        let mut k = 0;
        self.for_each_neighbor(v, |u| {
            if self.phi.get(u as usize).is_none() && pred(u as usize) {
                k += 1;
            }
        });
        k
    }
}
