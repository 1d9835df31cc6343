//! INDEX-reduction gadgets for the `(Δ−k)`-colouring space lower bound.
//!
//! A block `q` owns five vertex groups laid out contiguously:
//! `A_q`, `B_q`, `Ā_q`, `B̄_q` (Δ each) and `C_q` (`c − 3`). Bit `j` of
//! Alice's string picks one pair slot `e_r = {x, Δ+y}` of the pairing graph
//! `F` in block `q` and becomes the edge `a^x b^y` when set, `ā^x b̄^y`
//! otherwise. Bob ties the four endpoints of his slot into a `K_{2,2}` and
//! joins them to `C_p`, so that together with `C_p` they form a
//! `(c+1)`-clique missing exactly the edge Alice did not add.

mod protocol;

pub use protocol::{simulate_protocol, DummyAlg, SimOutcome, StoreAllAlg, StreamChromaAlg, StreamingColorer};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{verify_coloring, Graph, PartialColoring};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("parameter violation: {0}")]
    ParameterViolation(String),
    #[error("colouring is not a proper {c}-colouring")]
    ImproperColoring { c: usize },
    #[error("undecodable: A/B pair same-coloured = {ab}, Ā/B̄ pair same-coloured = {bar}")]
    Undecodable { ab: bool, bar: bool },
}

/// Alice's bits and Bob's index. `i` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexInstance {
    pub x: Vec<bool>,
    pub i: usize,
}

impl IndexInstance {
    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn bit(&self) -> bool {
        self.x[self.i - 1]
    }

    pub fn random(m: usize, seed: u64) -> Self {
        let mut r = rng::rng_for(seed, "index-instance", 0);
        IndexInstance { x: (0..m).map(|_| r.random_bool(0.5)).collect(), i: r.random_range(1..=m) }
    }

    /// Parses a bit string of `0`/`1` characters.
    pub fn from_bits(bits: &str, i: usize) -> Result<Self, GadgetError> {
        let x = bits
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(GadgetError::ParameterViolation(format!("bad bit {ch:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IndexInstance { x, i })
    }

    /// Bits from hex digits, most significant bit first, truncated to `m`.
    pub fn from_hex(hex: &str, m: usize, i: usize) -> Result<Self, GadgetError> {
        let mut x = Vec::with_capacity(hex.len() * 4);
        for ch in hex.chars() {
            let d = ch.to_digit(16).ok_or_else(|| GadgetError::ParameterViolation(format!("bad hex digit {ch:?}")))?;
            x.extend((0..4).rev().map(|b| d >> b & 1 == 1));
        }
        if x.len() < m {
            return Err(GadgetError::ParameterViolation(format!("{} bits given, {m} needed", x.len())));
        }
        x.truncate(m);
        Ok(IndexInstance { x, i })
    }
}

/// Vertex numbering and the pairing graph shared by Alice and Bob.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetLayout {
    pub delta: usize,
    pub c: usize,
    pub m: usize,
    /// Pair slots per block, `Δ(Δ−c+1)`.
    pub t: usize,
    /// Number of blocks.
    pub g: usize,
    pub n: usize,
    /// `F` as `(x, y)` with `x, y ∈ 1..=Δ`; slot `e_r` is `f[r − 1]`.
    pub f: Vec<(usize, usize)>,
}

/// One of the five vertex groups of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    A,
    B,
    ABar,
    BBar,
    C,
}

impl GadgetLayout {
    pub fn new(delta: usize, c: usize, m: usize) -> Result<Self, GadgetError> {
        if !(2 * c > delta + 1 && c <= delta && c >= 3) {
            return Err(GadgetError::ParameterViolation(format!("need (Δ+1)/2 < c ≤ Δ, got Δ = {delta}, c = {c}")));
        }
        let t = delta * (delta - c + 1);
        if m == 0 || m % t != 0 {
            return Err(GadgetError::ParameterViolation(format!("m = {m} is not a positive multiple of t = {t}")));
        }
        let g = m / t;
        // Circulant pairing graph: left x meets right x, x+1, …, x+Δ−c (mod Δ).
        let f = (1..=delta)
            .flat_map(|x| (0..=delta - c).map(move |s| (x, (x - 1 + s) % delta + 1)))
            .collect();
        Ok(GadgetLayout { delta, c, m, t, g, n: g * (4 * delta + c - 3), f })
    }

    pub fn block_size(&self) -> usize {
        4 * self.delta + self.c - 3
    }

    /// Global id of member `k` (1-based) of `group` in block `q` (0-based).
    pub fn vertex(&self, q: usize, group: Group, k: usize) -> usize {
        let base = q * self.block_size();
        let d = self.delta;
        base + k - 1
            + match group {
                Group::A => 0,
                Group::B => d,
                Group::ABar => 2 * d,
                Group::BBar => 3 * d,
                Group::C => 4 * d,
            }
    }

    /// Block `q` and slot `r ∈ 1..=t` of bit `j ∈ 1..=m`, with `j = t·q + r`.
    pub fn locate(&self, j: usize) -> (usize, usize) {
        ((j - 1) / self.t, (j - 1) % self.t + 1)
    }

    /// Bob's four vertices `(a, b, ā, b̄)` for index `i`.
    pub fn designated(&self, i: usize) -> (usize, [usize; 4]) {
        let (p, l) = self.locate(i);
        let (x, y) = self.f[l - 1];
        (p, [self.vertex(p, Group::A, x), self.vertex(p, Group::B, y), self.vertex(p, Group::ABar, x), self.vertex(p, Group::BBar, y)])
    }

    pub fn c_group(&self, q: usize) -> Vec<usize> {
        (1..=self.c - 3).map(|k| self.vertex(q, Group::C, k)).collect()
    }

    pub fn alice_edges(&self, inst: &IndexInstance) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for q in 0..self.g {
            let cq = self.c_group(q);
            for (a, &u) in cq.iter().enumerate() {
                for &v in &cq[a + 1..] {
                    e.push((u, v));
                }
            }
        }
        for j in 1..=self.m {
            let (q, r) = self.locate(j);
            let (x, y) = self.f[r - 1];
            if inst.x[j - 1] {
                e.push((self.vertex(q, Group::A, x), self.vertex(q, Group::B, y)));
            } else {
                e.push((self.vertex(q, Group::ABar, x), self.vertex(q, Group::BBar, y)));
            }
        }
        e
    }

    pub fn bob_edges(&self, i: usize) -> Vec<(usize, usize)> {
        let (p, [a, b, ab, bb]) = self.designated(i);
        let mut e = vec![(a, ab), (a, bb), (b, ab), (b, bb)];
        for w in self.c_group(p) {
            e.extend([(a, w), (b, w), (ab, w), (bb, w)]);
        }
        e
    }

    /// `C_p` plus Bob's four vertices, sorted.
    pub fn clique_minus_edge(&self, i: usize) -> Vec<usize> {
        let (p, four) = self.designated(i);
        let mut vs = self.c_group(p);
        vs.extend(four);
        vs.sort_unstable();
        vs
    }
}

/// Builds `G(x, i)`.
pub fn build_gadget(delta: usize, c: usize, inst: &IndexInstance) -> Result<(Graph, GadgetLayout), GadgetError> {
    let layout = GadgetLayout::new(delta, c, inst.m())?;
    if inst.i == 0 || inst.i > inst.m() {
        return Err(GadgetError::ParameterViolation(format!("index {} outside 1..={}", inst.i, inst.m())));
    }
    let mut edges = layout.alice_edges(inst);
    edges.extend(layout.bob_edges(inst.i));
    let g = Graph::from_edges(layout.n, delta, edges).map_err(|e| GadgetError::ParameterViolation(e.to_string()))?;
    Ok((g, layout))
}

/// Reads `x_i` off a proper `c`-colouring.
pub fn decode_bit(g: &Graph, layout: &GadgetLayout, coloring: &PartialColoring, i: usize) -> Result<bool, GadgetError> {
    let report = verify_coloring(g, coloring, layout.c);
    if !report.is_valid_total() {
        return Err(GadgetError::ImproperColoring { c: layout.c });
    }
    let (_, [a, b, ab, bb]) = layout.designated(i);
    let same = |u: usize, v: usize| coloring.get(u) == coloring.get(v);
    match (same(a, b), same(ab, bb)) {
        (false, true) => Ok(true),
        (true, false) => Ok(false),
        (ab, bar) => Err(GadgetError::Undecodable { ab, bar }),
    }
}

/// Counts proper `q`-colourings of `g` (colours `1..=q`, not up to symmetry)
/// and how many of them give `u` and `v` the same colour.
pub fn count_colorings_pairing(g: &Graph, q: u32, u: usize, v: usize) -> (u64, u64) {
    fn go(g: &Graph, q: u32, x: usize, col: &mut [u32], u: usize, v: usize, acc: &mut (u64, u64)) {
        if x == g.n() {
            acc.0 += 1;
            acc.1 += (col[u] == col[v]) as u64;
            return;
        }
        for c in 1..=q {
            if g.neighbors(x).iter().all(|&w| (w as usize) >= x || col[w as usize] != c) {
                col[x] = c;
                go(g, q, x + 1, col, u, v, acc);
            }
        }
        col[x] = 0;
    }
    let mut acc = (0, 0);
    go(g, q, 0, &mut vec![0; g.n()], u, v, &mut acc);
    acc
}
