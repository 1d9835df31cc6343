//! The single pass over the edge stream.
//!
//! [`StreamState`] is the only thing alive while edges arrive. It keeps the
//! palette lists (sampled up front), every edge whose endpoints share a list
//! colour, one sketch bank per recovery level, the anchor-incident edges used
//! by the clustering estimator and per-vertex degree counters. Each update is
//! commutative, so [`StreamState::finalize`] sees the same state under any
//! order of the stream body.

pub mod acd;
pub mod bank;
pub mod config;
pub mod palette;
pub mod recovery;
pub mod summary;

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::codec::{DecodeError, Reader, Writer};
use crate::field::FieldError;
use crate::graph::{Graph, GraphError};

pub use acd::{Decomposition, NOT_DENSE};
pub use bank::SketchBank;
pub use config::{AcdMode, ConfigError, Mode, RunConfig};
pub use palette::{sample_palettes, ListId, PaletteLists};
pub use recovery::{Recovered, SolitaryHelper};
pub use summary::StreamSummary;

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("degenerate list rates: {0}")]
    DegenerateRates(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("bad checkpoint: {0}")]
    Decode(#[from] DecodeError),
    #[error("oracle clustering needs the full graph")]
    OracleGraphRequired,
    #[error("no solitary helper certified for cliques {cliques:?}")]
    RecoveryIncomplete { cliques: Vec<usize> },
}

/// Live bytes per component. `peak_total` is the largest sum seen so far.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpaceReport {
    pub bytes_palettes: usize,
    pub bytes_sparsified: usize,
    pub bytes_sketches: usize,
    pub bytes_anchors: usize,
    pub bytes_index: usize,
    pub bytes_degrees: usize,
    /// Edges kept verbatim in the store-everything fallback.
    pub bytes_stored: usize,
    pub peak_total: usize,
}

impl SpaceReport {
    pub fn total(&self) -> usize {
        self.bytes_palettes
            + self.bytes_sparsified
            + self.bytes_sketches
            + self.bytes_anchors
            + self.bytes_index
            + self.bytes_degrees
            + self.bytes_stored
    }
}

/// Anchor vertices and every stream edge touching one of them.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorSample {
    pub rate: f64,
    bits: Vec<u64>,
    pub edges: Vec<(u32, u32)>,
}

impl AnchorSample {
    pub fn sample(n: usize, rate: f64, seed: u64) -> Self {
        let mut bits = vec![0u64; n.div_ceil(64)];
        for v in 0..n {
            if crate::rng::coin(seed, "anchor", v as u64, rate) {
                bits[v / 64] |= 1 << (v % 64);
            }
        }
        AnchorSample { rate, bits, edges: Vec::new() }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn bytes(&self) -> usize {
        8 * (self.bits.len() + self.edges.len())
    }
}

#[derive(Clone, Debug)]
pub struct StreamState {
    cfg: RunConfig,
    n: usize,
    delta: usize,
    fallback: bool,
    palettes: PaletteLists,
    sparsified: Vec<(u32, u32)>,
    bank: Option<SketchBank>,
    anchors: AnchorSample,
    degrees: Vec<u32>,
    stored: Vec<(u32, u32)>,
    seen: Option<HashSet<(u32, u32)>>,
    edges_seen: u64,
    space: SpaceReport,
}

fn ordered(u: usize, v: usize) -> (u32, u32) {
    if u < v {
        (u as u32, v as u32)
    } else {
        (v as u32, u as u32)
    }
}

impl StreamState {
    /// Sets up everything sampled before the first edge. Below the fallback
    /// threshold nothing is sampled and every edge is stored.
    pub fn new(n: usize, delta: usize, cfg: RunConfig) -> Result<Self, StreamError> {
        let fallback = cfg.is_fallback(delta);
        let (palettes, bank, anchors) = if fallback {
            (PaletteLists::empty(n, cfg.q(delta)), None, AnchorSample::sample(n, 0.0, cfg.seed))
        } else {
            let palettes = sample_palettes(n, delta, &cfg)?;
            let bank = SketchBank::new(n, delta, &cfg)?;
            let rate = match cfg.acd_mode {
                AcdMode::Estimator => cfg.anchor_rate(n, delta),
                AcdMode::Oracle => 0.0,
            };
            (palettes, Some(bank), AnchorSample::sample(n, rate, cfg.seed))
        };
        let seen = cfg.check_duplicates.then(HashSet::new);
        let mut st = StreamState {
            n,
            delta,
            fallback,
            palettes,
            sparsified: Vec::new(),
            bank,
            anchors,
            degrees: vec![0; n],
            stored: Vec::new(),
            seen,
            edges_seen: 0,
            space: SpaceReport::default(),
            cfg,
        };
        st.refresh_space();
        Ok(st)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn is_fallback(&self) -> bool {
        self.fallback
    }

    pub fn palettes(&self) -> &PaletteLists {
        &self.palettes
    }

    pub fn bank(&self) -> Option<&SketchBank> {
        self.bank.as_ref()
    }

    pub fn sparsified(&self) -> &[(u32, u32)] {
        &self.sparsified
    }

    pub fn anchors(&self) -> &AnchorSample {
        &self.anchors
    }

    pub fn edges_seen(&self) -> u64 {
        self.edges_seen
    }

    fn refresh_space(&mut self) {
        let s = &mut self.space;
        s.bytes_palettes = self.palettes.bytes();
        s.bytes_sparsified = 8 * self.sparsified.len();
        s.bytes_sketches = self.bank.as_ref().map_or(0, SketchBank::bytes_sketches);
        s.bytes_index = self.bank.as_ref().map_or(0, SketchBank::bytes_index);
        s.bytes_anchors = self.anchors.bytes();
        s.bytes_degrees = 4 * self.degrees.len();
        s.bytes_stored = 8 * self.stored.len();
        s.peak_total = s.peak_total.max(s.total());
    }

    pub fn space_report(&self) -> SpaceReport {
        self.space.clone()
    }

    /// Feeds one edge. Endpoints must be distinct and in range.
    pub fn process_edge(&mut self, u: usize, v: usize) -> Result<(), StreamError> {
        debug_assert!(u != v && u < self.n && v < self.n);
        let key = ordered(u, v);
        if let Some(seen) = &mut self.seen {
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { u: key.0 as usize, v: key.1 as usize }.into());
            }
        }
        self.edges_seen += 1;
        for w in [u, v] {
            self.degrees[w] += 1;
            if self.degrees[w] as usize > self.delta {
                return Err(GraphError::DegreeExceeded { v: w, degree: self.degrees[w] as usize, delta: self.delta }.into());
            }
        }
        if self.fallback {
            self.stored.push(key);
            self.space.bytes_stored += 8;
        } else {
            if self.palettes.intersect(u, v) {
                self.sparsified.push(key);
                self.space.bytes_sparsified += 8;
            }
            let bank = self.bank.as_mut().expect("bank exists outside fallback");
            bank.add_neighbor(u, v);
            bank.add_neighbor(v, u);
            if self.anchors.contains(u) || self.anchors.contains(v) {
                self.anchors.edges.push(key);
                self.space.bytes_anchors += 8;
            }
        }
        let total = self.space.total();
        if total > self.space.peak_total {
            self.space.peak_total = total;
        }
        Ok(())
    }

    /// Ends the pass. `oracle` is the full graph, required only when the
    /// configuration asks for exact clustering.
    pub fn finalize(mut self, oracle: Option<&Graph>) -> Result<StreamSummary, StreamError> {
        self.sparsified.sort_unstable();
        self.anchors.edges.sort_unstable();
        self.stored.sort_unstable();
        self.refresh_space();
        summary::build(self, oracle)
    }

    /// A self-contained snapshot; [`StreamState::from_bytes`] resumes it.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(self.cfg.to_kv().as_bytes());
        w.u64(self.n as u64);
        w.u64(self.delta as u64);
        w.u8(self.fallback as u8);
        self.palettes.write(&mut w);
        write_pairs(&mut w, &self.sparsified);
        match &self.bank {
            Some(b) => {
                w.u8(1);
                b.write(&mut w);
            }
            None => w.u8(0),
        }
        w.f64(self.anchors.rate);
        w.u64s(&self.anchors.bits);
        write_pairs(&mut w, &self.anchors.edges);
        w.u32s(&self.degrees);
        write_pairs(&mut w, &self.stored);
        match &self.seen {
            Some(seen) => {
                w.u8(1);
                let mut all: Vec<(u32, u32)> = seen.iter().copied().collect();
                all.sort_unstable();
                write_pairs(&mut w, &all);
            }
            None => w.u8(0),
        }
        w.u64(self.edges_seen);
        w.u64(self.space.peak_total as u64);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, StreamError> {
        let mut r = Reader::new(bytes);
        let kv = String::from_utf8(r.bytes()?).map_err(|e| DecodeError(e.to_string()))?;
        let mut cfg = RunConfig::desk(0);
        cfg.apply_kv(&kv).map_err(|e| DecodeError(e.to_string()))?;
        let n = r.u64()? as usize;
        let delta = r.u64()? as usize;
        let fallback = r.u8()? == 1;
        let palettes = PaletteLists::read(&mut r)?;
        let sparsified = read_pairs(&mut r, n)?;
        let bank = match r.u8()? {
            1 => Some(SketchBank::read(&mut r)?),
            _ => None,
        };
        let rate = r.f64()?;
        let bits = r.u64s()?;
        if bits.len() != n.div_ceil(64) {
            return Err(DecodeError("anchor bitset size".into()).into());
        }
        let anchor_edges = read_pairs(&mut r, n)?;
        let degrees = r.u32s()?;
        if degrees.len() != n {
            return Err(DecodeError("degree counter size".into()).into());
        }
        let stored = read_pairs(&mut r, n)?;
        let seen = match r.u8()? {
            1 => Some(read_pairs(&mut r, n)?.into_iter().collect()),
            _ => None,
        };
        let edges_seen = r.u64()?;
        let peak = r.u64()? as usize;
        if !r.is_empty() {
            return Err(DecodeError("trailing bytes".into()).into());
        }
        let mut st = StreamState {
            cfg,
            n,
            delta,
            fallback,
            palettes,
            sparsified,
            bank,
            anchors: AnchorSample { rate, bits, edges: anchor_edges },
            degrees,
            stored,
            seen,
            edges_seen,
            space: SpaceReport { peak_total: peak, ..SpaceReport::default() },
        };
        st.refresh_space();
        Ok(st)
    }

    pub(crate) fn into_parts(self) -> StateParts {
        StateParts {
            cfg: self.cfg,
            n: self.n,
            delta: self.delta,
            fallback: self.fallback,
            palettes: self.palettes,
            sparsified: self.sparsified,
            bank: self.bank,
            anchors: self.anchors,
            degrees: self.degrees,
            stored: self.stored,
            space: self.space,
        }
    }
}

pub(crate) struct StateParts {
    pub cfg: RunConfig,
    pub n: usize,
    pub delta: usize,
    pub fallback: bool,
    pub palettes: PaletteLists,
    pub sparsified: Vec<(u32, u32)>,
    pub bank: Option<SketchBank>,
    pub anchors: AnchorSample,
    pub degrees: Vec<u32>,
    pub stored: Vec<(u32, u32)>,
    pub space: SpaceReport,
}

pub(crate) fn write_pairs(w: &mut Writer, pairs: &[(u32, u32)]) {
    let flat: Vec<u32> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    w.u32s(&flat);
}

pub(crate) fn read_pairs(r: &mut Reader, n: usize) -> Result<Vec<(u32, u32)>, DecodeError> {
    let flat = r.u32s()?;
    if flat.len() % 2 != 0 || flat.iter().any(|&x| x as usize >= n) {
        return Err(DecodeError("bad edge list".into()));
    }
    Ok(flat.chunks(2).map(|c| (c[0], c[1])).collect())
}

/// Runs a whole pass over an in-memory edge sequence.
pub fn run_stream<I>(n: usize, delta: usize, cfg: RunConfig, edges: I, oracle: Option<&Graph>) -> Result<StreamSummary, StreamError>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut st = StreamState::new(n, delta, cfg)?;
    for (u, v) in edges {
        st.process_edge(u, v)?;
    }
    st.finalize(oracle)
}
