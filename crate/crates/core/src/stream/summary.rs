//! What survives the pass, and its on-disk form.

use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use super::acd::{estimate_decomposition, exact_decomposition, Decomposition};
use super::bank::SketchBank;
use super::config::{AcdMode, RunConfig};
use super::palette::PaletteLists;
use super::recovery::{recover_dense_neighborhoods, Recovered};
use super::{SpaceReport, StreamError, StreamState};
use crate::codec::Writer;
use crate::graph::{write_edge_stream, Graph};
use crate::structure::{analyze, AlmostClique, KnownNeighborhoods};

#[derive(Clone, Debug)]
pub struct StreamSummary {
    pub config: RunConfig,
    pub n: usize,
    pub delta: usize,
    /// Δ was below the fallback threshold and every edge was stored.
    pub fallback: bool,
    pub edges_seen: u64,
    pub palettes: PaletteLists,
    /// Sorted edges with intersecting lists (empty in fallback).
    pub sparsified: Vec<(u32, u32)>,
    /// The whole graph, only in fallback.
    pub stored: Option<Graph>,
    pub decomposition: Decomposition,
    pub recovered: Vec<Option<Recovered>>,
    pub known: KnownNeighborhoods,
    pub cliques: Vec<AlmostClique>,
    /// Kept so later steps can query more neighbourhoods.
    pub bank: Option<SketchBank>,
    pub space: SpaceReport,
}

pub(super) fn build(state: StreamState, oracle: Option<&Graph>) -> Result<StreamSummary, StreamError> {
    let p = state.into_parts();
    if p.fallback {
        let g = Graph::from_edges(p.n, p.delta, p.stored.iter().map(|&(a, b)| (a as usize, b as usize)))?;
        let known = KnownNeighborhoods::from_graph(&g);
        return Ok(StreamSummary {
            config: p.cfg,
            n: p.n,
            delta: p.delta,
            fallback: true,
            edges_seen: p.stored.len() as u64,
            palettes: p.palettes,
            sparsified: Vec::new(),
            stored: Some(g),
            decomposition: Decomposition::all_sparse(p.n),
            recovered: vec![None; p.n],
            known,
            cliques: Vec::new(),
            bank: None,
            space: p.space,
        });
    }
    let decomposition = match p.cfg.acd_mode {
        AcdMode::Estimator => estimate_decomposition(p.n, p.delta, &p.cfg, &p.anchors, &p.degrees),
        AcdMode::Oracle => {
            let g = oracle.ok_or(StreamError::OracleGraphRequired)?;
            exact_decomposition(g, p.cfg.epsilon)
        }
    };
    let bank = p.bank.expect("bank exists outside fallback");
    let recovered = recover_dense_neighborhoods(&bank, &decomposition);
    let known = KnownNeighborhoods::from_recovered(&decomposition, &recovered);
    let cliques = analyze(p.delta, &p.cfg, &decomposition, &recovered, &known);
    let edges_seen = p.degrees.iter().map(|&d| d as u64).sum::<u64>() / 2;
    Ok(StreamSummary {
        config: p.cfg,
        n: p.n,
        delta: p.delta,
        fallback: false,
        edges_seen,
        palettes: p.palettes,
        sparsified: p.sparsified,
        stored: None,
        decomposition,
        recovered,
        known,
        cliques,
        bank: Some(bank),
        space: p.space,
    })
}

#[derive(Serialize)]
struct RecoveredEntry<'a> {
    v: usize,
    #[serde(flatten)]
    r: &'a Recovered,
}

impl StreamSummary {
    /// Non-small solitary cliques with no certified helper and too few
    /// anti-edges for the list-colouring route.
    pub fn incomplete(&self) -> Vec<usize> {
        self.cliques.iter().filter(|c| c.needs_helper()).map(|c| c.id).collect()
    }

    pub fn require_complete(&self) -> Result<(), StreamError> {
        let cliques = self.incomplete();
        if cliques.is_empty() {
            Ok(())
        } else {
            Err(StreamError::RecoveryIncomplete { cliques })
        }
    }

    pub fn sparse_vertices(&self) -> Vec<usize> {
        self.decomposition.sparse()
    }

    pub fn palettes_bin(&self) -> Vec<u8> {
        self.palettes.to_bytes()
    }

    pub fn edges_text(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match &self.stored {
            Some(g) => write_edge_stream(&mut out, self.n, self.delta, g.edges()),
            None => write_edge_stream(
                &mut out,
                self.n,
                self.delta,
                self.sparsified.iter().map(|&(a, b)| (a as usize, b as usize)),
            ),
        }
        .expect("writing to memory");
        out
    }

    pub fn decomposition_json(&self) -> String {
        let recovered: Vec<RecoveredEntry> =
            self.recovered.iter().enumerate().filter_map(|(v, r)| r.as_ref().map(|r| RecoveredEntry { v, r })).collect();
        let doc = json!({
            "sparse_count": self.decomposition.sparse().len(),
            "cliques": self.cliques,
            "recovered": recovered,
        });
        serde_json::to_string_pretty(&doc).expect("serialisable")
    }

    pub fn sketches_bin(&self) -> Vec<u8> {
        let mut w = Writer::new();
        match &self.bank {
            Some(b) => {
                w.u8(1);
                b.write(&mut w);
            }
            None => w.u8(0),
        }
        w.finish()
    }

    pub fn report_json(&self) -> String {
        let doc = json!({
            "n": self.n,
            "delta": self.delta,
            "seed": self.config.seed,
            "mode": self.config.mode,
            "fallback": self.fallback,
            "edges_seen": self.edges_seen,
            "sparsified_edges": self.sparsified.len(),
            "cliques": self.cliques.len(),
            "recovered": self.known.count(),
            "incomplete": self.incomplete(),
            "space": self.space,
        });
        serde_json::to_string_pretty(&doc).expect("serialisable")
    }

    /// The five summary files concatenated with length prefixes; equal bytes
    /// mean equal summaries.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(&self.palettes_bin());
        w.bytes(&self.edges_text());
        w.bytes(self.decomposition_json().as_bytes());
        w.bytes(&self.sketches_bin());
        w.bytes(self.report_json().as_bytes());
        w.finish()
    }

    pub fn write_dir(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("palettes.bin"), self.palettes_bin())?;
        std::fs::write(dir.join("sparsified.edges"), self.edges_text())?;
        std::fs::write(dir.join("decomposition.json"), self.decomposition_json())?;
        std::fs::write(dir.join("sketches.bin"), self.sketches_bin())?;
        std::fs::write(dir.join("report.json"), self.report_json())?;
        Ok(())
    }
}
