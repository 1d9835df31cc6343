//! The one-way protocol: Alice streams her edges, ships the algorithm's
//! state, Bob resumes it on his edges and decodes the colouring.

use serde::Serialize;

use super::{build_gadget, decode_bit, GadgetError, IndexInstance};
use crate::codec::{Reader, Writer};
use crate::graph::{Graph, PartialColoring};
use crate::oracle::exact_color;
use crate::pipeline::run_pipeline;
use crate::rng;
use crate::stream::{read_pairs, write_pairs, RunConfig, StreamState};

/// A one-pass colourer that can be checkpointed between two parties.
pub trait StreamingColorer: Sized {
    fn name(&self) -> &'static str;
    fn process_edge(&mut self, u: usize, v: usize) -> Result<(), String>;
    fn snapshot(&self) -> Vec<u8>;
    fn resume(bytes: &[u8]) -> Result<Self, String>;
    /// The final colouring, if the algorithm produced one it stands behind.
    /// `truth` is only used for the algorithm's own post-hoc verification.
    fn output_coloring(self, truth: &Graph) -> Option<PartialColoring>;
}

/// Keeps every edge and colours exactly at the end.
pub struct StoreAllAlg {
    n: usize,
    delta: usize,
    q: usize,
    edges: Vec<(u32, u32)>,
}

impl StoreAllAlg {
    pub fn new(n: usize, delta: usize, q: usize) -> Self {
        StoreAllAlg { n, delta, q, edges: Vec::new() }
    }
}

impl StreamingColorer for StoreAllAlg {
    fn name(&self) -> &'static str {
        "storeall"
    }

    fn process_edge(&mut self, u: usize, v: usize) -> Result<(), String> {
        self.edges.push((u.min(v) as u32, u.max(v) as u32));
        Ok(())
    }

    fn snapshot(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.u64(self.n as u64);
        w.u64(self.delta as u64);
        w.u64(self.q as u64);
        write_pairs(&mut w, &self.edges);
        w.finish()
    }

    fn resume(bytes: &[u8]) -> Result<Self, String> {
        let mut r = Reader::new(bytes);
        let n = r.u64().map_err(|e| e.to_string())? as usize;
        let delta = r.u64().map_err(|e| e.to_string())? as usize;
        let q = r.u64().map_err(|e| e.to_string())? as usize;
        let edges = read_pairs(&mut r, n).map_err(|e| e.to_string())?;
        Ok(StoreAllAlg { n, delta, q, edges })
    }

    fn output_coloring(self, _truth: &Graph) -> Option<PartialColoring> {
        let g = Graph::from_edges(self.n, self.delta, self.edges.iter().map(|&(u, v)| (u as usize, v as usize))).ok()?;
        exact_color(&g, self.q, 50_000_000).coloring().cloned()
    }
}

/// Ignores the stream and sends eight bytes.
pub struct DummyAlg {
    seed: u64,
}

impl DummyAlg {
    pub fn new(seed: u64) -> Self {
        DummyAlg { seed }
    }
}

impl StreamingColorer for DummyAlg {
    fn name(&self) -> &'static str {
        "dummy"
    }

    fn process_edge(&mut self, _u: usize, _v: usize) -> Result<(), String> {
        Ok(())
    }

    fn snapshot(&self) -> Vec<u8> {
        self.seed.to_le_bytes().to_vec()
    }

    fn resume(bytes: &[u8]) -> Result<Self, String> {
        let arr: [u8; 8] = bytes.try_into().map_err(|_| "dummy state is eight bytes".to_string())?;
        Ok(DummyAlg { seed: u64::from_le_bytes(arr) })
    }

    fn output_coloring(self, _truth: &Graph) -> Option<PartialColoring> {
        None
    }
}

/// The semi-streaming colourer of this crate.
pub struct StreamChromaAlg {
    state: StreamState,
}

impl StreamChromaAlg {
    pub fn new(n: usize, delta: usize, cfg: RunConfig) -> Result<Self, String> {
        Ok(StreamChromaAlg { state: StreamState::new(n, delta, cfg).map_err(|e| e.to_string())? })
    }
}

impl StreamingColorer for StreamChromaAlg {
    fn name(&self) -> &'static str {
        "streamchroma"
    }

    fn process_edge(&mut self, u: usize, v: usize) -> Result<(), String> {
        self.state.process_edge(u, v).map_err(|e| e.to_string())
    }

    fn snapshot(&self) -> Vec<u8> {
        self.state.to_bytes()
    }

    fn resume(bytes: &[u8]) -> Result<Self, String> {
        Ok(StreamChromaAlg { state: StreamState::from_bytes(bytes).map_err(|e| e.to_string())? })
    }

    fn output_coloring(self, truth: &Graph) -> Option<PartialColoring> {
        let summary = self.state.finalize(None).ok()?;
        run_pipeline(&summary, truth).verified_coloring().cloned()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimOutcome {
    pub alg: String,
    pub delta: usize,
    pub c: usize,
    pub m: usize,
    pub g: usize,
    pub n: usize,
    pub alice_edges: usize,
    pub bob_edges: usize,
    pub message_bytes: usize,
    /// The bit read off the colouring, when there was a decodable one.
    pub decoded: Option<bool>,
    /// Bob's answer: `decoded`, or a fair coin when decoding failed.
    pub answer: bool,
    pub correct: bool,
}

/// Runs the protocol once with `alice` as the freshly constructed algorithm.
pub fn simulate_protocol<A: StreamingColorer>(
    mut alice: A,
    inst: &IndexInstance,
    delta: usize,
    c: usize,
    seed: u64,
) -> Result<SimOutcome, GadgetError> {
    let (g, layout) = build_gadget(delta, c, inst)?;
    let alg = alice.name().to_string();
    let a_edges = layout.alice_edges(inst);
    let b_edges = layout.bob_edges(inst.i);
    let failed = |e: String| GadgetError::ParameterViolation(format!("{alg}: {e}"));
    for &(u, v) in &a_edges {
        alice.process_edge(u, v).map_err(failed)?;
    }
    let message = alice.snapshot();
    drop(alice);
    let mut bob = A::resume(&message).map_err(failed)?;
    for &(u, v) in &b_edges {
        bob.process_edge(u, v).map_err(failed)?;
    }
    let decoded = bob.output_coloring(&g).and_then(|col| decode_bit(&g, &layout, &col, inst.i).ok());
    let answer = decoded.unwrap_or_else(|| rng::coin(seed, "bob-guess", inst.i as u64, 0.5));
    Ok(SimOutcome {
        alg,
        delta,
        c,
        m: layout.m,
        g: layout.g,
        n: layout.n,
        alice_edges: a_edges.len(),
        bob_edges: b_edges.len(),
        message_bytes: message.len(),
        decoded,
        answer,
        correct: answer == inst.bit(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_all_always_decodes() {
        for seed in 0..10 {
            let inst = IndexInstance::random(2 * 8 * 3, seed);
            let n = super::super::GadgetLayout::new(8, 6, inst.m()).unwrap().n;
            let out = simulate_protocol(StoreAllAlg::new(n, 8, 6), &inst, 8, 6, seed).unwrap();
            assert_eq!(out.decoded, Some(inst.bit()));
            assert!(out.correct);
        }
    }

    #[test]
    fn dummy_message_has_constant_size() {
        let inst = IndexInstance::random(8 * 3, 1);
        let out = simulate_protocol(DummyAlg::new(5), &inst, 8, 6, 5).unwrap();
        assert_eq!(out.message_bytes, 8);
        assert_eq!(out.decoded, None);
    }
}
