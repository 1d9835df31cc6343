//! One-pass semi-streaming (Δ−1)-colouring for graphs without a Δ-clique.
//!
//! The crate is split along the life of a run:
//!
//! * [`graph`] holds the in-memory graph, the edge-stream text format,
//!   colourings and the synthetic instance generators.
//! * [`field`] implements exact k-sparse recovery over a prime field
//!   (Vandermonde syndromes plus a random fingerprint).
//! * [`stream`] is the single pass: palettes, the sparsified graph, the
//!   per-level sketch banks and the anchor sample used for clustering.
//! * [`structure`] classifies the almost-cliques found after the pass.
//! * [`pipeline`] turns a [`stream::StreamSummary`] into a colouring.
//! * [`gadget`] builds the INDEX reduction instances and simulates the
//!   one-way protocol around a pluggable streaming colourer.
//! * [`oracle`] contains the brute-force checkers every test leans on.

pub mod codec;
pub mod field;
pub mod gadget;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod pipeline;
pub mod rng;
pub mod stream;
pub mod structure;

pub use field::{FieldParams, FingerprintSketch, VandermondeSketch};
pub use graph::{Graph, GraphError, PartialColoring};
pub use pipeline::{run_pipeline, PipelineOutcome, SereneColoring};
pub use stream::{RunConfig, StreamState, StreamSummary};
