//! Colouring the graph from the stream summary.
//!
//! The steps run in a fixed order over one shared [`context::Ctx`]:
//!
//! 1. drop large, critical solitary and critical αρ²-popular cliques, then
//!    remove the hard friendly cliques and add one virtual edge for each
//!    ([`reed`]);
//! 2. activate a tenth of the vertices with their L2 colour ([`slack`]);
//! 3. colour the critical cliques of the remaining graph ([`critical`]);
//! 4. colour sparse vertices from L4, then small cliques by palette matching
//!    ([`sparse`]);
//! 5. put the removed cliques back ([`inverse`]);
//! 6. colour the cliques dropped in step 1 ([`post`]).
//!
//! Every colour is either drawn from a list or given to a vertex whose full
//! neighbourhood was recovered, and the final colouring is always checked
//! against the real graph before it is reported as a success.

pub mod choosable;
pub(crate) mod context;
mod critical;
mod inverse;
pub mod matching;
mod post;
pub mod reed;
pub mod slack;
mod sparse;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{verify_coloring, ColoringReport, Graph, PartialColoring};
use crate::oracle::{exact_color, ExactOutcome};
use crate::stream::{ListId, StreamSummary};
use context::Ctx;

pub use choosable::{choosable_color, ChoosableError, ChoosableStats};
pub use matching::{Bipartite, PaletteGraph};
pub use reed::{check_rt_invariants, step1_preprocess, ReedEntry, ReedTransformRecord, Removed, RemovalKind, RtReport};

/// Why a colour is safe without looking at the whole graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    FromList(ListId),
    NeighborhoodKnown,
}

/// A partial colouring that remembers where each colour came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SereneColoring {
    coloring: PartialColoring,
    provenance: Vec<Option<Provenance>>,
}

impl SereneColoring {
    pub fn new(n: usize, q: usize) -> Self {
        SereneColoring { coloring: PartialColoring::new(n, q), provenance: vec![None; n] }
    }

    pub fn get(&self, v: usize) -> Option<u32> {
        self.coloring.get(v)
    }

    pub fn provenance(&self, v: usize) -> Option<Provenance> {
        self.provenance[v]
    }

    pub fn set(&mut self, v: usize, c: u32, prov: Provenance) {
        self.coloring.set(v, c);
        self.provenance[v] = Some(prov);
    }

    pub fn clear(&mut self, v: usize) {
        self.coloring.clear(v);
        self.provenance[v] = None;
    }

    pub fn coloring(&self) -> &PartialColoring {
        &self.coloring
    }

    pub fn into_coloring(self) -> PartialColoring {
        self.coloring
    }

    pub fn len(&self) -> usize {
        self.provenance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.provenance.is_empty()
    }

    pub fn colored_count(&self) -> usize {
        self.coloring.colored_count()
    }
}

/// The step that coloured a clique, or the step that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Step {
    ReedTransform,
    SlackGeneration,
    CriticalStage1,
    CriticalStage2,
    Sparse,
    Small,
    SmallHoley,
    InverseReed,
    Popular,
    Solitary,
    SolitaryHoley,
    Completion,
    Verification,
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum PipelineError {
    #[error("no solitary helper for cliques {cliques:?}")]
    RecoveryIncomplete { cliques: Vec<usize> },
    #[error("clique {clique}: no pair u, v with distinct non-clique images after {attempts} samples")]
    NoCandidatePair { clique: usize, attempts: usize },
    #[error("clique {clique}: no adjacent uncoloured core pair with enough slack")]
    SlackWitnessMissing { clique: usize },
    #[error("vertex {vertex}: no usable colour{}", list.map(|l| format!(" in {l:?}")).unwrap_or_default())]
    ListExhausted { vertex: u32, list: Option<ListId> },
    #[error("clique {clique}: matching covers {matched} of {needed} vertices")]
    MatchingFailed { clique: usize, matched: usize, needed: usize },
    #[error("vertex {vertex}: no independent choice of anti-neighbours after {attempts} samples")]
    IndependenceSearchFailed { vertex: u32, attempts: usize },
    #[error("clique {clique}: core unavailable")]
    CoreUnknown { clique: usize },
    #[error("vertex {vertex} left uncoloured")]
    Uncolored { vertex: u32 },
    #[error("colouring failed verification: {0}")]
    NotProper(String),
}

/// A run that could not finish, with the step and the clique where it stopped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncompleteReport {
    pub step: Step,
    pub clique: Option<usize>,
    pub error: PipelineError,
    /// Vertices coloured when the run stopped.
    pub colored: usize,
}

impl fmt::Display for IncompleteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status incomplete")?;
        writeln!(f, "step {:?}", self.step)?;
        match self.clique {
            Some(c) => writeln!(f, "clique {c}")?,
            None => writeln!(f, "clique -")?,
        }
        writeln!(f, "witness {}", self.error)?;
        writeln!(f, "colored {}", self.colored)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub removed_step6: usize,
    pub reed_removed: usize,
    pub reed_retained_low_degree: usize,
    pub reed_adjacent_variant: usize,
    pub virtual_edges: usize,
    pub slack_active: usize,
    pub slack_kept: usize,
    pub stage1: usize,
    pub stage2: usize,
    pub sparse_colored: usize,
    /// Contracted vertices of Q₁ whose list slack fell below Δ/(4ρ).
    pub q1_vertices: usize,
    pub q1_slack_violations: usize,
    pub q1_min_slack: Option<i64>,
    /// `v_i` that could not copy the colour of `x_i` and were coloured later.
    pub copy_conflicts: usize,
    pub z_search_retries: usize,
}

/// Which step coloured each clique; sparse vertices are counted.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Attribution {
    pub cliques: Vec<(usize, Step)>,
    pub sparse: usize,
}

impl Attribution {
    pub fn to_text(&self, summary: &StreamSummary) -> String {
        use fmt::Write as _;
        let mut s = String::new();
        let _ = writeln!(s, "sparse {}", self.sparse);
        for &(id, step) in &self.cliques {
            let c = &summary.cliques[id];
            let _ = writeln!(s, "clique {id} size {} class {:?} step {step:?}", c.members.len(), c.size_class);
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct Colored {
    pub coloring: SereneColoring,
    pub attribution: Attribution,
    pub diagnostics: Diagnostics,
    pub reed: ReedTransformRecord,
    pub report: ColoringReport,
}

#[derive(Clone, Debug)]
pub enum PipelineOutcome {
    Colored(Box<Colored>),
    /// Δ below the fallback threshold: exact search on the stored graph.
    Fallback { outcome: ExactOutcome, report: Option<ColoringReport> },
    Incomplete(IncompleteReport),
}

impl PipelineOutcome {
    /// The colouring, only when it verified as a proper (Δ−1)-colouring.
    pub fn verified_coloring(&self) -> Option<&PartialColoring> {
        match self {
            PipelineOutcome::Colored(c) => Some(c.coloring.coloring()),
            PipelineOutcome::Fallback { outcome: ExactOutcome::Colored(c), report: Some(r) } if r.is_valid_total() => {
                Some(c)
            }
            _ => None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.verified_coloring().is_some()
    }
}

pub(crate) struct Failure {
    pub step: Step,
    pub clique: Option<usize>,
    pub error: PipelineError,
}

pub(crate) type StepResult<T> = Result<T, Failure>;

pub(crate) fn fail(step: Step, clique: Option<usize>, error: PipelineError) -> Failure {
    Failure { step, clique, error }
}

/// Runs steps 1–6 on the summary alone, then verifies against `g`.
pub fn run_pipeline(summary: &StreamSummary, g: &Graph) -> PipelineOutcome {
    let q = summary.config.q(summary.delta);
    if summary.fallback {
        let stored = summary.stored.as_ref().expect("fallback keeps the graph");
        let outcome = exact_color(stored, q, summary.config.exact_budget);
        let report = outcome.coloring().map(|c| verify_coloring(g, c, q));
        return PipelineOutcome::Fallback { outcome, report };
    }
    let mut ctx = Ctx::new(summary);
    match color_steps(&mut ctx) {
        Err(f) => PipelineOutcome::Incomplete(IncompleteReport {
            step: f.step,
            clique: f.clique,
            error: f.error,
            colored: ctx.phi.colored_count(),
        }),
        Ok((attribution, diagnostics, reed)) => {
            let report = verify_coloring(g, ctx.phi.coloring(), q);
            let serene = crate::oracle::check_serene(&ctx.phi, summary);
            if !report.is_valid_total() || !serene.ok {
                let why = if report.is_valid_total() {
                    format!("serene check: {:?}", serene.first_violation)
                } else {
                    format!("{report:?}")
                };
                return PipelineOutcome::Incomplete(IncompleteReport {
                    step: Step::Verification,
                    clique: None,
                    error: PipelineError::NotProper(why),
                    colored: ctx.phi.colored_count(),
                });
            }
            PipelineOutcome::Colored(Box::new(Colored {
                coloring: ctx.phi,
                attribution,
                diagnostics,
                reed,
                report,
            }))
        }
    }
}

/// Step 1 alone, for inspecting the transform without colouring.
pub fn reed_transform(summary: &StreamSummary) -> Result<(Vec<Removed>, ReedTransformRecord), IncompleteReport> {
    let ctx = Ctx::new(summary);
    let removed6 = reed::step1_preprocess(summary);
    match reed::step1_reed_transform(&ctx, &removed6) {
        Ok(rec) => Ok((removed6, rec)),
        Err(f) => Err(IncompleteReport { step: f.step, clique: f.clique, error: f.error, colored: 0 }),
    }
}

fn color_steps(ctx: &mut Ctx) -> StepResult<(Attribution, Diagnostics, ReedTransformRecord)> {
    let s = ctx.s;
    let incomplete = s.incomplete();
    if !incomplete.is_empty() {
        let clique = incomplete[0];
        return Err(fail(Step::Solitary, Some(clique), PipelineError::RecoveryIncomplete { cliques: incomplete }));
    }
    let mut diag = Diagnostics::default();
    let mut attr = Attribution::default();

    let removed6 = reed::step1_preprocess(s);
    diag.removed_step6 = removed6.len();
    let record = reed::step1_reed_transform(ctx, &removed6)?;
    diag.reed_removed = record.entries.len();
    diag.reed_retained_low_degree = record.retained_low_degree.len();
    diag.reed_adjacent_variant = record.entries.iter().filter(|e| e.adjacent_variant).count();
    diag.virtual_edges = record.e_new.len();
    for &(x, y) in &record.e_new {
        ctx.add_virtual_edge(x, y);
    }
    ctx.extra_on = true;
    let in_h = record.in_h(s, &removed6);

    let (active, kept) = slack::step2_slack_generation(ctx, &in_h);
    diag.slack_active = active;
    diag.slack_kept = kept;

    let stages = critical::step3_color_critical(ctx, &in_h)?;
    diag.stage1 = stages.stage1.len();
    diag.stage2 = stages.stage2.len();
    attr.cliques.extend(stages.stage1.iter().map(|&c| (c, Step::CriticalStage1)));
    attr.cliques.extend(stages.stage2.iter().map(|&c| (c, Step::CriticalStage2)));

    diag.sparse_colored = sparse::step4_color_sparse(ctx, &in_h)?;
    attr.sparse = diag.sparse_colored;
    attr.cliques.extend(sparse::step4_color_small(ctx, &in_h)?);

    inverse::step5_inverse_reed(ctx, &record, &mut diag)?;
    attr.cliques.extend(record.entries.iter().map(|e| (e.clique, Step::InverseReed)));
    ctx.extra_on = false;

    attr.cliques.extend(post::step6(ctx, &removed6)?);

    if let Some(v) = (0..ctx.n()).find(|&v| ctx.phi.get(v).is_none()) {
        let clique = s.decomposition.clique_of(v);
        return Err(fail(Step::Completion, clique, PipelineError::Uncolored { vertex: v as u32 }));
    }
    attr.cliques.sort_unstable();
    Ok((attr, diag, record))
}
