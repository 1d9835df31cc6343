//! Step 1: set aside the cliques coloured last, then remove the hard
//! friendly cliques and tie each one to the rest of the graph by a single
//! virtual edge.

use std::collections::BTreeMap;

use serde::Serialize;

use super::context::Ctx;
use super::{fail, PipelineError, Step, StepResult};
use crate::graph::{has_clique_with_budget, Graph};
use crate::rng;
use crate::stream::StreamSummary;
use crate::structure::{classify_friends, compute_core, AlmostClique, KnownNeighborhoods, SizeClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RemovalKind {
    Solitary,
    Popular,
}

/// A clique dropped before the transform and coloured in step 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Removed {
    pub clique: usize,
    pub kind: RemovalKind,
}

/// One clique taken out by the transform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReedEntry {
    pub clique: usize,
    pub members: Vec<u32>,
    pub core: Vec<u32>,
    pub s: u32,
    pub d: Vec<u32>,
    /// `(u, f(u))` for `u ∈ D`.
    pub f: Vec<(u32, u32)>,
    pub s_set: Vec<u32>,
    pub t_set: Vec<u32>,
    pub u: u32,
    pub v: u32,
    pub x: u32,
    pub y: u32,
    /// `f(S)` had a known edge; `x ~ y` already and no edge was added.
    pub adjacent_variant: bool,
    pub attempts: usize,
}

impl ReedEntry {
    pub fn f_of(&self, u: u32) -> Option<u32> {
        self.f.iter().find(|&&(a, _)| a == u).map(|&(_, b)| b)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReedTransformRecord {
    pub entries: Vec<ReedEntry>,
    /// Candidates kept in H because some vertex of `D` has degree below Δ.
    pub retained_low_degree: Vec<usize>,
    /// Members of `A_RT` among the vertices the transform looked at.
    pub a_rt: Vec<u32>,
    pub e_new: Vec<(u32, u32)>,
}

impl ReedTransformRecord {
    pub fn removed_cliques(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.clique)
    }

    /// Membership in H: not in a step-6 clique and not removed by the transform.
    pub fn in_h(&self, s: &StreamSummary, removed6: &[Removed]) -> Vec<bool> {
        let mut in_h = vec![true; s.n];
        let gone = removed6.iter().map(|r| r.clique).chain(self.removed_cliques());
        for c in gone {
            for &v in &s.cliques[c].members {
                in_h[v as usize] = false;
            }
        }
        in_h
    }
}

/// Large, critical solitary and critical αρ²-popular cliques, by id.
pub fn step1_preprocess(s: &StreamSummary) -> Vec<Removed> {
    s.cliques
        .iter()
        .filter_map(|c| {
            let popular = c.friend_class(2).is_some_and(|f| f.popular.is_some());
            let kind = match c.size_class {
                SizeClass::Small => return None,
                SizeClass::Large if !c.is_solitary() && popular => RemovalKind::Popular,
                SizeClass::Large => RemovalKind::Solitary,
                SizeClass::Critical if c.is_solitary() => RemovalKind::Solitary,
                SizeClass::Critical if popular => RemovalKind::Popular,
                SizeClass::Critical => return None,
            };
            Some(Removed { clique: c.id, kind })
        })
        .collect()
}

fn same_critical_clique(s: &StreamSummary, a: u32, b: u32) -> bool {
    match (s.decomposition.clique_of(a as usize), s.decomposition.clique_of(b as usize)) {
        (Some(i), Some(j)) => i == j && s.cliques[i].size_class == SizeClass::Critical,
        _ => false,
    }
}

/// Whether `c` is a transform candidate in G′, and its `s` if so.
fn candidate(c: &AlmostClique, delta: usize, rho: usize, known: &KnownNeighborhoods, in_g1: &[bool]) -> Option<u32> {
    if c.size_class != SizeClass::Critical || c.solitary != Some(false) {
        return None;
    }
    let core = c.core.as_ref()?;
    if core.len() + 1 != delta {
        return None;
    }
    let mut counts = BTreeMap::<u32, u32>::new();
    for &u in core {
        for &w in known.get(u as usize)? {
            if in_g1[w as usize] && core.binary_search(&w).is_err() {
                *counts.entry(w).or_default() += 1;
            }
        }
    }
    let counts: Vec<(u32, u32)> = counts.into_iter().collect();
    let fc = classify_friends(core, &counts, known, delta, 2.0 * rho as f64);
    if !fc.friendly {
        return None;
    }
    Some(c.s.unwrap_or(fc.friends[0].0))
}

/// Algorithm of step 1 on G′. Adds nothing to `ctx`; the caller switches
/// the virtual edges on.
pub(crate) fn step1_reed_transform(ctx: &Ctx, removed6: &[Removed]) -> StepResult<ReedTransformRecord> {
    let s = ctx.s;
    let cfg = &s.config;
    let delta = s.delta;
    let mut in_g1 = vec![true; s.n];
    for r in removed6 {
        for &v in &s.cliques[r.clique].members {
            in_g1[v as usize] = false;
        }
    }
    let a_rt = |v: u32| rng::coin(cfg.seed, "reed-a", v as u64, cfg.p_rt);
    let mut rec = ReedTransformRecord::default();
    let mut a_seen = std::collections::BTreeSet::new();
    for c in &s.cliques {
        if !in_g1[c.members[0] as usize] {
            continue;
        }
        let Some(si) = candidate(c, delta, cfg.rho, &s.known, &in_g1) else { continue };
        let core = c.core.clone().expect("candidate has a core");
        let members = &c.members;
        let in_c = |w: u32| members.binary_search(&w).is_ok();
        let d: Vec<u32> = members
            .iter()
            .copied()
            .filter(|&k| k != si && s.known.get(k as usize).is_some_and(|l| l.binary_search(&si).is_ok()))
            .collect();
        let mut full = !d.is_empty();
        let mut f = Vec::with_capacity(d.len());
        for &u in &d {
            let l = s.known.get(u as usize).expect("core vertices are known");
            let deg = l.iter().filter(|&&w| in_g1[w as usize]).count();
            let ext: Vec<u32> = l.iter().copied().filter(|&w| in_g1[w as usize] && !in_c(w) && w != si).collect();
            if deg != delta || ext.len() != 1 {
                full = false;
                break;
            }
            f.push((u, ext[0]));
        }
        if !full {
            rec.retained_low_degree.push(c.id);
            continue;
        }
        for &(u, x) in &f {
            a_seen.insert(u);
            a_seen.insert(x);
        }
        let s_set: Vec<u32> = f.iter().filter(|&&(u, x)| a_rt(u) && !a_rt(x)).map(|&(u, _)| u).collect();
        let fx = |u: u32| f.iter().find(|&&(a, _)| a == u).expect("u in D").1;

        let mut adjacent_pair = None;
        'adj: for (i, &a) in s_set.iter().enumerate() {
            for &b in &s_set[i + 1..] {
                if fx(a) != fx(b) && ctx.adjacent(fx(a), fx(b)) {
                    adjacent_pair = Some((a, b));
                    break 'adj;
                }
            }
        }
        let mut entry = ReedEntry {
            clique: c.id,
            members: members.clone(),
            core,
            s: si,
            d: d.clone(),
            f: f.clone(),
            s_set: s_set.clone(),
            t_set: Vec::new(),
            u: 0,
            v: 0,
            x: 0,
            y: 0,
            adjacent_variant: false,
            attempts: 0,
        };
        if let Some((a, b)) = adjacent_pair {
            entry.u = a;
            entry.v = b;
            entry.x = fx(a);
            entry.y = fx(b);
            entry.adjacent_variant = true;
            rec.entries.push(entry);
            continue;
        }
        let p_ds = cfg.p_ds();
        let mut picked = None;
        for attempt in 0..cfg.retry_budget {
            let t: Vec<u32> = s_set
                .iter()
                .copied()
                .filter(|&u| {
                    rng::unit(rng::derive2(rng::derive(cfg.seed, "reed-t", c.id as u64), "try", attempt as u64, u as u64))
                        < p_ds
                })
                .collect();
            'pair: for (i, &a) in t.iter().enumerate() {
                for &b in &t[i + 1..] {
                    let (x, y) = (fx(a), fx(b));
                    if x != y && !same_critical_clique(s, x, y) {
                        picked = Some((a, b, t.clone(), attempt + 1));
                        break 'pair;
                    }
                }
            }
            if picked.is_some() {
                break;
            }
        }
        let Some((a, b, t, attempts)) = picked else {
            return Err(fail(
                Step::ReedTransform,
                Some(c.id),
                PipelineError::NoCandidatePair { clique: c.id, attempts: cfg.retry_budget },
            ));
        };
        entry.u = a;
        entry.v = b;
        entry.x = fx(a);
        entry.y = fx(b);
        entry.t_set = t;
        entry.attempts = attempts;
        rec.e_new.push((entry.x.min(entry.y), entry.x.max(entry.y)));
        rec.entries.push(entry);
    }
    rec.a_rt = a_seen.into_iter().filter(|&v| a_rt(v)).collect();
    Ok(rec)
}

/// The structural claims about H, checked against the real graph.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RtReport {
    pub delta: usize,
    pub max_degree: usize,
    /// `None` when the clique search ran out of budget.
    pub has_delta_clique: Option<bool>,
    /// Non-small cliques of H that are solitary or ρ-popular.
    pub solitary_or_popular: Vec<usize>,
    /// Cliques of H with a (Δ−1)-core that are ρ-friendly, excluding those
    /// kept by the degree test.
    pub friendly_full_core: Vec<usize>,
    pub max_added_per_vertex: usize,
    pub added_bound: f64,
    /// `x ≠ y`, not in one critical clique, `v ∈ A_RT`, `x ∉ A_RT`.
    pub record_violations: Vec<usize>,
}

impl RtReport {
    pub fn holds(&self) -> bool {
        self.max_degree <= self.delta
            && self.has_delta_clique == Some(false)
            && self.solitary_or_popular.is_empty()
            && self.friendly_full_core.is_empty()
            && self.max_added_per_vertex as f64 <= self.added_bound
            && self.record_violations.is_empty()
    }
}

/// Builds H from the full graph and checks it.
pub fn check_rt_invariants(g: &Graph, s: &StreamSummary, removed6: &[Removed], rec: &ReedTransformRecord) -> RtReport {
    let delta = s.delta;
    let cfg = &s.config;
    let in_h = rec.in_h(s, removed6);
    let mut edges: Vec<(usize, usize)> =
        g.edges().filter(|&(a, b)| in_h[a] && in_h[b]).collect();
    edges.extend(rec.e_new.iter().map(|&(a, b)| (a as usize, b as usize)));
    let mut added = vec![0usize; s.n];
    for &(a, b) in &rec.e_new {
        added[a as usize] += 1;
        added[b as usize] += 1;
    }
    for e in &mut edges {
        *e = (e.0.min(e.1), e.0.max(e.1));
    }
    edges.sort_unstable();
    edges.dedup();
    let h = Graph::from_edges(s.n, s.n, edges.iter().copied())
        .expect("virtual edges join distinct existing vertices");
    let max_degree = h.max_degree();
    let has_delta_clique = has_clique_with_budget(&h, delta, cfg.exact_budget).ok();
    let known = KnownNeighborhoods::from_graph(&h);
    let mut solitary_or_popular = Vec::new();
    let mut friendly_full_core = Vec::new();
    let removed: std::collections::BTreeSet<usize> =
        removed6.iter().map(|r| r.clique).chain(rec.removed_cliques()).collect();
    for c in &s.cliques {
        if removed.contains(&c.id) || c.size_class == SizeClass::Small {
            continue;
        }
        let members = &c.members;
        let mut anti = Vec::new();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !h.adjacent(a as usize, b as usize) {
                    anti.push((a, b));
                }
            }
        }
        let Ok(core) = compute_core(members, &anti) else {
            solitary_or_popular.push(c.id);
            continue;
        };
        if core.len() + 2 <= members.len() {
            solitary_or_popular.push(c.id);
            continue;
        }
        let mut counts = BTreeMap::<u32, u32>::new();
        for &u in &core {
            for &w in h.neighbors(u as usize) {
                if core.binary_search(&w).is_err() {
                    *counts.entry(w).or_default() += 1;
                }
            }
        }
        let counts: Vec<(u32, u32)> = counts.into_iter().collect();
        let fc = classify_friends(&core, &counts, &known, delta, cfg.rho as f64);
        if fc.popular.is_some() {
            solitary_or_popular.push(c.id);
        }
        if core.len() + 1 == delta && fc.friendly && !rec.retained_low_degree.contains(&c.id) {
            friendly_full_core.push(c.id);
        }
    }
    let a_rt = |v: u32| rng::coin(cfg.seed, "reed-a", v as u64, cfg.p_rt);
    let record_violations = rec
        .entries
        .iter()
        .filter(|e| e.x == e.y || same_critical_clique(s, e.x, e.y) || !a_rt(e.v) || a_rt(e.x))
        .map(|e| e.clique)
        .collect();
    RtReport {
        delta,
        max_degree,
        has_delta_clique,
        solitary_or_popular,
        friendly_full_core,
        max_added_per_vertex: added.into_iter().max().unwrap_or(0),
        added_bound: 2.0 * delta as f64 / cfg.rho as f64,
        record_violations,
    }
}
