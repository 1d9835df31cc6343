//! Step 5: put the cliques removed by the transform back.
//!
//! Each removed clique needs two same-coloured pairs in the neighbourhood of
//! its core: `x_i v_i` and `s_i z_i`. Pairs that share a vertex are merged
//! into independent sets coloured as one.

use std::collections::BTreeMap;

use super::context::Ctx;
use super::critical::critical_extend;
use super::reed::{ReedEntry, ReedTransformRecord};
use super::{fail, Diagnostics, PipelineError, Provenance, Step, StepResult};
use crate::rng;
use crate::stream::ListId;

fn independent(ctx: &Ctx, set: &[u32]) -> bool {
    set.iter().enumerate().all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && !ctx.adjacent(a, b)))
}

/// `{w} ∪ {z_i} ∪ {v_j : x_j = w or x_j = z_i}`.
fn contracted(w: u32, zs: &[u32], entries: &[ReedEntry]) -> Vec<u32> {
    let mut set = vec![w];
    set.extend_from_slice(zs);
    for e in entries {
        if e.x == w || zs.contains(&e.x) {
            set.push(e.v);
        }
    }
    set.sort_unstable();
    set.dedup();
    set
}

/// Core members of clique `i` not adjacent to `w`, uncoloured, by id.
fn anti_candidates(ctx: &Ctx, e: &ReedEntry, w: u32) -> Vec<u32> {
    e.core
        .iter()
        .copied()
        .filter(|&k| k != w && ctx.phi.get(k as usize).is_none() && ctx.is_known(k as usize) && !ctx.adjacent(w, k))
        .collect()
}

/// Picks one `z_i` per clique in `S(w)` so that the contracted set is independent.
fn select_z(ctx: &Ctx, w: u32, group: &[&ReedEntry], all: &[ReedEntry], diag: &mut Diagnostics) -> StepResult<Vec<u32>> {
    let cfg = &ctx.s.config;
    let cands: Vec<Vec<u32>> = group.iter().map(|e| anti_candidates(ctx, e, w)).collect();
    let err = |attempts| {
        fail(
            Step::InverseReed,
            Some(group[0].clique),
            PipelineError::IndependenceSearchFailed { vertex: w, attempts },
        )
    };
    if group.len() == 1 && group[0].members.binary_search(&w).is_ok() {
        for &z in &cands[0] {
            if independent(ctx, &contracted(w, &[z], all)) {
                return Ok(vec![z]);
            }
        }
        return Err(err(cands[0].len()));
    }
    for attempt in 0..cfg.retry_budget {
        let in_r = |u: u32| rng::unit(rng::derive2(cfg.seed, "z-sample", ((w as u64) << 32) | attempt as u64, u as u64)) < 0.1;
        let mut zs = Vec::with_capacity(group.len());
        for (e, cand) in group.iter().zip(&cands) {
            let good = |u: u32| {
                let ext_clear = ctx.known(u as usize).is_some_and(|l| {
                    l.iter().all(|&t| e.members.binary_search(&t).is_ok() || !in_r(t))
                });
                let pairs_clear = all.iter().filter(|f| f.x == u).all(|f| !in_r(f.y));
                in_r(u) && ext_clear && pairs_clear
            };
            match cand.iter().copied().find(|&u| good(u)) {
                Some(z) => zs.push(z),
                None => break,
            }
        }
        if zs.len() == group.len() && independent(ctx, &contracted(w, &zs, all)) {
            return Ok(zs);
        }
        diag.z_search_retries += 1;
    }
    Err(err(cfg.retry_budget))
}

pub(crate) fn step5_inverse_reed(ctx: &mut Ctx, rec: &ReedTransformRecord, diag: &mut Diagnostics) -> StepResult<()> {
    if rec.entries.is_empty() {
        return Ok(());
    }
    let s = ctx.s;
    let entries = &rec.entries;

    // (1) Uncolour every s_i.
    for e in entries {
        ctx.phi.clear(e.s as usize);
    }
    // (2) Copy the colour of x_i onto v_i.
    for e in entries {
        if let Some(c) = ctx.phi.get(e.x as usize) {
            match ctx.fits(e.v as usize, c, None) {
                Some(p) if ctx.phi.get(e.v as usize).is_none() => ctx.color(e.v as usize, c, p),
                _ => diag.copy_conflicts += 1,
            }
        }
    }
    // (3) The contracted vertices of Q₁, one per distinct s.
    let mut by_s: BTreeMap<u32, Vec<&ReedEntry>> = BTreeMap::new();
    for e in entries {
        by_s.entry(e.s).or_default().push(e);
    }
    let mut sets: Vec<(u32, Vec<u32>)> = Vec::new();
    let mut claimed = vec![false; s.n];
    for (&w, group) in &by_s {
        let zs = select_z(ctx, w, group, entries, diag)?;
        let set: Vec<u32> = contracted(w, &zs, entries)
            .into_iter()
            .filter(|&m| ctx.phi.get(m as usize).is_none() && !claimed[m as usize])
            .collect();
        for &m in &set {
            claimed[m as usize] = true;
        }
        sets.push((w, set));
    }
    let threshold = s.delta as f64 / (4.0 * s.config.rho as f64);
    let owner: BTreeMap<u32, usize> =
        sets.iter().enumerate().flat_map(|(i, (_, set))| set.iter().map(move |&m| (m, i))).collect();
    for (i, (_, set)) in sets.iter().enumerate() {
        let mut common: Option<Vec<u32>> = None;
        let mut nbr_sets = std::collections::BTreeSet::new();
        for &m in set {
            let free = ctx.free_colors(m as usize);
            common = Some(match common {
                None => free,
                Some(c) => c.into_iter().filter(|x| free.binary_search(x).is_ok()).collect(),
            });
            ctx.for_each_neighbor(m as usize, |u| {
                if let Some(&j) = owner.get(&u) {
                    if j != i {
                        nbr_sets.insert(j);
                    }
                }
            });
        }
        let slack = common.map_or(0, |c| c.len()) as i64 - nbr_sets.len() as i64;
        diag.q1_vertices += 1;
        diag.q1_min_slack = Some(diag.q1_min_slack.map_or(slack, |m| m.min(slack)));
        if (slack as f64) < threshold {
            diag.q1_slack_violations += 1;
        }
    }
    for (w, set) in &sets {
        if set.is_empty() {
            continue;
        }
        let pick = ctx.list(ListId::L5, *w as usize).iter().copied().find_map(|c| {
            let provs: Option<Vec<Provenance>> =
                set.iter().map(|&m| ctx.fits(m as usize, c, Some(ListId::L5))).collect();
            provs.map(|p| (c, p))
        });
        let Some((c, provs)) = pick else {
            let clique = by_s[w][0].clique;
            return Err(fail(
                Step::InverseReed,
                Some(clique),
                PipelineError::ListExhausted { vertex: *w, list: Some(ListId::L5) },
            ));
        };
        for (&m, p) in set.iter().zip(provs) {
            ctx.color(m as usize, c, p);
        }
    }
    // (4) Remaining x_i v_i pairs, merged by x.
    let mut by_x: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for e in entries {
        if ctx.phi.get(e.v as usize).is_none() && ctx.phi.get(e.x as usize).is_none() {
            by_x.entry(e.x).or_default().push(e.v);
        }
    }
    for (x, vs) in by_x {
        let mut set = vec![x];
        set.extend(vs);
        set.sort_unstable();
        set.dedup();
        let palette: Vec<u32> = if ctx.is_known(x as usize) {
            (1..=ctx.q).collect()
        } else {
            ctx.list(ListId::L5, x as usize).to_vec()
        };
        let pick = palette.into_iter().find_map(|c| {
            let provs: Option<Vec<Provenance>> =
                set.iter().map(|&m| ctx.fits(m as usize, c, Some(ListId::L5))).collect();
            provs.map(|p| (c, p))
        });
        let Some((c, provs)) = pick else {
            let clique = s.decomposition.clique_of(x as usize);
            return Err(fail(
                Step::InverseReed,
                clique,
                PipelineError::ListExhausted { vertex: x, list: Some(ListId::L5) },
            ));
        };
        for (&m, p) in set.iter().zip(provs) {
            ctx.color(m as usize, c, p);
        }
    }
    // (5) Extend into every removed clique.
    let cliques: Vec<usize> = entries.iter().map(|e| e.clique).collect();
    critical_extend(ctx, &cliques, ListId::L5, Step::InverseReed)
}
