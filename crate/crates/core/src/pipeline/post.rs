//! Step 6: the cliques set aside in step 1, coloured last.

use super::context::Ctx;
use super::reed::{RemovalKind, Removed};
use super::sparse::color_by_matching;
use super::{fail, PipelineError, Provenance, Step, StepResult};
use crate::stream::{ListId, SolitaryHelper};
use crate::structure::AlmostClique;

const L6: ListId = ListId::L6;

fn exhausted(step: Step, clique: usize, vertex: u32) -> super::Failure {
    fail(step, Some(clique), PipelineError::ListExhausted { vertex, list: Some(L6) })
}

/// A colour from `L6(lead)` that every vertex of `group` can take serenely.
fn same_color(ctx: &Ctx, lead: u32, group: &[u32], avoid: Option<u32>) -> Option<(u32, Vec<Provenance>)> {
    ctx.list(L6, lead as usize).iter().copied().filter(|&c| Some(c) != avoid).find_map(|c| {
        let provs: Option<Vec<Provenance>> = group.iter().map(|&m| ctx.fits(m as usize, c, Some(L6))).collect();
        provs.map(|p| (c, p))
    })
}

fn apply(ctx: &mut Ctx, group: &[u32], c: u32, provs: Vec<Provenance>) {
    for (&m, p) in group.iter().zip(provs) {
        ctx.color(m as usize, c, p);
    }
}

fn greedy(ctx: &mut Ctx, order: impl IntoIterator<Item = u32>, step: Step, clique: usize) -> StepResult<()> {
    for v in order {
        if ctx.phi.get(v as usize).is_some() {
            continue;
        }
        match ctx.first_fit(v as usize, L6) {
            Some((c, p)) => ctx.color(v as usize, c, p),
            None => return Err(exhausted(step, clique, v)),
        }
    }
    Ok(())
}

fn color_popular(ctx: &mut Ctx, c: &AlmostClique) -> StepResult<Step> {
    let step = Step::Popular;
    let w = c.friend_class(2).and_then(|f| f.popular.clone()).expect("popular cliques carry a witness");
    let core = c.core.as_ref().expect("non-solitary cliques have a core");
    for &v in &c.members {
        ctx.phi.clear(v as usize);
    }
    if let Some(sv) = c.s.filter(|&sv| sv != w.x1 && sv != w.x2) {
        let pick = ctx.list(L6, sv as usize).iter().copied().find(|&col| ctx.free_at(sv as usize, col));
        match pick {
            Some(col) => ctx.color(sv as usize, col, Provenance::FromList(L6)),
            None => return Err(exhausted(step, c.id, sv)),
        }
    }
    let mut first = None;
    for (x, z) in [(w.x1, w.z1), (w.x2, w.z2)] {
        // Keep the colour of x when z can share it; otherwise recolour x.
        let kept = ctx.phi.get(x as usize).filter(|&col| Some(col) != first).and_then(|col| {
            let p = ctx.fits(z as usize, col, Some(L6))?;
            Some((col, p))
        });
        let col = match kept {
            Some((col, p)) => {
                ctx.color(z as usize, col, p);
                col
            }
            None => {
                let old = ctx.phi.get(x as usize).zip(ctx.phi.provenance(x as usize));
                ctx.phi.clear(x as usize);
                match same_color(ctx, x, &[x, z], first) {
                    Some((col, provs)) => {
                        apply(ctx, &[x, z], col, provs);
                        col
                    }
                    None => {
                        if let Some((oc, op)) = old {
                            ctx.phi.set(x as usize, oc, op);
                        }
                        return Err(exhausted(step, c.id, x));
                    }
                }
            }
        };
        first = Some(col);
    }
    let near = |v: u32| ctx.adjacent(v, w.x1) || ctx.adjacent(v, w.x2);
    let rest: Vec<u32> =
        core.iter().copied().filter(|&v| v != w.w && ctx.phi.get(v as usize).is_none()).collect();
    let (far, close): (Vec<u32>, Vec<u32>) = rest.into_iter().partition(|&v| !near(v));
    let leftovers: Vec<u32> = c.members.iter().copied().filter(|v| core.binary_search(v).is_err()).collect();
    greedy(ctx, far.into_iter().chain(close).chain(leftovers).chain([w.w]), step, c.id)?;
    Ok(step)
}

fn color_solitary(ctx: &mut Ctx, c: &AlmostClique) -> StepResult<Step> {
    for &v in &c.members {
        ctx.phi.clear(v as usize);
    }
    if c.holey {
        color_by_matching(ctx, c.id, L6, Step::SolitaryHoley)?;
        return Ok(Step::SolitaryHoley);
    }
    let step = Step::Solitary;
    let Some(helper) = c.helper else {
        return Err(fail(step, Some(c.id), PipelineError::RecoveryIncomplete { cliques: vec![c.id] }));
    };
    let helpers: Vec<u32> = match helper {
        SolitaryHelper::AntiMatching { u1, v1, u2, v2 } => {
            let Some((c1, p1)) = same_color(ctx, v1, &[v1, u1], None) else { return Err(exhausted(step, c.id, v1)) };
            apply(ctx, &[v1, u1], c1, p1);
            let Some((c2, p2)) = same_color(ctx, v2, &[v2, u2], Some(c1)) else {
                return Err(exhausted(step, c.id, v2));
            };
            apply(ctx, &[v2, u2], c2, p2);
            vec![u1, v1, u2, v2]
        }
        SolitaryHelper::IndependentSet { u1, u2, v } => {
            let Some((col, p)) = same_color(ctx, v, &[v, u1, u2], None) else { return Err(exhausted(step, c.id, v)) };
            apply(ctx, &[v, u1, u2], col, p);
            vec![u1, u2, v]
        }
    };
    // Members with a known anti-neighbour, or whose neighbourhood is unknown.
    let mut has_anti = vec![false; ctx.n()];
    for &(a, b) in &c.anti_edges {
        has_anti[a as usize] = true;
        has_anti[b as usize] = true;
    }
    let s_set: Vec<u32> = c
        .members
        .iter()
        .copied()
        .filter(|&v| ctx.phi.get(v as usize).is_none() && (has_anti[v as usize] || !ctx.is_known(v as usize)))
        .collect();
    for &v in &s_set {
        let pick = ctx.list(L6, v as usize).iter().copied().find_map(|col| Some((col, ctx.fits(v as usize, col, Some(L6))?)));
        match pick {
            Some((col, p)) => ctx.color(v as usize, col, p),
            None => return Err(exhausted(step, c.id, v)),
        }
    }
    let common = |v: u32| helpers.iter().all(|&h| ctx.adjacent(v, h));
    let rest: Vec<u32> = c.members.iter().copied().filter(|&v| ctx.phi.get(v as usize).is_none()).collect();
    let (outside, inside): (Vec<u32>, Vec<u32>) = rest.into_iter().partition(|&v| !common(v));
    greedy(ctx, outside.into_iter().chain(inside), step, c.id)?;
    Ok(step)
}

pub(crate) fn step6(ctx: &mut Ctx, removed: &[Removed]) -> StepResult<Vec<(usize, Step)>> {
    let s = ctx.s;
    let mut out = Vec::with_capacity(removed.len());
    for r in removed {
        let c = &s.cliques[r.clique];
        let step = match r.kind {
            RemovalKind::Popular => color_popular(ctx, c)?,
            RemovalKind::Solitary => color_solitary(ctx, c)?,
        };
        out.push((c.id, step));
    }
    Ok(out)
}
