//! Step 3: critical cliques of H.

use super::context::Ctx;
use super::{fail, PipelineError, Provenance, Step, StepResult};
use crate::stream::ListId;
use crate::structure::SizeClass;

/// Slack of an uncoloured known vertex: free colours minus uncoloured
/// neighbours inside the cliques being coloured.
fn slack(ctx: &mut Ctx, v: usize, in_cc: &[bool]) -> i64 {
    let free = ctx.free_colors(v).len() as i64;
    free - ctx.uncolored_neighbors(v, |u| in_cc[u]) as i64
}

/// An adjacent uncoloured core pair `(u, v)` with slack at least 0 and 1.
fn find_witness(ctx: &mut Ctx, core: &[u32], in_cc: &[bool]) -> Option<(u32, u32)> {
    let mut scored: Vec<(i64, u32)> = Vec::new();
    for &k in core {
        if ctx.phi.get(k as usize).is_none() && ctx.is_known(k as usize) {
            scored.push((slack(ctx, k as usize, in_cc), k));
        }
    }
    // Largest slack first, smallest id on ties.
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let &(sv, v) = scored.first()?;
    let &(su, u) = scored.get(1)?;
    (sv >= 1 && su >= 0).then_some((u, v))
}

fn color_or_fail(ctx: &mut Ctx, v: u32, list: ListId, step: Step, clique: usize) -> StepResult<()> {
    match ctx.first_fit(v as usize, list) {
        Some((c, prov)) => {
            ctx.color(v as usize, c, prov);
            Ok(())
        }
        None => {
            let list = (!ctx.is_known(v as usize)).then_some(list);
            Err(fail(step, Some(clique), PipelineError::ListExhausted { vertex: v, list }))
        }
    }
}

/// Colours the whole of each listed critical clique: the vertex outside
/// the core from `list`, then the members outside `N(u) ∩ N(v)`, the other
/// members, `u`, and `v` last.
pub(crate) fn critical_extend(ctx: &mut Ctx, cliques: &[usize], list: ListId, step: Step) -> StepResult<()> {
    let s = ctx.s;
    let mut in_cc = vec![false; s.n];
    for &j in cliques {
        for &v in &s.cliques[j].members {
            in_cc[v as usize] = true;
        }
    }
    for &j in cliques {
        let c = &s.cliques[j];
        let Some(core) = c.core.as_ref() else {
            return Err(fail(step, Some(j), PipelineError::CoreUnknown { clique: j }));
        };
        if let Some(sv) = c.s {
            if ctx.phi.get(sv as usize).is_none() {
                let pick = ctx.list(list, sv as usize).iter().copied().find(|&col| ctx.free_at(sv as usize, col));
                match pick {
                    Some(col) => ctx.color(sv as usize, col, Provenance::FromList(list)),
                    None => {
                        return Err(fail(step, Some(j), PipelineError::ListExhausted { vertex: sv, list: Some(list) }))
                    }
                }
            }
        }
        let Some((u, v)) = find_witness(ctx, core, &in_cc) else {
            return Err(fail(step, Some(j), PipelineError::SlackWitnessMissing { clique: j }));
        };
        let common = |x: u32| ctx.adjacent(x, u) && ctx.adjacent(x, v);
        let rest: Vec<u32> =
            c.members.iter().copied().filter(|&x| x != u && x != v && ctx.phi.get(x as usize).is_none()).collect();
        let (first, second): (Vec<u32>, Vec<u32>) = rest.into_iter().partition(|&x| !common(x));
        for x in first.into_iter().chain(second).chain([u, v]) {
            color_or_fail(ctx, x, list, step, j)?;
        }
    }
    Ok(())
}

pub(crate) struct Stages {
    pub stage1: Vec<usize>,
    pub stage2: Vec<usize>,
}

pub(crate) fn step3_color_critical(ctx: &mut Ctx, in_h: &[bool]) -> StepResult<Stages> {
    let s = ctx.s;
    let rho = s.config.rho;
    let mut stage1 = Vec::new();
    let mut stage2 = Vec::new();
    for c in &s.cliques {
        if c.size_class != SizeClass::Critical || !in_h[c.members[0] as usize] {
            continue;
        }
        let first = match c.s {
            None => true,
            Some(sv) if ctx.phi.get(sv as usize).is_some() => true,
            Some(sv) => match ctx.known(sv as usize) {
                Some(l) => {
                    let mut ext =
                        l.iter().filter(|&&w| in_h[w as usize] && c.members.binary_search(&w).is_err()).count();
                    if ctx.extra_on {
                        ext += ctx.virtual_degree(sv as usize);
                    }
                    ext < 2 * rho
                }
                None => false,
            },
        };
        if first {
            stage1.push(c.id);
        } else {
            stage2.push(c.id);
        }
    }
    critical_extend(ctx, &stage1, ListId::L3, Step::CriticalStage1)?;

    for &j in &stage2 {
        let c = &s.cliques[j];
        let sv = c.s.expect("stage 2 cliques have a vertex outside the core");
        let core = c.core.as_ref().expect("critical non-solitary cliques have a core");
        let z = core.iter().copied().find(|&k| {
            ctx.phi.get(k as usize).is_none() && ctx.is_known(k as usize) && !ctx.adjacent(sv, k)
        });
        let Some(z) = z else {
            return Err(fail(Step::CriticalStage2, Some(j), PipelineError::SlackWitnessMissing { clique: j }));
        };
        let pick = ctx.list(ListId::L3, sv as usize).iter().copied().find_map(|col| {
            let ps = ctx.fits(sv as usize, col, Some(ListId::L3))?;
            let pz = ctx.fits(z as usize, col, Some(ListId::L3))?;
            Some((col, ps, pz))
        });
        let Some((col, ps, pz)) = pick else {
            return Err(fail(
                Step::CriticalStage2,
                Some(j),
                PipelineError::ListExhausted { vertex: sv, list: Some(ListId::L3) },
            ));
        };
        ctx.color(sv as usize, col, ps);
        ctx.color(z as usize, col, pz);
    }
    critical_extend(ctx, &stage2, ListId::L3, Step::CriticalStage2)?;
    Ok(Stages { stage1, stage2 })
}
