//! Step 4: sparse vertices from L4, then small cliques by palette matching.

use super::context::Ctx;
use super::matching::build_palette_graph;
use super::{fail, PipelineError, Provenance, Step, StepResult};
use crate::stream::ListId;
use crate::structure::SizeClass;

pub(crate) fn step4_color_sparse(ctx: &mut Ctx, in_h: &[bool]) -> StepResult<usize> {
    let s = ctx.s;
    let mut count = 0;
    for v in 0..s.n {
        if !in_h[v] || !s.decomposition.is_sparse(v) || ctx.phi.get(v).is_some() {
            continue;
        }
        let pick = ctx.list(ListId::L4, v).iter().copied().find(|&c| ctx.free_at(v, c));
        let Some(c) = pick else {
            return Err(fail(Step::Sparse, None, PipelineError::ListExhausted { vertex: v as u32, list: Some(ListId::L4) }));
        };
        ctx.color(v, c, Provenance::FromList(ListId::L4));
        count += 1;
    }
    Ok(count)
}

/// Matches the uncoloured members of a clique to distinct unused colours of
/// `list` and applies the matching.
pub(crate) fn color_by_matching(ctx: &mut Ctx, clique: usize, list: ListId, step: Step) -> StepResult<()> {
    let members = &ctx.s.cliques[clique].members;
    let pg = build_palette_graph(ctx, members, list);
    let m = pg.sampled.max_matching();
    let matched = m.iter().flatten().count();
    if matched < pg.vertices.len() {
        return Err(fail(
            step,
            Some(clique),
            PipelineError::MatchingFailed { clique, matched, needed: pg.vertices.len() },
        ));
    }
    for (i, r) in m.into_iter().enumerate() {
        let c = pg.colors[r.expect("left-perfect") as usize];
        ctx.color(pg.vertices[i] as usize, c, Provenance::FromList(list));
    }
    Ok(())
}

pub(crate) fn step4_color_small(ctx: &mut Ctx, in_h: &[bool]) -> StepResult<Vec<(usize, Step)>> {
    let s = ctx.s;
    let small: Vec<usize> = s
        .cliques
        .iter()
        .filter(|c| c.size_class == SizeClass::Small && in_h[c.members[0] as usize])
        .map(|c| c.id)
        .collect();
    let mut out = Vec::new();
    for &j in small.iter().filter(|&&j| !s.cliques[j].holey) {
        color_by_matching(ctx, j, ListId::L4, Step::Small)?;
        out.push((j, Step::Small));
    }
    for &j in small.iter().filter(|&&j| s.cliques[j].holey) {
        for &v in &s.cliques[j].members {
            ctx.phi.clear(v as usize);
        }
        color_by_matching(ctx, j, ListId::L4, Step::SmallHoley)?;
        out.push((j, Step::SmallHoley));
    }
    Ok(out)
}
