//! Step 2: a random tenth of the vertices try their L2 colour.

use super::context::Ctx;
use super::Provenance;
use crate::graph::{Graph, PartialColoring};
use crate::rng;
use crate::stream::ListId;

/// Keeps `chi[v]` for each active `v` that no active neighbour shares it with.
fn resolve<'a>(n: usize, active: &[bool], chi: &[u32], nbrs: impl Fn(usize) -> Box<dyn Iterator<Item = u32> + 'a>) -> Vec<bool> {
    (0..n)
        .map(|v| active[v] && nbrs(v).all(|u| !active[u as usize] || chi[u as usize] != chi[v]))
        .collect()
}

pub(crate) fn step2_slack_generation(ctx: &mut Ctx, in_h: &[bool]) -> (usize, usize) {
    let s = ctx.s;
    let n = s.n;
    let active: Vec<bool> =
        (0..n).map(|v| in_h[v] && rng::coin(s.config.seed, "slack-active", v as u64, s.config.p_sg)).collect();
    let chi: Vec<u32> = (0..n).map(|v| s.palettes.l2(v)).collect();
    let keep = {
        let c: &Ctx = ctx;
        resolve(n, &active, &chi, |v| {
            let mut l = Vec::new();
            c.for_each_neighbor(v, |u| l.push(u));
            Box::new(l.into_iter())
        })
    };
    let mut kept = 0;
    for v in 0..n {
        if keep[v] {
            ctx.color(v, chi[v], Provenance::FromList(ListId::L2));
            kept += 1;
        }
    }
    (active.iter().filter(|&&a| a).count(), kept)
}

/// The same process on a plain graph with colours uniform in `1..=q`, for
/// statistics. Returns the colouring and the active set.
pub fn slack_generation(g: &Graph, q: usize, p_sg: f64, seed: u64) -> (PartialColoring, Vec<bool>) {
    let n = g.n();
    let active: Vec<bool> = (0..n).map(|v| rng::coin(seed, "slack-active", v as u64, p_sg)).collect();
    let chi: Vec<u32> = (0..n).map(|v| 1 + (rng::derive(seed, "slack-color", v as u64) % q.max(1) as u64) as u32).collect();
    let keep = resolve(n, &active, &chi, |v| Box::new(g.neighbors(v).iter().copied()));
    let mut c = PartialColoring::new(n, q);
    for v in 0..n {
        if keep[v] {
            c.set(v, chi[v]);
        }
    }
    (c, active)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_coloring;

    #[test]
    fn edgeless_keeps_every_active_colour() {
        let g = Graph::empty(50, 4);
        let (c, active) = slack_generation(&g, 3, 1.0, 7);
        assert!(active.iter().all(|&a| a));
        assert_eq!(c.colored_count(), 50);
    }

    #[test]
    fn conflicts_uncolour_both_ends() {
        // With q = 1 every active vertex proposes colour 1.
        let g = Graph::from_edges(3, 2, [(0, 1)]).unwrap();
        let (c, _) = slack_generation(&g, 1, 1.0, 0);
        assert_eq!((c.get(0), c.get(1), c.get(2)), (None, None, Some(1)));
    }

    #[test]
    fn result_is_proper() {
        for seed in 0..10 {
            let g = crate::graph::gen_random_graph(300, 20, 0.05, seed);
            let (c, _) = slack_generation(&g, 19, 0.3, seed);
            assert!(verify_coloring(&g, &c, 19).proper);
        }
    }
}
