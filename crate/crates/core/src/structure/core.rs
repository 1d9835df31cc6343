//! Maximum cliques of almost-cliques via minimum vertex covers of the
//! anti-edge graph: `K = C − cover`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("core search exceeded {0} branch nodes")]
    Undetermined(u64),
}

const NODE_BUDGET: u64 = 2_000_000;

/// Every minimum vertex cover of `edges`, each sorted.
pub fn min_vertex_covers(edges: &[(u32, u32)]) -> Result<Vec<Vec<u32>>, CoreError> {
    let mut nodes = 0u64;
    for size in 0..=edges.len() {
        let mut found = Vec::new();
        let mut cover = Vec::new();
        let mut banned = Vec::new();
        branch(edges, size, &mut cover, &mut banned, &mut found, &mut nodes)?;
        if !found.is_empty() {
            for c in &mut found {
                c.sort_unstable();
            }
            found.sort();
            found.dedup();
            return Ok(found);
        }
    }
    unreachable!("the set of all endpoints is a cover")
}

fn branch(
    edges: &[(u32, u32)],
    budget: usize,
    cover: &mut Vec<u32>,
    banned: &mut Vec<u32>,
    found: &mut Vec<Vec<u32>>,
    nodes: &mut u64,
) -> Result<(), CoreError> {
    *nodes += 1;
    if *nodes > NODE_BUDGET {
        return Err(CoreError::Undetermined(NODE_BUDGET));
    }
    let Some(&(a, b)) = edges.iter().find(|&&(a, b)| !cover.contains(&a) && !cover.contains(&b)) else {
        found.push(cover.clone());
        return Ok(());
    };
    if cover.len() == budget {
        return Ok(());
    }
    // Either a joins the cover, or a is excluded and b must join.
    if !banned.contains(&a) {
        cover.push(a);
        branch(edges, budget, cover, banned, found, nodes)?;
        cover.pop();
    }
    if !banned.contains(&b) {
        banned.push(a);
        cover.push(b);
        branch(edges, budget, cover, banned, found, nodes)?;
        cover.pop();
        banned.pop();
    }
    Ok(())
}

/// The lexicographically smallest maximum clique of `G[C]`, given all
/// anti-edges of `G[C]`.
pub fn compute_core(members: &[u32], anti_edges: &[(u32, u32)]) -> Result<Vec<u32>, CoreError> {
    let covers = min_vertex_covers(anti_edges)?;
    Ok(covers
        .iter()
        .map(|c| members.iter().copied().filter(|v| c.binary_search(v).is_err()).collect::<Vec<u32>>())
        .min()
        .expect("at least one cover"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_clique_is_its_own_core() {
        let c: Vec<u32> = (0..9).collect();
        assert_eq!(compute_core(&c, &[]).unwrap(), c);
    }

    #[test]
    fn star_centre_is_removed() {
        let c: Vec<u32> = (0..9).collect();
        let k = compute_core(&c, &[(0, 4), (4, 7)]).unwrap();
        assert_eq!(k, vec![0, 1, 2, 3, 5, 6, 7, 8]);
    }

    #[test]
    fn single_anti_edge_keeps_the_smaller_endpoint() {
        let c: Vec<u32> = (0..6).collect();
        assert_eq!(compute_core(&c, &[(2, 5)]).unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn covers_match_brute_force() {
        use crate::rng::rng_for;
        use rand::Rng;
        for trial in 0..200 {
            let mut r = rng_for(7, "vc", trial);
            let n = r.random_range(2..9u32);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if r.random_bool(0.3) {
                        edges.push((a, b));
                    }
                }
            }
            let mut best: Option<usize> = None;
            let mut all = Vec::new();
            for mask in 0u32..1 << n {
                if edges.iter().all(|&(a, b)| mask >> a & 1 == 1 || mask >> b & 1 == 1) {
                    let k = mask.count_ones() as usize;
                    match best {
                        Some(b) if k > b => {}
                        Some(b) if k == b => all.push(mask),
                        _ => {
                            best = Some(k);
                            all = vec![mask];
                        }
                    }
                }
            }
            let mut expect: Vec<Vec<u32>> = all.iter().map(|m| (0..n).filter(|v| m >> v & 1 == 1).collect()).collect();
            expect.sort();
            assert_eq!(min_vertex_covers(&edges).unwrap(), expect, "edges {edges:?}");
        }
    }
}
