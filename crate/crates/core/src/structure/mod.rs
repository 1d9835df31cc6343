//! Classification of the almost-cliques found by the pass.
//!
//! Everything here is a pure function of the decomposition and the
//! recovered neighbourhoods; the same inputs always give the same output.

mod core;
mod known;

pub use self::core::{compute_core, min_vertex_covers, CoreError};
pub use known::KnownNeighborhoods;

use serde::Serialize;

use crate::stream::{Decomposition, Recovered, RunConfig, SolitaryHelper};
use crate::stream::recovery::{find_solitary_helper, known_anti_edges};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SizeClass {
    Small,
    Critical,
    Large,
}

/// Large at `|C| ≥ Δ+1`, small at `|C| ≤ Δ+1−ρ`, critical in between.
pub fn classify_size(size: usize, delta: usize, rho: usize) -> SizeClass {
    if size > delta {
        SizeClass::Large
    } else if size + rho <= delta + 1 {
        SizeClass::Small
    } else {
        SizeClass::Critical
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SolitaryWitness {
    AntiMatching([(u32, u32); 2]),
    IndependentSet([u32; 3]),
    /// Two or more members could not be decoded; in a non-small clique this
    /// forces each of them to have anti-degree above one.
    UnrecoveredMembers(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PopularWitness {
    pub x1: u32,
    pub x2: u32,
    /// Shared core neighbour of the two friends.
    pub w: u32,
    /// Core anti-neighbours of `x1` and `x2`, distinct.
    pub z1: u32,
    pub z2: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FriendClass {
    pub k: f64,
    /// `(v, |N(v) ∩ K|)` for every k-friend, by vertex id.
    pub friends: Vec<(u32, u32)>,
    pub popular: Option<PopularWitness>,
    pub friendly: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostClique {
    pub id: usize,
    pub members: Vec<u32>,
    pub size_class: SizeClass,
    /// Members whose neighbourhood was not recovered.
    pub unrecovered: Vec<u32>,
    /// Known anti-edges of `G[C]`; complete when at most one member is unrecovered.
    pub anti_edges: Vec<(u32, u32)>,
    pub anti_edges_complete: bool,
    pub holey: bool,
    /// `None` when the recovered data cannot settle it (small cliques only).
    pub solitary: Option<bool>,
    pub witness: Option<SolitaryWitness>,
    pub helper: Option<SolitaryHelper>,
    pub core: Option<Vec<u32>>,
    /// The member outside the core when `|C − K| = 1`.
    pub s: Option<u32>,
    /// For k = 2ρ, ρ, αρ², in that order; empty unless critical and not solitary.
    pub friends: Vec<FriendClass>,
    /// External neighbours with at least 2ρ core neighbours.
    pub x_c: Vec<u32>,
    pub y_c: Vec<u32>,
}

impl AlmostClique {
    pub fn is_non_small(&self) -> bool {
        self.size_class != SizeClass::Small
    }

    pub fn is_solitary(&self) -> bool {
        self.solitary == Some(true)
    }

    pub fn friend_class(&self, which: usize) -> Option<&FriendClass> {
        self.friends.get(which)
    }

    /// Whether a non-small solitary clique has neither a helper nor enough
    /// anti-edges for the list-colouring route.
    pub fn needs_helper(&self) -> bool {
        self.is_non_small() && self.is_solitary() && !self.holey && self.helper.is_none()
    }
}

/// Looks for two disjoint anti-edges or three pairwise non-adjacent members.
pub fn detect_solitary(anti_edges: &[(u32, u32)]) -> Option<SolitaryWitness> {
    for (i, &a) in anti_edges.iter().enumerate() {
        for &b in &anti_edges[i + 1..] {
            if a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 {
                return Some(SolitaryWitness::AntiMatching([a, b]));
            }
        }
    }
    // No two disjoint anti-edges: the anti-edges form a star or a triangle.
    if anti_edges.len() == 3 {
        let mut vs: Vec<u32> = anti_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() == 3 {
            return Some(SolitaryWitness::IndependentSet([vs[0], vs[1], vs[2]]));
        }
    }
    None
}

/// `(v, |N(v) ∩ K|)` for every vertex outside `K` with a core neighbour.
fn core_counts(core: &[u32], known: &KnownNeighborhoods) -> Option<Vec<(u32, u32)>> {
    let mut counts = std::collections::BTreeMap::<u32, u32>::new();
    for &u in core {
        for &w in known.get(u as usize)? {
            if core.binary_search(&w).is_err() {
                *counts.entry(w).or_default() += 1;
            }
        }
    }
    Some(counts.into_iter().collect())
}

/// Friends of `C` for one threshold `k`, with popularity decided per the
/// definition: two friends with a shared core neighbour and distinct core
/// anti-neighbours.
pub fn classify_friends(core: &[u32], counts: &[(u32, u32)], known: &KnownNeighborhoods, delta: usize, k: f64) -> FriendClass {
    let need = delta as f64 / k;
    let kk = core.len() as u32;
    let friends: Vec<(u32, u32)> = counts.iter().copied().filter(|&(_, c)| c as f64 >= need && c < kk).collect();
    let core_nbrs = |x: u32| -> Vec<u32> {
        core.iter().copied().filter(|&u| known.get(u as usize).is_some_and(|l| l.binary_search(&x).is_ok())).collect()
    };
    let lists: Vec<Vec<u32>> = friends.iter().map(|&(x, _)| core_nbrs(x)).collect();
    let mut popular = None;
    'outer: for i in 0..friends.len() {
        for j in i + 1..friends.len() {
            let (a, b) = (&lists[i], &lists[j]);
            let Some(&w) = a.iter().find(|w| b.binary_search(w).is_ok()) else { continue };
            let anti_a: Vec<u32> = core.iter().copied().filter(|u| a.binary_search(u).is_err()).collect();
            let anti_b: Vec<u32> = core.iter().copied().filter(|u| b.binary_search(u).is_err()).collect();
            for &z1 in &anti_a {
                if let Some(&z2) = anti_b.iter().find(|&&z| z != z1) {
                    popular = Some(PopularWitness { x1: friends[i].0, x2: friends[j].0, w, z1, z2 });
                    break 'outer;
                }
            }
        }
    }
    let friendly = !friends.is_empty() && popular.is_none();
    FriendClass { k, friends, popular, friendly }
}

pub fn analyze(
    delta: usize,
    cfg: &RunConfig,
    dec: &Decomposition,
    recovered: &[Option<Recovered>],
    known: &KnownNeighborhoods,
) -> Vec<AlmostClique> {
    let rho = cfg.rho;
    dec.cliques
        .iter()
        .enumerate()
        .map(|(id, members)| {
            let size_class = classify_size(members.len(), delta, rho);
            let unrecovered: Vec<u32> = members.iter().copied().filter(|&v| recovered[v as usize].is_none()).collect();
            let anti_edges = known_anti_edges(members, recovered);
            let anti_edges_complete = unrecovered.len() <= 1;
            let holey = anti_edges.len() as f64 >= cfg.holey_threshold(delta);
            let non_small = size_class != SizeClass::Small;

            let (solitary, witness) = if anti_edges_complete {
                let w = detect_solitary(&anti_edges);
                (Some(w.is_some()), w)
            } else if non_small {
                (Some(true), Some(SolitaryWitness::UnrecoveredMembers(unrecovered.clone())))
            } else {
                match detect_solitary(&anti_edges) {
                    Some(w) => (Some(true), Some(w)),
                    None => (None, None),
                }
            };

            let core = if anti_edges_complete && !holey { compute_core(members, &anti_edges).ok() } else { None };
            let s = core.as_ref().and_then(|k| {
                (k.len() + 1 == members.len()).then(|| *members.iter().find(|v| k.binary_search(v).is_err()).unwrap())
            });
            let helper = if non_small && solitary == Some(true) { find_solitary_helper(members, recovered) } else { None };

            let mut friends = Vec::new();
            let mut x_c = Vec::new();
            let mut y_c = Vec::new();
            if size_class == SizeClass::Critical && solitary == Some(false) {
                if let Some(k) = &core {
                    if let Some(counts) = core_counts(k, known) {
                        for kk in cfg.friend_ks() {
                            friends.push(classify_friends(k, &counts, known, delta, kk));
                        }
                        let mut ext = std::collections::BTreeSet::new();
                        for &u in members {
                            if let Some(l) = known.get(u as usize) {
                                ext.extend(l.iter().copied().filter(|&w| dec.clique_of(w as usize) != Some(id)));
                            }
                        }
                        for x in ext {
                            let c = counts.binary_search_by_key(&x, |&(v, _)| v).map(|i| counts[i].1).unwrap_or(0);
                            if c as usize >= 2 * rho {
                                x_c.push(x);
                            } else {
                                y_c.push(x);
                            }
                        }
                    }
                }
            }
            AlmostClique {
                id,
                members: members.clone(),
                size_class,
                unrecovered,
                anti_edges,
                anti_edges_complete,
                holey,
                solitary,
                witness,
                helper,
                core,
                s,
                friends,
                x_c,
                y_c,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn size_thresholds() {
        assert_eq!(classify_size(33, 32, 3), SizeClass::Large);
        assert_eq!(classify_size(30, 32, 3), SizeClass::Small);
        assert_eq!(classify_size(32, 32, 3), SizeClass::Critical);
        assert_eq!(classify_size(31, 32, 3), SizeClass::Critical);
    }

    #[test]
    fn solitary_case_split() {
        assert_eq!(detect_solitary(&[]), None);
        assert_eq!(detect_solitary(&[(0, 1), (0, 2)]), None);
        assert_eq!(detect_solitary(&[(0, 1), (2, 3)]), Some(SolitaryWitness::AntiMatching([(0, 1), (2, 3)])));
        assert_eq!(detect_solitary(&[(0, 1), (0, 2), (1, 2)]), Some(SolitaryWitness::IndependentSet([0, 1, 2])));
    }

    /// K on 0..8, plus vertex 8 adjacent to 0..4 and vertex 9 adjacent to 3..7.
    fn two_friends() -> Graph {
        let mut edges = Vec::new();
        for a in 0..8 {
            for b in a + 1..8 {
                edges.push((a, b));
            }
        }
        for a in 0..5 {
            edges.push((a, 8));
        }
        for a in 3..8 {
            edges.push((a, 9));
        }
        Graph::from_edges(10, 9, edges).unwrap()
    }

    #[test]
    fn popular_needs_shared_neighbour_and_distinct_anti_neighbours() {
        let g = two_friends();
        let known = KnownNeighborhoods::from_graph(&g);
        let core: Vec<u32> = (0..8).collect();
        let counts = core_counts(&core, &known).unwrap();
        assert_eq!(counts, vec![(8, 5), (9, 5)]);
        let fc = classify_friends(&core, &counts, &known, 8, 2.0);
        assert_eq!(fc.friends, vec![(8, 5), (9, 5)]);
        let w = fc.popular.unwrap();
        assert_eq!((w.x1, w.x2, w.w), (8, 9, 3));
        assert!(w.z1 != w.z2 && w.z1 >= 5 && w.z2 <= 2);
        assert!(!fc.friendly);
        // A vertex adjacent to the whole core is not a friend.
        let full = vec![(8, 8)];
        assert!(classify_friends(&core, &full, &known, 8, 2.0).friends.is_empty());
    }
}
