//! Recovering `A(v)` and `E(v)` for dense vertices after the pass.
//!
//! For `v` in clique `C`, the level-`i` sketch holds `Φ_i 1_{N[v]}`, so
//! `Φ_i 1_C − y_i(v)` sketches a vector that is `+1` on `A(v)`, `−1` on
//! `E(v)` and zero elsewhere. Levels are tried from the smallest budget up;
//! the first decode whose fingerprint and sign pattern both check out wins.

use std::collections::BTreeSet;

use serde::Serialize;

use super::acd::Decomposition;
use super::bank::SketchBank;
use crate::field::{decode_rows, fingerprint_add, fingerprint_matches, vandermonde_add};

/// A certified anti-neighbourhood and external neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recovered {
    pub level: u32,
    /// `C − N[v]`, sorted.
    pub anti: Vec<u32>,
    /// `N(v) − C`, sorted.
    pub ext: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolitaryHelper {
    /// Disjoint anti-edges `u1 v1`, `u2 v2`; `N(u1)`, `N(u2)` are known.
    AntiMatching { u1: u32, v1: u32, u2: u32, v2: u32 },
    /// Independent `{u1, u2, v}`; `N(u1)`, `N(u2)` are known.
    IndependentSet { u1: u32, u2: u32, v: u32 },
}

/// `Φ_i 1_C` and `Φ^R_i 1_C` for every level.
fn clique_sketches(bank: &SketchBank, members: &[u32]) -> Vec<(Vec<u64>, Vec<u64>)> {
    bank.levels
        .iter()
        .map(|l| {
            let mut vand = vec![0u64; 2 * l.s];
            let mut fp = vec![0u64; bank.t];
            for &c in members {
                vandermonde_add(&bank.field, &mut vand, c as usize, 1);
                fingerprint_add(&bank.field, l.fp_seed, &mut fp, c as usize, 1);
            }
            (vand, fp)
        })
        .collect()
}

fn recover_one(
    bank: &SketchBank,
    dec: &Decomposition,
    clique: usize,
    sketches: &[(Vec<u64>, Vec<u64>)],
    v: usize,
) -> Option<Recovered> {
    let f = &bank.field;
    let minus_one = f.p() - 1;
    for (i, level) in bank.levels.iter().enumerate() {
        let Some(slot) = level.slot(v) else { continue };
        let (phi, fp) = &sketches[i];
        let x: Vec<u64> = phi.iter().zip(level.vand_rows(slot)).map(|(&a, &b)| f.sub(a, b)).collect();
        let Ok(cand) = decode_rows(f, level.s, &x) else { continue };
        let z: Vec<u64> = fp.iter().zip(level.fp_rows(slot, bank.t)).map(|(&a, &b)| f.sub(a, b)).collect();
        if !fingerprint_matches(f, level.fp_seed, &z, &cand) {
            continue;
        }
        let mut anti = Vec::new();
        let mut ext = Vec::new();
        let mut ok = true;
        for &(j, c) in &cand {
            let inside = dec.clique_of(j) == Some(clique);
            if j == v {
                ok = false;
            } else if inside && c == 1 {
                anti.push(j as u32);
            } else if !inside && c == minus_one {
                ext.push(j as u32);
            } else {
                ok = false;
            }
        }
        if ok {
            return Some(Recovered { level: i as u32, anti, ext });
        }
    }
    None
}

/// Attempts recovery for every dense vertex.
pub fn recover_dense_neighborhoods(bank: &SketchBank, dec: &Decomposition) -> Vec<Option<Recovered>> {
    let mut out = vec![None; dec.n()];
    for (ci, members) in dec.cliques.iter().enumerate() {
        let sketches = clique_sketches(bank, members);
        for &v in members {
            out[v as usize] = recover_one(bank, dec, ci, &sketches, v as usize);
        }
    }
    out
}

/// Anti-edges of `G[C]` visible through recovered members, as sorted pairs.
pub fn known_anti_edges(members: &[u32], recovered: &[Option<Recovered>]) -> Vec<(u32, u32)> {
    let mut set = BTreeSet::new();
    for &u in members {
        if let Some(r) = &recovered[u as usize] {
            for &w in &r.anti {
                set.insert((u.min(w), u.max(w)));
            }
        }
    }
    set.into_iter().collect()
}

/// Searches the known anti-edges of `C` for a helper structure.
///
/// Tries the two vertices with the most known anti-neighbours first (they
/// are the ones whose own neighbourhoods are typically too large to decode),
/// pairing each with a recovered anti-neighbour; then any two disjoint
/// anti-edges with a recovered endpoint each; then an independent triple
/// with two recovered members.
pub fn find_solitary_helper(members: &[u32], recovered: &[Option<Recovered>]) -> Option<SolitaryHelper> {
    let known = |v: u32| recovered[v as usize].is_some();
    let anti = known_anti_edges(members, recovered);
    if anti.is_empty() {
        return None;
    }
    let mut adj: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
    for &(a, b) in &anti {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut by_degree: Vec<(u32, usize)> = adj.iter().map(|(&v, l)| (v, l.len())).collect();
    by_degree.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    if by_degree.len() >= 2 {
        let (v0, v1) = (by_degree[0].0, by_degree[1].0);
        for &u0 in adj[&v0].iter().filter(|&&u| known(u) && u != v1) {
            if let Some(&u1) = adj[&v1].iter().find(|&&u| known(u) && u != v0 && u != u0) {
                return Some(SolitaryHelper::AntiMatching { u1: u0, v1: v0, u2: u1, v2: v1 });
            }
        }
    }
    let orient = |(a, b): (u32, u32)| if known(a) { Some((a, b)) } else if known(b) { Some((b, a)) } else { None };
    for (i, &e1) in anti.iter().enumerate() {
        let Some((u1, v1)) = orient(e1) else { continue };
        for &e2 in &anti[i + 1..] {
            if e2.0 == e1.0 || e2.0 == e1.1 || e2.1 == e1.0 || e2.1 == e1.1 {
                continue;
            }
            if let Some((u2, v2)) = orient(e2) {
                return Some(SolitaryHelper::AntiMatching { u1, v1, u2, v2 });
            }
        }
    }
    for &(a, b) in &anti {
        for &c in &adj[&a] {
            if c > b && anti.binary_search(&(b.min(c), b.max(c))).is_ok() {
                let trio = [a, b, c];
                let rec: Vec<u32> = trio.iter().copied().filter(|&x| known(x)).collect();
                if rec.len() >= 2 {
                    let v = *trio.iter().find(|&&x| x != rec[0] && x != rec[1]).unwrap();
                    return Some(SolitaryHelper::IndependentSet { u1: rec[0], u2: rec[1], v });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(anti: &[u32]) -> Option<Recovered> {
        Some(Recovered { level: 0, anti: anti.to_vec(), ext: vec![] })
    }

    #[test]
    fn helper_from_two_disjoint_anti_edges() {
        // C = 0..6, anti-edges {0,1} and {2,3}; 0 and 3 unrecovered.
        let mut r = vec![rec(&[]); 6];
        r[0] = None;
        r[3] = None;
        r[1] = rec(&[0]);
        r[2] = rec(&[3]);
        let members: Vec<u32> = (0..6).collect();
        match find_solitary_helper(&members, &r).unwrap() {
            SolitaryHelper::AntiMatching { u1, v1, u2, v2 } => {
                let mut got = [(u1, v1), (u2, v2)];
                got.sort();
                assert_eq!(got, [(1, 0), (2, 3)]);
            }
            h => panic!("unexpected {h:?}"),
        }
    }

    #[test]
    fn helper_from_independent_triple() {
        let mut r = vec![rec(&[]); 6];
        r[0] = rec(&[1, 2]);
        r[1] = rec(&[0, 2]);
        r[2] = None;
        let members: Vec<u32> = (0..6).collect();
        assert_eq!(find_solitary_helper(&members, &r), Some(SolitaryHelper::IndependentSet { u1: 0, u2: 1, v: 2 }));
    }

    #[test]
    fn star_has_no_helper() {
        let mut r = vec![rec(&[]); 6];
        r[0] = rec(&[1, 2, 3]);
        r[1] = rec(&[0]);
        r[2] = rec(&[0]);
        r[3] = rec(&[0]);
        let members: Vec<u32> = (0..6).collect();
        assert_eq!(find_solitary_helper(&members, &r), None);
    }
}
