//! Constructive list colouring of the two small shapes whose lists have one
//! colour fewer than their degree.
//!
//! Both shapes are a d-clique `K` plus a few outside vertices. The routine
//! first colours one or two outside vertices so that some vertex of `K`
//! ends up with more available colours than uncoloured neighbours, then
//! completes the colouring.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// `K + s1 + s2` with a shared neighbour `v` and distinct non-neighbours `a1`, `a2`.
    CliquePlusPair,
    /// `K + u1 + u2 + u3`, the `u` independent and joined to all of `K`.
    CliquePlusTriple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoosableStats {
    pub shape: Shape,
    /// Which branch of the case analysis ran.
    pub case: &'static str,
    /// Greedy peeling got stuck and the completion fell back to search.
    pub search_fallback: bool,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ChoosableError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// The construction failed; `feasible` is the verdict of a search from scratch.
    #[error("construction failed (exhaustive search says feasible = {feasible})")]
    Failed { feasible: bool },
}

type Colors = Vec<Option<u32>>;

fn has(l: &[u32], c: u32) -> bool {
    l.contains(&c)
}

fn minus<'a>(a: &'a [u32], b: &'a [u32]) -> impl Iterator<Item = u32> + 'a {
    a.iter().copied().filter(move |c| !b.contains(c))
}

fn inter(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().copied().filter(|c| b.contains(c)).collect()
}

/// Colours of `L(x)` not used by coloured neighbours of `x`.
fn avail(g: &Graph, lists: &[Vec<u32>], colors: &Colors, x: usize) -> Vec<u32> {
    lists[x].iter().copied().filter(|&c| g.neighbors(x).iter().all(|&u| colors[u as usize] != Some(c))).collect()
}

/// Backtracking over uncoloured vertices in id order.
fn search(g: &Graph, lists: &[Vec<u32>], colors: &mut Colors) -> bool {
    let Some(x) = (0..g.n()).find(|&x| colors[x].is_none()) else { return true };
    for c in avail(g, lists, colors, x) {
        colors[x] = Some(c);
        if search(g, lists, colors) {
            return true;
        }
    }
    colors[x] = None;
    false
}

/// A proper colouring from the lists by exhaustive search, if one exists.
pub fn exhaustive_list_coloring(g: &Graph, lists: &[Vec<u32>]) -> Option<Vec<u32>> {
    let mut colors = vec![None; g.n()];
    search(g, lists, &mut colors).then(|| colors.into_iter().map(|c| c.expect("complete")).collect())
}

/// Peels vertices with more available colours than uncoloured neighbours
/// and colours them in reverse; falls back to search if peeling stalls.
fn complete(g: &Graph, lists: &[Vec<u32>], colors: &mut Colors) -> Result<bool, ()> {
    let mut left: Vec<usize> = (0..g.n()).filter(|&x| colors[x].is_none()).collect();
    let mut order = Vec::new();
    while !left.is_empty() {
        let pos = left.iter().position(|&x| {
            let open = g.neighbors(x).iter().filter(|&&u| left.contains(&(u as usize))).count();
            avail(g, lists, colors, x).len() > open
        });
        match pos {
            Some(i) => order.push(left.remove(i)),
            None => {
                return if search(g, lists, colors) { Ok(true) } else { Err(()) };
            }
        }
    }
    for &x in order.iter().rev() {
        colors[x] = Some(*avail(g, lists, colors, x).first().ok_or(())?);
    }
    Ok(false)
}

fn is_clique(g: &Graph, vs: &[usize]) -> bool {
    vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.adjacent(a, b)))
}

struct Pair {
    k: Vec<usize>,
    s: [usize; 2],
    a: [usize; 2],
    v: usize,
}

fn find_pair_shape(g: &Graph) -> Option<Pair> {
    let n = g.n();
    for s1 in 0..n {
        for s2 in s1 + 1..n {
            let k: Vec<usize> = (0..n).filter(|&x| x != s1 && x != s2).collect();
            if k.len() < 5 || !is_clique(g, &k) {
                continue;
            }
            if g.degree(s1) < 5 || g.degree(s2) < 5 {
                continue;
            }
            let Some(&v) = k.iter().find(|&&x| g.adjacent(x, s1) && g.adjacent(x, s2)) else { continue };
            let non1: Vec<usize> = k.iter().copied().filter(|&x| !g.adjacent(x, s1)).collect();
            let non2: Vec<usize> = k.iter().copied().filter(|&x| !g.adjacent(x, s2)).collect();
            for &a1 in &non1 {
                if let Some(&a2) = non2.iter().find(|&&a2| a2 != a1) {
                    return Some(Pair { k, s: [s1, s2], a: [a1, a2], v });
                }
            }
        }
    }
    None
}

fn find_triple_shape(g: &Graph) -> Option<(Vec<usize>, [usize; 3])> {
    let n = g.n();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.adjacent(a, b) || g.adjacent(a, c) || g.adjacent(b, c) {
                    continue;
                }
                let k: Vec<usize> = (0..n).filter(|&x| x != a && x != b && x != c).collect();
                let joined = k.iter().all(|&x| g.adjacent(x, a) && g.adjacent(x, b) && g.adjacent(x, c));
                if k.len() >= 6 && joined && is_clique(g, &k) {
                    return Some((k, [a, b, c]));
                }
            }
        }
    }
    None
}

fn pair_case(g: &Graph, lists: &[Vec<u32>], p: &Pair, colors: &mut Colors) -> &'static str {
    let l = |x: usize| lists[x].as_slice();
    let v = p.v;
    let (mut s, mut a) = (p.s, p.a);
    let i = (0..2).find(|&i| !inter(l(s[i]), l(a[i])).is_empty());
    if let Some(i) = i {
        if i == 1 {
            s.swap(0, 1);
            a.swap(0, 1);
        }
        let chi1 = inter(l(s[0]), l(a[0]))[0];
        colors[s[0]] = Some(chi1);
        colors[a[0]] = Some(chi1);
        if !has(l(v), chi1) {
            return "same-colour s1 a1 outside L(v)";
        }
        if let Some(chi2) = inter(l(s[1]), l(a[1])).into_iter().find(|&c| c != chi1) {
            colors[s[1]] = Some(chi2);
            colors[a[1]] = Some(chi2);
            return "same-colour both pairs";
        }
        for x in [s[1], a[1]] {
            if let Some(chi2) = minus(l(x), l(v)).find(|&c| c != chi1) {
                colors[x] = Some(chi2);
                return "same-colour s1 a1, second pair outside L(v)";
            }
        }
        return "case 1 without a second colour";
    }
    // Both pairs have disjoint lists.
    let mut chi1 = None;
    for x in [s[0], a[0]] {
        if let Some(c) = minus(l(x), l(v)).next() {
            colors[x] = Some(c);
            chi1 = Some(c);
            break;
        }
    }
    let Some(chi1) = chi1 else { return "case 2 without a first colour" };
    let outside = |x: usize| -> Vec<u32> { minus(l(x), l(v)).filter(|&c| c != chi1).collect() };
    let Some(x) = [s[1], a[1]].into_iter().find(|&x| !outside(x).is_empty()) else {
        return "case 2 without a second colour";
    };
    let w = p
        .k
        .iter()
        .copied()
        .find(|&w| w != v && w != a[0] && w != a[1] && g.adjacent(w, s[1]) && colors[w].is_none());
    let Some(w) = w else { return "case 2 without a shared neighbour" };
    let cands = outside(x);
    match cands.iter().copied().find(|&c| !has(l(w), c)) {
        Some(chi2) => {
            colors[x] = Some(chi2);
            "case 2, colour x outside L(w)"
        }
        None => {
            colors[w] = Some(cands[0]);
            "case 2, colour w"
        }
    }
}

fn triple_case(lists: &[Vec<u32>], v: usize, u: [usize; 3], colors: &mut Colors) -> &'static str {
    let l = |x: usize| lists[x].as_slice();
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let (ui, uj, uk) = (u[i], u[j], u[k]);
        let shared = inter(l(ui), l(uj));
        if shared.len() < 3 {
            continue;
        }
        if let Some(c) = shared.iter().copied().find(|&c| has(l(uk), c)) {
            for x in [ui, uj, uk] {
                colors[x] = Some(c);
            }
            return "same-colour all three";
        }
        if let Some(c) = shared.iter().copied().find(|&c| !has(l(v), c)) {
            colors[ui] = Some(c);
            colors[uj] = Some(c);
            return "same-colour a pair outside L(v)";
        }
        if let Some(c) = minus(l(uk), l(v)).next() {
            colors[ui] = Some(shared[0]);
            colors[uj] = Some(shared[0]);
            colors[uk] = Some(c);
            return "same-colour a pair, third outside L(v)";
        }
        return "three shared colours without a split";
    }
    let pick = |pair: [usize; 2], colors: &mut Colors| -> Option<usize> {
        for x in pair {
            if let Some(c) = minus(l(x), l(v)).next() {
                colors[x] = Some(c);
                return Some(x);
            }
        }
        None
    };
    let Some(first) = pick([u[0], u[1]], colors) else { return "no first colour outside L(v)" };
    let other = if first == u[0] { u[1] } else { u[0] };
    if pick([other, u[2]], colors).is_none() {
        return "no second colour outside L(v)";
    }
    "two u coloured outside L(v)"
}

/// Colours `q` from `lists` (`lists[x]` for vertex `x`, of size `deg(x) − 1`).
pub fn choosable_color(q: &Graph, lists: &[Vec<u32>]) -> Result<(Vec<u32>, ChoosableStats), ChoosableError> {
    if lists.len() != q.n() {
        return Err(ChoosableError::ShapeMismatch(format!("{} lists for {} vertices", lists.len(), q.n())));
    }
    for (x, l) in lists.iter().enumerate() {
        let mut d = l.clone();
        d.sort_unstable();
        d.dedup();
        if d.len() != l.len() || l.len() + 1 != q.degree(x) {
            return Err(ChoosableError::ShapeMismatch(format!("vertex {x}: list of {} for degree {}", l.len(), q.degree(x))));
        }
    }
    let mut colors: Colors = vec![None; q.n()];
    let (shape, case) = if let Some(p) = find_pair_shape(q) {
        (Shape::CliquePlusPair, pair_case(q, lists, &p, &mut colors))
    } else if let Some((k, u)) = find_triple_shape(q) {
        (Shape::CliquePlusTriple, triple_case(lists, k[0], u, &mut colors))
    } else {
        return Err(ChoosableError::ShapeMismatch("neither clique plus pair nor clique plus triple".into()));
    };
    match complete(q, lists, &mut colors) {
        Ok(search_fallback) => {
            let out: Vec<u32> = colors.into_iter().map(|c| c.expect("complete")).collect();
            debug_assert!(q.edges().all(|(a, b)| out[a] != out[b]));
            Ok((out, ChoosableStats { shape, case, search_fallback }))
        }
        Err(()) => Err(ChoosableError::Failed { feasible: exhaustive_list_coloring(q, lists).is_some() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique_plus(d: usize, extra: &[(usize, usize)]) -> Graph {
        let mut e = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                e.push((a, b));
            }
        }
        e.extend_from_slice(extra);
        Graph::from_edges(d + 3, d + 3, e).unwrap()
    }

    fn check(g: &Graph, lists: &[Vec<u32>], out: &[u32]) {
        for (x, &c) in out.iter().enumerate() {
            assert!(lists[x].contains(&c));
        }
        assert!(g.edges().all(|(a, b)| out[a] != out[b]));
    }

    #[test]
    fn pair_shape_at_five_with_identical_lists() {
        // K = 0..5, s1 = 5 misses 0, s2 = 6 misses 1, s1 ~ s2.
        let mut e = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                e.push((a, b));
            }
        }
        e.extend([(5, 1), (5, 2), (5, 3), (5, 4), (6, 0), (6, 2), (6, 3), (6, 4), (5, 6)]);
        let g = Graph::from_edges(7, 7, e).unwrap();
        let lists: Vec<Vec<u32>> = (0..7).map(|x| (1..g.degree(x) as u32).collect()).collect();
        let (out, stats) = choosable_color(&g, &lists).unwrap();
        assert_eq!(stats.shape, Shape::CliquePlusPair);
        check(&g, &lists, &out);
    }

    #[test]
    fn triple_with_disjoint_u_lists() {
        let d = 6;
        let joins: Vec<(usize, usize)> = (0..d).flat_map(|k| [(k, d), (k, d + 1), (k, d + 2)]).collect();
        let g = clique_plus(d, &joins);
        let mut lists: Vec<Vec<u32>> = (0..d).map(|_| (1..=d as u32 + 1).collect()).collect();
        lists.push((1..=5).collect());
        lists.push((6..=10).collect());
        lists.push((11..=15).collect());
        let (out, stats) = choosable_color(&g, &lists).unwrap();
        assert_eq!(stats.case, "two u coloured outside L(v)");
        check(&g, &lists, &out);
        // u1's list lies inside L(v), so the other two take outside colours.
        assert!(!lists[0].contains(&out[d + 1]) && !lists[0].contains(&out[d + 2]));
    }

    #[test]
    fn triple_at_five_is_rejected() {
        let d = 5;
        let joins: Vec<(usize, usize)> = (0..d).flat_map(|k| [(k, d), (k, d + 1), (k, d + 2)]).collect();
        let g = clique_plus(d, &joins);
        let lists: Vec<Vec<u32>> = (0..g.n()).map(|x| (1..g.degree(x) as u32).collect()).collect();
        assert!(matches!(choosable_color(&g, &lists), Err(ChoosableError::ShapeMismatch(_))));
    }
}
