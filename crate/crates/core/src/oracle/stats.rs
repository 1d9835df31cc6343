//! Monte-Carlo frequencies of the slack-generation events.
//!
//! Every family is built so that a larger parameter only removes edges among
//! the vertices of a smaller one, and trial `i` uses the same seed for every
//! parameter. Removing edges can only keep more proposals, so event counts
//! are monotone trial by trial, not just in expectation.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, PartialColoring};
use crate::pipeline::slack::slack_generation;
use crate::rng;

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum SlackFamily {
    /// `n` isolated vertices; every active vertex should keep its colour.
    Edgeless { n: usize },
    /// `K_{Δ+1}`; at most `Δ/5` of it ends up coloured.
    Clique { delta: usize },
    /// A vertex whose neighbourhood is `K_Δ` minus `anti` disjoint pairs;
    /// the event is that some missing pair is coloured alike.
    SparseNeighborhood { delta: usize, anti: usize },
    /// `K_{Δ+1}` minus a matching; the event is that at least two matched
    /// vertices see a same-coloured pair among their neighbours.
    CliqueMatching { delta: usize, matching: usize },
    /// `K_{Δ−1}` where `triples` members each have two private outside
    /// neighbours; the event is that some outside pair is coloured alike.
    Triples { delta: usize, triples: usize },
}

impl SlackFamily {
    pub fn delta(&self) -> usize {
        match *self {
            SlackFamily::Edgeless { .. } => 1,
            SlackFamily::Clique { delta }
            | SlackFamily::SparseNeighborhood { delta, .. }
            | SlackFamily::CliqueMatching { delta, .. }
            | SlackFamily::Triples { delta, .. } => delta,
        }
    }

    /// The monotone parameter (0 for families without one).
    pub fn param(&self) -> usize {
        match *self {
            SlackFamily::Edgeless { .. } | SlackFamily::Clique { .. } => 0,
            SlackFamily::SparseNeighborhood { anti, .. } => anti,
            SlackFamily::CliqueMatching { matching, .. } => matching,
            SlackFamily::Triples { triples, .. } => triples,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SlackFamily::Edgeless { .. } => "edgeless",
            SlackFamily::Clique { .. } => "clique",
            SlackFamily::SparseNeighborhood { .. } => "sparse-neighborhood",
            SlackFamily::CliqueMatching { .. } => "clique-matching",
            SlackFamily::Triples { .. } => "triples",
        }
    }

    pub fn event(&self) -> &'static str {
        match self {
            SlackFamily::Edgeless { .. } => "every active vertex keeps its colour",
            SlackFamily::Clique { .. } => "coloured members <= delta/5",
            SlackFamily::SparseNeighborhood { .. } => "a missing pair is coloured alike",
            SlackFamily::CliqueMatching { .. } => ">= 2 matched vertices gain slack",
            SlackFamily::Triples { .. } => "some outside pair is coloured alike",
        }
    }

    pub fn graph(&self) -> Graph {
        let clique_minus = |size: usize, offset: usize, missing: &dyn Fn(usize, usize) -> bool| {
            let mut e = Vec::new();
            for i in 0..size {
                for j in i + 1..size {
                    if !missing(i, j) {
                        e.push((offset + i, offset + j));
                    }
                }
            }
            e
        };
        let paired = |k: usize| move |i: usize, j: usize| j == i + 1 && i % 2 == 0 && i / 2 < k;
        match *self {
            SlackFamily::Edgeless { n } => Graph::empty(n, 1),
            SlackFamily::Clique { delta } => Graph::complete(delta + 1),
            SlackFamily::SparseNeighborhood { delta, anti } => {
                assert!(2 * anti <= delta);
                let mut e = clique_minus(delta, 1, &paired(anti));
                e.extend((1..=delta).map(|u| (0, u)));
                Graph::from_edges(delta + 1, delta, e).expect("valid family")
            }
            SlackFamily::CliqueMatching { delta, matching } => {
                assert!(2 * matching <= delta + 1);
                Graph::from_edges(delta + 1, delta, clique_minus(delta + 1, 0, &paired(matching))).expect("valid family")
            }
            SlackFamily::Triples { delta, triples } => {
                assert!(triples < delta);
                let k = delta - 1;
                let mut e = clique_minus(k, 0, &|_, _| false);
                for i in 0..triples {
                    e.push((i, k + 2 * i));
                    e.push((i, k + 2 * i + 1));
                }
                Graph::from_edges(k + 2 * triples, delta, e).expect("valid family")
            }
        }
    }

    /// Whether the event holds, and the count it is built on.
    fn observe(&self, g: &Graph, c: &PartialColoring, active: &[bool]) -> (bool, usize) {
        let same = |a: usize, b: usize| c.get(a).is_some() && c.get(a) == c.get(b);
        match *self {
            SlackFamily::Edgeless { n } => {
                let kept = (0..n).filter(|&v| !active[v] || c.get(v).is_some()).count();
                (kept == n, kept)
            }
            SlackFamily::Clique { delta } => {
                let k = c.colored_count();
                (5 * k <= delta, k)
            }
            SlackFamily::SparseNeighborhood { anti, .. } => {
                let k = (0..anti).filter(|&i| same(1 + 2 * i, 2 + 2 * i)).count();
                (k > 0, k)
            }
            SlackFamily::CliqueMatching { matching, .. } => {
                let hit: Vec<usize> = (0..matching).filter(|&i| same(2 * i, 2 * i + 1)).collect();
                // A matched vertex gains slack from any same-coloured pair other
                // than its own; its own pair is not in its neighbourhood.
                let gaining = match hit.len() {
                    0 => 0,
                    1 => 2 * matching - 2,
                    _ => 2 * matching,
                };
                debug_assert!(hit.iter().all(|&i| !g.adjacent(2 * i, 2 * i + 1)));
                (gaining >= 2, gaining)
            }
            SlackFamily::Triples { delta, triples } => {
                let k0 = delta - 1;
                let k = (0..triples).filter(|&i| same(k0 + 2 * i, k0 + 2 * i + 1)).count();
                (k > 0, k)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    #[serde(flatten)]
    pub family: SlackFamily,
    pub event: String,
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub lo: f64,
    pub hi: f64,
    /// Mean of the per-trial count behind the event.
    pub mean_count: f64,
}

/// Wilson score interval for `hits` successes out of `trials`.
pub fn wilson(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Runs slack generation `trials` times on one family with `q = Δ−1`
/// colours (at least one).
pub fn slack_statistics(family: SlackFamily, trials: u64, seed: u64, p_sg: f64) -> StatRow {
    let g = family.graph();
    let q = family.delta().saturating_sub(1).max(1);
    let mut hits = 0;
    let mut total = 0usize;
    for t in 0..trials {
        let (c, active) = slack_generation(&g, q, p_sg, rng::derive(seed, "stats-trial", t));
        let (ok, count) = family.observe(&g, &c, &active);
        hits += ok as u64;
        total += count;
    }
    let (lo, hi) = wilson(hits, trials, Z99);
    StatRow {
        family,
        event: family.event().to_string(),
        trials,
        hits,
        frequency: if trials == 0 { 0.0 } else { hits as f64 / trials as f64 },
        lo,
        hi,
        mean_count: if trials == 0 { 0.0 } else { total as f64 / trials as f64 },
    }
}

/// The grid reported by `stats` and frozen in the regression fixture.
pub fn standard_families(rho: usize) -> Vec<SlackFamily> {
    let mut f = vec![
        SlackFamily::Edgeless { n: 100 },
        SlackFamily::Clique { delta: 19 },
        SlackFamily::Clique { delta: 50 },
    ];
    f.extend([0, 5, 10, 20].map(|anti| SlackFamily::SparseNeighborhood { delta: 50, anti }));
    f.extend([rho, 2 * rho, 4 * rho, 8 * rho].map(|matching| SlackFamily::CliqueMatching { delta: 50, matching }));
    f.extend([1, 4, 16, 32].map(|triples| SlackFamily::Triples { delta: 50, triples }));
    f
}

pub fn stats_table(rows: &[StatRow]) -> String {
    let mut s = format!("{:<20} {:>6} {:>7} {:>7} {:>9} {:>9} {:>9} {:>9}  event\n", "family", "delta", "param", "trials", "hits", "freq", "lo99", "hi99");
    for r in rows {
        s += &format!(
            "{:<20} {:>6} {:>7} {:>7} {:>9} {:>9.5} {:>9.5} {:>9.5}  {}\n",
            r.family.name(),
            r.family.delta(),
            r.family.param(),
            r.trials,
            r.hits,
            r.frequency,
            r.lo,
            r.hi,
            r.event
        );
    }
    s
}

/// Least-squares slope of `mean_count` against `param` over rows of one family.
pub fn fitted_slope(rows: &[StatRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.family.param() as f64).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = rows.iter().map(|r| r.mean_count).sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(rows).map(|(x, r)| (x - mx) * (r.mean_count - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}


/// Reference frequencies committed after a calibration run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatFixture {
    pub seed: u64,
    pub trials: u64,
    pub p_sg: f64,
    pub rho: usize,
    pub rows: Vec<StatRow>,
}

impl StatFixture {
    pub fn calibrate(seed: u64, trials: u64, p_sg: f64, rho: usize) -> Self {
        let rows = standard_families(rho).into_iter().map(|f| slack_statistics(f, trials, seed, p_sg)).collect();
        StatFixture { seed, trials, p_sg, rho, rows }
    }
}
