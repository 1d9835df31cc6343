//! Experiment plumbing shared by the CLI, the benches and the acceptance
//! suite: reproducible experiment specs and the memory-scaling run.

use serde::{Deserialize, Serialize};

use crate::graph::gen_random_graph;
use crate::stream::{RunConfig, SketchBank, StreamError, StreamState};

/// Everything needed to rerun an experiment; `(spec, seed)` fixes the output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub command: String,
    pub input: Option<String>,
    /// Generator description when there is no input file, e.g. `planted:delta=32`.
    pub generator: Option<String>,
    /// `key=value` overrides applied on top of the mode defaults.
    pub overrides: Vec<(String, String)>,
    pub out_dir: Option<String>,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemPoint {
    pub n: usize,
    pub edges: u64,
    pub peak_total: usize,
    pub bytes_sketches: usize,
    /// `8 · Σ_i |V_i| (2 s_i + t)` recounted from level membership.
    pub sketch_identity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemReport {
    pub delta: usize,
    pub avg_degree: f64,
    pub points: Vec<MemPoint>,
    /// Least-squares slope of `log peak` against `log n`.
    pub slope: Option<f64>,
}

/// Recounts the sketch words level by level through the public slot map.
pub fn sketch_identity(bank: &SketchBank, n: usize) -> usize {
    bank.levels
        .iter()
        .map(|l| {
            let sampled = (0..n).filter(|&v| l.slot(v).is_some()).count();
            8 * sampled * (2 * l.s + bank.t)
        })
        .sum()
}

pub fn log_log_slope(xy: &[(f64, f64)]) -> Option<f64> {
    if xy.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = xy.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Runs the pass on a random graph of average degree `avg_degree` at every
/// size and fits the scaling of the peak footprint.
pub fn bench_memory(sizes: &[usize], delta: usize, avg_degree: f64, cfg: &RunConfig) -> Result<MemReport, StreamError> {
    let mut points = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let g = gen_random_graph(n, delta, (avg_degree / n as f64).min(1.0), cfg.seed);
        let mut st = StreamState::new(n, delta, cfg.clone())?;
        for (u, v) in g.edges() {
            st.process_edge(u, v)?;
        }
        let space = st.space_report();
        let identity = st.bank().map_or(0, |b| sketch_identity(b, n));
        points.push(MemPoint {
            n,
            edges: st.edges_seen(),
            peak_total: space.peak_total,
            bytes_sketches: space.bytes_sketches,
            sketch_identity: identity,
        });
    }
    let slope = log_log_slope(&points.iter().map(|p| (p.n as f64, p.peak_total as f64)).collect::<Vec<_>>());
    Ok(MemReport { delta, avg_degree, points, slope })
}

impl MemReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("delta {} avg_degree {}\n{:>8} {:>10} {:>12} {:>14} {:>14}\n", self.delta, self.avg_degree, "n", "edges", "peak_bytes", "sketch_bytes", "identity");
        for p in &self.points {
            s += &format!("{:>8} {:>10} {:>12} {:>14} {:>14}\n", p.n, p.edges, p.peak_total, p.bytes_sketches, p.sketch_identity);
        }
        match self.slope {
            Some(k) => s += &format!("slope {k:.4}\n"),
            None => s += "slope n/a (single size)\n",
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((log_log_slope(&pts).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(log_log_slope(&pts[..1]), None);
    }

    #[test]
    fn single_size_has_no_fit() {
        let r = bench_memory(&[512], 32, 8.0, &RunConfig::desk(1)).unwrap();
        assert_eq!(r.slope, None);
        assert_eq!(r.points[0].bytes_sketches, r.points[0].sketch_identity);
    }
}
