//! Per-level recovery sketches.
//!
//! Level `i` has budget `s_i = 2^i ρ` and samples each vertex with
//! probability `min(1, 4ρ/s_i)`. Every sampled vertex owns `2 s_i`
//! Vandermonde rows and `t` fingerprint rows, initialised with its own
//! column, so after the pass they encode the closed neighbourhood `N[v]`.

use super::config::RunConfig;
use super::StreamError;
use crate::codec::{DecodeError, Reader, Writer};
use crate::field::{choose_prime, fingerprint_add, vandermonde_add, FieldParams};
use crate::rng;

const ABSENT: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub s: usize,
    pub rate: f64,
    /// Sampled vertices in increasing order.
    pub members: Vec<u32>,
    /// Vertex → row block; empty when every vertex is sampled.
    slot: Vec<u32>,
    vand: Vec<u64>,
    fp: Vec<u64>,
    pub fp_seed: u64,
}

impl Level {
    pub fn slot(&self, v: usize) -> Option<usize> {
        if self.slot.is_empty() {
            (v < self.members.len()).then_some(v)
        } else {
            match self.slot[v] {
                ABSENT => None,
                s => Some(s as usize),
            }
        }
    }

    pub fn vand_rows(&self, slot: usize) -> &[u64] {
        &self.vand[slot * 2 * self.s..(slot + 1) * 2 * self.s]
    }

    pub fn fp_rows(&self, slot: usize, t: usize) -> &[u64] {
        &self.fp[slot * t..(slot + 1) * t]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SketchBank {
    pub field: FieldParams,
    pub t: usize,
    pub levels: Vec<Level>,
}

/// Number of levels: `⌈log2(Δ/ρ)⌉ + 1`, at least one.
pub fn level_count(delta: usize, rho: usize) -> usize {
    let mut i = 0;
    while (rho << i) < delta {
        i += 1;
    }
    i + 1
}

impl SketchBank {
    pub fn new(n: usize, delta: usize, cfg: &RunConfig) -> Result<Self, StreamError> {
        let field = choose_prime(n.max(2) as u64, cfg.c_prime)?;
        let t = cfg.t_rows;
        let rho = cfg.rho;
        let mut levels = Vec::new();
        for i in 0..level_count(delta, rho) {
            let s = rho << i;
            let rate = (4.0 * rho as f64 / s as f64).min(1.0);
            let tag = format!("level-{i}");
            let members: Vec<u32> = (0..n as u32).filter(|&v| rng::coin(cfg.seed, &tag, v as u64, rate)).collect();
            let slot = if members.len() == n {
                Vec::new()
            } else {
                let mut slot = vec![ABSENT; n];
                for (k, &v) in members.iter().enumerate() {
                    slot[v as usize] = k as u32;
                }
                slot
            };
            let fp_seed = rng::derive(cfg.seed, "fingerprint-matrix", i as u64);
            let mut level = Level {
                s,
                rate,
                vand: vec![0; members.len() * 2 * s],
                fp: vec![0; members.len() * t],
                members,
                slot,
                fp_seed,
            };
            for k in 0..level.members.len() {
                let v = level.members[k] as usize;
                vandermonde_add(&field, &mut level.vand[k * 2 * s..(k + 1) * 2 * s], v, 1);
                fingerprint_add(&field, fp_seed, &mut level.fp[k * t..(k + 1) * t], v, 1);
            }
            levels.push(level);
        }
        Ok(SketchBank { field, t, levels })
    }

    /// Adds column `v` to every sketch owned by `u`.
    pub fn add_neighbor(&mut self, u: usize, v: usize) {
        let t = self.t;
        for level in &mut self.levels {
            if let Some(k) = level.slot(u) {
                let s2 = 2 * level.s;
                vandermonde_add(&self.field, &mut level.vand[k * s2..(k + 1) * s2], v, 1);
                fingerprint_add(&self.field, level.fp_seed, &mut level.fp[k * t..(k + 1) * t], v, 1);
            }
        }
    }

    /// Exactly `8 · Σ_i |V_i| (2 s_i + t)`.
    pub fn bytes_sketches(&self) -> usize {
        self.levels.iter().map(|l| 8 * l.members.len() * (2 * l.s + self.t)).sum()
    }

    pub fn bytes_index(&self) -> usize {
        self.levels.iter().map(|l| 4 * (l.members.len() + l.slot.len())).sum()
    }

    pub fn write(&self, w: &mut Writer) {
        w.u64(self.field.p());
        w.u64(self.field.n() as u64);
        w.u64(self.t as u64);
        w.u64(self.levels.len() as u64);
        for l in &self.levels {
            w.u64(l.s as u64);
            w.f64(l.rate);
            w.u64(l.fp_seed);
            w.u32s(&l.members);
            w.u64s(&l.vand);
            w.u64s(&l.fp);
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self, DecodeError> {
        let p = r.u64()?;
        let n = r.u64()? as usize;
        let field = FieldParams::new(p, n).map_err(|e| DecodeError(e.to_string()))?;
        let t = r.u64()? as usize;
        let count = r.u64()? as usize;
        let mut levels = Vec::with_capacity(count.min(64));
        for _ in 0..count {
            let s = r.u64()? as usize;
            let rate = r.f64()?;
            let fp_seed = r.u64()?;
            let members = r.u32s()?;
            let vand = r.u64s()?;
            let fp = r.u64s()?;
            if vand.len() != members.len() * 2 * s || fp.len() != members.len() * t {
                return Err(DecodeError("sketch level size mismatch".into()));
            }
            if members.iter().any(|&v| v as usize >= n) || vand.iter().chain(&fp).any(|&x| x >= p) {
                return Err(DecodeError("sketch level out of range".into()));
            }
            let slot = if members.len() == n {
                Vec::new()
            } else {
                let mut slot = vec![ABSENT; n];
                for (k, &v) in members.iter().enumerate() {
                    slot[v as usize] = k as u32;
                }
                slot
            };
            levels.push(Level { s, rate, members, slot, vand, fp, fp_seed });
        }
        Ok(SketchBank { field, t, levels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_geometry() {
        assert_eq!(level_count(64, 3), 6); // 3, 6, 12, 24, 48, 96
        assert_eq!(level_count(3, 3), 1);
        assert_eq!(level_count(4, 3), 2);
        let cfg = RunConfig::desk(1);
        let bank = SketchBank::new(200, 64, &cfg).unwrap();
        let rates: Vec<f64> = bank.levels.iter().map(|l| l.rate).collect();
        assert_eq!(rates, vec![1.0, 1.0, 1.0, 0.5, 0.25, 0.125]);
        assert!(bank.levels[..3].iter().all(|l| l.members.len() == 200));
        let expect: usize = bank.levels.iter().map(|l| 8 * l.members.len() * (2 * l.s + 3)).sum();
        assert_eq!(bank.bytes_sketches(), expect);
    }

    #[test]
    fn own_column_initialisation() {
        let cfg = RunConfig::desk(1);
        let bank = SketchBank::new(50, 20, &cfg).unwrap();
        let l0 = &bank.levels[0];
        let rows = l0.vand_rows(l0.slot(7).unwrap());
        assert_eq!(rows[0], 1);
        assert_eq!(rows[1], 8);
        assert_eq!(rows[2], 64);
    }
}
