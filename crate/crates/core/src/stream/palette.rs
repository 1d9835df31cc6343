//! Colour lists sampled before the pass.

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use super::config::{Mode, RunConfig};
use super::StreamError;
use crate::codec::{DecodeError, Reader, Writer};
use crate::rng;

/// Which pre-sampled list a colour was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum ListId {
    L2,
    L3,
    L4,
    L5,
    L6,
}

impl ListId {
    pub fn index(self) -> usize {
        self as usize + 2
    }
}

/// Per-vertex sorted lists packed into one array.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Packed {
    offsets: Vec<u32>,
    data: Vec<u32>,
}

impl Packed {
    fn from_lists(lists: impl Iterator<Item = Vec<u32>>) -> Self {
        let mut p = Packed { offsets: vec![0], data: Vec::new() };
        for l in lists {
            p.data.extend_from_slice(&l);
            p.offsets.push(p.data.len() as u32);
        }
        p
    }

    pub fn get(&self, v: usize) -> &[u32] {
        &self.data[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    fn words(&self) -> usize {
        self.offsets.len() + self.data.len()
    }

    fn write(&self, w: &mut Writer) {
        w.u32s(&self.offsets);
        w.u32s(&self.data);
    }

    fn read(r: &mut Reader) -> Result<Self, DecodeError> {
        let offsets = r.u32s()?;
        let data = r.u32s()?;
        let ok = offsets.first() == Some(&0)
            && offsets.windows(2).all(|w| w[0] <= w[1])
            && offsets.last().map(|&e| e as usize) == Some(data.len());
        if !ok {
            return Err(DecodeError("inconsistent list offsets".into()));
        }
        Ok(Packed { offsets, data })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaletteLists {
    q: usize,
    l2: Vec<u32>,
    lists: [Packed; 4],
    union: Packed,
}

/// Bernoulli(rate) subset of `1..=q` by geometric skipping.
fn bernoulli_subset(q: usize, rate: f64, r: &mut impl Rng) -> Vec<u32> {
    if rate >= 1.0 {
        return (1..=q as u32).collect();
    }
    if rate <= 0.0 || q == 0 {
        return Vec::new();
    }
    let geo = Geometric::new(rate).expect("rate in (0, 1)");
    let mut out = Vec::new();
    let mut pos: u64 = 0;
    loop {
        pos += geo.sample(r) + 1;
        if pos > q as u64 {
            return out;
        }
        out.push(pos as u32);
    }
}

pub fn sample_palettes(n: usize, delta: usize, cfg: &RunConfig) -> Result<PaletteLists, StreamError> {
    if delta < 2 {
        return Err(StreamError::DegenerateRates(format!("delta = {delta} leaves no colours")));
    }
    if cfg.mode == Mode::Paper && (cfg.rho as f64).powi(3) >= delta as f64 {
        return Err(StreamError::DegenerateRates(format!(
            "rho^3 = {:.3e} >= delta = {delta}; use the exact fallback",
            (cfg.rho as f64).powi(3)
        )));
    }
    Ok(sample_unchecked(n, delta, cfg))
}

pub(crate) fn sample_unchecked(n: usize, delta: usize, cfg: &RunConfig) -> PaletteLists {
    let q = cfg.q(delta);
    let rates = cfg.list_rates(delta);
    let mut l2 = Vec::with_capacity(n);
    let mut per: [Vec<Vec<u32>>; 4] = Default::default();
    for v in 0..n {
        let mut r = rng::rng_for(cfg.seed, "palette", v as u64);
        l2.push(if q == 0 { 0 } else { r.random_range(1..=q as u32) });
        for (i, rate) in rates.iter().enumerate() {
            per[i].push(bernoulli_subset(q, *rate, &mut r));
        }
    }
    let unions = (0..n).map(|v| {
        let mut u: Vec<u32> = per.iter().flat_map(|l| l[v].iter().copied()).collect();
        if q > 0 {
            u.push(l2[v]);
        }
        u.sort_unstable();
        u.dedup();
        u
    });
    let union = Packed::from_lists(unions);
    let lists = per.map(|l| Packed::from_lists(l.into_iter()));
    PaletteLists { q, l2, lists, union }
}

impl PaletteLists {
    /// No colours at all; used by the store-everything fallback.
    pub fn empty(n: usize, q: usize) -> Self {
        let none = || Packed::from_lists((0..n).map(|_| Vec::new()));
        PaletteLists { q, l2: vec![0; n], lists: [none(), none(), none(), none()], union: none() }
    }

    pub fn n(&self) -> usize {
        self.l2.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn l2(&self, v: usize) -> u32 {
        self.l2[v]
    }

    /// The sorted list `which` of `v`; L2 is a one-element slice.
    pub fn list(&self, which: ListId, v: usize) -> &[u32] {
        match which {
            ListId::L2 => std::slice::from_ref(&self.l2[v]),
            ListId::L3 => self.lists[0].get(v),
            ListId::L4 => self.lists[1].get(v),
            ListId::L5 => self.lists[2].get(v),
            ListId::L6 => self.lists[3].get(v),
        }
    }

    pub fn contains(&self, which: ListId, v: usize, c: u32) -> bool {
        self.list(which, v).binary_search(&c).is_ok()
    }

    pub fn union(&self, v: usize) -> &[u32] {
        self.union.get(v)
    }

    /// Whether the union lists of `u` and `v` share a colour.
    pub fn intersect(&self, u: usize, v: usize) -> bool {
        let (a, b) = (self.union(u), self.union(v));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Live 32-bit words times four.
    pub fn bytes(&self) -> usize {
        4 * (self.l2.len() + self.lists.iter().map(Packed::words).sum::<usize>() + self.union.words())
    }

    pub fn write(&self, w: &mut Writer) {
        w.u64(self.q as u64);
        w.u32s(&self.l2);
        for l in &self.lists {
            l.write(w);
        }
        self.union.write(w);
    }

    pub fn read(r: &mut Reader) -> Result<Self, DecodeError> {
        let q = r.u64()? as usize;
        let l2 = r.u32s()?;
        let lists = [Packed::read(r)?, Packed::read(r)?, Packed::read(r)?, Packed::read(r)?];
        let union = Packed::read(r)?;
        Ok(PaletteLists { q, l2, lists, union })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamped_rates_give_full_lists() {
        let mut cfg = RunConfig::desk(1);
        cfg.rate_override[3] = Some(1.0);
        let p = sample_palettes(5, 20, &cfg).unwrap();
        for v in 0..5 {
            assert_eq!(p.list(ListId::L6, v), (1..=19).collect::<Vec<u32>>().as_slice());
            let l2 = p.l2(v);
            assert!((1..=19).contains(&l2));
            assert!(p.union(v).binary_search(&l2).is_ok());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = RunConfig::desk(3);
        assert_eq!(sample_palettes(100, 64, &cfg).unwrap(), sample_palettes(100, 64, &cfg).unwrap());
        assert_ne!(sample_palettes(100, 64, &cfg).unwrap(), sample_palettes(100, 64, &RunConfig::desk(4)).unwrap());
    }

    #[test]
    fn mean_list_size_matches_rate() {
        let mut cfg = RunConfig::desk(7);
        cfg.rho = 10;
        cfg.rate_scale = [1.0; 4];
        cfg.rate_override = [None, None, Some(0.0), Some(0.0)];
        let n = 10_000;
        let p = sample_unchecked(n, 1_000_000, &cfg);
        let mean = (0..n).map(|v| p.list(ListId::L4, v).len()).sum::<usize>() as f64 / n as f64;
        assert!((mean - 10.0).abs() < 0.5, "mean |L4| = {mean}");
    }

    #[test]
    fn paper_mode_rejects_degenerate_rates() {
        let cfg = RunConfig::paper(100, 0);
        assert!(matches!(sample_palettes(100, 64, &cfg), Err(StreamError::DegenerateRates(_))));
    }

    #[test]
    fn serialisation_round_trip() {
        let p = sample_palettes(30, 40, &RunConfig::desk(2)).unwrap();
        let bytes = p.to_bytes();
        assert_eq!(PaletteLists::read(&mut Reader::new(&bytes)).unwrap(), p);
    }
}
