use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// The asymptotic constants. At any Δ that fits in memory this means the
    /// store-everything fallback.
    Paper,
    /// Constants scaled so that every pipeline step runs at Δ in the tens.
    Desk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AcdMode {
    /// Anchor-sampled common-neighbour estimates, computed from the pass.
    Estimator,
    /// Exact counts from the full graph; for tests that isolate later stages.
    Oracle,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("line {0}: expected `key = value`")]
    Syntax(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub epsilon: f64,
    pub rho: usize,
    pub alpha: f64,
    pub eta: f64,
    /// Field modulus is the smallest prime ≥ n^c_prime.
    pub c_prime: u32,
    /// Fingerprint rows per sketch.
    pub t_rows: usize,
    pub p_rt: f64,
    pub p_sg: f64,
    /// `None` means 1/ρ.
    pub p_ds: Option<f64>,
    /// Anchor-rate constant for the clustering estimator.
    pub beta: f64,
    pub acd_mode: AcdMode,
    /// Δ below this stores every edge and colours exactly. `None` means 2αρ³.
    pub fallback_delta: Option<usize>,
    /// A clique is holey once it has `holey_factor · ε · Δ` anti-edges.
    pub holey_factor: f64,
    pub retry_budget: usize,
    pub check_duplicates: bool,
    /// Node budget of the exact colouring search in fallback mode.
    pub exact_budget: u64,
    /// Multipliers on the base rates ρ/Δ, ρ/Δ, ρ²/Δ, ρ³/Δ of L3..L6.
    pub rate_scale: [f64; 4],
    /// Explicit rates for L3..L6, overriding the scaled formula.
    pub rate_override: [Option<f64>; 4],
    pub anchor_rate: Option<f64>,
}

impl RunConfig {
    pub fn desk(seed: u64) -> Self {
        RunConfig {
            mode: Mode::Desk,
            seed,
            epsilon: 0.75,
            rho: 3,
            alpha: 1.0,
            eta: 0.5,
            c_prime: 3,
            t_rows: 3,
            p_rt: 0.5,
            p_sg: 0.1,
            p_ds: None,
            beta: 50.0,
            acd_mode: AcdMode::Estimator,
            fallback_delta: Some(16),
            holey_factor: 1.0,
            retry_budget: 100,
            check_duplicates: false,
            exact_budget: 20_000_000,
            rate_scale: [8.0, 8.0, 2.0, 1.0],
            rate_override: [None; 4],
            anchor_rate: None,
        }
    }

    /// The constants as stated for the asymptotic regime; ρ = ⌈ln n / ε²⌉.
    pub fn paper(n: usize, seed: u64) -> Self {
        let epsilon = 1e-8;
        let rho = ((n.max(2) as f64).ln() / (epsilon * epsilon)).ceil() as usize;
        RunConfig {
            mode: Mode::Paper,
            epsilon,
            rho,
            alpha: 150.0,
            p_rt: 0.1,
            p_sg: 0.1,
            fallback_delta: None,
            holey_factor: 1e7,
            rate_scale: [1.0; 4],
            ..RunConfig::desk(seed)
        }
    }

    pub fn q(&self, delta: usize) -> usize {
        delta.saturating_sub(1)
    }

    pub fn p_ds(&self) -> f64 {
        self.p_ds.unwrap_or(1.0 / self.rho as f64)
    }

    pub fn is_fallback(&self, delta: usize) -> bool {
        match self.fallback_delta {
            Some(d) => delta < d,
            None => (delta as f64) < 2.0 * self.alpha * (self.rho as f64).powi(3),
        }
    }

    /// Sampling rates of L3, L4, L5, L6, clamped to 1.
    pub fn list_rates(&self, delta: usize) -> [f64; 4] {
        let r = self.rho as f64;
        let d = delta.max(1) as f64;
        let base = [r / d, r / d, r * r / d, r * r * r / d];
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = self.rate_override[i].unwrap_or(base[i] * self.rate_scale[i]).clamp(0.0, 1.0);
        }
        out
    }

    pub fn anchor_rate(&self, n: usize, delta: usize) -> f64 {
        self.anchor_rate
            .unwrap_or_else(|| {
                self.beta * (n.max(2) as f64).ln() / (self.epsilon * self.epsilon * delta.max(1) as f64)
            })
            .clamp(0.0, 1.0)
    }

    pub fn holey_threshold(&self, delta: usize) -> f64 {
        self.holey_factor * self.epsilon * delta as f64
    }

    /// The friend thresholds consumed by the pipeline: 2ρ, ρ, αρ².
    pub fn friend_ks(&self) -> [f64; 3] {
        let r = self.rho as f64;
        [2.0 * r, r, self.alpha * r * r]
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: std::fmt::Display,
        {
            value.parse::<T>().map_err(|e| ConfigError::BadValue {
                key: key.into(),
                value: value.into(),
                reason: e.to_string(),
            })
        }
        fn prob(key: &str, value: &str) -> Result<f64, ConfigError> {
            let p: f64 = num(key, value)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::BadValue { key: key.into(), value: value.into(), reason: "not in [0, 1]".into() });
            }
            Ok(p)
        }
        let list_index = |k: &str, prefix: &str| -> Option<usize> {
            k.strip_prefix(prefix).and_then(|d| d.parse::<usize>().ok()).filter(|i| (3..=6).contains(i)).map(|i| i - 3)
        };
        match key {
            "mode" => {
                self.mode = match value {
                    "paper" => Mode::Paper,
                    "desk" => Mode::Desk,
                    _ => {
                        return Err(ConfigError::BadValue {
                            key: key.into(),
                            value: value.into(),
                            reason: "expected paper or desk".into(),
                        })
                    }
                }
            }
            "seed" => self.seed = num(key, value)?,
            "epsilon" => {
                let e: f64 = num(key, value)?;
                if !(e > 0.0 && e < 1.0) {
                    return Err(ConfigError::BadValue { key: key.into(), value: value.into(), reason: "need 0 < epsilon < 1".into() });
                }
                self.epsilon = e;
            }
            "rho" => {
                let r: usize = num(key, value)?;
                if r == 0 {
                    return Err(ConfigError::BadValue { key: key.into(), value: value.into(), reason: "rho >= 1".into() });
                }
                self.rho = r;
            }
            "alpha" => self.alpha = num(key, value)?,
            "eta" => self.eta = num(key, value)?,
            "c_prime" | "field_exponent" => self.c_prime = num(key, value)?,
            "t_rows" => self.t_rows = num(key, value)?,
            "p_rt" => self.p_rt = prob(key, value)?,
            "p_sg" => self.p_sg = prob(key, value)?,
            "p_ds" => self.p_ds = Some(prob(key, value)?),
            "beta" => self.beta = num(key, value)?,
            "acd" => {
                self.acd_mode = match value {
                    "estimator" => AcdMode::Estimator,
                    "oracle" => AcdMode::Oracle,
                    _ => {
                        return Err(ConfigError::BadValue {
                            key: key.into(),
                            value: value.into(),
                            reason: "expected estimator or oracle".into(),
                        })
                    }
                }
            }
            "fallback_delta" => self.fallback_delta = Some(num(key, value)?),
            "holey_factor" => self.holey_factor = num(key, value)?,
            "retry_budget" => self.retry_budget = num(key, value)?,
            "check_duplicates" => self.check_duplicates = num(key, value)?,
            "exact_budget" => self.exact_budget = num(key, value)?,
            "anchor_rate" => self.anchor_rate = Some(prob(key, value)?),
            k => {
                if let Some(i) = list_index(k, "rate") {
                    self.rate_override[i] = Some(prob(key, value)?);
                } else if let Some(i) = list_index(k, "scale") {
                    self.rate_scale[i] = num(key, value)?;
                } else {
                    return Err(ConfigError::UnknownKey(k.into()));
                }
            }
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_kv(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// The effective configuration in the same flat format.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let mode = match self.mode {
            Mode::Paper => "paper",
            Mode::Desk => "desk",
        };
        let acd = match self.acd_mode {
            AcdMode::Estimator => "estimator",
            AcdMode::Oracle => "oracle",
        };
        let _ = writeln!(s, "mode = {mode}");
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "epsilon = {}", self.epsilon);
        let _ = writeln!(s, "rho = {}", self.rho);
        let _ = writeln!(s, "alpha = {}", self.alpha);
        let _ = writeln!(s, "eta = {}", self.eta);
        let _ = writeln!(s, "c_prime = {}", self.c_prime);
        let _ = writeln!(s, "t_rows = {}", self.t_rows);
        let _ = writeln!(s, "p_rt = {}", self.p_rt);
        let _ = writeln!(s, "p_sg = {}", self.p_sg);
        let _ = writeln!(s, "p_ds = {}", self.p_ds());
        let _ = writeln!(s, "beta = {}", self.beta);
        let _ = writeln!(s, "acd = {acd}");
        if let Some(d) = self.fallback_delta {
            let _ = writeln!(s, "fallback_delta = {d}");
        }
        let _ = writeln!(s, "holey_factor = {}", self.holey_factor);
        let _ = writeln!(s, "retry_budget = {}", self.retry_budget);
        let _ = writeln!(s, "check_duplicates = {}", self.check_duplicates);
        let _ = writeln!(s, "exact_budget = {}", self.exact_budget);
        for i in 0..4 {
            let _ = writeln!(s, "scale{} = {}", i + 3, self.rate_scale[i]);
            if let Some(r) = self.rate_override[i] {
                let _ = writeln!(s, "rate{} = {}", i + 3, r);
            }
        }
        if let Some(a) = self.anchor_rate {
            let _ = writeln!(s, "anchor_rate = {a}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let mut c = RunConfig::desk(5);
        c.set("rate4", "0.25").unwrap();
        c.set("acd", "oracle").unwrap();
        c.set("p_ds", "0.5").unwrap();
        let mut back = RunConfig::desk(0);
        back.apply_kv(&c.to_kv()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::desk(0);
        assert_eq!(c.set("nope", "1"), Err(ConfigError::UnknownKey("nope".into())));
        assert!(c.set("p_rt", "1.5").is_err());
        assert!(c.set("rho", "0").is_err());
        assert!(matches!(c.apply_kv("rho 3"), Err(ConfigError::Syntax(1))));
    }

    #[test]
    fn paper_mode_always_falls_back_at_desk_delta() {
        let c = RunConfig::paper(10_000, 0);
        assert_eq!(c.p_ds(), 1.0 / c.rho as f64);
        assert!(c.is_fallback(1 << 40));
        assert_eq!(c.list_rates(100), [1.0; 4]);
        let d = RunConfig::desk(0);
        assert!(d.is_fallback(15) && !d.is_fallback(16));
        let r = d.list_rates(64);
        assert_eq!(r[0], 24.0 / 64.0);
        assert_eq!(r[3], 27.0 / 64.0);
    }
}
