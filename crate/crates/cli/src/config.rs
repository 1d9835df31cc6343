//! Effective run configuration: flags over the config file over mode defaults.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use streamchroma_core::stream::{Mode, RunConfig};

#[derive(Args, Debug, Clone, Default)]
pub struct ConfigArgs {
    /// Flat `key = value` file applied on top of the mode defaults.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Master seed. Every random choice of the run derives from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Constant set to start from.
    #[arg(long, value_parser = ["desk", "paper"])]
    pub mode: Option<String>,
    /// Any configuration key as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl ConfigArgs {
    /// Resolves the configuration for a graph on `n` vertices (paper mode
    /// derives ρ from `n`).
    pub fn resolve(&self, n: usize) -> Result<RunConfig, String> {
        let file = match &self.config {
            Some(p) => Some(fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?),
            None => None,
        };
        let mode = match self.mode.as_deref() {
            Some("paper") => Mode::Paper,
            Some(_) => Mode::Desk,
            None => match &file {
                Some(text) => {
                    let mut probe = RunConfig::desk(0);
                    probe.apply_kv(text).map_err(|e| format!("config file: {e}"))?;
                    probe.mode
                }
                None => Mode::Desk,
            },
        };
        let mut cfg = match mode {
            Mode::Paper => RunConfig::paper(n, 0),
            Mode::Desk => RunConfig::desk(0),
        };
        if let Some(text) = &file {
            cfg.apply_kv(text).map_err(|e| format!("config file: {e}"))?;
        }
        // The file may name a mode too; the already-resolved one wins.
        cfg.mode = mode;
        for kv in &self.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("--set {kv}: expected key=value"))?;
            cfg.set(k.trim(), v.trim()).map_err(|e| format!("--set: {e}"))?;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }
}

/// Maps `f` over `items` on up to `workers` threads, keeping input order.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beats_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "seed = 5\nrho = 4\np_sg = 0.2\n").unwrap();
        let args = ConfigArgs {
            config: Some(path),
            seed: Some(9),
            mode: None,
            set: vec!["rho=6".into()],
        };
        let cfg = args.resolve(100).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.rho, 6);
        assert_eq!(cfg.p_sg, 0.2);
        assert_eq!(cfg.mode, Mode::Desk);
    }

    #[test]
    fn mode_from_file_picks_the_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "mode = paper\n").unwrap();
        let args = ConfigArgs { config: Some(path), ..ConfigArgs::default() };
        assert_eq!(args.resolve(1000).unwrap(), RunConfig::paper(1000, 0));
    }

    #[test]
    fn par_map_keeps_order() {
        let xs: Vec<u64> = (0..37).collect();
        assert_eq!(par_map(&xs, 4, |x| x * x), par_map(&xs, 1, |x| x * x));
    }
}
