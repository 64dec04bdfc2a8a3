//! Flat key-value configuration: a TOML file merged under command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Deserialize;

/// Every tunable parameter. The same keys are accepted in the `--config`
/// file (snake_case) and as flags (kebab-case); flags win.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory for CSV files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest number of atoms any experiment may build.
    #[arg(long, global = true)]
    pub cap_atoms: Option<usize>,
    /// ε grid, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Odd prime of the SL(2) tower.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Primes for the product-growth experiment.
    #[arg(long, global = true, value_delimiter = ',')]
    pub ps: Option<Vec<u64>>,
    /// Field orders q = p^(2^k).
    #[arg(long, global = true, value_delimiter = ',')]
    pub q: Option<Vec<u64>>,
    /// Tower depth.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Number of Følner windows.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Random trials (per group or per suite).
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Invariant semimetric recipe: word, discrete, zero or random.
    #[arg(long, global = true)]
    pub recipe: Option<String>,
    /// Largest space handed to the exact ε-entropy solver.
    #[arg(long, global = true)]
    pub exact_cap: Option<usize>,
    /// Exact-solver cap for the transversal runs of `claim52`.
    #[arg(long, global = true)]
    pub transversal_exact_cap: Option<usize>,
    /// Search-node budget of the exact solver.
    #[arg(long, global = true)]
    pub node_limit: Option<u64>,
    /// Semimetric CSV (`atom,0,1,…`) for `entropy`.
    #[arg(long, global = true)]
    pub metric: Option<PathBuf>,
    /// Mass CSV (`atom,mass`) for `entropy`; uniform when absent.
    #[arg(long, global = true)]
    pub masses: Option<PathBuf>,
    /// Group: `cyclic:N`, `sl2:Q`, `z` or `z2`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Action for `average`: bernoulli or regular.
    #[arg(long, global = true)]
    pub action: Option<String>,
    /// Alphabet / cell count for `average`.
    #[arg(long, global = true)]
    pub alphabet: Option<usize>,
    /// Window size for `coloring`.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Forbidden-set size for `coloring`.
    #[arg(long, global = true)]
    pub forbidden: Option<usize>,
}

macro_rules! merge_fields {
    ($lo:expr, $hi:expr, $($f:ident),*) => {
        Params { $($f: $hi.$f.or($lo.$f),)* }
    };
}

impl Params {
    pub fn load(path: &Path) -> Result<Params> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// `self` overridden by every field set in `flags`.
    pub fn merged(self, flags: Params) -> Params {
        merge_fields!(
            self, flags, seed, workers, out, cap_atoms, eps, p, ps, q, depth, horizon, trials, recipe, exact_cap,
            transversal_exact_cap, node_limit, metric, masses, group, action, alphabet, window, forbidden
        )
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(eps) = &self.eps {
            if eps.is_empty() {
                bail!("the ε grid is empty");
            }
            if let Some(e) = eps.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
                bail!("ε = {e} is outside (0, 1]");
            }
        }
        for (name, v) in [
            ("workers", self.workers),
            ("cap_atoms", self.cap_atoms),
            ("depth", self.depth),
            ("horizon", self.horizon),
            ("trials", self.trials),
            ("exact_cap", self.exact_cap),
            ("transversal_exact_cap", self.transversal_exact_cap),
            ("alphabet", self.alphabet),
            ("window", self.window),
        ] {
            if v == Some(0) {
                bail!("{name} must be positive");
            }
        }
        if self.node_limit == Some(0) {
            bail!("node_limit must be positive");
        }
        Ok(())
    }
}
