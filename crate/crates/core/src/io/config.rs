//! `key = value` run configuration.
//!
//! One setting per line; `#` starts a comment. Keys:
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `nodes` (`V`) | node count for `simulate` | unset |
//! | `components` (`H`) | mixture components | 15 |
//! | `rank` (`R`) | latent dimensions | 10 |
//! | `a0`, `a1` | Beta prior on `p_Y(1)` | 1, 1 |
//! | `z_mean`, `z_var` | Gaussian prior on the shared similarity | 0, 10 |
//! | `mig_a1`, `mig_a2` | shrinkage prior shapes | 2.5, 3.5 |
//! | `dirichlet_conc` | weight concentration, or `auto` for `1/H` | auto |
//! | `prior_t1` | prior probability of the alternative | 0.5 |
//! | `n_iter`, `burn_in`, `thin` | sampling schedule | 5000, 1000, 4 |
//! | `seed` | master seed | 0 |
//! | `record_pi` | store edge probabilities with each draw | false |
//! | `n_control`, `n_case` | subjects per group for `simulate` | 50, 50 |
//! | `epsilon` | Cramér's V threshold | 0.1 |
//! | `cutoff` | exceedance probability declaring an edge significant | 0.95 |
//! | `fdr_level` | level of the Fisher baseline | 0.05 |

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::priors::HyperParameters;
use crate::sampler::SamplerConfig;
use crate::testing::{DEFAULT_CUTOFF, DEFAULT_EPSILON};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub hyper: HyperParameters,
    pub sampler: SamplerConfig,
    pub nodes: Option<usize>,
    pub n_control: usize,
    pub n_case: usize,
    pub epsilon: f64,
    pub cutoff: f64,
    pub fdr_level: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hyper: HyperParameters::default(),
            sampler: SamplerConfig::default(),
            nodes: None,
            n_control: 50,
            n_case: 50,
            epsilon: DEFAULT_EPSILON,
            cutoff: DEFAULT_CUTOFF,
            fdr_level: 0.05,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.hyper.validate()?;
        self.sampler.validate()?;
        if let Some(v) = self.nodes {
            if v < 2 {
                return Err(Error::TooFewNodes(v));
            }
        }
        let interior = |name: &str, x: f64| {
            if x > 0.0 && x < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidTestSetting(format!(
                    "{name} must lie in (0, 1), got {x}"
                )))
            }
        };
        interior("epsilon", self.epsilon)?;
        interior("fdr_level", self.fdr_level)?;
        if !(0.0..=1.0).contains(&self.cutoff) {
            return Err(Error::InvalidTestSetting(format!(
                "cutoff must lie in [0, 1], got {}",
                self.cutoff
            )));
        }
        Ok(())
    }
}

fn canonical(key: &str) -> Option<&'static str> {
    Some(match key {
        "nodes" | "V" => "nodes",
        "components" | "H" => "components",
        "rank" | "R" => "rank",
        "a0" => "a0",
        "a1" => "a1",
        "z_mean" => "z_mean",
        "z_var" => "z_var",
        "mig_a1" => "mig_a1",
        "mig_a2" => "mig_a2",
        "dirichlet_conc" => "dirichlet_conc",
        "prior_t1" => "prior_t1",
        "n_iter" => "n_iter",
        "burn_in" => "burn_in",
        "thin" => "thin",
        "seed" => "seed",
        "record_pi" => "record_pi",
        "n_control" => "n_control",
        "n_case" => "n_case",
        "epsilon" => "epsilon",
        "cutoff" => "cutoff",
        "fdr_level" => "fdr_level",
        _ => return None,
    })
}

fn value<T: std::str::FromStr>(key: &str, raw: &str, line: usize) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::parse(line, format!("invalid value {raw:?} for {key}")))
}

fn flag(key: &str, raw: &str, line: usize) -> Result<bool> {
    match raw.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::parse(line, format!("invalid value {raw:?} for {key}"))),
    }
}

/// Parses and validates a configuration; unset keys keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    let mut seen = HashSet::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (raw_key, raw_value) = content
            .split_once('=')
            .ok_or_else(|| Error::parse(line, "expected key = value"))?;
        let (raw_key, raw) = (raw_key.trim(), raw_value.trim());
        let key = canonical(raw_key).ok_or_else(|| Error::UnknownConfigKey {
            key: raw_key.to_string(),
            line,
        })?;
        if !seen.insert(key) {
            return Err(Error::parse(line, format!("{key} set more than once")));
        }
        let h = &mut config.hyper;
        let s = &mut config.sampler;
        match key {
            "nodes" => config.nodes = Some(value(key, raw, line)?),
            "components" => h.components = value(key, raw, line)?,
            "rank" => h.rank = value(key, raw, line)?,
            "a0" => h.a0 = value(key, raw, line)?,
            "a1" => h.a1 = value(key, raw, line)?,
            "z_mean" => h.z_mean = value(key, raw, line)?,
            "z_var" => h.z_var = value(key, raw, line)?,
            "mig_a1" => h.mig_a1 = value(key, raw, line)?,
            "mig_a2" => h.mig_a2 = value(key, raw, line)?,
            "dirichlet_conc" => {
                h.dirichlet_conc = if raw.eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(value(key, raw, line)?)
                }
            }
            "prior_t1" => h.prior_t1 = value(key, raw, line)?,
            "n_iter" => s.n_iter = value(key, raw, line)?,
            "burn_in" => s.burn_in = value(key, raw, line)?,
            "thin" => s.thin = value(key, raw, line)?,
            "seed" => s.seed = value(key, raw, line)?,
            "record_pi" => s.record_pi = flag(key, raw, line)?,
            "n_control" => config.n_control = value(key, raw, line)?,
            "n_case" => config.n_case = value(key, raw, line)?,
            "epsilon" => config.epsilon = value(key, raw, line)?,
            "cutoff" => config.cutoff = value(key, raw, line)?,
            "fdr_level" => config.fdr_level = value(key, raw, line)?,
            _ => unreachable!("canonical keys are exhaustive"),
        }
    }
    config.validate()?;
    Ok(config)
}

/// Writes every setting, so the output parses back to the same configuration.
pub fn render_config(config: &RunConfig) -> String {
    let h = &config.hyper;
    let s = &config.sampler;
    let mut out = String::new();
    let mut put = |key: &str, value: String| out.push_str(&format!("{key} = {value}\n"));
    if let Some(v) = config.nodes {
        put("nodes", v.to_string());
    }
    put("components", h.components.to_string());
    put("rank", h.rank.to_string());
    put("a0", format!("{:?}", h.a0));
    put("a1", format!("{:?}", h.a1));
    put("z_mean", format!("{:?}", h.z_mean));
    put("z_var", format!("{:?}", h.z_var));
    put("mig_a1", format!("{:?}", h.mig_a1));
    put("mig_a2", format!("{:?}", h.mig_a2));
    put(
        "dirichlet_conc",
        h.dirichlet_conc
            .map_or_else(|| "auto".to_string(), |c| format!("{c:?}")),
    );
    put("prior_t1", format!("{:?}", h.prior_t1));
    put("n_iter", s.n_iter.to_string());
    put("burn_in", s.burn_in.to_string());
    put("thin", s.thin.to_string());
    put("seed", s.seed.to_string());
    put("record_pi", s.record_pi.to_string());
    put("n_control", config.n_control.to_string());
    put("n_case", config.n_case.to_string());
    put("epsilon", format!("{:?}", config.epsilon));
    put("cutoff", format!("{:?}", config.cutoff));
    put("fdr_level", format!("{:?}", config.fdr_level));
    out
}
