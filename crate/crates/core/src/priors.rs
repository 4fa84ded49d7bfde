//! Prior distributions over all model unknowns.
//!
//! * `p_Y(1) ~ Beta(a1, a0)`, so `a0` governs the control side.
//! * `Z_l ~ Normal(z_mean, z_var)` independently.
//! * `X^(h)_vr ~ Normal(0, 1)` independently.
//! * `λ^(h)_r = Π_{m ≤ r} 1/ϑ^(h)_m` with `ϑ_1 ~ Gamma(mig_a1, 1)` and
//!   `ϑ_m ~ Gamma(mig_a2, 1)` for `m ≥ 2` (rate parameterization).
//! * `T ~ Bernoulli(prior_t1)`; under `T = 1` the two groups get independent
//!   symmetric Dirichlet weights, under `T = 0` they share one draw.

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ComponentFactors, Hypothesis, MixtureParameters};
use crate::network::EdgeIndexMap;
use crate::numeric::{
    beta_log_density, dirichlet_log_density, gamma_log_density, normal_log_density,
    sample_dirichlet,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperParameters {
    pub a0: f64,
    pub a1: f64,
    pub z_mean: f64,
    pub z_var: f64,
    pub mig_a1: f64,
    pub mig_a2: f64,
    /// Symmetric Dirichlet concentration; `None` means `1 / components`.
    pub dirichlet_conc: Option<f64>,
    pub prior_t1: f64,
    pub components: usize,
    pub rank: usize,
}

impl Default for HyperParameters {
    fn default() -> Self {
        Self {
            a0: 1.0,
            a1: 1.0,
            z_mean: 0.0,
            z_var: 10.0,
            mig_a1: 2.5,
            mig_a2: 3.5,
            dirichlet_conc: None,
            prior_t1: 0.5,
            components: 15,
            rank: 10,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidHyperParameter {
            name,
            reason: format!("must be positive and finite, got {value}"),
        })
    }
}

impl HyperParameters {
    pub fn concentration(&self) -> f64 {
        self.dirichlet_conc
            .unwrap_or(1.0 / self.components.max(1) as f64)
    }

    /// `prior_t1` may be 0 or 1, which pins the hypothesis indicator.
    pub fn validate(&self) -> Result<()> {
        positive("a0", self.a0)?;
        positive("a1", self.a1)?;
        positive("z_var", self.z_var)?;
        positive("mig_a1", self.mig_a1)?;
        positive("mig_a2", self.mig_a2)?;
        positive("dirichlet_conc", self.concentration())?;
        if !self.z_mean.is_finite() {
            return Err(Error::InvalidHyperParameter {
                name: "z_mean",
                reason: "must be finite".into(),
            });
        }
        if !(0.0..=1.0).contains(&self.prior_t1) {
            return Err(Error::InvalidHyperParameter {
                name: "prior_t1",
                reason: format!("must lie in [0, 1], got {}", self.prior_t1),
            });
        }
        if self.components == 0 {
            return Err(Error::InvalidHyperParameter {
                name: "components",
                reason: "must be at least 1".into(),
            });
        }
        if self.rank == 0 {
            return Err(Error::InvalidHyperParameter {
                name: "rank",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub(crate) fn shrinkage_shape(&self, m: usize) -> f64 {
        if m == 0 {
            self.mig_a1
        } else {
            self.mig_a2
        }
    }
}

/// `λ_r = Π_{m ≤ r} 1/ϑ_m`.
pub fn lambda_from_theta(theta: &[f64]) -> Vec<f64> {
    let mut acc = 1.0;
    theta
        .iter()
        .map(|&t| {
            acc /= t;
            acc
        })
        .collect()
}

/// A prior draw: the model parameters plus the shrinkage auxiliaries `ϑ^(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorDraw {
    pub params: MixtureParameters,
    pub theta: Vec<Vec<f64>>,
}

pub fn sample_prior<R: Rng + ?Sized>(
    hyper: &HyperParameters,
    map: &EdgeIndexMap,
    rng: &mut R,
) -> Result<PriorDraw> {
    hyper.validate()?;
    let nodes = map.nodes();
    let (h, rank) = (hyper.components, hyper.rank);

    let beta = Beta::new(hyper.a1, hyper.a0).map_err(|e| Error::InvalidHyperParameter {
        name: "a0/a1",
        reason: e.to_string(),
    })?;
    let p_case = loop {
        let p: f64 = beta.sample(rng);
        if p > 0.0 && p < 1.0 {
            break p;
        }
    };

    let sd = hyper.z_var.sqrt();
    let z: Vec<f64> = (0..map.edges())
        .map(|_| hyper.z_mean + sd * rng.sample::<f64, _>(StandardNormal))
        .collect();

    let mut components = Vec::with_capacity(h);
    let mut theta = Vec::with_capacity(h);
    for _ in 0..h {
        let coords: Vec<f64> = (0..nodes * rank)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let th: Vec<f64> = (0..rank)
            .map(|m| {
                Gamma::new(hyper.shrinkage_shape(m), 1.0)
                    .expect("validated shape")
                    .sample(rng)
            })
            .collect();
        components.push(ComponentFactors::new(nodes, rank, coords, lambda_from_theta(&th))?);
        theta.push(th);
    }

    let hypothesis = if rng.random::<f64>() < hyper.prior_t1 {
        Hypothesis::Alternative
    } else {
        Hypothesis::Null
    };
    let alpha = vec![hyper.concentration(); h];
    let nu0 = sample_dirichlet(&alpha, rng);
    let nu1 = match hypothesis {
        Hypothesis::Alternative => sample_dirichlet(&alpha, rng),
        Hypothesis::Null => nu0.clone(),
    };

    Ok(PriorDraw {
        params: MixtureParameters {
            nodes,
            rank,
            z,
            components,
            nu: [nu0, nu1],
            p_case,
            hypothesis,
        },
        theta,
    })
}

/// Joint prior log density of `(params, ϑ)`. States outside the support
/// (inconsistent weights under `T = 0`, boundary weights) give `-∞`.
pub fn log_prior_density(
    params: &MixtureParameters,
    theta: &[Vec<f64>],
    hyper: &HyperParameters,
) -> Result<f64> {
    hyper.validate()?;
    if params.n_components() != hyper.components || params.rank != hyper.rank {
        return Err(Error::InvalidParameters(format!(
            "parameters have {} components of rank {}, hyperparameters {} of rank {}",
            params.n_components(),
            params.rank,
            hyper.components,
            hyper.rank
        )));
    }
    if theta.len() != hyper.components || theta.iter().any(|t| t.len() != hyper.rank) {
        return Err(Error::InvalidParameters(
            "shrinkage auxiliaries have the wrong shape".into(),
        ));
    }

    let mut total = beta_log_density(params.p_case, hyper.a1, hyper.a0);
    total += params
        .z
        .iter()
        .map(|&z| normal_log_density(z, hyper.z_mean, hyper.z_var))
        .sum::<f64>();

    for (component, th) in params.components.iter().zip(theta) {
        total += component
            .coords()
            .iter()
            .map(|&x| normal_log_density(x, 0.0, 1.0))
            .sum::<f64>();
        for (m, &t) in th.iter().enumerate() {
            total += gamma_log_density(t, hyper.shrinkage_shape(m), 1.0);
        }
        let implied = lambda_from_theta(th);
        let consistent = implied
            .iter()
            .zip(component.lambda())
            .all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()));
        if !consistent {
            return Err(Error::InvalidParameters(
                "dimension weights disagree with shrinkage auxiliaries".into(),
            ));
        }
    }

    let alpha = vec![hyper.concentration(); hyper.components];
    match params.hypothesis {
        Hypothesis::Alternative => {
            total += hyper.prior_t1.ln();
            total += dirichlet_log_density(&params.nu[0], &alpha);
            total += dirichlet_log_density(&params.nu[1], &alpha);
        }
        Hypothesis::Null => {
            if params.nu[0] != params.nu[1] {
                return Ok(f64::NEG_INFINITY);
            }
            total += (1.0 - hyper.prior_t1).ln();
            total += dirichlet_log_density(&params.nu[0], &alpha);
        }
    }
    Ok(total)
}
