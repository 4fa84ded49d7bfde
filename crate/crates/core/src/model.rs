//! Mixture of low-rank factorizations: similarities, edge probabilities,
//! probability mass functions and forward simulation.
//!
//! Component `h` has log-odds `S_l = Z_l + Σ_r λ_r X_vr X_ur` for edge
//! `l = (v, u)`. Given a group `y`, a network is drawn from component `h` with
//! probability `ν_hy`, then each edge independently with probability
//! `logistic(S_l)`. All pmfs are evaluated in log space.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{EdgeIndexMap, Group, NetworkObservation};
use crate::numeric::{log_logistic, logistic, logsumexp, sample_categorical};

/// Edge probabilities, stored as log-odds so that probabilities extremely close
/// to 0 or 1 keep full relative precision.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeProbabilities {
    logits: Vec<f64>,
}

impl EdgeProbabilities {
    pub fn from_logits(logits: Vec<f64>) -> Result<Self> {
        if let Some(l) = logits.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite(l));
        }
        Ok(Self { logits })
    }

    /// Builds from probabilities in the open interval (0, 1).
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        let logits = probs
            .iter()
            .map(|&p| {
                if p > 0.0 && p < 1.0 {
                    Ok(p.ln() - (-p).ln_1p())
                } else {
                    Err(Error::InvalidProbability(p))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_logits(logits)
    }

    pub fn len(&self) -> usize {
        self.logits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logits.is_empty()
    }

    pub fn logits(&self) -> &[f64] {
        &self.logits
    }

    pub fn prob(&self, l: usize) -> f64 {
        logistic(self.logits[l])
    }

    /// `1 - π_l`, computed without cancellation.
    pub fn complement(&self, l: usize) -> f64 {
        logistic(-self.logits[l])
    }

    pub fn log_prob(&self, l: usize) -> f64 {
        log_logistic(self.logits[l])
    }

    pub fn log_complement(&self, l: usize) -> f64 {
        log_logistic(-self.logits[l])
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.logits.iter().map(|&s| logistic(s)).collect()
    }
}

/// Maps similarities to edge probabilities through the logistic function.
pub fn logistic_map(similarities: &[f64]) -> Result<EdgeProbabilities> {
    EdgeProbabilities::from_logits(similarities.to_vec())
}

/// Latent coordinates (`V × R`, row-major) and dimension weights of one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFactors {
    nodes: usize,
    rank: usize,
    coords: Vec<f64>,
    lambda: Vec<f64>,
}

impl ComponentFactors {
    pub fn new(nodes: usize, rank: usize, coords: Vec<f64>, lambda: Vec<f64>) -> Result<Self> {
        if coords.len() != nodes * rank {
            return Err(Error::DimensionMismatch {
                what: "latent coordinates",
                expected: nodes * rank,
                found: coords.len(),
            });
        }
        if lambda.len() != rank {
            return Err(Error::DimensionMismatch {
                what: "dimension weights",
                expected: rank,
                found: lambda.len(),
            });
        }
        let factors = Self {
            nodes,
            rank,
            coords,
            lambda,
        };
        factors.validate()?;
        Ok(factors)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.coords.len() != self.nodes * self.rank || self.lambda.len() != self.rank {
            return Err(Error::InvalidParameters(
                "component factor dimensions are inconsistent".into(),
            ));
        }
        if self.lambda.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidParameters(
                "dimension weights must be finite and nonnegative".into(),
            ));
        }
        if self.coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameters(
                "latent coordinates must be finite".into(),
            ));
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coord(&self, v: usize, r: usize) -> f64 {
        self.coords[v * self.rank + r]
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.coords[v * self.rank..(v + 1) * self.rank]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub(crate) fn lambda_mut(&mut self) -> &mut Vec<f64> {
        &mut self.lambda
    }

    /// Flips the sign of latent dimension `r` for every node.
    pub fn flip_dimension(&mut self, r: usize) {
        for v in 0..self.nodes {
            self.coords[v * self.rank + r] = -self.coords[v * self.rank + r];
        }
    }

    /// Component-specific deviation `D_l = Σ_r λ_r X_vr X_ur`.
    pub fn deviation(&self, map: &EdgeIndexMap) -> Result<Vec<f64>> {
        if map.nodes() != self.nodes {
            return Err(Error::DimensionMismatch {
                what: "component node count",
                expected: map.nodes(),
                found: self.nodes,
            });
        }
        Ok(map
            .pairs()
            .map(|(v, u)| {
                self.row(v)
                    .iter()
                    .zip(self.row(u))
                    .zip(&self.lambda)
                    .map(|((xv, xu), w)| w * xv * xu)
                    .sum()
            })
            .collect())
    }
}

/// `S_l = Z_l + D_l` for one component.
pub fn component_similarity(
    z: &[f64],
    factors: &ComponentFactors,
    map: &EdgeIndexMap,
) -> Result<Vec<f64>> {
    if z.len() != map.edges() {
        return Err(Error::DimensionMismatch {
            what: "shared similarity",
            expected: map.edges(),
            found: z.len(),
        });
    }
    let mut s = factors.deviation(map)?;
    for (sl, zl) in s.iter_mut().zip(z) {
        *sl += zl;
    }
    Ok(s)
}

/// Global hypothesis indicator: shared (`Null`) or group-specific (`Alternative`)
/// mixing weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    Null,
    Alternative,
}

impl Hypothesis {
    pub fn is_alternative(self) -> bool {
        matches!(self, Hypothesis::Alternative)
    }
}

/// Full model state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureParameters {
    pub nodes: usize,
    pub rank: usize,
    /// Shared similarity, one entry per edge.
    pub z: Vec<f64>,
    pub components: Vec<ComponentFactors>,
    /// Mixing weights per group, indexed by [`Group::index`].
    pub nu: [Vec<f64>; 2],
    /// `p_Y(1)`.
    pub p_case: f64,
    pub hypothesis: Hypothesis,
}

const SIMPLEX_TOL: f64 = 1e-10;

fn check_simplex(weights: &[f64], expected: usize) -> Result<()> {
    if weights.len() != expected {
        return Err(Error::InvalidWeights(format!(
            "expected {expected} weights, found {}",
            weights.len()
        )));
    }
    if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
        return Err(Error::InvalidWeights("negative or non-finite weight".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    Ok(())
}

impl MixtureParameters {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Dimensions, factor validity and weight simplexes; `p_case` may sit on [0, 1].
    fn validate_structure(&self) -> Result<()> {
        let edges = self.nodes * self.nodes.saturating_sub(1) / 2;
        if self.z.len() != edges {
            return Err(Error::DimensionMismatch {
                what: "shared similarity",
                expected: edges,
                found: self.z.len(),
            });
        }
        if self.z.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameters("non-finite shared similarity".into()));
        }
        if self.components.is_empty() {
            return Err(Error::InvalidParameters("no mixture components".into()));
        }
        for c in &self.components {
            c.validate()?;
            if c.nodes() != self.nodes || c.rank() != self.rank {
                return Err(Error::InvalidParameters(
                    "component dimensions disagree with the mixture".into(),
                ));
            }
        }
        let h = self.components.len();
        check_simplex(&self.nu[0], h)?;
        check_simplex(&self.nu[1], h)?;
        if !(0.0..=1.0).contains(&self.p_case) {
            return Err(Error::InvalidProbability(self.p_case));
        }
        Ok(())
    }

    /// Checks every invariant of a valid model state.
    pub fn validate(&self) -> Result<()> {
        self.validate_structure()?;
        if !(self.p_case > 0.0 && self.p_case < 1.0) {
            return Err(Error::InvalidProbability(self.p_case));
        }
        if self.hypothesis == Hypothesis::Null && self.nu[0] != self.nu[1] {
            return Err(Error::InvalidWeights(
                "null hypothesis requires identical group weights".into(),
            ));
        }
        Ok(())
    }

    pub fn group_probability(&self, group: Group) -> f64 {
        match group {
            Group::Control => 1.0 - self.p_case,
            Group::Case => self.p_case,
        }
    }

    pub fn weights(&self, group: Group) -> &[f64] {
        &self.nu[group.index()]
    }

    /// `ν_h = Σ_y p_Y(y) ν_hy`.
    pub fn marginal_weights(&self) -> Vec<f64> {
        let (p0, p1) = (1.0 - self.p_case, self.p_case);
        self.nu[0]
            .iter()
            .zip(&self.nu[1])
            .map(|(a, b)| p0 * a + p1 * b)
            .collect()
    }

    pub fn similarities(&self, map: &EdgeIndexMap) -> Result<Vec<Vec<f64>>> {
        self.components
            .iter()
            .map(|c| component_similarity(&self.z, c, map))
            .collect()
    }

    pub fn edge_probabilities(&self, map: &EdgeIndexMap) -> Result<Vec<EdgeProbabilities>> {
        self.similarities(map)?
            .into_iter()
            .map(EdgeProbabilities::from_logits)
            .collect()
    }

    /// Relabels components: new component `k` is old component `perm[k]`.
    pub fn permute_components(&self, perm: &[usize]) -> Self {
        let mut out = self.clone();
        out.components = perm.iter().map(|&k| self.components[k].clone()).collect();
        for y in 0..2 {
            out.nu[y] = perm.iter().map(|&k| self.nu[y][k]).collect();
        }
        out
    }
}

/// `Σ_l a_l ln π_l + (1 - a_l) ln(1 - π_l)`.
pub fn component_log_pmf(a: &[u8], pi: &EdgeProbabilities) -> Result<f64> {
    if a.len() != pi.len() {
        return Err(Error::DimensionMismatch {
            what: "network vs edge probabilities",
            expected: pi.len(),
            found: a.len(),
        });
    }
    Ok(a
        .iter()
        .zip(pi.logits())
        .map(|(&al, &s)| {
            if al == 1 {
                log_logistic(s)
            } else {
                log_logistic(-s)
            }
        })
        .sum())
}

/// A parameter set with its component edge probabilities precomputed, for
/// evaluating many networks against the same parameters.
#[derive(Debug, Clone)]
pub struct MixtureDensity<'a> {
    params: &'a MixtureParameters,
    pis: Vec<EdgeProbabilities>,
}

impl<'a> MixtureDensity<'a> {
    pub fn new(params: &'a MixtureParameters, map: &EdgeIndexMap) -> Result<Self> {
        params.validate_structure()?;
        if params.nodes != map.nodes() {
            return Err(Error::DimensionMismatch {
                what: "parameter node count",
                expected: map.nodes(),
                found: params.nodes,
            });
        }
        let pis = params.edge_probabilities(map)?;
        Ok(Self { params, pis })
    }

    pub fn params(&self) -> &MixtureParameters {
        self.params
    }

    pub fn component_probabilities(&self) -> &[EdgeProbabilities] {
        &self.pis
    }

    fn mixture_log_pmf(&self, a: &[u8], weights: &[f64]) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.pis.len());
        for (pi, &w) in self.pis.iter().zip(weights) {
            terms.push(w.ln() + component_log_pmf(a, pi)?);
        }
        Ok(logsumexp(&mut terms))
    }

    /// `ln p(a | y)`.
    pub fn conditional(&self, a: &[u8], group: Group) -> Result<f64> {
        self.mixture_log_pmf(a, self.params.weights(group))
    }

    /// `ln p(a)` with the group marginalized out.
    pub fn marginal(&self, a: &[u8]) -> Result<f64> {
        self.mixture_log_pmf(a, &self.params.marginal_weights())
    }

    /// `ln p(y, a)`.
    pub fn joint(&self, group: Group, a: &[u8]) -> Result<f64> {
        Ok(self.params.group_probability(group).ln() + self.conditional(a, group)?)
    }
}

pub fn conditional_log_pmf(
    a: &[u8],
    params: &MixtureParameters,
    group: Group,
    map: &EdgeIndexMap,
) -> Result<f64> {
    MixtureDensity::new(params, map)?.conditional(a, group)
}

pub fn marginal_log_pmf(a: &[u8], params: &MixtureParameters, map: &EdgeIndexMap) -> Result<f64> {
    MixtureDensity::new(params, map)?.marginal(a)
}

pub fn joint_log_pmf(
    group: Group,
    a: &[u8],
    params: &MixtureParameters,
    map: &EdgeIndexMap,
) -> Result<f64> {
    MixtureDensity::new(params, map)?.joint(group, a)
}

/// Independent Bernoulli draw of every edge.
pub fn sample_network<R: Rng + ?Sized>(pi: &EdgeProbabilities, rng: &mut R) -> Vec<u8> {
    (0..pi.len())
        .map(|l| u8::from(rng.random::<f64>() < pi.prob(l)))
        .collect()
}

/// A simulated cohort together with the component each subject came from.
#[derive(Debug, Clone)]
pub struct SimulatedCohort {
    pub observations: Vec<NetworkObservation>,
    pub components: Vec<usize>,
}

/// Draws `n0` control then `n1` case subjects from the model.
pub fn sample_cohort<R: Rng + ?Sized>(
    params: &MixtureParameters,
    map: &EdgeIndexMap,
    n0: usize,
    n1: usize,
    rng: &mut R,
) -> Result<Vec<NetworkObservation>> {
    Ok(sample_cohort_with_components(params, map, n0, n1, rng)?.observations)
}

pub fn sample_cohort_with_components<R: Rng + ?Sized>(
    params: &MixtureParameters,
    map: &EdgeIndexMap,
    n0: usize,
    n1: usize,
    rng: &mut R,
) -> Result<SimulatedCohort> {
    params.validate()?;
    let pis = params.edge_probabilities(map)?;
    let mut observations = Vec::with_capacity(n0 + n1);
    let mut components = Vec::with_capacity(n0 + n1);
    for (group, count) in [(Group::Control, n0), (Group::Case, n1)] {
        for _ in 0..count {
            let h = sample_categorical(params.weights(group), rng);
            let edges = sample_network(&pis[h], rng);
            let id = format!("sub{:04}", observations.len() + 1);
            observations.push(NetworkObservation {
                subject_id: id,
                label: group,
                edges,
            });
            components.push(h);
        }
    }
    Ok(SimulatedCohort {
        observations,
        components,
    })
}
