//! Posterior sampling by Gibbs sweeps with Polya-Gamma augmentation.
//!
//! Each sweep updates, in order:
//!
//! 1. component assignments `G_i`, with the augmentation variables integrated out;
//! 2. augmentation variables `ω_il ~ PG(1, S^(G_i)_l)`;
//! 3. the shared similarity `Z`, edge by edge (conjugate Gaussian);
//! 4. per component, the scaled coordinates `X_vr √λ_r` row by row (conjugate
//!    Gaussian), then the shrinkage auxiliaries `ϑ` (conjugate gamma);
//! 5. the hypothesis indicator `T` with the weights collapsed, then `ν | T`;
//! 6. the group probability `p_Y(1)`.
//!
//! Steps 1 and 2 together form one blocked draw of `(G, ω)`, which is why the
//! augmentation is refreshed right after the assignments and before anything
//! that conditions on it.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{Hypothesis, MixtureParameters};
use crate::network::{common_edge_map, EdgeIndexMap, Group, NetworkObservation};
use crate::numeric::{
    dirichlet_multinomial_log_marginal, log_logistic, logistic, normalize_log_weights,
    sample_categorical, sample_dirichlet,
};
use crate::polya_gamma::PolyaGamma;
use crate::priors::{lambda_from_theta, log_prior_density, sample_prior, HyperParameters};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    /// Keep per-component edge probabilities with every retained draw.
    pub record_pi: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            n_iter: 5000,
            burn_in: 1000,
            thin: 4,
            seed: 0,
            record_pi: false,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::InvalidSamplerConfig("thin must be at least 1".into()));
        }
        if self.burn_in >= self.n_iter {
            return Err(Error::InvalidSamplerConfig(format!(
                "burn_in ({}) must be smaller than n_iter ({})",
                self.burn_in, self.n_iter
            )));
        }
        if self.kept_draws() == 0 {
            return Err(Error::InvalidSamplerConfig(
                "schedule keeps no draws".into(),
            ));
        }
        Ok(())
    }

    pub fn kept_draws(&self) -> usize {
        self.n_iter.saturating_sub(self.burn_in) / self.thin.max(1)
    }

    fn keeps(&self, iter: usize) -> bool {
        iter >= self.burn_in && (iter - self.burn_in + 1).is_multiple_of(self.thin)
    }
}

/// Observations prepared for sweeping.
#[derive(Debug, Clone)]
pub struct ChainData<'a> {
    map: EdgeIndexMap,
    observations: &'a [NetworkObservation],
    present: Vec<Vec<u32>>,
    group_sizes: [usize; 2],
}

impl<'a> ChainData<'a> {
    /// Requires a nonempty cohort with a common node count.
    pub fn new(observations: &'a [NetworkObservation]) -> Result<Self> {
        let map = common_edge_map(observations)?;
        Self::with_map(map, observations)
    }

    /// Allows an empty cohort, in which case every update draws from the prior.
    pub fn with_map(map: EdgeIndexMap, observations: &'a [NetworkObservation]) -> Result<Self> {
        let mut group_sizes = [0; 2];
        let mut present = Vec::with_capacity(observations.len());
        for obs in observations {
            if obs.edges.len() != map.edges() {
                return Err(Error::DimensionMismatch {
                    what: "subject edge vector",
                    expected: map.edges(),
                    found: obs.edges.len(),
                });
            }
            group_sizes[obs.label.index()] += 1;
            present.push(
                obs.edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a == 1)
                    .map(|(l, _)| l as u32)
                    .collect(),
            );
        }
        Ok(Self {
            map,
            observations,
            present,
            group_sizes,
        })
    }

    pub fn map(&self) -> &EdgeIndexMap {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn group_sizes(&self) -> [usize; 2] {
        self.group_sizes
    }
}

/// Sampler state: parameters plus everything the augmentation adds.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedState {
    pub params: MixtureParameters,
    pub theta: Vec<Vec<f64>>,
    /// Component of each subject, zero-based.
    pub assignments: Vec<usize>,
    /// `ω`, subject-major (`n × L`).
    pub omega: Vec<f64>,
}

impl AugmentedState {
    /// Starts from a prior draw: assignments from the prior weights and the
    /// augmentation from its conditional.
    pub fn from_prior<R: Rng + ?Sized>(
        hyper: &HyperParameters,
        data: &ChainData<'_>,
        rng: &mut R,
    ) -> Result<Self> {
        let draw = sample_prior(hyper, &data.map, rng)?;
        let assignments = data
            .observations
            .iter()
            .map(|obs| sample_categorical(draw.params.weights(obs.label), rng))
            .collect();
        let mut state = Self {
            params: draw.params,
            theta: draw.theta,
            assignments,
            omega: vec![0.25; data.len() * data.map.edges()],
        };
        update_omega(&mut state, data, rng)?;
        Ok(state)
    }

    pub fn component_counts(&self, data: &ChainData<'_>) -> [Vec<usize>; 2] {
        let h = self.params.n_components();
        let mut counts = [vec![0; h], vec![0; h]];
        for (obs, &g) in data.observations.iter().zip(&self.assignments) {
            counts[obs.label.index()][g] += 1;
        }
        counts
    }
}

fn subject_stream(seed: u64, unit: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(unit as u64);
    rng
}

/// Per-subject log weights `ln ν_{h,y_i} + ln p(a_i | π^(h))` for every component.
pub fn assignment_log_weights(
    state: &AugmentedState,
    data: &ChainData<'_>,
) -> Result<Vec<Vec<f64>>> {
    let sims = state.params.similarities(&data.map)?;
    // ln p(a | π) = Σ_l ln(1 - π_l) + Σ_{l: a_l = 1} S_l
    let base: Vec<f64> = sims
        .iter()
        .map(|s| s.iter().map(|&sl| log_logistic(-sl)).sum())
        .collect();
    Ok(data
        .observations
        .par_iter()
        .zip(data.present.par_iter())
        .map(|(obs, present)| {
            let weights = state.params.weights(obs.label);
            sims.iter()
                .zip(&base)
                .zip(weights)
                .map(|((s, b), &w)| {
                    w.ln() + b + present.iter().map(|&l| s[l as usize]).sum::<f64>()
                })
                .collect()
        })
        .collect())
}

pub fn update_assignments<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    data: &ChainData<'_>,
    rng: &mut R,
) -> Result<()> {
    let log_weights = assignment_log_weights(state, data)?;
    for (g, mut lw) in state.assignments.iter_mut().zip(log_weights) {
        normalize_log_weights(&mut lw);
        *g = sample_categorical(&lw, rng);
    }
    Ok(())
}

/// Refreshes `ω_il ~ PG(1, S^(G_i)_l)`. Each subject draws from its own
/// substream, so the result does not depend on the thread count.
pub fn update_omega<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    data: &ChainData<'_>,
    rng: &mut R,
) -> Result<()> {
    let sims = state.params.similarities(&data.map)?;
    let edges = data.map.edges();
    let seed: u64 = rng.random();
    let assignments = &state.assignments;
    let mut used = vec![false; sims.len()];
    assignments.iter().for_each(|&g| used[g] = true);
    let samplers: Vec<Vec<PolyaGamma>> = sims
        .iter()
        .zip(&used)
        .map(|(s, &u)| {
            if u {
                s.iter().map(|&sl| PolyaGamma::new(sl)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    state
        .omega
        .par_chunks_mut(edges.max(1))
        .enumerate()
        .for_each(|(i, row)| {
            let mut sub = subject_stream(seed, i);
            for (w, pg) in row.iter_mut().zip(&samplers[assignments[i]]) {
                *w = pg.sample(&mut sub);
            }
        });
    Ok(())
}

/// Mean and variance of each `Z_l` given everything else.
pub fn z_full_conditionals(
    state: &AugmentedState,
    data: &ChainData<'_>,
    hyper: &HyperParameters,
) -> Result<Vec<(f64, f64)>> {
    let edges = data.map.edges();
    let deviations = state
        .params
        .components
        .iter()
        .map(|c| c.deviation(&data.map))
        .collect::<Result<Vec<_>>>()?;
    let mut precision = vec![1.0 / hyper.z_var; edges];
    let mut shift = vec![hyper.z_mean / hyper.z_var; edges];
    for (i, obs) in data.observations.iter().enumerate() {
        let d = &deviations[state.assignments[i]];
        let omega = &state.omega[i * edges..(i + 1) * edges];
        for l in 0..edges {
            precision[l] += omega[l];
            shift[l] += obs.edges[l] as f64 - 0.5 - omega[l] * d[l];
        }
    }
    Ok(precision
        .into_iter()
        .zip(shift)
        .map(|(p, b)| (b / p, 1.0 / p))
        .collect())
}

pub fn update_z<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    data: &ChainData<'_>,
    hyper: &HyperParameters,
    rng: &mut R,
) -> Result<()> {
    let conditionals = z_full_conditionals(state, data, hyper)?;
    for (z, (mean, var)) in state.params.z.iter_mut().zip(conditionals) {
        *z = mean + var.sqrt() * rng.sample::<f64, _>(StandardNormal);
    }
    Ok(())
}

/// Updates latent coordinates and shrinkage auxiliaries of every component.
///
/// Works on the scaled coordinates `W_vr = X_vr √λ_r`, whose prior is
/// `Normal(0, λ_r)`. Given `ω`, each row `W_v` has a Gaussian conditional, and
/// given `W` each `ϑ_m` has a gamma conditional.
pub fn update_factors<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    data: &ChainData<'_>,
    hyper: &HyperParameters,
    rng: &mut R,
) -> Result<()> {
    let map = &data.map;
    let (nodes, edges, rank) = (map.nodes(), map.edges(), state.params.rank);
    let n_components = state.params.n_components();

    // Per-component sufficient statistics: Σ ω_il and Σ (a_il - 1/2).
    let mut omega_sum = vec![vec![0.0; edges]; n_components];
    let mut kappa_sum = vec![vec![0.0; edges]; n_components];
    for (i, obs) in data.observations.iter().enumerate() {
        let h = state.assignments[i];
        let omega = &state.omega[i * edges..(i + 1) * edges];
        for l in 0..edges {
            omega_sum[h][l] += omega[l];
            kappa_sum[h][l] += obs.edges[l] as f64 - 0.5;
        }
    }

    for h in 0..n_components {
        let theta = &mut state.theta[h];
        let factors = &mut state.params.components[h];
        let lambda = factors.lambda().to_vec();
        // Prior precisions 1/λ_r, accumulated directly from ϑ.
        let prior_precision: Vec<f64> = theta
            .iter()
            .scan(1.0, |acc, &t| {
                *acc *= t;
                Some(*acc)
            })
            .collect();

        let mut scaled: Vec<f64> = factors
            .coords()
            .chunks(rank)
            .flat_map(|row| row.iter().zip(&lambda).map(|(x, w)| x * w.sqrt()))
            .collect();

        let (om, ka) = (&omega_sum[h], &kappa_sum[h]);
        let z = &state.params.z;
        for v in 0..nodes {
            let mut precision = DMatrix::<f64>::from_diagonal(&DVector::from_vec(
                prior_precision.clone(),
            ));
            let mut linear = DVector::<f64>::zeros(rank);
            for u in 0..nodes {
                if u == v {
                    continue;
                }
                let l = map.index_unordered(v, u);
                if om[l] == 0.0 {
                    continue;
                }
                let w_u = &scaled[u * rank..(u + 1) * rank];
                let coef = ka[l] - om[l] * z[l];
                for a in 0..rank {
                    linear[a] += coef * w_u[a];
                    for b in 0..=a {
                        precision[(a, b)] += om[l] * w_u[a] * w_u[b];
                    }
                }
            }
            for a in 0..rank {
                for b in 0..a {
                    precision[(b, a)] = precision[(a, b)];
                }
            }
            let chol = precision.cholesky().ok_or_else(|| {
                Error::InvalidParameters("coordinate precision is not positive definite".into())
            })?;
            let mean = chol.solve(&linear);
            let noise = DVector::<f64>::from_fn(rank, |_, _| rng.sample(StandardNormal));
            let offset = chol
                .l()
                .transpose()
                .solve_upper_triangular(&noise)
                .expect("triangular factor is nonsingular");
            for a in 0..rank {
                scaled[v * rank + a] = mean[a] + offset[a];
            }
        }

        // Column sums of squares of W.
        let col_ss: Vec<f64> = (0..rank)
            .map(|r| (0..nodes).map(|v| scaled[v * rank + r].powi(2)).sum())
            .collect();
        for m in 0..rank {
            let mut rate = 1.0;
            // τ_r^(m) = Π_{t ≤ r, t ≠ m} ϑ_t
            let mut tau = theta[..m].iter().product::<f64>();
            for r in m..rank {
                if r > m {
                    tau *= theta[r];
                }
                rate += 0.5 * tau * col_ss[r];
            }
            let shape = hyper.shrinkage_shape(m) + 0.5 * (nodes * (rank - m)) as f64;
            theta[m] = Gamma::new(shape, 1.0 / rate)
                .map_err(|e| Error::InvalidParameters(e.to_string()))?
                .sample(rng);
        }

        let new_lambda = lambda_from_theta(theta);
        for (v, row) in factors.coords_mut().chunks_mut(rank).enumerate() {
            for r in 0..rank {
                row[r] = scaled[v * rank + r] / new_lambda[r].sqrt();
            }
        }
        *factors.lambda_mut() = new_lambda;
    }
    Ok(())
}

/// Probability of the alternative given the assignment counts, with the
/// mixing weights integrated out.
pub fn alternative_probability(
    counts0: &[usize],
    counts1: &[usize],
    concentration: f64,
    prior_t1: f64,
) -> f64 {
    if prior_t1 <= 0.0 {
        return 0.0;
    }
    if prior_t1 >= 1.0 {
        return 1.0;
    }
    let pooled: Vec<usize> = counts0.iter().zip(counts1).map(|(a, b)| a + b).collect();
    let log_bf = dirichlet_multinomial_log_marginal(counts0, concentration)
        + dirichlet_multinomial_log_marginal(counts1, concentration)
        - dirichlet_multinomial_log_marginal(&pooled, concentration);
    logistic(prior_t1.ln() - (-prior_t1).ln_1p() + log_bf)
}

pub fn update_weights_and_t<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    data: &ChainData<'_>,
    hyper: &HyperParameters,
    rng: &mut R,
) -> Result<()> {
    let conc = hyper.concentration();
    let [c0, c1] = state.component_counts(data);
    let p1 = alternative_probability(&c0, &c1, conc, hyper.prior_t1);
    if rng.random::<f64>() < p1 {
        state.params.hypothesis = Hypothesis::Alternative;
        for (y, counts) in [c0, c1].iter().enumerate() {
            let alpha: Vec<f64> = counts.iter().map(|&c| conc + c as f64).collect();
            state.params.nu[y] = sample_dirichlet(&alpha, rng);
        }
    } else {
        state.params.hypothesis = Hypothesis::Null;
        let alpha: Vec<f64> = c0
            .iter()
            .zip(&c1)
            .map(|(&a, &b)| conc + (a + b) as f64)
            .collect();
        let shared = sample_dirichlet(&alpha, rng);
        state.params.nu = [shared.clone(), shared];
    }
    Ok(())
}

pub fn update_p_case<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    data: &ChainData<'_>,
    hyper: &HyperParameters,
    rng: &mut R,
) -> Result<()> {
    let [n0, n1] = data.group_sizes;
    let beta = Beta::new(hyper.a1 + n1 as f64, hyper.a0 + n0 as f64)
        .map_err(|e| Error::InvalidParameters(e.to_string()))?;
    let p: f64 = beta.sample(rng);
    state.params.p_case = p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
    Ok(())
}

/// One full systematic-scan sweep.
pub fn sweep<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    data: &ChainData<'_>,
    hyper: &HyperParameters,
    rng: &mut R,
) -> Result<()> {
    update_assignments(state, data, rng)?;
    update_omega(state, data, rng)?;
    update_z(state, data, hyper, rng)?;
    update_factors(state, data, hyper, rng)?;
    update_weights_and_t(state, data, hyper, rng)?;
    update_p_case(state, data, hyper, rng)?;
    Ok(())
}

/// Sweep without the assignment update, used while the chain warms up.
pub fn warmup_sweep<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    data: &ChainData<'_>,
    hyper: &HyperParameters,
    rng: &mut R,
) -> Result<()> {
    update_omega(state, data, rng)?;
    update_z(state, data, hyper, rng)?;
    update_factors(state, data, hyper, rng)?;
    update_weights_and_t(state, data, hyper, rng)?;
    update_p_case(state, data, hyper, rng)?;
    Ok(())
}

/// Upper bound on the warm-up sweeps at the start of burn-in.
pub const WARMUP_SWEEPS: usize = 100;

/// Lloyd iterations of the initial clustering.
const KMEANS_ITERATIONS: usize = 50;

/// Independent k-means++ seedings; the lowest within-cluster sum of squares wins.
const KMEANS_RESTARTS: usize = 10;

/// k-means on the edge vectors with k-means++ seeding, ignoring labels.
/// Returns a cluster per subject; with fewer distinct networks than `k`
/// some clusters stay empty.
pub fn kmeans_assignments<R: Rng + ?Sized>(
    observations: &[NetworkObservation],
    k: usize,
    rng: &mut R,
) -> Vec<usize> {
    let n = observations.len();
    if n == 0 || k == 0 {
        return vec![0; n];
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..KMEANS_RESTARTS {
        let (inertia, labels) = kmeans_once(observations, k, rng);
        if best.as_ref().is_none_or(|(b, _)| inertia < *b) {
            best = Some((inertia, labels));
        }
    }
    best.expect("at least one restart").1
}

fn kmeans_once<R: Rng + ?Sized>(
    observations: &[NetworkObservation],
    k: usize,
    rng: &mut R,
) -> (f64, Vec<usize>) {
    let n = observations.len();
    let dist = |a: &[u8], c: &[f64]| -> f64 {
        a.iter().zip(c).map(|(&x, &m)| (f64::from(x) - m).powi(2)).sum()
    };
    let as_f64 = |i: usize| -> Vec<f64> { observations[i].edges.iter().map(|&x| f64::from(x)).collect() };
    let mut centers = vec![as_f64(rng.random_range(0..n))];
    let mut nearest: Vec<f64> = observations.iter().map(|o| dist(&o.edges, &centers[0])).collect();
    while centers.len() < k.min(n) {
        let total: f64 = nearest.iter().sum();
        if total <= 0.0 {
            break;
        }
        let next = sample_categorical(&nearest.iter().map(|d| d / total).collect::<Vec<_>>(), rng);
        centers.push(as_f64(next));
        let c = centers.last().expect("just pushed");
        for (d, o) in nearest.iter_mut().zip(observations) {
            *d = d.min(dist(&o.edges, c));
        }
    }
    let mut labels = vec![0; n];
    for _ in 0..KMEANS_ITERATIONS {
        let mut changed = false;
        for (label, o) in labels.iter_mut().zip(observations) {
            let best = (0..centers.len())
                .min_by(|&a, &b| dist(&o.edges, &centers[a]).total_cmp(&dist(&o.edges, &centers[b])))
                .expect("at least one center");
            changed |= *label != best;
            *label = best;
        }
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<&NetworkObservation> =
                observations.iter().zip(&labels).filter(|(_, &l)| l == c).map(|(o, _)| o).collect();
            if members.is_empty() {
                continue;
            }
            for (l, m) in center.iter_mut().enumerate() {
                *m = members.iter().map(|o| f64::from(o.edges[l])).sum::<f64>() / members.len() as f64;
            }
        }
        if !changed {
            break;
        }
    }
    let inertia = observations
        .iter()
        .zip(&labels)
        .map(|(o, &l)| dist(&o.edges, &centers[l]))
        .sum();
    (inertia, labels)
}

/// Complete-data log joint `ln p(params, ϑ) + Σ_i ln p(y_i, G_i, a_i | params)`.
pub fn log_joint(
    state: &AugmentedState,
    data: &ChainData<'_>,
    hyper: &HyperParameters,
) -> Result<f64> {
    let mut total = log_prior_density(&state.params, &state.theta, hyper)?;
    let sims = state.params.similarities(&data.map)?;
    let base: Vec<f64> = sims
        .iter()
        .map(|s| s.iter().map(|&sl| log_logistic(-sl)).sum())
        .collect();
    for ((obs, present), &g) in data
        .observations
        .iter()
        .zip(&data.present)
        .zip(&state.assignments)
    {
        total += state.params.group_probability(obs.label).ln()
            + state.params.weights(obs.label)[g].ln()
            + base[g]
            + present.iter().map(|&l| sims[g][l as usize]).sum::<f64>();
    }
    Ok(total)
}

/// A retained posterior draw.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub params: MixtureParameters,
    pub theta: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    /// Per-component edge probabilities, when recorded.
    pub pi: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawsMeta {
    pub nodes: usize,
    pub rank: usize,
    pub components: usize,
    pub n_subjects: usize,
    pub group_sizes: [usize; 2],
    pub hyper: HyperParameters,
    pub config: SamplerConfig,
    /// SHA-256 of the fitted data, see [`data_checksum`].
    pub data_checksum: String,
}

impl DrawsMeta {
    pub fn single_group(&self) -> bool {
        self.group_sizes.contains(&0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraws {
    pub meta: DrawsMeta,
    pub draws: Vec<Draw>,
    /// Complete-data log joint after every sweep, including burn-in.
    pub log_joint_trace: Vec<f64>,
}

impl PosteriorDraws {
    pub fn map(&self) -> Result<EdgeIndexMap> {
        EdgeIndexMap::new(self.meta.nodes)
    }

    /// Errors when the fit saw only one group.
    pub fn require_two_groups(&self) -> Result<()> {
        if self.meta.single_group() {
            Err(Error::SingleGroup)
        } else {
            Ok(())
        }
    }
}

/// SHA-256 over node count, subject ids, labels and edge vectors, in order.
pub fn data_checksum(data: &[NetworkObservation]) -> String {
    let mut hasher = Sha256::new();
    let nodes = data
        .first()
        .and_then(|o| EdgeIndexMap::from_edge_count(o.edges.len()).ok())
        .map_or(0, |m| m.nodes());
    hasher.update((nodes as u64).to_le_bytes());
    hasher.update((data.len() as u64).to_le_bytes());
    for obs in data {
        hasher.update((obs.subject_id.len() as u64).to_le_bytes());
        hasher.update(obs.subject_id.as_bytes());
        hasher.update([obs.label.index() as u8]);
        hasher.update(&obs.edges);
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Runs a chain and keeps every `thin`-th sweep after burn-in.
///
/// The parameters start from a prior draw and the assignments from a k-means
/// clustering of the networks (labels are not used). The first
/// `min(burn_in, WARMUP_SWEEPS)` sweeps leave the assignments alone so each
/// component adapts to its cluster before subjects can move. Starting from
/// prior assignments instead tends to merge distinct subpopulations into one
/// component, and an emptied component's prior-drawn factors rarely attract
/// subjects again.
pub fn run_chain(
    data: &[NetworkObservation],
    hyper: &HyperParameters,
    config: &SamplerConfig,
) -> Result<PosteriorDraws> {
    hyper.validate()?;
    config.validate()?;
    let chain_data = ChainData::new(data)?;
    let map = chain_data.map.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = AugmentedState::from_prior(hyper, &chain_data, &mut rng)?;
    state.assignments = kmeans_assignments(data, hyper.components, &mut rng);
    let warmup = config.burn_in.min(WARMUP_SWEEPS);

    let mut draws = Vec::with_capacity(config.kept_draws());
    let mut trace = Vec::with_capacity(config.n_iter);
    for iter in 0..config.n_iter {
        if iter < warmup {
            warmup_sweep(&mut state, &chain_data, hyper, &mut rng)?;
        } else {
            sweep(&mut state, &chain_data, hyper, &mut rng)?;
        }
        trace.push(log_joint(&state, &chain_data, hyper)?);
        if config.keeps(iter) {
            let pi = if config.record_pi {
                Some(
                    state
                        .params
                        .edge_probabilities(&map)?
                        .iter()
                        .map(|p| p.to_vec())
                        .collect(),
                )
            } else {
                None
            };
            draws.push(Draw {
                params: state.params.clone(),
                theta: state.theta.clone(),
                assignments: state.assignments.clone(),
                pi,
            });
        }
    }

    Ok(PosteriorDraws {
        meta: DrawsMeta {
            nodes: map.nodes(),
            rank: hyper.rank,
            components: hyper.components,
            n_subjects: data.len(),
            group_sizes: chain_data.group_sizes,
            hyper: hyper.clone(),
            config: config.clone(),
            data_checksum: data_checksum(data),
        },
        draws,
        log_joint_trace: trace,
    })
}

/// Redraws `(y, G, a)` for every subject from the current parameters, keeping
/// subject ids. Used for simulation-based calibration of the sampler.
pub fn redraw_data<R: Rng + ?Sized>(
    state: &mut AugmentedState,
    observations: &mut [NetworkObservation],
    map: &EdgeIndexMap,
    rng: &mut R,
) -> Result<()> {
    let pis = state.params.edge_probabilities(map)?;
    for (obs, g) in observations.iter_mut().zip(state.assignments.iter_mut()) {
        let group = if rng.random::<f64>() < state.params.p_case {
            Group::Case
        } else {
            Group::Control
        };
        *g = sample_categorical(state.params.weights(group), rng);
        obs.label = group;
        obs.edges = crate::model::sample_network(&pis[*g], rng);
    }
    Ok(())
}
