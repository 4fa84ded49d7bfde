//! Posterior functionals: the global test, per-edge Cramér's V tests, edge
//! differences and test degrees. Classification and the frequentist baseline
//! live in the submodules.

pub mod classify;
pub mod fisher;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MixtureParameters;
use crate::network::{EdgeIndexMap, Hemisphere, NodeMetadata};
use crate::numeric::{logistic, sorted_sum};
use crate::sampler::PosteriorDraws;

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_CUTOFF: f64 = 0.95;

/// Posterior probability of the alternative: the fraction of draws with `T = 1`.
pub fn global_test(draws: &PosteriorDraws) -> Result<f64> {
    draws.require_two_groups()?;
    if draws.draws.is_empty() {
        return Err(Error::EmptyData);
    }
    let alt = draws
        .draws
        .iter()
        .filter(|d| d.params.hypothesis.is_alternative())
        .count();
    Ok(alt as f64 / draws.draws.len() as f64)
}

/// Per-group edge probabilities, indexed `[y][l]`.
pub type GroupEdgeTable = [Vec<f64>; 2];

/// Per-edge `Pr(a_l = 1 | y)` and `Pr(a_l = 0 | y)` for both groups, indexed
/// `[y][l]`. The mixture sums run in sorted order so they do not depend on
/// the component labels.
pub fn group_edge_probabilities(
    params: &MixtureParameters,
    map: &EdgeIndexMap,
) -> Result<(GroupEdgeTable, GroupEdgeTable)> {
    let sims = params.similarities(map)?;
    let edges = map.edges();
    let mut present = [vec![0.0; edges], vec![0.0; edges]];
    let mut absent = [vec![0.0; edges], vec![0.0; edges]];
    let mut on = Vec::with_capacity(sims.len());
    let mut off = Vec::with_capacity(sims.len());
    for y in 0..2 {
        let nu = &params.nu[y];
        for l in 0..edges {
            on.clear();
            off.clear();
            for (s, &w) in sims.iter().zip(nu) {
                on.push(w * logistic(s[l]));
                off.push(w * logistic(-s[l]));
            }
            present[y][l] = sorted_sum(&mut on);
            absent[y][l] = sorted_sum(&mut off);
        }
    }
    Ok((present, absent))
}

/// Cramér's V between the group label and each edge.
///
/// `ρ²_l = Σ_y p_Y(y) Σ_a (p_{l|y}(a) - p_l(a))² / p_l(a)`. A marginal cell
/// with zero probability gives `ρ_l = 0` when the group conditionals agree and
/// an error otherwise.
pub fn cramers_v(params: &MixtureParameters, map: &EdgeIndexMap) -> Result<Vec<f64>> {
    let (present, absent) = group_edge_probabilities(params, map)?;
    let py = [1.0 - params.p_case, params.p_case];
    (0..map.edges())
        .map(|l| {
            let cond = [[absent[0][l], present[0][l]], [absent[1][l], present[1][l]]];
            let mut rho2 = 0.0;
            for a in 0..2 {
                let marginal = py[0] * cond[0][a] + py[1] * cond[1][a];
                if marginal <= 0.0 {
                    if cond[0] == cond[1] {
                        return Ok(0.0);
                    }
                    return Err(Error::DegenerateMarginal(l));
                }
                for y in 0..2 {
                    rho2 += py[y] * (cond[y][a] - marginal).powi(2) / marginal;
                }
            }
            Ok(rho2.sqrt().min(1.0))
        })
        .collect()
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTestSetting(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )))
    }
}

/// Per edge, the fraction of draws whose Cramér's V exceeds `epsilon`.
pub fn local_test(draws: &PosteriorDraws, epsilon: f64) -> Result<Vec<f64>> {
    draws.require_two_groups()?;
    check_epsilon(epsilon)?;
    let map = draws.map()?;
    let per_draw = draws
        .draws
        .par_iter()
        .map(|d| cramers_v(&d.params, &map))
        .collect::<Result<Vec<_>>>()?;
    let mut exceed = vec![0usize; map.edges()];
    for rho in &per_draw {
        for (count, &r) in exceed.iter_mut().zip(rho) {
            *count += usize::from(r > epsilon);
        }
    }
    let n = per_draw.len().max(1) as f64;
    Ok(exceed.into_iter().map(|c| c as f64 / n).collect())
}

/// Posterior mean of `Pr(a_l = 1 | y = 1) - Pr(a_l = 1 | y = 0)`.
pub fn edge_difference(draws: &PosteriorDraws) -> Result<Vec<f64>> {
    draws.require_two_groups()?;
    let map = draws.map()?;
    let per_draw = draws
        .draws
        .par_iter()
        .map(|d| {
            let (present, _) = group_edge_probabilities(&d.params, &map)?;
            Ok(present[1]
                .iter()
                .zip(&present[0])
                .map(|(p1, p0)| p1 - p0)
                .collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let n = per_draw.len().max(1) as f64;
    let mut mean = vec![0.0; map.edges()];
    for diff in &per_draw {
        for (m, d) in mean.iter_mut().zip(diff) {
            *m += d;
        }
    }
    Ok(mean.into_iter().map(|m| (m / n).clamp(-1.0, 1.0)).collect())
}

/// Global and local test results for one fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub nodes: usize,
    pub pr_h1: f64,
    pub epsilon: f64,
    pub decision_cutoff: f64,
    /// `Pr(ρ_l > ε | data)` per edge.
    pub rho_exceed: Vec<f64>,
    pub edge_diff: Vec<f64>,
    /// `rho_exceed > decision_cutoff`.
    pub significant_edges: Vec<bool>,
}

impl TestReport {
    pub fn from_draws(draws: &PosteriorDraws, epsilon: f64, decision_cutoff: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&decision_cutoff) {
            return Err(Error::InvalidTestSetting(format!(
                "decision cutoff must lie in [0, 1], got {decision_cutoff}"
            )));
        }
        let pr_h1 = global_test(draws)?;
        let rho_exceed = local_test(draws, epsilon)?;
        let edge_diff = edge_difference(draws)?;
        let significant_edges = rho_exceed.iter().map(|&p| p > decision_cutoff).collect();
        Ok(Self {
            nodes: draws.meta.nodes,
            pr_h1,
            epsilon,
            decision_cutoff,
            rho_exceed,
            edge_diff,
            significant_edges,
        })
    }

    pub fn significant_count(&self) -> usize {
        self.significant_edges.iter().filter(|&&s| s).count()
    }
}

/// Per node, the number of incident significant edges.
pub fn test_degree(significant: &[bool], map: &EdgeIndexMap) -> Result<Vec<usize>> {
    if significant.len() != map.edges() {
        return Err(Error::DimensionMismatch {
            what: "significance vector",
            expected: map.edges(),
            found: significant.len(),
        });
    }
    let mut degree = vec![0; map.nodes()];
    for ((v, u), &s) in map.pairs().zip(significant) {
        if s {
            degree[v] += 1;
            degree[u] += 1;
        }
    }
    Ok(degree)
}

/// Test degrees summed within one hemisphere and lobe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeGroup {
    pub hemisphere: Hemisphere,
    pub lobe: String,
    pub nodes: usize,
    pub total_degree: usize,
    pub max_degree: usize,
}

/// Groups test degrees by hemisphere, then lobe.
pub fn group_degrees(degree: &[usize], metadata: &NodeMetadata) -> Result<Vec<DegreeGroup>> {
    if degree.len() != metadata.len() {
        return Err(Error::DimensionMismatch {
            what: "node metadata rows",
            expected: degree.len(),
            found: metadata.len(),
        });
    }
    let mut groups: BTreeMap<(Hemisphere, &str), DegreeGroup> = BTreeMap::new();
    for (info, &d) in metadata.nodes().iter().zip(degree) {
        let g = groups
            .entry((info.hemisphere, info.lobe.as_str()))
            .or_insert_with(|| DegreeGroup {
                hemisphere: info.hemisphere,
                lobe: info.lobe.clone(),
                nodes: 0,
                total_degree: 0,
                max_degree: 0,
            });
        g.nodes += 1;
        g.total_degree += d;
        g.max_degree = g.max_degree.max(d);
    }
    Ok(groups.into_values().collect())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::{ComponentFactors, Hypothesis};
    use crate::network::NodeInfo;
    use crate::priors::HyperParameters;
    use crate::sampler::{Draw, DrawsMeta, SamplerConfig};

    /// Two-node mixture whose components have the given probabilities on the
    /// single edge: `Z = 0` and a rank-1 deviation `X_0 X_1 = logit(π)`.
    pub(crate) fn single_edge_params(
        pis: &[f64],
        nu0: Vec<f64>,
        nu1: Vec<f64>,
        p_case: f64,
    ) -> MixtureParameters {
        let components = pis
            .iter()
            .map(|&p| {
                let logit = (p / (1.0 - p)).ln();
                ComponentFactors::new(2, 1, vec![logit, 1.0], vec![1.0]).unwrap()
            })
            .collect();
        MixtureParameters {
            nodes: 2,
            rank: 1,
            z: vec![0.0],
            components,
            hypothesis: if nu0 == nu1 {
                Hypothesis::Null
            } else {
                Hypothesis::Alternative
            },
            nu: [nu0, nu1],
            p_case,
        }
    }

    pub(crate) fn draws_from(params: Vec<MixtureParameters>) -> PosteriorDraws {
        let p = &params[0];
        PosteriorDraws {
            meta: DrawsMeta {
                nodes: p.nodes,
                rank: p.rank,
                components: p.n_components(),
                n_subjects: 2,
                group_sizes: [1, 1],
                hyper: HyperParameters::default(),
                config: SamplerConfig::default(),
                data_checksum: String::new(),
            },
            draws: params
                .into_iter()
                .map(|params| Draw {
                    theta: vec![vec![1.0; params.rank]; params.n_components()],
                    assignments: vec![0, 0],
                    params,
                    pi: None,
                })
                .collect(),
            log_joint_trace: vec![],
        }
    }

    #[test]
    fn analytic_single_edge_value() {
        let params = single_edge_params(&[0.2, 0.8], vec![1.0, 0.0], vec![0.0, 1.0], 0.5);
        let map = EdgeIndexMap::new(2).unwrap();
        let rho = cramers_v(&params, &map).unwrap();
        assert!((rho[0] - 0.6).abs() < 1e-12, "{}", rho[0]);
    }

    #[test]
    fn equal_weights_give_zero() {
        let params = single_edge_params(&[0.2, 0.8], vec![0.3, 0.7], vec![0.3, 0.7], 0.4);
        let map = EdgeIndexMap::new(2).unwrap();
        assert_eq!(cramers_v(&params, &map).unwrap(), vec![0.0]);
        let draws = draws_from(vec![params.clone(), params]);
        assert_eq!(local_test(&draws, 0.1).unwrap(), vec![0.0]);
        assert_eq!(edge_difference(&draws).unwrap(), vec![0.0]);
    }

    #[test]
    fn edge_difference_degenerate_weights() {
        let params = single_edge_params(&[0.9, 0.1], vec![0.0, 1.0], vec![1.0, 0.0], 0.5);
        let draws = draws_from(vec![params]);
        let diff = edge_difference(&draws).unwrap();
        assert!((diff[0] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn global_test_counts_alternatives() {
        let alt = single_edge_params(&[0.9, 0.1], vec![0.0, 1.0], vec![1.0, 0.0], 0.5);
        let null = single_edge_params(&[0.9, 0.1], vec![0.5, 0.5], vec![0.5, 0.5], 0.5);
        let all_alt = draws_from(vec![alt.clone(), alt.clone()]);
        assert_eq!(global_test(&all_alt).unwrap(), 1.0);
        let mixed = draws_from(vec![alt.clone(), null.clone(), null, alt]);
        assert_eq!(global_test(&mixed).unwrap(), 0.5);
        let mut single = mixed;
        single.meta.group_sizes = [4, 0];
        assert!(global_test(&single).is_err());
        assert!(local_test(&single, 0.1).is_err());
    }

    #[test]
    fn epsilon_must_be_interior() {
        let params = single_edge_params(&[0.9, 0.1], vec![0.0, 1.0], vec![1.0, 0.0], 0.5);
        let draws = draws_from(vec![params]);
        assert!(local_test(&draws, 0.0).is_err());
        assert!(local_test(&draws, 1.0).is_err());
        assert!(TestReport::from_draws(&draws, 0.1, 1.5).is_err());
    }

    #[test]
    fn degenerate_marginal_handling() {
        let map = EdgeIndexMap::new(2).unwrap();
        // Edge probabilities that underflow to exactly 0 and 1.
        let mut params = single_edge_params(&[0.5, 0.5], vec![1.0, 0.0], vec![0.0, 1.0], 0.0);
        params.z = vec![-800.0];
        params.components[0] = ComponentFactors::new(2, 1, vec![0.0, 0.0], vec![1.0]).unwrap();
        params.components[1] = ComponentFactors::new(2, 1, vec![0.0, 0.0], vec![1.0]).unwrap();
        assert_eq!(cramers_v(&params, &map).unwrap(), vec![0.0]);
        // Group 1 differs but carries no probability mass, so p_l(1) = 0.
        params.components[1] = ComponentFactors::new(2, 1, vec![1600.0, 1.0], vec![1.0]).unwrap();
        assert!(matches!(cramers_v(&params, &map), Err(Error::DegenerateMarginal(0))));
    }

    #[test]
    fn test_degree_cases() {
        let map = EdgeIndexMap::new(4).unwrap();
        assert_eq!(test_degree(&[false; 6], &map).unwrap(), vec![0; 4]);
        // Nodes 2 and 3 (1-based) connected to node 1: edges (1,0) and (2,0).
        let mut sig = vec![false; 6];
        sig[map.edge_index(1, 0).unwrap()] = true;
        sig[map.edge_index(2, 0).unwrap()] = true;
        assert_eq!(test_degree(&sig, &map).unwrap(), vec![2, 1, 1, 0]);
        assert!(test_degree(&sig[..5], &map).is_err());
    }

    #[test]
    fn degree_groups_sum_to_total() {
        let info = |name: &str, hemisphere, lobe: &str| NodeInfo {
            name: name.into(),
            hemisphere,
            lobe: lobe.into(),
        };
        let meta = NodeMetadata::new(vec![
            info("a", Hemisphere::Left, "frontal"),
            info("b", Hemisphere::Right, "frontal"),
            info("c", Hemisphere::Left, "frontal"),
            info("d", Hemisphere::Left, "occipital"),
        ])
        .unwrap();
        let groups = group_degrees(&[2, 1, 1, 0], &meta).unwrap();
        assert_eq!(groups.len(), 3);
        assert_eq!(groups[0].lobe, "frontal");
        assert_eq!(groups[0].hemisphere, Hemisphere::Left);
        assert_eq!(groups[0].total_degree, 3);
        assert_eq!(groups[0].max_degree, 2);
        assert_eq!(groups.iter().map(|g| g.total_degree).sum::<usize>(), 4);
        assert!(group_degrees(&[1, 2], &meta).is_err());
    }
}
