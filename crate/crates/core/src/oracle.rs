//! Brute-force reference computations for tiny networks.
//!
//! Everything here is evaluated directly in linear space from the raw
//! parameter fields, with compensated summation, and shares no code with the
//! log-space paths of [`crate::model`] and [`crate::testing`].

use crate::error::{Error, Result};
use crate::model::MixtureParameters;
use crate::network::Group;

/// Largest node count accepted (`2^10` configurations).
pub const MAX_NODES: usize = 5;

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Probability of every edge configuration, indexed by the binary encoding
/// whose bit `l` is `a_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPmfTable {
    pub nodes: usize,
    pub entries: Vec<f64>,
}

impl ExactPmfTable {
    pub fn edges(&self) -> usize {
        self.nodes * (self.nodes - 1) / 2
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.entries.iter().copied())
    }

    /// `Pr(a_l = 1)` by summing the configurations that contain edge `l`.
    pub fn edge_marginal(&self, l: usize) -> f64 {
        compensated_sum(
            self.entries
                .iter()
                .enumerate()
                .filter(|(code, _)| code >> l & 1 == 1)
                .map(|(_, &p)| p),
        )
    }
}

/// The edge vector encoded by `code`.
pub fn decode_configuration(code: usize, edges: usize) -> Vec<u8> {
    (0..edges).map(|l| (code >> l & 1) as u8).collect()
}

fn check_size(params: &MixtureParameters) -> Result<()> {
    if params.nodes > MAX_NODES {
        return Err(Error::TooLargeForEnumeration(params.nodes));
    }
    Ok(())
}

/// Edge probabilities of component `h`, node pairs visited column by column.
fn component_edge_probabilities(params: &MixtureParameters, h: usize) -> Vec<f64> {
    let c = &params.components[h];
    let coords = c.coords();
    let lambda = c.lambda();
    let rank = params.rank;
    let mut probs = Vec::with_capacity(params.z.len());
    let mut l = 0;
    for u in 0..params.nodes {
        for v in u + 1..params.nodes {
            let mut s = params.z[l];
            for r in 0..rank {
                s += lambda[r] * coords[v * rank + r] * coords[u * rank + r];
            }
            probs.push(1.0 / (1.0 + (-s).exp()));
            l += 1;
        }
    }
    probs
}

fn product_table(probs: &[f64]) -> Vec<f64> {
    let edges = probs.len();
    (0..1usize << edges)
        .map(|code| {
            (0..edges)
                .map(|l| if code >> l & 1 == 1 { probs[l] } else { 1.0 - probs[l] })
                .product()
        })
        .collect()
}

/// Component pmf over all configurations.
pub fn enumerate_component_pmf(params: &MixtureParameters, h: usize) -> Result<ExactPmfTable> {
    check_size(params)?;
    let probs = component_edge_probabilities(params, h);
    Ok(ExactPmfTable {
        nodes: params.nodes,
        entries: product_table(&probs),
    })
}

fn mixture_table(params: &MixtureParameters, weights: &[f64]) -> Vec<f64> {
    let tables: Vec<Vec<f64>> = (0..params.n_components())
        .map(|h| product_table(&component_edge_probabilities(params, h)))
        .collect();
    (0..tables[0].len())
        .map(|code| compensated_sum(tables.iter().zip(weights).map(|(t, &w)| w * t[code])))
        .collect()
}

/// `Pr(a | y)` when `group` is given, otherwise `Pr(a)` with the group
/// marginalized out.
pub fn enumerate_pmf(params: &MixtureParameters, group: Option<Group>) -> Result<ExactPmfTable> {
    check_size(params)?;
    let p1 = params.p_case;
    let weights: Vec<f64> = match group {
        Some(Group::Control) => params.nu[0].clone(),
        Some(Group::Case) => params.nu[1].clone(),
        None => params.nu[0]
            .iter()
            .zip(&params.nu[1])
            .map(|(&w0, &w1)| (1.0 - p1) * w0 + p1 * w1)
            .collect(),
    };
    Ok(ExactPmfTable {
        nodes: params.nodes,
        entries: mixture_table(params, &weights),
    })
}

/// `Pr(y, a)` for both groups, indexed by group.
pub fn enumerate_joint(params: &MixtureParameters) -> Result<[ExactPmfTable; 2]> {
    let py = [1.0 - params.p_case, params.p_case];
    let mut out = [
        enumerate_pmf(params, Some(Group::Control))?,
        enumerate_pmf(params, Some(Group::Case))?,
    ];
    for (table, p) in out.iter_mut().zip(py) {
        table.entries.iter_mut().for_each(|e| *e *= p);
    }
    Ok(out)
}

/// Cramér's V from the exact joint of `(y, a_l)`, in the chi-square form
/// `ρ² = Σ_{y,a} (p(y, a) - p(y) p(a))² / (p(y) p(a))`.
pub fn exact_cramers_v(params: &MixtureParameters) -> Result<Vec<f64>> {
    let joint = enumerate_joint(params)?;
    let edges = joint[0].edges();
    Ok((0..edges)
        .map(|l| {
            let cell = |y: usize, a: usize| {
                compensated_sum(
                    joint[y]
                        .entries
                        .iter()
                        .enumerate()
                        .filter(|(code, _)| code >> l & 1 == a)
                        .map(|(_, &p)| p),
                )
            };
            let table = [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]];
            let py = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
            let pa = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
            let mut chi2 = 0.0;
            for y in 0..2 {
                for a in 0..2 {
                    let expected = py[y] * pa[a];
                    if expected > 0.0 {
                        chi2 += (table[y][a] - expected).powi(2) / expected;
                    }
                }
            }
            chi2.sqrt()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ComponentFactors, Hypothesis};

    fn uniform(nodes: usize) -> MixtureParameters {
        let edges = nodes * (nodes - 1) / 2;
        MixtureParameters {
            nodes,
            rank: 1,
            z: vec![0.0; edges],
            components: vec![ComponentFactors::new(nodes, 1, vec![0.0; nodes], vec![1.0]).unwrap()],
            nu: [vec![1.0], vec![1.0]],
            p_case: 0.5,
            hypothesis: Hypothesis::Null,
        }
    }

    #[test]
    fn uniform_edges_give_uniform_table() {
        let table = enumerate_pmf(&uniform(4), None).unwrap();
        assert_eq!(table.entries.len(), 64);
        assert!(table.entries.iter().all(|&p| p == 1.0 / 64.0));
        assert_eq!(exact_cramers_v(&uniform(4)).unwrap(), vec![0.0; 6]);
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            enumerate_pmf(&uniform(6), None),
            Err(Error::TooLargeForEnumeration(6))
        ));
        assert!(enumerate_pmf(&uniform(5), None).is_ok());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1.0, 1e-16, 1e-16, -1.0];
        assert_eq!(compensated_sum(values), 2e-16);
    }

    #[test]
    fn decode_round_trip() {
        assert_eq!(decode_configuration(0b100101, 6), vec![1, 0, 1, 0, 0, 1]);
    }
}
