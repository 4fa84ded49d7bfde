//! Posterior predictive classification of networks into groups.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MixtureDensity;
use crate::network::{Group, NetworkObservation};
use crate::numeric::logistic;
use crate::priors::HyperParameters;
use crate::sampler::{data_checksum, run_chain, PosteriorDraws, SamplerConfig};

/// Posterior mean of `Pr(y = 1 | a)` for each network.
///
/// Per draw the probability is `logistic(ln p(1) p(a|1) - ln p(0) p(a|0))`,
/// with the conditional pmfs evaluated in log space.
pub fn classify_many(networks: &[&[u8]], draws: &PosteriorDraws) -> Result<Vec<f64>> {
    let map = draws.map()?;
    if let Some(bad) = networks.iter().find(|a| a.len() != map.edges()) {
        return Err(Error::DimensionMismatch {
            what: "network to classify",
            expected: map.edges(),
            found: bad.len(),
        });
    }
    if draws.draws.is_empty() {
        return Err(Error::EmptyData);
    }
    let per_draw = draws
        .draws
        .par_iter()
        .map(|d| {
            let density = MixtureDensity::new(&d.params, &map)?;
            networks
                .iter()
                .map(|a| {
                    let case = density.joint(Group::Case, a)?;
                    let control = density.joint(Group::Control, a)?;
                    Ok(logistic(case - control))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = per_draw.len() as f64;
    let mut mean = vec![0.0; networks.len()];
    for probs in &per_draw {
        for (m, p) in mean.iter_mut().zip(probs) {
            *m += p;
        }
    }
    Ok(mean.into_iter().map(|m| (m / n).clamp(0.0, 1.0)).collect())
}

pub fn classify(a: &[u8], draws: &PosteriorDraws) -> Result<f64> {
    Ok(classify_many(&[a], draws)?[0])
}

/// Area under the ROC curve by the Mann-Whitney statistic, ties averaged.
pub fn auc(probabilities: &[f64], labels: &[Group]) -> Result<f64> {
    if probabilities.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            what: "labels",
            expected: probabilities.len(),
            found: labels.len(),
        });
    }
    let mut order: Vec<usize> = (0..probabilities.len()).collect();
    order.sort_by(|&a, &b| probabilities[a].total_cmp(&probabilities[b]));
    let mut ranks = vec![0.0; order.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && probabilities[order[end]] == probabilities[order[start]] {
            end += 1;
        }
        // Ranks start + 1 ..= end share their average.
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    let n1 = labels.iter().filter(|&&y| y == Group::Case).count();
    let n0 = labels.len() - n1;
    if n0 == 0 || n1 == 0 {
        return Err(Error::SingleGroup);
    }
    let rank_sum: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y == Group::Case)
        .map(|(r, _)| r)
        .sum();
    let u = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;
    Ok(u / (n0 * n1) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub subject_ids: Vec<String>,
    pub labels: Vec<Group>,
    /// Posterior `Pr(y = 1 | network)`.
    pub probabilities: Vec<f64>,
    /// Predicted group at the 0.5 cutoff.
    pub predicted: Vec<Group>,
    pub auc: f64,
    pub accuracy: f64,
}

impl ClassificationResult {
    pub fn from_probabilities(subjects: &[&NetworkObservation], probabilities: Vec<f64>) -> Result<Self> {
        let labels: Vec<Group> = subjects.iter().map(|o| o.label).collect();
        let predicted: Vec<Group> = probabilities
            .iter()
            .map(|&p| if p > 0.5 { Group::Case } else { Group::Control })
            .collect();
        let correct = predicted.iter().zip(&labels).filter(|(p, y)| p == y).count();
        Ok(Self {
            subject_ids: subjects.iter().map(|o| o.subject_id.clone()).collect(),
            auc: auc(&probabilities, &labels)?,
            accuracy: correct as f64 / labels.len() as f64,
            labels,
            probabilities,
            predicted,
        })
    }
}

/// Which subjects are used for fitting and which are scored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Holdout {
    /// Fit and score every subject.
    InSample,
    /// Fit on `train`, score `test` (indices into the data).
    Split { train: Vec<usize>, test: Vec<usize> },
}

impl Holdout {
    /// Random split putting a quarter of each group in the test set.
    pub fn quarter_split(data: &[NetworkObservation], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut train = Vec::new();
        let mut test = Vec::new();
        for group in Group::BOTH {
            let mut members: Vec<usize> = (0..data.len()).filter(|&i| data[i].label == group).collect();
            members.shuffle(&mut rng);
            let n_test = (members.len() as f64 / 4.0).round() as usize;
            test.extend_from_slice(&members[..n_test]);
            train.extend_from_slice(&members[n_test..]);
        }
        train.sort_unstable();
        test.sort_unstable();
        Holdout::Split { train, test }
    }

    /// The subjects a fit must use.
    pub fn training(&self, data: &[NetworkObservation]) -> Result<Vec<NetworkObservation>> {
        match self {
            Holdout::InSample => Ok(data.to_vec()),
            Holdout::Split { train, test } => {
                check_indices(train, data.len())?;
                check_indices(test, data.len())?;
                Ok(train.iter().map(|&i| data[i].clone()).collect())
            }
        }
    }

    fn scored<'a>(&self, data: &'a [NetworkObservation]) -> Vec<&'a NetworkObservation> {
        match self {
            Holdout::InSample => data.iter().collect(),
            Holdout::Split { test, .. } => test.iter().map(|&i| &data[i]).collect(),
        }
    }
}

fn check_indices(indices: &[usize], len: usize) -> Result<()> {
    match indices.iter().find(|&&i| i >= len) {
        Some(&i) => Err(Error::InvalidTestSetting(format!(
            "subject index {i} out of range for {len} subjects"
        ))),
        None => Ok(()),
    }
}

/// Scores the held-out (or all) subjects with draws fitted to the training
/// subjects. The draws' data checksum must match the training subset.
pub fn evaluate_classifier(
    data: &[NetworkObservation],
    draws: &PosteriorDraws,
    holdout: &Holdout,
) -> Result<ClassificationResult> {
    let training = holdout.training(data)?;
    let checksum = data_checksum(&training);
    if checksum != draws.meta.data_checksum {
        return Err(Error::ChecksumMismatch {
            archive: draws.meta.data_checksum.clone(),
            data: checksum,
        });
    }
    let scored = holdout.scored(data);
    for group in Group::BOTH {
        let in_test = scored.iter().any(|o| o.label == group);
        let in_train = training.iter().any(|o| o.label == group);
        if in_test && !in_train {
            return Err(Error::GroupAbsentFromTraining(group.index() as u8));
        }
    }
    let networks: Vec<&[u8]> = scored.iter().map(|o| o.edges.as_slice()).collect();
    let probabilities = classify_many(&networks, draws)?;
    ClassificationResult::from_probabilities(&scored, probabilities)
}

/// Fits on the training subjects and evaluates.
pub fn fit_and_evaluate(
    data: &[NetworkObservation],
    holdout: &Holdout,
    hyper: &HyperParameters,
    config: &SamplerConfig,
) -> Result<(PosteriorDraws, ClassificationResult)> {
    let training = holdout.training(data)?;
    for group in Group::BOTH {
        if !training.iter().any(|o| o.label == group) {
            return Err(Error::GroupAbsentFromTraining(group.index() as u8));
        }
    }
    let draws = run_chain(&training, hyper, config)?;
    let result = evaluate_classifier(data, &draws, holdout)?;
    Ok((draws, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::tests::{draws_from, single_edge_params};
    use rand::Rng;

    #[test]
    fn equal_weights_return_prior_probability() {
        for p in [0.5, 0.3] {
            let params = single_edge_params(&[0.9, 0.2], vec![0.4, 0.6], vec![0.4, 0.6], p);
            let draws = draws_from(vec![params]);
            for a in [[0u8], [1u8]] {
                assert!((classify(&a, &draws).unwrap() - p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let params = single_edge_params(&[0.9, 0.2], vec![0.4, 0.6], vec![0.4, 0.6], 0.5);
        let draws = draws_from(vec![params]);
        assert!(classify(&[1, 0], &draws).is_err());
    }

    #[test]
    fn auc_cases() {
        use Group::{Case, Control};
        assert_eq!(auc(&[0.1, 0.2, 0.8, 0.9], &[Control, Control, Case, Case]).unwrap(), 1.0);
        assert_eq!(auc(&[0.9, 0.8, 0.2, 0.1], &[Control, Control, Case, Case]).unwrap(), 0.0);
        assert_eq!(auc(&[0.5; 4], &[Control, Case, Control, Case]).unwrap(), 0.5);
        // One tie across groups counts as a half.
        assert_eq!(auc(&[0.1, 0.5, 0.5, 0.9], &[Control, Control, Case, Case]).unwrap(), 0.875);
        assert!(auc(&[0.1, 0.2], &[Case, Case]).is_err());
    }

    #[test]
    fn auc_of_permuted_labels_is_near_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut total = 0.0;
        let reps = 200;
        for _ in 0..reps {
            let probs: Vec<f64> = (0..100).map(|_| rng.random()).collect();
            let mut labels: Vec<Group> = (0..100)
                .map(|i| if i < 50 { Group::Control } else { Group::Case })
                .collect();
            labels.shuffle(&mut rng);
            total += auc(&probs, &labels).unwrap();
        }
        assert!((total / reps as f64 - 0.5).abs() < 0.05);
    }

    #[test]
    fn quarter_split_is_stratified() {
        let data: Vec<NetworkObservation> = (0..20)
            .map(|i| {
                let g = if i < 12 { Group::Control } else { Group::Case };
                NetworkObservation::new(format!("s{i}"), g, vec![0]).unwrap()
            })
            .collect();
        let Holdout::Split { train, test } = Holdout::quarter_split(&data, 3) else {
            panic!("expected a split");
        };
        assert_eq!(test.len(), 5);
        assert_eq!(train.len(), 15);
        assert_eq!(test.iter().filter(|&&i| i < 12).count(), 3);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn group_missing_from_training_is_rejected() {
        let data: Vec<NetworkObservation> = (0..4)
            .map(|i| {
                let g = if i < 3 { Group::Control } else { Group::Case };
                NetworkObservation::new(format!("s{i}"), g, vec![0]).unwrap()
            })
            .collect();
        let holdout = Holdout::Split {
            train: vec![0, 1],
            test: vec![2, 3],
        };
        let hyper = HyperParameters::default();
        let config = SamplerConfig::default();
        assert!(matches!(
            fit_and_evaluate(&data, &holdout, &hyper, &config),
            Err(Error::GroupAbsentFromTraining(1))
        ));
    }
}
