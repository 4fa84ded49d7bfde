#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netmix::network::{EdgeIndexMap, Group, NetworkObservation};
use netmix::priors::HyperParameters;
use netmix::sampler::{redraw_data, sweep, AugmentedState, ChainData};
use netmix::Result;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Batch-means standard error of the mean of a correlated series.
pub fn batch_means_se(series: &[f64], batches: usize) -> f64 {
    let size = series.len() / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| series[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

/// `p_Y(1)`, the mean of `Z`, and the hypothesis indicator.
pub fn headline_stats(state: &AugmentedState) -> [f64; 3] {
    let p = &state.params;
    [
        p.p_case,
        p.z.iter().sum::<f64>() / p.z.len() as f64,
        if p.hypothesis.is_alternative() { 1.0 } else { 0.0 },
    ]
}

/// Successive-conditional simulation: alternate a fresh draw of `(y, G, a)`
/// given the parameters with one sweep, recording `stats` of the state after
/// every cycle.
pub fn getting_it_right<const K: usize>(
    hyper: &HyperParameters,
    nodes: usize,
    subjects: usize,
    cycles: usize,
    seed: u64,
    stats: impl Fn(&AugmentedState) -> [f64; K],
) -> Result<[Vec<f64>; K]> {
    let map = EdgeIndexMap::new(nodes)?;
    let mut rng = rng(seed);
    let mut data: Vec<NetworkObservation> = (0..subjects)
        .map(|i| NetworkObservation {
            subject_id: format!("s{i}"),
            label: Group::Control,
            edges: vec![0; map.edges()],
        })
        .collect();
    let mut state = {
        let chain = ChainData::with_map(map.clone(), &data)?;
        AugmentedState::from_prior(hyper, &chain, &mut rng)?
    };
    let mut out: [Vec<f64>; K] = std::array::from_fn(|_| Vec::with_capacity(cycles));
    for _ in 0..cycles {
        redraw_data(&mut state, &mut data, &map, &mut rng)?;
        let chain = ChainData::with_map(map.clone(), &data)?;
        sweep(&mut state, &chain, hyper, &mut rng)?;
        for (series, value) in out.iter_mut().zip(stats(&state)) {
            series.push(value);
        }
    }
    Ok(out)
}
