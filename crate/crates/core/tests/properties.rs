mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use netmix::io::archive::{decode_archive, encode_archive};
use netmix::io::dataset::{load_dataset, write_dataset, NetworkFormat};
use netmix::model::{
    conditional_log_pmf, marginal_log_pmf, sample_cohort, ComponentFactors, MixtureParameters,
};
use netmix::network::{EdgeIndexMap, Group, NetworkObservation};
use netmix::oracle::{decode_configuration, enumerate_pmf, exact_cramers_v};
use netmix::priors::{sample_prior, HyperParameters};
use netmix::sampler::{run_chain, SamplerConfig};
use netmix::testing::{cramers_v, TestReport};

fn small_hyper(components: usize, rank: usize) -> HyperParameters {
    HyperParameters {
        components,
        rank,
        ..HyperParameters::default()
    }
}

fn prior_params(nodes: usize, seed: u64) -> MixtureParameters {
    let map = EdgeIndexMap::new(nodes).unwrap();
    sample_prior(&small_hyper(3, 2), &map, &mut common::rng(seed))
        .unwrap()
        .params
}

fn edge_of(map: &EdgeIndexMap, a: usize, b: usize) -> usize {
    map.edge_index(a.max(b), a.min(b)).unwrap()
}

/// The same model with node `v` renamed `perm[v]`.
fn relabel_nodes(params: &MixtureParameters, perm: &[usize]) -> MixtureParameters {
    let map = EdgeIndexMap::new(params.nodes).unwrap();
    let mut out = params.clone();
    for (l, (v, u)) in map.pairs().enumerate() {
        out.z[edge_of(&map, perm[v], perm[u])] = params.z[l];
    }
    out.components = params
        .components
        .iter()
        .map(|c| {
            let mut coords = vec![0.0; params.nodes * params.rank];
            for v in 0..params.nodes {
                coords[perm[v] * params.rank..(perm[v] + 1) * params.rank].copy_from_slice(c.row(v));
            }
            ComponentFactors::new(params.nodes, params.rank, coords, c.lambda().to_vec()).unwrap()
        })
        .collect();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pmf_matches_enumeration(seed in any::<u64>(), nodes in 2usize..6) {
        let params = prior_params(nodes, seed);
        let map = EdgeIndexMap::new(nodes).unwrap();
        let marginal = enumerate_pmf(&params, None).unwrap();
        prop_assert!((marginal.total() - 1.0).abs() < 1e-10);
        for group in Group::BOTH {
            let table = enumerate_pmf(&params, Some(group)).unwrap();
            for (code, &p) in table.entries.iter().enumerate() {
                let a = decode_configuration(code, map.edges());
                let direct = conditional_log_pmf(&a, &params, group, &map).unwrap().exp();
                prop_assert!((direct - p).abs() < 1e-10, "{direct} vs {p}");
            }
        }
        for (code, &p) in marginal.entries.iter().enumerate() {
            let a = decode_configuration(code, map.edges());
            prop_assert!((marginal_log_pmf(&a, &params, &map).unwrap().exp() - p).abs() < 1e-10);
        }
    }

    #[test]
    fn cramers_v_matches_enumeration(seed in any::<u64>(), nodes in 2usize..6) {
        let params = prior_params(nodes, seed);
        let map = EdgeIndexMap::new(nodes).unwrap();
        let closed = cramers_v(&params, &map).unwrap();
        let exact = exact_cramers_v(&params).unwrap();
        for (c, e) in closed.iter().zip(&exact) {
            prop_assert!((c - e).abs() < 1e-10, "{c} vs {e}");
        }
    }

    #[test]
    fn cramers_v_follows_node_relabeling(seed in any::<u64>(), nodes in 2usize..9) {
        let params = prior_params(nodes, seed);
        let map = EdgeIndexMap::new(nodes).unwrap();
        let mut perm: Vec<usize> = (0..nodes).collect();
        perm.shuffle(&mut common::rng(seed ^ 0x5eed));
        let moved = relabel_nodes(&params, &perm);
        let before = cramers_v(&params, &map).unwrap();
        let after = cramers_v(&moved, &map).unwrap();
        for (l, (v, u)) in map.pairs().enumerate() {
            let m = edge_of(&map, perm[v], perm[u]);
            prop_assert!((before[l] - after[m]).abs() < 1e-12);
        }
    }

    #[test]
    fn cramers_v_ignores_component_order(seed in any::<u64>(), nodes in 2usize..9) {
        let params = prior_params(nodes, seed);
        let map = EdgeIndexMap::new(nodes).unwrap();
        let mut perm: Vec<usize> = (0..params.n_components()).collect();
        perm.shuffle(&mut common::rng(seed.wrapping_add(1)));
        let before = cramers_v(&params, &map).unwrap();
        let after = cramers_v(&params.permute_components(&perm), &map).unwrap();
        for (b, a) in before.iter().zip(&after) {
            prop_assert!((b - a).abs() < 1e-12);
        }
    }
}

fn short_config(seed: u64) -> SamplerConfig {
    SamplerConfig {
        n_iter: 60,
        burn_in: 20,
        thin: 2,
        seed,
        record_pi: false,
    }
}

fn cohort(nodes: usize, sizes: [usize; 2], seed: u64) -> Vec<NetworkObservation> {
    let map = EdgeIndexMap::new(nodes).unwrap();
    let hyper = small_hyper(3, 2);
    let mut rng = common::rng(seed);
    let params = sample_prior(&hyper, &map, &mut rng).unwrap().params;
    sample_cohort(&params, &map, sizes[0], sizes[1], &mut rng).unwrap()
}

#[test]
fn archive_round_trip_keeps_statistics_bit_identical() {
    let data = cohort(7, [12, 10], 31);
    let draws = run_chain(&data, &small_hyper(3, 2), &short_config(4)).unwrap();
    let decoded = decode_archive(&encode_archive(&draws).unwrap()).unwrap();
    assert_eq!(decoded, draws);
    let before = TestReport::from_draws(&draws, 0.1, 0.95).unwrap();
    let after = TestReport::from_draws(&decoded, 0.1, 0.95).unwrap();
    assert_eq!(before.pr_h1.to_bits(), after.pr_h1.to_bits());
    for (b, a) in before.rho_exceed.iter().zip(&after.rho_exceed) {
        assert_eq!(b.to_bits(), a.to_bits());
    }
    for (b, a) in before.edge_diff.iter().zip(&after.edge_diff) {
        assert_eq!(b.to_bits(), a.to_bits());
    }
}

#[test]
fn simulated_dataset_loads_back() {
    let data = cohort(6, [5, 4], 8);
    for format in [NetworkFormat::AdjacencyCsv, NetworkFormat::EdgeList] {
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_dataset(dir.path(), &data, format, None).unwrap();
        let loaded = load_dataset(&manifest).unwrap();
        assert_eq!(loaded.map.nodes(), 6);
        assert_eq!(loaded.observations, data);
    }
}
