//! Edge-wise Fisher exact tests with Benjamini-Hochberg control, the
//! frequentist reference for the local test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{common_edge_map, NetworkObservation};
use crate::numeric::ln_gamma;

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Two-sided Fisher exact p-value of the table `[[a, b], [c, d]]`: the total
/// hypergeometric probability of tables with the same margins that are no more
/// likely than the observed one.
pub fn fisher_exact_two_sided(table: [[u64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = table;
    let row1 = a + b;
    let col1 = a + c;
    let n = a + b + c + d;
    let lo = col1.saturating_sub(c + d);
    let hi = row1.min(col1);
    let ln_denominator = ln_choose(n, col1);
    let ln_pmf = |x: u64| ln_choose(row1, x) + ln_choose(n - row1, col1 - x) - ln_denominator;
    let observed = ln_pmf(a);
    // Relative slack so tables tied with the observed one are not lost to rounding.
    let threshold = observed + 1e-7;
    let p: f64 = (lo..=hi)
        .map(ln_pmf)
        .filter(|&lp| lp <= threshold)
        .map(f64::exp)
        .sum();
    p.min(1.0)
}

/// Benjamini-Hochberg step-up rejections at false discovery rate `level`.
pub fn benjamini_hochberg(p_values: &[f64], level: f64) -> Vec<bool> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let cutoff_rank = order
        .iter()
        .enumerate()
        .filter(|(k, &i)| p_values[i] <= (k + 1) as f64 / m as f64 * level)
        .map(|(k, _)| k + 1)
        .max()
        .unwrap_or(0);
    let mut rejected = vec![false; m];
    for &i in &order[..cutoff_rank] {
        rejected[i] = true;
    }
    rejected
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherBaseline {
    pub fdr_level: f64,
    pub p_values: Vec<f64>,
    pub rejected: Vec<bool>,
}

/// Per edge, the Fisher test of group against edge presence, then BH.
pub fn fisher_baseline(data: &[NetworkObservation], fdr_level: f64) -> Result<FisherBaseline> {
    if !(fdr_level > 0.0 && fdr_level < 1.0) {
        return Err(Error::InvalidTestSetting(format!(
            "FDR level must lie in (0, 1), got {fdr_level}"
        )));
    }
    let map = common_edge_map(data)?;
    let mut present = [vec![0u64; map.edges()], vec![0u64; map.edges()]];
    let mut sizes = [0u64; 2];
    for obs in data {
        let y = obs.label.index();
        sizes[y] += 1;
        for (count, &a) in present[y].iter_mut().zip(&obs.edges) {
            *count += u64::from(a);
        }
    }
    let p_values: Vec<f64> = (0..map.edges())
        .map(|l| {
            fisher_exact_two_sided([
                [present[0][l], sizes[0] - present[0][l]],
                [present[1][l], sizes[1] - present[1][l]],
            ])
        })
        .collect();
    let rejected = benjamini_hochberg(&p_values, fdr_level);
    Ok(FisherBaseline {
        fdr_level,
        p_values,
        rejected,
    })
}
