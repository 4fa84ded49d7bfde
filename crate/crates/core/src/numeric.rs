//! Small numerical helpers shared by the model, sampler and tests.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

/// `ln(1 + e^x)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `1 / (1 + e^{-s})`, evaluated on the side that cannot overflow.
#[inline]
pub fn logistic(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// `ln logistic(s)`.
#[inline]
pub fn log_logistic(s: f64) -> f64 {
    -softplus(-s)
}

/// Log-sum-exp over `values`. The terms are accumulated in sorted order so the
/// result does not depend on the order they were supplied in.
pub fn logsumexp(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NEG_INFINITY;
    }
    values.sort_unstable_by(|a, b| b.total_cmp(a));
    let max = values[0];
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Sum of terms in sorted order (order-independent result).
pub fn sorted_sum(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(|a, b| a.total_cmp(b));
    values.iter().sum()
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Normalizes log weights in place into probabilities.
pub fn normalize_log_weights(log_weights: &mut [f64]) {
    let mut scratch = log_weights.to_vec();
    let total = logsumexp(&mut scratch);
    for w in log_weights.iter_mut() {
        *w = (*w - total).exp();
    }
}

/// Draws an index with probability proportional to `weights` (need not sum to one).
pub fn sample_categorical<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut target = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if target < w {
            return i;
        }
        target -= w;
    }
    // Rounding can leave a sliver past the last positive weight.
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Logarithm of a Gamma(shape, 1) variate, accurate for small shapes where the
/// variate itself underflows.
pub fn sample_log_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape >= 1.0 {
        Gamma::new(shape, 1.0)
            .expect("positive shape")
            .sample(rng)
            .ln()
    } else {
        // G(a) = G(a + 1) U^{1/a}
        let boosted = Gamma::new(shape + 1.0, 1.0)
            .expect("positive shape")
            .sample(rng);
        let u: f64 = rng.random::<f64>();
        boosted.ln() + u.max(f64::MIN_POSITIVE).ln() / shape
    }
}

/// Dirichlet draw for arbitrary positive concentrations.
pub fn sample_dirichlet<R: Rng + ?Sized>(alpha: &[f64], rng: &mut R) -> Vec<f64> {
    let mut logs: Vec<f64> = alpha.iter().map(|&a| sample_log_gamma(a, rng)).collect();
    normalize_log_weights(&mut logs);
    let total: f64 = logs.iter().sum();
    logs.iter_mut().for_each(|w| *w /= total);
    logs
}

/// Log density of a Dirichlet with concentrations `alpha` at `x`. Points on the
/// boundary of the simplex are treated as outside the support unless the
/// corresponding concentration is exactly one.
pub fn dirichlet_log_density(x: &[f64], alpha: &[f64]) -> f64 {
    let total: f64 = alpha.iter().sum();
    let mut density = ln_gamma(total);
    for (&xi, &ai) in x.iter().zip(alpha) {
        density -= ln_gamma(ai);
        if xi == 0.0 {
            if ai != 1.0 {
                return f64::NEG_INFINITY;
            }
        } else {
            density += (ai - 1.0) * xi.ln();
        }
    }
    density
}

/// Log marginal likelihood of a label sequence with the given category counts
/// under a symmetric Dirichlet(`conc`) prior on the category probabilities.
pub fn dirichlet_multinomial_log_marginal(counts: &[usize], conc: f64) -> f64 {
    let k = counts.len() as f64;
    let n: usize = counts.iter().sum();
    let mut value = ln_gamma(k * conc) - ln_gamma(k * conc + n as f64);
    for &c in counts {
        value += ln_gamma(conc + c as f64) - ln_gamma(conc);
    }
    value
}

pub fn normal_log_density(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - 0.5 * d * d / var
}

/// Gamma(shape, rate) log density.
pub fn gamma_log_density(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

/// Beta(a, b) log density.
pub fn beta_log_density(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return f64::NEG_INFINITY;
    }
    ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p()
}

/// Log of the standard normal CDF, with an asymptotic tail for very negative inputs.
pub fn log_normal_cdf(x: f64) -> f64 {
    if x < -30.0 {
        let x2 = x * x;
        -0.5 * x2 - (-x).ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
            + (-1.0 / x2 + 2.5 / (x2 * x2)).ln_1p()
    } else {
        (0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logistic_is_stable() {
        assert_eq!(logistic(0.0), 0.5);
        assert!((logistic(3f64.ln()) - 0.75).abs() < 1e-15);
        assert!((1.0 - logistic(50.0)) < 1e-12);
        assert!(logistic(-700.0) > 0.0);
        assert!(logistic(700.0) <= 1.0);
        assert!(log_logistic(-700.0).is_finite());
        assert!((log_logistic(-700.0) + 700.0).abs() < 1e-9);
    }

    #[test]
    fn logsumexp_handles_infinities() {
        assert_eq!(logsumexp(&mut []), f64::NEG_INFINITY);
        assert_eq!(
            logsumexp(&mut [f64::NEG_INFINITY, f64::NEG_INFINITY]),
            f64::NEG_INFINITY
        );
        let v = logsumexp(&mut [0.0, f64::NEG_INFINITY]);
        assert_eq!(v, 0.0);
        let v = logsumexp(&mut [2f64.ln(), 2f64.ln()]);
        assert!((v - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_multinomial_matches_direct_product() {
        // Polya urn probability of the sequence (0, 1, 1) with conc 0.5 and two categories.
        let direct = (0.5 / 1.0) * (0.5 / 2.0) * (1.5 / 3.0);
        let value = dirichlet_multinomial_log_marginal(&[1, 2], 0.5);
        assert!((value - f64::ln(direct)).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_draws_with_tiny_concentration_stay_on_simplex() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let w = sample_dirichlet(&[0.01; 15], &mut rng);
            let total: f64 = w.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|&x| x >= 0.0 && x.is_finite()));
        }
    }

    #[test]
    fn log_normal_cdf_is_continuous_at_the_switch() {
        let a = log_normal_cdf(-30.0 + 1e-9);
        let b = log_normal_cdf(-30.0 - 1e-9);
        assert!((a - b).abs() < 1e-6 * a.abs());
        assert!((log_normal_cdf(0.0) - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn categorical_respects_zero_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            assert_eq!(sample_categorical(&[0.0, 1.0, 0.0], &mut rng), 1);
        }
    }
}
