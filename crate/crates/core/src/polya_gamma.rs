//! Exact sampler for the Polya-Gamma `PG(1, c)` distribution.
//!
//! Draws `J*(1, |c|/2)` by the alternating-series accept/reject method of
//! Devroye, with a truncated exponential proposal right of `t = 0.64` and a
//! truncated inverse Gaussian to the left, then returns `J*/4`. No series
//! truncation is involved: the partial sums bound the target density exactly.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::numeric::log_normal_cdf;

const TRUNC: f64 = 0.64;

/// `PG(1, c)` as a [`Distribution`], with the proposal constants for the tilt
/// computed once.
#[derive(Debug, Clone, Copy)]
pub struct PolyaGamma {
    z: f64,
    k: f64,
    right_mass: f64,
}

impl PolyaGamma {
    pub fn new(tilt: f64) -> Self {
        debug_assert!(tilt.is_finite());
        let z = 0.5 * tilt.abs();
        let k = PI * PI / 8.0 + 0.5 * z * z;
        let right_mass = 1.0 / (1.0 + proposal_mass_ratio(z, k));
        Self { z, k, right_mass }
    }
}

impl Distribution<f64> for PolyaGamma {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (z, k) = (self.z, self.k);
        loop {
            let x = if rng.random::<f64>() < self.right_mass {
                TRUNC + rng.sample::<f64, _>(Exp1) / k
            } else {
                truncated_inverse_gaussian(z, rng)
            };

            let mut s = series_coefficient(0, x);
            let y = rng.random::<f64>() * s;
            let mut n = 0;
            loop {
                n += 1;
                if n % 2 == 1 {
                    s -= series_coefficient(n, x);
                    if y <= s {
                        return 0.25 * x;
                    }
                } else {
                    s += series_coefficient(n, x);
                    if y > s {
                        break;
                    }
                }
            }
        }
    }
}

/// `E[PG(1, c)] = tanh(c/2) / (2c)`, with limit `1/4` at zero.
pub fn polya_gamma_mean(c: f64) -> f64 {
    if c.abs() < 1e-6 {
        0.25 - c * c / 48.0
    } else {
        (0.5 * c).tanh() / (2.0 * c)
    }
}

/// One draw from `PG(1, c)`.
pub fn polya_gamma_draw<R: Rng + ?Sized>(c: f64, rng: &mut R) -> f64 {
    PolyaGamma::new(c).sample(rng)
}

/// Ratio of the inverse-Gaussian proposal mass to the exponential proposal mass.
fn proposal_mass_ratio(z: f64, k: f64) -> f64 {
    let root = (1.0 / TRUNC).sqrt();
    let b = root * (TRUNC * z - 1.0);
    let a = -root * (TRUNC * z + 1.0);
    let x0 = k.ln() + k * TRUNC;
    let xb = x0 - z + log_normal_cdf(b);
    let xa = x0 + z + log_normal_cdf(a);
    4.0 / PI * (xb.exp() + xa.exp())
}

/// Piecewise coefficients of the alternating series for the `J*(1)` density.
fn series_coefficient(n: u32, x: f64) -> f64 {
    let k = (n as f64 + 0.5) * PI;
    if x > TRUNC {
        k * (-0.5 * k * k * x).exp()
    } else if x > 0.0 {
        let h = n as f64 + 0.5;
        let expnt = -1.5 * ((0.5 * PI).ln() + x.ln()) + k.ln() - 2.0 * h * h / x;
        expnt.exp()
    } else {
        0.0
    }
}

/// Inverse Gaussian with mean `1/z` and shape 1, truncated to `(0, TRUNC)`.
fn truncated_inverse_gaussian<R: Rng + ?Sized>(z: f64, rng: &mut R) -> f64 {
    if z < 1.0 / TRUNC {
        // Mean beyond the truncation point: propose from the truncated Lévy
        // (inverse chi-square) and accept with the exponential tilt.
        loop {
            let x = loop {
                let e1: f64 = rng.sample(Exp1);
                let e2: f64 = rng.sample(Exp1);
                if e1 * e1 <= 2.0 * e2 / TRUNC {
                    let d = 1.0 + e1 * TRUNC;
                    break TRUNC / (d * d);
                }
            };
            let alpha = (-0.5 * z * z * x).exp();
            if rng.random::<f64>() <= alpha {
                return x;
            }
        }
    } else {
        let mu = 1.0 / z;
        loop {
            let n: f64 = rng.sample(StandardNormal);
            let y = n * n;
            let mu_y = mu * y;
            let mut x = mu + 0.5 * mu * mu_y - 0.5 * mu * (4.0 * mu_y + mu_y * mu_y).sqrt();
            if rng.random::<f64>() > mu / (mu + x) {
                x = mu * mu / x;
            }
            if x < TRUNC {
                return x;
            }
        }
    }
}
