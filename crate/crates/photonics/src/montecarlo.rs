//! Monte-Carlo propagation of plate misalignment and counting noise.

use rand::Rng;
use rand_distr::{Distribution as _, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use ctxdim_core::random::{mix_seed, rng_from_seed};
use ctxdim_core::{Behavior, InequalityFunctional};

use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::noise::{Distribution, NoiseModel};

pub const MIN_SAMPLES: usize = 100;
pub const PERCENTILES: [f64; 5] = [2.5, 16.0, 50.0, 84.0, 97.5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Percentile {
    pub level: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub functional: String,
    pub samples: usize,
    pub seed: u64,
    pub noiseless: f64,
    pub mean: f64,
    /// Sample standard deviation (`n − 1` denominator).
    pub std: f64,
    pub percentiles: Vec<Percentile>,
}

/// Sum by recursive halving over the given order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Linear interpolation between order statistics.
pub fn percentile(sorted: &[f64], level: f64) -> f64 {
    let pos = level / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn draw<R: Rng>(rng: &mut R, sigma: f64, dist: Distribution) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    match dist {
        Distribution::Gaussian => Normal::new(0.0, sigma).expect("finite sigma").sample(rng),
        Distribution::Uniform => rng.random_range(-sigma..=sigma),
    }
}

/// Re-estimate every block `p(·|a,x,y)` from Poisson counts around `n·p(b|a,x,y)`.
fn resample<R: Rng>(behavior: &Behavior, counts: f64, rng: &mut R) -> Result<Behavior> {
    let s = behavior.scenario();
    let mut table = behavior.table().to_vec();
    for x in 0..s.settings_x {
        for y in 0..s.settings_y {
            for a in 0..s.outcomes_a {
                let idx: Vec<usize> = (0..s.outcomes_b).map(|b| s.index(a, b, x, y)).collect();
                let mass: f64 = idx.iter().map(|&i| table[i]).sum();
                if mass <= 0.0 {
                    continue;
                }
                let n: Vec<f64> = idx
                    .iter()
                    .map(|&i| {
                        let lambda = counts * table[i] / mass;
                        if lambda > 0.0 {
                            Poisson::new(lambda).expect("positive rate").sample(rng)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let total: f64 = n.iter().sum();
                if total > 0.0 {
                    for (&i, k) in idx.iter().zip(&n) {
                        table[i] = mass * k / total;
                    }
                }
            }
        }
    }
    Ok(Behavior::raw(s, table)?)
}

/// Functional value of sample `index`; its random stream depends only on `(seed, index)`.
pub fn sample_value(layout: &Layout, functional: &InequalityFunctional, noise: &NoiseModel, seed: u64, index: u64) -> Result<f64> {
    let mut rng = rng_from_seed(mix_seed(seed, index));
    let offsets: Vec<f64> = layout
        .plates()
        .iter()
        .map(|p| draw(&mut rng, noise.sigma(noise.devices.class_of(p.role)), noise.distribution))
        .collect();
    let mut behavior = layout.behavior_with(&offsets)?;
    if noise.poisson {
        behavior = resample(&behavior, noise.counts_per_setting, &mut rng)?;
    }
    Ok(functional.evaluate(&behavior)?)
}

pub fn monte_carlo(layout: &Layout, functional: &InequalityFunctional, noise: &NoiseModel, samples: usize, seed: u64) -> Result<MonteCarloSummary> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples(samples));
    }
    noise.validate()?;
    let noiseless = functional.evaluate(&layout.behavior()?)?;
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|i| sample_value(layout, functional, noise, seed, i))
        .collect::<Result<Vec<f64>>>()?;

    // shifted two-pass moments: identical samples give exactly zero spread
    let n = samples as f64;
    let shifted: Vec<f64> = values.iter().map(|v| v - values[0]).collect();
    let shift_mean = pairwise_sum(&shifted) / n;
    let squares: Vec<f64> = shifted.iter().map(|d| (d - shift_mean).powi(2)).collect();
    let std = (pairwise_sum(&squares) / (n - 1.0)).sqrt();

    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(MonteCarloSummary {
        functional: functional.name().to_string(),
        samples,
        seed,
        noiseless,
        mean: values[0] + shift_mean,
        std,
        percentiles: PERCENTILES.iter().map(|&level| Percentile { level, value: percentile(&sorted, level) }).collect(),
    })
}
