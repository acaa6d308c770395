//! Deterministic data generators shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trendsel_core::CountrySeries;

/// Annual levels `a + b t` plus integrated Gaussian noise, from 1960.
pub fn linear_series(n: usize, seed: u64) -> CountrySeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cum = 0.0;
    let levels: Vec<f64> = (0..n)
        .map(|t| {
            cum += 2.0 * gauss(&mut rng);
            (100.0 + 5.0 * t as f64 + cum).max(1e-3)
        })
        .collect();
    CountrySeries::new("bench", (1960..1960 + n as i32).collect(), levels).unwrap()
}

/// A stationary ARMA(1,1) draw with unit innovation variance.
pub fn arma11_draw(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (phi, theta) = (0.6, 0.3);
    let burn = 200;
    let mut prev_x = 0.0;
    let mut prev_e = 0.0;
    let mut out = Vec::with_capacity(n);
    for t in 0..n + burn {
        let e = gauss(&mut rng);
        let x = phi * prev_x + e + theta * prev_e;
        prev_x = x;
        prev_e = e;
        if t >= burn {
            out.push(x);
        }
    }
    out
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
