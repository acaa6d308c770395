//! Shared test helpers: an independent dense-covariance Gaussian oracle
//! for the ARMA likelihood, and seeded data generators.
//!
//! The oracle never touches the Kalman path: autocovariances come from
//! the MA(infinity) psi-weight expansion, the covariance matrix is
//! assembled as a Toeplitz matrix, and the log density is evaluated via
//! Cholesky factorization.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trendsel_core::CountrySeries;

const LN_2PI: f64 = 1.837877066409345483560659472811235279723;

/// Autocovariances gamma(0..=max_lag) of a stationary/invertible
/// ARMA(p,q) with innovation variance `sigma2`, via psi weights.
/// AR polynomial 1 - sum(ar z^i), MA polynomial 1 + sum(ma z^i).
pub fn arma_autocov(ar: &[f64], ma: &[f64], sigma2: f64, max_lag: usize) -> Vec<f64> {
    let p = ar.len();
    let q = ma.len();
    // expand until the weights are negligible
    let mut psi = vec![1.0f64];
    let mut tail_small = 0usize;
    while tail_small < 50 && psi.len() < 1_000_000 {
        let j = psi.len();
        let mut v = if j <= q { ma[j - 1] } else { 0.0 };
        for i in 1..=p.min(j) {
            v += ar[i - 1] * psi[j - i];
        }
        psi.push(v);
        if v.abs() < 1e-18 {
            tail_small += 1;
        } else {
            tail_small = 0;
        }
    }
    let k_len = psi.len();
    (0..=max_lag)
        .map(|k| {
            if k >= k_len {
                return 0.0;
            }
            sigma2 * (0..k_len - k).map(|j| psi[j] * psi[j + k]).sum::<f64>()
        })
        .collect()
}

/// Zero-mean multivariate normal log density of `z` with Toeplitz
/// covariance built from `gamma`.
pub fn mvn_loglik_toeplitz(z: &[f64], gamma: &[f64]) -> f64 {
    let n = z.len();
    assert!(gamma.len() >= n);
    let cov = DMatrix::from_fn(n, n, |i, j| gamma[i.abs_diff(j)]);
    let chol = cov.cholesky().expect("covariance must be positive definite");
    let l = chol.l();
    // solve L w = z by forward substitution
    let mut w = z.to_vec();
    for i in 0..n {
        for j in 0..i {
            w[i] -= l[(i, j)] * w[j];
        }
        w[i] /= l[(i, i)];
    }
    let log_det: f64 = (0..n).map(|i| l[(i, i)].ln()).sum::<f64>() * 2.0;
    let quad: f64 = w.iter().map(|v| v * v).sum();
    -0.5 * (n as f64 * LN_2PI + log_det + quad)
}

/// Dense-covariance oracle for the exact ARMA Gaussian log-likelihood.
pub fn dense_loglik(z: &[f64], ar: &[f64], ma: &[f64], sigma2: f64) -> f64 {
    let gamma = arma_autocov(ar, ma, sigma2, z.len().saturating_sub(1));
    mvn_loglik_toeplitz(z, &gamma)
}

/// Standard normal draw (Box-Muller, deterministic given the RNG state).
pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Simulates a stationary ARMA(p,q) path with unit innovation variance
/// (after a burn-in of 300).
pub fn simulate_arma(ar: &[f64], ma: &[f64], n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let p = ar.len();
    let q = ma.len();
    let burn = 300;
    let mut e = vec![0.0; n + burn];
    for v in e.iter_mut() {
        *v = gauss(rng);
    }
    let mut x = vec![0.0; n + burn];
    for t in 0..n + burn {
        let mut v = e[t];
        for (j, &th) in ma.iter().enumerate() {
            if t > j {
                v += th * e[t - j - 1];
            }
        }
        for (i, &ph) in ar.iter().enumerate() {
            if t > i {
                v += ph * x[t - i - 1];
            }
        }
        let _ = (p, q);
        x[t] = v;
    }
    x[burn..].to_vec()
}

/// Random stationary/invertible ARMA parameters via bounded partial
/// autocorrelations (kept away from the boundary so the truncated
/// psi-weight expansion of the oracle converges comfortably).
pub fn random_arma_params(p: usize, q: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    fn pacf_to_coeffs(pacf: &[f64]) -> Vec<f64> {
        let p = pacf.len();
        let mut phi = vec![0.0; p];
        let mut prev = vec![0.0; p];
        for k in 0..p {
            prev[..k].copy_from_slice(&phi[..k]);
            phi[k] = pacf[k];
            for j in 0..k {
                phi[j] = prev[j] - pacf[k] * prev[k - 1 - j];
            }
        }
        phi
    }
    let draw = |rng: &mut ChaCha8Rng, m: usize| -> Vec<f64> {
        (0..m).map(|_| rng.gen_range(-0.9..0.9)).collect()
    };
    let ar = pacf_to_coeffs(&draw(rng, p));
    let ma: Vec<f64> = pacf_to_coeffs(&draw(rng, q)).iter().map(|c| -c).collect();
    (ar, ma)
}

/// Annual series starting 1960 from precomputed positive levels.
pub fn series_from_levels(id: &str, levels: Vec<f64>) -> CountrySeries {
    let n = levels.len() as i32;
    CountrySeries::new(id, (1960..1960 + n).collect(), levels).unwrap()
}

/// Levels a + b t plus integrated Gaussian noise, clamped positive.
pub fn linear_growth_levels(a: f64, b: f64, noise_sd: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cum = 0.0;
    (0..n)
        .map(|t| {
            cum += noise_sd * gauss(&mut rng);
            (a + b * t as f64 + cum).max(1e-3)
        })
        .collect()
}

/// Levels c (1+rate)^t exp(noise).
pub fn exponential_growth_levels(c: f64, rate: f64, noise_sd: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|t| c * (1.0 + rate).powi(t as i32) * (noise_sd * gauss(&mut rng)).exp())
        .collect()
}
