//! Growth-rate grid, trend regressors, and the R² comparison between the
//! best exponential curve fit over the grid and the linear fit.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::dataio::CountrySeries;

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("bad grid config: need n_points >= 2 and max_rate > 0")]
    BadGridConfig,
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("response has zero variance")]
    ZeroVariance,
}

/// Ordered candidate growth rates, starting at exactly 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthGrid {
    rates: Vec<f64>,
}

impl GrowthGrid {
    /// The 50-point grid from 0 to 0.06.
    pub fn default_grid() -> Self {
        build_grid(50, 0.06).unwrap()
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Grid spacing (between the first two points).
    pub fn step(&self) -> f64 {
        self.rates[1] - self.rates[0]
    }
}

/// `n_points` equally spaced rates from 0 to `max_rate` inclusive.
pub fn build_grid(n_points: usize, max_rate: f64) -> Result<GrowthGrid, GrowthError> {
    if n_points < 2 || !(max_rate > 0.0) {
        return Err(GrowthError::BadGridConfig);
    }
    let rates = (0..n_points)
        .map(|k| k as f64 * max_rate / (n_points - 1) as f64)
        .collect();
    Ok(GrowthGrid { rates })
}

/// Exponential trend regressor (1+rate)^t for t = 0..n-1.
pub fn exp_regressor(rate: f64, n: usize) -> Vec<f64> {
    assert!(n >= 1 && rate >= 0.0);
    let base = 1.0 + rate;
    (0..n).map(|t| base.powi(t as i32)).collect()
}

/// Ordinary least squares R² = 1 - SSR/SST with SST centered about the
/// mean of y. The caller supplies all columns including the intercept.
pub fn ols_r2(y: &[f64], x_cols: &[Vec<f64>]) -> Result<f64, GrowthError> {
    let n = y.len();
    let m = x_cols.len();
    assert!(x_cols.iter().all(|c| c.len() == n), "column length mismatch");
    assert!(n >= m + 1, "need more rows than columns");

    let x = DMatrix::from_fn(n, m, |i, j| x_cols[j][i]);
    let yv = DMatrix::from_fn(n, 1, |i, _| y[i]);
    let svd = x.svd(true, true);
    let smax = svd.singular_values.max();
    let eps = smax * 1e-10 * n.max(m) as f64;
    if svd.rank(eps) < m {
        return Err(GrowthError::RankDeficient);
    }
    let beta = svd.solve(&yv, eps).map_err(|_| GrowthError::RankDeficient)?;

    let mean = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if sst <= 0.0 {
        return Err(GrowthError::ZeroVariance);
    }
    let mut ssr = 0.0;
    for i in 0..n {
        let mut fit = 0.0;
        for j in 0..m {
            fit += x_cols[j][i] * beta[(j, 0)];
        }
        ssr += (y[i] - fit).powi(2);
    }
    Ok(1.0 - ssr / sst)
}

/// Best exponential R² over the grid vs. the linear fit.
#[derive(Debug, Clone, PartialEq)]
pub struct R2Comparison {
    pub id: String,
    /// best exponential R² over the nonzero grid rates
    pub r2_exp: f64,
    /// arg max rate (ties go to the smaller rate)
    pub best_rate: f64,
    pub r2_lin: f64,
    /// r2_lin - r2_exp; positive prefers the linear fit
    pub diff: f64,
}

/// Linear fit regresses levels on [1, t]; for each nonzero grid rate the
/// exponential fit regresses levels on [1, (1+r)^t]. Both fits carry an
/// intercept so each has two free coefficients. The zero rate is skipped
/// in the exponential sweep (its regressor is collinear with the
/// intercept; the linear fit is its representative).
pub fn compare_fits(series: &CountrySeries, grid: &GrowthGrid) -> Result<R2Comparison, GrowthError> {
    let y = series.values();
    let n = y.len();
    let intercept = vec![1.0; n];
    let t: Vec<f64> = (0..n).map(|i| i as f64).collect();

    let r2_lin = ols_r2(y, &[intercept.clone(), t])?;

    let mut best: Option<(f64, f64)> = None; // (r2, rate)
    for &rate in grid.rates() {
        if rate <= 0.0 {
            continue;
        }
        let r2 = ols_r2(y, &[intercept.clone(), exp_regressor(rate, n)])?;
        match best {
            Some((b, _)) if r2 <= b => {}
            _ => best = Some((r2, rate)),
        }
    }
    let (r2_exp, best_rate) = best.ok_or(GrowthError::BadGridConfig)?;

    Ok(R2Comparison {
        id: series.id().to_string(),
        r2_exp,
        best_rate,
        r2_lin,
        diff: r2_lin - r2_exp,
    })
}
