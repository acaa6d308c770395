//! Exact Gaussian maximum likelihood for ARMA(p,q) with exogenous
//! regressors on a once-differenced series.
//!
//! Stationarity/invertibility is enforced by optimizing in an
//! unconstrained parameterization ([`constrain`]); the innovation
//! variance is concentrated out of the likelihood; regression
//! coefficients sit inside the optimizer vector (joint MLE).

mod constrain;
pub(crate) mod kalman;

pub use constrain::constrain;
pub use kalman::kalman_loglik;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::optim::nelder_mead;

#[derive(Debug, Error)]
pub enum ArimaError {
    #[error("series too short to difference")]
    TooShort,
    #[error("AR/MA parameters outside the stationary/invertible region")]
    NonStationaryParams,
    #[error("numerical breakdown in likelihood evaluation")]
    NumericalBreakdown,
    #[error("insufficient data: {n} observations for {k} free parameters")]
    InsufficientData { n: usize, k: usize },
    #[error("regression design is rank deficient")]
    DegenerateDesign,
    #[error("unknown coefficient `{0}`")]
    UnknownCoefficient(String),
    #[error("Hessian of the log-likelihood is singular at the optimum")]
    SingularHessian,
}

/// ARIMA order with the differencing degree fixed at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArimaOrder {
    pub p: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub const D: usize = 1;

    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }
}

impl std::fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},1,{})", self.p, self.q)
    }
}

/// Named regressor columns aligned to the differenced series.
#[derive(Debug, Clone, Default)]
pub struct RegressionDesign {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl RegressionDesign {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a column; all columns must share one length.
    pub fn push(&mut self, name: impl Into<String>, column: Vec<f64>) {
        if let Some(first) = self.columns.first() {
            assert_eq!(column.len(), first.len(), "regressor column length mismatch");
        }
        self.names.push(name.into());
        self.columns.push(column);
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }
}

/// Fitted ARMA + regression model on a differenced series.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub order: ArimaOrder,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub beta: Vec<f64>,
    pub beta_names: Vec<String>,
    /// innovation variance (concentrated MLE)
    pub sigma2: f64,
    /// maximized exact Gaussian log-likelihood
    pub loglik: f64,
    /// effective observations (length of the differenced series)
    pub n_obs: usize,
    /// p + q + len(beta) + 1; the +1 counts sigma2
    pub k_params: usize,
    pub converged: bool,
    /// smallest AR root modulus; +inf when p = 0
    pub ar_root_min_modulus: f64,
}

impl FitResult {
    pub fn beta_named(&self, name: &str) -> Option<f64> {
        self.beta_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.beta[i])
    }
}

/// First differences: out[i] = values[i+1] - values[i].
pub fn difference(values: &[f64]) -> Result<Vec<f64>, ArimaError> {
    if values.len() < 2 {
        return Err(ArimaError::TooShort);
    }
    Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Regressor-adjusted series z = dz - X beta.
fn adjust(dz: &[f64], design: &RegressionDesign, beta: &[f64]) -> Vec<f64> {
    let mut z = dz.to_vec();
    for (col, &b) in design.columns().iter().zip(beta) {
        for (zi, &xi) in z.iter_mut().zip(col) {
            *zi -= b * xi;
        }
    }
    z
}

/// Negative concentrated log-likelihood at natural parameters, +inf
/// outside the valid region.
fn neg_loglik_natural(dz: &[f64], design: &RegressionDesign, ar: &[f64], ma: &[f64], beta: &[f64]) -> f64 {
    if !kalman::is_stationary(ar) || !kalman::is_invertible(ma) {
        return f64::INFINITY;
    }
    let z = adjust(dz, design, beta);
    match kalman::concentrated_loglik(ar, ma, &z) {
        Ok((ll, _)) => -ll,
        Err(_) => f64::INFINITY,
    }
}

/// OLS solve of dz on the design, used to seed the optimizer and to
/// rank-check the design.
fn ols_start(dz: &[f64], design: &RegressionDesign) -> Result<Vec<f64>, ArimaError> {
    let m = design.n_cols();
    if m == 0 {
        return Ok(Vec::new());
    }
    let n = dz.len();
    let x = DMatrix::from_fn(n, m, |i, j| design.columns()[j][i]);
    let y = DMatrix::from_fn(n, 1, |i, _| dz[i]);
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = smax * 1e-10 * n.max(m) as f64;
    if svd.rank(eps) < m {
        return Err(ArimaError::DegenerateDesign);
    }
    let sol = svd.solve(&y, eps).map_err(|_| ArimaError::DegenerateDesign)?;
    Ok((0..m).map(|j| sol[(j, 0)]).collect())
}

/// Maximizes the exact Gaussian likelihood of an ARMA(p,q)+regression
/// model on the differenced series `dz`, jointly over the constrained
/// AR/MA parameters and the regression coefficients, with sigma2
/// concentrated out. Multi-start Nelder-Mead: the base start (zero in the
/// unconstrained ARMA coordinates, OLS for the regression block) plus
/// four seeded perturbations. Hitting the iteration budget yields
/// `converged = false`, never an error.
pub fn fit(
    dz: &[f64],
    design: &RegressionDesign,
    order: ArimaOrder,
    seed: u64,
) -> Result<FitResult, ArimaError> {
    let (p, q) = (order.p, order.q);
    let m = design.n_cols();
    let n = dz.len();
    if m > 0 {
        assert_eq!(design.n_rows(), n, "design rows must match differenced length");
    }
    if n < p + q + m + 2 {
        return Err(ArimaError::InsufficientData { n, k: p + q + m });
    }

    let beta_ols = ols_start(dz, design)?;
    let dim = p + q + m;

    let scale = {
        let mean = dz.iter().sum::<f64>() / n as f64;
        let var = dz.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        var.sqrt().max(1e-8)
    };

    let mut base = vec![0.0; dim];
    base[p + q..].copy_from_slice(&beta_ols);

    let mut starts = vec![base.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let mut s = base.clone();
        for v in s.iter_mut().take(p + q) {
            *v += rng.gen_range(-1.0..1.0);
        }
        for v in s.iter_mut().skip(p + q) {
            *v += rng.gen_range(-1.0..1.0) * (0.25 * v.abs() + 0.05 * scale);
        }
        starts.push(s);
    }

    let mut steps = vec![0.25; dim];
    for (st, &b) in steps[p + q..].iter_mut().zip(&beta_ols) {
        *st = 0.1 * b.abs().max(0.1 * scale);
    }

    let objective = |v: &[f64]| -> f64 {
        let (ar, ma) = constrain(&v[..p + q], p, q);
        neg_loglik_natural(dz, design, &ar, &ma, &v[p + q..])
    };

    let max_iter = 200 * dim.max(1);
    let mut best: Option<crate::optim::NmResult> = None;
    for s in &starts {
        let r = nelder_mead(objective, s, &steps, 1e-8, max_iter);
        if best.as_ref().map_or(true, |b| r.fx < b.fx) {
            best = Some(r);
        }
    }
    let best = best.unwrap();
    if !best.fx.is_finite() {
        return Err(ArimaError::NumericalBreakdown);
    }

    let (ar, ma) = constrain(&best.x[..p + q], p, q);
    let beta = best.x[p + q..].to_vec();
    let z = adjust(dz, design, &beta);
    let (loglik, sigma2) = kalman::concentrated_loglik(&ar, &ma, &z)?;

    Ok(FitResult {
        order,
        ar_root_min_modulus: kalman::min_root_modulus(&ar),
        ar,
        ma,
        beta,
        beta_names: design.names().to_vec(),
        sigma2,
        loglik,
        n_obs: n,
        k_params: p + q + m + 1,
        converged: best.converged,
    })
}

/// Coefficient divided by its standard error, from the inverse numerical
/// Hessian of the negative (profile) log-likelihood at the optimum.
pub fn t_ratio(
    dz: &[f64],
    design: &RegressionDesign,
    fit: &FitResult,
    coef_name: &str,
) -> Result<f64, ArimaError> {
    let j = fit
        .beta_names
        .iter()
        .position(|n| n == coef_name)
        .ok_or_else(|| ArimaError::UnknownCoefficient(coef_name.to_string()))?;
    let (p, q) = (fit.order.p, fit.order.q);
    let dim = p + q + fit.beta.len();

    let mut x0 = Vec::with_capacity(dim);
    x0.extend_from_slice(&fit.ar);
    x0.extend_from_slice(&fit.ma);
    x0.extend_from_slice(&fit.beta);

    let f = |v: &[f64]| -> f64 { neg_loglik_natural(dz, design, &v[..p], &v[p..p + q], &v[p + q..]) };

    let h: Vec<f64> = x0.iter().map(|v| 1e-4 * (1.0 + v.abs())).collect();
    let f0 = f(&x0);
    if !f0.is_finite() {
        return Err(ArimaError::SingularHessian);
    }

    let mut hess = DMatrix::zeros(dim, dim);
    let eval = |v: &[f64]| -> Result<f64, ArimaError> {
        let y = f(v);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(ArimaError::SingularHessian)
        }
    };
    for i in 0..dim {
        for k in i..dim {
            let val = if i == k {
                let mut a = x0.clone();
                a[i] += h[i];
                let mut b = x0.clone();
                b[i] -= h[i];
                (eval(&a)? - 2.0 * f0 + eval(&b)?) / (h[i] * h[i])
            } else {
                let mut pp = x0.clone();
                pp[i] += h[i];
                pp[k] += h[k];
                let mut pm = x0.clone();
                pm[i] += h[i];
                pm[k] -= h[k];
                let mut mp = x0.clone();
                mp[i] -= h[i];
                mp[k] += h[k];
                let mut mm = x0.clone();
                mm[i] -= h[i];
                mm[k] -= h[k];
                (eval(&pp)? - eval(&pm)? - eval(&mp)? + eval(&mm)?) / (4.0 * h[i] * h[k])
            };
            hess[(i, k)] = val;
            hess[(k, i)] = val;
        }
    }

    let inv = hess.try_inverse().ok_or(ArimaError::SingularHessian)?;
    let var = inv[(p + q + j, p + q + j)];
    if !(var.is_finite() && var > 0.0) {
        return Err(ArimaError::SingularHessian);
    }
    Ok(fit.beta[j] / var.sqrt())
}
